#pragma once

#include <random>
#include <vector>

#include "pomsem/corpus.hpp"
#include "pomsem/domains.hpp"
#include "pomsem/linearize.hpp"

namespace pomsem::testing {

inline int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

struct Universe {
  std::vector<std::string> vars;
  Interp interp;
  std::vector<State> states;
};

/// 1 to 3 variables, vmax 1 or 2.
inline Universe random_universe(std::mt19937_64& rng) {
  static const std::vector<std::string> names{"x", "y", "z"};
  Universe u;
  u.vars.assign(names.begin(), names.begin() + uniform(rng, 1, 3));
  u.interp.vmax = uniform(rng, 1, 2);
  u.states = all_states(u.vars, u.interp);
  return u;
}

inline StateSet random_state_set(std::mt19937_64& rng, const Universe& u) {
  StateSet out;
  for (const State& s : u.states) {
    if (uniform(rng, 0, 2) == 0) out.insert(s);
  }
  return out;
}

/// Support of at most `max_support` lifted states, integer weights up to 6
/// normalized.
inline Dist random_dist(std::mt19937_64& rng, const Universe& u, int max_support = 3) {
  std::vector<Lifted> support;
  const int k = uniform(rng, 1, max_support);
  for (int i = 0; i < k; ++i) {
    const int pick = uniform(rng, -1, static_cast<int>(u.states.size()) - 1);
    support.push_back(pick < 0 ? Lifted() : Lifted(u.states[pick]));
  }
  std::vector<int> w;
  int total = 0;
  for (std::size_t i = 0; i < support.size(); ++i) total += w.emplace_back(uniform(rng, 1, 6));
  Dist d;
  for (std::size_t i = 0; i < support.size(); ++i) d[support[i]] += mpq_class(w[i], total);
  for (auto& [x, p] : d) p.canonicalize();
  return d;
}

inline ConvexSet random_convex_set(std::mt19937_64& rng, const Universe& u, int max_generators = 4,
                                   int max_support = 3) {
  std::vector<Dist> gens;
  const int k = uniform(rng, 1, max_generators);
  for (int i = 0; i < k; ++i) gens.push_back(random_dist(rng, u, max_support));
  return reduce(gens);
}

inline bool sums_to_one(const ConvexSet& c) {
  for (const Dist& d : c.generators) {
    mpq_class total = 0;
    for (const auto& [x, p] : d) {
      if (p <= 0) return false;
      total += p;
    }
    if (total != 1) return false;
  }
  return !c.generators.empty();
}

inline Lpof denote_text(const std::string& source, std::size_t depth = 1) {
  NodeSupply supply;
  return denote_lpof(parse_program(source), depth, supply);
}

/// A comparable pair alpha <= beta: beta is the pomset semantics of a random
/// program, alpha a truncation of it.
struct LpofPair {
  CmdPtr program;
  Lpof alpha, beta;
};

inline LpofPair random_pair(std::mt19937_64& rng, const CorpusOptions& opts) {
  for (;;) {
    CmdPtr c = random_program(rng, opts);
    NodeSupply supply;
    Lpof beta = denote_lpof(c, uniform(rng, 1, 2), supply);
    if (beta.max_level() == 0) continue;
    const auto k = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(beta.max_level())));
    Lpof alpha = truncate(beta, k);
    return {c, alpha, beta};
  }
}

}  // namespace pomsem::testing
