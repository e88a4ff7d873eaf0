#include "pomsem/domains.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "pomsem/lp.hpp"

namespace pomsem {

Dist point_mass(const Lifted& x) { return {{x, mpq_class(1)}}; }

std::string lifted_to_string(const Lifted& x) { return x ? state_to_string(*x) : "bot"; }

namespace {

std::vector<std::string> keys_of(const State& s) {
  std::vector<std::string> out;
  for (const auto& [k, v] : s) out.push_back(k);
  return out;
}

void check_dimensions(const ConvexSet& s, const ConvexSet& t) {
  std::optional<std::vector<std::string>> keys;
  for (const ConvexSet* set : {&s, &t}) {
    for (const Dist& g : set->generators) {
      for (const auto& [x, p] : g) {
        if (!x) continue;
        auto k = keys_of(*x);
        if (!keys) keys = std::move(k);
        else if (*keys != k) throw DimensionMismatch("distributions range over different variable sets");
      }
    }
  }
}

// Is g in the upward closure of conv(ts)?
bool dominated(const Dist& g, const std::vector<const Dist*>& ts) {
  // A candidate putting mass on a proper state outside supp(g) must get weight 0.
  std::vector<const Dist*> cand;
  for (const Dist* t : ts) {
    bool inside = true;
    bool below = true;
    for (const auto& [x, p] : *t) {
      if (!x) continue;
      auto it = g.find(x);
      if (it == g.end()) {
        inside = false;
        break;
      }
      if (p > it->second) below = false;
    }
    if (!inside) continue;
    if (below) return true;
    cand.push_back(t);
  }
  if (cand.empty()) return false;
  std::vector<Lifted> rows;
  for (const auto& [x, p] : g) {
    if (x) rows.push_back(x);
  }
  // Variables: one weight per candidate, one slack per proper state.
  const std::size_t k = cand.size(), r = rows.size();
  std::vector<std::vector<mpq_class>> a(r + 1, std::vector<mpq_class>(k + r, 0));
  std::vector<mpq_class> b(r + 1, 0);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      auto it = cand[j]->find(rows[i]);
      if (it != cand[j]->end()) a[i][j] = it->second;
    }
    a[i][k + i] = 1;
    b[i] = g.at(rows[i]);
  }
  for (std::size_t j = 0; j < k; ++j) a[r][j] = 1;
  b[r] = 1;
  return lp_feasible(a, b);
}

}  // namespace

bool hull_leq(const ConvexSet& s, const ConvexSet& t) {
  check_dimensions(s, t);
  std::vector<const Dist*> ts;
  for (const Dist& d : t.generators) ts.push_back(&d);
  return std::all_of(s.generators.begin(), s.generators.end(), [&](const Dist& g) { return dominated(g, ts); });
}

bool hull_equal(const ConvexSet& s, const ConvexSet& t) {
  if (s == t) {
    check_dimensions(s, t);
    return true;
  }
  return hull_leq(s, t) && hull_leq(t, s);
}

ConvexSet reduce(std::vector<Dist> generators) {
  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
  check_dimensions({generators}, {});
  std::vector<bool> keep(generators.size(), true);
  for (std::size_t i = 0; i < generators.size(); ++i) {
    std::vector<const Dist*> others;
    for (std::size_t j = 0; j < generators.size(); ++j) {
      if (j != i && keep[j]) others.push_back(&generators[j]);
    }
    if (dominated(generators[i], others)) keep[i] = false;
  }
  ConvexSet out;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (keep[i]) out.generators.push_back(std::move(generators[i]));
  }
  return out;
}

std::vector<State> all_states(const std::vector<std::string>& vars, const Interp& interp) {
  std::vector<State> out{State{}};
  for (const auto& v : vars) {
    std::vector<State> next;
    for (const State& s : out) {
      for (int value = 0; value <= interp.vmax; ++value) {
        State t = s;
        t[v] = value;
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- Hoare -------------------------------------------------------------------

HoareDomain::Value HoareDomain::nd(const Value& a, const Value& b) {
  Value out = a;
  out.insert(b.begin(), b.end());
  return out;
}

HoareDomain::Value HoareDomain::action(const ActionTerm& a, const State& s, const Interp& interp) {
  switch (a.kind()) {
    case ActionTerm::Kind::Assign: return {assign_var(s, a.var(), a.expr().eval(s), interp)};
    case ActionTerm::Kind::Flip: {
      Value out;
      if (a.prob() < 1) out.insert(assign_var(s, a.var(), 0, interp));
      if (a.prob() > 0) out.insert(assign_var(s, a.var(), 1, interp));
      return out;
    }
    case ActionTerm::Kind::Assume: return a.test().eval(s) ? Value{s} : Value{};
  }
  return {};
}

bool HoareDomain::leq(const Value& a, const Value& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

nlohmann::json HoareDomain::to_json(const Value& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const State& s : v) out.push_back(s);
  return out;
}

// ---- convex --------------------------------------------------------------------

ConvexDomain::Value ConvexDomain::nd(const Value& a, const Value& b) {
  std::vector<Dist> gens = a.generators;
  gens.insert(gens.end(), b.generators.begin(), b.generators.end());
  return reduce(std::move(gens));
}

ConvexDomain::Value ConvexDomain::bind_images(const Value& d, const std::map<State, Value>& images) {
  std::vector<Dist> out;
  for (const Dist& mu : d.generators) {
    // Partial sums share their total mass, so pruning dominated ones is safe.
    std::vector<Dist> partial{Dist{}};
    if (auto it = mu.find(std::nullopt); it != mu.end()) partial.front()[std::nullopt] = it->second;
    for (const auto& [x, p] : mu) {
      if (!x) continue;
      const Value& image = images.at(*x);
      std::vector<Dist> next;
      for (const Dist& acc : partial) {
        for (const Dist& g : image.generators) {
          Dist sum = acc;
          for (const auto& [y, q] : g) sum[y] += p * q;
          next.push_back(std::move(sum));
        }
      }
      partial = next.size() > 1 ? reduce(std::move(next)).generators : std::move(next);
    }
    out.insert(out.end(), partial.begin(), partial.end());
  }
  return reduce(std::move(out));
}

ConvexDomain::Value ConvexDomain::action(const ActionTerm& a, const State& s, const Interp& interp) {
  switch (a.kind()) {
    case ActionTerm::Kind::Assign: return unit(assign_var(s, a.var(), a.expr().eval(s), interp));
    case ActionTerm::Kind::Flip: {
      Dist d;
      const mpq_class& p = a.prob();
      if (p > 0) d[assign_var(s, a.var(), 1, interp)] += p;
      if (p < 1) d[assign_var(s, a.var(), 0, interp)] += 1 - p;
      return {{d}};
    }
    case ActionTerm::Kind::Assume: return a.test().eval(s) ? unit(s) : bottom();
  }
  return bottom();
}

nlohmann::json to_json(const Dist& d) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [x, p] : d) out.push_back({{x ? state_to_string(*x) : "⊥", p.get_str()}});
  return out;
}

nlohmann::json ConvexDomain::to_json(const Value& v) {
  nlohmann::json gens = nlohmann::json::array();
  for (const Dist& d : v.generators) gens.push_back(pomsem::to_json(d));
  return {{"generators", gens}};
}

}  // namespace pomsem
