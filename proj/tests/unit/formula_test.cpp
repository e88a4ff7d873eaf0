#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "pomsem/formula.hpp"

using namespace pomsem;

namespace {

Formula random_formula(std::mt19937_64& rng, int depth, NodeId nvars) {
  const int pick = std::uniform_int_distribution<int>(0, depth == 0 ? 2 : 5)(rng);
  switch (pick) {
    case 0:
    case 1:
      return Formula::var(std::uniform_int_distribution<NodeId>(0, nvars - 1)(rng));
    case 2:
      return std::uniform_int_distribution<int>(0, 1)(rng) ? Formula::tru() : Formula::fls();
    case 3:
      return random_formula(rng, depth - 1, nvars) && random_formula(rng, depth - 1, nvars);
    case 4:
      return random_formula(rng, depth - 1, nvars) || random_formula(rng, depth - 1, nvars);
    default:
      return !random_formula(rng, depth - 1, nvars);
  }
}

// Truth table over variables 0..n-1, as a bit mask.
std::uint64_t table(const Formula& f, NodeId n) {
  std::uint64_t out = 0;
  for (std::uint64_t m = 0; m < (1ULL << n); ++m) {
    Valuation v;
    for (NodeId i = 0; i < n; ++i) v[i] = (m >> i) & 1;
    if (f.eval(v)) out |= 1ULL << m;
  }
  return out;
}

}  // namespace

TEST_CASE("formula queries agree with truth tables") {
  std::mt19937_64 rng(101);
  const NodeId n = 5;
  for (int i = 0; i < 400; ++i) {
    const Formula f = random_formula(rng, 4, n), g = random_formula(rng, 4, n);
    const auto tf = table(f, n), tg = table(g, n);
    CHECK(is_sat(f) == (tf != 0));
    CHECK(implies(f, g) == ((tf & ~tg) == 0));
    CHECK(equiv(f, g) == (tf == tg));

    for (const auto& [id, pol] : implied_literals(f)) {
      CHECK(implies(f, pol ? Formula::var(id) : !Formula::var(id)));
    }
    for (NodeId x : essential_vars(f)) {
      CHECK(!equiv(f.substitute(x, true), f.substitute(x, false)));
    }
    CHECK(table(formula_from_json(to_json(f)), n) == tf);
  }
}

TEST_CASE("three-valued evaluation is sound") {
  std::mt19937_64 rng(102);
  for (int i = 0; i < 300; ++i) {
    const Formula f = random_formula(rng, 4, 4);
    Valuation partial;
    for (NodeId x = 0; x < 4; ++x) {
      const int p = std::uniform_int_distribution<int>(0, 2)(rng);
      if (p < 2) partial[x] = p == 1;
    }
    const Truth t = eval_partial(f, partial);
    // Every completion must agree with a decided value.
    bool seen[2] = {false, false};
    for (int m = 0; m < 16; ++m) {
      Valuation v = partial;
      for (NodeId x = 0; x < 4; ++x) v.try_emplace(x, (m >> x) & 1);
      seen[f.eval(v)] = true;
    }
    if (t == Truth::True) CHECK(!seen[0]);
    if (t == Truth::False) CHECK(!seen[1]);
    CHECK(cube_implies(partial, f) == !seen[0]);

    CompiledFormula c(f);
    std::vector<Truth> assign;
    for (NodeId x : c.vars()) assign.push_back(partial.count(x) ? Truth(partial[x]) : Truth::Unknown);
    const auto before = assign;
    CHECK(c.satisfiable(assign) == seen[1]);
    CHECK(assign == before);
  }
}

TEST_CASE("formula basics") {
  const Formula x = Formula::var(1), y = Formula::var(2);
  CHECK(equiv(x || !x, Formula::tru()));
  CHECK(!is_sat(x && !x));
  CHECK(cube({{2, false}, {1, true}}).to_string() == cube({{1, true}, {2, false}}).to_string());
  CHECK(equiv(cube({{1, true}, {2, false}}), x && !y));
  CHECK(Formula::conj_all({}).kind() == Formula::Kind::True);
  CHECK(Formula::disj_all({}).kind() == Formula::Kind::False);
  CHECK((x && y).rename({{1, 7}}).free_vars() == std::vector<NodeId>{2, 7});
  CHECK_THROWS_AS(x.eval({}), UnboundVariable);
}
