#include <doctest.h>

#include <algorithm>
#include <random>

#include "pomsem/corpus.hpp"
#include "pomsem/examples.hpp"
#include "pomsem/linearize.hpp"
#include "../support.hpp"

using namespace pomsem;
using namespace pomsem::testing;

namespace {

State st(int x, int y) { return {{"x", x}, {"y", y}}; }

const mpq_class half(1, 2);

}  // namespace

TEST_CASE("ready nodes") {
  const Lpof a = denote_text(examples::coin_race_source);
  CHECK(next(a, Formula::tru(), {}) == std::vector<NodeId>{a.root()});
  const NodeId flip = a.root();
  const auto after = next(a, Formula::tru(), {flip});
  REQUIRE(after.size() == 1);
  CHECK(a.label(after[0]).kind() == Label::Kind::Fork);
  // Past the fork: the test and y:=2. Past the test only its true child.
  const NodeId fork = after[0];
  const auto ready = next(a, Formula::tru(), {flip, fork});
  CHECK(ready.size() == 2);
  const auto test = std::find_if(ready.begin(), ready.end(), [&](NodeId x) { return a.label(x).is_test(); });
  REQUIRE(test != ready.end());
  const auto taken = next(a, Formula::var(*test), {flip, fork, *test});
  CHECK(taken.size() == 2);
  for (NodeId x : taken) CHECK(!implies(Formula::var(*test), !a.formula(x)));
}

TEST_CASE("linearizing the coin race") {
  const auto r = examples::coin_race(1);
  CHECK(r.ok());
  CHECK(r.lin.generators.size() == 4);
  // Flip erased to a choice: every x, y combination the race allows.
  const StateSet h = lin_program<HoareDomain>(parse_program(examples::coin_race_source), 1, st(0, 0));
  CHECK(h == StateSet{st(0, 1), st(0, 2), st(1, 0), st(1, 2)});
}

TEST_CASE("a geometric loop leaves 2^-n on bot") {
  const CmdPtr c = parse_program("x ~ flip(1/2); while x=1 { x ~ flip(1/2) }");
  for (std::size_t n = 1; n <= 4; ++n) {
    mpq_class bot(1, 1 << n);
    const ConvexSet expected{{{{std::nullopt, bot}, {st(0, 0), 1 - bot}}}};
    CHECK(convex_semantics(c, n, st(0, 0)) == expected);
    CHECK(hull_equal(lin_program<ConvexDomain>(c, n, st(0, 0)), expected));
  }
}

TEST_CASE("lin is monotone in the depth") {
  CorpusOptions o;
  o.max_nodes = 10;
  const Interp in{2};
  for (const auto& c : generate_corpus(501, 25, o)) {
    for (const State& s : all_states(o.vars, in)) {
      for (std::size_t n = 1; n < 3; ++n) {
        CHECK(HoareDomain::leq(lin_program<HoareDomain>(c, n, s, in), lin_program<HoareDomain>(c, n + 1, s, in)));
        CHECK(ConvexDomain::leq(lin_program<ConvexDomain>(c, n, s, in), lin_program<ConvexDomain>(c, n + 1, s, in)));
      }
    }
  }
}

TEST_CASE("truncated linearization climbs to the whole one") {
  const CmdPtr c = parse_program("while x<2 { x:=x+1 || y:=1 }");
  const Pomset p = denote(c, 3);
  const State s = st(0, 0);
  const std::size_t top = full_depth(p.repr());
  StateSet prev;
  for (std::size_t n = 0; n <= top; ++n) {
    const StateSet cur = lin<HoareDomain>(p, n, s);
    CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    prev = cur;
  }
  CHECK(prev == lin_program<HoareDomain>(c, 3, s));
}

TEST_CASE("oracle basics") {
  const State s = st(0, 0);
  CHECK(oracle_interleave<HoareDomain>(Cmd::skip(), 1, s) == StateSet{s});
  CHECK(oracle_interleave<HoareDomain>(parse_program("x:=1 || x:=2"), 1, s) == StateSet{st(1, 0), st(2, 0)});
  CHECK(oracle_interleave<HoareDomain>(parse_program("while x=0 { skip }"), 3, s).empty());
  CHECK(oracle_interleave<ConvexDomain>(parse_program("while x=0 { skip }"), 3, s) == ConvexDomain::bottom());
}

TEST_CASE("sequential semantics rejects parallel programs") {
  CHECK_THROWS_AS(convex_semantics(parse_program("x:=1 || y:=1"), 1, st(0, 0)), ContainsParallel);
  CHECK(convex_semantics(Cmd::skip(), 1, st(0, 0)) == ConvexDomain::unit(st(0, 0)));
}

TEST_CASE("lin of a bot pomset is bottom") {
  for (std::size_t n = 0; n < 3; ++n) {
    CHECK(lin<ConvexDomain>(bottom_pomset(), n, st(0, 0)) == ConvexDomain::bottom());
    CHECK(lin<HoareDomain>(bottom_pomset(), n, st(0, 0)).empty());
  }
}

TEST_CASE("invalid LPOFs are rejected") {
  const Lpof two_roots({{0, Label::fork(), Formula::tru()}, {1, Label::fork(), Formula::tru()}}, {});
  CHECK_THROWS_AS(lin_lpof<HoareDomain>(two_roots, st(0, 0)), InvalidLpof);
}
