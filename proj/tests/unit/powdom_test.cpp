#include <doctest.h>

#include <nlohmann/json.hpp>

#include "pomsem/corpus.hpp"
#include "pomsem/examples.hpp"
#include "pomsem/linearize.hpp"
#include "pomsem/powdom.hpp"
#include "../support.hpp"

using namespace pomsem;
using pomsem::testing::denote_text;

namespace {

Label act(const std::string& v, int k) { return Label::action(ActionTerm::assign(v, ArithExpr::constant(k))); }

bool flat(const Pomset& p) {
  for (NodeId x : p.repr().nodes()) {
    const Label& l = p.repr().label(x);
    if (l.is_bot() || l.is_test() || p.repr().formula(x).kind() != Formula::Kind::True) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("language semantics of small programs") {
  CHECK(denote_powdom(Cmd::skip(), 1) == PomLang{singleton(Label::fork())});
  const CmdPtr loop = parse_program("while x=0 { x:=1 }");
  CHECK(denote_powdom(loop, 0).empty());
  const Pomset exit = seq_flat(singleton(Label::action(ActionTerm::assume(parse_test("not x=0")))), singleton(Label::fork()));
  CHECK(denote_powdom(loop, 1) == PomLang{exit});
  CHECK(denote_powdom(loop, 2).size() == 2);
  // Iterates grow.
  for (std::size_t n = 0; n < 3; ++n) {
    const PomLang a = denote_powdom(loop, n), b = denote_powdom(loop, n + 1);
    CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
  CHECK(denote_powdom(parse_program(examples::coin_race_source), 1).size() == 2);
}

TEST_CASE("flat sequencing") {
  const Pomset ab = seq_flat(singleton(act("x", 1)), singleton(act("y", 1)));
  CHECK(ab.size() == 2);
  CHECK(ab.repr().max_level() == 1);
  CHECK_THROWS_AS(seq_flat(bottom_pomset(), singleton(act("y", 1))), PreconditionViolated);

  // Agrees with the general composition on flat inputs.
  CorpusOptions o;
  o.max_nodes = 8;
  o.ifs = false;
  o.loops = false;
  const auto cs = generate_corpus(601, 30, o);
  for (std::size_t i = 0; i + 1 < cs.size(); i += 2) {
    const Pomset a = denote(cs[i], 1), b = denote(cs[i + 1], 1);
    REQUIRE(flat(a));
    CHECK(seq_flat(a, b) == seq(a, b));
  }
}

TEST_CASE("translation") {
  CHECK(tr(bottom_pomset(), 3).empty());
  CHECK(tr(singleton(act("x", 1)), 1) == PomLang{singleton(act("x", 1))});

  const auto t = examples::stuck_trio();
  using T = examples::StuckTrio;
  const Formula y1 = Formula::var(T::y1), y2 = Formula::var(T::y2);
  const Lpof piece = tr_lpof(t.alpha2, !y1 && y2);
  CHECK(piece.nodes() == std::vector<NodeId>{T::x, T::y1, T::y2, T::z2, T::z3});
  CHECK(piece.label(T::y1) == Label::action(ActionTerm::assume(TestTerm::neg(parse_test("u=1")))));
  CHECK(piece.label(T::y2) == Label::action(ActionTerm::assume(parse_test("v=1"))));
  for (NodeId x : piece.nodes()) CHECK(piece.formula(x).kind() == Formula::Kind::True);
  CHECK_THROWS_AS(tr_lpof(t.alpha2, !y1), NotABranch);
  CHECK(tr_fin(t.alpha1).empty());
  CHECK(tr_fin(t.alpha3).size() == 4);

  CorpusOptions o;
  for (const auto& c : generate_corpus(602, 30, o)) {
    for (const Pomset& p : tr(denote(c, 2), 6)) CHECK(flat(p));
  }
}

TEST_CASE("translation of the pomset semantics is the language semantics") {
  CorpusOptions o;
  o.max_nodes = 10;
  for (const auto& c : generate_corpus(603, 30, o)) {
    for (std::size_t n = 1; n <= 2; ++n) {
      NodeSupply supply;
      CHECK(tr_fin(denote_lpof(c, n, supply)) == denote_powdom(c, n));
    }
  }
}

TEST_CASE("diagram on small programs") {
  const State s{{"x", 0}, {"y", 0}};
  const DiagramReport skip = check_diagram(Cmd::skip(), 1, s);
  CHECK(skip.commutes());
  CHECK(skip.via_pomset == StateSet{s});
  const DiagramReport race = check_diagram(parse_program(examples::coin_race_source), 1, s);
  CHECK(race.commutes());
  CHECK(race.via_pomset.size() == 4);
  CHECK(race.to_json().is_object());
  CHECK(lin_powdom({}, s).empty());
  CHECK(lin_powdom({singleton(Label::fork())}, s) == StateSet{s});
}

TEST_CASE("language JSON is sorted and deterministic") {
  const PomLang l = denote_powdom(parse_program("if x=0 { y:=1 } else { y:=2 }"), 1);
  const auto j = to_json(l);
  CHECK(j.is_array());
  CHECK(j.size() == 2);
  CHECK(to_json(denote_powdom(parse_program("if x=0 { y:=1 } else { y:=2 }"), 1)) == j);
}
