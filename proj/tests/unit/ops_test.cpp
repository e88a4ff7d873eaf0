#include <doctest.h>

#include "pomsem/corpus.hpp"
#include "pomsem/examples.hpp"
#include "pomsem/lang.hpp"
#include "pomsem/ops.hpp"
#include "../support.hpp"

using namespace pomsem;
using pomsem::testing::denote_text;

namespace {

std::vector<Formula> formulas(const std::vector<Branch>& bs) {
  std::vector<Formula> out;
  for (const auto& b : bs) out.push_back(b.formula);
  return out;
}

bool same_branches(const std::vector<Branch>& a, const std::vector<Branch>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    bool found = false;
    for (const auto& y : b) found = found || equiv(x.formula, y.formula);
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("branch enumeration by valuations matches subset enumeration") {
  CorpusOptions o;
  o.max_nodes = 9;
  std::size_t compared = 0;
  for (const auto& c : generate_corpus(201, 60, o)) {
    NodeSupply supply;
    const Lpof full = denote_lpof(c, 2, supply);
    for (std::size_t n = 0; n <= full.max_level() + 1; ++n) {
      const Lpof a = truncate(full, n);
      if (extensible(a).size() > 16) continue;
      ++compared;
      const auto by_val = branches(a, BranchMethod::Valuations);
      const auto by_sub = branches(a, BranchMethod::Subsets);
      CHECK(same_branches(by_val, by_sub));
      // Branches are pairwise exclusive and avoid every stuck node.
      const Formula s = stuck(a);
      for (std::size_t i = 0; i < by_val.size(); ++i) {
        CHECK(is_sat(by_val[i].formula));
        CHECK(!is_sat(by_val[i].formula && s));
        for (std::size_t j = i + 1; j < by_val.size(); ++j) CHECK(!is_sat(by_val[i].formula && by_val[j].formula));
      }
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("stuck trio") {
  const auto t = examples::stuck_trio();
  CHECK(extensible(t.alpha1).empty());
  CHECK(extensible(t.alpha2).size() == 6);
  CHECK(extensible(t.alpha3).size() == 7);
  CHECK(branches(t.alpha1).empty());
  CHECK(branches(t.alpha2).size() == 2);
  CHECK(branches(t.alpha3).size() == 4);
}

TEST_CASE("attaching copies to maximal nodes gives the same order as attaching to all") {
  CorpusOptions o;
  o.max_nodes = 8;
  o.loops = false;
  const auto lefts = generate_corpus(202, 30, o), rights = generate_corpus(203, 30, o);
  for (std::size_t i = 0; i < lefts.size(); ++i) {
    NodeSupply s1, s2;
    const Lpof a = denote_lpof(lefts[i], 1, s1);
    const Lpof b = denote_lpof(rights[i], 1, s1);
    s2.reserve(s1.peek());
    NodeSupply s3 = s2;
    const Lpof x = seq(a, b, s2), y = seq_literal_edges(a, b, s3);
    CHECK(validate(x).empty());
    CHECK(equal_lpof(x, y));
  }
}

TEST_CASE("sequential composition is associative on pomsets") {
  CorpusOptions o;
  o.max_nodes = 6;
  o.loops = false;
  const auto cs = generate_corpus(204, 60, o);
  for (std::size_t i = 0; i + 2 < cs.size(); i += 3) {
    const Pomset a = denote(cs[i], 1), b = denote(cs[i + 1], 1), c = denote(cs[i + 2], 1);
    CHECK(seq(seq(a, b), c) == seq(a, seq(b, c)));
  }
}

TEST_CASE("composition with skip and bot") {
  CorpusOptions o;
  o.max_nodes = 8;
  const Pomset skip = singleton(Label::fork());
  for (const auto& c : generate_corpus(205, 20, o)) {
    const Pomset a = denote(c, 1);
    CHECK(seq(bottom_pomset(), a) == bottom_pomset());
    // Skip is not a unit on the nose: each branch gets its own fork node.
    CHECK(seq(a, skip).size() == a.size() + branches(a.repr()).size());
    CHECK(seq(skip, a).size() == a.size() + 1);
  }
}

TEST_CASE("parallel composition merges fork roots") {
  const Lpof a = denote_text("(x:=1 || y:=1) || x:=2");
  CHECK(a.label(a.root()).kind() == Label::Kind::Fork);
  CHECK(a.succ(a.root()).size() == 3);
  CHECK(a.size() == 4);
  const Lpof b = denote_text("x:=1 || (y:=1; y:=2)");
  CHECK(b.succ(b.root()).size() == 2);
  CHECK(b.max_level() == 2);
}

TEST_CASE("guard attaches literals") {
  NodeSupply supply;
  const NodeId x = supply.fresh();
  const Lpof a = Lpof::singleton(supply.fresh(), Label::fork());
  const Lpof c = Lpof::singleton(supply.fresh(), Label::bot());
  const Lpof g = guard(x, parse_test("x=1"), a, c);
  CHECK(validate(g).empty());
  CHECK(equiv(g.formula(a.root()), Formula::var(x)));
  CHECK(equiv(g.formula(c.root()), !Formula::var(x)));
  CHECK(equiv(stuck(g), !Formula::var(x)));
  const auto br = branches(g);
  REQUIRE(br.size() == 1);
  CHECK(equiv(br[0].formula, Formula::var(x)));
  CHECK(formulas(br)[0].to_string() == Formula::var(x).to_string());
}
