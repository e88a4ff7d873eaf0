#include "pomsem/powdom.hpp"

#include <nlohmann/json.hpp>

#include "pomsem/linearize.hpp"

namespace pomsem {

Pomset seq_flat(const Pomset& a, const Pomset& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.repr().label_idx(i).is_bot()) throw PreconditionViolated("seq_flat: left operand contains bot");
    if (!implies(Formula::tru(), a.repr().formula_idx(i))) {
      throw PreconditionViolated("seq_flat: left operand has a formula other than true");
    }
  }
  NodeSupply supply;
  const Lpof ac = fresh_copy(a.repr(), supply);
  const Lpof bc = fresh_copy(b.repr(), supply);
  std::vector<NodeSpec> specs;
  std::vector<Edge> edges = ac.covers();
  for (const Lpof* side : {&ac, &bc}) {
    for (std::size_t i = 0; i < side->size(); ++i) {
      specs.push_back({side->id_at(i), side->label_idx(i), side->formula_idx(i)});
    }
  }
  for (const auto& e : bc.covers()) edges.push_back(e);
  for (NodeId x : ac.maximal()) edges.emplace_back(x, bc.root());
  return Pomset(Lpof(std::move(specs), edges));
}

namespace {

Pomset assume(const TestTerm& b) { return singleton(Label::action(ActionTerm::assume(b))); }

PomLang prefixed(const Pomset& head, const PomLang& tails) {
  PomLang out;
  for (const Pomset& t : tails) out.insert(seq_flat(head, t));
  return out;
}

PomLang denote_powdom_impl(const CmdPtr& c, std::size_t n) {
  switch (c->kind()) {
    case Cmd::Kind::Skip: return {singleton(Label::fork())};
    case Cmd::Kind::Act: return {singleton(Label::action(c->action()))};
    case Cmd::Kind::Seq:
    case Cmd::Kind::Par: {
      const PomLang l = denote_powdom_impl(c->first(), n);
      const PomLang r = denote_powdom_impl(c->second(), n);
      PomLang out;
      for (const Pomset& a : l) {
        for (const Pomset& b : r) out.insert(c->kind() == Cmd::Kind::Seq ? seq_flat(a, b) : par(a, b));
      }
      return out;
    }
    case Cmd::Kind::If: {
      PomLang out = prefixed(assume(c->test()), denote_powdom_impl(c->first(), n));
      PomLang other = prefixed(assume(TestTerm::neg(c->test())), denote_powdom_impl(c->second(), n));
      out.insert(other.begin(), other.end());
      return out;
    }
    case Cmd::Kind::While: {
      const PomLang body = denote_powdom_impl(c->first(), n);
      const Pomset enter = assume(c->test());
      const Pomset exit = seq_flat(assume(TestTerm::neg(c->test())), singleton(Label::fork()));
      PomLang iterate;
      for (std::size_t k = 0; k < n; ++k) {
        PomLang next{exit};
        for (const Pomset& a : body) {
          const Pomset head = seq_flat(enter, a);
          for (const Pomset& b : iterate) next.insert(seq_flat(head, b));
        }
        iterate = std::move(next);
      }
      return iterate;
    }
  }
  return {};
}

Lpof translate(const Lpof& a, const Formula& psi) {
  std::vector<NodeId> keep;
  std::map<NodeId, Label> labels;
  std::map<NodeId, Formula> formulas;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!implies(psi, a.formula_idx(i))) continue;
    const NodeId x = a.id_at(i);
    keep.push_back(x);
    formulas.emplace(x, Formula::tru());
    const Label& l = a.label_idx(i);
    if (!l.is_test()) continue;
    if (implies(psi, Formula::var(x))) {
      labels.emplace(x, Label::action(ActionTerm::assume(l.test_term())));
    } else if (implies(psi, !Formula::var(x))) {
      labels.emplace(x, Label::action(ActionTerm::assume(TestTerm::neg(l.test_term()))));
    } else {
      throw NotABranch("branch leaves the outcome of test node " + std::to_string(x) + " open");
    }
  }
  return a.restrict_to(keep).relabel(labels, formulas);
}

}  // namespace

PomLang denote_powdom(const CmdPtr& c, std::size_t n) { return denote_powdom_impl(c, n); }

Lpof tr_lpof(const Lpof& a, const Formula& psi) {
  bool found = false;
  for (const Branch& b : branches(a)) {
    if (equiv(b.formula, psi)) found = true;
  }
  if (!found) throw NotABranch("formula " + psi.to_string() + " is not a branch");
  return translate(a, psi);
}

PomLang tr_fin(const Lpof& a) {
  PomLang out;
  for (const Branch& b : branches(a)) out.insert(Pomset(translate(a, b.formula)));
  return out;
}

PomLang tr(const Pomset& p, std::size_t n) { return tr_fin(truncate(p.repr(), n)); }

StateSet lin_powdom(const PomLang& l, const State& s, const Interp& interp) {
  StateSet out;
  for (const Pomset& p : l) {
    StateSet part = lin_lpof<HoareDomain>(p.repr(), s, interp);
    out.insert(part.begin(), part.end());
  }
  return out;
}

DiagramReport check_diagram(const CmdPtr& c, std::size_t n, const State& s, const Interp& interp) {
  NodeSupply supply;
  const Lpof a = denote_lpof(c, n, supply);
  const PomLang translated = tr_fin(a);
  const PomLang language = denote_powdom(c, n);
  DiagramReport r;
  r.via_pomset = lin_lpof<HoareDomain>(a, s, interp);
  r.via_translation = lin_powdom(translated, s, interp);
  r.via_language = lin_powdom(language, s, interp);
  r.languages_equal = translated == language;
  return r;
}

nlohmann::json DiagramReport::to_json() const {
  return {{"commutes", commutes()},
          {"languages_equal", languages_equal},
          {"lin", HoareDomain::to_json(via_pomset)},
          {"lin_tr", HoareDomain::to_json(via_translation)},
          {"lin_powdom", HoareDomain::to_json(via_language)}};
}

nlohmann::json to_json(const PomLang& l) {
  nlohmann::json out = nlohmann::json::array();
  for (const Pomset& p : l) out.push_back(to_json(p));
  return out;
}

}  // namespace pomsem
