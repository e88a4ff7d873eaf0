#include "pomsem/ops.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace pomsem {

Lpof fresh_copy(const Lpof& a, NodeSupply& supply) {
  std::map<NodeId, NodeId> f;
  for (NodeId x : a.nodes()) f.emplace(x, supply.fresh());
  return a.rename(f);
}

Formula stuck(const Lpof& a) {
  std::vector<Formula> parts;
  for (NodeId x : a.bot_nodes()) parts.push_back(a.formula(x));
  return Formula::disj_all(parts);
}

std::vector<NodeId> extensible(const Lpof& a) {
  const Formula s = stuck(a);
  std::vector<NodeId> out;
  for (NodeId x : a.nodes()) {
    if (!implies(a.formula(x), s)) out.push_back(x);
  }
  return out;
}

namespace {

// Formula `f` with conjunct `extra`, dropping a syntactic True on either side.
Formula and_also(const Formula& f, const Formula& extra) {
  if (f.kind() == Formula::Kind::True) return extra;
  if (extra.kind() == Formula::Kind::True) return f;
  return f && extra;
}

Formula representative(const Formula& psi) {
  Formula c = cube(implied_literals(psi));
  if (equiv(c, psi) && structural_compare(c, psi) <= 0) return c;
  return psi;
}

// Distinct outcome sets {x in ext | v |= phi(x)} over all valuations v.
std::set<Bitset> outcome_sets_by_valuation(const Lpof& a, const std::vector<NodeId>& ext) {
  std::vector<NodeId> vars;
  for (NodeId x : ext) {
    for (NodeId v : a.formula(x).free_vars()) vars.push_back(v);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  // Branch on earlier tests first; they decide the most formulas.
  std::stable_sort(vars.begin(), vars.end(), [&](NodeId u, NodeId v) {
    auto lu = a.contains(u) ? a.level(u) : 0, lv = a.contains(v) ? a.level(v) : 0;
    return lu < lv;
  });

  std::vector<CompiledFormula> compiled;
  std::vector<std::vector<std::size_t>> slot;  // formula var position -> global position
  for (NodeId x : ext) {
    compiled.emplace_back(a.formula(x));
    std::vector<std::size_t> s;
    for (NodeId v : compiled.back().vars()) {
      s.push_back(static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin()));
    }
    slot.push_back(std::move(s));
  }

  std::set<Bitset> out;
  std::vector<Truth> global(vars.size(), Truth::Unknown);
  std::vector<Truth> local;
  // Decides every formula it can; returns the earliest unassigned variable of
  // an undecided formula, or vars.size() when all are decided.
  auto decide = [&](Bitset& members) {
    std::size_t split = vars.size();
    for (std::size_t k = 0; k < ext.size(); ++k) {
      local.assign(slot[k].size(), Truth::Unknown);
      for (std::size_t p = 0; p < slot[k].size(); ++p) local[p] = global[slot[k][p]];
      Truth t = compiled[k].eval(local);
      members[k] = t == Truth::True;
      if (t != Truth::Unknown) continue;
      for (std::size_t p = 0; p < slot[k].size(); ++p) {
        if (local[p] == Truth::Unknown) split = std::min(split, slot[k][p]);
      }
    }
    return split;
  };
  std::function<void()> dfs = [&]() {
    Bitset members(ext.size());
    const std::size_t split = decide(members);
    if (split == vars.size()) {
      out.insert(members);
      return;
    }
    for (Truth value : {Truth::True, Truth::False}) {
      global[split] = value;
      dfs();
    }
    global[split] = Truth::Unknown;
  };
  dfs();
  return out;
}

std::set<Bitset> outcome_sets_by_subsets(const Lpof& a, const std::vector<NodeId>& ext) {
  if (ext.size() > 24) throw std::length_error("too many extensible nodes for subset enumeration");
  std::set<Bitset> out;
  for (unsigned long mask = 1; mask < (1UL << ext.size()); ++mask) {
    Bitset members(ext.size(), mask);
    std::vector<Formula> parts;
    for (std::size_t k = 0; k < ext.size(); ++k) {
      if (members[k]) parts.push_back(a.formula(ext[k]));
    }
    if (is_sat(Formula::conj_all(parts))) out.insert(members);
  }
  return out;
}

}  // namespace

std::vector<Branch> branches(const Lpof& a, BranchMethod method) {
  const std::vector<NodeId> ext = extensible(a);
  if (ext.empty()) return {};
  const Formula not_stuck = !stuck(a);
  std::set<Bitset> sets = method == BranchMethod::Valuations ? outcome_sets_by_valuation(a, ext)
                                                             : outcome_sets_by_subsets(a, ext);
  std::vector<Branch> out;
  for (const Bitset& s : sets) {
    if (s.none()) continue;
    bool maximal = true;
    for (const Bitset& t : sets) {
      if (s != t && s.is_subset_of(t)) {
        maximal = false;
        break;
      }
    }
    if (!maximal) continue;
    std::vector<NodeId> members;
    for (std::size_t k = 0; k < ext.size(); ++k) {
      if (s[k]) members.push_back(ext[k]);
    }
    Formula psi = conj_of(a, members);
    if (!implies(psi, not_stuck)) continue;
    psi = representative(psi);
    bool duplicate = false;
    for (const Branch& b : out) {
      if (equiv(b.formula, psi)) duplicate = true;
    }
    if (!duplicate) out.push_back({psi, members});
  }
  std::sort(out.begin(), out.end(), [](const Branch& x, const Branch& y) {
    return structural_compare(x.formula, y.formula) < 0;
  });
  return out;
}

Lpof guard(NodeId x, const TestTerm& b, const Lpof& a, const Lpof& c) {
  std::vector<NodeSpec> specs{{x, Label::test(b), Formula::tru()}};
  std::vector<Edge> edges;
  auto add_side = [&](const Lpof& side, const Formula& lit) {
    for (std::size_t i = 0; i < side.size(); ++i) {
      specs.push_back({side.id_at(i), side.label_idx(i), and_also(side.formula_idx(i), lit)});
    }
    for (const auto& e : side.covers()) edges.push_back(e);
    edges.emplace_back(x, side.root());
  };
  add_side(a, Formula::var(x));
  add_side(c, !Formula::var(x));
  return Lpof(std::move(specs), edges);
}

namespace {

Lpof seq_impl(const Lpof& a, const Lpof& b, NodeSupply& supply, bool only_maximal) {
  std::vector<NodeSpec> specs;
  std::vector<Edge> edges = a.covers();
  for (std::size_t i = 0; i < a.size(); ++i) specs.push_back({a.id_at(i), a.label_idx(i), a.formula_idx(i)});
  for (const Branch& br : branches(a)) {
    const Lpof copy = fresh_copy(b, supply);
    for (std::size_t i = 0; i < copy.size(); ++i) {
      specs.push_back({copy.id_at(i), copy.label_idx(i), and_also(copy.formula_idx(i), br.formula)});
    }
    for (const auto& e : copy.covers()) edges.push_back(e);
    Bitset implied(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (implies(br.formula, a.formula_idx(i))) implied.set(i);
    }
    const NodeId root = copy.root();
    for (auto i = implied.find_first(); i != Bitset::npos; i = implied.find_next(i)) {
      if (only_maximal && a.up(i).intersects(implied)) continue;
      if (only_maximal) {
        edges.emplace_back(a.id_at(i), root);
      } else {
        for (NodeId y : copy.nodes()) edges.emplace_back(a.id_at(i), y);
      }
    }
  }
  return Lpof(std::move(specs), edges);
}

}  // namespace

Lpof seq(const Lpof& a, const Lpof& b, NodeSupply& supply) { return seq_impl(a, b, supply, true); }

Lpof seq_literal_edges(const Lpof& a, const Lpof& b, NodeSupply& supply) {
  return seq_impl(a, b, supply, false);
}

Lpof par(NodeId x, const Lpof& a, const Lpof& b) {
  std::vector<NodeSpec> specs{{x, Label::fork(), Formula::tru()}};
  std::vector<Edge> edges;
  auto add_side = [&](const Lpof& side) {
    const NodeId r = side.root();
    const bool drop = side.label(r).kind() == Label::Kind::Fork;
    for (std::size_t i = 0; i < side.size(); ++i) {
      if (drop && side.id_at(i) == r) continue;
      specs.push_back({side.id_at(i), side.label_idx(i), side.formula_idx(i)});
    }
    for (const auto& [u, v] : side.covers()) edges.emplace_back(drop && u == r ? x : u, v);
    if (!drop) edges.emplace_back(x, r);
  };
  add_side(a);
  add_side(b);
  return Lpof(std::move(specs), edges);
}

Pomset singleton(const Label& l) { return Pomset(Lpof::singleton(0, l)); }

Pomset bottom_pomset() { return singleton(Label::bot()); }

Pomset guard(const TestTerm& b, const Pomset& a, const Pomset& c) {
  NodeSupply supply;
  const NodeId x = supply.fresh();
  Lpof ac = fresh_copy(a.repr(), supply);
  Lpof cc = fresh_copy(c.repr(), supply);
  return Pomset(guard(x, b, ac, cc));
}

Pomset seq(const Pomset& a, const Pomset& b) {
  NodeSupply supply;
  Lpof ac = fresh_copy(a.repr(), supply);
  return Pomset(seq(ac, b.repr(), supply));
}

Pomset par(const Pomset& a, const Pomset& b) {
  NodeSupply supply;
  const NodeId x = supply.fresh();
  Lpof ac = fresh_copy(a.repr(), supply);
  Lpof bc = fresh_copy(b.repr(), supply);
  return Pomset(par(x, ac, bc));
}

}  // namespace pomsem
