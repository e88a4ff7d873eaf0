#include "pomsem/lpof.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pomsem {

// ---- Label -----------------------------------------------------------------

Label Label::action(ActionTerm a) {
  Label l;
  l.v_ = std::move(a);
  return l;
}

Label Label::test(TestTerm b) {
  Label l;
  l.v_ = std::move(b);
  return l;
}

Label Label::fork() {
  Label l;
  l.v_ = ForkTag{};
  return l;
}

Label Label::bot() { return Label(); }

Label::Kind Label::kind() const { return static_cast<Kind>(v_.index()); }

const ActionTerm& Label::action_term() const { return std::get<ActionTerm>(v_); }
const TestTerm& Label::test_term() const { return std::get<TestTerm>(v_); }

std::string Label::to_string() const {
  switch (kind()) {
    case Kind::Action: return action_term().to_string();
    case Kind::Test: return test_term().to_string() + "?";
    case Kind::Fork: return "fork";
    case Kind::Bot: return "bot";
  }
  return {};
}

bool operator==(const Label& a, const Label& b) {
  return a.kind() == b.kind() && a.to_string() == b.to_string();
}

bool label_leq(const Label& a, const Label& b) { return a.is_bot() || a == b; }

// ---- Lpof ------------------------------------------------------------------

struct Lpof::Impl {
  std::vector<NodeId> ids;
  std::vector<Label> labels;
  std::vector<Formula> formulas;
  std::vector<std::vector<std::size_t>> succ, pred;  // covering relation
  std::vector<Bitset> up, down;
  std::vector<std::size_t> level;
  bool acyclic = true;
};

namespace {

std::vector<NodeId> ids_of(const Lpof& a, const Bitset& bits) {
  std::vector<NodeId> out;
  for (auto i = bits.find_first(); i != Bitset::npos; i = bits.find_next(i)) out.push_back(a.id_at(i));
  return out;
}

}  // namespace

Lpof::Lpof(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Lpof::Lpof(std::vector<NodeSpec> nodes, const std::vector<Edge>& edges) {
  auto impl = std::make_shared<Impl>();
  std::sort(nodes.begin(), nodes.end(), [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].id == nodes[i - 1].id) {
      throw std::invalid_argument("duplicate node " + std::to_string(nodes[i].id));
    }
  }
  const std::size_t n = nodes.size();
  impl->ids.reserve(n);
  for (auto& spec : nodes) {
    impl->ids.push_back(spec.id);
    impl->labels.push_back(std::move(spec.label));
    impl->formulas.push_back(std::move(spec.formula));
  }
  auto idx = [&](NodeId x) {
    auto it = std::lower_bound(impl->ids.begin(), impl->ids.end(), x);
    if (it == impl->ids.end() || *it != x) throw UnknownNode(x);
    return static_cast<std::size_t>(it - impl->ids.begin());
  };

  std::vector<std::vector<std::size_t>> out(n), in(n);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [x, y] : edges) {
    auto i = idx(x), j = idx(y);
    if (!seen.insert({i, j}).second) continue;
    out[i].push_back(j);
    in[j].push_back(i);
  }

  // Kahn's algorithm; leftover nodes mean a cycle.
  std::vector<std::size_t> indeg(n), topo;
  topo.reserve(n);
  for (std::size_t j = 0; j < n; ++j) indeg[j] = in[j].size();
  std::deque<std::size_t> ready;
  for (std::size_t j = 0; j < n; ++j) {
    if (indeg[j] == 0) ready.push_back(j);
  }
  while (!ready.empty()) {
    auto u = ready.front();
    ready.pop_front();
    topo.push_back(u);
    for (auto v : out[u]) {
      if (--indeg[v] == 0) ready.push_back(v);
    }
  }

  impl->up.assign(n, Bitset(n));
  impl->down.assign(n, Bitset(n));
  impl->level.assign(n, 0);
  impl->succ.assign(n, {});
  impl->pred.assign(n, {});

  if (topo.size() != n) {
    impl->acyclic = false;
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> stack(out[s].begin(), out[s].end());
      while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        if (impl->up[s].test(v)) continue;
        impl->up[s].set(v);
        impl->down[v].set(s);
        for (auto w : out[v]) stack.push_back(w);
      }
    }
    for (std::size_t u = 0; u < n; ++u) {
      for (auto v : out[u]) {
        impl->succ[u].push_back(v);
        impl->pred[v].push_back(u);
      }
    }
  } else {
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
      for (auto v : out[*it]) {
        impl->up[*it].set(v);
        impl->up[*it] |= impl->up[v];
      }
    }
    for (auto u : topo) {
      for (auto p : in[u]) {
        impl->down[u].set(p);
        impl->down[u] |= impl->down[p];
      }
    }
    // Every covering pair is a generating edge, so only those are candidates.
    for (std::size_t u = 0; u < n; ++u) {
      for (auto v : out[u]) {
        if (!(impl->up[u] & impl->down[v]).any()) {
          impl->succ[u].push_back(v);
          impl->pred[v].push_back(u);
        }
      }
    }
    for (auto& s : impl->succ) std::sort(s.begin(), s.end());
    for (auto& p : impl->pred) std::sort(p.begin(), p.end());
    for (auto u : topo) {
      for (auto p : impl->pred[u]) impl->level[u] = std::max(impl->level[u], impl->level[p] + 1);
    }
  }
  impl_ = std::move(impl);
}

Lpof Lpof::singleton(NodeId id, Label label, Formula formula) {
  return Lpof({NodeSpec{id, std::move(label), std::move(formula)}}, {});
}

const std::vector<NodeId>& Lpof::nodes() const { return impl_->ids; }
std::size_t Lpof::size() const { return impl_->ids.size(); }

bool Lpof::contains(NodeId x) const { return std::binary_search(impl_->ids.begin(), impl_->ids.end(), x); }

std::size_t Lpof::index(NodeId x) const {
  auto it = std::lower_bound(impl_->ids.begin(), impl_->ids.end(), x);
  if (it == impl_->ids.end() || *it != x) throw UnknownNode(x);
  return static_cast<std::size_t>(it - impl_->ids.begin());
}

NodeId Lpof::id_at(std::size_t i) const { return impl_->ids.at(i); }
const std::vector<std::size_t>& Lpof::succ_idx(std::size_t i) const { return impl_->succ[i]; }
const std::vector<std::size_t>& Lpof::pred_idx(std::size_t i) const { return impl_->pred[i]; }
const Bitset& Lpof::up(std::size_t i) const { return impl_->up[i]; }
const Bitset& Lpof::down(std::size_t i) const { return impl_->down[i]; }
std::size_t Lpof::level_idx(std::size_t i) const { return impl_->level[i]; }
const Label& Lpof::label_idx(std::size_t i) const { return impl_->labels[i]; }
const Formula& Lpof::formula_idx(std::size_t i) const { return impl_->formulas[i]; }

const Label& Lpof::label(NodeId x) const { return impl_->labels[index(x)]; }
const Formula& Lpof::formula(NodeId x) const { return impl_->formulas[index(x)]; }

std::vector<NodeId> Lpof::succ(NodeId x) const {
  std::vector<NodeId> out;
  for (auto j : impl_->succ[index(x)]) out.push_back(impl_->ids[j]);
  return out;
}

std::vector<NodeId> Lpof::pred(NodeId x) const {
  std::vector<NodeId> out;
  for (auto j : impl_->pred[index(x)]) out.push_back(impl_->ids[j]);
  return out;
}

std::vector<NodeId> Lpof::succ_plus(NodeId x) const { return ids_of(*this, impl_->up[index(x)]); }
std::vector<NodeId> Lpof::pred_plus(NodeId x) const { return ids_of(*this, impl_->down[index(x)]); }
bool Lpof::less(NodeId x, NodeId y) const { return impl_->up[index(x)].test(index(y)); }
std::size_t Lpof::level(NodeId x) const { return impl_->level[index(x)]; }

std::size_t Lpof::max_level() const {
  std::size_t m = 0;
  for (auto l : impl_->level) m = std::max(m, l);
  return m;
}

std::vector<NodeId> Lpof::minimal() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (impl_->down[i].none()) out.push_back(impl_->ids[i]);
  }
  return out;
}

std::vector<NodeId> Lpof::maximal() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (impl_->up[i].none()) out.push_back(impl_->ids[i]);
  }
  return out;
}

NodeId Lpof::root() const {
  auto m = minimal();
  if (m.size() != 1) throw InvalidLpof("LPOF has " + std::to_string(m.size()) + " minimal nodes");
  return m.front();
}

std::vector<NodeId> Lpof::bot_nodes() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (impl_->labels[i].is_bot()) out.push_back(impl_->ids[i]);
  }
  return out;
}

std::vector<Edge> Lpof::covers() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < size(); ++i) {
    for (auto j : impl_->succ[i]) out.emplace_back(impl_->ids[i], impl_->ids[j]);
  }
  return out;
}

bool Lpof::is_acyclic() const { return impl_->acyclic; }

Lpof Lpof::rename(const std::map<NodeId, NodeId>& f) const {
  auto map_id = [&](NodeId x) {
    auto it = f.find(x);
    return it == f.end() ? x : it->second;
  };
  std::vector<NodeSpec> specs;
  specs.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    specs.push_back({map_id(impl_->ids[i]), impl_->labels[i], impl_->formulas[i].rename(f)});
  }
  std::vector<Edge> edges;
  for (const auto& [x, y] : covers()) edges.emplace_back(map_id(x), map_id(y));
  return Lpof(std::move(specs), edges);
}

Lpof Lpof::restrict_to(const std::vector<NodeId>& keep) const {
  Bitset kept(size());
  for (auto x : keep) kept.set(index(x));
  bool down_closed = true;
  for (auto i = kept.find_first(); i != Bitset::npos; i = kept.find_next(i)) {
    if (!impl_->down[i].is_subset_of(kept)) down_closed = false;
  }
  std::vector<NodeSpec> specs;
  std::vector<Edge> edges;
  for (auto i = kept.find_first(); i != Bitset::npos; i = kept.find_next(i)) {
    specs.push_back({impl_->ids[i], impl_->labels[i], impl_->formulas[i]});
    // Covers among a downward-closed subset are exactly the induced covers.
    const Bitset targets = down_closed ? Bitset(size()) : (impl_->up[i] & kept);
    if (down_closed) {
      for (auto j : impl_->succ[i]) {
        if (kept.test(j)) edges.emplace_back(impl_->ids[i], impl_->ids[j]);
      }
    } else {
      for (auto j = targets.find_first(); j != Bitset::npos; j = targets.find_next(j)) {
        edges.emplace_back(impl_->ids[i], impl_->ids[j]);
      }
    }
  }
  return Lpof(std::move(specs), edges);
}

Lpof Lpof::relabel(const std::map<NodeId, Label>& labels, const std::map<NodeId, Formula>& formulas) const {
  auto impl = std::make_shared<Impl>(*impl_);
  for (const auto& [x, l] : labels) impl->labels[index(x)] = l;
  for (const auto& [x, f] : formulas) impl->formulas[index(x)] = f;
  return Lpof(std::shared_ptr<const Impl>(std::move(impl)));
}

// ---- validation and order --------------------------------------------------

std::vector<Violation> validate(const Lpof& a) {
  std::vector<Violation> out;
  if (!a.is_acyclic()) {
    std::vector<NodeId> cyc;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.up(i).test(i)) cyc.push_back(a.id_at(i));
    }
    out.push_back({"2", cyc, "order is not antisymmetric (cycle)"});
    return out;
  }
  auto mins = a.minimal();
  if (mins.size() != 1) {
    out.push_back({"2c", mins, "expected exactly one minimal node, found " + std::to_string(mins.size())});
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const NodeId x = a.id_at(i);
    if (a.label_idx(i).is_bot() && !a.succ_idx(i).empty()) {
      out.push_back({"3", {x}, "bot-labelled node has successors"});
    }
    const Formula& f = a.formula_idx(i);
    if (!is_sat(f)) out.push_back({"4a", {x}, "formula " + f.to_string() + " is unsatisfiable"});
    for (NodeId v : f.free_vars()) {
      if (!a.contains(v) || !a.down(i).test(a.index(v))) {
        out.push_back({"4a", {x, v}, "formula mentions n" + std::to_string(v) + " which does not precede the node"});
      }
    }
    for (auto j : a.succ_idx(i)) {
      if (!implies(a.formula_idx(j), f)) {
        out.push_back({"4b", {x, a.id_at(j)}, "successor formula does not entail predecessor formula"});
      }
    }
  }
  return out;
}

void require_valid(const Lpof& a, const char* what) {
  auto v = validate(a);
  if (!v.empty()) {
    throw InvalidLpof(std::string(what) + ": condition " + v.front().condition + " violated: " + v.front().message);
  }
}

bool le_lpof(const Lpof& a, const Lpof& b) {
  require_valid(a, "le_lpof lhs");
  require_valid(b, "le_lpof rhs");
  Bitset in_a(b.size());
  for (NodeId x : a.nodes()) {
    if (!b.contains(x)) return false;
    in_a.set(b.index(x));
  }
  // N_a downward closed in N_b, and the order restricts.
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t bi = b.index(a.id_at(i));
    if (!b.down(bi).is_subset_of(in_a)) return false;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a.up(i).test(j) != b.up(bi).test(b.index(a.id_at(j)))) return false;
    }
  }
  Bitset above_bot(b.size());
  for (NodeId z : a.bot_nodes()) above_bot |= b.up(b.index(z));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t bi = b.index(a.id_at(i));
    if (!label_leq(a.label_idx(i), b.label_idx(bi))) return false;
    if (!equiv(a.formula_idx(i), b.formula_idx(bi))) return false;
    std::vector<NodeId> sa = a.succ(a.id_at(i));
    std::vector<NodeId> sb;
    for (auto j : b.succ_idx(bi)) {
      if (!above_bot.test(j)) sb.push_back(b.id_at(j));
    }
    if (sa != sb) return false;
  }
  return true;
}

bool equal_lpof(const Lpof& a, const Lpof& b) {
  if (a.nodes() != b.nodes() || a.covers() != b.covers()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a.label_idx(i) == b.label_idx(i))) return false;
    if (!equiv(a.formula_idx(i), b.formula_idx(i))) return false;
  }
  return true;
}

Lpof truncate(const Lpof& a, std::size_t n) {
  require_valid(a, "truncate");
  std::vector<NodeId> keep;
  std::map<NodeId, Label> relabel;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.level_idx(i) <= n) keep.push_back(a.id_at(i));
    if (a.level_idx(i) == n) relabel.emplace(a.id_at(i), Label::bot());
  }
  return a.restrict_to(keep).relabel(relabel, {});
}

Lpof sup_chain(const std::vector<Lpof>& chain) {
  if (chain.empty()) throw NotAChain("empty chain");
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (!le_lpof(chain[i - 1], chain[i])) {
      throw NotAChain("element " + std::to_string(i - 1) + " is not below element " + std::to_string(i));
    }
  }
  std::map<NodeId, NodeSpec> nodes;
  std::set<Edge> edges;
  for (const Lpof& a : chain) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const NodeId x = a.id_at(i);
      auto it = nodes.find(x);
      if (it == nodes.end()) {
        nodes.emplace(x, NodeSpec{x, a.label_idx(i), a.formula_idx(i)});
      } else if (label_leq(it->second.label, a.label_idx(i))) {
        it->second.label = a.label_idx(i);
      }
    }
    for (const auto& e : a.covers()) edges.insert(e);
  }
  std::vector<NodeSpec> specs;
  for (auto& [_, spec] : nodes) specs.push_back(spec);
  return Lpof(std::move(specs), {edges.begin(), edges.end()});
}

Formula conj_of(const Lpof& a, const std::vector<NodeId>& nodes) {
  std::vector<Formula> parts;
  for (NodeId x : nodes) parts.push_back(a.formula(x));
  return Formula::conj_all(parts);
}

// ---- export ----------------------------------------------------------------

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const Lpof& a, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(name) << "\" {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < a.size(); ++i) {
    os << "  n" << a.id_at(i) << " [label=\"" << a.id_at(i) << ": " << dot_escape(a.label_idx(i).to_string())
       << "\\nphi=" << dot_escape(a.formula_idx(i).to_string()) << "\"";
    if (a.label_idx(i).is_bot()) os << ", shape=box";
    os << "];\n";
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const NodeId x = a.id_at(i);
    for (auto j : a.succ_idx(i)) {
      os << "  n" << x << " -> n" << a.id_at(j);
      if (a.label_idx(i).is_test()) {
        const Formula& f = a.formula_idx(j);
        if (implies(f, Formula::var(x))) os << " [label=\"T\", color=blue]";
        else if (implies(f, !Formula::var(x))) os << " [label=\"F\", color=red]";
      }
      os << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

nlohmann::json to_json(const Lpof& a) {
  nlohmann::json j;
  j["nodes"] = a.nodes();
  auto covers = nlohmann::json::array();
  for (const auto& [x, y] : a.covers()) covers.push_back({x, y});
  j["covers"] = covers;
  auto labels = nlohmann::json::object();
  auto formulas = nlohmann::json::object();
  for (std::size_t i = 0; i < a.size(); ++i) {
    labels[std::to_string(a.id_at(i))] = a.label_idx(i).to_string();
    formulas[std::to_string(a.id_at(i))] = to_json(a.formula_idx(i));
  }
  j["labels"] = labels;
  j["formulas"] = formulas;
  return j;
}

}  // namespace pomsem
