#include "pomsem/formula.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pomsem {

UnboundVariable::UnboundVariable(NodeId id)
    : std::runtime_error("unbound variable n" + std::to_string(id)), id_(id) {}

struct Formula::Node {
  Kind kind = Kind::True;
  Formula lhs{nullptr};
  Formula rhs{nullptr};
  NodeId id = 0;
  std::size_t size = 1;
};

namespace {

const std::shared_ptr<const Formula::Node>& true_node() {
  static const auto node = [] {
    auto n = std::make_shared<Formula::Node>();
    n->kind = Formula::Kind::True;
    return std::shared_ptr<const Formula::Node>(n);
  }();
  return node;
}

}  // namespace

Formula::Formula() : node_(true_node()) {}
Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::tru() { return Formula(); }

Formula Formula::fls() {
  static const Formula f = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::False;
    return Formula(std::move(n));
  }();
  return f;
}

Formula Formula::var(NodeId id) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->id = id;
  return Formula(std::move(n));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->size = 1 + lhs.size() + rhs.size();
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->size = 1 + lhs.size() + rhs.size();
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}

Formula Formula::neg(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->size = 1 + f.size();
  n->lhs = std::move(f);
  return Formula(std::move(n));
}

Formula Formula::conj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return tru();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
  return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return fls();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
  return acc;
}

Formula::Kind Formula::kind() const { return node_->kind; }
const Formula& Formula::lhs() const { return node_->lhs; }
const Formula& Formula::rhs() const { return node_->rhs; }
NodeId Formula::id() const { return node_->id; }
std::size_t Formula::size() const { return node_->size; }

bool Formula::eval(const Valuation& v) const {
  switch (kind()) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::And: {
      // Evaluate both sides so unbound variables are always reported.
      bool a = lhs().eval(v);
      bool b = rhs().eval(v);
      return a && b;
    }
    case Kind::Or: {
      bool a = lhs().eval(v);
      bool b = rhs().eval(v);
      return a || b;
    }
    case Kind::Not: return !lhs().eval(v);
    case Kind::Var: {
      auto it = v.find(id());
      if (it == v.end()) throw UnboundVariable(id());
      return it->second;
    }
  }
  return false;
}

namespace {

void collect_vars(const Formula& f, std::set<NodeId>& out) {
  switch (f.kind()) {
    case Formula::Kind::Var: out.insert(f.id()); break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_vars(f.lhs(), out);
      collect_vars(f.rhs(), out);
      break;
    case Formula::Kind::Not: collect_vars(f.lhs(), out); break;
    default: break;
  }
}

}  // namespace

std::vector<NodeId> Formula::free_vars() const {
  std::set<NodeId> vars;
  collect_vars(*this, vars);
  return {vars.begin(), vars.end()};
}

Formula Formula::rename(const std::map<NodeId, NodeId>& f) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False: return *this;
    case Kind::Var: {
      auto it = f.find(id());
      return it == f.end() ? *this : var(it->second);
    }
    case Kind::And: return conj(lhs().rename(f), rhs().rename(f));
    case Kind::Or: return disj(lhs().rename(f), rhs().rename(f));
    case Kind::Not: return neg(lhs().rename(f));
  }
  return *this;
}

Formula Formula::substitute(NodeId x, bool value) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False: return *this;
    case Kind::Var:
      if (id() != x) return *this;
      return value ? tru() : fls();
    case Kind::And: return conj(lhs().substitute(x, value), rhs().substitute(x, value));
    case Kind::Or: return disj(lhs().substitute(x, value), rhs().substitute(x, value));
    case Kind::Not: return neg(lhs().substitute(x, value));
  }
  return *this;
}

namespace {

void print(const Formula& f, std::ostream& os) {
  switch (f.kind()) {
    case Formula::Kind::True: os << "true"; break;
    case Formula::Kind::False: os << "false"; break;
    case Formula::Kind::Var: os << 'n' << f.id(); break;
    case Formula::Kind::Not:
      os << '!';
      print(f.lhs(), os);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      os << '(';
      print(f.lhs(), os);
      os << (f.kind() == Formula::Kind::And ? " & " : " | ");
      print(f.rhs(), os);
      os << ')';
      break;
  }
}

}  // namespace

std::string Formula::to_string() const {
  std::ostringstream os;
  print(*this, os);
  return os.str();
}

bool operator==(const Formula& a, const Formula& b) {
  return structural_compare(a, b) == std::strong_ordering::equal;
}

std::strong_ordering structural_compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False: return std::strong_ordering::equal;
    case Formula::Kind::Var: return a.id() <=> b.id();
    case Formula::Kind::Not: return structural_compare(a.lhs(), b.lhs());
    case Formula::Kind::And:
    case Formula::Kind::Or:
      if (auto c = structural_compare(a.lhs(), b.lhs()); c != 0) return c;
      return structural_compare(a.rhs(), b.rhs());
  }
  return std::strong_ordering::equal;
}

CompiledFormula::CompiledFormula(const Formula& f) : vars_(f.free_vars()) { emit(f); }

std::size_t CompiledFormula::emit(const Formula& f) {
  Op op{f.kind()};
  switch (f.kind()) {
    case Formula::Kind::And:
    case Formula::Kind::Or:
      op.lhs = emit(f.lhs());
      op.rhs = emit(f.rhs());
      break;
    case Formula::Kind::Not: op.lhs = emit(f.lhs()); break;
    case Formula::Kind::Var:
      op.index = static_cast<std::size_t>(std::lower_bound(vars_.begin(), vars_.end(), f.id()) - vars_.begin());
      break;
    default: break;
  }
  ops_.push_back(op);
  return ops_.size() - 1;
}

// Kleene three-valued evaluation of every subformula, so that partial
// assignments can prune.
void CompiledFormula::eval_all(const std::vector<Truth>& assign, std::vector<Truth>& val) const {
  val.resize(ops_.size());
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const Op& op = ops_[i];
    switch (op.kind) {
      case Formula::Kind::True: val[i] = Truth::True; break;
      case Formula::Kind::False: val[i] = Truth::False; break;
      case Formula::Kind::Var: val[i] = assign[op.index]; break;
      case Formula::Kind::Not: {
        const Truth t = val[op.lhs];
        val[i] = t == Truth::Unknown ? t : (t == Truth::True ? Truth::False : Truth::True);
        break;
      }
      case Formula::Kind::And: {
        const Truth a = val[op.lhs], b = val[op.rhs];
        if (a == Truth::False || b == Truth::False) val[i] = Truth::False;
        else if (a == Truth::True && b == Truth::True) val[i] = Truth::True;
        else val[i] = Truth::Unknown;
        break;
      }
      case Formula::Kind::Or: {
        const Truth a = val[op.lhs], b = val[op.rhs];
        if (a == Truth::True || b == Truth::True) val[i] = Truth::True;
        else if (a == Truth::False && b == Truth::False) val[i] = Truth::False;
        else val[i] = Truth::Unknown;
        break;
      }
    }
  }
}

Truth CompiledFormula::eval(const std::vector<Truth>& assign) const {
  thread_local std::vector<Truth> val;
  eval_all(assign, val);
  return val.back();
}

bool CompiledFormula::satisfiable(std::vector<Truth>& assign) const {
  std::vector<Truth> val;
  return search(assign, val);
}

// Literals that are conjuncts of the undecided top-level conjunction are
// assigned without branching; otherwise split on the leftmost undecided
// variable.
bool CompiledFormula::search(std::vector<Truth>& assign, std::vector<Truth>& val) const {
  std::vector<std::size_t> trail;
  auto finish = [&](bool result) {
    for (auto slot : trail) assign[slot] = Truth::Unknown;
    return result;
  };
  std::vector<std::size_t> stack;
  while (true) {
    eval_all(assign, val);
    if (val.back() != Truth::Unknown) return finish(val.back() == Truth::True);
    bool progress = false;
    stack.assign(1, ops_.size() - 1);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      if (val[i] != Truth::Unknown) continue;
      const Op& op = ops_[i];
      std::optional<std::pair<std::size_t, Truth>> lit;
      if (op.kind == Formula::Kind::And) {
        stack.push_back(op.rhs);
        stack.push_back(op.lhs);
      } else if (op.kind == Formula::Kind::Var) {
        lit.emplace(op.index, Truth::True);
      } else if (op.kind == Formula::Kind::Not && ops_[op.lhs].kind == Formula::Kind::Var) {
        lit.emplace(ops_[op.lhs].index, Truth::False);
      }
      if (!lit) continue;
      Truth& cur = assign[lit->first];
      if (cur == Truth::Unknown) {
        cur = lit->second;
        trail.push_back(lit->first);
        progress = true;
      } else if (cur != lit->second) {
        return finish(false);
      }
    }
    if (!progress) break;
  }
  std::size_t i = ops_.size() - 1;
  while (ops_[i].kind != Formula::Kind::Var) {
    const Op& op = ops_[i];
    i = (op.kind == Formula::Kind::Not || val[op.lhs] == Truth::Unknown) ? op.lhs : op.rhs;
  }
  const std::size_t slot = ops_[i].index;
  for (Truth value : {Truth::True, Truth::False}) {
    assign[slot] = value;
    if (search(assign, val)) {
      assign[slot] = Truth::Unknown;
      return finish(true);
    }
  }
  assign[slot] = Truth::Unknown;
  return finish(false);
}

namespace {

Formula exclusive_or(const Formula& a, const Formula& b) { return (a && !b) || (!a && b); }

}  // namespace

bool is_sat(const Formula& f) {
  CompiledFormula c(f);
  std::vector<Truth> assign(c.vars().size(), Truth::Unknown);
  return c.satisfiable(assign);
}

bool implies(const Formula& f, const Formula& g) { return !is_sat(f && !g); }

bool equiv(const Formula& f, const Formula& g) { return implies(f, g) && implies(g, f); }

std::vector<NodeId> essential_vars(const Formula& f) {
  std::vector<NodeId> out;
  for (NodeId v : f.free_vars()) {
    if (is_sat(exclusive_or(f.substitute(v, true), f.substitute(v, false)))) out.push_back(v);
  }
  return out;
}

std::map<NodeId, bool> implied_literals(const Formula& f) {
  std::map<NodeId, bool> out;
  for (NodeId v : f.free_vars()) {
    if (implies(f, Formula::var(v))) out.emplace(v, true);
    else if (implies(f, !Formula::var(v))) out.emplace(v, false);
  }
  return out;
}

Formula cube(const std::map<NodeId, bool>& literals) {
  std::vector<Formula> parts;
  parts.reserve(literals.size());
  for (const auto& [id, positive] : literals) {
    parts.push_back(positive ? Formula::var(id) : !Formula::var(id));
  }
  return Formula::conj_all(parts);
}

Truth eval_partial(const Formula& f, const Valuation& partial) {
  CompiledFormula c(f);
  std::vector<Truth> assign(c.vars().size(), Truth::Unknown);
  for (std::size_t i = 0; i < c.vars().size(); ++i) {
    auto it = partial.find(c.vars()[i]);
    if (it != partial.end()) assign[i] = it->second ? Truth::True : Truth::False;
  }
  return c.eval(assign);
}

bool cube_implies(const Valuation& partial, const Formula& f) {
  CompiledFormula c(!f);
  std::vector<Truth> assign(c.vars().size(), Truth::Unknown);
  for (std::size_t i = 0; i < c.vars().size(); ++i) {
    auto it = partial.find(c.vars()[i]);
    if (it != partial.end()) assign[i] = it->second ? Truth::True : Truth::False;
  }
  return !c.satisfiable(assign);
}

nlohmann::json to_json(const Formula& f) {
  using nlohmann::json;
  switch (f.kind()) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Var: return json::array({"var", f.id()});
    case Formula::Kind::Not: return json::array({"not", to_json(f.lhs())});
    case Formula::Kind::And: return json::array({"and", to_json(f.lhs()), to_json(f.rhs())});
    case Formula::Kind::Or: return json::array({"or", to_json(f.lhs()), to_json(f.rhs())});
  }
  return nullptr;
}

Formula formula_from_json(const nlohmann::json& j) {
  if (j.is_boolean()) return j.get<bool>() ? Formula::tru() : Formula::fls();
  if (!j.is_array() || j.empty() || !j[0].is_string()) {
    throw std::invalid_argument("malformed formula JSON: " + j.dump());
  }
  const auto tag = j[0].get<std::string>();
  if (tag == "var" && j.size() == 2) return Formula::var(j[1].get<NodeId>());
  if (tag == "not" && j.size() == 2) return !formula_from_json(j[1]);
  if (tag == "and" && j.size() == 3) return formula_from_json(j[1]) && formula_from_json(j[2]);
  if (tag == "or" && j.size() == 3) return formula_from_json(j[1]) || formula_from_json(j[2]);
  throw std::invalid_argument("malformed formula JSON: " + j.dump());
}

}  // namespace pomsem
