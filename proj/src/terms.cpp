#include "pomsem/terms.hpp"

#include <sstream>

namespace pomsem {

std::string state_to_string(const State& s) {
  std::string out;
  for (const auto& [name, value] : s) {
    if (!out.empty()) out += ',';
    out += name + '=' + std::to_string(value);
  }
  return out;
}

State parse_state(const std::string& text) {
  State s;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto start = item.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad state entry '" + item + "'");
    auto name = item.substr(start, eq - start);
    while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.pop_back();
    s[name] = std::stoi(item.substr(eq + 1));
  }
  return s;
}

ArithExpr ArithExpr::constant(int value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = value;
  ArithExpr e;
  e.node_ = std::move(n);
  return e;
}

ArithExpr ArithExpr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  ArithExpr e;
  e.node_ = std::move(n);
  return e;
}

ArithExpr ArithExpr::add(ArithExpr lhs, ArithExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Add;
  n->lhs = std::make_shared<const ArithExpr>(std::move(lhs));
  n->rhs = std::make_shared<const ArithExpr>(std::move(rhs));
  ArithExpr e;
  e.node_ = std::move(n);
  return e;
}

int ArithExpr::eval(const State& s) const {
  switch (kind()) {
    case Kind::Const: return value();
    case Kind::Var: {
      auto it = s.find(name());
      if (it == s.end()) throw UnknownVariable(name());
      return it->second;
    }
    case Kind::Add: return lhs().eval(s) + rhs().eval(s);
  }
  return 0;
}

void ArithExpr::collect_vars(std::vector<std::string>& out) const {
  switch (kind()) {
    case Kind::Const: break;
    case Kind::Var: out.push_back(name()); break;
    case Kind::Add:
      lhs().collect_vars(out);
      rhs().collect_vars(out);
      break;
  }
}

std::string ArithExpr::to_string() const {
  switch (kind()) {
    case Kind::Const: return std::to_string(value());
    case Kind::Var: return name();
    case Kind::Add: {
      auto r = rhs().to_string();
      if (rhs().kind() == Kind::Add) r = "(" + r + ")";
      return lhs().to_string() + " + " + r;
    }
  }
  return {};
}

TestTerm TestTerm::constant(bool value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = value;
  TestTerm t;
  t.node_ = std::move(n);
  return t;
}

TestTerm TestTerm::compare(Op op, ArithExpr lhs, ArithExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Cmp;
  n->op = op;
  n->left = std::make_shared<const ArithExpr>(std::move(lhs));
  n->right = std::make_shared<const ArithExpr>(std::move(rhs));
  TestTerm t;
  t.node_ = std::move(n);
  return t;
}

TestTerm TestTerm::conj(TestTerm lhs, TestTerm rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->lhs = std::make_shared<const TestTerm>(std::move(lhs));
  n->rhs = std::make_shared<const TestTerm>(std::move(rhs));
  TestTerm t;
  t.node_ = std::move(n);
  return t;
}

TestTerm TestTerm::disj(TestTerm lhs, TestTerm rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->lhs = std::make_shared<const TestTerm>(std::move(lhs));
  n->rhs = std::make_shared<const TestTerm>(std::move(rhs));
  TestTerm t;
  t.node_ = std::move(n);
  return t;
}

TestTerm TestTerm::neg(TestTerm operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->lhs = std::make_shared<const TestTerm>(std::move(operand));
  TestTerm t;
  t.node_ = std::move(n);
  return t;
}

bool TestTerm::eval(const State& s) const {
  switch (kind()) {
    case Kind::Const: return value();
    case Kind::Cmp: {
      int a = left().eval(s);
      int b = right().eval(s);
      switch (op()) {
        case Op::Eq: return a == b;
        case Op::Ne: return a != b;
        case Op::Lt: return a < b;
        case Op::Le: return a <= b;
        case Op::Gt: return a > b;
        case Op::Ge: return a >= b;
      }
      return false;
    }
    case Kind::And: {
      bool a = lhs().eval(s);
      bool b = rhs().eval(s);
      return a && b;
    }
    case Kind::Or: {
      bool a = lhs().eval(s);
      bool b = rhs().eval(s);
      return a || b;
    }
    case Kind::Not: return !lhs().eval(s);
  }
  return false;
}

void TestTerm::collect_vars(std::vector<std::string>& out) const {
  switch (kind()) {
    case Kind::Const: break;
    case Kind::Cmp:
      left().collect_vars(out);
      right().collect_vars(out);
      break;
    case Kind::And:
    case Kind::Or:
      lhs().collect_vars(out);
      rhs().collect_vars(out);
      break;
    case Kind::Not: lhs().collect_vars(out); break;
  }
}

namespace {

const char* op_text(TestTerm::Op op) {
  switch (op) {
    case TestTerm::Op::Eq: return "=";
    case TestTerm::Op::Ne: return "!=";
    case TestTerm::Op::Lt: return "<";
    case TestTerm::Op::Le: return "<=";
    case TestTerm::Op::Gt: return ">";
    case TestTerm::Op::Ge: return ">=";
  }
  return "?";
}

}  // namespace

std::string TestTerm::to_string() const {
  switch (kind()) {
    case Kind::Const: return value() ? "true" : "false";
    case Kind::Cmp: return left().to_string() + op_text(op()) + right().to_string();
    case Kind::And: return "(" + lhs().to_string() + " and " + rhs().to_string() + ")";
    case Kind::Or: return "(" + lhs().to_string() + " or " + rhs().to_string() + ")";
    case Kind::Not: return "not " + lhs().to_string();
  }
  return {};
}

ActionTerm ActionTerm::assign(std::string var, ArithExpr expr) {
  ActionTerm a;
  a.kind_ = Kind::Assign;
  a.var_ = std::move(var);
  a.expr_ = std::make_shared<const ArithExpr>(std::move(expr));
  return a;
}

ActionTerm ActionTerm::flip(std::string var, mpq_class p) {
  p.canonicalize();
  if (p < 0 || p > 1) throw std::invalid_argument("flip probability outside [0,1]: " + p.get_str());
  ActionTerm a;
  a.kind_ = Kind::Flip;
  a.var_ = std::move(var);
  a.prob_ = std::move(p);
  return a;
}

ActionTerm ActionTerm::assume(TestTerm test) {
  ActionTerm a;
  a.kind_ = Kind::Assume;
  a.test_ = std::make_shared<const TestTerm>(std::move(test));
  return a;
}

void ActionTerm::collect_vars(std::vector<std::string>& out) const {
  switch (kind_) {
    case Kind::Assign:
      out.push_back(var_);
      expr_->collect_vars(out);
      break;
    case Kind::Flip: out.push_back(var_); break;
    case Kind::Assume: test_->collect_vars(out); break;
  }
}

std::string ActionTerm::to_string() const {
  switch (kind_) {
    case Kind::Assign: return var_ + ":=" + expr_->to_string();
    case Kind::Flip: return var_ + "~flip(" + prob_.get_str() + ")";
    case Kind::Assume: return "assume(" + test_->to_string() + ")";
  }
  return {};
}

State assign_var(const State& s, const std::string& var, int value, const Interp& interp) {
  auto it = s.find(var);
  if (it == s.end()) throw UnknownVariable(var);
  const int m = interp.vmax + 1;
  State out = s;
  out[var] = ((value % m) + m) % m;
  return out;
}

}  // namespace pomsem
