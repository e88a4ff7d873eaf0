#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace pomsem {

/// Program state: variable name -> value in [0, vmax].
using State = std::map<std::string, int>;

std::string state_to_string(const State& s);  // "x=0,y=1"
State parse_state(const std::string& text);    // inverse of state_to_string

class UnknownVariable : public std::runtime_error {
 public:
  explicit UnknownVariable(const std::string& name)
      : std::runtime_error("unknown variable '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Interpretation parameters shared by every domain.
struct Interp {
  int vmax = 3;  // values range over [0, vmax]; assignments wrap modulo vmax+1
};

class ArithExpr {
 public:
  enum class Kind { Const, Var, Add };

  static ArithExpr constant(int value);
  static ArithExpr variable(std::string name);
  static ArithExpr add(ArithExpr lhs, ArithExpr rhs);

  Kind kind() const { return node_->kind; }
  int value() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  const ArithExpr& lhs() const { return *node_->lhs; }
  const ArithExpr& rhs() const { return *node_->rhs; }

  /// Unreduced integer value; callers wrap when storing into a variable.
  int eval(const State& s) const;
  void collect_vars(std::vector<std::string>& out) const;
  std::string to_string() const;

 private:
  struct Node {
    Kind kind = Kind::Const;
    int value = 0;
    std::string name;
    std::shared_ptr<const ArithExpr> lhs, rhs;
  };
  std::shared_ptr<const Node> node_;
};

class TestTerm {
 public:
  enum class Kind { Const, Cmp, And, Or, Not };
  enum class Op { Eq, Ne, Lt, Le, Gt, Ge };

  static TestTerm constant(bool value);
  static TestTerm compare(Op op, ArithExpr lhs, ArithExpr rhs);
  static TestTerm conj(TestTerm lhs, TestTerm rhs);
  static TestTerm disj(TestTerm lhs, TestTerm rhs);
  static TestTerm neg(TestTerm t);

  Kind kind() const { return node_->kind; }
  bool value() const { return node_->value; }
  Op op() const { return node_->op; }
  const ArithExpr& left() const { return *node_->left; }
  const ArithExpr& right() const { return *node_->right; }
  const TestTerm& lhs() const { return *node_->lhs; }  // And/Or, operand of Not
  const TestTerm& rhs() const { return *node_->rhs; }

  bool eval(const State& s) const;
  void collect_vars(std::vector<std::string>& out) const;
  std::string to_string() const;

  friend bool operator==(const TestTerm& a, const TestTerm& b) { return a.to_string() == b.to_string(); }

 private:
  struct Node {
    Kind kind = Kind::Const;
    bool value = true;
    Op op = Op::Eq;
    std::shared_ptr<const ArithExpr> left, right;
    std::shared_ptr<const TestTerm> lhs, rhs;
  };
  std::shared_ptr<const Node> node_;
};

class ActionTerm {
 public:
  enum class Kind { Assign, Flip, Assume };

  static ActionTerm assign(std::string var, ArithExpr expr);
  /// x ~ flip(p): x becomes 1 with probability p, 0 otherwise.
  static ActionTerm flip(std::string var, mpq_class p);
  static ActionTerm assume(TestTerm test);

  Kind kind() const { return kind_; }
  const std::string& var() const { return var_; }
  const ArithExpr& expr() const { return *expr_; }
  const mpq_class& prob() const { return prob_; }
  const TestTerm& test() const { return *test_; }

  void collect_vars(std::vector<std::string>& out) const;
  std::string to_string() const;

  friend bool operator==(const ActionTerm& a, const ActionTerm& b) { return a.to_string() == b.to_string(); }

 private:
  Kind kind_ = Kind::Assign;
  std::string var_;
  std::shared_ptr<const ArithExpr> expr_;
  mpq_class prob_;
  std::shared_ptr<const TestTerm> test_;
};

/// Apply an assignment (wrapping modulo vmax+1). Throws UnknownVariable.
State assign_var(const State& s, const std::string& var, int value, const Interp& interp);

}  // namespace pomsem
