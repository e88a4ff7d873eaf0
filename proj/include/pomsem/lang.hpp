#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pomsem/ops.hpp"
#include "pomsem/terms.hpp"

namespace pomsem {

class Cmd;
using CmdPtr = std::shared_ptr<const Cmd>;

class Cmd {
 public:
  enum class Kind { Skip, Seq, Par, If, While, Act };

  static CmdPtr skip();
  static CmdPtr seq(CmdPtr a, CmdPtr b);
  static CmdPtr par(CmdPtr a, CmdPtr b);
  static CmdPtr ite(TestTerm b, CmdPtr then_branch, CmdPtr else_branch);
  static CmdPtr loop(TestTerm b, CmdPtr body);
  static CmdPtr act(ActionTerm a);

  Kind kind() const { return kind_; }
  const CmdPtr& first() const { return a_; }   // Seq/Par lhs, If then, While body
  const CmdPtr& second() const { return b_; }  // Seq/Par rhs, If else
  const TestTerm& test() const { return *test_; }
  const ActionTerm& action() const { return *action_; }

 private:
  Kind kind_ = Kind::Skip;
  CmdPtr a_, b_;
  std::shared_ptr<const TestTerm> test_;
  std::shared_ptr<const ActionTerm> action_;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

/// cmd  ::= seq | seq "||" cmd
/// seq  ::= atom | atom ";" seq
/// atom ::= "skip" | var ":=" aexp | var "~" "flip" "(" rat ")"
///        | "if" bexp "{" cmd "}" "else" "{" cmd "}"
///        | "while" bexp "{" cmd "}" | "(" cmd ")"
/// Tests use = (or ==), !=, <, <=, >, >=, and/or/not, true/false.
CmdPtr parse_program(const std::string& text);
TestTerm parse_test(const std::string& text);

/// Prints in the concrete syntax; parse_program(print(c)) is structurally c.
std::string print(const CmdPtr& c);

std::size_t ast_size(const CmdPtr& c);
bool contains_par(const CmdPtr& c);
bool contains_loop(const CmdPtr& c);
bool contains_flip(const CmdPtr& c);
std::vector<std::string> program_vars(const CmdPtr& c);  // sorted, unique

/// Pomset semantics with every while loop replaced by its depth-th Kleene
/// iterate from the bottom pomset.
Lpof denote_lpof(const CmdPtr& c, std::size_t depth, NodeSupply& supply);
Pomset denote(const CmdPtr& c, std::size_t depth);

/// One step of the loop functional: guard(b, seq(body, a), skip).
Pomset loop_step(const TestTerm& b, const Pomset& body, const Pomset& a);

bool check_binary_branching(const Lpof& a);
inline bool check_binary_branching(const Pomset& p) { return check_binary_branching(p.repr()); }

}  // namespace pomsem
