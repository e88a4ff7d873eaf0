#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace pomsem {

/// Node identifiers. Fresh ids are handed out by a NodeSupply (see ops.hpp).
using NodeId = std::uint64_t;

using Valuation = std::map<NodeId, bool>;

class UnboundVariable : public std::runtime_error {
 public:
  explicit UnboundVariable(NodeId id);
  NodeId id() const { return id_; }

 private:
  NodeId id_;
};

/// Boolean formula whose variables are node identifiers.
///
/// Formulas are immutable and share structure, so copying is cheap. There is
/// no normal form: constructors never rewrite, and every comparison that
/// matters semantically goes through `equiv`/`implies`.
class Formula {
 public:
  enum class Kind : std::uint8_t { True, False, And, Or, Not, Var };

  Formula();  // True

  static Formula tru();
  static Formula fls();
  static Formula var(NodeId id);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula neg(Formula f);

  /// Conjunction of all `parts`, left-nested; True for an empty list.
  static Formula conj_all(const std::vector<Formula>& parts);
  /// Disjunction of all `parts`, left-nested; False for an empty list.
  static Formula disj_all(const std::vector<Formula>& parts);

  Kind kind() const;
  const Formula& lhs() const;  // And/Or, and the operand of Not
  const Formula& rhs() const;  // And/Or
  NodeId id() const;           // Var

  bool eval(const Valuation& v) const;

  /// Sorted, duplicate-free.
  std::vector<NodeId> free_vars() const;

  /// Syntactic renaming; variables absent from `f` are kept.
  Formula rename(const std::map<NodeId, NodeId>& f) const;

  /// Replace variable `id` by a constant.
  Formula substitute(NodeId id, bool value) const;

  std::size_t size() const;
  std::string to_string() const;

  /// Structural identity (same tree).
  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering structural_compare(const Formula& a, const Formula& b);

  struct Node;  // defined in formula.cpp

 private:
  explicit Formula(std::shared_ptr<const Node> node);
  explicit Formula(std::nullptr_t) {}  // empty child slot of a leaf node
  std::shared_ptr<const Node> node_;
};

/// Fixed total order on syntax trees: smaller trees first, then by shape.
/// Used to pick deterministic representatives of equivalence classes.
std::strong_ordering structural_compare(const Formula& a, const Formula& b);

inline Formula operator&&(Formula a, Formula b) { return Formula::conj(std::move(a), std::move(b)); }
inline Formula operator||(Formula a, Formula b) { return Formula::disj(std::move(a), std::move(b)); }
inline Formula operator!(Formula a) { return Formula::neg(std::move(a)); }

bool is_sat(const Formula& f);
bool implies(const Formula& f, const Formula& g);
bool equiv(const Formula& f, const Formula& g);

/// Variables the formula's truth value actually depends on.
std::vector<NodeId> essential_vars(const Formula& f);

/// Literals entailed by `f`: id -> polarity.
std::map<NodeId, bool> implied_literals(const Formula& f);

/// Conjunction of literals, in ascending id order; True when empty.
Formula cube(const std::map<NodeId, bool>& literals);

/// Three-valued evaluation under a partial assignment.
enum class Truth : std::uint8_t { False = 0, True = 1, Unknown = 2 };
Truth eval_partial(const Formula& f, const Valuation& partial);

/// Does `partial` (read as a conjunction of literals) entail `f`?
bool cube_implies(const Valuation& partial, const Formula& f);

/// A formula flattened to postfix form for repeated evaluation. Variables
/// are addressed by their position in `vars()`.
class CompiledFormula {
 public:
  explicit CompiledFormula(const Formula& f);

  const std::vector<NodeId>& vars() const { return vars_; }

  Truth eval(const std::vector<Truth>& assign) const;

  /// Is some completion of `assign` a model? `assign` is restored on return.
  bool satisfiable(std::vector<Truth>& assign) const;

 private:
  struct Op {
    Formula::Kind kind;
    std::size_t index = 0;     // variable slot for Var
    std::size_t lhs = 0, rhs = 0;  // operand positions for Not/And/Or
  };
  std::size_t emit(const Formula& f);
  void eval_all(const std::vector<Truth>& assign, std::vector<Truth>& val) const;
  bool search(std::vector<Truth>& assign, std::vector<Truth>& val) const;

  std::vector<NodeId> vars_;
  std::vector<Op> ops_;  // postfix: operands precede their operator
};

nlohmann::json to_json(const Formula& f);
Formula formula_from_json(const nlohmann::json& j);

}  // namespace pomsem
