#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "pomsem/formula.hpp"
#include "pomsem/terms.hpp"

namespace pomsem {

class Label {
 public:
  enum class Kind { Action, Test, Fork, Bot };

  static Label action(ActionTerm a);
  static Label test(TestTerm b);
  static Label fork();
  static Label bot();

  Kind kind() const;
  bool is_bot() const { return kind() == Kind::Bot; }
  bool is_test() const { return kind() == Kind::Test; }
  const ActionTerm& action_term() const;
  const TestTerm& test_term() const;

  /// "x:=1", "x=1?", "fork", "bot".
  std::string to_string() const;

  friend bool operator==(const Label& a, const Label& b);

 private:
  struct ForkTag {};
  struct BotTag {};
  std::variant<ActionTerm, TestTerm, ForkTag, BotTag> v_ = BotTag{};
};

/// Flat label order with Bot below everything; the action order is the identity.
bool label_leq(const Label& a, const Label& b);

class InvalidLpof : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownNode : public std::runtime_error {
 public:
  explicit UnknownNode(NodeId id) : std::runtime_error("unknown node " + std::to_string(id)), id_(id) {}
  NodeId id() const { return id_; }

 private:
  NodeId id_;
};

class NotAChain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NodeSpec {
  NodeId id;
  Label label;
  Formula formula;
};

using Edge = std::pair<NodeId, NodeId>;
using Bitset = boost::dynamic_bitset<>;

/// A finite labelled partial order with formulae.
///
/// Built from nodes and any generating edge set; the strict order is the
/// transitive closure and the covering relation is recomputed. Cyclic input is
/// accepted and reported by `validate`, but most operations reject it.
class Lpof {
 public:
  Lpof(std::vector<NodeSpec> nodes, const std::vector<Edge>& edges);
  static Lpof singleton(NodeId id, Label label, Formula formula = Formula::tru());

  /// Sorted ascending.
  const std::vector<NodeId>& nodes() const;
  std::size_t size() const;
  bool contains(NodeId x) const;

  const Label& label(NodeId x) const;
  const Formula& formula(NodeId x) const;

  std::vector<NodeId> succ(NodeId x) const;
  std::vector<NodeId> pred(NodeId x) const;
  std::vector<NodeId> succ_plus(NodeId x) const;
  std::vector<NodeId> pred_plus(NodeId x) const;
  bool less(NodeId x, NodeId y) const;
  std::size_t level(NodeId x) const;
  std::size_t max_level() const;

  std::vector<NodeId> minimal() const;
  std::vector<NodeId> maximal() const;
  /// The unique minimal node; throws InvalidLpof when not single-rooted.
  NodeId root() const;
  std::vector<NodeId> bot_nodes() const;
  /// Hasse diagram edges, sorted.
  std::vector<Edge> covers() const;
  bool is_acyclic() const;

  /// Bijective renaming of nodes (and formula variables); unmapped ids are kept.
  Lpof rename(const std::map<NodeId, NodeId>& f) const;
  /// Sub-LPOF on `keep` with the induced order.
  Lpof restrict_to(const std::vector<NodeId>& keep) const;
  /// Same order, new labels/formulas supplied per node.
  Lpof relabel(const std::map<NodeId, Label>& labels, const std::map<NodeId, Formula>& formulas) const;

  // Index-level access for algorithms that work on dense node indices.
  std::size_t index(NodeId x) const;
  NodeId id_at(std::size_t i) const;
  const std::vector<std::size_t>& succ_idx(std::size_t i) const;
  const std::vector<std::size_t>& pred_idx(std::size_t i) const;
  const Bitset& up(std::size_t i) const;    // strict successors
  const Bitset& down(std::size_t i) const;  // strict predecessors
  std::size_t level_idx(std::size_t i) const;
  const Label& label_idx(std::size_t i) const;
  const Formula& formula_idx(std::size_t i) const;

 private:
  struct Impl;
  explicit Lpof(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

struct Violation {
  std::string condition;  // "2", "2c", "3", "4a", "4b"
  std::vector<NodeId> nodes;
  std::string message;
};

/// Checks the LPOF conditions; empty iff valid. Finiteness makes conditions
/// 2a/2b hold by construction, so they never appear.
std::vector<Violation> validate(const Lpof& a);
void require_valid(const Lpof& a, const char* what);

bool le_lpof(const Lpof& a, const Lpof& b);
bool equal_lpof(const Lpof& a, const Lpof& b);  // same nodes/order/labels, equivalent formulas

/// Keep nodes of level <= n and turn the level-n ones into Bot.
Lpof truncate(const Lpof& a, std::size_t n);

/// Component-wise union of a finite chain a0 <= a1 <= ...
Lpof sup_chain(const std::vector<Lpof>& chain);

/// Formula of a node set: conjunction of member formulas.
Formula conj_of(const Lpof& a, const std::vector<NodeId>& nodes);

std::string to_dot(const Lpof& a, const std::string& name = "lpof");
nlohmann::json to_json(const Lpof& a);

}  // namespace pomsem
