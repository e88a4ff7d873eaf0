#pragma once

#include <vector>

#include "pomsem/pomset.hpp"

namespace pomsem {

/// Hands out node identifiers that have not been used before.
class NodeSupply {
 public:
  explicit NodeSupply(NodeId first = 0) : next_(first) {}
  NodeId fresh() { return next_++; }
  /// Never hand out anything at or below `used`.
  void reserve(NodeId used) { next_ = std::max(next_, used + 1); }
  NodeId peek() const { return next_; }

 private:
  NodeId next_;
};

/// Copy of `a` on fresh node ids.
Lpof fresh_copy(const Lpof& a, NodeSupply& supply);

// ---- branch machinery -------------------------------------------------------

Formula stuck(const Lpof& a);
std::vector<NodeId> extensible(const Lpof& a);

struct Branch {
  Formula formula;         // representative of the equivalence class
  std::vector<NodeId> nodes;  // the extensible subset whose conjunction it is
};

enum class BranchMethod {
  Valuations,  // enumerate test outcomes with three-valued pruning
  Subsets,     // brute force over subsets of extensible nodes
};

/// Maximal satisfiable conjunctions of extensible formulas that avoid every
/// stuck node, deduplicated by equivalence and sorted by representative.
std::vector<Branch> branches(const Lpof& a, BranchMethod method = BranchMethod::Valuations);

// ---- constructors on LPOFs (caller guarantees disjoint node sets) ----------

Lpof guard(NodeId x, const TestTerm& b, const Lpof& a, const Lpof& c);
Lpof seq(const Lpof& a, const Lpof& b, NodeSupply& supply);
Lpof par(NodeId x, const Lpof& a, const Lpof& b);

/// seq, but with copy roots attached to every node implied by the branch
/// rather than only the maximal ones. Used to check that both give the same
/// order.
Lpof seq_literal_edges(const Lpof& a, const Lpof& b, NodeSupply& supply);

// ---- constructors on pomsets ----------------------------------------------

Pomset singleton(const Label& l);
Pomset bottom_pomset();
Pomset guard(const TestTerm& b, const Pomset& a, const Pomset& c);
Pomset seq(const Pomset& a, const Pomset& b);
Pomset par(const Pomset& a, const Pomset& b);

}  // namespace pomsem
