#pragma once

#include <stdexcept>
#include <vector>

#include "pomsem/domains.hpp"
#include "pomsem/lang.hpp"
#include "pomsem/pomset.hpp"

namespace pomsem {

class ContainsParallel : public std::runtime_error {
 public:
  ContainsParallel() : std::runtime_error("program contains parallel composition") {}
};

/// Nodes outside `done` whose strict predecessors are all in `done` and whose
/// formula is entailed by `psi`. Sorted.
std::vector<NodeId> next(const Lpof& a, const Formula& psi, const std::vector<NodeId>& done);

/// Interleaving interpretation of a finite LPOF, starting from the path
/// condition `psi` with the nodes in `done` already processed. Choices among
/// ready nodes are combined with D::nd in ascending node order.
template <class D>
typename D::Value lin_lpof(const Lpof& a, const Formula& psi, const std::vector<NodeId>& done, const State& s,
                           const Interp& interp = {});

template <class D>
typename D::Value lin_lpof(const Lpof& a, const State& s, const Interp& interp = {}) {
  return lin_lpof<D>(a, Formula::tru(), {}, s, interp);
}

/// Linearization of the depth-n approximation of `p`.
template <class D>
typename D::Value lin(const Pomset& p, std::size_t n, const State& s, const Interp& interp = {}) {
  return lin_lpof<D>(truncate(p.repr(), n), s, interp);
}

/// Truncation depth that keeps every node of a finite LPOF.
inline std::size_t full_depth(const Lpof& a) { return a.max_level() + 1; }

/// lin(denote(c, n), full_depth, s): loops are the n-th iterates and the
/// resulting finite pomset is linearized whole.
template <class D>
typename D::Value lin_program(const CmdPtr& c, std::size_t n, const State& s, const Interp& interp = {}) {
  NodeSupply supply;
  return lin_lpof<D>(denote_lpof(c, n, supply), s, interp);
}

/// Direct sequential semantics with loops as n-th iterates of their
/// characteristic function from the constant-bottom map. Throws
/// ContainsParallel.
template <class D>
typename D::Value sequential_semantics(const CmdPtr& c, std::size_t n, const State& s, const Interp& interp = {});

inline ConvexSet convex_semantics(const CmdPtr& c, std::size_t n, const State& s, const Interp& interp = {}) {
  return sequential_semantics<ConvexDomain>(c, n, s, interp);
}

/// Small-step interleaving over thread trees, with every loop allowed n guard
/// evaluations before it diverges. Shares no code with the pomset semantics.
template <class D>
typename D::Value oracle_interleave(const CmdPtr& c, std::size_t n, const State& s, const Interp& interp = {});

}  // namespace pomsem
