#pragma once

#include <string>
#include <vector>

#include "pomsem/domains.hpp"
#include "pomsem/lang.hpp"
#include "pomsem/powdom.hpp"

namespace pomsem::examples {

/// Three LPOFs on the same nodes: fork root x, tests y1 and y2 above it, and
/// z1 (y1 true), z2 (y1 false), z3 (y2 true), z4 (y2 false). alpha1 has bot
/// at z1 and z2, alpha2 only at z1, alpha3 none.
struct StuckTrio {
  static constexpr NodeId x = 0, y1 = 1, y2 = 2, z1 = 3, z2 = 4, z3 = 5, z4 = 6;
  Lpof alpha1, alpha2, alpha3;
  Label w;  // the label composed after each of them
};
StuckTrio stuck_trio();

/// if b1 { a1 } else { if b2 { a2 } else { a3 } } built with guard on nodes
/// x, y1, y2, z1, z2, next to the same LPOF written out by hand.
struct NestedIf {
  static constexpr NodeId x = 0, y1 = 1, y2 = 2, z1 = 3, z2 = 4;
  Lpof built;
  Lpof by_hand;
};
NestedIf nested_if();

/// alpha <= gamma holds, beta <= gamma does not: beta keeps z, which gamma
/// places above the bot node.
struct OrderTrio {
  Lpof alpha, beta, gamma;
};
OrderTrio order_trio();

/// <bot> <= fork{l1, l2}, yet composing both in parallel with <l> breaks it.
struct ParCounterexample {
  Pomset a, b, c;
};
ParCounterexample par_counterexample();

/// x ~ flip(1/2); (if x=1 { y:=0 } else { y:=1 } || y:=2)
extern const char* const coin_race_source;
State coin_race_state();  // x=0,y=0

/// while x=0 { x:=1 }; y:=1
extern const char* const loop_then_action_source;

struct CoinRaceReport {
  ConvexSet lin;                      // convex lin of the pomset semantics
  ConvexSet expected;                 // the four corner distributions
  bool lin_matches = false;
  std::vector<ConvexSet> translated;  // lin of each translated pomset
  bool translated_half_bottom = false;
  ConvexSet recombined;               // nd of the translated linearizations
  bool recombined_differs = false;

  bool ok() const { return lin_matches && translated_half_bottom && recombined_differs; }
  nlohmann::json to_json() const;
};
CoinRaceReport coin_race(std::size_t depth = 1);

}  // namespace pomsem::examples
