#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json_fwd.hpp>

#include "pomsem/terms.hpp"

namespace pomsem {

using StateSet = std::set<State>;

/// A proper state, or nullopt for the undefined outcome.
using Lifted = std::optional<State>;

/// Finite distribution over lifted states; entries are positive and sum to 1.
using Dist = std::map<Lifted, mpq_class>;

class DimensionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finitely generated element of the convex powerset: the upward closure of
/// the convex hull of `generators`, where moving mass off the undefined
/// outcome goes up. Values built by the domain operations keep exactly the
/// extreme generators, sorted, so equal sets have equal generator lists.
struct ConvexSet {
  std::vector<Dist> generators;

  friend bool operator==(const ConvexSet&, const ConvexSet&) = default;
};

Dist point_mass(const Lifted& x);
std::string lifted_to_string(const Lifted& x);  // state text or "bot"

/// Does every generator of `s` lie in the upward closure of conv(t)?
/// Decided exactly by linear feasibility. Throws DimensionMismatch when the
/// proper states of `s` and `t` do not share one variable set.
bool hull_leq(const ConvexSet& s, const ConvexSet& t);
bool hull_equal(const ConvexSet& s, const ConvexSet& t);

/// Drops every generator lying in the upward closure of the others' hull,
/// then sorts. The result is the unique minimal generating set.
ConvexSet reduce(std::vector<Dist> generators);

/// Every state over `vars` with values in [0, vmax], in lexicographic order.
std::vector<State> all_states(const std::vector<std::string>& vars, const Interp& interp);

/// Powerset of states ordered by inclusion. Coin flips lose their
/// probabilities and become a choice over the outcomes in their support.
struct HoareDomain {
  using Value = StateSet;
  static constexpr const char* name = "hoare";

  static Value unit(const State& s) { return {s}; }
  static Value bottom() { return {}; }
  static Value nd(const Value& a, const Value& b);
  template <class F>
  static Value bind(F&& f, const Value& d) {
    Value out;
    for (const State& s : d) {
      Value image = f(s);
      out.insert(image.begin(), image.end());
    }
    return out;
  }
  static Value action(const ActionTerm& a, const State& s, const Interp& interp);
  static bool test(const TestTerm& b, const State& s) { return b.eval(s); }
  static bool equal(const Value& a, const Value& b) { return a == b; }
  static bool leq(const Value& a, const Value& b);
  static nlohmann::json to_json(const Value& v);
};

/// Convex powerset of distributions over lifted states, ordered by reverse
/// inclusion of the denoted upward-closed sets.
struct ConvexDomain {
  using Value = ConvexSet;
  static constexpr const char* name = "convex";

  static Value unit(const State& s) { return {{point_mass(s)}}; }
  static Value bottom() { return {{point_mass(std::nullopt)}}; }
  static Value nd(const Value& a, const Value& b);
  /// Kleisli extension given the image of every proper state in the support.
  static Value bind_images(const Value& d, const std::map<State, Value>& images);
  template <class F>
  static Value bind(F&& f, const Value& d) {
    std::map<State, Value> images;
    for (const Dist& g : d.generators) {
      for (const auto& [x, p] : g) {
        if (x && !images.count(*x)) images.emplace(*x, f(*x));
      }
    }
    return bind_images(d, images);
  }
  static Value action(const ActionTerm& a, const State& s, const Interp& interp);
  static bool test(const TestTerm& b, const State& s) { return b.eval(s); }
  static bool equal(const Value& a, const Value& b) { return hull_equal(a, b); }
  static bool leq(const Value& a, const Value& b) { return hull_leq(b, a); }
  static nlohmann::json to_json(const Value& v);
};

nlohmann::json to_json(const Dist& d);

}  // namespace pomsem
