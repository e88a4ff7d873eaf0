#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>

#include "pomsem/lpof.hpp"

namespace pomsem {

struct CanonicalForm {
  Lpof repr;                          // nodes renumbered 0..n-1
  std::map<NodeId, NodeId> relabel;   // original id -> canonical id
  std::string certificate;            // equal iff isomorphic
};

/// Canonical numbering by colour refinement plus individualisation, choosing
/// the lexicographically least certificate. Formulas enter the certificate
/// through their semantics, so equivalent formulas certify identically.
CanonicalForm canonical_form(const Lpof& a);
Lpof canonicalize(const Lpof& a);

/// A bijection f with f(a) = b (formulas compared up to equivalence), if any.
std::optional<std::map<NodeId, NodeId>> isomorphic(const Lpof& a, const Lpof& b);

/// Isomorphism class of a finite LPOF, held as its canonical representative.
class Pomset {
 public:
  explicit Pomset(const Lpof& a);

  const Lpof& repr() const { return repr_; }
  const std::string& certificate() const { return cert_; }
  std::size_t size() const { return repr_.size(); }

  friend bool operator==(const Pomset& a, const Pomset& b) { return a.cert_ == b.cert_; }
  friend std::strong_ordering operator<=>(const Pomset& a, const Pomset& b) { return a.cert_ <=> b.cert_; }

 private:
  Lpof repr_;
  std::string cert_;
};

/// Is there a downward-closed, level-preserving embedding of A's representative
/// into B's under which the LPOF order holds?
bool le_pom(const Pomset& a, const Pomset& b);

Pomset approximate(const Pomset& a, std::size_t n);

std::string to_dot(const Pomset& p, const std::string& name = "pomset");
nlohmann::json to_json(const Pomset& p);

}  // namespace pomsem
