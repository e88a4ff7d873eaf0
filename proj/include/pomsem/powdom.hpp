#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "pomsem/domains.hpp"
#include "pomsem/lang.hpp"
#include "pomsem/ops.hpp"

namespace pomsem {

/// A finite set of finite pomsets whose nodes carry actions (including
/// assume), fork, and formula True only.
using PomLang = std::set<Pomset>;

class PreconditionViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotABranch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every node of `a` before every node of `b`. Requires `a` free of Bot and
/// with all formulas True.
Pomset seq_flat(const Pomset& a, const Pomset& b);

/// Pomset-language semantics; loops are the n-th iterate from the empty set.
PomLang denote_powdom(const CmdPtr& c, std::size_t n);

/// The nodes on branch `psi`, with tests replaced by the assume action of the
/// outcome `psi` selects and all formulas set to True. Throws NotABranch.
Lpof tr_lpof(const Lpof& a, const Formula& psi);

/// One translated pomset per branch of the finite LPOF `a`.
PomLang tr_fin(const Lpof& a);
/// tr_fin of the depth-n approximation.
PomLang tr(const Pomset& p, std::size_t n);

StateSet lin_powdom(const PomLang& l, const State& s, const Interp& interp = {});

/// The three routes from a program to a Hoare state transformer, evaluated at
/// one state. Pomsets are linearized whole (see full_depth).
struct DiagramReport {
  StateSet via_pomset;       // lin of the pomset semantics
  StateSet via_translation;  // lin_powdom of its translation
  StateSet via_language;     // lin_powdom of the pomset-language semantics
  bool languages_equal = false;  // translation == language semantics

  bool commutes() const { return via_pomset == via_translation && via_translation == via_language; }
  nlohmann::json to_json() const;
};

DiagramReport check_diagram(const CmdPtr& c, std::size_t n, const State& s, const Interp& interp = {});

nlohmann::json to_json(const PomLang& l);

}  // namespace pomsem
