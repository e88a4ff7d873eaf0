#pragma once

#include <vector>

#include <gmpxx.h>

namespace pomsem {

/// Is there x >= 0 with a x = b? Exact phase-one simplex using Bland's rule,
/// so it always terminates. `a` is row-major; every row has the same width.
bool lp_feasible(const std::vector<std::vector<mpq_class>>& a, const std::vector<mpq_class>& b);

}  // namespace pomsem
