#include "pomsem/lp.hpp"

#include <stdexcept>

namespace pomsem {

bool lp_feasible(const std::vector<std::vector<mpq_class>>& a, const std::vector<mpq_class>& b) {
  const std::size_t m = a.size();
  if (b.size() != m) throw std::invalid_argument("lp_feasible: row count mismatch");
  if (m == 0) return true;
  const std::size_t n = a.front().size();
  for (const auto& row : a) {
    if (row.size() != n) throw std::invalid_argument("lp_feasible: ragged matrix");
  }
  // Columns: n originals, m artificials, then the right-hand side.
  const std::size_t width = n + m + 1;
  std::vector<std::vector<mpq_class>> t(m + 1, std::vector<mpq_class>(width, 0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const int sign = b[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = sign * a[i][j];
    t[i][n + i] = 1;
    t[i][n + m] = sign * b[i];
    basis[i] = n + i;
  }
  // Objective row: reduced costs of minimising the sum of artificials.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[m][j] -= t[i][j];
    t[m][n + m] -= t[i][n + m];
  }
  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (t[m][j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    mpq_class best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      mpq_class ratio = t[i][n + m] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded cannot happen in phase one
    const mpq_class pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const mpq_class factor = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= factor * t[leave][j];
    }
    basis[leave] = enter;
  }
  return t[m][n + m] == 0;
}

}  // namespace pomsem
