#include "multiegs/fp.hpp"

#include <stdexcept>
#include <utility>

namespace multiegs {

bool is_odd_prime(int p) {
  if (p < 3 || p % 2 == 0) return false;
  for (int d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

int inverse_mod(int x, int p) {
  x = mod(x, p);
  if (x == 0) throw std::domain_error("inverse of zero residue");
  // Fermat: x^(p-2)
  long long result = 1, base = x;
  for (int e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<int>(result);
}

int rank_mod(FpMatrix rows, int p) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && mod(rows[pivot][c], p) == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    const int inv = inverse_mod(rows[rank][c], p);
    for (auto& x : rows[rank]) x = mod(static_cast<long long>(x) * inv, p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank)) continue;
      const int f = mod(rows[r][c], p);
      if (f == 0) continue;
      for (std::size_t k = 0; k < cols; ++k)
        rows[r][k] = mod(rows[r][k] - static_cast<long long>(f) * rows[rank][k], p);
    }
    ++rank;
  }
  return rank;
}

FpMatrix left_nullspace(const FpMatrix& rows, int p) {
  // Column-reduce the transpose: solve A^T lambda = 0 with A^T having one
  // column per input row.
  const std::size_t n = rows.size();
  if (n == 0) return {};
  const std::size_t dim = rows.front().size();
  FpMatrix m(dim, std::vector<int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim; ++k) m[k][i] = mod(rows[i][k], p);

  std::vector<int> pivot_col_of_row;
  std::vector<bool> is_pivot(n, false);
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < dim; ++c) {
    std::size_t piv = r;
    while (piv < dim && m[piv][c] == 0) ++piv;
    if (piv == dim) continue;
    std::swap(m[piv], m[r]);
    const int inv = inverse_mod(m[r][c], p);
    for (auto& x : m[r]) x = mod(static_cast<long long>(x) * inv, p);
    for (std::size_t k = 0; k < dim; ++k) {
      if (k == r || m[k][c] == 0) continue;
      const int f = m[k][c];
      for (std::size_t j = 0; j < n; ++j)
        m[k][j] = mod(m[k][j] - static_cast<long long>(f) * m[r][j], p);
    }
    pivot_col_of_row.push_back(static_cast<int>(c));
    is_pivot[c] = true;
    ++r;
  }

  FpMatrix basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<int> lambda(n, 0);
    lambda[free] = 1;
    for (std::size_t k = 0; k < pivot_col_of_row.size(); ++k)
      lambda[pivot_col_of_row[k]] = mod(-m[k][free], p);
    basis.push_back(std::move(lambda));
  }
  return basis;
}

}  // namespace multiegs
