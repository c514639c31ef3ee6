#pragma once

#include <cstdint>
#include <vector>

namespace multiegs {

/// Residue in F_p stored in [0, p).
using Residue = std::uint8_t;

/// Largest supported prime; labels are stored in a byte.
inline constexpr int kMaxPrime = 251;

bool is_odd_prime(int p);

inline int mod(long long x, int p) {
  long long r = x % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

/// Multiplicative inverse of a non-zero residue.
int inverse_mod(int x, int p);

/// Rows are vectors over F_p; all rows share one length.
using FpMatrix = std::vector<std::vector<int>>;

/// Rank of the span of the given rows.
int rank_mod(FpMatrix rows, int p);

/// Basis of {lambda : sum_i lambda_i * rows[i] = 0}, one vector per free row,
/// in reduced form: the coefficient at the free row is 1 and coefficients at
/// later free rows vanish.
FpMatrix left_nullspace(const FpMatrix& rows, int p);

}  // namespace multiegs
