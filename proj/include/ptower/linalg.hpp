#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ptower/types.hpp"

namespace ptower {

// Dense matrices over F_p, row-major, entries in [0,p).
struct FpMat {
  int rows = 0, cols = 0;
  std::vector<int> a;

  FpMat() = default;
  FpMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
  int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  int at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
  bool operator==(const FpMat&) const = default;

  static FpMat identity(int n);
};

int inv_mod(int a, int p);
FpMat mat_mul(const FpMat& x, const FpMat& y, int p);
FpMat transpose(const FpMat& x);

// In-place reduced row echelon form, zero rows dropped. Returns pivot columns.
std::vector<int> rref(FpMat& m, int p);
int rank(FpMat m, int p);
// Rows spanning {x : m x^T = 0}, i.e. the annihilator of the row space.
FpMat nullspace(const FpMat& m, int p);
FpMat inverse(const FpMat& m, int p);
int det(FpMat m, int p);
// byte string of the rref, usable as a canonical subspace key
std::string subspace_key(const FpMat& rref_rows);

// Smith form of an integer matrix modulo p^e. Rows are relations on
// generators indexed by columns. Produces the invariants (valuations) and
// a column transform so that coordinates of the quotient are x * colT.
struct SmithResult {
  std::vector<int> valuations;  // per column after transform; e means p^e, e=0 trivial
  std::vector<std::vector<std::int64_t>> colT;  // cols x cols
  std::int64_t modulus = 1;
};
SmithResult smith_mod(std::vector<std::vector<std::int64_t>> rel, int ncols, int p, int e);

}  // namespace ptower
