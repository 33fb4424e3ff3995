#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace tpmg {

/// Signals a vanishing pivot in the Thomas elimination. The stencil is
/// diagonally dominant, so this always points at an upstream bug.
class ZeroPivotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tridiagonal system with diagonal a (n), superdiagonal b (n-1), subdiagonal
/// c (n-1, c[i] couples row i+1 to column i) and right-hand side f (n).
struct TridiagonalSystem {
  std::vector<double> a, b, c, f;
};

inline constexpr double kZeroPivot = 1e-300;

/// Thomas algorithm without pivoting. `scratch` must hold at least n values
/// (the modified superdiagonal); u may alias f. Inputs other than u are not
/// modified.
void thomas_solve(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                  std::span<const double> f, std::span<double> u, std::span<double> scratch);

std::vector<double> thomas_solve(const TridiagonalSystem& sys);

}  // namespace tpmg
