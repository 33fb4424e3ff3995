#include "tpmg/tridiag.hpp"

#include <cmath>
#include <string>

namespace tpmg {

namespace {

[[noreturn]] void zero_pivot(std::size_t row) {
  throw ZeroPivotError("zero pivot in tridiagonal solve at row " + std::to_string(row));
}

}  // namespace

void thomas_solve(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                  std::span<const double> f, std::span<double> u, std::span<double> scratch) {
  const std::size_t n = a.size();
  if (n == 0) throw std::invalid_argument("empty tridiagonal system");
  if (b.size() + 1 < n || c.size() + 1 < n || f.size() < n || u.size() < n || scratch.size() < n)
    throw std::invalid_argument("tridiagonal system size mismatch");

  // Forward elimination; f' is written into u, b' into scratch.
  double pivot = a[0];
  if (std::abs(pivot) < kZeroPivot) zero_pivot(0);
  u[0] = f[0] / pivot;
  if (n == 1) return;
  scratch[0] = b[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = a[i] - scratch[i - 1] * c[i - 1];
    if (std::abs(pivot) < kZeroPivot) zero_pivot(i);
    const double inv = 1.0 / pivot;
    if (i + 1 < n) scratch[i] = b[i] * inv;
    u[i] = (f[i] - u[i - 1] * c[i - 1]) * inv;
  }
  for (std::size_t i = n - 1; i-- > 0;) u[i] -= scratch[i] * u[i + 1];
}

std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
  const std::size_t n = sys.a.size();
  std::vector<double> u(n), scratch(n);
  thomas_solve(sys.a, sys.b, sys.c, sys.f, u, scratch);
  return u;
}

}  // namespace tpmg
