#include "tpmg/field.hpp"

#include <cmath>
#include <stdexcept>

namespace tpmg {

DistributedField::DistributedField(const Decomposition& decomp, int nz) : decomp_(decomp), nz_(nz) {
  if (nz < 1) throw std::invalid_argument("field needs at least one vertical cell");
  parts_.reserve(decomp.workers());
  for (int w = 0; w < decomp.workers(); ++w) parts_.emplace_back(decomp.nx_local(), nz);
}

double& DistributedField::at(int gi, int gj, int k) {
  const int n = decomp_.nx_local();
  const int w = (gi / n) * decomp_.side() + gj / n;
  return parts_[w](gi % n, gj % n, k);
}

double DistributedField::at(int gi, int gj, int k) const {
  return const_cast<DistributedField*>(this)->at(gi, gj, k);
}

std::vector<double> DistributedField::to_global() const {
  const int nx = decomp_.nx();
  const int n = decomp_.nx_local();
  std::vector<double> out(owned_size());
  for (int w = 0; w < workers(); ++w) {
    const Field& f = parts_[w];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::size_t gi = decomp_.i_offset(w) + i, gj = decomp_.j_offset(w) + j;
        std::copy_n(f.column_ptr(i, j), nz_, out.begin() + nz_ * (nx * gi + gj));
      }
  }
  return out;
}

void DistributedField::assign_global(std::span<const double> values) {
  if (values.size() != owned_size()) throw std::invalid_argument("global array size mismatch");
  const int nx = decomp_.nx();
  const int n = decomp_.nx_local();
  for (int w = 0; w < workers(); ++w) {
    Field& f = parts_[w];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::size_t gi = decomp_.i_offset(w) + i, gj = decomp_.j_offset(w) + j;
        std::copy_n(values.begin() + nz_ * (nx * gi + gj), nz_, f.column_ptr(i, j));
      }
  }
}

void DistributedField::fill(double v) {
  for (auto& p : parts_) p.fill(v);
}

namespace {

void check_shapes(const DistributedField& x, const DistributedField& y) {
  if (!x.same_shape(y)) throw std::invalid_argument("field shapes differ");
}

template <typename ColumnSum>
double reduce(const DistributedField& x, Reduction mode, ColumnSum&& column_sum) {
  const auto& d = x.decomposition();
  const int n = d.nx_local();
  if (mode == Reduction::kDeterministic) {
    const int nx = d.nx();
    std::vector<double> partial(static_cast<std::size_t>(nx) * nx);
    for (int w = 0; w < x.workers(); ++w)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          partial[static_cast<std::size_t>(d.i_offset(w) + i) * nx + d.j_offset(w) + j] = column_sum(w, i, j);
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
  }
  double total = 0.0;
  for (int w = 0; w < x.workers(); ++w) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += column_sum(w, i, j);
    total += s;
  }
  return total;
}

}  // namespace

double dot(const DistributedField& x, const DistributedField& y, Reduction mode) {
  check_shapes(x, y);
  const int nz = x.nz();
  return reduce(x, mode, [&](int w, int i, int j) {
    const double* a = x.part(w).column_ptr(i, j);
    const double* b = y.part(w).column_ptr(i, j);
    double s = 0.0;
    for (int k = 0; k < nz; ++k) s += a[k] * b[k];
    return s;
  });
}

double norm2(const DistributedField& x, Reduction mode) { return std::sqrt(dot(x, x, mode)); }

void axpy(double a, const DistributedField& x, DistributedField& y) {
  check_shapes(x, y);
  const int n = x.decomposition().nx_local();
  const int nz = x.nz();
  for (int w = 0; w < x.workers(); ++w) {
    const Field& xf = x.part(w);
    Field& yf = y.part(w);
#pragma omp parallel for
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double* xs = xf.column_ptr(i, j);
        double* ys = yf.column_ptr(i, j);
        for (int k = 0; k < nz; ++k) ys[k] += a * xs[k];
      }
  }
}

void xpby(const DistributedField& x, double b, DistributedField& y) {
  check_shapes(x, y);
  const int n = x.decomposition().nx_local();
  const int nz = x.nz();
  for (int w = 0; w < x.workers(); ++w) {
    const Field& xf = x.part(w);
    Field& yf = y.part(w);
#pragma omp parallel for
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double* xs = xf.column_ptr(i, j);
        double* ys = yf.column_ptr(i, j);
        for (int k = 0; k < nz; ++k) ys[k] = xs[k] + b * ys[k];
      }
  }
}

void copy(const DistributedField& from, DistributedField& to) {
  check_shapes(from, to);
  for (int w = 0; w < from.workers(); ++w) {
    auto src = from.part(w).data();
    std::copy(src.begin(), src.end(), to.part(w).data().begin());
  }
}

}  // namespace tpmg
