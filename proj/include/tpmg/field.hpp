#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "tpmg/partition.hpp"

namespace tpmg {

/// Scalar field on one square subdomain with a one-cell horizontal halo.
/// Columns are contiguous: m = nz * ((nx_local + 2) * (i + 1) + (j + 1)) + k
/// for owned indices i, j in [0, nx_local) and halo indices -1 and nx_local.
class Field {
 public:
  Field() = default;
  Field(int nx_local, int nz) : nx_local_(nx_local), nz_(nz), data_(storage_size(nx_local, nz), 0.0) {}

  static std::size_t storage_size(int nx_local, int nz) {
    return static_cast<std::size_t>(nx_local + 2) * (nx_local + 2) * nz;
  }

  int nx_local() const { return nx_local_; }
  int nz() const { return nz_; }
  int row() const { return nx_local_ + 2; }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(nz_) * (static_cast<std::size_t>(row()) * (i + 1) + (j + 1)) + k;
  }
  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  double* column_ptr(int i, int j) { return data_.data() + index(i, j, 0); }
  const double* column_ptr(int i, int j) const { return data_.data() + index(i, j, 0); }
  std::span<double> column(int i, int j) { return {column_ptr(i, j), static_cast<std::size_t>(nz_)}; }
  std::span<const double> column(int i, int j) const {
    return {column_ptr(i, j), static_cast<std::size_t>(nz_)};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

 private:
  int nx_local_ = 0;
  int nz_ = 0;
  std::vector<double> data_;
};

/// A field spread over the subdomains of a Decomposition, one Field per worker.
class DistributedField {
 public:
  DistributedField() = default;
  DistributedField(const Decomposition& decomp, int nz);

  const Decomposition& decomposition() const { return decomp_; }
  int nz() const { return nz_; }
  int nx() const { return decomp_.nx(); }
  int workers() const { return static_cast<int>(parts_.size()); }
  std::size_t owned_size() const { return static_cast<std::size_t>(nx()) * nx() * nz_; }

  Field& part(int w) { return parts_[w]; }
  const Field& part(int w) const { return parts_[w]; }

  /// Owned cell by global horizontal index.
  double& at(int gi, int gj, int k);
  double at(int gi, int gj, int k) const;

  /// Owned values in global layout m = nz * (nx * i + j) + k.
  std::vector<double> to_global() const;
  void assign_global(std::span<const double> values);

  void fill(double v);
  bool same_shape(const DistributedField& o) const { return nz_ == o.nz_ && decomp_ == o.decomp_; }

 private:
  Decomposition decomp_ = Decomposition::decompose(1, 1);
  int nz_ = 0;
  std::vector<Field> parts_;
};

/// Reduction order for global inner products. Deterministic mode sums per
/// column partials in global column order, which makes results independent of
/// the decomposition.
enum class Reduction { kPerWorker, kDeterministic };

double dot(const DistributedField& x, const DistributedField& y, Reduction mode = Reduction::kPerWorker);
double norm2(const DistributedField& x, Reduction mode = Reduction::kPerWorker);
/// y <- y + a x on owned cells.
void axpy(double a, const DistributedField& x, DistributedField& y);
/// y <- x + b y on owned cells.
void xpby(const DistributedField& x, double b, DistributedField& y);
/// Copies owned cells and halos.
void copy(const DistributedField& from, DistributedField& to);

}  // namespace tpmg
