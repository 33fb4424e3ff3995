#include "tpmg/partition.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "tpmg/field.hpp"

namespace tpmg {

Decomposition::Decomposition(int nx, int side, int base_side) : nx_(nx), side_(side), base_side_(base_side) {
  const int stride = base_side_ / side_;
  active_.reserve(static_cast<std::size_t>(side_) * side_);
  for (int bi = 0; bi < side_; ++bi)
    for (int bj = 0; bj < side_; ++bj) active_.push_back(bi * stride * base_side_ + bj * stride);
}

Decomposition Decomposition::decompose(int nx, int workers) {
  int side = 1;
  while (side * side < workers) side *= 2;
  if (workers < 1 || side * side != workers)
    throw std::invalid_argument("worker count must be 1 or a power of four, got " + std::to_string(workers));
  if (nx < 1 || nx % side != 0)
    throw std::invalid_argument("nx=" + std::to_string(nx) + " is not divisible by sqrt(workers)=" +
                                std::to_string(side));
  return Decomposition(nx, side, side);
}

int Decomposition::neighbor(int w, Edge edge) const {
  int bi = block_i(w), bj = block_j(w);
  switch (edge) {
    case kWest: --bi; break;
    case kEast: ++bi; break;
    case kSouth: --bj; break;
    case kNorth: ++bj; break;
  }
  if (bi < 0 || bj < 0 || bi >= side_ || bj >= side_) return -1;
  return bi * side_ + bj;
}

int Decomposition::global_id(int w) const { return active_.at(w); }

Decomposition Decomposition::folded() const {
  if (side_ < 2) throw std::logic_error("cannot fold a single-worker decomposition");
  return Decomposition(nx_, side_ / 2, base_side_);
}

Decomposition Decomposition::coarsened() const {
  if (nx_local() % 2 != 0)
    throw std::logic_error("local size " + std::to_string(nx_local()) + " cannot be coarsened without folding");
  return Decomposition(nx_ / 2, side_, base_side_);
}

namespace {

void copy_column(const Field& src, int si, int sj, Field& dst, int di, int dj) {
  std::copy_n(src.column_ptr(si, sj), src.nz(), dst.column_ptr(di, dj));
}

}  // namespace

void halo_exchange(DistributedField& field, CommStats* stats) {
  const auto& d = field.decomposition();
  const int n = d.nx_local();

  for (int w = 0; w < field.workers(); ++w) {
    Field& f = field.part(w);
    const int west = d.neighbor(w, Decomposition::kWest);
    const int east = d.neighbor(w, Decomposition::kEast);
    for (int j = 0; j < n; ++j) {
      if (west >= 0) copy_column(field.part(west), n - 1, j, f, -1, j);
      else copy_column(f, 0, j, f, -1, j);
      if (east >= 0) copy_column(field.part(east), 0, j, f, n, j);
      else copy_column(f, n - 1, j, f, n, j);
    }
  }
  // Second phase reads the xi1 halos filled above, which covers the corners.
  for (int w = 0; w < field.workers(); ++w) {
    Field& f = field.part(w);
    const int south = d.neighbor(w, Decomposition::kSouth);
    const int north = d.neighbor(w, Decomposition::kNorth);
    for (int i = -1; i <= n; ++i) {
      if (south >= 0) copy_column(field.part(south), i, n - 1, f, i, -1);
      else copy_column(f, i, 0, f, i, -1);
      if (north >= 0) copy_column(field.part(north), i, 0, f, i, n);
      else copy_column(f, i, n - 1, f, i, n);
    }
  }
  if (stats) ++stats->halo_exchanges;
}

DistributedField collect(const DistributedField& field, CommStats* stats) {
  const auto& fine = field.decomposition();
  const Decomposition coarse = fine.folded();
  DistributedField out(coarse, field.nz());
  const int n = fine.nx_local();
  for (int w = 0; w < fine.workers(); ++w) {
    const int bi = fine.block_i(w), bj = fine.block_j(w);
    const int parent = (bi / 2) * coarse.side() + bj / 2;
    const int oi = (bi % 2) * n, oj = (bj % 2) * n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) copy_column(field.part(w), i, j, out.part(parent), oi + i, oj + j);
  }
  if (stats) ++stats->collects;
  return out;
}

DistributedField distribute(const DistributedField& field, const Decomposition& target, CommStats* stats) {
  if (!(target.folded() == field.decomposition()))
    throw std::invalid_argument("distribute target does not fold onto the field's decomposition");
  const Decomposition& coarse = field.decomposition();
  DistributedField out(target, field.nz());
  const int n = target.nx_local();
  for (int w = 0; w < target.workers(); ++w) {
    const int bi = target.block_i(w), bj = target.block_j(w);
    const int parent = (bi / 2) * coarse.side() + bj / 2;
    const int oi = (bi % 2) * n, oj = (bj % 2) * n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) copy_column(field.part(parent), oi + i, oj + j, out.part(w), i, j);
  }
  if (stats) ++stats->distributes;
  return out;
}

}  // namespace tpmg
