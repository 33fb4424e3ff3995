#include "tpmg/stencil.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

namespace tpmg {

LevelOperator::LevelOperator(PanelGrid grid, double omega2, double lambda2, Decomposition decomp)
    : grid_(std::move(grid)), omega2_(omega2), lambda2_(lambda2), decomp_(std::move(decomp)) {
  if (decomp_.nx() != grid_.nx()) throw std::invalid_argument("decomposition does not match the grid");
  if (!(omega2_ >= 0) || !(lambda2_ >= 0)) throw std::invalid_argument("omega2 and lambda2 must be non-negative");
  const auto m = grid_.mass_profile();
  const auto h = grid_.hflux_profile();
  const auto v = grid_.vflux_profile();
  mass_.assign(m.begin(), m.end());
  wh_.resize(h.size());
  wv_.resize(v.size());
  for (std::size_t k = 0; k < h.size(); ++k) wh_[k] = omega2_ * h[k];
  for (std::size_t k = 0; k < v.size(); ++k) wv_[k] = omega2_ * lambda2_ * v[k];
}

ColumnCoupling LevelOperator::column(int gi, int gj) const {
  ColumnCoupling c;
  c.area = grid_.column_area(gi, gj);
  c.face = {grid_.face_factor_xi1(gi, gj), grid_.face_factor_xi1(gi + 1, gj), grid_.face_factor_xi2(gi, gj),
            grid_.face_factor_xi2(gi, gj + 1)};
  c.face_sum = c.face[0] + c.face[1] + c.face[2] + c.face[3];
  return c;
}

void LevelOperator::fill_vertical_block(const ColumnCoupling& col, std::span<double> diag,
                                        std::span<double> super) const {
  const int nz = this->nz();
  for (int k = 0; k < nz; ++k) {
    const double below = k > 0 ? wv_[k - 1] : 0.0;
    const double above = k + 1 < nz ? wv_[k] : 0.0;
    diag[k] = col.area * mass_[k] + col.face_sum * wh_[k] + col.area * (below + above);
    super[k] = k + 1 < nz ? -col.area * wv_[k] : 0.0;
  }
}

VerticalBlock LevelOperator::vertical_block(int gi, int gj) const {
  const int nz = this->nz();
  VerticalBlock b;
  b.diag.resize(nz);
  b.super.resize(nz);
  b.sub.assign(nz, 0.0);
  fill_vertical_block(column(gi, gj), b.diag, b.super);
  for (int k = 1; k < nz; ++k) b.sub[k] = b.super[k - 1];
  return b;
}

void LevelOperator::check_field(const DistributedField& f) const {
  if (f.nz() != nz() || !(f.decomposition() == decomp_))
    throw std::invalid_argument("field dimensions do not match the operator");
}

namespace {

// Shared kernel: out = f - A u (with_rhs) or out = A u.
template <bool WithRhs>
void apply_kernel(const DistributedField* f, const DistributedField& u, const LevelOperator& op,
                  DistributedField& out) {
  op.check_field(u);
  op.check_field(out);
  if constexpr (WithRhs) op.check_field(*f);
  const auto& d = op.decomposition();
  const int n = d.nx_local();
  const int nz = op.nz();
  const auto mass = op.mass();
  const auto wh = op.horizontal_weight();
  const auto wv = op.vertical_weight();

  for (int w = 0; w < u.workers(); ++w) {
    const Field& uf = u.part(w);
    Field& of = out.part(w);
    const int i0 = d.i_offset(w), j0 = d.j_offset(w);
#pragma omp parallel for
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const ColumnCoupling c = op.column(i0 + i, j0 + j);
        const double* uc = uf.column_ptr(i, j);
        const double* uw = uf.column_ptr(i - 1, j);
        const double* ue = uf.column_ptr(i + 1, j);
        const double* us = uf.column_ptr(i, j - 1);
        const double* un = uf.column_ptr(i, j + 1);
        double* o = of.column_ptr(i, j);
        const double* fc = nullptr;
        if constexpr (WithRhs) fc = f->part(w).column_ptr(i, j);
        for (int k = 0; k < nz; ++k) {
          const double x = uc[k];
          double v = c.area * mass[k] * x;
          v += wh[k] * (c.face[0] * (x - uw[k]) + c.face[1] * (x - ue[k]) + c.face[2] * (x - us[k]) +
                        c.face[3] * (x - un[k]));
          if (k > 0) v += c.area * wv[k - 1] * (x - uc[k - 1]);
          if (k + 1 < nz) v += c.area * wv[k] * (x - uc[k + 1]);
          if constexpr (WithRhs) o[k] = fc[k] - v;
          else o[k] = v;
        }
      }
    }
  }
}

}  // namespace

void apply_operator(const DistributedField& u, const LevelOperator& op, DistributedField& v) {
  apply_kernel<false>(nullptr, u, op, v);
}

void compute_residual(const DistributedField& f, const DistributedField& u, const LevelOperator& op,
                      DistributedField& r) {
  apply_kernel<true>(&f, u, op, r);
}

double SparseMatrix::at(int r, int c) const {
  for (int p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
    if (col[p] == c) return val[p];
  return 0.0;
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int p = row_ptr[r]; p < row_ptr[r + 1]; ++p) s += val[p] * x[col[p]];
    y[r] = s;
  }
  return y;
}

SparseMatrix assemble_matrix(const PanelGrid& grid, double omega2, double lambda2) {
  const int nx = grid.nx(), nz = grid.nz();
  const std::size_t n = static_cast<std::size_t>(nx) * nx * nz;
  if (n > kAssemblyCap)
    throw std::invalid_argument("refusing to assemble " + std::to_string(n) + " unknowns (cap " +
                                std::to_string(kAssemblyCap) + ")");
  auto idx = [&](int i, int j, int k) { return nz * (nx * i + j) + k; };

  SparseMatrix m;
  m.rows = static_cast<int>(n);
  m.row_ptr.reserve(n + 1);
  m.row_ptr.push_back(0);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nx; ++j)
      for (int k = 0; k < nz; ++k) {
        const CellGeometry g = grid.cell_geometry(i, j, k);
        std::map<int, double> row;
        double diag = g.volume;
        auto couple = [&](bool boundary, double area, double dist, double scale, int nb) {
          if (boundary) return;
          const double t = omega2 * scale * area / dist;
          diag += t;
          row[nb] -= t;
        };
        couple(g.boundary_xi1[0], g.face_area_xi1[0], g.center_dist_xi1[0], 1.0, i > 0 ? idx(i - 1, j, k) : -1);
        couple(g.boundary_xi1[1], g.face_area_xi1[1], g.center_dist_xi1[1], 1.0, idx(i + 1, j, k));
        couple(g.boundary_xi2[0], g.face_area_xi2[0], g.center_dist_xi2[0], 1.0, j > 0 ? idx(i, j - 1, k) : -1);
        couple(g.boundary_xi2[1], g.face_area_xi2[1], g.center_dist_xi2[1], 1.0, idx(i, j + 1, k));
        couple(g.boundary_r[0], g.face_area_r[0], g.center_dist_r[0], lambda2, k > 0 ? idx(i, j, k - 1) : -1);
        couple(g.boundary_r[1], g.face_area_r[1], g.center_dist_r[1], lambda2, idx(i, j, k + 1));
        row[idx(i, j, k)] += diag;
        for (const auto& [c, v] : row) {
          m.col.push_back(c);
          m.val.push_back(v);
        }
        m.row_ptr.push_back(static_cast<int>(m.col.size()));
      }
  return m;
}

namespace {
constexpr char kMagic[4] = {'A', 'N', 'M', 'G'};
}

void write_field_dump(const std::string& path, const DistributedField& field, std::uint32_t flags) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const std::uint32_t header[4] = {static_cast<std::uint32_t>(field.nx()), static_cast<std::uint32_t>(field.nx()),
                                   static_cast<std::uint32_t>(field.nz()), flags};
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  const auto values = field.to_global();
  out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("failed writing " + path);
}

FieldDump read_field_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  std::uint32_t header[4];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error(path + " is not a field dump");
  if (header[0] != header[1]) throw std::runtime_error(path + ": non-square panel in header");
  FieldDump d;
  d.nx = header[0];
  d.nz = header[2];
  d.flags = header[3];
  d.values.resize(static_cast<std::size_t>(d.nx) * d.nx * d.nz);
  in.read(reinterpret_cast<char*>(d.values.data()), static_cast<std::streamsize>(d.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error(path + ": truncated field data");
  return d;
}

}  // namespace tpmg
