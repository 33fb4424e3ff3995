#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tpmg/field.hpp"
#include "tpmg/geometry.hpp"
#include "tpmg/params.hpp"
#include "tpmg/partition.hpp"

namespace tpmg {

/// Tridiagonal restriction of the operator to one vertical column.
/// sub[0] and super[nz-1] are zero; super[k] == sub[k+1].
struct VerticalBlock {
  std::vector<double> sub, diag, super;
};

/// Horizontal couplings of one column, in the order west, east, south, north.
/// Faces on the panel boundary have a zero factor.
struct ColumnCoupling {
  double area = 0.0;
  std::array<double, 4> face{};
  double face_sum = 0.0;
};

/// The discretised operator on one grid level, applied matrix-free:
///
///   (A u)_c = V_c u_c + omega2 * sum_faces T_f (u_c - u_nbr)
///
/// with T_f = area / center distance for horizontal faces and
/// lambda2 * area / center distance for vertical faces, and no flux through
/// the boundary. Only vertical profiles (length nz) are cached; horizontal
/// factors come from the grid per column.
class LevelOperator {
 public:
  LevelOperator(PanelGrid grid, double omega2, double lambda2, Decomposition decomp);
  LevelOperator(PanelGrid grid, const ModelParameters& params, Decomposition decomp)
      : LevelOperator(std::move(grid), params.omega2, params.lambda2, std::move(decomp)) {}

  const PanelGrid& grid() const { return grid_; }
  const Decomposition& decomposition() const { return decomp_; }
  double omega2() const { return omega2_; }
  double lambda2() const { return lambda2_; }
  int nz() const { return grid_.nz(); }

  ColumnCoupling column(int gi, int gj) const;
  /// Volume-scaled tridiagonal column block, including the horizontal
  /// contributions to the diagonal.
  VerticalBlock vertical_block(int gi, int gj) const;
  /// In-place variant for the smoother; sub is not written (it equals super
  /// shifted by one).
  void fill_vertical_block(const ColumnCoupling& col, std::span<double> diag, std::span<double> super) const;

  std::span<const double> mass() const { return mass_; }
  /// omega2 * hflux_k
  std::span<const double> horizontal_weight() const { return wh_; }
  /// omega2 * lambda2 * vflux_k, length nz - 1
  std::span<const double> vertical_weight() const { return wv_; }

  DistributedField make_field() const { return DistributedField(decomp_, nz()); }
  void check_field(const DistributedField& f) const;

 private:
  PanelGrid grid_;
  double omega2_;
  double lambda2_;
  Decomposition decomp_;
  std::vector<double> mass_;
  std::vector<double> wh_;
  std::vector<double> wv_;
};

/// v = A u on owned cells. u must carry consistent halos.
void apply_operator(const DistributedField& u, const LevelOperator& op, DistributedField& v);
/// r = f - A u on owned cells.
void compute_residual(const DistributedField& f, const DistributedField& u, const LevelOperator& op,
                      DistributedField& r);

/// Compressed sparse row matrix; only built by the assembly oracle.
struct SparseMatrix {
  int rows = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  double at(int r, int c) const;
  std::vector<double> multiply(std::span<const double> x) const;
};

inline constexpr std::size_t kAssemblyCap = 100000;

/// Explicit 7-point matrix assembled from cell_geometry() factors, rows in the
/// global layout m = nz (nx i + j) + k. Refuses grids above kAssemblyCap cells.
SparseMatrix assemble_matrix(const PanelGrid& grid, double omega2, double lambda2);

/// Binary dump: "ANMG", u32 nx, u32 nx, u32 nz, u32 flags, then float64
/// values in global layout order (little endian host order).
void write_field_dump(const std::string& path, const DistributedField& field, std::uint32_t flags = 0);

struct FieldDump {
  std::uint32_t nx = 0, nz = 0, flags = 0;
  std::vector<double> values;
};
FieldDump read_field_dump(const std::string& path);

inline constexpr std::uint32_t kDumpFlatMode = 1u;

}  // namespace tpmg
