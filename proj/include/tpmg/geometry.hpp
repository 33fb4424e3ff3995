#pragma once

#include <array>
#include <span>
#include <vector>

namespace tpmg {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

/// Gnomonic map of panel coordinates (xi1, xi2) in [-1,1]^2 at radius r to
/// Cartesian space: tan(phi) = xi2, tan(theta) = xi1 / sqrt(1 + xi2^2).
/// Throws std::out_of_range for |xi| > 1 or r <= 0.
Vec3 map_to_sphere(double xi1, double xi2, double r);

/// Graded levels r_k = 1 + H (k/nz)^2, k = 0..nz.
std::vector<double> vertical_levels(int nz, double H);

/// Geometric factors of one cell. Index 0 of each pair is the face on the
/// low-index side, index 1 the high-index side. Boundary faces have no
/// neighbour; their center distance is reported as 0.
struct CellGeometry {
  double volume = 0.0;
  std::array<double, 2> face_area_xi1{}, face_area_xi2{}, face_area_r{};
  std::array<double, 2> center_dist_xi1{}, center_dist_xi2{}, center_dist_r{};
  std::array<bool, 2> boundary_xi1{}, boundary_xi2{}, boundary_r{};
};

/// One panel of the cubed-sphere shell, nx x nx columns of nz cells.
///
/// The finite volume factors factorise into a per-column part and a vertical
/// profile:
///   volume(i,j,k)            = column_area(i,j) * mass_profile[k]
///   T_horizontal(face, k)    = face_factor(face) * hflux_profile[k]
///   T_vertical(i,j, k|k+1)   = column_area(i,j) * vflux_profile[k]
/// with T = face area / center distance. In flat mode the mapping is the
/// identity on [-1,1]^2 x [r_0, r_nz].
class PanelGrid {
 public:
  PanelGrid(int nx, int nz, double H, bool flat_mode = false);
  /// Arbitrary strictly increasing levels (used for oracle-scale grids).
  PanelGrid(int nx, std::vector<double> levels, bool flat_mode);

  int nx() const { return nx_; }
  int nz() const { return nz_; }
  double H() const { return levels_.back() - levels_.front(); }
  double dxi() const { return dxi_; }
  bool flat_mode() const { return flat_; }
  const std::vector<double>& levels() const { return levels_; }

  double xi_face(int i) const { return -1.0 + i * dxi_; }
  double xi_center(int i) const { return -1.0 + (i + 0.5) * dxi_; }
  double r_center(int k) const { return 0.5 * (levels_[k] + levels_[k + 1]); }

  double column_area(int i, int j) const { return column_area_[static_cast<std::size_t>(i) * nx_ + j]; }
  /// Face between columns (i-1, j) and (i, j), i in [0, nx]; zero on the panel boundary.
  double face_factor_xi1(int i, int j) const {
    return face_xi1_[static_cast<std::size_t>(i) * nx_ + j];
  }
  /// Face between columns (i, j-1) and (i, j), j in [0, nx]; zero on the panel boundary.
  double face_factor_xi2(int i, int j) const {
    return face_xi2_[static_cast<std::size_t>(i) * (nx_ + 1) + j];
  }
  std::span<const double> mass_profile() const { return mass_; }
  std::span<const double> hflux_profile() const { return hflux_; }
  std::span<const double> vflux_profile() const { return vflux_; }

  /// Factors recomputed from the mapping, independent of the cached
  /// tensor-product factors above.
  CellGeometry cell_geometry(int i, int j, int k) const;

  /// Same shell with half the columns per direction.
  PanelGrid coarsened() const;

  double total_volume() const;

 private:
  void build_factors();
  Vec3 cell_center(int i, int j, int k) const;
  double lateral_area_xi1(int i_face, int j, int k) const;
  double lateral_area_xi2(int i, int j_face, int k) const;

  int nx_;
  int nz_;
  double dxi_;
  bool flat_;
  std::vector<double> levels_;
  std::vector<double> column_area_;
  std::vector<double> face_xi1_;
  std::vector<double> face_xi2_;
  std::vector<double> mass_;
  std::vector<double> hflux_;
  std::vector<double> vflux_;
};

}  // namespace tpmg
