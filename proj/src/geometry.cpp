#include "tpmg/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tpmg {

namespace {

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

// Unit vector of the gnomonic projection, algebraic form.
Vec3 unit(double xi1, double xi2) {
  const double s = 1.0 / std::sqrt(1.0 + xi1 * xi1 + xi2 * xi2);
  return {xi1 * s, xi2 * s, s};
}

double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(norm(cross(a, b)), dot(a, b)); }

// Van Oosterom-Strackee solid angle of a spherical triangle with unit vertices.
double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double num = std::abs(dot(a, cross(b, c)));
  const double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
  return 2.0 * std::atan2(num, den);
}

double quad_solid_angle(double x0, double x1, double y0, double y1) {
  const Vec3 a = unit(x0, y0), b = unit(x1, y0), c = unit(x1, y1), d = unit(x0, y1);
  return triangle_solid_angle(a, b, c) + triangle_solid_angle(a, c, d);
}

// Solid angle of [-inf,x] x [-inf,y] up to constants; the corner sum over a
// rectangle gives its solid angle. Used only by the recomputing path.
double corner_solid_angle(double x, double y) { return std::atan(x * y / std::sqrt(1.0 + x * x + y * y)); }

}  // namespace

Vec3 map_to_sphere(double xi1, double xi2, double r) {
  if (!(std::abs(xi1) <= 1.0) || !(std::abs(xi2) <= 1.0))
    throw std::out_of_range("panel coordinates must lie in [-1, 1]");
  if (!(r > 0.0)) throw std::out_of_range("radius must be positive");
  const double phi = std::atan(xi2);
  const double theta = std::atan(xi1 / std::sqrt(1.0 + xi2 * xi2));
  return {r * std::sin(theta), r * std::cos(theta) * std::sin(phi), r * std::cos(theta) * std::cos(phi)};
}

std::vector<double> vertical_levels(int nz, double H) {
  if (nz < 1) throw std::invalid_argument("nz must be >= 1");
  if (!(H > 0)) throw std::invalid_argument("shell depth must be positive");
  std::vector<double> r(nz + 1);
  for (int k = 0; k <= nz; ++k) {
    const double s = static_cast<double>(k) / nz;
    r[k] = 1.0 + H * s * s;
  }
  r[nz] = 1.0 + H;
  return r;
}

PanelGrid::PanelGrid(int nx, int nz, double H, bool flat_mode)
    : PanelGrid(nx, vertical_levels(nz, H), flat_mode) {}

PanelGrid::PanelGrid(int nx, std::vector<double> levels, bool flat_mode)
    : nx_(nx), nz_(static_cast<int>(levels.size()) - 1), dxi_(2.0 / nx), flat_(flat_mode),
      levels_(std::move(levels)) {
  if (nx < 1) throw std::invalid_argument("nx must be >= 1");
  if (nz_ < 1) throw std::invalid_argument("need at least two vertical levels");
  for (int k = 0; k < nz_; ++k)
    if (!(levels_[k + 1] > levels_[k])) throw std::invalid_argument("levels must be strictly increasing");
  if (!(levels_.front() > 0.0)) throw std::invalid_argument("levels must be positive radii");
  build_factors();
}

void PanelGrid::build_factors() {
  const std::size_t n = nx_;
  column_area_.assign(n * n, 0.0);
  face_xi1_.assign((n + 1) * n, 0.0);
  face_xi2_.assign(n * (n + 1), 0.0);

  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < nx_; ++j)
      column_area_[i * n + j] =
          flat_ ? dxi_ * dxi_ : quad_solid_angle(xi_face(i), xi_face(i + 1), xi_face(j), xi_face(j + 1));

  // Interior faces only; boundary faces carry no flux.
  for (int i = 1; i < nx_; ++i)
    for (int j = 0; j < nx_; ++j) {
      double f = 1.0;
      if (!flat_) {
        const double angle = angle_between(unit(xi_face(i), xi_face(j)), unit(xi_face(i), xi_face(j + 1)));
        const double chord = norm(sub(unit(xi_center(i - 1), xi_center(j)), unit(xi_center(i), xi_center(j))));
        f = angle / chord;
      }
      face_xi1_[i * n + j] = f;
    }
  for (int i = 0; i < nx_; ++i)
    for (int j = 1; j < nx_; ++j) {
      double f = 1.0;
      if (!flat_) {
        const double angle = angle_between(unit(xi_face(i), xi_face(j)), unit(xi_face(i + 1), xi_face(j)));
        const double chord = norm(sub(unit(xi_center(i), xi_center(j - 1)), unit(xi_center(i), xi_center(j))));
        f = angle / chord;
      }
      face_xi2_[i * (n + 1) + j] = f;
    }

  mass_.resize(nz_);
  hflux_.resize(nz_);
  vflux_.resize(nz_ > 1 ? nz_ - 1 : 0);
  for (int k = 0; k < nz_; ++k) {
    const double r0 = levels_[k], r1 = levels_[k + 1];
    mass_[k] = flat_ ? r1 - r0 : (r1 * r1 * r1 - r0 * r0 * r0) / 3.0;
    // (r1^2 - r0^2) / (2 r_center) collapses to r1 - r0 for midpoint centers.
    hflux_[k] = r1 - r0;
  }
  for (int k = 0; k + 1 < nz_; ++k) {
    const double dist = r_center(k + 1) - r_center(k);
    const double rf = levels_[k + 1];
    vflux_[k] = flat_ ? 1.0 / dist : rf * rf / dist;
  }
}

Vec3 PanelGrid::cell_center(int i, int j, int k) const {
  if (flat_) return {xi_center(i), xi_center(j), r_center(k)};
  return map_to_sphere(xi_center(i), xi_center(j), r_center(k));
}

double PanelGrid::lateral_area_xi1(int i_face, int j, int k) const {
  const double r0 = levels_[k], r1 = levels_[k + 1];
  if (flat_) return dxi_ * (r1 - r0);
  const Vec3 a = map_to_sphere(xi_face(i_face), xi_face(j), 1.0);
  const Vec3 b = map_to_sphere(xi_face(i_face), xi_face(j + 1), 1.0);
  // Planar annular sector: the face lies in a plane through the origin.
  return 0.5 * angle_between(a, b) * (r1 * r1 - r0 * r0);
}

double PanelGrid::lateral_area_xi2(int i, int j_face, int k) const {
  const double r0 = levels_[k], r1 = levels_[k + 1];
  if (flat_) return dxi_ * (r1 - r0);
  const Vec3 a = map_to_sphere(xi_face(i), xi_face(j_face), 1.0);
  const Vec3 b = map_to_sphere(xi_face(i + 1), xi_face(j_face), 1.0);
  return 0.5 * angle_between(a, b) * (r1 * r1 - r0 * r0);
}

CellGeometry PanelGrid::cell_geometry(int i, int j, int k) const {
  if (i < 0 || i >= nx_ || j < 0 || j >= nx_ || k < 0 || k >= nz_)
    throw std::out_of_range("cell index out of range");
  CellGeometry g;
  const double r0 = levels_[k], r1 = levels_[k + 1];

  double omega;
  if (flat_) {
    omega = dxi_ * dxi_;
  } else {
    const double x0 = xi_face(i), x1 = xi_face(i + 1), y0 = xi_face(j), y1 = xi_face(j + 1);
    omega = corner_solid_angle(x1, y1) - corner_solid_angle(x0, y1) - corner_solid_angle(x1, y0) +
            corner_solid_angle(x0, y0);
  }
  g.volume = flat_ ? omega * (r1 - r0) : omega * (r1 * r1 * r1 - r0 * r0 * r0) / 3.0;

  const Vec3 c = cell_center(i, j, k);
  auto dist_to = [&](int ii, int jj, int kk) { return norm(sub(cell_center(ii, jj, kk), c)); };

  g.face_area_xi1 = {lateral_area_xi1(i, j, k), lateral_area_xi1(i + 1, j, k)};
  g.face_area_xi2 = {lateral_area_xi2(i, j, k), lateral_area_xi2(i, j + 1, k)};
  g.face_area_r = {omega * (flat_ ? 1.0 : r0 * r0), omega * (flat_ ? 1.0 : r1 * r1)};

  g.boundary_xi1 = {i == 0, i == nx_ - 1};
  g.boundary_xi2 = {j == 0, j == nx_ - 1};
  g.boundary_r = {k == 0, k == nz_ - 1};
  g.center_dist_xi1 = {g.boundary_xi1[0] ? 0.0 : dist_to(i - 1, j, k), g.boundary_xi1[1] ? 0.0 : dist_to(i + 1, j, k)};
  g.center_dist_xi2 = {g.boundary_xi2[0] ? 0.0 : dist_to(i, j - 1, k), g.boundary_xi2[1] ? 0.0 : dist_to(i, j + 1, k)};
  g.center_dist_r = {g.boundary_r[0] ? 0.0 : dist_to(i, j, k - 1), g.boundary_r[1] ? 0.0 : dist_to(i, j, k + 1)};
  return g;
}

PanelGrid PanelGrid::coarsened() const {
  if (nx_ < 2 || nx_ % 2 != 0) throw std::logic_error("grid with nx=" + std::to_string(nx_) + " cannot be coarsened");
  return PanelGrid(nx_ / 2, levels_, flat_);
}

double PanelGrid::total_volume() const {
  double area = 0.0, mass = 0.0;
  for (double a : column_area_) area += a;
  for (double m : mass_) mass += m;
  return area * mass;
}

}  // namespace tpmg
