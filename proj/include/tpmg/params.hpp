#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace tpmg {

class PanelGrid;

/// Physical constants entering the model equation. SI units unless noted.
struct PhysicalConstants {
  double c_h = 550.0;        // speed of the fastest waves [m/s]
  double R_earth = 6.371e6;  // [m]
  double N_star0 = 0.018;    // buoyancy frequency [1/s]
  double H = 0.01;           // shell depth relative to R_earth
  double alpha = 0.5;        // off-centering

  void validate() const;
};

/// One experiment configuration of the dimensionless model problem
///   -omega2 (Laplace_2d u + lambda2 r^-2 d/dr(r^2 du/dr)) + u = f.
struct ModelParameters {
  int nx = 0;
  int nz = 0;
  double dx = 0.0;  // [m]
  double dt = 0.0;  // [s]
  double omega2 = 0.0;
  double lambda2 = 0.0;
  double courant = 0.0;
  double f_omega2 = 1.0;
  double f_lambda2 = 1.0;
  PhysicalConstants constants;

  std::size_t dof() const {
    return static_cast<std::size_t>(nx) * nx * nz;
  }
};

bool is_power_of_two(long long n);

/// Throws std::invalid_argument unless nx >= 4 is a power of two, nz >= 2 and dt > 0.
ModelParameters derive_parameters(int nx, int nz, double dt,
                                  const PhysicalConstants& constants = {},
                                  double f_omega2 = 1.0, double f_lambda2 = 1.0);

/// Entry i has nx*2^i cells per direction and time step dt/2^i, so the
/// acoustic Courant number stays fixed.
std::vector<ModelParameters> weak_scaling_schedule(const ModelParameters& base, int doublings);

/// beta = lambda2 (dx / dz_k)^2 with dz_k the physical thickness of layer k.
double anisotropy(const ModelParameters& params, const PanelGrid& grid, int k);

/// Relative strength of the horizontal couplings on coarsening depth `level`:
/// alpha^2 (c_h dt / dx)^2 2^(-2 level).
double horizontal_coupling(const ModelParameters& params, int level);

/// Plain `key = value` lines; '#' starts a comment. Keys are not validated here.
std::map<std::string, std::string> parse_key_value(const std::string& text);
std::map<std::string, std::string> read_key_value_file(const std::string& path);

}  // namespace tpmg
