#include "tpmg/params.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tpmg/geometry.hpp"

namespace tpmg {

void PhysicalConstants::validate() const {
  if (!(c_h > 0 && R_earth > 0 && N_star0 > 0 && H > 0))
    throw std::invalid_argument("physical constants must be strictly positive");
  if (!(alpha > 0 && alpha <= 1))
    throw std::invalid_argument("off-centering alpha must lie in (0, 1]");
}

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

ModelParameters derive_parameters(int nx, int nz, double dt, const PhysicalConstants& constants,
                                  double f_omega2, double f_lambda2) {
  constants.validate();
  if (nx < 4 || !is_power_of_two(nx))
    throw std::invalid_argument("nx must be a power of two >= 4, got " + std::to_string(nx));
  if (nz < 2) throw std::invalid_argument("nz must be >= 2, got " + std::to_string(nz));
  if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
  if (!(f_omega2 > 0) || !(f_lambda2 > 0))
    throw std::invalid_argument("robustness multipliers must be positive");

  const auto& c = constants;
  ModelParameters p;
  p.nx = nx;
  p.nz = nz;
  p.dt = dt;
  p.constants = c;
  p.f_omega2 = f_omega2;
  p.f_lambda2 = f_lambda2;
  p.dx = 2.0 * std::numbers::pi * c.R_earth / (4.0 * nx);
  const double s = c.alpha * c.c_h * dt / c.R_earth;
  p.omega2 = s * s * f_omega2;
  const double an = c.alpha * dt * c.N_star0;
  p.lambda2 = f_lambda2 / (1.0 + an * an);
  p.courant = c.c_h * dt / p.dx;
  return p;
}

std::vector<ModelParameters> weak_scaling_schedule(const ModelParameters& base, int doublings) {
  if (doublings < 0) throw std::invalid_argument("number of doublings must be non-negative");
  std::vector<ModelParameters> out;
  out.reserve(doublings + 1);
  for (int i = 0; i <= doublings; ++i) {
    const double scale = std::ldexp(1.0, i);
    out.push_back(derive_parameters(base.nx << i, base.nz, base.dt / scale, base.constants,
                                    base.f_omega2, base.f_lambda2));
  }
  return out;
}

double anisotropy(const ModelParameters& params, const PanelGrid& grid, int k) {
  if (k < 0 || k >= grid.nz()) throw std::out_of_range("vertical index out of range");
  const auto& r = grid.levels();
  const double dz = (r[k + 1] - r[k]) * params.constants.R_earth;
  const double ratio = params.dx / dz;
  return params.lambda2 * ratio * ratio;
}

double horizontal_coupling(const ModelParameters& params, int level) {
  if (level < 0) throw std::invalid_argument("coarsening depth must be non-negative");
  const auto& c = params.constants;
  const double cfl = c.c_h * params.dt / params.dx;
  return c.alpha * c.alpha * cfl * cfl * std::ldexp(1.0, -2 * level);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> parse_key_value(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    auto key = trim(line.substr(0, eq));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_value(ss.str());
}

}  // namespace tpmg
