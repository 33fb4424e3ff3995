#include "tpmg/krylov.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tpmg/smoother.hpp"

namespace tpmg {

LinearOperator make_operator(const LevelOperator& op) {
  return [&op](const DistributedField& x, DistributedField& y) { apply_operator(x, op, y); };
}

Preconditioner make_identity_preconditioner() {
  return [](const DistributedField& r, DistributedField& z) { copy(r, z); };
}

Preconditioner make_line_preconditioner(const LevelOperator& op, double rho, CommStats* stats) {
  return [&op, rho, stats](const DistributedField& r, DistributedField& z) {
    apply_ssor_preconditioner(r, z, op, rho, stats);
  };
}

SolveReport pcg_solve(const DistributedField& f, const LinearOperator& op, const Preconditioner& prec,
                      const KrylovConfig& cfg, DistributedField& u, CommStats* stats) {
  if (!(cfg.eps > 0 && cfg.eps < 1)) throw std::invalid_argument("tolerance must lie in (0, 1)");
  if (cfg.maxiter < 0) throw std::invalid_argument("maxiter must be non-negative");
  if (!f.same_shape(u)) throw std::invalid_argument("solution and right-hand side shapes differ");

  SolveReport report;
  std::ostringstream eps;
  eps << cfg.eps;
  report.config_echo = {{"solver", "cg"}, {"eps", eps.str()}, {"maxiter", std::to_string(cfg.maxiter)}};

  const int nz = f.nz();
  const auto& d = f.decomposition();
  DistributedField r(d, nz), z(d, nz), p(d, nz), q(d, nz);

  // u_0 = 0, so r_0 = f.
  u.fill(0.0);
  copy(f, r);
  const double r0 = norm2(r, cfg.reduction);
  report.residual_history.push_back(r0);
  if (r0 == 0.0 || r0 < cfg.tau) {
    report.converged = true;
    return report;
  }

  const auto start = std::chrono::steady_clock::now();
  prec(r, z);
  copy(z, p);
  double kappa_old = dot(r, z, cfg.reduction);
  for (int K = 1; K <= cfg.maxiter; ++K) {
    halo_exchange(p, stats);
    op(p, q);
    const double pq = dot(p, q, cfg.reduction);
    if (!(pq > 0.0)) {
      report.breakdown = true;
      report.warnings.push_back("breakdown: <p, Ap> <= 0, operator is not positive definite");
      break;
    }
    const double alpha = kappa_old / pq;
    axpy(alpha, p, u);
    axpy(-alpha, q, r);
    const double rn = norm2(r, cfg.reduction);
    report.residual_history.push_back(rn);
    report.iterations = K;
    if (!std::isfinite(rn)) {
      report.warnings.push_back("residual became non-finite");
      break;
    }
    if (rn / r0 < cfg.eps || rn < cfg.tau) {
      report.converged = true;
      break;
    }
    prec(r, z);
    const double kappa = dot(r, z, cfg.reduction);
    xpby(z, kappa / kappa_old, p);
    kappa_old = kappa;
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  // Guard against drift of the recursively updated residual.
  halo_exchange(u, stats);
  op(u, q);
  axpy(-1.0, f, q);
  const double true_res = norm2(q, cfg.reduction);
  if (std::abs(true_res - report.residual_history.back()) > 10.0 * cfg.eps * r0) {
    std::ostringstream msg;
    msg << "true residual " << true_res << " differs from recursive residual " << report.residual_history.back();
    report.warnings.push_back(msg.str());
  }
  return report;
}

}  // namespace tpmg
