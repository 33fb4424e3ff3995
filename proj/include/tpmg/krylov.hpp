#pragma once

#include <functional>

#include "tpmg/field.hpp"
#include "tpmg/solve_report.hpp"
#include "tpmg/stencil.hpp"

namespace tpmg {

/// y = A x. x carries consistent halos when called from pcg_solve.
using LinearOperator = std::function<void(const DistributedField& x, DistributedField& y)>;
/// z = M^{-1} r. Must be symmetric positive definite for PCG.
using Preconditioner = std::function<void(const DistributedField& r, DistributedField& z)>;

struct KrylovConfig {
  double eps = 1e-5;    // relative residual reduction
  double tau = 1e-300;  // absolute residual tolerance
  int maxiter = 1000;
  Reduction reduction = Reduction::kPerWorker;
};

LinearOperator make_operator(const LevelOperator& op);
Preconditioner make_identity_preconditioner();
/// Red-black block SSOR with vertical line relaxation.
Preconditioner make_line_preconditioner(const LevelOperator& op, double rho = 1.0, CommStats* stats = nullptr);

/// Preconditioned Conjugate Gradient from u = 0. Per iteration: one operator
/// application, one preconditioner application, three inner products.
SolveReport pcg_solve(const DistributedField& f, const LinearOperator& op, const Preconditioner& prec,
                      const KrylovConfig& cfg, DistributedField& u, CommStats* stats = nullptr);

}  // namespace tpmg
