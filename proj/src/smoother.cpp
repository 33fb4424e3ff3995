#include "tpmg/smoother.hpp"

#include <stdexcept>
#include <vector>

#include "tpmg/tridiag.hpp"

namespace tpmg {

void SmootherConfig::validate() const {
  if (!(rho > 0.0 && rho < 2.0)) throw std::invalid_argument("overrelaxation parameter must lie in (0, 2)");
  if (sweeps < 0) throw std::invalid_argument("number of sweeps must be non-negative");
}

int exchanges_per_sweep(Ordering ordering) {
  switch (ordering) {
    case Ordering::kRedBlack: return 2;
    case Ordering::kSymmetric: return 4;
    case Ordering::kJacobi: return 1;
  }
  return 0;
}

namespace {

struct ColumnWork {
  explicit ColumnWork(int nz) : rhs(nz), diag(nz), super(nz), sol(nz), scratch(nz) {}
  std::vector<double> rhs, diag, super, sol, scratch;
};

// Solves the column block for (i, j) with the current neighbour values of u
// and writes the tridiagonal solution into work.sol.
void solve_column(const Field& uf, const Field& ff, int i, int j, const ColumnCoupling& c, const LevelOperator& op,
                  ColumnWork& work) {
  const int nz = op.nz();
  const auto wh = op.horizontal_weight();
  const double* uw = uf.column_ptr(i - 1, j);
  const double* ue = uf.column_ptr(i + 1, j);
  const double* us = uf.column_ptr(i, j - 1);
  const double* un = uf.column_ptr(i, j + 1);
  const double* fc = ff.column_ptr(i, j);
  for (int k = 0; k < nz; ++k)
    work.rhs[k] = fc[k] + wh[k] * (c.face[0] * uw[k] + c.face[1] * ue[k] + c.face[2] * us[k] + c.face[3] * un[k]);
  op.fill_vertical_block(c, work.diag, work.super);
  const std::span<const double> off(work.super.data(), nz > 1 ? nz - 1 : 0);
  thomas_solve(work.diag, off, off, work.rhs, work.sol, work.scratch);
}

void blend(double* u, const std::vector<double>& sol, double rho, int nz) {
  if (rho == 1.0) {
    std::copy_n(sol.data(), nz, u);
    return;
  }
  for (int k = 0; k < nz; ++k) u[k] = (1.0 - rho) * u[k] + rho * sol[k];
}

void jacobi_sweep(DistributedField& u, const DistributedField& f, const LevelOperator& op, double rho) {
  const auto& d = op.decomposition();
  const int n = d.nx_local();
  const int nz = op.nz();
  DistributedField next = op.make_field();
  for (int w = 0; w < u.workers(); ++w) {
    const int i0 = d.i_offset(w), j0 = d.j_offset(w);
#pragma omp parallel
    {
      ColumnWork work(nz);
#pragma omp for
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          solve_column(u.part(w), f.part(w), i, j, op.column(i0 + i, j0 + j), op, work);
          double* out = next.part(w).column_ptr(i, j);
          std::copy_n(u.part(w).column_ptr(i, j), nz, out);
          blend(out, work.sol, rho, nz);
        }
    }
  }
  for (int w = 0; w < u.workers(); ++w)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) std::copy_n(next.part(w).column_ptr(i, j), nz, u.part(w).column_ptr(i, j));
}

}  // namespace

void relax_color(DistributedField& u, const DistributedField& f, const LevelOperator& op, int color, double rho) {
  op.check_field(u);
  op.check_field(f);
  const auto& d = op.decomposition();
  const int n = d.nx_local();
  const int nz = op.nz();
  for (int w = 0; w < u.workers(); ++w) {
    const int i0 = d.i_offset(w), j0 = d.j_offset(w);
    Field& uf = u.part(w);
    const Field& ff = f.part(w);
#pragma omp parallel
    {
      ColumnWork work(nz);
#pragma omp for
      for (int i = 0; i < n; ++i) {
        // First j in this row with (gi + gj) % 2 == color.
        const int jstart = ((i0 + i + j0 + color) % 2 + 2) % 2;
        for (int j = jstart; j < n; j += 2) {
          solve_column(uf, ff, i, j, op.column(i0 + i, j0 + j), op, work);
          blend(uf.column_ptr(i, j), work.sol, rho, nz);
        }
      }
    }
  }
}

void smooth(DistributedField& u, const DistributedField& f, const LevelOperator& op, const SmootherConfig& cfg,
            CommStats* stats) {
  cfg.validate();
  auto half = [&](int color) {
    relax_color(u, f, op, color, cfg.rho);
    halo_exchange(u, stats);
  };
  for (int s = 0; s < cfg.sweeps; ++s) {
    switch (cfg.ordering) {
      case Ordering::kRedBlack:
        half(0);
        half(1);
        break;
      case Ordering::kSymmetric:
        half(0);
        half(1);
        half(1);
        half(0);
        break;
      case Ordering::kJacobi:
        jacobi_sweep(u, f, op, cfg.rho);
        halo_exchange(u, stats);
        break;
    }
  }
}

void apply_ssor_preconditioner(const DistributedField& r, DistributedField& z, const LevelOperator& op, double rho,
                               CommStats* stats) {
  SmootherConfig cfg{rho, 1, Ordering::kSymmetric};
  z.fill(0.0);
  smooth(z, r, op, cfg, stats);
}

}  // namespace tpmg
