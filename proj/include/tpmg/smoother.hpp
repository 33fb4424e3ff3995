#pragma once

#include "tpmg/field.hpp"
#include "tpmg/stencil.hpp"

namespace tpmg {

/// Column ordering of the block (line) relaxation. Columns with even i+j are red.
enum class Ordering {
  kRedBlack,   // red then black
  kSymmetric,  // red, black, black, red
  kJacobi,     // all columns from the previous iterate
};

struct SmootherConfig {
  double rho = 1.0;  // overrelaxation, in (0, 2)
  int sweeps = 1;
  Ordering ordering = Ordering::kRedBlack;

  void validate() const;
};

/// Halo exchanges per sweep: one per colour update, one for Jacobi.
int exchanges_per_sweep(Ordering ordering);

/// Updates every column of `color` (0 = red, 1 = black):
///   u_c <- (1 - rho) u_c + rho D_c^{-1} (f_c - offdiag * u_neighbours)
/// where D_c is the column's tridiagonal block. Halos are left stale.
void relax_color(DistributedField& u, const DistributedField& f, const LevelOperator& op, int color, double rho);

/// cfg.sweeps block SOR sweeps with vertical line relaxation. u must carry
/// consistent halos on entry and does so on exit.
void smooth(DistributedField& u, const DistributedField& f, const LevelOperator& op, const SmootherConfig& cfg,
            CommStats* stats = nullptr);

/// z = M^{-1} r for the symmetric red-black block SSOR operator: one forward
/// (red, black) and one backward (black, red) half sweep from z = 0.
void apply_ssor_preconditioner(const DistributedField& r, DistributedField& z, const LevelOperator& op,
                               double rho = 1.0, CommStats* stats = nullptr);

}  // namespace tpmg
