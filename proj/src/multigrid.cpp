#include "tpmg/multigrid.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "tpmg/params.hpp"

namespace tpmg {

std::string to_string(LevelPolicy policy) {
  switch (policy) {
    case LevelPolicy::kStandard: return "standard";
    case LevelPolicy::kShallow: return "shallow";
    case LevelPolicy::kVeryShallow: return "very_shallow";
    case LevelPolicy::kExplicit: return "explicit";
  }
  return "?";
}

LevelPolicy parse_level_policy(const std::string& name) {
  if (name == "standard") return LevelPolicy::kStandard;
  if (name == "shallow") return LevelPolicy::kShallow;
  if (name == "very_shallow" || name == "very-shallow") return LevelPolicy::kVeryShallow;
  if (name == "explicit") return LevelPolicy::kExplicit;
  throw std::invalid_argument("unknown level policy '" + name + "'");
}

int MGConfig::effective_coarse_sweeps() const {
  if (coarse_sweeps) return *coarse_sweeps;
  return policy == LevelPolicy::kVeryShallow ? 5 : 1;
}

void MGConfig::validate() const {
  if (nu_pre < 0 || nu_post < 0 || nu_pre + nu_post < 1)
    throw std::invalid_argument("need at least one pre- or post-smoothing step");
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("tolerance must lie in (0, 1)");
  if (maxiter < 0) throw std::invalid_argument("maxiter must be non-negative");
  if (effective_coarse_sweeps() < 1) throw std::invalid_argument("coarse level needs at least one sweep");
  SmootherConfig{rho, 1, ordering}.validate();
}

namespace {

int log2_exact(int n) {
  int l = 0;
  while ((1 << l) < n) ++l;
  return l;
}

}  // namespace

int level_count(int nx, int workers, const MGConfig& cfg) {
  if (!is_power_of_two(nx)) throw std::invalid_argument("multigrid needs a power-of-two nx");
  const int max_levels = log2_exact(nx) + 1;
  int levels = 0;
  switch (cfg.policy) {
    case LevelPolicy::kStandard:
      levels = max_levels;
      break;
    case LevelPolicy::kShallow: {
      const int side = Decomposition::decompose(nx, workers).side();
      levels = log2_exact(nx / side) + 1;
      break;
    }
    case LevelPolicy::kVeryShallow:
      levels = 4;
      break;
    case LevelPolicy::kExplicit:
      levels = cfg.explicit_levels;
      break;
  }
  if (levels < 1 || levels > max_levels)
    throw std::invalid_argument(to_string(cfg.policy) + " policy needs " + std::to_string(levels) +
                                " levels, but nx=" + std::to_string(nx) + " allows at most " +
                                std::to_string(max_levels));
  return levels;
}

LevelHierarchy::LevelHierarchy(const PanelGrid& fine_grid, double omega2, double lambda2, int workers,
                               const MGConfig& cfg) {
  cfg.validate();
  const int L = level_count(fine_grid.nx(), workers, cfg);
  const int nz = fine_grid.nz();

  // Built finest first, stored coarsest first.
  std::vector<std::unique_ptr<GridLevel>> fine_first;
  PanelGrid grid = fine_grid;
  Decomposition decomp = Decomposition::decompose(fine_grid.nx(), workers);
  for (int l = L; l >= 1; --l) {
    auto level = std::make_unique<GridLevel>(GridLevel{l, LevelOperator(grid, omega2, lambda2, decomp),
                                                       DistributedField(decomp, nz), DistributedField(decomp, nz),
                                                       DistributedField(decomp, nz), false, {}});
    if (l > 1) {
      const bool must_fold = decomp.nx_local() < 2;
      const bool split = cfg.l_split && l <= *cfg.l_split;
      level->folds = decomp.workers() > 1 && (must_fold || split);
      if (level->folds && l_split_ == 0) l_split_ = l;
      decomp = level->folds ? decomp.folded().coarsened() : decomp.coarsened();
      grid = grid.coarsened();
    }
    fine_first.push_back(std::move(level));
  }
  for (auto it = fine_first.rbegin(); it != fine_first.rend(); ++it) levels_.push_back(std::move(*it));
}

void LevelHierarchy::reset_stats() {
  for (auto& l : levels_) l->stats = {};
}

CommStats LevelHierarchy::total_stats() const {
  CommStats s;
  for (const auto& l : levels_) {
    s.halo_exchanges += l->stats.halo_exchanges;
    s.collects += l->stats.collects;
    s.distributes += l->stats.distributes;
  }
  return s;
}

void restrict_average(const DistributedField& fine, DistributedField& coarse, double scale) {
  const auto& fd = fine.decomposition();
  const auto& cd = coarse.decomposition();
  if (cd.nx() * 2 != fd.nx() || cd.side() != fd.side() || coarse.nz() != fine.nz())
    throw std::invalid_argument("restriction needs a coarse field with half the columns on the same workers");
  const int n = cd.nx_local();
  const int nz = fine.nz();
  const double w = 0.25 * scale;
  for (int p = 0; p < fine.workers(); ++p) {
    const Field& ff = fine.part(p);
    Field& cf = coarse.part(p);
#pragma omp parallel for
    for (int I = 0; I < n; ++I)
      for (int J = 0; J < n; ++J) {
        const double* a = ff.column_ptr(2 * I, 2 * J);
        const double* b = ff.column_ptr(2 * I + 1, 2 * J);
        const double* c = ff.column_ptr(2 * I, 2 * J + 1);
        const double* d = ff.column_ptr(2 * I + 1, 2 * J + 1);
        double* out = cf.column_ptr(I, J);
        for (int k = 0; k < nz; ++k) out[k] = w * ((a[k] + b[k]) + (c[k] + d[k]));
      }
  }
}

void prolong_bilinear(const DistributedField& coarse, DistributedField& fine) {
  const auto& fd = fine.decomposition();
  const auto& cd = coarse.decomposition();
  if (cd.nx() * 2 != fd.nx() || cd.side() != fd.side() || coarse.nz() != fine.nz())
    throw std::invalid_argument("prolongation needs a fine field with twice the columns on the same workers");
  const int n = fd.nx_local();
  const int nz = fine.nz();
  for (int p = 0; p < fine.workers(); ++p) {
    const Field& cf = coarse.part(p);
    Field& ff = fine.part(p);
#pragma omp parallel for
    for (int i = 0; i < n; ++i) {
      const int I = i / 2;
      const int di = (i % 2 == 0) ? -1 : 1;
      for (int j = 0; j < n; ++j) {
        const int J = j / 2;
        const int dj = (j % 2 == 0) ? -1 : 1;
        const double* c00 = cf.column_ptr(I, J);
        const double* c10 = cf.column_ptr(I + di, J);
        const double* c01 = cf.column_ptr(I, J + dj);
        const double* c11 = cf.column_ptr(I + di, J + dj);
        double* out = ff.column_ptr(i, j);
        for (int k = 0; k < nz; ++k)
          out[k] = 0.5625 * c00[k] + 0.1875 * (c10[k] + c01[k]) + 0.0625 * c11[k];
      }
    }
  }
}

void v_cycle(LevelHierarchy& hier, const MGConfig& cfg, int l) {
  GridLevel& lev = hier.level(l);
  const SmootherConfig pre{cfg.rho, cfg.nu_pre, cfg.ordering};
  const SmootherConfig post{cfg.rho, cfg.nu_post, cfg.ordering};

  if (l == 1) {
    smooth(lev.u, lev.f, lev.op, SmootherConfig{cfg.rho, cfg.effective_coarse_sweeps(), cfg.ordering}, &lev.stats);
    return;
  }
  GridLevel& coarse = hier.level(l - 1);

  smooth(lev.u, lev.f, lev.op, pre, &lev.stats);
  compute_residual(lev.f, lev.u, lev.op, lev.r);
  // The residual is volume integrated, so each coarse cell receives the sum of
  // its children: four times their average.
  if (lev.folds) {
    restrict_average(collect(lev.r, &lev.stats), coarse.f, 4.0);
  } else {
    restrict_average(lev.r, coarse.f, 4.0);
  }
  coarse.u.fill(0.0);

  v_cycle(hier, cfg, l - 1);

  if (lev.folds) {
    DistributedField gathered(lev.op.decomposition().folded(), lev.op.nz());
    prolong_bilinear(coarse.u, gathered);
    axpy(1.0, distribute(gathered, lev.op.decomposition(), &lev.stats), lev.u);
  } else {
    prolong_bilinear(coarse.u, lev.r);
    axpy(1.0, lev.r, lev.u);
  }
  halo_exchange(lev.u, &lev.stats);

  smooth(lev.u, lev.f, lev.op, post, &lev.stats);
}

SolveReport mg_solve(const DistributedField& rhs, LevelHierarchy& hier, const MGConfig& cfg, DistributedField& u) {
  cfg.validate();
  GridLevel& fine = hier.finest();
  fine.op.check_field(rhs);
  fine.op.check_field(u);

  SolveReport report;
  report.config_echo = {{"solver", "mg"},
                        {"policy", to_string(cfg.policy)},
                        {"levels", std::to_string(hier.levels())},
                        {"nu_pre", std::to_string(cfg.nu_pre)},
                        {"nu_post", std::to_string(cfg.nu_post)},
                        {"coarse_sweeps", std::to_string(cfg.effective_coarse_sweeps())},
                        {"rho", std::to_string(cfg.rho)},
                        {"eps", std::to_string(cfg.eps)},
                        {"maxiter", std::to_string(cfg.maxiter)},
                        {"l_split", std::to_string(hier.l_split())}};

  copy(rhs, fine.f);
  fine.u.fill(0.0);
  // r_0 = f for the zero initial guess.
  const double r0 = norm2(rhs, cfg.reduction);
  report.residual_history.push_back(r0);
  if (r0 == 0.0) {
    report.converged = true;
    u.fill(0.0);
    return report;
  }

  const auto start = std::chrono::steady_clock::now();
  for (int it = 1; it <= cfg.maxiter; ++it) {
    v_cycle(hier, cfg, hier.levels());
    compute_residual(fine.f, fine.u, fine.op, fine.r);
    const double rn = norm2(fine.r, cfg.reduction);
    report.residual_history.push_back(rn);
    report.iterations = it;
    if (!std::isfinite(rn)) {
      report.warnings.push_back("residual became non-finite");
      break;
    }
    if (rn / r0 <= cfg.eps) {
      report.converged = true;
      break;
    }
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  copy(fine.u, u);
  return report;
}

}  // namespace tpmg
