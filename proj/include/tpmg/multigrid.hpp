#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tpmg/field.hpp"
#include "tpmg/geometry.hpp"
#include "tpmg/partition.hpp"
#include "tpmg/smoother.hpp"
#include "tpmg/solve_report.hpp"
#include "tpmg/stencil.hpp"

namespace tpmg {

enum class LevelPolicy {
  kStandard,     // coarsen to a single global column
  kShallow,      // coarsen until one column per worker is left
  kVeryShallow,  // three coarsenings, 5 smoother iterations on the coarsest level
  kExplicit,     // MGConfig::explicit_levels levels
};

std::string to_string(LevelPolicy policy);
LevelPolicy parse_level_policy(const std::string& name);

struct MGConfig {
  int nu_pre = 1;
  int nu_post = 1;
  LevelPolicy policy = LevelPolicy::kStandard;
  int explicit_levels = 0;
  std::optional<int> coarse_sweeps;  // default: 1, or 5 for very shallow
  double eps = 1e-5;
  int maxiter = 100;
  /// First level on which subdomains are folded onto fewer workers. Defaults
  /// to the finest level with a single column per worker.
  std::optional<int> l_split;
  double rho = 1.0;
  Ordering ordering = Ordering::kRedBlack;
  Reduction reduction = Reduction::kPerWorker;

  int effective_coarse_sweeps() const;
  void validate() const;
};

/// Number of levels L the policy produces for nx columns on `workers` workers.
/// Throws std::invalid_argument if the policy would coarsen below one column.
int level_count(int nx, int workers, const MGConfig& cfg);

struct GridLevel {
  int level;  // 1 = coarsest
  LevelOperator op;
  DistributedField u, f, r;
  bool folds = false;  // collect onto fewer workers before restricting
  CommStats stats;
};

/// Multigrid levels L (finest) .. 1. Horizontal semi-coarsening only: nz is
/// the same on all levels, coarse operators are rediscretised.
class LevelHierarchy {
 public:
  LevelHierarchy(const PanelGrid& fine_grid, double omega2, double lambda2, int workers, const MGConfig& cfg);

  int levels() const { return static_cast<int>(levels_.size()); }
  GridLevel& level(int l) { return *levels_.at(l - 1); }
  const GridLevel& level(int l) const { return *levels_.at(l - 1); }
  GridLevel& finest() { return *levels_.back(); }
  const GridLevel& finest() const { return *levels_.back(); }
  /// 0 when no level folds.
  int l_split() const { return l_split_; }

  void reset_stats();
  CommStats total_stats() const;

 private:
  std::vector<std::unique_ptr<GridLevel>> levels_;
  int l_split_ = 0;
};

/// Cell average of the four horizontal children, times `scale`. The coarse
/// field's decomposition must be the fine one coarsened.
void restrict_average(const DistributedField& fine, DistributedField& coarse, double scale = 1.0);

/// Bilinear interpolation of coarse cell-centre values onto the fine grid.
/// The coarse field must carry consistent halos; at the panel boundary the
/// mirrored halo gives constant extrapolation. Fine halos are not written.
void prolong_bilinear(const DistributedField& coarse, DistributedField& fine);

/// One V-cycle on level l, using the level's u and f.
void v_cycle(LevelHierarchy& hier, const MGConfig& cfg, int l);

/// Standalone multigrid from u = 0 until ||r|| / ||r_0|| <= eps or maxiter.
SolveReport mg_solve(const DistributedField& rhs, LevelHierarchy& hier, const MGConfig& cfg, DistributedField& u);

}  // namespace tpmg
