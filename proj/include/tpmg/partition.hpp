#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace tpmg {

class DistributedField;

/// Horizontal decomposition of an nx x nx panel into side x side equal square
/// subdomains. Vertical columns are never split.
///
/// Workers are identified by their index in the finest (unfolded) worker
/// grid, so folded layouts keep track of which workers stay active.
class Decomposition {
 public:
  enum Edge { kWest = 0, kEast = 1, kSouth = 2, kNorth = 3 };

  /// workers must be 1 or a power of four, and sqrt(workers) must divide nx.
  static Decomposition decompose(int nx, int workers);

  int nx() const { return nx_; }
  int side() const { return side_; }
  int workers() const { return side_ * side_; }
  int nx_local() const { return nx_ / side_; }

  int block_i(int w) const { return w / side_; }
  int block_j(int w) const { return w % side_; }
  int i_offset(int w) const { return block_i(w) * nx_local(); }
  int j_offset(int w) const { return block_j(w) * nx_local(); }
  /// Local worker index of the neighbour across `edge`, or -1 at the panel boundary.
  int neighbor(int w, Edge edge) const;
  /// Index of worker w in the finest worker grid.
  int global_id(int w) const;
  const std::vector<int>& active_workers() const { return active_; }

  bool operator==(const Decomposition& o) const {
    return nx_ == o.nx_ && side_ == o.side_ && base_side_ == o.base_side_;
  }

  /// Same grid on a quarter of the workers: each 2x2 group folds onto its
  /// lowest-indexed member.
  Decomposition folded() const;
  /// Same workers, half the columns per direction. Requires an even local size.
  Decomposition coarsened() const;

 private:
  Decomposition(int nx, int side, int base_side);

  int nx_;
  int side_;
  int base_side_;
  std::vector<int> active_;
};

struct CommStats {
  std::size_t halo_exchanges = 0;
  std::size_t collects = 0;
  std::size_t distributes = 0;
};

/// Fills every halo cell with the owned value of the neighbouring subdomain,
/// or mirrors the adjacent owned value on the physical boundary (homogeneous
/// Neumann). Two phases (xi1 then xi2) so corner halos are filled too.
void halo_exchange(DistributedField& field, CommStats* stats = nullptr);

/// Gathers each 2x2 group of subdomains onto its parent worker.
DistributedField collect(const DistributedField& field, CommStats* stats = nullptr);
/// Inverse of collect: scatters onto `target`, whose folded() layout must
/// match the field's layout.
DistributedField distribute(const DistributedField& field, const Decomposition& target,
                            CommStats* stats = nullptr);

}  // namespace tpmg
