#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "simcf/scenario.hpp"

namespace simcf {

/// Per-antenna, per-user 3-D distances: d(l)(u,k) in meters.
struct DistanceTensor {
  std::vector<Eigen::MatrixXd> d;  // L entries, each U x K

  int num_aps() const { return static_cast<int>(d.size()); }
  int antennas_per_ap() const {
    return d.empty() ? 0 : static_cast<int>(d[0].rows());
  }
  int num_ues() const { return d.empty() ? 0 : static_cast<int>(d[0].cols()); }
};

DistanceTensor distance_tensor(const Layout& layout);

/// Antenna-to-user association: blocks[l] is a U x K 0/1 matrix.
/// A feasible matrix has exactly one 1 per row (each antenna serves one
/// user) and at least one 1 in every user column across all APs (coverage).
struct AssociationMatrix {
  std::vector<Eigen::MatrixXi> blocks;

  int num_aps() const { return static_cast<int>(blocks.size()); }
  int antennas_per_ap() const {
    return blocks.empty() ? 0 : static_cast<int>(blocks[0].rows());
  }
  int num_ues() const {
    return blocks.empty() ? 0 : static_cast<int>(blocks[0].cols());
  }

  bool rows_feasible() const;  // every row sums to exactly 1
  bool covers_all() const;     // every user column total >= 1
  bool feasible() const { return rows_feasible() && covers_all(); }

  /// User served by antenna u of AP l; requires a row-feasible matrix.
  int served_ue(int l, int u) const;
};

/// Empty (all-zero) association of the given shape.
AssociationMatrix make_association(int num_aps, int antennas_per_ap,
                                   int num_ues);

/// Total served-link distance: sum over l,u,k of a(l)(u,k) * d(l)(u,k).
/// Throws std::invalid_argument if A is infeasible.
double association_cost(const AssociationMatrix& A, const DistanceTensor& D);

/// Greedy two-phase antenna association.  Phase 1 covers users one at a
/// time: repeatedly pick the uncovered user and AP-with-a-free-antenna pair
/// at minimum distance (min over that AP's free antennas, ties by lowest
/// (l,u,k)) and bind the AP's lowest-indexed free antenna to that user.
/// Phase 2 hands every remaining free antenna to its AP's nearest users in
/// distance order.  Throws std::invalid_argument when L*U < K.
AssociationMatrix aga(const DistanceTensor& D);

/// Nearest-user baseline: every antenna independently picks its closest user
/// (ties by lowest index); a repair pass then gives each still-uncovered
/// user the globally nearest antenna whose reassignment keeps all currently
/// covered users covered.  Throws std::invalid_argument when L*U < K.
AssociationMatrix nua(const DistanceTensor& D);

struct BruteForceResult {
  AssociationMatrix assoc;
  double cost = 0.0;
};

/// Exhaustive minimum-cost search over all row-feasible matrices that cover
/// every user.  Ties resolve to the lexicographically smallest per-antenna
/// chosen-user vector in (l,u) order.  Throws std::invalid_argument when
/// K^(L*U) exceeds 1e6.
BruteForceResult brute_force_assoc(const DistanceTensor& D);

/// CSV serialization: one U x K block of 0/1 rows per AP, blocks separated
/// by a blank line.
std::string association_to_csv(const AssociationMatrix& A);

}  // namespace simcf
