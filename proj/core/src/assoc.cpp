#include "simcf/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace simcf {

DistanceTensor distance_tensor(const Layout& layout) {
  const int L = static_cast<int>(layout.ap_positions.size());
  const int U = static_cast<int>(layout.antenna_offsets.size());
  const int K = static_cast<int>(layout.ue_positions.size());
  DistanceTensor t;
  t.d.reserve(L);
  for (int l = 0; l < L; ++l) {
    Eigen::MatrixXd m(U, K);
    for (int u = 0; u < U; ++u) {
      const Eigen::Vector3d ant = layout.antenna_position(l, u);
      for (int k = 0; k < K; ++k) {
        m(u, k) = (ant - layout.ue_positions.at(k)).norm();
      }
    }
    t.d.push_back(std::move(m));
  }
  return t;
}

bool AssociationMatrix::rows_feasible() const {
  for (const auto& b : blocks) {
    for (int u = 0; u < b.rows(); ++u) {
      int ones = 0;
      for (int k = 0; k < b.cols(); ++k) {
        const int v = b(u, k);
        if (v != 0 && v != 1) return false;
        ones += v;
      }
      if (ones != 1) return false;
    }
  }
  return true;
}

bool AssociationMatrix::covers_all() const {
  if (blocks.empty()) return false;
  const int K = num_ues();
  for (int k = 0; k < K; ++k) {
    int total = 0;
    for (const auto& b : blocks)
      for (int u = 0; u < b.rows(); ++u) total += b(u, k);
    if (total < 1) return false;
  }
  return true;
}

int AssociationMatrix::served_ue(int l, int u) const {
  const auto& b = blocks.at(l);
  for (int k = 0; k < b.cols(); ++k)
    if (b(u, k) == 1) return k;
  throw std::logic_error("served_ue: antenna row has no selected user");
}

AssociationMatrix make_association(int num_aps, int antennas_per_ap,
                                   int num_ues) {
  AssociationMatrix a;
  a.blocks.assign(num_aps, Eigen::MatrixXi::Zero(antennas_per_ap, num_ues));
  return a;
}

double association_cost(const AssociationMatrix& A, const DistanceTensor& D) {
  if (!A.feasible())
    throw std::invalid_argument(
        "association_cost: infeasible association (row or coverage "
        "constraint violated)");
  double cost = 0.0;
  for (int l = 0; l < A.num_aps(); ++l) {
    const auto& b = A.blocks[l];
    const auto& d = D.d.at(l);
    for (int u = 0; u < b.rows(); ++u)
      for (int k = 0; k < b.cols(); ++k)
        if (b(u, k)) cost += d(u, k);
  }
  return cost;
}

namespace {

void require_enough_antennas(const DistanceTensor& D) {
  const long total =
      static_cast<long>(D.num_aps()) * D.antennas_per_ap();
  if (total < D.num_ues())
    throw std::invalid_argument(
        "association: insufficient antennas (L*U < K)");
}

}  // namespace

AssociationMatrix aga(const DistanceTensor& D) {
  require_enough_antennas(D);
  const int L = D.num_aps(), U = D.antennas_per_ap(), K = D.num_ues();
  AssociationMatrix A = make_association(L, U, K);
  std::vector<std::vector<bool>> bound(L, std::vector<bool>(U, false));
  std::vector<int> free_count(L, U);
  std::vector<bool> covered(K, false);

  // Phase 1: cover each user once, cheapest uncovered (user, AP) pair first.
  for (int step = 0; step < K; ++step) {
    double best = std::numeric_limits<double>::infinity();
    int bl = -1, bu = -1, bk = -1;
    for (int l = 0; l < L; ++l) {
      if (free_count[l] == 0) continue;
      for (int u = 0; u < U; ++u) {
        if (bound[l][u]) continue;
        for (int k = 0; k < K; ++k) {
          if (covered[k]) continue;
          if (D.d[l](u, k) < best) {
            best = D.d[l](u, k);
            bl = l;
            bu = u;
            bk = k;
          }
        }
      }
    }
    if (bk < 0) break;  // all users covered (K reached early is impossible)
    (void)bu;  // pair distance may come from any free antenna; bind lowest
    int chosen = -1;
    for (int u = 0; u < U; ++u) {
      if (!bound[bl][u]) {
        chosen = u;
        break;
      }
    }
    A.blocks[bl](chosen, bk) = 1;
    bound[bl][chosen] = true;
    --free_count[bl];
    covered[bk] = true;
  }

  // Phase 2: hand every remaining free antenna to its AP's nearest users.
  for (int l = 0; l < L; ++l) {
    if (free_count[l] == 0) continue;
    std::vector<int> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> ap_dist(K);
    for (int k = 0; k < K; ++k) ap_dist[k] = D.d[l].col(k).minCoeff();
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return ap_dist[a] < ap_dist[b]; });
    int slot = 0;
    for (int u = 0; u < U; ++u) {
      if (bound[l][u]) continue;
      A.blocks[l](u, order[slot % K]) = 1;
      bound[l][u] = true;
      ++slot;
    }
    free_count[l] = 0;
  }
  return A;
}

AssociationMatrix nua(const DistanceTensor& D) {
  require_enough_antennas(D);
  const int L = D.num_aps(), U = D.antennas_per_ap(), K = D.num_ues();
  std::vector<std::vector<int>> pick(L, std::vector<int>(U, 0));
  std::vector<int> count(K, 0);
  for (int l = 0; l < L; ++l) {
    for (int u = 0; u < U; ++u) {
      int best_k = 0;
      for (int k = 1; k < K; ++k)
        if (D.d[l](u, k) < D.d[l](u, best_k)) best_k = k;
      pick[l][u] = best_k;
      ++count[best_k];
    }
  }

  // Repair: every uncovered user takes the globally nearest antenna whose
  // current user stays covered after the move.
  for (int k = 0; k < K; ++k) {
    if (count[k] > 0) continue;
    double best = std::numeric_limits<double>::infinity();
    int bl = -1, bu = -1;
    for (int l = 0; l < L; ++l) {
      for (int u = 0; u < U; ++u) {
        if (count[pick[l][u]] < 2) continue;
        if (D.d[l](u, k) < best) {
          best = D.d[l](u, k);
          bl = l;
          bu = u;
        }
      }
    }
    if (bl < 0)
      throw std::logic_error("nua: repair found no movable antenna");
    --count[pick[bl][bu]];
    pick[bl][bu] = k;
    ++count[k];
  }

  AssociationMatrix A = make_association(L, U, K);
  for (int l = 0; l < L; ++l)
    for (int u = 0; u < U; ++u) A.blocks[l](u, pick[l][u]) = 1;
  return A;
}

BruteForceResult brute_force_assoc(const DistanceTensor& D) {
  const int L = D.num_aps(), U = D.antennas_per_ap(), K = D.num_ues();
  const int total = L * U;
  double combos = 1.0;
  for (int i = 0; i < total; ++i) {
    combos *= K;
    if (combos > 1e6)
      throw std::invalid_argument(
          "brute_force_assoc: instance too large (K^(L*U) > 1e6)");
  }

  std::vector<int> choice(total, 0);  // chosen user per antenna, (l,u) order
  std::vector<int> best_choice;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<int> cover(K, 0);

  while (true) {
    std::fill(cover.begin(), cover.end(), 0);
    double cost = 0.0;
    for (int i = 0; i < total; ++i) {
      const int l = i / U, u = i % U, k = choice[i];
      ++cover[k];
      cost += D.d[l](u, k);
    }
    bool feasible = true;
    for (int k = 0; k < K; ++k)
      if (cover[k] == 0) feasible = false;
    // Ascending lexicographic enumeration + strict improvement keeps the
    // lexicographically smallest chosen-user vector among minima.
    if (feasible && cost < best_cost) {
      best_cost = cost;
      best_choice = choice;
    }

    int pos = total - 1;
    while (pos >= 0 && choice[pos] == K - 1) {
      choice[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++choice[pos];
  }

  if (best_choice.empty())
    throw std::invalid_argument(
        "brute_force_assoc: no feasible association exists (L*U < K)");

  BruteForceResult r;
  r.assoc = make_association(L, U, K);
  for (int i = 0; i < total; ++i)
    r.assoc.blocks[i / U](i % U, best_choice[i]) = 1;
  r.cost = best_cost;
  return r;
}

std::string association_to_csv(const AssociationMatrix& A) {
  std::ostringstream out;
  for (int l = 0; l < A.num_aps(); ++l) {
    if (l > 0) out << '\n';
    const auto& b = A.blocks[l];
    for (int u = 0; u < b.rows(); ++u) {
      for (int k = 0; k < b.cols(); ++k) {
        if (k > 0) out << ',';
        out << b(u, k);
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace simcf
