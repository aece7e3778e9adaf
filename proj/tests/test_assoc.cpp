#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "helpers.hpp"
#include "simcf/assoc.hpp"

using namespace simcf;
using simcf_test::tiny_config;

namespace {

DistanceTensor synthetic(const std::vector<Eigen::MatrixXd>& mats) {
  DistanceTensor t;
  t.d = mats;
  return t;
}

}  // namespace

TEST_CASE("distance tensor reflects antenna and user geometry") {
  Layout layout;
  layout.ap_positions = {{0.0, 0.0, 15.0}};
  layout.ue_positions = {{0.0, 0.0, 1.65}};
  layout.antenna_offsets = {{0.0, 0.0, 0.0}, {0.0, 0.5, 0.0}};
  const DistanceTensor t = distance_tensor(layout);
  REQUIRE(t.num_aps() == 1);
  REQUIRE(t.antennas_per_ap() == 2);
  REQUIRE(t.num_ues() == 1);
  CHECK(t.d[0](0, 0) == doctest::Approx(13.35).epsilon(1e-14));
  CHECK(t.d[0](1, 0) ==
        doctest::Approx(std::sqrt(13.35 * 13.35 + 0.25)).epsilon(1e-14));
}

TEST_CASE("association feasibility predicates") {
  AssociationMatrix a = make_association(1, 2, 2);
  CHECK_FALSE(a.rows_feasible());  // all-zero rows
  a.blocks[0] << 1, 0, 1, 0;
  CHECK(a.rows_feasible());
  CHECK_FALSE(a.covers_all());  // user 1 unserved
  a.blocks[0] << 1, 0, 0, 1;
  CHECK(a.feasible());
  CHECK(a.served_ue(0, 0) == 0);
  CHECK(a.served_ue(0, 1) == 1);
  a.blocks[0] << 1, 1, 0, 1;
  CHECK_FALSE(a.rows_feasible());  // two picks in one row
}

TEST_CASE("association cost sums served distances and rejects bad input") {
  Eigen::MatrixXd d(2, 2);
  d << 5, 9, 9, 5;
  const DistanceTensor t = synthetic({d});
  AssociationMatrix a = make_association(1, 2, 2);
  CHECK_THROWS_AS(association_cost(a, t), std::invalid_argument);
  a.blocks[0] << 1, 0, 0, 1;
  CHECK(association_cost(a, t) == doctest::Approx(10.0));
  a.blocks[0] << 0, 1, 1, 0;
  CHECK(association_cost(a, t) == doctest::Approx(18.0));
}

TEST_CASE("greedy association picks the diagonal on a clear instance") {
  Eigen::MatrixXd d(2, 2);
  d << 5, 9, 9, 5;
  const DistanceTensor t = synthetic({d});
  const AssociationMatrix a = aga(t);
  CHECK(a.feasible());
  CHECK(a.blocks[0](0, 0) == 1);
  CHECK(a.blocks[0](1, 1) == 1);
  CHECK(association_cost(a, t) == doctest::Approx(10.0));
  const BruteForceResult bf = brute_force_assoc(t);
  CHECK(bf.cost == doctest::Approx(10.0));
}

TEST_CASE("greedy association hands leftover antennas to the AP's nearest "
          "users") {
  Eigen::MatrixXd d0(2, 2), d1(2, 2);
  d0 << 1.0, 2.0, 1.5, 2.5;
  d1 << 10.0, 3.0, 11.0, 4.0;
  const DistanceTensor t = synthetic({d0, d1});
  const AssociationMatrix a = aga(t);
  CHECK(a.feasible());
  // Coverage is satisfied by AP 0 alone; AP 1's two free antennas then go
  // to its nearest user (1) first, then user 0.
  CHECK(a.blocks[0](0, 0) == 1);
  CHECK(a.blocks[0](1, 1) == 1);
  CHECK(a.blocks[1](0, 1) == 1);
  CHECK(a.blocks[1](1, 0) == 1);
}

TEST_CASE("greedy association cycles when antennas outnumber users") {
  Eigen::MatrixXd d(5, 2);
  d << 1, 2, 1, 2, 1, 2, 1, 2, 1, 2;
  const DistanceTensor t = synthetic({d});
  const AssociationMatrix a = aga(t);
  CHECK(a.feasible());
  Eigen::VectorXi per_user = Eigen::VectorXi::Zero(2);
  for (int u = 0; u < 5; ++u) ++per_user(a.served_ue(0, u));
  CHECK(per_user(0) == 3);  // nearer user gets the extra antenna
  CHECK(per_user(1) == 2);
}

TEST_CASE("single-user instances put every antenna on that user") {
  Eigen::MatrixXd d(3, 1);
  d << 4, 5, 6;
  const DistanceTensor t = synthetic({d, d});
  for (const AssociationMatrix& a : {aga(t), nua(t)}) {
    CHECK(a.feasible());
    for (int l = 0; l < 2; ++l)
      for (int u = 0; u < 3; ++u) CHECK(a.served_ue(l, u) == 0);
  }
}

TEST_CASE("nearest-user baseline repairs uncovered users") {
  Eigen::MatrixXd d(2, 2);
  d << 1, 9, 2, 8;
  const DistanceTensor t = synthetic({d});
  const AssociationMatrix a = nua(t);
  CHECK(a.feasible());
  // Both antennas prefer user 0; repair moves the one closer to user 1.
  CHECK(a.blocks[0](0, 0) == 1);
  CHECK(a.blocks[0](1, 1) == 1);
}

TEST_CASE("association builders reject L*U < K") {
  Eigen::MatrixXd d(1, 3);
  d << 1, 2, 3;
  const DistanceTensor t = synthetic({d});
  CHECK_THROWS_AS(aga(t), std::invalid_argument);
  CHECK_THROWS_AS(nua(t), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_assoc(t), std::invalid_argument);
}

TEST_CASE("brute force on a trivial instance and size guard") {
  Eigen::MatrixXd d(1, 1);
  d << 3.5;
  const BruteForceResult bf = brute_force_assoc(synthetic({d}));
  CHECK(bf.cost == doctest::Approx(3.5));
  CHECK(bf.assoc.blocks[0](0, 0) == 1);

  // 10^7 candidate vectors exceeds the guard.
  Eigen::MatrixXd big = Eigen::MatrixXd::Ones(7, 10);
  CHECK_THROWS_AS(brute_force_assoc(synthetic({big})),
                  std::invalid_argument);
}

TEST_CASE("brute force breaks cost ties lexicographically") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(2, 2);
  const BruteForceResult bf = brute_force_assoc(synthetic({d}));
  // Every covering association costs 2; the smallest chosen-user vector in
  // antenna order is (0, 1).
  CHECK(bf.assoc.served_ue(0, 0) == 0);
  CHECK(bf.assoc.served_ue(0, 1) == 1);
}

TEST_CASE("heuristics are feasible and never beat exhaustive search") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const ScenarioConfig cfg = tiny_config(2, 2, 3, 1, 2, 2, 77);
    const Layout layout = build_scenario(cfg, trial);
    const DistanceTensor t = distance_tensor(layout);
    const BruteForceResult bf = brute_force_assoc(t);
    for (const AssociationMatrix& a : {aga(t), nua(t)}) {
      REQUIRE(a.feasible());
      CHECK(association_cost(a, t) >= bf.cost - 1e-12);
    }
  }
}

TEST_CASE("greedy matches exhaustive search on diagonal-dominant instances") {
  // Each antenna has a uniquely close user; the perfect matching is optimal
  // and both searches must find exactly it.
  Eigen::MatrixXd d0(2, 4), d1(2, 4);
  d0 << 1, 50, 60, 70, 55, 2, 65, 75;
  d1 << 60, 70, 3, 50, 65, 75, 55, 4;
  const DistanceTensor t = synthetic({d0, d1});
  const AssociationMatrix a = aga(t);
  const BruteForceResult bf = brute_force_assoc(t);
  CHECK(association_cost(a, t) == doctest::Approx(bf.cost));
  CHECK(association_cost(a, t) == doctest::Approx(10.0));
  for (int l = 0; l < 2; ++l)
    for (int u = 0; u < 2; ++u)
      CHECK(a.served_ue(l, u) == bf.assoc.served_ue(l, u));
}

TEST_CASE("association serializes to per-AP 0/1 blocks") {
  AssociationMatrix a = make_association(2, 2, 3);
  a.blocks[0] << 1, 0, 0, 0, 0, 1;
  a.blocks[1] << 0, 1, 0, 1, 0, 0;
  CHECK(association_to_csv(a) ==
        "1,0,0\n0,0,1\n\n0,1,0\n1,0,0\n");
}
