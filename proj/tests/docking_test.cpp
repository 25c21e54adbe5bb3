/*
 * Copyright 2026 The gbs-toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include "gbs/docking.hpp"
#include "gbs/rng.hpp"

namespace gbs {
namespace {

PharmacophorePoint pt(std::string id, std::string kind, double x, double y = 0, double z = 0) {
  return {std::move(id), std::move(kind), Eigen::Vector3d(x, y, z)};
}

DockingParams flat(double tau, double eps = 0.0) {
  DockingParams p;
  p.tau = tau;
  p.epsilon_hbond = eps;
  p.epsilon_other = eps;
  return p;
}

std::vector<PharmacophorePoint> random_points(const std::string &prefix, int n, Rng &rng) {
  static const char *kinds[] = {"HA", "HD", "NC", "AR"};
  std::vector<PharmacophorePoint> out;
  for (int i = 0; i < n; ++i)
    out.push_back(pt(prefix + std::to_string(i), kinds[rng.below(4)], 8 * rng.uniform(), 8 * rng.uniform(),
                     8 * rng.uniform()));
  return out;
}

TEST(BuildBig, CompatiblePairWithinTolerance) {
  const auto big = build_big({pt("l1", "HA", 0), pt("l2", "HD", 3.0)}, {pt("p1", "HD", 0), pt("p2", "HA", 3.5)},
                             flat(0.8));
  ASSERT_EQ(big.graph.node_count(), 4);
  // nodes: (l1,p1)=0 (l1,p2)=1 (l2,p1)=2 (l2,p2)=3
  EXPECT_TRUE(big.graph.adjacent(0, 3));
  EXPECT_TRUE(big.graph.adjacent(1, 2));
  EXPECT_EQ(big.graph.edge_count(), 2U);
  const auto tight = build_big({pt("l1", "HA", 0), pt("l2", "HD", 3.0)}, {pt("p1", "HD", 0), pt("p2", "HA", 3.5)},
                               flat(0.4));
  EXPECT_EQ(tight.graph.edge_count(), 0U);
}

TEST(BuildBig, ContactsSharingAPointNeverAdjacent) {
  Rng rng(3);
  const auto big = build_big(random_points("l", 4, rng), random_points("p", 5, rng), flat(1e9));
  for (const auto &e : big.graph.edges()) {
    const auto &a = big.contacts[static_cast<std::size_t>(e.u)];
    const auto &b = big.contacts[static_cast<std::size_t>(e.v)];
    EXPECT_NE(a.ligand, b.ligand);
    EXPECT_NE(a.protein, b.protein);
  }
  // Huge tau: complete multipartite, n m (n-1)(m-1)/2 edges.
  EXPECT_EQ(big.graph.edge_count(), 4U * 5U * 3U * 4U / 2U);
}

TEST(BuildBig, AdjacencySymmetricZeroDiagonal) {
  Rng rng(8);
  const auto big = build_big(random_points("l", 5, rng), random_points("p", 6, rng), DockingParams{});
  const auto a = big.graph.adjacency_matrix();
  EXPECT_EQ((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(a.diagonal().cwiseAbs().maxCoeff(), 0.0);
}

TEST(BuildBig, EpsilonClassRule) {
  // Mismatch 1.0: tau 0.5 fails alone, passes with eps 0.3 (0.5 + 0.6).
  DockingParams p;
  p.tau = 0.5;
  const auto hb = build_big({pt("a", "HA", 0), pt("b", "HD", 2)}, {pt("c", "HA", 0), pt("d", "HD", 3)}, p);
  EXPECT_EQ(hb.graph.edge_count(), 0U);
  const auto ar = build_big({pt("a", "HA", 0), pt("b", "AR", 2)}, {pt("c", "HA", 0), pt("d", "HD", 3)}, p);
  EXPECT_TRUE(ar.graph.adjacent(0, 3));
  // the protein pair's class counts too
  const auto nc = build_big({pt("a", "HA", 0), pt("b", "HD", 2)}, {pt("c", "NC", 0), pt("d", "HD", 3)}, p);
  EXPECT_TRUE(nc.graph.adjacent(0, 3));
}

TEST(BuildBig, TablesAndConfigErrors) {
  DockingParams p = flat(0.8);
  p.weight_table[{"HA", "HD"}] = 2.5;
  const std::vector<PharmacophorePoint> lig{pt("l1", "HA", 0)};
  EXPECT_EQ(build_big(lig, {pt("p1", "HD", 0)}, p).graph.weight(0), 2.5);
  try {
    build_big(lig, {pt("p1", "AR", 0)}, p);
    FAIL();
  } catch (const ConfigError &e) {
    EXPECT_NE(std::string(e.what()).find("ligand HA, protein AR"), std::string::npos);
  }
  DockingParams q = flat(0.8);
  q.epsilon_table[unordered_pair("HD", "HA")] = 0.1;
  EXPECT_NO_THROW(build_big({pt("a", "HA", 0), pt("b", "HD", 1)}, {pt("c", "HD", 0), pt("d", "HA", 1)}, q));
  try {
    build_big({pt("a", "HA", 0), pt("b", "AR", 1)}, {pt("c", "HD", 0), pt("d", "HA", 1)}, q);
    FAIL();
  } catch (const ConfigError &e) {
    EXPECT_NE(std::string(e.what()).find("(AR, HA)"), std::string::npos);
  }
}

TEST(BuildBig, Validation) {
  const std::vector<PharmacophorePoint> one{pt("x", "HA", 0)};
  EXPECT_THROW(build_big({}, one, {}), ValidationError);
  EXPECT_THROW(build_big(one, {pt("x", "HA", 0), pt("x", "HD", 1)}, {}), ValidationError);
  EXPECT_THROW(build_big(one, {pt("y", "", 0)}, {}), ValidationError);
  EXPECT_THROW(build_big(one, {pt("y", "HA", std::nan(""))}, {}), ValidationError);
  EXPECT_THROW(build_big(one, one, flat(-1)), ValidationError);
  DockingParams p;
  p.weight_table[{"HA", "HA"}] = -1;
  EXPECT_THROW(build_big(one, one, p), ValidationError);
}

TEST(BuildBig, ScalingInvariance) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(derive_seed(seed, Stream::fixture));
    auto lig = random_points("l", 4, rng);
    auto pro = random_points("p", 5, rng);
    const DockingParams p;
    const auto base = build_big(lig, pro, p);
    const double s = 2.0; // power of two: scaling is exact in floating point
    for (auto &x : lig)
      x.position *= s;
    for (auto &x : pro)
      x.position *= s;
    DockingParams ps = p;
    ps.tau *= s;
    ps.epsilon_hbond *= s;
    ps.epsilon_other *= s;
    const auto scaled = build_big(lig, pro, ps);
    ASSERT_EQ(scaled.graph.edges().size(), base.graph.edges().size());
    for (std::size_t k = 0; k < base.graph.edges().size(); ++k) {
      EXPECT_EQ(scaled.graph.edges()[k].u, base.graph.edges()[k].u);
      EXPECT_EQ(scaled.graph.edges()[k].v, base.graph.edges()[k].v);
    }
    EXPECT_EQ(scaled.graph.weights(), base.graph.weights());
  }
}

TEST(InterpretPose, Examples) {
  Rng rng(1);
  const auto big = build_big(random_points("l", 3, rng), random_points("p", 3, rng), flat(0.8));
  EXPECT_TRUE(interpret_pose(big, Clique{}).empty());

  // Planted: protein points are a rigid translate of the ligand points.
  const std::vector<PharmacophorePoint> lig{pt("a", "HA", 0), pt("b", "HD", 2, 1), pt("c", "AR", 1, 3, 1)};
  std::vector<PharmacophorePoint> pro{pt("x", "HD", 5, 0), pt("y", "HA", 7, 1), pt("z", "AR", 6, 3, 1),
                                      pt("w", "NC", 20, 20, 20)};
  const auto planted = build_big(lig, pro, DockingParams{});
  const std::vector<int> nodes{0 * 4 + 0, 1 * 4 + 1, 2 * 4 + 2};
  const auto pose = interpret_pose(planted, make_clique(planted.graph, nodes));
  ASSERT_EQ(pose.size(), 3U);
  EXPECT_EQ(pose[0].ligand_id, "a");
  EXPECT_EQ(pose[0].protein_id, "x");
  EXPECT_EQ(pose[2].ligand_id, "c");
  EXPECT_EQ(pose[2].protein_id, "z");
}

TEST(InterpretPose, NonCliqueAndInjectivity) {
  Rng rng(2);
  const auto big = build_big(random_points("l", 3, rng), random_points("p", 3, rng), flat(0.0));
  EXPECT_THROW(interpret_pose(big, Clique{{0, 1}, 0}), ValidationError);
  // A corrupted graph that links two contacts on the same ligand point.
  BindingGraph bad = big;
  bad.graph = WeightedGraph(9, {}, {{0, 1}});
  EXPECT_THROW(interpret_pose(bad, Clique{{0, 1}, 0}), InternalError);
}

TEST(InterpretPose, CliquesAreCompatibleInjectiveSets) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(derive_seed(seed, Stream::fixture));
    const auto lig = random_points("l", 4, rng);
    const auto pro = random_points("p", 5, rng);
    const DockingParams p;
    const auto big = build_big(lig, pro, p);
    for (const auto &c : bron_kerbosch(big.graph)) {
      const auto pose = interpret_pose(big, make_clique(big.graph, c));
      for (std::size_t a = 0; a < pose.size(); ++a)
        for (std::size_t b = a + 1; b < pose.size(); ++b) {
          const auto &l1 = lig[static_cast<std::size_t>(pose[a].ligand)];
          const auto &l2 = lig[static_cast<std::size_t>(pose[b].ligand)];
          const auto &p1 = pro[static_cast<std::size_t>(pose[a].protein)];
          const auto &p2 = pro[static_cast<std::size_t>(pose[b].protein)];
          const bool hb = is_hbond_kind(l1.kind) && is_hbond_kind(l2.kind) && is_hbond_kind(p1.kind) &&
                          is_hbond_kind(p2.kind);
          const double tol = p.tau + 2 * (hb ? p.epsilon_hbond : p.epsilon_other);
          const double mismatch =
              std::abs((p1.position - p2.position).norm() - (l1.position - l2.position).norm());
          ASSERT_LE(mismatch, tol);
          ASSERT_NE(pose[a].ligand, pose[b].ligand);
          ASSERT_NE(pose[a].protein, pose[b].protein);
        }
    }
  }
}

} // namespace
} // namespace gbs
