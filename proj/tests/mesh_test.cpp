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

#include <cmath>
#include <numbers>
#include <set>

#include "gbs/mesh.hpp"

namespace gbs {
namespace {

constexpr double pi = std::numbers::pi;

TEST(Mesh, SingleModeDecomposition) {
  CMatrix u(1, 1);
  u << std::polar(1.0, 2.5);
  const Mesh m = clements_decompose(u);
  EXPECT_TRUE(m.cells().empty());
  ASSERT_EQ(m.output_phases().size(), 1u);
  EXPECT_NEAR(m.output_phases()[0], 2.5, 1e-15);
}

TEST(Mesh, TwoModeCellRecovered) {
  CMatrix u = cell_matrix(0.3, 1.1);
  const Mesh m = clements_decompose(u);
  ASSERT_EQ(m.cells().size(), 1u);
  EXPECT_EQ(m.cells()[0].mode, 0);
  EXPECT_NEAR(m.cells()[0].theta, 0.3, 1e-12);
  EXPECT_NEAR(m.cells()[0].phi, 1.1, 1e-12);
  for (double p : m.output_phases())
    EXPECT_NEAR(std::remainder(p, 2 * pi), 0.0, 1e-12);
}

TEST(Mesh, ComposeExamples) {
  const Mesh empty(3, {}, {0.0, 0.0, 0.0});
  EXPECT_EQ(max_abs_diff(mesh_compose(empty).matrix(), CMatrix::Identity(3, 3)), 0.0);

  // theta = pi/2 is a full swap: zero diagonal, unit-modulus off-diagonal
  const Mesh swap(2, {{0, pi / 2, 0.7}}, {0.0, 0.0});
  const CMatrix s = mesh_compose(swap).matrix();
  EXPECT_NEAR(std::abs(s(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s(0, 1)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::arg(s(1, 0)), pi / 2 + 0.7, 1e-15);

  // theta = 0 transmits with the phase on the first mode
  const Mesh pass(2, {{0, 0.0, 0.7}}, {0.0, 0.0});
  const CMatrix t = mesh_compose(pass).matrix();
  EXPECT_NEAR(std::abs(t(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::arg(t(0, 0)), 0.7, 1e-15);
}

TEST(Mesh, RoundTripHaar) {
  for (int n : {2, 3, 4, 5, 8, 16, 32}) {
    const auto u = random_unitary(n, 500 + static_cast<std::uint64_t>(n));
    const Mesh m = clements_decompose(u);
    EXPECT_TRUE(m.is_complete());
    EXPECT_EQ(m.cells().size(), static_cast<std::size_t>(n * (n - 1) / 2));
    const CMatrix back = mesh_compose(m).matrix();
    EXPECT_LE(max_abs_diff(back, u.matrix()), 1e-9) << "n=" << n;
    EXPECT_LE(unitarity_deviation(back), 1e-12);
    for (const auto &c : m.cells()) {
      EXPECT_GE(c.theta, 0.0);
      EXPECT_LE(c.theta, pi / 2);
      EXPECT_GE(c.phi, 0.0);
      EXPECT_LT(c.phi, 2 * pi);
    }
  }
}

TEST(Mesh, RoundTripStructuredUnitaries) {
  // permutations and diagonal phases exercise the theta = 0, pi/2 branches
  CMatrix perm = CMatrix::Zero(5, 5);
  const int image[5] = {3, 0, 4, 1, 2};
  for (int k = 0; k < 5; ++k)
    perm(image[k], k) = std::polar(1.0, 0.3 * k);
  EXPECT_LE(max_abs_diff(mesh_compose(clements_decompose(perm)).matrix(), perm), 1e-12);
  const CMatrix id = CMatrix::Identity(6, 6);
  EXPECT_LE(max_abs_diff(mesh_compose(clements_decompose(id)).matrix(), id), 1e-12);
}

TEST(Mesh, LayerOrderIsValid) {
  const Mesh m = clements_decompose(random_unitary(8, 3));
  const auto layers = mesh_layers(8, m.cells());
  EXPECT_TRUE(std::is_sorted(layers.begin(), layers.end()));
  std::map<int, std::set<int>> used;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    auto &modes = used[layers[k]];
    EXPECT_FALSE(modes.count(m.cells()[k].mode));
    EXPECT_FALSE(modes.count(m.cells()[k].mode + 1));
    modes.insert(m.cells()[k].mode);
    modes.insert(m.cells()[k].mode + 1);
  }
  EXPECT_EQ(mesh_depth(m), 8);
}

TEST(Mesh, RejectsInvalid) {
  CMatrix bad = CMatrix::Identity(3, 3);
  bad(0, 0) = 1.01;
  try {
    clements_decompose(bad);
    FAIL();
  } catch (const ValidationError &e) {
    EXPECT_NE(std::string(e.what()).find("0.0201"), std::string::npos);
  }
  EXPECT_THROW(Mesh(2, {{1, 0.1, 0.1}}, {0, 0}), ValidationError);
  EXPECT_THROW(Mesh(2, {{0, 2.0, 0.1}}, {0, 0}), ValidationError);
  EXPECT_THROW(Mesh(2, {{0, 0.1, 7.0}}, {0, 0}), ValidationError);
  EXPECT_THROW(Mesh(2, {}, {0}), ValidationError);
  // layers 0, 1, 0: the cell on (2,3) belongs before the second (0,1) cell
  EXPECT_THROW(Mesh(4, {{0, 0.1, 0.1}, {0, 0.2, 0.1}, {2, 0.1, 0.1}}, {0, 0, 0, 0}),
               ValidationError);
  EXPECT_NO_THROW(Mesh(4, {{0, 0.1, 0.1}, {2, 0.1, 0.1}, {0, 0.2, 0.1}}, {0, 0, 0, 0}));
}

TEST(Schedule, SingleMode) {
  const Mesh m(1, {}, {1.25});
  const auto s = compile_timebin_schedule(m);
  ASSERT_EQ(s.events.size(), 1u);
  EXPECT_EQ(s.events[0].device, Device::output_phase);
  EXPECT_EQ(s.events[0].value, 1.25);
}

TEST(Schedule, TwoModeCell) {
  const Mesh m = clements_decompose(CMatrix(cell_matrix(0.3, 1.1)));
  const auto s = compile_timebin_schedule(m);
  std::vector<ScheduleEvent> theta, phi;
  for (const auto &e : s.events) {
    if (e.device == Device::EOM1)
      theta.push_back(e);
    if (e.device == Device::EOM2)
      phi.push_back(e);
  }
  ASSERT_EQ(theta.size(), 1u);
  ASSERT_EQ(phi.size(), 1u);
  EXPECT_NEAR(theta[0].value, 0.3, 1e-12);
  EXPECT_NEAR(phi[0].value, 1.1, 1e-12);
  EXPECT_DOUBLE_EQ(theta[0].t_ns - phi[0].t_ns, 25.0);
}

TEST(Schedule, LoopLatencyAndBinAlignment) {
  // 180 m at group index 1.5 is ~900.6 ns, i.e. 36 bins of 25 ns
  EXPECT_EQ(loop_latency_bins(ScheduleParams{}), 36);

  const Mesh m = clements_decompose(random_unitary(32, 11));
  const auto s = compile_timebin_schedule(m);
  EXPECT_EQ(s.loop_period_bins, 36);
  const int depth = mesh_depth(m);
  EXPECT_EQ(s.traversals, depth);
  EXPECT_DOUBLE_EQ(s.events.back().t_ns, (depth * 36 + 31) * 25.0);

  std::set<std::pair<double, Device>> seen;
  double prev = -1.0;
  int cells = 0, switches = 0;
  for (const auto &e : s.events) {
    EXPECT_LE(std::abs(e.t_ns / 25.0 - std::round(e.t_ns / 25.0)) * 25.0, 1e-9);
    EXPECT_GE(e.t_ns, prev);
    prev = e.t_ns;
    EXPECT_TRUE(seen.insert({e.t_ns, e.device}).second);
    cells += e.device == Device::EOM1;
    switches += e.device == Device::EOMa || e.device == Device::EOMb;
  }
  EXPECT_EQ(cells, 32 * 31 / 2);
  EXPECT_EQ(switches, 2 * depth);
}

TEST(LossBudget, Examples) {
  const double t = loss_budget(projected_60_mode_model(), projected_60_mode_loops);
  EXPECT_NEAR(100.0 * t, 0.12, 0.005);
  EXPECT_EQ(loss_budget(LossModel{{}, 0.9}, 0), 1.0);
  EXPECT_NEAR(loss_budget(LossModel{{}, 0.82}, 32), std::pow(0.82, 32), 1e-18);
  EXPECT_NEAR(std::pow(0.82, 32), 1.75e-3, 0.01e-3);
}

TEST(LossBudget, Monotone) {
  auto model = projected_60_mode_model();
  double prev = 2.0;
  for (int loops = 0; loops < 70; ++loops) {
    const double t = loss_budget(model, loops);
    EXPECT_LE(t, prev);
    prev = t;
  }
  const double base = loss_budget(model, 10);
  model.stages[2].transmission = 0.5;
  EXPECT_LE(loss_budget(model, 10), base);
  EXPECT_THROW(loss_budget(model, -1), ValidationError);
  model.stages[0].transmission = 1.2;
  EXPECT_THROW(loss_budget(model, 1), ValidationError);
}

} // namespace
} // namespace gbs
