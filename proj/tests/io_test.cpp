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

#include "gbs/io.hpp"

namespace gbs {
namespace {

TEST(GraphJson, RoundTrip) {
  const WeightedGraph g(4, {0.5, 0, 1.25, 0}, {{2, 0}, {1, 3}});
  const auto back = io::graph_from_json(io::graph_to_json(g));
  EXPECT_EQ(back.weights(), g.weights());
  ASSERT_EQ(back.edge_count(), 2U);
  EXPECT_TRUE(back.adjacent(0, 2));
  EXPECT_TRUE(back.adjacent(1, 3));
}

TEST(GraphJson, DiagnosticsNameTheField) {
  auto msg = [](const std::string &text) {
    try {
      io::graph_from_json(io::parse_json(text, "graph"));
    } catch (const ValidationError &e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(msg("{}").find("graph.nodes: missing"), std::string::npos);
  EXPECT_NE(msg(R"({"nodes":[{"id":1}]})").find("graph.nodes[0].id"), std::string::npos);
  EXPECT_NE(msg(R"({"nodes":[{"id":0}],"edges":[[0]]})").find("graph.edges[0]"), std::string::npos);
  EXPECT_NE(msg("{nodes").find("malformed JSON"), std::string::npos);
}

TEST(ProgramJson, RoundTripIsExact) {
  const GbsProgram p({0.3, 0.0, 1.1}, random_unitary(3, 42), {0.9, 1.0, 0.5});
  const auto back = io::program_from_json(io::parse_json(io::program_to_json(p).dump(), "program"));
  EXPECT_EQ(back.squeezing(), p.squeezing());
  EXPECT_EQ(back.loss(), p.loss());
  EXPECT_EQ(max_abs_diff(back.unitary().matrix(), p.unitary().matrix()), 0.0);
}

TEST(ProgramJson, RejectsNonUnitary) {
  const auto j = io::parse_json(R"({"r":[0,0],"U":[[[1,0],[0,0]],[[0,0],[2,0]]]})", "program");
  EXPECT_THROW(io::program_from_json(j), ValidationError);
}

TEST(SamplesJsonl, RoundTripAndErrors) {
  const std::vector<PhotonPattern> s{{{1, 0, 2}}, {{0, 0, 0}}};
  const auto text = io::samples_to_jsonl(s);
  EXPECT_EQ(text, "{\"counts\":[1,0,2]}\n{\"counts\":[0,0,0]}\n");
  EXPECT_EQ(io::samples_from_jsonl(text), s);
  EXPECT_THROW(io::samples_from_jsonl("{\"counts\":[1,0]}\n{\"counts\":[1]}\n"), ValidationError);
  EXPECT_THROW(io::samples_from_jsonl("{\"counts\":[-1]}\n"), ValidationError);
}

TEST(DistributionCsv, Format) {
  Distribution d;
  d.patterns = {{{1, 1, 0}}, {{0, 1, 1}}};
  d.probs = {0.1, 0.9};
  EXPECT_EQ(io::distribution_to_csv(d),
            "pattern,probability\n1 1 0,0.10000000000000001\n0 1 1,0.90000000000000002\n");
}

TEST(DockingParamsJson, ParsesTablesAndRejectsUnknownKeys) {
  const auto p = io::docking_params_from_json(io::parse_json(
      R"({"tau":1.0,"epsilon_table":[{"kinds":["HD","HA"],"epsilon":0.2}],
          "weight_table":[{"ligand":"HA","protein":"HD","weight":2}]})",
      "params"));
  EXPECT_EQ(p.tau, 1.0);
  EXPECT_EQ(p.epsilon("HA", "HD"), 0.2);
  EXPECT_EQ(p.weight("HA", "HD"), 2.0);
  EXPECT_THROW(io::docking_params_from_json(io::parse_json(R"({"tao":1})", "params")), ConfigError);
}

TEST(LossModelJson, RoundTrip) {
  const auto m = projected_60_mode_model();
  const auto back = io::loss_model_from_json(io::loss_model_to_json(m));
  EXPECT_EQ(loss_budget(back, 61), loss_budget(m, 61));
  EXPECT_THROW(io::loss_model_from_json(io::parse_json(R"({"stages":[{"transmission":1.5}]})", "s")),
               ValidationError);
}

} // namespace
} // namespace gbs
