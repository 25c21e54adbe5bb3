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

#include "gbs/rng.hpp"
#include "gbs/rna.hpp"

namespace gbs {
namespace {

StemParams wc(int min_len = 3, int min_loop = 3) {
  StemParams p;
  p.min_stem_len = min_len;
  p.min_loop = min_loop;
  p.allowed = AllowedPairs::watson_crick();
  return p;
}

// Pairwise coexistence checked base by base, independent of Stem::uses.
bool oracle_coexist(const Stem &a, const Stem &b) {
  std::set<int> ba;
  for (const auto &[x, y] : a.pairs()) {
    ba.insert(x);
    ba.insert(y);
  }
  for (const auto &[x, y] : b.pairs())
    if (ba.count(x) || ba.count(y))
      return false;
  for (const auto &[p, q] : a.pairs())
    for (const auto &[r, s] : b.pairs())
      if ((p < r && r < q && q < s) || (r < p && p < s && s < q))
        return false;
  return true;
}

std::string random_rna(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::string s;
  for (int i = 0; i < n; ++i)
    s.push_back("ACGU"[rng.below(4)]);
  return s;
}

TEST(RnaSequence, NormalizesAndValidates) {
  const RnaSequence s("acgtT", "X1");
  EXPECT_EQ(s.bases(), "ACGUU");
  EXPECT_EQ(s.accession(), "X1");
  EXPECT_EQ(s.at(1), 'A');
  EXPECT_THROW(RnaSequence("ACGN"), ValidationError);
  EXPECT_THROW(RnaSequence(""), ValidationError);
  EXPECT_THROW(AllowedPairs({"AUG"}), ValidationError);
}

TEST(EnumerateStems, Examples) {
  EXPECT_EQ(enumerate_stems(RnaSequence("GGGAAACCC"), wc()), (std::vector<Stem>{{1, 9, 3}}));
  EXPECT_TRUE(enumerate_stems(RnaSequence("AAAAAAAAAAAA"), {}).empty());
  EXPECT_EQ(enumerate_stems(RnaSequence("GC"), wc(1, 0)), (std::vector<Stem>{{1, 2, 1}}));
}

TEST(EnumerateStems, IncludesShorterRunsAndWobble) {
  // Four G-C pairs around a 3-base loop, plus the shifted and shorter runs.
  const auto s = enumerate_stems(RnaSequence("GGGGAAACCCC"), wc());
  EXPECT_EQ(s, (std::vector<Stem>{{1, 10, 3}, {1, 11, 3}, {1, 11, 4}, {2, 10, 3}, {2, 11, 3}}));
  EXPECT_TRUE(enumerate_stems(RnaSequence("GGGAAAUUU"), wc()).empty());
  EXPECT_EQ(enumerate_stems(RnaSequence("GGGAAAUUU"), StemParams{}).size(), 1U);
}

TEST(EnumerateStems, EveryStemValidAndOrdered) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RnaSequence seq(random_rna(40, seed));
    const StemParams p;
    const auto stems = enumerate_stems(seq, p);
    for (std::size_t k = 0; k < stems.size(); ++k) {
      const auto &s = stems[k];
      ASSERT_GE(s.length, p.min_stem_len);
      ASSERT_GE((s.j - s.length + 1) - (s.i + s.length - 1) - 1, p.min_loop);
      for (const auto &[a, b] : s.pairs())
        ASSERT_TRUE(p.allowed.allows(seq.at(a), seq.at(b)));
      if (k > 0) {
        ASSERT_LT(stems[k - 1], s);
      }
    }
  }
}

TEST(BuildWfsg, Examples) {
  const Stem outer{1, 20, 3}, inner{5, 15, 3}, sharing{3, 12, 3}, apart{21, 30, 3};
  const auto g = build_wfsg({outer, inner, sharing, apart});
  EXPECT_TRUE(g.adjacent(0, 1));  // nested
  EXPECT_FALSE(g.adjacent(0, 2)); // base 3 shared
  EXPECT_TRUE(g.adjacent(0, 3));  // disjoint
  const auto single = build_wfsg({Stem{1, 9, 3}});
  EXPECT_EQ(single.node_count(), 1);
  EXPECT_EQ(single.weight(0), 3.0);
}

TEST(BuildWfsg, PseudoknotFlag) {
  const Stem a{1, 12, 2}, b{6, 18, 2};
  EXPECT_FALSE(build_wfsg({a, b}).adjacent(0, 1));
  EXPECT_TRUE(build_wfsg({a, b}, true).adjacent(0, 1));
}

TEST(BuildWfsg, MatchesOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto stems = enumerate_stems(RnaSequence(random_rna(35, 100 + seed)), StemParams{});
    if (stems.empty())
      continue;
    const auto g = build_wfsg(stems);
    for (int u = 0; u < g.node_count(); ++u)
      for (int v = u + 1; v < g.node_count(); ++v)
        ASSERT_EQ(g.adjacent(u, v),
                  oracle_coexist(stems[static_cast<std::size_t>(u)], stems[static_cast<std::size_t>(v)]));
  }
}

TEST(Predict, Examples) {
  const auto one = predict_exact(RnaSequence("GGGAAACCC"), wc());
  EXPECT_EQ(one.stems, (std::vector<Stem>{{1, 9, 3}}));
  EXPECT_EQ(one.base_pairs, (PairSet{{1, 9}, {2, 8}, {3, 7}}));
  EXPECT_TRUE(predict_exact(RnaSequence("AAAA"), wc()).stems.empty());
  // Two hairpins side by side.
  const auto two = predict_exact(RnaSequence("GGGAAACCCACCCUUUGGG"), wc());
  EXPECT_EQ(two.stems, (std::vector<Stem>{{1, 9, 3}, {11, 19, 3}}));
}

TEST(Predict, ExactMatchesBruteForceOnSmallGraphs) {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 15 && seed < 200; ++seed) {
    const RnaSequence seq(random_rna(30, 500 + seed));
    const auto stems = enumerate_stems(seq, StemParams{});
    if (stems.empty() || stems.size() > 12)
      continue;
    ++checked;
    double best = 0;
    const std::size_t n = stems.size();
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      bool ok = true;
      double w = 0;
      for (std::size_t a = 0; a < n && ok; ++a) {
        if (!(mask >> a & 1U))
          continue;
        w += stems[a].length;
        for (std::size_t b = a + 1; b < n && ok; ++b)
          if (mask >> b & 1U)
            ok = oracle_coexist(stems[a], stems[b]);
      }
      if (ok)
        best = std::max(best, w);
    }
    const auto pred = predict_exact(seq, StemParams{});
    double w = 0;
    for (const auto &s : pred.stems)
      w += s.length;
    ASSERT_EQ(w, best) << seq.bases();
    for (std::size_t a = 0; a < pred.stems.size(); ++a)
      for (std::size_t b = a + 1; b < pred.stems.size(); ++b)
        ASSERT_TRUE(oracle_coexist(pred.stems[a], pred.stems[b]));
    ASSERT_EQ(pred.base_pairs.size(), static_cast<std::size_t>(w));
  }
  EXPECT_GE(checked, 10);
}

TEST(Predict, GbsModeFindsTwoHairpins) {
  GbsFoldParams gp;
  gp.samples = 200;
  gp.window = {2, 2, true};
  gp.seed = 4;
  const RnaSequence seq("GGGAAACCCACCCUUUGGG");
  const auto fold = predict_gbs(seq, wc(), gp);
  EXPECT_EQ(fold.prediction.stems, predict_exact(seq, wc()).stems);
  const auto again = predict_gbs(seq, wc(), gp);
  EXPECT_EQ(again.prediction.stems, fold.prediction.stems);
}

TEST(Predict, GbsModeEdgelessGraph) {
  const auto fold = predict_gbs(RnaSequence("GGGAAACCC"), wc(), GbsFoldParams{});
  EXPECT_EQ(fold.prediction.stems, (std::vector<Stem>{{1, 9, 3}}));
  EXPECT_TRUE(fold.report.cliques.empty());
  EXPECT_TRUE(predict_gbs(RnaSequence("AAAA"), wc(), GbsFoldParams{}).prediction.stems.empty());
}

TEST(Mcc, Examples) {
  const PairSet ref{{1, 10}, {2, 9}, {3, 8}};
  EXPECT_DOUBLE_EQ(mcc(ref, ref, 10), 1.0);
  // TP=3, FP=1, FN=1 on n=15 (105 index pairs, so TN=100).
  const PairSet r4{{1, 15}, {2, 14}, {3, 13}, {4, 12}};
  const PairSet p4{{1, 15}, {2, 14}, {3, 13}, {5, 11}};
  const double tn = 105 - 5;
  EXPECT_NEAR(mcc(p4, r4, 15), (3 * tn - 1) / std::sqrt(4.0 * 4.0 * (tn + 1) * (tn + 1)), 1e-15);
  EXPECT_EQ(mcc({}, ref, 10), 0.0);
  EXPECT_THROW(mcc({{0, 3}}, ref, 10), ValidationError);
  EXPECT_THROW(mcc({{3, 11}}, ref, 10), ValidationError);
}

TEST(Mcc, ReferenceValueFromConfusionCounts) {
  EXPECT_NEAR(mcc_from_counts(3, 1, 1, 95), 284.0 / 384.0, 1e-15);
  EXPECT_EQ(mcc_from_counts(0, 0, 3, 97), 0.0);
}

TEST(Mcc, SymmetricBoundedAndApprox) {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    PairSet a, b;
    for (int k = 0; k < 6; ++k) {
      const int i = 1 + static_cast<int>(rng.below(10));
      a.insert({i, i + 1 + static_cast<int>(rng.below(10))});
      const int j = 1 + static_cast<int>(rng.below(10));
      b.insert({j, j + 1 + static_cast<int>(rng.below(10))});
    }
    const double m = mcc(a, b, 21);
    ASSERT_NEAR(m, mcc(b, a, 21), 1e-15);
    ASSERT_GE(m, -1.0);
    ASSERT_LE(m, 1.0);
    ASSERT_EQ(m == 1.0, a == b);
  }
  const PairSet r{{1, 9}, {2, 8}}, p{{1, 9}, {3, 7}};
  EXPECT_DOUBLE_EQ(mcc_approx(p, r), 0.5);
  EXPECT_DOUBLE_EQ(mcc_approx(r, r), 1.0);
}

TEST(DotBracket, RoundTrip) {
  EXPECT_EQ(parse_dot_bracket("((..))."), (PairSet{{1, 6}, {2, 5}}));
  EXPECT_EQ(parse_dot_bracket("(([..)).]"), (PairSet{{1, 7}, {2, 6}, {3, 9}}));
  EXPECT_EQ(to_dot_bracket({{1, 6}, {2, 5}}, 7), "((..)).");
  EXPECT_EQ(to_dot_bracket(parse_dot_bracket("(([..)).]"), 9), "(([..)).]");
  EXPECT_THROW(parse_dot_bracket("(()"), ValidationError);
  EXPECT_THROW(parse_dot_bracket("())"), ValidationError);
  EXPECT_THROW(parse_dot_bracket("(x)"), ValidationError);
}

TEST(Fasta, FirstRecord) {
  const auto s = parse_fasta(">AB041850.1 some description\nggga\naaccc\n>second\nAAAA\n");
  EXPECT_EQ(s.accession(), "AB041850.1");
  EXPECT_EQ(s.bases(), "GGGAAACCC");
  EXPECT_EQ(parse_fasta("ACGU\n").bases(), "ACGU");
  EXPECT_THROW(parse_fasta(">only header\n"), ValidationError);
}

} // namespace
} // namespace gbs
