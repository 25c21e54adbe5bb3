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

/**
 * @file rna.hpp
 * @brief RNA secondary structure as maximum weighted clique on the weighted
 * full stem graph (one node per candidate stem, weight = stem length, edges
 * between stems that can coexist), plus MCC scoring and sequence/structure
 * parsing.
 */

#ifndef GBS_RNA_HPP
#define GBS_RNA_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gbs/cliques.hpp"
#include "gbs/encoding.hpp"
#include "gbs/errors.hpp"
#include "gbs/graph.hpp"
#include "gbs/simulator.hpp"

namespace gbs {

class RnaSequence {
public:
  /// Upper-cases the input and maps T to U; anything outside ACGU throws.
  explicit RnaSequence(std::string bases, std::string accession = {}) : accession_(std::move(accession)) {
    for (char &ch : bases) {
      ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      if (ch == 'T')
        ch = 'U';
      if (ch != 'A' && ch != 'C' && ch != 'G' && ch != 'U')
        throw ValidationError(std::string("invalid base '") + ch + "' in RNA sequence");
    }
    if (bases.empty())
      throw ValidationError("RNA sequence is empty");
    bases_ = std::move(bases);
  }

  const std::string &bases() const { return bases_; }
  const std::string &accession() const { return accession_; }
  int length() const { return static_cast<int>(bases_.size()); }
  /// 1-based access.
  char at(int i) const { return bases_[static_cast<std::size_t>(i - 1)]; }

private:
  std::string bases_;
  std::string accession_;
};

using BasePair = std::pair<int, int>; // 1-based, first < second
using PairSet = std::set<BasePair>;

/// Unordered base pairings, stored as two-letter strings in both orders.
class AllowedPairs {
public:
  AllowedPairs() : AllowedPairs({"AU", "GC", "GU"}) {}
  explicit AllowedPairs(const std::vector<std::string> &pairs) {
    for (const auto &p : pairs) {
      if (p.size() != 2)
        throw ValidationError("base pair '" + p + "' must be two letters");
      std::string up = p;
      for (char &ch : up) {
        ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (ch == 'T')
          ch = 'U';
        if (ch != 'A' && ch != 'C' && ch != 'G' && ch != 'U')
          throw ValidationError("base pair '" + p + "' has an invalid base");
      }
      pairs_.insert(up);
      pairs_.insert(std::string{up[1], up[0]});
    }
  }
  static AllowedPairs watson_crick() { return AllowedPairs({"AU", "GC"}); }

  bool allows(char a, char b) const { return pairs_.count(std::string{a, b}) > 0; }

private:
  std::set<std::string> pairs_;
};

struct Stem {
  int i = 0;      // 1-based 5' end of the outer pair
  int j = 0;      // 1-based 3' end of the outer pair
  int length = 0; // pairs (i+k, j-k), k < length

  PairSet pairs() const {
    PairSet out;
    for (int k = 0; k < length; ++k)
      out.insert({i + k, j - k});
    return out;
  }
  bool uses(int base) const { return (base >= i && base < i + length) || (base > j - length && base <= j); }

  friend bool operator==(const Stem &, const Stem &) = default;
  friend auto operator<=>(const Stem &, const Stem &) = default;
};

struct StemParams {
  int min_stem_len = 3;
  int min_loop = 3;
  AllowedPairs allowed;
  bool allow_pseudoknots = false;

  void validate() const {
    if (min_stem_len < 1)
      throw ValidationError("min_stem_len must be at least 1");
    if (min_loop < 0)
      throw ValidationError("min_loop must be non-negative");
  }
};

/// Every contiguous complementary run (i, j, L) with L >= min_stem_len and
/// an enclosed loop of at least min_loop bases, ordered by (i, j, L).
/// Shorter runs nested in longer ones are included.
inline std::vector<Stem> enumerate_stems(const RnaSequence &seq, const StemParams &p = {}) {
  p.validate();
  const int n = seq.length();
  std::vector<Stem> out;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int len = 1;; ++len) {
        const int a = i + len - 1, b = j - len + 1;
        if (b - a - 1 < p.min_loop || !p.allowed.allows(seq.at(a), seq.at(b)))
          break;
        if (len >= p.min_stem_len)
          out.push_back({i, j, len});
      }
  return out;
}

/// Two stems coexist when they share no base and, unless pseudoknots are
/// allowed, their spans are nested or disjoint.
inline bool stems_coexist(const Stem &a, const Stem &b, bool allow_pseudoknots = false) {
  for (int k = a.i; k < a.i + a.length; ++k)
    if (b.uses(k))
      return false;
  for (int k = a.j - a.length + 1; k <= a.j; ++k)
    if (b.uses(k))
      return false;
  if (allow_pseudoknots)
    return true;
  const bool crossing = (a.i < b.i && b.i < a.j && a.j < b.j) || (b.i < a.i && a.i < b.j && b.j < a.j);
  return !crossing;
}

inline WeightedGraph build_wfsg(const std::vector<Stem> &stems, bool allow_pseudoknots = false) {
  if (stems.empty())
    throw ValidationError("cannot build a stem graph without stems");
  std::vector<double> w;
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < stems.size(); ++a) {
    w.push_back(stems[a].length);
    for (std::size_t b = a + 1; b < stems.size(); ++b)
      if (stems_coexist(stems[a], stems[b], allow_pseudoknots))
        edges.push_back({static_cast<int>(a), static_cast<int>(b)});
  }
  return WeightedGraph(static_cast<int>(stems.size()), std::move(w), std::move(edges));
}

struct FoldPrediction {
  std::vector<Stem> stems;
  PairSet base_pairs;
};

inline FoldPrediction make_prediction(const std::vector<Stem> &stems, const std::vector<int> &nodes) {
  FoldPrediction out;
  std::set<int> used;
  for (int v : nodes) {
    const Stem &s = stems[static_cast<std::size_t>(v)];
    out.stems.push_back(s);
    for (const auto &bp : s.pairs()) {
      if (!used.insert(bp.first).second || !used.insert(bp.second).second)
        throw InternalError("predicted stems pair base twice");
      out.base_pairs.insert(bp);
    }
  }
  return out;
}

/// Exact prediction: heaviest maximal clique via Bron-Kerbosch.
inline FoldPrediction predict_exact(const RnaSequence &seq, const StemParams &p = {},
                                    int node_limit = bron_kerbosch_node_limit) {
  const auto stems = enumerate_stems(seq, p);
  if (stems.empty())
    return {};
  const auto g = build_wfsg(stems, p.allow_pseudoknots);
  return make_prediction(stems, max_weight_clique(g, node_limit).nodes);
}

struct GbsFoldParams {
  std::size_t samples = 300;
  SamplingWindow window{2, 4, true};
  int iterations = 30;
  double target_max_eig = 0.9;
  std::uint64_t seed = 0;
  std::uint64_t guard = default_enumeration_guard;
};

struct GbsFold {
  FoldPrediction prediction;
  CliqueReport report; // empty when the graph has no edges
};

/// Sampling-based prediction: encode the stem graph, draw collision-free
/// samples in the photon window, post-process, and return the heaviest
/// clique reached from GBS seeds. A stem graph without edges has only
/// singleton cliques, so the heaviest stem is returned directly.
inline GbsFold predict_gbs(const RnaSequence &seq, const StemParams &p, const GbsFoldParams &gp) {
  const auto stems = enumerate_stems(seq, p);
  if (stems.empty())
    return {};
  const auto g = build_wfsg(stems, p.allow_pseudoknots);
  if (g.edge_count() == 0) {
    int best = 0;
    for (int v = 1; v < g.node_count(); ++v)
      if (g.weight(v) > g.weight(best))
        best = v;
    return {make_prediction(stems, {best}), {}};
  }
  const auto enc = choose_scale(g, default_alpha(g), gp.target_max_eig);
  const auto state = prepare_state(encode_graph(g, enc));
  const auto set = sample_window(state, gp.window, gp.samples, derive_seed(gp.seed, Stream::sampler), gp.guard);
  GbsFold out;
  out.report = run_pipeline(g, set.samples, gp.window.min_total, gp.iterations, gp.seed);
  for (const auto &c : out.report.cliques)
    if (c.count_gbs > 0) {
      out.prediction = make_prediction(stems, c.nodes);
      break;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Scoring

namespace detail {
inline void check_pairs(const PairSet &s, int n) {
  for (const auto &[a, b] : s)
    if (a < 1 || b > n || a >= b)
      throw ValidationError("base pair (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") outside a sequence of length " + std::to_string(n));
}
} // namespace detail

/// Matthews correlation from confusion counts; 0 when the denominator vanishes.
inline double mcc_from_counts(double tp, double fp, double fn, double tn) {
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom <= 0.0)
    return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

/// Matthews correlation over all n(n-1)/2 index pairs; 0 when undefined.
inline double mcc(const PairSet &predicted, const PairSet &reference, int seq_len) {
  detail::check_pairs(predicted, seq_len);
  detail::check_pairs(reference, seq_len);
  double tp = 0;
  for (const auto &bp : predicted)
    tp += reference.count(bp);
  const double fp = static_cast<double>(predicted.size()) - tp;
  const double fn = static_cast<double>(reference.size()) - tp;
  const double universe = 0.5 * seq_len * (seq_len - 1.0);
  return mcc_from_counts(tp, fp, fn, universe - tp - fp - fn);
}

/// sqrt(PPV * sensitivity), the common shortcut; 0 when undefined.
inline double mcc_approx(const PairSet &predicted, const PairSet &reference) {
  double tp = 0;
  for (const auto &bp : predicted)
    tp += reference.count(bp);
  if (predicted.empty() || reference.empty())
    return 0.0;
  return std::sqrt(tp / static_cast<double>(predicted.size()) * tp / static_cast<double>(reference.size()));
}

// ---------------------------------------------------------------------------
// Formats

/// Dot-bracket to base pairs; (), [], {} and <> are all pairing brackets.
inline PairSet parse_dot_bracket(const std::string &s) {
  static const std::string open = "([{<", close = ")]}>";
  std::vector<std::vector<int>> stacks(open.size());
  PairSet out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const char ch = s[k];
    const int pos = static_cast<int>(k) + 1;
    if (ch == '.' || ch == '-' || ch == ',' || ch == ':' || ch == '_')
      continue;
    if (auto o = open.find(ch); o != std::string::npos) {
      stacks[o].push_back(pos);
    } else if (auto c = close.find(ch); c != std::string::npos) {
      if (stacks[c].empty())
        throw ValidationError("unbalanced '" + std::string(1, ch) + "' at position " + std::to_string(pos));
      out.insert({stacks[c].back(), pos});
      stacks[c].pop_back();
    } else {
      throw ValidationError("unexpected character '" + std::string(1, ch) + "' in dot-bracket string");
    }
  }
  for (const auto &st : stacks)
    if (!st.empty())
      throw ValidationError("unclosed bracket at position " + std::to_string(st.back()));
  return out;
}

/// Pairs to dot-bracket; crossing pairs use [] after ().
inline std::string to_dot_bracket(const PairSet &pairs, int n) {
  detail::check_pairs(pairs, n);
  std::string out(static_cast<std::size_t>(n), '.');
  std::vector<BasePair> placed_round;
  for (const auto &[a, b] : pairs) {
    bool crosses = false;
    for (const auto &[c, d] : placed_round)
      if ((c < a && a < d && d < b) || (a < c && c < b && b < d))
        crosses = true;
    const char o = crosses ? '[' : '(', cl = crosses ? ']' : ')';
    if (!crosses)
      placed_round.push_back({a, b});
    if (out[static_cast<std::size_t>(a - 1)] != '.' || out[static_cast<std::size_t>(b - 1)] != '.')
      throw ValidationError("base paired twice in structure");
    out[static_cast<std::size_t>(a - 1)] = o;
    out[static_cast<std::size_t>(b - 1)] = cl;
  }
  return out;
}

/// First record of a FASTA text. Text without a header line is read as a
/// bare sequence.
inline RnaSequence parse_fasta(const std::string &text) {
  std::istringstream in(text);
  std::string line, accession, bases;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == ';')
      continue;
    if (line[0] == '>') {
      if (seen_header)
        break;
      seen_header = true;
      std::istringstream head(line.substr(1));
      head >> accession;
      continue;
    }
    for (char ch : line)
      if (!std::isspace(static_cast<unsigned char>(ch)))
        bases.push_back(ch);
  }
  return RnaSequence(bases, accession);
}

} // namespace gbs

#endif // GBS_RNA_HPP
