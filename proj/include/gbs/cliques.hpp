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
 * @file cliques.hpp
 * @brief Sample post-processing for maximum weighted clique search: greedy
 * shrinking to a clique, local-search expansion, an exact Bron-Kerbosch
 * oracle, and GBS versus uniform seeding statistics.
 */

#ifndef GBS_CLIQUES_HPP
#define GBS_CLIQUES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "gbs/errors.hpp"
#include "gbs/graph.hpp"
#include "gbs/parallel.hpp"
#include "gbs/rng.hpp"
#include "gbs/simulator.hpp"

namespace gbs {

struct Clique {
  std::vector<int> nodes; // sorted
  double weight = 0.0;

  friend bool operator==(const Clique &, const Clique &) = default;
};

/// Builds a clique record, checking completeness against the host graph.
inline Clique make_clique(const WeightedGraph &g, std::vector<int> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  for (int v : nodes)
    if (v < 0 || v >= g.node_count())
      throw ValidationError("node " + std::to_string(v) + " is not in the graph");
  if (!g.is_clique(nodes))
    throw ValidationError("node set is not a clique");
  return Clique{nodes, g.total_weight(nodes)};
}

/// Modes with exactly one photon. Collisions are rejected.
inline std::vector<int> pattern_to_subgraph(const PhotonPattern &n) {
  std::vector<int> nodes;
  for (std::size_t k = 0; k < n.counts.size(); ++k) {
    if (n.counts[k] > 1)
      throw ValidationError("pattern has a collision on mode " + std::to_string(k) +
                            "; post-processing needs collision-free detections");
    if (n.counts[k] == 1)
      nodes.push_back(static_cast<int>(k));
  }
  return nodes;
}

/// Removes the node of lowest (induced degree, weight, index) until the
/// remaining set is complete.
inline Clique greedy_shrink(const WeightedGraph &g, std::vector<int> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  for (int v : nodes)
    if (v < 0 || v >= g.node_count())
      throw ValidationError("node " + std::to_string(v) + " is not in the graph");
  NodeBits in = NodeBits::from(g.node_count(), nodes);
  while (true) {
    const int size = static_cast<int>(nodes.size());
    int worst = -1;
    int worst_degree = 0;
    bool complete = true;
    for (int v : nodes) {
      const int d = (g.neighbors(v) & in).count();
      if (d < size - 1)
        complete = false;
      if (worst < 0 || d < worst_degree ||
          (d == worst_degree && (g.weight(v) < g.weight(worst) ||
                                 (g.weight(v) == g.weight(worst) && v < worst)))) {
        worst = v;
        worst_degree = d;
      }
    }
    if (complete)
      break;
    in.reset(worst);
    nodes.erase(std::find(nodes.begin(), nodes.end(), worst));
  }
  return Clique{nodes, g.total_weight(nodes)};
}

namespace detail {

/// Nodes adjacent to every member of `members` and not in it.
inline NodeBits common_neighbors(const WeightedGraph &g, const std::vector<int> &members) {
  NodeBits cand(g.node_count());
  for (int v = 0; v < g.node_count(); ++v)
    cand.set(v);
  for (int m : members) {
    cand &= g.neighbors(m);
    cand.reset(m);
  }
  return cand;
}

} // namespace detail

/// Grows a clique for up to `iterations` steps. Each step adds the common
/// neighbour of highest (weight, then lowest index); when there is none it
/// tries a swap that removes one member and adds two mutually adjacent
/// nodes, taking the swap of largest non-negative weight gain (ties broken
/// by the seeded generator). Stops early when neither move applies.
inline Clique local_search(const WeightedGraph &g, const Clique &start, int iterations,
                           std::uint64_t seed) {
  Clique c = make_clique(g, start.nodes);
  Rng rng(seed);
  for (int it = 0; it < iterations; ++it) {
    const NodeBits cand = detail::common_neighbors(g, c.nodes);
    int best = -1;
    cand.for_each([&](int v) {
      if (best < 0 || g.weight(v) > g.weight(best))
        best = v;
    });
    if (best >= 0) {
      c.nodes.insert(std::lower_bound(c.nodes.begin(), c.nodes.end(), best), best);
      c.weight += g.weight(best);
      continue;
    }

    struct Swap {
      int out, in1, in2;
    };
    std::vector<Swap> best_swaps;
    double best_gain = -1.0;
    for (std::size_t k = 0; k < c.nodes.size(); ++k) {
      std::vector<int> rest = c.nodes;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      NodeBits pool = detail::common_neighbors(g, rest);
      pool.reset(c.nodes[k]);
      const std::vector<int> options = pool.to_vector();
      for (std::size_t a = 0; a < options.size(); ++a)
        for (std::size_t b = a + 1; b < options.size(); ++b) {
          if (!g.adjacent(options[a], options[b]))
            continue;
          const double gain = g.weight(options[a]) + g.weight(options[b]) - g.weight(c.nodes[k]);
          if (gain < 0.0 || gain < best_gain)
            continue;
          if (gain > best_gain) {
            best_gain = gain;
            best_swaps.clear();
          }
          best_swaps.push_back({c.nodes[k], options[a], options[b]});
        }
    }
    if (best_swaps.empty())
      break;
    const Swap s = best_swaps[static_cast<std::size_t>(rng.below(best_swaps.size()))];
    c.nodes.erase(std::find(c.nodes.begin(), c.nodes.end(), s.out));
    c.nodes.push_back(s.in1);
    c.nodes.push_back(s.in2);
    std::sort(c.nodes.begin(), c.nodes.end());
    c.weight = g.total_weight(c.nodes);
  }
  return c;
}

inline constexpr int bron_kerbosch_node_limit = 40;

namespace detail {

inline void bron_kerbosch_pivot(const WeightedGraph &g, std::vector<int> &r, NodeBits p, NodeBits x,
                                std::vector<std::vector<int>> &out) {
  if (p.none() && x.none()) {
    std::vector<int> c = r;
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
    return;
  }
  // Tomita pivot: the vertex of P u X with most neighbours in P
  int pivot = -1, pivot_score = -1;
  auto consider = [&](int u) {
    const int score = (g.neighbors(u) & p).count();
    if (score > pivot_score) {
      pivot_score = score;
      pivot = u;
    }
  };
  p.for_each(consider);
  x.for_each(consider);
  NodeBits branch = p;
  branch.subtract(g.neighbors(pivot));
  branch.for_each([&](int v) {
    r.push_back(v);
    bron_kerbosch_pivot(g, r, p & g.neighbors(v), x & g.neighbors(v), out);
    r.pop_back();
    p.reset(v);
    x.set(v);
  });
}

} // namespace detail

/// All maximal cliques, each sorted, in lexicographic order.
inline std::vector<std::vector<int>> bron_kerbosch(const WeightedGraph &g,
                                                   int node_limit = bron_kerbosch_node_limit) {
  if (g.node_count() > node_limit)
    throw GuardError("Bron-Kerbosch limited to " + std::to_string(node_limit) + " nodes, graph has " +
                     std::to_string(g.node_count()));
  std::vector<std::vector<int>> out;
  std::vector<int> r;
  NodeBits p(g.node_count());
  for (int v = 0; v < g.node_count(); ++v)
    p.set(v);
  detail::bron_kerbosch_pivot(g, r, p, NodeBits(g.node_count()), out);
  std::sort(out.begin(), out.end());
  return out;
}

/// Heaviest maximal clique (first in lexicographic order on ties).
inline Clique max_weight_clique(const WeightedGraph &g, int node_limit = bron_kerbosch_node_limit) {
  Clique best;
  bool found = false;
  for (auto &c : bron_kerbosch(g, node_limit)) {
    const double w = g.total_weight(c);
    if (!found || w > best.weight) {
      best = Clique{std::move(c), w};
      found = true;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Pipeline

struct CliqueEntry {
  std::vector<int> nodes;
  double weight = 0.0;
  std::size_t count_gbs = 0;
  std::size_t count_uniform = 0;
  double freq_gbs = 0.0;
  double freq_uniform = 0.0;
};

struct CliqueReport {
  std::vector<CliqueEntry> cliques; // by weight descending, then nodes
  std::size_t samples_used = 0;
  int min_photons = 0;
  int iterations = 0;
  std::uint64_t seed = 0;

  const CliqueEntry *find(const std::vector<int> &nodes) const {
    for (const auto &e : cliques)
      if (e.nodes == nodes)
        return &e;
    return nullptr;
  }
  double freq_gbs(const std::vector<int> &nodes) const {
    const auto *e = find(nodes);
    return e ? e->freq_gbs : 0.0;
  }
  double freq_uniform(const std::vector<int> &nodes) const {
    const auto *e = find(nodes);
    return e ? e->freq_uniform : 0.0;
  }
  /// Heaviest clique found by either seeding.
  const CliqueEntry *best() const { return cliques.empty() ? nullptr : &cliques.front(); }
};

/// Uniformly random k-subset of [0, n), sorted.
inline std::vector<int> uniform_subset(int n, int k, Rng &rng) {
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(i) +
                   static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(all[static_cast<std::size_t>(i)], all[j]);
  }
  all.resize(static_cast<std::size_t>(k));
  std::sort(all.begin(), all.end());
  return all;
}

/// Shrink + local search on every sample with at least min_photons photons,
/// and on a size-matched uniform baseline processed identically. Sample i
/// (in qualifying order) uses derive_seed(seed, post_process, i) for its
/// search and derive_seed(seed, uniform_baseline, i) for its baseline subset.
inline CliqueReport run_pipeline(const WeightedGraph &g, const std::vector<PhotonPattern> &samples,
                                 int min_photons, int iterations, std::uint64_t seed) {
  if (iterations < 0)
    throw ValidationError("iterations must be non-negative");
  std::vector<std::vector<int>> seeds;
  for (const auto &s : samples) {
    if (static_cast<int>(s.counts.size()) != g.node_count())
      throw ValidationError("sample has " + std::to_string(s.counts.size()) + " modes but the graph has " +
                            std::to_string(g.node_count()) + " nodes");
    if (s.total() >= min_photons)
      seeds.push_back(pattern_to_subgraph(s));
  }
  if (seeds.empty())
    throw ValidationError("no samples with at least " + std::to_string(min_photons) +
                          " photons; the report would be empty");

  const std::size_t q = seeds.size();
  std::vector<Clique> gbs_out(q), uniform_out(q);
  parallel_for(q, [&](std::size_t i) {
    const std::uint64_t search_seed = derive_seed(seed, Stream::post_process, i);
    gbs_out[i] = local_search(g, greedy_shrink(g, seeds[i]), iterations, search_seed);
    Rng rng(derive_seed(seed, Stream::uniform_baseline, i));
    const auto subset = uniform_subset(g.node_count(), static_cast<int>(seeds[i].size()), rng);
    uniform_out[i] = local_search(g, greedy_shrink(g, subset), iterations, search_seed);
  });

  std::map<std::vector<int>, CliqueEntry> table;
  for (std::size_t i = 0; i < q; ++i) {
    auto &a = table[gbs_out[i].nodes];
    a.nodes = gbs_out[i].nodes;
    a.weight = gbs_out[i].weight;
    ++a.count_gbs;
    auto &b = table[uniform_out[i].nodes];
    b.nodes = uniform_out[i].nodes;
    b.weight = uniform_out[i].weight;
    ++b.count_uniform;
  }
  CliqueReport report;
  report.samples_used = q;
  report.min_photons = min_photons;
  report.iterations = iterations;
  report.seed = seed;
  for (auto &[nodes, e] : table) {
    e.freq_gbs = static_cast<double>(e.count_gbs) / static_cast<double>(q);
    e.freq_uniform = static_cast<double>(e.count_uniform) / static_cast<double>(q);
    report.cliques.push_back(std::move(e));
  }
  std::stable_sort(report.cliques.begin(), report.cliques.end(),
                   [](const CliqueEntry &a, const CliqueEntry &b) { return a.weight > b.weight; });
  return report;
}

} // namespace gbs

#endif // GBS_CLIQUES_HPP
