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
 * @file graph.hpp
 * @brief Node-weighted undirected graph shared by the encoder, the clique
 * post-processing and both application front-ends.
 */

#ifndef GBS_GRAPH_HPP
#define GBS_GRAPH_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gbs/errors.hpp"

namespace gbs {

/// Fixed-size bitset over node indices.
class NodeBits {
public:
  NodeBits() = default;
  explicit NodeBits(int size) : size_(size), words_(static_cast<std::size_t>((size + 63) / 64), 0) {}

  int size() const { return size_; }
  bool test(int i) const { return words_[static_cast<std::size_t>(i) / 64] >> (i % 64) & 1U; }
  void set(int i) { words_[static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(int i) { words_[static_cast<std::size_t>(i) / 64] &= ~(std::uint64_t{1} << (i % 64)); }

  int count() const {
    int c = 0;
    for (auto w : words_)
      c += std::popcount(w);
    return c;
  }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }

  NodeBits &operator&=(const NodeBits &o) {
    for (std::size_t k = 0; k < words_.size(); ++k)
      words_[k] &= o.words_[k];
    return *this;
  }
  NodeBits &operator|=(const NodeBits &o) {
    for (std::size_t k = 0; k < words_.size(); ++k)
      words_[k] |= o.words_[k];
    return *this;
  }
  /// this & ~o
  NodeBits &subtract(const NodeBits &o) {
    for (std::size_t k = 0; k < words_.size(); ++k)
      words_[k] &= ~o.words_[k];
    return *this;
  }
  friend NodeBits operator&(NodeBits a, const NodeBits &b) { return a &= b; }
  friend bool operator==(const NodeBits &, const NodeBits &) = default;

  template <typename Fn> void for_each(Fn &&fn) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w != 0) {
        const int bit = std::countr_zero(w);
        fn(static_cast<int>(k * 64) + bit);
        w &= w - 1;
      }
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

  static NodeBits from(int size, const std::vector<int> &nodes) {
    NodeBits b(size);
    for (int v : nodes)
      b.set(v);
    return b;
  }

private:
  int size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;
};

/// Undirected graph with non-negative node weights and optional
/// non-negative edge weights (default 1). No self-loops or parallel edges.
class WeightedGraph {
public:
  WeightedGraph() = default;

  WeightedGraph(int node_count, std::vector<double> weights, std::vector<Edge> edges)
      : n_(node_count), weights_(std::move(weights)), edges_(std::move(edges)) {
    if (n_ < 1)
      throw ValidationError("graph must have at least one node");
    if (weights_.empty())
      weights_.assign(static_cast<std::size_t>(n_), 0.0);
    if (static_cast<int>(weights_.size()) != n_)
      throw ValidationError("graph has " + std::to_string(n_) + " nodes but " +
                            std::to_string(weights_.size()) + " weights");
    for (int i = 0; i < n_; ++i) {
      const double w = weights_[static_cast<std::size_t>(i)];
      if (!std::isfinite(w) || w < 0.0)
        throw ValidationError("node " + std::to_string(i) +
                              " weight must be finite and non-negative");
    }
    adj_.assign(static_cast<std::size_t>(n_), NodeBits(n_));
    for (auto &e : edges_) {
      if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_)
        throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              ") has an endpoint outside [0, " + std::to_string(n_) + ")");
      if (e.u == e.v)
        throw ValidationError("self-loop on node " + std::to_string(e.u));
      if (!std::isfinite(e.weight) || e.weight < 0.0)
        throw ValidationError("edge weight must be finite and non-negative");
      if (e.u > e.v)
        std::swap(e.u, e.v);
      if (adj_[static_cast<std::size_t>(e.u)].test(e.v))
        throw ValidationError("duplicate edge (" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + ")");
      adj_[static_cast<std::size_t>(e.u)].set(e.v);
      adj_[static_cast<std::size_t>(e.v)].set(e.u);
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge &a, const Edge &b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
  }

  int node_count() const { return n_; }
  const std::vector<double> &weights() const { return weights_; }
  double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  const std::vector<Edge> &edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  bool adjacent(int i, int j) const { return adj_[static_cast<std::size_t>(i)].test(j); }
  const NodeBits &neighbors(int i) const { return adj_[static_cast<std::size_t>(i)]; }
  int degree(int i) const { return adj_[static_cast<std::size_t>(i)].count(); }

  bool has_weights() const {
    return std::any_of(weights_.begin(), weights_.end(), [](double w) { return w != 0.0; });
  }

  /// Weighted adjacency matrix A (edge weights, zero diagonal).
  Eigen::MatrixXd adjacency_matrix() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    for (const auto &e : edges_) {
      a(e.u, e.v) = e.weight;
      a(e.v, e.u) = e.weight;
    }
    return a;
  }

  double total_weight(const std::vector<int> &nodes) const {
    double s = 0.0;
    for (int v : nodes)
      s += weight(v);
    return s;
  }

  bool is_clique(const std::vector<int> &nodes) const {
    for (std::size_t a = 0; a < nodes.size(); ++a)
      for (std::size_t b = a + 1; b < nodes.size(); ++b)
        if (!adjacent(nodes[a], nodes[b]))
          return false;
    return true;
  }

private:
  int n_ = 0;
  std::vector<double> weights_;
  std::vector<Edge> edges_;
  std::vector<NodeBits> adj_;
};

} // namespace gbs

#endif // GBS_GRAPH_HPP
