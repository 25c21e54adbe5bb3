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

// Binding interaction graphs for molecular docking: one node per
// ligand/protein pharmacophore contact, edges between geometrically
// compatible contacts. Cliques are docking poses.

#ifndef GBS_DOCKING_HPP
#define GBS_DOCKING_HPP

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gbs/cliques.hpp"
#include "gbs/errors.hpp"
#include "gbs/graph.hpp"

namespace gbs {

// Pharmacophore kinds. The four standard labels are HA (H-bond acceptor),
// HD (H-bond donor), NC (negative charge) and AR (aromatic); any other
// non-empty label is accepted as a custom kind.
inline bool is_standard_kind(const std::string &k) { return k == "HA" || k == "HD" || k == "NC" || k == "AR"; }
inline bool is_hbond_kind(const std::string &k) { return k == "HA" || k == "HD"; }

struct PharmacophorePoint {
  std::string id;
  std::string kind;
  Eigen::Vector3d position = Eigen::Vector3d::Zero(); // Angstrom
};

using KindPair = std::pair<std::string, std::string>;

/// Unordered pair key (lexicographically sorted).
inline KindPair unordered_pair(std::string a, std::string b) {
  if (b < a)
    std::swap(a, b);
  return {std::move(a), std::move(b)};
}

struct DockingParams {
  double tau = 0.8;           // flexibility constant
  double epsilon_hbond = 0.0; // both kinds H-bond donor/acceptor
  double epsilon_other = 0.3; // any other kind involved
  /// Explicit interaction distances per unordered kind pair. When non-empty
  /// it replaces the two-class rule above and must cover every pair used.
  std::map<KindPair, double> epsilon_table;
  /// Potential weight per (ligand kind, protein kind). When empty every
  /// contact weighs default_weight; otherwise every pair used must appear.
  std::map<KindPair, double> weight_table;
  double default_weight = 1.0;

  void validate() const {
    auto check = [](double v, const std::string &what) {
      if (!std::isfinite(v) || v < 0.0)
        throw ValidationError(what + " must be finite and non-negative");
    };
    check(tau, "tau");
    check(epsilon_hbond, "epsilon_hbond");
    check(epsilon_other, "epsilon_other");
    check(default_weight, "default_weight");
    for (const auto &[k, v] : epsilon_table)
      check(v, "epsilon for (" + k.first + ", " + k.second + ")");
    for (const auto &[k, v] : weight_table)
      check(v, "weight for (" + k.first + ", " + k.second + ")");
  }

  /// Interaction distance for a same-side pair of kinds.
  double epsilon(const std::string &a, const std::string &b) const {
    if (epsilon_table.empty())
      return is_hbond_kind(a) && is_hbond_kind(b) ? epsilon_hbond : epsilon_other;
    const auto it = epsilon_table.find(unordered_pair(a, b));
    if (it == epsilon_table.end())
      throw ConfigError("no epsilon entry for kind pair (" + unordered_pair(a, b).first + ", " +
                        unordered_pair(a, b).second + ")");
    return it->second;
  }

  double weight(const std::string &ligand_kind, const std::string &protein_kind) const {
    if (weight_table.empty())
      return default_weight;
    const auto it = weight_table.find({ligand_kind, protein_kind});
    if (it == weight_table.end())
      throw ConfigError("no weight entry for (ligand " + ligand_kind + ", protein " + protein_kind + ")");
    return it->second;
  }
};

struct Contact {
  int ligand = 0;  // index into the ligand points
  int protein = 0; // index into the protein points
  std::string ligand_id;
  std::string protein_id;
  double weight = 0.0;

  friend bool operator==(const Contact &, const Contact &) = default;
};

struct BindingGraph {
  WeightedGraph graph;
  std::vector<Contact> contacts; // node k <-> contacts[k], k = l * m + p
  int ligand_count = 0;
  int protein_count = 0;
};

namespace detail {

inline void validate_points(const std::vector<PharmacophorePoint> &pts, const std::string &side) {
  std::set<std::string> ids;
  for (const auto &p : pts) {
    if (p.id.empty())
      throw ValidationError(side + " point with empty id");
    if (!ids.insert(p.id).second)
      throw ValidationError("duplicate " + side + " point id '" + p.id + "'");
    if (p.kind.empty())
      throw ValidationError(side + " point '" + p.id + "' has an empty kind");
    if (!p.position.allFinite())
      throw ValidationError(side + " point '" + p.id + "' has non-finite coordinates");
  }
}

} // namespace detail

/// Builds the binding interaction graph. Contacts (l1, P1) and (l2, P2) with
/// l1 != l2 and P1 != P2 are adjacent iff
///   | |P1 - P2| - |l1 - l2| | <= tau + 2 eps,
/// where eps is the larger of the ligand-pair and protein-pair distances.
inline BindingGraph build_big(const std::vector<PharmacophorePoint> &ligand,
                              const std::vector<PharmacophorePoint> &protein, const DockingParams &p) {
  p.validate();
  detail::validate_points(ligand, "ligand");
  detail::validate_points(protein, "protein");
  if (ligand.empty() || protein.empty())
    throw ValidationError("need at least one ligand and one protein point");

  const int n = static_cast<int>(ligand.size());
  const int m = static_cast<int>(protein.size());
  BindingGraph big;
  big.ligand_count = n;
  big.protein_count = m;
  std::vector<double> weights;
  for (int l = 0; l < n; ++l)
    for (int q = 0; q < m; ++q) {
      const auto &a = ligand[static_cast<std::size_t>(l)];
      const auto &b = protein[static_cast<std::size_t>(q)];
      const double w = p.weight(a.kind, b.kind);
      big.contacts.push_back({l, q, a.id, b.id, w});
      weights.push_back(w);
    }

  std::vector<Edge> edges;
  const int nodes = n * m;
  for (int u = 0; u < nodes; ++u)
    for (int v = u + 1; v < nodes; ++v) {
      const auto &cu = big.contacts[static_cast<std::size_t>(u)];
      const auto &cv = big.contacts[static_cast<std::size_t>(v)];
      if (cu.ligand == cv.ligand || cu.protein == cv.protein)
        continue;
      const auto &l1 = ligand[static_cast<std::size_t>(cu.ligand)];
      const auto &l2 = ligand[static_cast<std::size_t>(cv.ligand)];
      const auto &p1 = protein[static_cast<std::size_t>(cu.protein)];
      const auto &p2 = protein[static_cast<std::size_t>(cv.protein)];
      const double eps = std::max(p.epsilon(l1.kind, l2.kind), p.epsilon(p1.kind, p2.kind));
      const double dl = (l1.position - l2.position).norm();
      const double dp = (p1.position - p2.position).norm();
      if (std::abs(dp - dl) <= p.tau + 2.0 * eps)
        edges.push_back({u, v});
    }
  big.graph = WeightedGraph(nodes, std::move(weights), std::move(edges));
  return big;
}

/// Contact assignments of a clique. Throws InternalError if a ligand or
/// protein point is used twice, which build_big must never allow.
inline std::vector<Contact> interpret_pose(const BindingGraph &big, const Clique &c) {
  const Clique checked = make_clique(big.graph, c.nodes);
  std::set<int> ligands, proteins;
  std::vector<Contact> pose;
  for (int v : checked.nodes) {
    const auto &ct = big.contacts[static_cast<std::size_t>(v)];
    if (!ligands.insert(ct.ligand).second || !proteins.insert(ct.protein).second)
      throw InternalError("pose is not injective at contact " + ct.ligand_id + "-" + ct.protein_id);
    pose.push_back(ct);
  }
  return pose;
}

} // namespace gbs

#endif // GBS_DOCKING_HPP
