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
 * @file encoding.hpp
 * @brief Graph to GBS program: B = Omega K Omega with K the Laplacian (or
 * adjacency) and Omega_ii = c (1 + alpha w_i), then tanh(r) and U from the
 * Takagi factorization B = U diag(tanh r) U^T.
 */

#ifndef GBS_ENCODING_HPP
#define GBS_ENCODING_HPP

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gbs/errors.hpp"
#include "gbs/graph.hpp"
#include "gbs/numerics.hpp"

namespace gbs {

enum class EncodingMode { laplacian, adjacency };

inline std::string to_string(EncodingMode m) {
  return m == EncodingMode::laplacian ? "laplacian" : "adjacency";
}

inline EncodingMode parse_encoding_mode(const std::string &s) {
  if (s == "laplacian")
    return EncodingMode::laplacian;
  if (s == "adjacency")
    return EncodingMode::adjacency;
  throw ValidationError("unknown encoding mode '" + s + "' (expected laplacian|adjacency)");
}

struct EncodingParams {
  double c = 1.0;
  double alpha = 0.0;
  double target_max_eig = 0.9;
  EncodingMode mode = EncodingMode::laplacian;

  void validate() const {
    if (!(c > 0.0) || !std::isfinite(c))
      throw ValidationError("encoding scale c must be positive and finite");
    if (!std::isfinite(alpha))
      throw ValidationError("encoding alpha must be finite");
    if (!(target_max_eig > 0.0 && target_max_eig < 1.0))
      throw ValidationError("target_max_eig must lie in (0, 1)");
  }
};

/// 0.1 when any node carries a non-zero weight, otherwise 0.
inline double default_alpha(const WeightedGraph &g) { return g.has_weights() ? 0.1 : 0.0; }

/// D - A, with D_ii the (weighted) degree.
inline SymmetricMatrix laplacian(const WeightedGraph &g) {
  const RMatrix a = g.adjacency_matrix();
  RMatrix l = -a;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    l(i, i) = a.row(i).sum();
  return SymmetricMatrix(l);
}

inline SymmetricMatrix adjacency(const WeightedGraph &g) {
  return SymmetricMatrix(g.adjacency_matrix());
}

/// Diagonal of Omega.
inline std::vector<double> omega(const WeightedGraph &g, const EncodingParams &p) {
  std::vector<double> out(static_cast<std::size_t>(g.node_count()));
  for (int i = 0; i < g.node_count(); ++i) {
    const double o = p.c * (1.0 + p.alpha * g.weight(i));
    if (!(o > 0.0)) {
      std::ostringstream os;
      os << "Omega_" << i << " = " << o << " is not positive (alpha too negative)";
      throw ValidationError(os.str());
    }
    out[static_cast<std::size_t>(i)] = o;
  }
  return out;
}

/// B = Omega K Omega. Entries are formed as K_ij * (Omega_i * Omega_j), which
/// is exactly symmetric in floating point.
inline SymmetricMatrix rescale(const WeightedGraph &g, const EncodingParams &p) {
  p.validate();
  const std::vector<double> om = omega(g, p);
  const RMatrix k = p.mode == EncodingMode::laplacian ? laplacian(g).matrix().real()
                                                      : g.adjacency_matrix();
  RMatrix b(k.rows(), k.cols());
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.cols(); ++j)
      b(i, j) = k(i, j) * (om[static_cast<std::size_t>(i)] * om[static_cast<std::size_t>(j)]);
  return SymmetricMatrix(b);
}

/// Largest Takagi value (largest |eigenvalue|) of a real symmetric matrix.
inline double spectral_radius(const SymmetricMatrix &b) {
  if (b.dim() == 0)
    return 0.0;
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(b.matrix().real(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

/// Picks c so the largest Takagi value of rescale(g, {c, alpha}) equals the
/// target. B scales as c^2, so c = sqrt(target / lambda_max(B at c = 1)).
/// Edgeless graphs give B = 0 for every c, and c = 1 is returned.
inline EncodingParams choose_scale(const WeightedGraph &g, double alpha, double target_max_eig,
                                   EncodingMode mode = EncodingMode::laplacian) {
  EncodingParams p{1.0, alpha, target_max_eig, mode};
  p.validate();
  if (g.edge_count() == 0)
    return p;
  const double lmax = spectral_radius(rescale(g, p));
  if (!(lmax > 0.0))
    return p;
  p.c = std::sqrt(target_max_eig / lmax);
  return p;
}

/// Compiled machine configuration: squeezing r, interferometer U and
/// per-mode transmission eta.
class GbsProgram {
public:
  GbsProgram() = default;

  GbsProgram(std::vector<double> squeezing, UnitaryMatrix unitary, std::vector<double> loss)
      : r_(std::move(squeezing)), u_(std::move(unitary)), eta_(std::move(loss)) {
    const auto m = static_cast<std::size_t>(u_.dim());
    if (m == 0)
      throw ValidationError("program needs at least one mode");
    if (r_.size() != m)
      throw ValidationError("squeezing vector has " + std::to_string(r_.size()) +
                            " entries for " + std::to_string(m) + " modes");
    if (eta_.empty())
      eta_.assign(m, 1.0);
    if (eta_.size() != m)
      throw ValidationError("loss vector has " + std::to_string(eta_.size()) + " entries for " +
                            std::to_string(m) + " modes");
    for (double r : r_)
      if (!std::isfinite(r) || r < 0.0)
        throw ValidationError("squeezing parameters must be finite and non-negative");
    for (double e : eta_)
      if (!(e >= 0.0 && e <= 1.0))
        throw ValidationError("transmission must lie in [0, 1]");
  }

  int mode_count() const { return static_cast<int>(u_.dim()); }
  const std::vector<double> &squeezing() const { return r_; }
  const UnitaryMatrix &unitary() const { return u_; }
  const std::vector<double> &loss() const { return eta_; }

  GbsProgram with_loss(std::vector<double> eta) const { return GbsProgram(r_, u_, std::move(eta)); }

  /// U diag(tanh r) U^T.
  CMatrix decode() const {
    std::vector<double> t(r_.size());
    for (std::size_t i = 0; i < r_.size(); ++i)
      t[i] = std::tanh(r_[i]);
    return takagi_reconstruct(u_.matrix(), t);
  }

private:
  std::vector<double> r_;
  UnitaryMatrix u_;
  std::vector<double> eta_;
};

/// r_i = artanh(lambda_i) for the Takagi values of B. Fails if any value
/// is >= 1.
inline GbsProgram encode(const SymmetricMatrix &b, std::vector<double> loss = {}) {
  if (b.dim() == 0)
    throw ValidationError("cannot encode an empty matrix");
  TakagiResult t = takagi(b);
  std::vector<double> r(t.values.size());
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    const double lambda = t.values[i];
    if (!(lambda < 1.0)) {
      std::ostringstream os;
      os << "spectrum not in [0,1): Takagi value " << lambda << " at index " << i;
      throw SpectrumError(os.str(), lambda);
    }
    r[i] = std::atanh(lambda);
  }
  return GbsProgram(std::move(r), std::move(t.unitary), std::move(loss));
}

inline GbsProgram encode(const SymmetricMatrix &b, double uniform_transmission) {
  return encode(b, std::vector<double>(static_cast<std::size_t>(b.dim()), uniform_transmission));
}

/// Graph to program with defaults: alpha from the weights, c from the target.
inline GbsProgram encode_graph(const WeightedGraph &g, const EncodingParams &p,
                               std::vector<double> loss = {}) {
  return encode(rescale(g, p), std::move(loss));
}

} // namespace gbs

#endif // GBS_ENCODING_HPP
