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
 * @file simulator.hpp
 * @brief Exact lossy Gaussian boson sampling at desk scale.
 *
 * Conventions (fixed throughout): quadrature ordering (x_1..x_M, p_1..p_M),
 * vacuum covariance I/2, a = (x + i p)/sqrt(2), zero displacement.
 *
 *   squeezed mode i:   diag(e^{-2 r_i}/2, e^{2 r_i}/2) on (x_i, p_i)
 *   interferometer:    V -> S V S^T,  S = [[Re U, -Im U], [Im U, Re U]]
 *   loss eta_i:        V -> G V G + (I - G^2)/2,  G = diag(sqrt eta)
 *
 * Pattern probabilities use sigma = W V W^dagger in the (a, a^dagger) basis,
 * Q = sigma + I/2, A = X (I - Q^{-1}) and
 *
 *   p(n) = haf(A_n) / (sqrt(det Q) prod_i n_i!),
 *
 * where A_n repeats row/column i and M+i n_i times each. For pure states
 * A = B (+) conj(B) and haf(A_n) = |haf(B_n)|^2.
 */

#ifndef GBS_SIMULATOR_HPP
#define GBS_SIMULATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gbs/encoding.hpp"
#include "gbs/errors.hpp"
#include "gbs/numerics.hpp"
#include "gbs/parallel.hpp"
#include "gbs/rng.hpp"

namespace gbs {

inline constexpr int max_pattern_photons = 16;
inline constexpr std::uint64_t default_enumeration_guard = 1'000'000;

class GaussianState {
public:
  static constexpr double physicality_tolerance = 1e-9;

  GaussianState() = default;

  /// Validates symmetry and the uncertainty relation V + i Omega/2 >= 0.
  explicit GaussianState(RMatrix cov) : cov_(std::move(cov)) {
    if (cov_.rows() != cov_.cols() || cov_.rows() % 2 != 0 || cov_.rows() == 0)
      throw ValidationError("covariance must be a non-empty 2M x 2M matrix");
    for (Eigen::Index i = 0; i < cov_.size(); ++i)
      if (!std::isfinite(cov_.data()[i]))
        throw ValidationError("covariance has non-finite entries");
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw ValidationError("covariance is not symmetric");
    const Eigen::Index m = cov_.rows() / 2;
    CMatrix h = cov_.cast<cplx>();
    const cplx half_i(0.0, 0.5);
    for (Eigen::Index k = 0; k < m; ++k) {
      h(k, m + k) += half_i;
      h(m + k, k) -= half_i;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig < -physicality_tolerance * scale) {
      std::ostringstream os;
      os << "state is unphysical: min eigenvalue of V + i Omega/2 is " << min_eig;
      throw NumericalError(os.str());
    }
  }

  static GaussianState vacuum(int modes) {
    return GaussianState(RMatrix(0.5 * RMatrix::Identity(2 * modes, 2 * modes)));
  }

  int mode_count() const { return static_cast<int>(cov_.rows() / 2); }
  const RMatrix &cov() const { return cov_; }

private:
  RMatrix cov_;
};

/// Squeezers, then the interferometer, then per-mode loss.
inline GaussianState prepare_state(const GbsProgram &p) {
  const int m = p.mode_count();
  RMatrix v = RMatrix::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    const double r = p.squeezing()[static_cast<std::size_t>(i)];
    v(i, i) = 0.5 * std::exp(-2.0 * r);
    v(m + i, m + i) = 0.5 * std::exp(2.0 * r);
  }
  const CMatrix &u = p.unitary().matrix();
  RMatrix s(2 * m, 2 * m);
  s << u.real(), -u.imag(), u.imag(), u.real();
  v = s * v * s.transpose();

  for (int i = 0; i < m; ++i) {
    const double eta = p.loss()[static_cast<std::size_t>(i)];
    if (!(eta >= 0.0 && eta <= 1.0))
      throw ValidationError("transmission must lie in [0, 1]");
  }
  RVector g(2 * m);
  for (int i = 0; i < m; ++i)
    g(i) = g(m + i) = std::sqrt(p.loss()[static_cast<std::size_t>(i)]);
  v = g.asDiagonal() * v * g.asDiagonal();
  for (int k = 0; k < 2 * m; ++k)
    v(k, k) += 0.5 * (1.0 - g(k) * g(k));
  v = 0.5 * (v + v.transpose()).eval();
  return GaussianState(std::move(v));
}

struct PhotonPattern {
  std::vector<int> counts;

  int total() const { return std::accumulate(counts.begin(), counts.end(), 0); }
  bool collision_free() const {
    return std::all_of(counts.begin(), counts.end(), [](int c) { return c <= 1; });
  }
  friend bool operator==(const PhotonPattern &, const PhotonPattern &) = default;
  friend auto operator<=>(const PhotonPattern &, const PhotonPattern &) = default;
};

struct Distribution {
  std::vector<PhotonPattern> patterns;
  std::vector<double> probs;
  double captured_mass = 0.0;
};

/// Per-state data for repeated probability queries.
class ProbabilityKernel {
public:
  static constexpr double purity_tolerance = 1e-10;

  explicit ProbabilityKernel(const GaussianState &s) : m_(s.mode_count()) {
    const Eigen::Index m = m_;
    const double rt = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    CMatrix w(2 * m, 2 * m);
    const CMatrix id = CMatrix::Identity(m, m);
    w << rt * id, rt * i * id, rt * id, -rt * i * id;
    const CMatrix sigma = w * s.cov().cast<cplx>() * w.adjoint();
    const CMatrix q = sigma + 0.5 * CMatrix::Identity(2 * m, 2 * m);
    Eigen::PartialPivLU<CMatrix> lu(q);
    const cplx det = lu.determinant();
    if (!(det.real() > 0.0) || std::abs(det.imag()) > 1e-8 * std::abs(det))
      throw NumericalError("Q matrix determinant is not positive");
    prefactor_ = 1.0 / std::sqrt(det.real());
    const CMatrix qinv = lu.inverse();
    CMatrix a(2 * m, 2 * m);
    // X (I - Q^{-1}) swaps the two row blocks
    const CMatrix t = CMatrix::Identity(2 * m, 2 * m) - qinv;
    a.topRows(m) = t.bottomRows(m);
    a.bottomRows(m) = t.topRows(m);
    a = 0.5 * (a + a.transpose()).eval();
    a_ = std::move(a);
    pure_ = max_abs(a_.block(0, m, m, m)) <= purity_tolerance;
  }

  int mode_count() const { return m_; }
  bool pure() const { return pure_; }
  double vacuum_probability() const { return prefactor_; }
  const CMatrix &a_matrix() const { return a_; }

  double probability(const PhotonPattern &n) const {
    if (static_cast<int>(n.counts.size()) != m_)
      throw ValidationError("pattern has " + std::to_string(n.counts.size()) + " modes, state has " +
                            std::to_string(m_));
    int total = 0;
    double factorials = 1.0;
    for (int c : n.counts) {
      if (c < 0)
        throw ValidationError("photon counts must be non-negative");
      total += c;
      for (int f = 2; f <= c; ++f)
        factorials *= f;
    }
    if (total > max_pattern_photons)
      throw GuardError("pattern too large: " + std::to_string(total) + " photons exceeds the " +
                       std::to_string(max_pattern_photons) + "-photon kernel limit");
    if (pure_ && total % 2 != 0)
      return 0.0;

    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(2 * total));
    for (int k = 0; k < m_; ++k)
      for (int c = 0; c < n.counts[static_cast<std::size_t>(k)]; ++c)
        idx.push_back(k);
    const auto half = static_cast<Eigen::Index>(idx.size());

    cplx h;
    if (pure_) {
      CMatrix b(half, half);
      for (Eigen::Index r = 0; r < half; ++r)
        for (Eigen::Index c = 0; c < half; ++c)
          b(r, c) = a_(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
      h = std::norm(detail::hafnian_power_trace(b));
    } else {
      for (Eigen::Index r = 0; r < half; ++r)
        idx.push_back(idx[static_cast<std::size_t>(r)] + m_);
      const auto full = static_cast<Eigen::Index>(idx.size());
      CMatrix an(full, full);
      for (Eigen::Index r = 0; r < full; ++r)
        for (Eigen::Index c = 0; c < full; ++c)
          an(r, c) = a_(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
      h = detail::hafnian_power_trace(an);
    }
    const double p_re = h.real() * prefactor_ / factorials;
    const double p_im = h.imag() * prefactor_ / factorials;
    if (std::abs(p_im) > 1e-10)
      throw NumericalError("probability has imaginary residue " + std::to_string(p_im));
    if (p_re < 0.0) {
      if (p_re >= -1e-12)
        return 0.0;
      throw NumericalError("negative probability " + std::to_string(p_re));
    }
    return p_re;
  }

private:
  int m_ = 0;
  bool pure_ = false;
  double prefactor_ = 1.0;
  CMatrix a_;
};

inline double pattern_probability(const GaussianState &s, const PhotonPattern &n) {
  return ProbabilityKernel(s).probability(n);
}

// ---------------------------------------------------------------------------
// Enumeration

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n)
    return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

/// Number of patterns with k photons on m modes.
inline std::uint64_t sector_size(int m, int k, bool collision_free) {
  return collision_free ? binomial(m, k) : binomial(m + k - 1, k);
}

/// All k-photon patterns in increasing order of their sorted mode tuples:
/// (0,1), (0,2), ..., (m-2,m-1) when collision-free; (0,0), (0,1), ... otherwise.
inline std::vector<PhotonPattern> sector_patterns(int m, int k, bool collision_free) {
  std::vector<PhotonPattern> out;
  if (k < 0 || (collision_free && k > m))
    return out;
  out.reserve(static_cast<std::size_t>(sector_size(m, k, collision_free)));
  std::vector<int> modes(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j)
    modes[static_cast<std::size_t>(j)] = collision_free ? j : 0;
  while (true) {
    PhotonPattern p{std::vector<int>(static_cast<std::size_t>(m), 0)};
    for (int v : modes)
      ++p.counts[static_cast<std::size_t>(v)];
    out.push_back(std::move(p));
    // advance to the next tuple
    int pos = k - 1;
    while (pos >= 0) {
      const int limit = collision_free ? m - k + pos : m - 1;
      if (modes[static_cast<std::size_t>(pos)] < limit)
        break;
      --pos;
    }
    if (pos < 0)
      break;
    ++modes[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < k; ++j)
      modes[static_cast<std::size_t>(j)] =
          modes[static_cast<std::size_t>(pos)] + (collision_free ? j - pos : 0);
  }
  return out;
}

struct SamplingWindow {
  int min_total = 0;
  int max_total = 0;
  bool collision_free = false;
};

namespace detail {

inline void check_guard(std::uint64_t count, std::uint64_t guard) {
  if (count > guard)
    throw GuardError("enumeration of " + std::to_string(count) + " patterns exceeds the guard of " +
                     std::to_string(guard));
}

inline Distribution enumerate_window(const ProbabilityKernel &kernel, const SamplingWindow &w,
                                     std::uint64_t guard) {
  const int m = kernel.mode_count();
  if (w.min_total < 0 || w.max_total < w.min_total)
    throw ValidationError("invalid photon-number window");
  if (w.max_total > max_pattern_photons)
    throw GuardError("pattern too large: window reaches " + std::to_string(w.max_total) +
                     " photons, kernel limit is " + std::to_string(max_pattern_photons));
  std::uint64_t count = 0;
  for (int k = w.min_total; k <= w.max_total; ++k) {
    if (kernel.pure() && k % 2 != 0)
      continue;
    count += sector_size(m, k, w.collision_free);
    check_guard(count, guard);
  }
  Distribution d;
  d.patterns.reserve(static_cast<std::size_t>(count));
  for (int k = w.min_total; k <= w.max_total; ++k) {
    // odd sectors of a pure zero-mean state are identically zero
    if (kernel.pure() && k % 2 != 0)
      continue;
    auto sector = sector_patterns(m, k, w.collision_free);
    std::move(sector.begin(), sector.end(), std::back_inserter(d.patterns));
  }
  d.probs.assign(d.patterns.size(), 0.0);
  parallel_for(d.patterns.size(), [&](std::size_t i) { d.probs[i] = kernel.probability(d.patterns[i]); });
  d.captured_mass = 0.0;
  for (double p : d.probs)
    d.captured_mass += p;
  return d;
}

} // namespace detail

/// Every k-photon pattern (collision-free subsets if flagged) with its
/// probability, in increasing tuple order.
inline Distribution enumerate_distribution(const GaussianState &s, int total_photons, bool collision_free,
                                           std::uint64_t guard = default_enumeration_guard) {
  if (total_photons < 0)
    throw ValidationError("photon number must be non-negative");
  if (collision_free && total_photons > s.mode_count())
    throw ValidationError("collision-free sector needs k <= mode count");
  detail::check_guard(sector_size(s.mode_count(), total_photons, collision_free), guard);
  const ProbabilityKernel kernel(s);
  Distribution d;
  d.patterns = sector_patterns(s.mode_count(), total_photons, collision_free);
  d.probs.assign(d.patterns.size(), 0.0);
  parallel_for(d.patterns.size(), [&](std::size_t i) { d.probs[i] = kernel.probability(d.patterns[i]); });
  for (double p : d.probs)
    d.captured_mass += p;
  return d;
}

/// Probabilities rescaled to unit total.
inline std::vector<double> normalized(const std::vector<double> &p) {
  double total = 0.0;
  for (double x : p)
    total += x;
  if (!(total > 0.0))
    throw ValidationError("distribution has zero total mass");
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    out[i] = p[i] / total;
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

struct SampleSet {
  std::vector<PhotonPattern> samples;
  double captured_mass = 0.0; // probability of the enumerated window
  Distribution window;        // the enumerated support and its exact probabilities
};

inline constexpr std::size_t sampling_block = 4096;

/// Categorical draws from a fixed table. Block b of the output uses the
/// seed derive_seed(seed, sampler, b), so shards computed by independent
/// workers concatenate to the same sequence.
inline std::vector<std::size_t> categorical_draws(const std::vector<double> &weights, std::size_t n,
                                                  std::uint64_t seed) {
  std::vector<double> cumulative(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    cumulative[i] = acc;
  }
  if (!(acc > 0.0))
    throw NumericalError("cannot sample from a zero-mass distribution");
  std::vector<std::size_t> out(n);
  const std::size_t blocks = (n + sampling_block - 1) / sampling_block;
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng(derive_seed(seed, Stream::sampler, b));
    const std::size_t end = std::min(n, (b + 1) * sampling_block);
    for (std::size_t i = b * sampling_block; i < end; ++i) {
      const double u = rng.uniform() * acc;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      // skip zero-width bins at the top edge
      std::size_t k = static_cast<std::size_t>(it - cumulative.begin());
      if (k >= cumulative.size())
        k = cumulative.size() - 1;
      while (weights[k] <= 0.0 && k > 0)
        --k;
      out[i] = k;
    }
  });
  return out;
}

/// Post-selected sampling: enumerate the window exactly, renormalize within
/// it, and draw.
inline SampleSet sample_window(const GaussianState &s, const SamplingWindow &w, std::size_t n_samples,
                               std::uint64_t seed, std::uint64_t guard = default_enumeration_guard) {
  const ProbabilityKernel kernel(s);
  SampleSet out;
  out.window = detail::enumerate_window(kernel, w, guard);
  out.captured_mass = out.window.captured_mass;
  if (!(out.captured_mass > 0.0))
    throw NumericalError("photon-number window [" + std::to_string(w.min_total) + ", " +
                         std::to_string(w.max_total) + "] has zero probability");
  const auto draws = categorical_draws(out.window.probs, n_samples, seed);
  out.samples.reserve(n_samples);
  for (auto k : draws)
    out.samples.push_back(out.window.patterns[k]);
  return out;
}

/// Samples from the distribution truncated to at most max_total_photons.
/// Throws TruncationError if the truncated mass is below 0.5.
inline SampleSet sample(const GaussianState &s, std::size_t n_samples, int max_total_photons,
                        std::uint64_t seed, std::uint64_t guard = default_enumeration_guard) {
  if (max_total_photons < 0)
    throw ValidationError("photon cutoff must be non-negative");
  const ProbabilityKernel kernel(s);
  SampleSet out;
  out.window = detail::enumerate_window(kernel, {0, max_total_photons, false}, guard);
  out.captured_mass = out.window.captured_mass;
  if (out.captured_mass < 0.5) {
    std::ostringstream os;
    os << "only " << out.captured_mass << " of the probability mass lies at or below "
       << max_total_photons << " photons; raise the cutoff";
    throw TruncationError(os.str(), out.captured_mass);
  }
  const auto draws = categorical_draws(out.window.probs, n_samples, seed);
  out.samples.reserve(n_samples);
  for (auto k : draws)
    out.samples.push_back(out.window.patterns[k]);
  return out;
}

/// Empirical frequencies of the samples over a given support. Samples
/// outside the support are an error.
inline Distribution empirical_distribution(const std::vector<PhotonPattern> &samples,
                                           const std::vector<PhotonPattern> &support) {
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < support.size(); ++i)
    index.emplace(support[i].counts, i);
  Distribution d;
  d.patterns = support;
  d.probs.assign(support.size(), 0.0);
  for (const auto &s : samples) {
    auto it = index.find(s.counts);
    if (it == index.end())
      throw ValidationError("sample lies outside the distribution support");
    d.probs[it->second] += 1.0;
  }
  const double n = static_cast<double>(samples.size());
  for (auto &p : d.probs)
    p /= n;
  d.captured_mass = samples.empty() ? 0.0 : 1.0;
  return d;
}

/// Total variation distance after normalizing both to unit mass on the
/// shared support.
inline double tvd(const Distribution &p, const Distribution &q) {
  if (p.patterns.size() != q.patterns.size() || p.probs.size() != p.patterns.size() ||
      q.probs.size() != q.patterns.size())
    throw ValidationError("distributions have different supports");
  for (std::size_t i = 0; i < p.patterns.size(); ++i)
    if (p.patterns[i] != q.patterns[i])
      throw ValidationError("distributions have different supports");
  const auto a = normalized(p.probs);
  const auto b = normalized(q.probs);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

} // namespace gbs

#endif // GBS_SIMULATOR_HPP
