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
 * @file numerics.hpp
 * @brief Dense kernels shared by the toolkit: symmetric and unitary matrix
 * types, the Takagi factorization, the hafnian and Haar-random unitaries.
 */

#ifndef GBS_NUMERICS_HPP
#define GBS_NUMERICS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gbs/errors.hpp"
#include "gbs/rng.hpp"

namespace gbs {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline double max_abs(const CMatrix &m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const CMatrix &a, const CMatrix &b) {
  return max_abs(a - b);
}

inline bool all_finite(const CMatrix &m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const cplx z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      return false;
  }
  return true;
}

/// Max-entry deviation of U·U† from the identity.
inline double unitarity_deviation(const CMatrix &u) {
  if (u.rows() != u.cols())
    return std::numeric_limits<double>::infinity();
  return max_abs(u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols()));
}

/// Complex symmetric matrix. Symmetry is exact in storage: construction
/// rejects any entry with m(i,j) != m(j,i).
class SymmetricMatrix {
public:
  SymmetricMatrix() = default;

  explicit SymmetricMatrix(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw ValidationError("symmetric matrix must be square, got " +
                            std::to_string(m_.rows()) + "x" +
                            std::to_string(m_.cols()));
    if (!all_finite(m_))
      throw ValidationError("symmetric matrix has non-finite entries");
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
      for (Eigen::Index j = i + 1; j < m_.cols(); ++j)
        if (m_(i, j) != m_(j, i)) {
          std::ostringstream os;
          os << "matrix is not symmetric at (" << i << "," << j << ")";
          throw ValidationError(os.str());
        }
  }

  explicit SymmetricMatrix(const RMatrix &m)
      : SymmetricMatrix(CMatrix(m.cast<cplx>())) {}

  /// Averages m with its transpose after checking the asymmetry is below tol.
  static SymmetricMatrix symmetrized(const CMatrix &m, double tol = 1e-9) {
    if (m.rows() != m.cols())
      throw ValidationError("symmetric matrix must be square");
    const double asym = max_abs(m - m.transpose());
    if (!(asym <= tol * std::max(1.0, max_abs(m))))
      throw ValidationError("matrix asymmetry " + std::to_string(asym) +
                            " exceeds tolerance");
    CMatrix s = 0.5 * (m + m.transpose());
    // exact mirror; the average above can differ in the last bit
    for (Eigen::Index i = 0; i < s.rows(); ++i)
      for (Eigen::Index j = i + 1; j < s.cols(); ++j)
        s(j, i) = s(i, j);
    return SymmetricMatrix(std::move(s));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix &matrix() const { return m_; }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  bool is_real() const {
    for (Eigen::Index i = 0; i < m_.size(); ++i)
      if (m_.data()[i].imag() != 0.0)
        return false;
    return true;
  }

  /// Submatrix on an index list; indices may repeat.
  SymmetricMatrix select(const std::vector<int> &idx) const {
    const auto k = static_cast<Eigen::Index>(idx.size());
    CMatrix s(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b)
        s(a, b) = m_(idx[a], idx[b]);
    return SymmetricMatrix(std::move(s));
  }

private:
  CMatrix m_;
};

/// Unitary matrix, U·U† = I to within 1e-10 max-entry deviation.
class UnitaryMatrix {
public:
  static constexpr double tolerance = 1e-10;

  UnitaryMatrix() = default;

  explicit UnitaryMatrix(CMatrix u) : u_(std::move(u)) {
    if (u_.rows() != u_.cols())
      throw ValidationError("unitary must be square");
    if (!all_finite(u_))
      throw ValidationError("unitary has non-finite entries");
    const double dev = unitarity_deviation(u_);
    if (!(dev <= tolerance)) {
      std::ostringstream os;
      os << "matrix is not unitary: max |U U^dagger - I| = " << dev;
      throw ValidationError(os.str());
    }
  }

  static UnitaryMatrix identity(Eigen::Index n) {
    return UnitaryMatrix(CMatrix::Identity(n, n));
  }

  Eigen::Index dim() const { return u_.rows(); }
  const CMatrix &matrix() const { return u_; }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return u_(i, j); }

private:
  CMatrix u_;
};

struct TakagiResult {
  UnitaryMatrix unitary;
  std::vector<double> values; // descending, >= 0
};

namespace detail {

constexpr double takagi_zero = 1e-12;

/// Modified Gram-Schmidt on the given columns of v (real vectors).
inline void reorthonormalize(RMatrix &v, const std::vector<Eigen::Index> &cols) {
  for (std::size_t a = 0; a < cols.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b)
      v.col(cols[a]) -= v.col(cols[b]).dot(v.col(cols[a])) * v.col(cols[b]);
    v.col(cols[a]).normalize();
  }
}

/// Fills columns [filled, n) of u with an orthonormal basis of the
/// orthogonal complement of columns [0, filled).
inline void complete_unitary(CMatrix &u, Eigen::Index filled) {
  const Eigen::Index n = u.rows();
  Eigen::Index next = filled;
  for (Eigen::Index e = 0; e < n && next < n; ++e) {
    CVector cand = CVector::Unit(n, e);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index c = 0; c < next; ++c)
        cand -= u.col(c).dot(cand) * u.col(c);
    const double norm = cand.norm();
    if (norm > 1e-6) {
      u.col(next) = cand / norm;
      ++next;
    }
  }
}

struct TakagiColumn {
  double value;
  CVector vec;
  Eigen::Index source;
};

inline TakagiResult assemble_takagi(std::vector<TakagiColumn> cols,
                                    Eigen::Index n) {
  std::stable_sort(cols.begin(), cols.end(),
                   [](const TakagiColumn &a, const TakagiColumn &b) {
                     return a.value > b.value;
                   });
  CMatrix u(n, n);
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  Eigen::Index filled = 0;
  for (const auto &c : cols) {
    if (filled == n)
      break;
    CVector col = c.vec;
    // two MGS passes; restores complex orthogonality of nearly-null columns
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index prev = 0; prev < filled; ++prev)
        col -= u.col(prev).dot(col) * u.col(prev);
    u.col(filled) = col.normalized();
    values[static_cast<std::size_t>(filled)] = c.value < takagi_zero ? 0.0 : c.value;
    ++filled;
  }
  complete_unitary(u, filled);
  return TakagiResult{UnitaryMatrix(std::move(u)), std::move(values)};
}

inline TakagiResult takagi_real(const RMatrix &b) {
  const Eigen::Index n = b.rows();
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(b);
  if (eig.info() != Eigen::Success)
    throw NumericalError("eigendecomposition failed in takagi");
  RMatrix v = eig.eigenvectors();
  const RVector d = eig.eigenvalues();

  // re-orthonormalize clusters of (numerically) equal eigenvalues
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index end = start + 1;
    while (end < n && d(end) - d(end - 1) <= 1e-10 * scale)
      ++end;
    if (end - start > 1) {
      std::vector<Eigen::Index> cluster(static_cast<std::size_t>(end - start));
      std::iota(cluster.begin(), cluster.end(), start);
      reorthonormalize(v, cluster);
    }
    start = end;
  }

  // negative eigenvalues: multiplying the column by i flips the sign of
  // its rank-one term u u^T
  std::vector<TakagiColumn> cols;
  cols.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    CVector col = v.col(k).cast<cplx>();
    if (d(k) < 0.0)
      col *= cplx(0.0, 1.0);
    cols.push_back({std::abs(d(k)), std::move(col), k});
  }
  return assemble_takagi(std::move(cols), n);
}

/// Complex symmetric B = X + iY. The real symmetric embedding
/// [[X, Y], [Y, -X]] has eigenpairs (sigma, (a; b)) with B conj(u) = sigma u
/// for u = a + ib, and spectrum symmetric about zero.
inline TakagiResult takagi_complex(const CMatrix &b) {
  const Eigen::Index n = b.rows();
  const RMatrix x = b.real();
  const RMatrix y = b.imag();
  RMatrix h(2 * n, 2 * n);
  h << x, y, y, -x;
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(h);
  if (eig.info() != Eigen::Success)
    throw NumericalError("eigendecomposition failed in takagi");
  const RVector d = eig.eigenvalues();
  const RMatrix &v = eig.eigenvectors();
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());

  std::vector<TakagiColumn> cols;
  // top n eigenvalues, largest first; zero-valued directions are left to
  // the unitary completion since (a; b) pairs from the kernel need not be
  // orthogonal as complex vectors
  for (Eigen::Index k = 2 * n - 1; k >= n; --k) {
    if (d(k) <= 1e-13 * scale)
      break;
    CVector col(n);
    for (Eigen::Index i = 0; i < n; ++i)
      col(i) = cplx(v(i, k), v(n + i, k));
    cols.push_back({d(k), std::move(col), 2 * n - 1 - k});
  }
  return assemble_takagi(std::move(cols), n);
}

} // namespace detail

/// Autonne-Takagi factorization B = U diag(lambda) U^T with U unitary and
/// lambda descending, non-negative. Values below 1e-12 are clamped to 0.
inline TakagiResult takagi(const SymmetricMatrix &b) {
  if (b.dim() == 0)
    return TakagiResult{UnitaryMatrix(CMatrix(0, 0)), {}};
  if (b.is_real())
    return detail::takagi_real(b.matrix().real());
  return detail::takagi_complex(b.matrix());
}

/// U diag(lambda) U^T.
inline CMatrix takagi_reconstruct(const CMatrix &u, const std::vector<double> &lambda) {
  RVector l(static_cast<Eigen::Index>(lambda.size()));
  for (std::size_t i = 0; i < lambda.size(); ++i)
    l(static_cast<Eigen::Index>(i)) = lambda[i];
  return u * l.cast<cplx>().asDiagonal() * u.transpose();
}

namespace detail {

/// Coefficient of t^m in exp(sum_{p=1..m} c_p t^p), via n h_n = sum_k k c_k h_{n-k}.
inline cplx exp_series_coefficient(const std::vector<cplx> &c, int m) {
  std::vector<cplx> h(static_cast<std::size_t>(m) + 1, cplx(0.0));
  h[0] = 1.0;
  for (int n = 1; n <= m; ++n) {
    cplx acc = 0.0;
    for (int k = 1; k <= n; ++k)
      acc += static_cast<double>(k) * c[static_cast<std::size_t>(k)] *
             h[static_cast<std::size_t>(n - k)];
    h[static_cast<std::size_t>(n)] = acc / static_cast<double>(n);
  }
  return h[static_cast<std::size_t>(m)];
}

/// Power-trace hafnian on an unchecked matrix: inclusion-exclusion over
/// subsets Z of the index pairs (2j, 2j+1),
///   haf(A) = sum_Z (-1)^{m-|Z|} [t^m] exp(sum_p tr((X A_Z)^p) t^p / (2p)),
/// where X swaps the two rows of every pair. O(2^{n/2} n^4) time.
inline cplx hafnian_power_trace(const CMatrix &a) {
  const auto n = static_cast<int>(a.rows());
  if (n == 0)
    return 1.0;
  if (n % 2 != 0)
    return 0.0;
  const int m = n / 2;
  const std::uint64_t subsets = std::uint64_t{1} << m;

  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(n));
  std::vector<cplx> coeff(static_cast<std::size_t>(m) + 1);
  CMatrix xa, power, next;
  cplx total = 0.0;
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    idx.clear();
    for (int j = 0; j < m; ++j)
      if (mask >> j & 1U) {
        idx.push_back(2 * j);
        idx.push_back(2 * j + 1);
      }
    const auto k = static_cast<Eigen::Index>(idx.size());
    xa.resize(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < k; ++c)
        xa(r, c) = a(idx[static_cast<std::size_t>(r ^ 1)], idx[static_cast<std::size_t>(c)]);
    power = xa;
    coeff[1] = power.trace() / 2.0;
    for (int p = 2; p <= m; ++p) {
      next.noalias() = power * xa;
      power.swap(next);
      coeff[static_cast<std::size_t>(p)] = power.trace() / (2.0 * p);
    }
    const int popcount = static_cast<int>(k / 2);
    const cplx term = exp_series_coefficient(coeff, m);
    total += ((m - popcount) % 2 == 0) ? term : -term;
  }
  return total;
}

} // namespace detail

/// Sum over perfect matchings of prod M(i, j). Odd dimension gives 0 and the
/// empty matrix gives 1. Exact up to rounding for dim <= 16.
inline cplx hafnian(const SymmetricMatrix &m) {
  return detail::hafnian_power_trace(m.matrix());
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// diag(R) moved into Q. Deterministic per (dim, seed).
inline UnitaryMatrix random_unitary(Eigen::Index dim, std::uint64_t seed) {
  if (dim <= 0)
    throw ValidationError("random_unitary requires dim >= 1");
  Rng rng(seed);
  CMatrix z(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix &r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0) ? d / mag : cplx(1.0);
  }
  return UnitaryMatrix(std::move(q));
}

} // namespace gbs

#endif // GBS_NUMERICS_HPP
