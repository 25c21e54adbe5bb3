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
 * @file mesh.hpp
 * @brief Clements rectangular MZI mesh: decomposition, composition, the
 * time-bin EOM schedule of a loop-based realization, and loss budgets.
 *
 * Cell convention, used everywhere in this toolkit. A cell on the adjacent
 * modes (m, m+1) applies a phase phi to mode m followed by a symmetric
 * beamsplitter with transmission amplitude cos(theta):
 *
 *     T(theta, phi) = [[ e^{i phi} cos(theta),  i sin(theta) ],
 *                      [ i e^{i phi} sin(theta), cos(theta)  ]]
 *
 * theta = 0 is full transmission (only the phase acts) and theta = pi/2 is a
 * full swap. A mesh realizes U = diag(e^{i out}) * T_last * ... * T_first.
 */

#ifndef GBS_MESH_HPP
#define GBS_MESH_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gbs/errors.hpp"
#include "gbs/numerics.hpp"

namespace gbs {

struct MziSetting {
  int mode = 0; // acts on (mode, mode + 1)
  double theta = 0.0;
  double phi = 0.0;
};

class Mesh {
public:
  Mesh() = default;
  Mesh(int mode_count, std::vector<MziSetting> cells, std::vector<double> output_phases)
      : n_(mode_count), cells_(std::move(cells)), phases_(std::move(output_phases)) {
    validate();
  }

  int mode_count() const { return n_; }
  const std::vector<MziSetting> &cells() const { return cells_; }
  const std::vector<double> &output_phases() const { return phases_; }

  /// True when the cell count is N(N-1)/2, as for a full Clements mesh.
  bool is_complete() const {
    return cells_.size() == static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ - 1) / 2;
  }

private:
  void validate() const;

  int n_ = 0;
  std::vector<MziSetting> cells_;
  std::vector<double> phases_;
};

/// ASAP layer index of every cell: one past the latest earlier cell that
/// touches either of its modes.
inline std::vector<int> mesh_layers(int mode_count, const std::vector<MziSetting> &cells) {
  std::vector<int> next_free(static_cast<std::size_t>(std::max(mode_count, 0)), 0);
  std::vector<int> layer(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto m = static_cast<std::size_t>(cells[k].mode);
    const int l = std::max(next_free[m], next_free[m + 1]);
    layer[k] = l;
    next_free[m] = next_free[m + 1] = l + 1;
  }
  return layer;
}

inline int mesh_depth(const Mesh &m) {
  const auto layers = mesh_layers(m.mode_count(), m.cells());
  return layers.empty() ? 0 : *std::max_element(layers.begin(), layers.end()) + 1;
}

inline void Mesh::validate() const {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (n_ < 1)
    throw ValidationError("mesh needs at least one mode");
  if (static_cast<int>(phases_.size()) != n_)
    throw ValidationError("mesh needs one output phase per mode");
  for (double p : phases_)
    if (!(p >= 0.0 && p < two_pi))
      throw ValidationError("output phase outside [0, 2pi)");
  for (const auto &c : cells_) {
    if (c.mode < 0 || c.mode + 1 >= n_)
      throw ValidationError("cell mode pair (" + std::to_string(c.mode) + "," +
                            std::to_string(c.mode + 1) + ") outside the mesh");
    if (!(c.theta >= 0.0 && c.theta <= std::numbers::pi / 2))
      throw ValidationError("cell theta outside [0, pi/2]");
    if (!(c.phi >= 0.0 && c.phi < two_pi))
      throw ValidationError("cell phi outside [0, 2pi)");
  }
  const auto layers = mesh_layers(n_, cells_);
  if (!std::is_sorted(layers.begin(), layers.end()))
    throw ValidationError("mesh cells are not in layer order");
}

/// The 2x2 cell matrix T(theta, phi).
inline Eigen::Matrix2cd cell_matrix(double theta, double phi) {
  const cplx e = std::polar(1.0, phi);
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd t;
  t << e * std::cos(theta), i * std::sin(theta), i * e * std::sin(theta), std::cos(theta);
  return t;
}

namespace detail {

inline double wrap_phase(double p) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  p = std::fmod(p, two_pi);
  if (p < 0.0)
    p += two_pi;
  if (p >= two_pi)
    p = 0.0;
  return p;
}

inline void apply_left(CMatrix &w, int m, const Eigen::Matrix2cd &t) {
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    const cplx a = w(m, c), b = w(m + 1, c);
    w(m, c) = t(0, 0) * a + t(0, 1) * b;
    w(m + 1, c) = t(1, 0) * a + t(1, 1) * b;
  }
}

inline void apply_right(CMatrix &w, int m, const Eigen::Matrix2cd &t) {
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    const cplx a = w(r, m), b = w(r, m + 1);
    w(r, m) = a * t(0, 0) + b * t(1, 0);
    w(r, m + 1) = a * t(0, 1) + b * t(1, 1);
  }
}

inline double safe_arg(cplx z) { return z == cplx(0.0) ? 0.0 : std::arg(z); }

} // namespace detail

/// Product of the cells and output phases.
inline UnitaryMatrix mesh_compose(const Mesh &mesh) {
  const int n = mesh.mode_count();
  CMatrix u = CMatrix::Identity(n, n);
  for (const auto &c : mesh.cells())
    detail::apply_left(u, c.mode, cell_matrix(c.theta, c.phi));
  for (int k = 0; k < n; ++k)
    u.row(k) *= std::polar(1.0, mesh.output_phases()[static_cast<std::size_t>(k)]);
  return UnitaryMatrix(std::move(u));
}

/// Clements decomposition. Alternating anti-diagonals of U are nulled from
/// the right (even passes) and from the left (odd passes); the left cells
/// are then commuted through the residual diagonal, which changes only
/// their phi and the diagonal. Cells come out in layer order.
inline Mesh clements_decompose(const UnitaryMatrix &u) {
  const int n = static_cast<int>(u.dim());
  if (n < 1)
    throw ValidationError("cannot decompose an empty unitary");
  CMatrix w = u.matrix();
  constexpr double half_pi = std::numbers::pi / 2;
  std::vector<MziSetting> right, left;

  for (int i = 0; i + 1 < n; ++i) {
    if (i % 2 == 0) {
      for (int j = 0; j <= i; ++j) {
        const int m = i - j;
        const int r = n - 1 - j;
        const cplx x = w(r, m), y = w(r, m + 1);
        // (x, y) T^dagger has first entry x e^{-i phi} cos - i y sin
        const double theta = std::atan2(std::abs(x), std::abs(y));
        const double phi = detail::wrap_phase(detail::safe_arg(x) - detail::safe_arg(y) - half_pi);
        detail::apply_right(w, m, cell_matrix(theta, phi).adjoint());
        right.push_back({m, theta, phi});
      }
    } else {
      for (int j = 0; j <= i; ++j) {
        const int m = n - 2 - i + j;
        const int c = j;
        const cplx x = w(m, c), y = w(m + 1, c);
        // second entry of T (x; y) is i e^{i phi} sin x + cos y
        const double theta = std::atan2(std::abs(y), std::abs(x));
        const double phi = detail::wrap_phase(detail::safe_arg(y) - detail::safe_arg(x) + half_pi);
        detail::apply_left(w, m, cell_matrix(theta, phi));
        left.push_back({m, theta, phi});
      }
    }
  }

  // w = L U R^dagger is diagonal. Push each L^dagger through it:
  // T(theta, phi)^dagger diag(d1, d2) = diag(-e^{-i phi} d2, d2) T(theta, arg(-d1/d2)).
  std::vector<cplx> d(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    d[static_cast<std::size_t>(k)] = w(k, k);
  std::vector<MziSetting> pushed(left.size());
  for (std::size_t k = left.size(); k-- > 0;) {
    const auto &c = left[k];
    const auto a = static_cast<std::size_t>(c.mode);
    const cplx d1 = d[a], d2 = d[a + 1];
    pushed[k] = {c.mode, c.theta, detail::wrap_phase(detail::safe_arg(-d1 / d2))};
    d[a] = -std::polar(1.0, -c.phi) * d2;
  }

  // application order: right cells first, then the pushed left cells from
  // the one nulled last to the one nulled first
  std::vector<MziSetting> cells = right;
  for (std::size_t k = pushed.size(); k-- > 0;)
    cells.push_back(pushed[k]);

  const auto layers = mesh_layers(n, cells);
  std::vector<std::size_t> order(cells.size());
  for (std::size_t k = 0; k < order.size(); ++k)
    order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return layers[a] != layers[b] ? layers[a] < layers[b] : cells[a].mode < cells[b].mode;
  });
  std::vector<MziSetting> sorted;
  sorted.reserve(cells.size());
  for (auto k : order)
    sorted.push_back(cells[k]);

  std::vector<double> phases(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    phases[static_cast<std::size_t>(k)] = detail::wrap_phase(detail::safe_arg(d[static_cast<std::size_t>(k)]));
  return Mesh(n, std::move(sorted), std::move(phases));
}

inline Mesh clements_decompose(const CMatrix &u) { return clements_decompose(UnitaryMatrix(u)); }

// ---------------------------------------------------------------------------
// Time-bin schedule

enum class Device { EOMa, EOMb, EOM1, EOM2, output_phase };

inline std::string to_string(Device d) {
  switch (d) {
  case Device::EOMa:
    return "EOMa";
  case Device::EOMb:
    return "EOMb";
  case Device::EOM1:
    return "EOM1";
  case Device::EOM2:
    return "EOM2";
  case Device::output_phase:
    return "output_phase";
  }
  return "unknown";
}

struct ScheduleEvent {
  double t_ns = 0.0;
  Device device = Device::EOMa;
  double value = 0.0;
};

struct ScheduleParams {
  double bin_spacing_ns = 25.0;
  double fibre_length_m = 180.0;
  double group_index = 1.5;
};

struct TimeBinSchedule {
  std::vector<ScheduleEvent> events;
  double bin_spacing_ns = 25.0;
  int loop_period_bins = 0;
  int traversals = 0;
};

inline constexpr double speed_of_light_m_per_ns = 0.299792458;

/// Fibre loop latency rounded to whole bins.
inline int loop_latency_bins(const ScheduleParams &p) {
  const double ns = p.fibre_length_m * p.group_index / speed_of_light_m_per_ns;
  return static_cast<int>(std::lround(ns / p.bin_spacing_ns));
}

/// Logical EOM timeline for a loop-based mesh. Mode k is time bin k. Layer
/// l of the mesh is applied on loop traversal l, which starts at
/// l * period * spacing, with period = max(N, fibre latency in bins). In a
/// traversal EOMa switches the train in (value 1) at the first bin and EOMb
/// switches it out (value 0) after the last; a cell on (m, m+1) fires EOM2
/// with phi when bin m passes and EOM1 with theta when bin m+1 co-arrives
/// with the delayed bin m. Output phases are terminal events, one per mode,
/// on the traversal after the last layer.
inline TimeBinSchedule compile_timebin_schedule(const Mesh &mesh, const ScheduleParams &p = {}) {
  if (!(p.bin_spacing_ns > 0.0) || !(p.fibre_length_m >= 0.0) || !(p.group_index > 0.0))
    throw ValidationError("schedule parameters must be positive");
  const int n = mesh.mode_count();
  TimeBinSchedule s;
  s.bin_spacing_ns = p.bin_spacing_ns;
  s.loop_period_bins = std::max(n, loop_latency_bins(p));
  const auto layers = mesh_layers(n, mesh.cells());
  const int depth = layers.empty() ? 0 : layers.back() + 1;
  s.traversals = depth;

  auto bin_time = [&](long long bin) { return static_cast<double>(bin) * p.bin_spacing_ns; };
  auto traversal_start = [&](int l) { return static_cast<long long>(l) * s.loop_period_bins; };

  for (int l = 0; l < depth; ++l) {
    s.events.push_back({bin_time(traversal_start(l)), Device::EOMa, 1.0});
    s.events.push_back({bin_time(traversal_start(l) + n), Device::EOMb, 0.0});
  }
  for (std::size_t k = 0; k < mesh.cells().size(); ++k) {
    const auto &c = mesh.cells()[k];
    const long long start = traversal_start(layers[k]);
    s.events.push_back({bin_time(start + c.mode), Device::EOM2, c.phi});
    s.events.push_back({bin_time(start + c.mode + 1), Device::EOM1, c.theta});
  }
  for (int k = 0; k < n; ++k)
    s.events.push_back({bin_time(traversal_start(depth) + k), Device::output_phase,
                        mesh.output_phases()[static_cast<std::size_t>(k)]});

  std::stable_sort(s.events.begin(), s.events.end(), [](const auto &a, const auto &b) {
    return a.t_ns != b.t_ns ? a.t_ns < b.t_ns : a.device < b.device;
  });
  return s;
}

// ---------------------------------------------------------------------------
// Loss budget

struct LossStage {
  std::string label;
  double transmission = 1.0;
};

struct LossModel {
  std::vector<LossStage> stages;
  double per_loop_transmission = 1.0;

  void validate() const {
    if (!(per_loop_transmission >= 0.0 && per_loop_transmission <= 1.0))
      throw ValidationError("per-loop transmission must lie in [0, 1]");
    for (const auto &s : stages)
      if (!(s.transmission >= 0.0 && s.transmission <= 1.0))
        throw ValidationError("stage '" + s.label + "' transmission must lie in [0, 1]");
  }
};

/// per_loop^loops times every stage transmission.
inline double loss_budget(const LossModel &model, int loops) {
  model.validate();
  if (loops < 0)
    throw ValidationError("loop count must be non-negative");
  double t = std::pow(model.per_loop_transmission, loops);
  for (const auto &s : model.stages)
    t *= s.transmission;
  return t;
}

/// Stage list of the projected low-loss 60-mode configuration: 61 loops at
/// 0.90 plus source coupling, filter, QPU-to-fibre coupling, demultiplexer
/// and detector efficiency.
inline LossModel projected_60_mode_model() {
  return LossModel{{{"ppKTP to fibre coupling", 0.9},
                    {"filter after ppKTP", 0.944},
                    {"QPU to fibre coupling", 0.93},
                    {"demultiplexer", 0.973},
                    {"SNSPD detection", 0.95}},
                   0.90};
}

inline constexpr int projected_60_mode_loops = 61;

/// Per-loop throughput of the built machine.
inline constexpr double measured_per_loop_transmission = 0.82;

/// Uniform per-mode transmission of a time-bin loop machine: each of the N
/// modes traverses the loop once per mesh layer, N times in total.
inline std::vector<double> hardware_transmission(int mode_count,
                                                 double per_loop = measured_per_loop_transmission) {
  return std::vector<double>(static_cast<std::size_t>(mode_count), std::pow(per_loop, mode_count));
}

} // namespace gbs

#endif // GBS_MESH_HPP
