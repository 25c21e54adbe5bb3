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

// File formats shared by the command-line tool and tests: JSON documents for
// graphs, programs, pharmacophores and reports, JSON lines for samples and
// schedules, CSV for distributions and plot data. Complex numbers are
// [re, im] pairs. Parse errors name the offending field.

#ifndef GBS_IO_HPP
#define GBS_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp> // vendored nlohmann::json

#include "gbs/cliques.hpp"
#include "gbs/docking.hpp"
#include "gbs/encoding.hpp"
#include "gbs/errors.hpp"
#include "gbs/graph.hpp"
#include "gbs/mesh.hpp"
#include "gbs/rna.hpp"
#include "gbs/simulator.hpp"

namespace gbs::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Files

inline std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes via a temporary sibling and a rename, so readers never see a
/// partially written file.
inline void write_text_atomic(const std::filesystem::path &path, const std::string &text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << text;
    out.flush();
    if (!out)
      throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

inline json parse_json(const std::string &text, const std::string &what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw ValidationError(what + ": malformed JSON (" + std::string(e.what()) + ")");
  }
}

// ---------------------------------------------------------------------------
// Field access with diagnostics

namespace detail {

inline const json &field(const json &obj, const std::string &key, const std::string &ctx) {
  if (!obj.is_object())
    throw ValidationError(ctx + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end())
    throw ValidationError(ctx + "." + key + ": missing");
  return *it;
}

inline double number(const json &v, const std::string &ctx) {
  if (!v.is_number())
    throw ValidationError(ctx + ": expected a number");
  return v.get<double>();
}

inline long long integer(const json &v, const std::string &ctx) {
  if (!v.is_number_integer())
    throw ValidationError(ctx + ": expected an integer");
  return v.get<long long>();
}

inline std::string string(const json &v, const std::string &ctx) {
  if (!v.is_string())
    throw ValidationError(ctx + ": expected a string");
  return v.get<std::string>();
}

inline const json &array(const json &v, const std::string &ctx) {
  if (!v.is_array())
    throw ValidationError(ctx + ": expected an array");
  return v;
}

inline std::vector<double> numbers(const json &v, const std::string &ctx) {
  std::vector<double> out;
  const auto &a = array(v, ctx);
  for (std::size_t i = 0; i < a.size(); ++i)
    out.push_back(number(a[i], ctx + "[" + std::to_string(i) + "]"));
  return out;
}

inline void only_keys(const json &obj, const std::vector<std::string> &allowed, const std::string &ctx) {
  for (const auto &[k, v] : obj.items())
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError(ctx + "." + k + ": unknown key");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Graph: {"nodes":[{"id":0,"weight":w}...], "edges":[[i,j]...]}

inline json graph_to_json(const WeightedGraph &g) {
  json nodes = json::array();
  for (int i = 0; i < g.node_count(); ++i)
    nodes.push_back({{"id", i}, {"weight", g.weight(i)}});
  json edges = json::array();
  for (const auto &e : g.edges())
    edges.push_back({e.u, e.v});
  return {{"nodes", nodes}, {"edges", edges}};
}

inline WeightedGraph graph_from_json(const json &j) {
  const auto &nodes = detail::array(detail::field(j, "nodes", "graph"), "graph.nodes");
  std::vector<double> weights(nodes.size(), 0.0);
  std::vector<bool> seen(nodes.size(), false);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const std::string ctx = "graph.nodes[" + std::to_string(k) + "]";
    const long long id = detail::integer(detail::field(nodes[k], "id", ctx), ctx + ".id");
    if (id < 0 || id >= static_cast<long long>(nodes.size()) || seen[static_cast<std::size_t>(id)])
      throw ValidationError(ctx + ".id: ids must be unique and dense from 0");
    seen[static_cast<std::size_t>(id)] = true;
    if (nodes[k].contains("weight"))
      weights[static_cast<std::size_t>(id)] = detail::number(nodes[k]["weight"], ctx + ".weight");
  }
  std::vector<Edge> edges;
  if (j.contains("edges")) {
    const auto &arr = detail::array(j["edges"], "graph.edges");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string ctx = "graph.edges[" + std::to_string(k) + "]";
      const auto &e = detail::array(arr[k], ctx);
      if (e.size() != 2)
        throw ValidationError(ctx + ": expected [i, j]");
      edges.push_back({static_cast<int>(detail::integer(e[0], ctx + "[0]")),
                       static_cast<int>(detail::integer(e[1], ctx + "[1]"))});
    }
  }
  return WeightedGraph(static_cast<int>(nodes.size()), std::move(weights), std::move(edges));
}

// ---------------------------------------------------------------------------
// Program: {"r":[...], "U":[[[re,im],...],...], "loss":[...]}

inline json program_to_json(const GbsProgram &p) {
  json rows = json::array();
  const auto &u = p.unitary().matrix();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < u.cols(); ++k)
      row.push_back({u(i, k).real(), u(i, k).imag()});
    rows.push_back(row);
  }
  return {{"r", p.squeezing()}, {"U", rows}, {"loss", p.loss()}};
}

inline GbsProgram program_from_json(const json &j) {
  const auto r = detail::numbers(detail::field(j, "r", "program"), "program.r");
  const auto &rows = detail::array(detail::field(j, "U", "program"), "program.U");
  const auto m = static_cast<Eigen::Index>(rows.size());
  CMatrix u(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const std::string rctx = "program.U[" + std::to_string(i) + "]";
    const auto &row = detail::array(rows[static_cast<std::size_t>(i)], rctx);
    if (static_cast<Eigen::Index>(row.size()) != m)
      throw ValidationError(rctx + ": expected " + std::to_string(m) + " entries");
    for (Eigen::Index k = 0; k < m; ++k) {
      const std::string ctx = rctx + "[" + std::to_string(k) + "]";
      const auto z = detail::numbers(row[static_cast<std::size_t>(k)], ctx);
      if (z.size() != 2)
        throw ValidationError(ctx + ": expected [re, im]");
      u(i, k) = cplx(z[0], z[1]);
    }
  }
  std::vector<double> loss;
  if (j.contains("loss"))
    loss = detail::numbers(j["loss"], "program.loss");
  return GbsProgram(r, UnitaryMatrix(u), loss);
}

// ---------------------------------------------------------------------------
// Samples (JSON lines) and distributions (CSV)

inline std::string samples_to_jsonl(const std::vector<PhotonPattern> &samples) {
  std::string out;
  for (const auto &s : samples)
    out += json{{"counts", s.counts}}.dump() + "\n";
  return out;
}

inline std::vector<PhotonPattern> samples_from_jsonl(const std::string &text) {
  std::vector<PhotonPattern> out;
  std::istringstream in(text);
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    const std::string ctx = "samples line " + std::to_string(lineno);
    const json j = parse_json(line, ctx);
    const auto &counts = detail::array(detail::field(j, "counts", ctx), ctx + ".counts");
    PhotonPattern p;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      const long long c = detail::integer(counts[k], ctx + ".counts[" + std::to_string(k) + "]");
      if (c < 0)
        throw ValidationError(ctx + ".counts[" + std::to_string(k) + "]: negative count");
      p.counts.push_back(static_cast<int>(c));
    }
    if (!out.empty() && p.counts.size() != out.front().counts.size())
      throw ValidationError(ctx + ": mode count differs from earlier samples");
    out.push_back(std::move(p));
  }
  return out;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string pattern_label(const PhotonPattern &p) {
  std::string s;
  for (std::size_t k = 0; k < p.counts.size(); ++k)
    s += (k ? " " : "") + std::to_string(p.counts[k]);
  return s;
}

inline std::string distribution_to_csv(const Distribution &d) {
  std::string out = "pattern,probability\n";
  for (std::size_t k = 0; k < d.patterns.size(); ++k)
    out += pattern_label(d.patterns[k]) + "," + format_double(d.probs[k]) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Mesh schedule (JSON lines)

inline std::string schedule_to_jsonl(const TimeBinSchedule &s) {
  std::string out;
  for (const auto &e : s.events)
    out += json{{"t_ns", e.t_ns}, {"device", to_string(e.device)}, {"value", e.value}}.dump() + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Clique reports

inline json report_to_json(const CliqueReport &r) {
  json cliques = json::array();
  for (const auto &c : r.cliques)
    cliques.push_back({{"nodes", c.nodes},
                       {"weight", c.weight},
                       {"freq_gbs", c.freq_gbs},
                       {"freq_uniform", c.freq_uniform},
                       {"count_gbs", c.count_gbs},
                       {"count_uniform", c.count_uniform}});
  return {{"cliques", cliques},
          {"params",
           {{"samples_used", r.samples_used},
            {"min_photons", r.min_photons},
            {"iterations", r.iterations},
            {"seed", r.seed}}}};
}

/// Plot data: one row per clique, label = space-joined node ids.
inline std::string report_to_csv(const CliqueReport &r) {
  std::string out = "clique,weight,freq_gbs,freq_uniform\n";
  for (const auto &c : r.cliques) {
    std::string label;
    for (std::size_t k = 0; k < c.nodes.size(); ++k)
      label += (k ? " " : "") + std::to_string(c.nodes[k]);
    out += label + "," + format_double(c.weight) + "," + format_double(c.freq_gbs) + "," +
           format_double(c.freq_uniform) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Docking: {"ligand":[{"id","kind","xyz":[x,y,z]}], "protein":[...]}

struct PharmacophoreSet {
  std::vector<PharmacophorePoint> ligand;
  std::vector<PharmacophorePoint> protein;
};

inline std::vector<PharmacophorePoint> points_from_json(const json &arr, const std::string &ctx) {
  std::vector<PharmacophorePoint> out;
  detail::array(arr, ctx);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string c = ctx + "[" + std::to_string(k) + "]";
    PharmacophorePoint p;
    const auto &id = detail::field(arr[k], "id", c);
    p.id = id.is_number_integer() ? std::to_string(id.get<long long>()) : detail::string(id, c + ".id");
    p.kind = detail::string(detail::field(arr[k], "kind", c), c + ".kind");
    const auto xyz = detail::numbers(detail::field(arr[k], "xyz", c), c + ".xyz");
    if (xyz.size() != 3)
      throw ValidationError(c + ".xyz: expected three coordinates");
    p.position = Eigen::Vector3d(xyz[0], xyz[1], xyz[2]);
    out.push_back(std::move(p));
  }
  return out;
}

inline PharmacophoreSet pharmacophores_from_json(const json &j) {
  return {points_from_json(detail::field(j, "ligand", "pharmacophores"), "pharmacophores.ligand"),
          points_from_json(detail::field(j, "protein", "pharmacophores"), "pharmacophores.protein")};
}

/// {"tau":..,"epsilon_hbond":..,"epsilon_other":..,"default_weight":..,
///  "epsilon_table":[{"kinds":[a,b],"epsilon":e}],
///  "weight_table":[{"ligand":a,"protein":b,"weight":w}]}; all optional.
inline DockingParams docking_params_from_json(const json &j) {
  DockingParams p;
  if (!j.is_object())
    throw ValidationError("docking params: expected an object");
  detail::only_keys(j, {"tau", "epsilon_hbond", "epsilon_other", "default_weight", "epsilon_table", "weight_table"},
                    "docking params");
  if (j.contains("tau"))
    p.tau = detail::number(j["tau"], "docking params.tau");
  if (j.contains("epsilon_hbond"))
    p.epsilon_hbond = detail::number(j["epsilon_hbond"], "docking params.epsilon_hbond");
  if (j.contains("epsilon_other"))
    p.epsilon_other = detail::number(j["epsilon_other"], "docking params.epsilon_other");
  if (j.contains("default_weight"))
    p.default_weight = detail::number(j["default_weight"], "docking params.default_weight");
  if (j.contains("epsilon_table")) {
    const auto &arr = detail::array(j["epsilon_table"], "docking params.epsilon_table");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string c = "docking params.epsilon_table[" + std::to_string(k) + "]";
      const auto &kinds = detail::array(detail::field(arr[k], "kinds", c), c + ".kinds");
      if (kinds.size() != 2)
        throw ValidationError(c + ".kinds: expected two kinds");
      p.epsilon_table[unordered_pair(detail::string(kinds[0], c + ".kinds[0]"),
                                     detail::string(kinds[1], c + ".kinds[1]"))] =
          detail::number(detail::field(arr[k], "epsilon", c), c + ".epsilon");
    }
  }
  if (j.contains("weight_table")) {
    const auto &arr = detail::array(j["weight_table"], "docking params.weight_table");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string c = "docking params.weight_table[" + std::to_string(k) + "]";
      p.weight_table[{detail::string(detail::field(arr[k], "ligand", c), c + ".ligand"),
                      detail::string(detail::field(arr[k], "protein", c), c + ".protein")}] =
          detail::number(detail::field(arr[k], "weight", c), c + ".weight");
    }
  }
  p.validate();
  return p;
}

inline json pose_to_json(const std::vector<Contact> &pose, double weight) {
  json contacts = json::array();
  for (const auto &c : pose)
    contacts.push_back({{"ligand", c.ligand_id}, {"protein", c.protein_id}, {"weight", c.weight}});
  return {{"contacts", contacts}, {"weight", weight}};
}

// ---------------------------------------------------------------------------
// Loss stages: {"stages":[{"label":..,"transmission":..}], "per_loop_transmission":..}

inline LossModel loss_model_from_json(const json &j) {
  LossModel m;
  if (!j.is_object())
    throw ValidationError("loss stages: expected an object");
  detail::only_keys(j, {"stages", "per_loop_transmission"}, "loss stages");
  if (j.contains("stages")) {
    const auto &arr = detail::array(j["stages"], "loss stages.stages");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string c = "loss stages.stages[" + std::to_string(k) + "]";
      LossStage s;
      if (arr[k].contains("label"))
        s.label = detail::string(arr[k]["label"], c + ".label");
      s.transmission = detail::number(detail::field(arr[k], "transmission", c), c + ".transmission");
      m.stages.push_back(s);
    }
  }
  if (j.contains("per_loop_transmission"))
    m.per_loop_transmission = detail::number(j["per_loop_transmission"], "loss stages.per_loop_transmission");
  m.validate();
  return m;
}

inline json loss_model_to_json(const LossModel &m) {
  json stages = json::array();
  for (const auto &s : m.stages)
    stages.push_back({{"label", s.label}, {"transmission", s.transmission}});
  return {{"stages", stages}, {"per_loop_transmission", m.per_loop_transmission}};
}

// ---------------------------------------------------------------------------
// RNA prediction

inline json prediction_to_json(const RnaSequence &seq, const FoldPrediction &p) {
  json stems = json::array();
  for (const auto &s : p.stems)
    stems.push_back({{"i", s.i}, {"j", s.j}, {"length", s.length}});
  json pairs = json::array();
  for (const auto &[a, b] : p.base_pairs)
    pairs.push_back({a, b});
  json out = {{"sequence", seq.bases()},
              {"stems", stems},
              {"base_pairs", pairs},
              {"dot_bracket", to_dot_bracket(p.base_pairs, seq.length())}};
  if (!seq.accession().empty())
    out["accession"] = seq.accession();
  return out;
}

} // namespace gbs::io

#endif // GBS_IO_HPP
