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

// gbs-toolkit: command-line front end.
//
//   gbs-toolkit [--config cfg.json] [--seed N] [--out DIR] <command> [options]
//
// Every command validates and computes in memory first, then writes its
// artifacts and a manifest.json (config snapshot, input and artifact
// SHA-256 digests) into --out. Exit codes: 0 ok, 2 invalid input or
// configuration, 3 numerical or guard failure, 4 I/O failure.

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbs/cliques.hpp"
#include "gbs/docking.hpp"
#include "gbs/encoding.hpp"
#include "gbs/io.hpp"
#include "gbs/mesh.hpp"
#include "gbs/parallel.hpp"
#include "gbs/rna.hpp"
#include "gbs/simulator.hpp"

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

/// JSON configuration files for CLI11: top-level keys are global options,
/// nested objects are subcommand sections, e.g.
///   {"seed": 7, "sample": {"photons": 2, "collision-free": true}}
class JsonConfig : public CLI::Config {
public:
  std::string to_config(const CLI::App *, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream &input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::parse_error &e) {
      throw CLI::ConversionError("config: malformed JSON (" + std::string(e.what()) + ")");
    }
    if (!j.is_object())
      throw CLI::ConversionError("config: top level must be an object");
    return flatten(j, "", {});
  }

private:
  static std::string scalar(const json &v, const std::string &name) {
    if (v.is_string())
      return v.get<std::string>();
    if (v.is_boolean())
      return v.get<bool>() ? "true" : "false";
    if (v.is_number())
      return v.dump(); // exact for 64-bit integers, round-trip for doubles
    throw CLI::ConversionError("config: unsupported value for '" + name + "'");
  }

  static std::vector<CLI::ConfigItem> flatten(const json &j, const std::string &name,
                                              const std::vector<std::string> &prefix) {
    std::vector<CLI::ConfigItem> out;
    if (j.is_object()) {
      auto parents = prefix;
      if (!name.empty())
        parents.push_back(name);
      for (const auto &[k, v] : j.items()) {
        auto sub = flatten(v, k, parents);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    CLI::ConfigItem item;
    item.name = name;
    item.parents = prefix;
    if (j.is_array())
      for (const auto &v : j)
        item.inputs.push_back(scalar(v, name));
    else
      item.inputs.push_back(scalar(j, name));
    out.push_back(std::move(item));
    return out;
  }
};

std::string sha256_hex(const std::string &data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw gbs::InternalError("SHA-256 digest failed");
  static const char *hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Collects inputs and artifacts of one run and writes them at the end.
class Run {
public:
  Run(std::string command, std::uint64_t seed, fs::path out)
      : command_(std::move(command)), seed_(seed), out_(std::move(out)), start_(std::chrono::steady_clock::now()),
        started_utc_(utc_now()) {}

  std::string read_input(const std::string &path) {
    std::string text = gbs::io::read_text(path);
    inputs_.push_back({{"path", path}, {"sha256", sha256_hex(text)}});
    return text;
  }
  json read_json_input(const std::string &path) { return gbs::io::parse_json(read_input(path), path); }

  void add(const std::string &name, std::string content) { artifacts_.emplace_back(name, std::move(content)); }
  void add_json(const std::string &name, const json &j) { add(name, j.dump(2) + "\n"); }
  json &results() { return results_; }

  void finish(const json &config) {
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec)
      throw gbs::IoError("cannot create output directory '" + out_.string() + "': " + ec.message());
    json listed = json::array();
    for (const auto &[name, content] : artifacts_) {
      gbs::io::write_text_atomic(out_ / name, content);
      listed.push_back({{"path", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json manifest = {{"tool", "gbs-toolkit"},
                     {"version", GBS_TOOLKIT_VERSION},
                     {"command", command_},
                     {"seed", seed_},
                     {"config", config},
                     {"started_utc", started_utc_},
                     {"wall_clock_s", wall},
                     {"threads", gbs::thread_count()},
                     {"inputs", inputs_},
                     {"artifacts", listed},
                     {"results", results_}};
    gbs::io::write_text_atomic(out_ / "manifest.json", manifest.dump(2) + "\n");
  }

private:
  std::string command_;
  std::uint64_t seed_;
  fs::path out_;
  std::chrono::steady_clock::time_point start_;
  std::string started_utc_;
  json inputs_ = json::array();
  std::vector<std::pair<std::string, std::string>> artifacts_;
  json results_ = json::object();
};

/// Option values of an app as JSON (numbers and booleans typed when they parse).
json snapshot(const CLI::App &app) {
  json out = json::object();
  for (const CLI::Option *opt : app.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help" || opt->get_lnames().front() == "config" ||
        opt->get_lnames().front() == "version")
      continue;
    const std::string name = opt->get_lnames().front();
    std::vector<std::string> vals = opt->results();
    if (vals.empty()) {
      if (opt->get_type_size() == 0) {
        out[name] = false;
        continue;
      }
      if (opt->get_default_str().empty())
        continue;
      vals = {opt->get_default_str()};
    }
    auto typed = [](const std::string &s) -> json {
      if (s == "true")
        return true;
      try {
        const json v = json::parse(s);
        if (v.is_number() || v.is_boolean())
          return v;
      } catch (const json::exception &) {
      }
      return s;
    };
    if (opt->get_type_size() == 0)
      out[name] = true;
    else if (vals.size() == 1)
      out[name] = typed(vals.front());
    else {
      json arr = json::array();
      for (const auto &v : vals)
        arr.push_back(typed(v));
      out[name] = arr;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shared sampling options

struct WindowOptions {
  int photons = -1;
  int min_photons = 0;
  int max_photons = -1;
  bool collision_free = false;
  std::uint64_t guard = gbs::default_enumeration_guard;

  void add_to(CLI::App *cmd, bool cf_default) {
    collision_free = cf_default;
    cmd->add_option("--photons", photons, "Exact photon-number sector (sets min = max)");
    cmd->add_option("--min-photons", min_photons, "Smallest total photon number kept")->capture_default_str();
    cmd->add_option("--max-photons", max_photons, "Largest total photon number enumerated");
    cmd->add_flag("--collision-free,!--allow-collisions", collision_free, "Keep only patterns with <= 1 photon per mode")
        ->capture_default_str();
    cmd->add_option("--guard", guard, "Maximum number of enumerated patterns")->capture_default_str();
  }

  gbs::SamplingWindow window() const {
    if (photons >= 0)
      return {photons, photons, collision_free};
    if (max_photons < 0)
      throw gbs::ValidationError("set --photons or --max-photons");
    if (min_photons < 0 || min_photons > max_photons)
      throw gbs::ValidationError("need 0 <= --min-photons <= --max-photons");
    return {min_photons, max_photons, collision_free};
  }
};

gbs::SampleSet draw(const gbs::GaussianState &state, const WindowOptions &w, std::size_t n, std::uint64_t seed) {
  const auto win = w.window();
  if (win.min_total == 0 && !win.collision_free)
    return gbs::sample(state, n, win.max_total, seed, w.guard);
  return gbs::sample_window(state, win, n, seed, w.guard);
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(item);
  return out;
}

int report_error(const std::string &kind, const std::string &msg, int code) {
  std::cerr << "gbs-toolkit: " << kind << ": " << msg << "\n";
  return code;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Gaussian boson sampling toolkit: graph encoding, simulation and clique post-processing",
               "gbs-toolkit"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON configuration file (command-line flags take precedence)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_version_flag("--version", std::string(GBS_TOOLKIT_VERSION));
  app.require_subcommand(1);
  app.fallthrough(); // global options may also follow the subcommand

  std::uint64_t seed = 0;
  std::string out_dir = ".";
  app.add_option("--seed", seed, "Root 64-bit seed for all randomness")->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();

  // encode -----------------------------------------------------------------
  auto *encode = app.add_subcommand("encode", "Encode a graph as a GBS program (squeezing + interferometer)");
  std::string graph_path;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double target = 0.9;
  double scale = 0.0;
  double transmission = 1.0;
  std::string mode = "laplacian";
  encode->add_option("--graph", graph_path, "Graph JSON")->required();
  encode->add_option("--alpha", alpha, "Node-weight coupling (default: 0.1 if weighted, else 0)");
  encode->add_option("--target", target, "Largest Takagi value after scaling")->capture_default_str();
  encode->add_option("--scale", scale, "Fixed scale c instead of --target");
  encode->add_option("--mode", mode, "laplacian or adjacency")->capture_default_str();
  encode->add_option("--transmission", transmission, "Uniform per-mode transmission")->capture_default_str();

  // program ----------------------------------------------------------------
  auto *program = app.add_subcommand("program", "Build a program from squeezing values and a seeded Haar unitary");
  int modes = 0;
  std::vector<double> squeezing;
  std::string unitary_kind = "haar";
  program->add_option("--modes", modes, "Mode count")->required();
  program->add_option("--r", squeezing, "Squeezing parameters (missing modes are vacuum)")->delimiter(',');
  program->add_option("--unitary", unitary_kind, "haar or identity")->capture_default_str();
  program->add_option("--transmission", transmission, "Uniform per-mode transmission")->capture_default_str();

  // schedule ---------------------------------------------------------------
  auto *schedule = app.add_subcommand("schedule", "Compile a program's interferometer to a time-bin EOM schedule");
  std::string program_path;
  gbs::ScheduleParams sched;
  schedule->add_option("--program", program_path, "Program JSON")->required();
  schedule->add_option("--bin-spacing-ns", sched.bin_spacing_ns)->capture_default_str();
  schedule->add_option("--fibre-length-m", sched.fibre_length_m)->capture_default_str();
  schedule->add_option("--group-index", sched.group_index)->capture_default_str();

  // sample -----------------------------------------------------------------
  auto *sample = app.add_subcommand("sample", "Sample photon patterns from a program");
  std::size_t n_samples = 1000;
  WindowOptions sample_window;
  sample->add_option("--program", program_path, "Program JSON")->required();
  sample->add_option("--samples", n_samples, "Number of samples")->capture_default_str();
  sample_window.add_to(sample, false);

  // clique -----------------------------------------------------------------
  auto *clique = app.add_subcommand("clique", "Post-process samples into cliques, with a uniform baseline");
  std::string samples_path;
  int iterations = 30;
  int clique_min_photons = 5;
  clique->add_option("--graph", graph_path, "Graph JSON")->required();
  clique->add_option("--samples", samples_path, "Samples JSON lines")->required();
  clique->add_option("--iterations", iterations, "Local-search iterations per sample")->capture_default_str();
  clique->add_option("--min-photons", clique_min_photons, "Smallest sample size kept")->capture_default_str();

  // dock -------------------------------------------------------------------
  auto *dock = app.add_subcommand("dock", "Build a binding interaction graph; optionally solve for a pose");
  std::string pharm_path, params_path;
  bool solve = false, exact = false;
  WindowOptions dock_window;
  std::size_t dock_samples = 300;
  dock->add_option("--pharmacophores", pharm_path, "Ligand/protein pharmacophore JSON")->required();
  dock->add_option("--params", params_path, "Docking parameter JSON");
  dock->add_flag("--solve", solve, "Run encode + sample + clique and emit the pose");
  dock->add_flag("--exact", exact, "With --solve, use the exact clique oracle instead of sampling");
  dock->add_option("--samples", dock_samples, "Number of GBS samples")->capture_default_str();
  dock->add_option("--iterations", iterations, "Local-search iterations per sample")->capture_default_str();
  dock->add_option("--target", target, "Largest Takagi value after scaling")->capture_default_str();
  dock_window.min_photons = 2;
  dock_window.max_photons = 4;
  dock_window.add_to(dock, true);

  // rnafold ----------------------------------------------------------------
  auto *rnafold = app.add_subcommand("rnafold", "Predict RNA secondary structure by maximum weighted clique");
  std::string fasta_path, reference, reference_path, pairs = "AU,GC,GU";
  gbs::StemParams stem;
  gbs::GbsFoldParams fold;
  WindowOptions rna_window;
  rnafold->add_option("--fasta", fasta_path, "FASTA file (first record)")->required();
  rnafold->add_option("--reference", reference, "Reference dot-bracket structure");
  rnafold->add_option("--reference-file", reference_path, "File whose first line is the reference dot-bracket");
  rnafold->add_flag("--exact", exact, "Use the exact Bron-Kerbosch oracle instead of sampling");
  rnafold->add_option("--min-stem", stem.min_stem_len)->capture_default_str();
  rnafold->add_option("--min-loop", stem.min_loop)->capture_default_str();
  rnafold->add_option("--pairs", pairs, "Allowed base pairs")->capture_default_str();
  rnafold->add_flag("--pseudoknots", stem.allow_pseudoknots, "Let crossing stems coexist");
  rnafold->add_option("--samples", fold.samples)->capture_default_str();
  rnafold->add_option("--iterations", fold.iterations)->capture_default_str();
  rnafold->add_option("--target", fold.target_max_eig)->capture_default_str();
  rna_window.min_photons = fold.window.min_total;
  rna_window.max_photons = fold.window.max_total;
  rna_window.add_to(rnafold, true);

  // lossbudget -------------------------------------------------------------
  auto *loss = app.add_subcommand("lossbudget", "Total transmission of a loss stage list");
  std::string stages_path;
  bool preset = false;
  int loops = -1;
  loss->add_option("--stages", stages_path, "Loss stage JSON");
  loss->add_flag("--projected-60", preset, "Use the projected 60-mode stage list");
  loss->add_option("--loops", loops, "Loop traversals (default 61 with --projected-60, else 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError &e) {
    return report_error("i/o error", e.what(), 4);
  } catch (const CLI::ConfigError &e) {
    std::string msg = e.what();
    const std::string prefix = "INI was not able to parse ";
    if (msg.rfind(prefix, 0) == 0)
      msg = "unknown configuration key '" + msg.substr(prefix.size()) + "'";
    return report_error("invalid configuration", msg, 2);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  CLI::App *cmd = app.get_subcommands().front();
  json config = snapshot(app);
  config[cmd->get_name()] = snapshot(*cmd);
  Run run(cmd->get_name(), seed, out_dir);

  try {
    if (cmd == encode) {
      const auto g = gbs::io::graph_from_json(run.read_json_input(graph_path));
      const double a = std::isnan(alpha) ? gbs::default_alpha(g) : alpha;
      gbs::EncodingParams p = gbs::choose_scale(g, a, target, gbs::parse_encoding_mode(mode));
      if (scale > 0.0)
        p.c = scale;
      const auto prog = gbs::encode_graph(g, p, std::vector<double>(static_cast<std::size_t>(g.node_count()), transmission));
      run.add_json("program.json", gbs::io::program_to_json(prog));
      run.results() = {{"c", p.c}, {"alpha", p.alpha}, {"mode", gbs::to_string(p.mode)}};
    } else if (cmd == program) {
      if (modes < 1)
        throw gbs::ValidationError("--modes must be at least 1");
      if (squeezing.size() > static_cast<std::size_t>(modes))
        throw gbs::ValidationError("more squeezing values than modes");
      squeezing.resize(static_cast<std::size_t>(modes), 0.0);
      gbs::UnitaryMatrix u;
      if (unitary_kind == "haar")
        u = gbs::random_unitary(modes, gbs::derive_seed(seed, gbs::Stream::unitary));
      else if (unitary_kind == "identity")
        u = gbs::UnitaryMatrix::identity(modes);
      else
        throw gbs::ValidationError("--unitary must be haar or identity");
      const gbs::GbsProgram prog(squeezing, u, std::vector<double>(static_cast<std::size_t>(modes), transmission));
      run.add_json("program.json", gbs::io::program_to_json(prog));
    } else if (cmd == schedule) {
      const auto prog = gbs::io::program_from_json(run.read_json_input(program_path));
      const auto mesh = gbs::clements_decompose(prog.unitary());
      const auto s = gbs::compile_timebin_schedule(mesh, sched);
      run.add("schedule.jsonl", gbs::io::schedule_to_jsonl(s));
      run.results() = {{"cells", mesh.cells().size()},
                       {"depth", gbs::mesh_depth(mesh)},
                       {"loop_period_bins", s.loop_period_bins},
                       {"events", s.events.size()}};
    } else if (cmd == sample) {
      const auto prog = gbs::io::program_from_json(run.read_json_input(program_path));
      const auto set = draw(gbs::prepare_state(prog), sample_window, n_samples, seed);
      gbs::Distribution dist = set.window;
      dist.probs = gbs::normalized(dist.probs);
      run.add("samples.jsonl", gbs::io::samples_to_jsonl(set.samples));
      run.add("distribution.csv", gbs::io::distribution_to_csv(dist));
      run.results() = {{"captured_mass", set.captured_mass}, {"support", dist.patterns.size()}};
    } else if (cmd == clique) {
      const auto g = gbs::io::graph_from_json(run.read_json_input(graph_path));
      const auto samples = gbs::io::samples_from_jsonl(run.read_input(samples_path));
      const auto report = gbs::run_pipeline(g, samples, clique_min_photons, iterations, seed);
      run.add_json("report.json", gbs::io::report_to_json(report));
      run.add("report.csv", gbs::io::report_to_csv(report));
      run.results() = {{"samples_used", report.samples_used}, {"distinct_cliques", report.cliques.size()}};
    } else if (cmd == dock) {
      const auto pts = gbs::io::pharmacophores_from_json(run.read_json_input(pharm_path));
      const auto params =
          params_path.empty() ? gbs::DockingParams{} : gbs::io::docking_params_from_json(run.read_json_input(params_path));
      const auto big = gbs::build_big(pts.ligand, pts.protein, params);
      json gj = gbs::io::graph_to_json(big.graph);
      for (std::size_t k = 0; k < big.contacts.size(); ++k) {
        gj["nodes"][k]["ligand"] = big.contacts[k].ligand_id;
        gj["nodes"][k]["protein"] = big.contacts[k].protein_id;
      }
      run.add_json("big.json", gj);
      run.results() = {{"nodes", big.graph.node_count()}, {"edges", big.graph.edge_count()}};
      if (solve) {
        gbs::Clique best;
        if (exact) {
          best = gbs::max_weight_clique(big.graph);
        } else if (big.graph.edge_count() == 0) {
          // only singletons: take the heaviest contact
          int v = 0;
          for (int k = 1; k < big.graph.node_count(); ++k)
            if (big.graph.weight(k) > big.graph.weight(v))
              v = k;
          best = gbs::make_clique(big.graph, {v});
        } else {
          const auto enc = gbs::choose_scale(big.graph, gbs::default_alpha(big.graph), target);
          const auto state = gbs::prepare_state(gbs::encode_graph(big.graph, enc));
          const auto set = draw(state, dock_window, dock_samples, gbs::derive_seed(seed, gbs::Stream::sampler));
          const auto report =
              gbs::run_pipeline(big.graph, set.samples, dock_window.window().min_total, iterations, seed);
          run.add_json("report.json", gbs::io::report_to_json(report));
          for (const auto &c : report.cliques)
            if (c.count_gbs > 0) {
              best = gbs::make_clique(big.graph, c.nodes);
              break;
            }
        }
        run.add_json("pose.json", gbs::io::pose_to_json(gbs::interpret_pose(big, best), best.weight));
        run.results()["pose_weight"] = best.weight;
      }
    } else if (cmd == rnafold) {
      const auto seq = gbs::parse_fasta(run.read_input(fasta_path));
      std::vector<std::string> pair_list = split_list(pairs);
      stem.allowed = gbs::AllowedPairs(pair_list);
      stem.validate();
      if (!reference_path.empty()) {
        std::istringstream in(run.read_input(reference_path));
        std::getline(in, reference);
        if (!reference.empty() && reference.back() == '\r')
          reference.pop_back();
      }
      gbs::PairSet ref;
      if (!reference.empty()) {
        if (static_cast<int>(reference.size()) != seq.length())
          throw gbs::ValidationError("reference has length " + std::to_string(reference.size()) +
                                     " but the sequence has " + std::to_string(seq.length()));
        ref = gbs::parse_dot_bracket(reference);
      }
      fold.seed = seed;
      fold.window = rna_window.window();
      fold.guard = rna_window.guard;
      gbs::FoldPrediction pred;
      if (exact) {
        pred = gbs::predict_exact(seq, stem);
      } else {
        auto result = gbs::predict_gbs(seq, stem, fold);
        pred = std::move(result.prediction);
        if (!result.report.cliques.empty())
          run.add_json("report.json", gbs::io::report_to_json(result.report));
      }
      if (pred.stems.empty())
        std::cerr << "gbs-toolkit: warning: no stems found; prediction is empty\n";
      json out = gbs::io::prediction_to_json(seq, pred);
      if (!reference.empty()) {
        out["reference"] = reference;
        out["mcc"] = gbs::mcc(pred.base_pairs, ref, seq.length());
        out["mcc_approx"] = gbs::mcc_approx(pred.base_pairs, ref);
        run.results()["mcc"] = out["mcc"];
      }
      run.add_json("prediction.json", out);
      run.results()["stems"] = pred.stems.size();
    } else if (cmd == loss) {
      gbs::LossModel model;
      if (preset && !stages_path.empty())
        throw gbs::ValidationError("use either --stages or --projected-60");
      if (preset)
        model = gbs::projected_60_mode_model();
      else if (!stages_path.empty())
        model = gbs::io::loss_model_from_json(run.read_json_input(stages_path));
      if (loops < 0)
        loops = preset ? gbs::projected_60_mode_loops : 0;
      const double total = gbs::loss_budget(model, loops);
      json stages = json::array();
      double running = std::pow(model.per_loop_transmission, loops);
      std::cout << "loops: " << loops << " x " << model.per_loop_transmission << " = " << running << "\n";
      for (const auto &s : model.stages) {
        running *= s.transmission;
        stages.push_back({{"label", s.label}, {"transmission", s.transmission}, {"cumulative", running}});
        std::cout << "  " << s.label << ": " << s.transmission << " (cumulative " << running << ")\n";
      }
      std::cout << "total transmission: " << total << " (" << 100.0 * total << " %)\n";
      run.add_json("lossbudget.json", {{"loops", loops},
                                       {"per_loop_transmission", model.per_loop_transmission},
                                       {"stages", stages},
                                       {"total", total},
                                       {"total_percent", 100.0 * total}});
      run.results() = {{"total", total}};
    }
    run.finish(config);
  } catch (const gbs::ValidationError &e) {
    return report_error("invalid input", e.what(), 2);
  } catch (const gbs::NumericalError &e) {
    return report_error("numerical error", e.what(), 3);
  } catch (const gbs::IoError &e) {
    return report_error("i/o error", e.what(), 4);
  } catch (const std::exception &e) {
    return report_error("internal error", e.what(), 1);
  }
  return 0;
}
