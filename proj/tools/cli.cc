// Copyright 2026 The meshkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include "meshkit/checkpoint.h"
#include "meshkit/config.h"
#include "meshkit/decimation.h"
#include "meshkit/io.h"
#include "meshkit/parallel.h"
#include "meshkit/synth.h"
#include "meshkit/train.h"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace meshkit::cli {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct DecimateArgs {
  std::string in, out, clusters;
  int target = -1;
  double stride = 0.0;
  int iters = 10;
  std::string method = "qem";
  double grid = 0.0;
};

struct SynthArgs {
  std::string out;
  int classes = 4;
  int per_class = 50;
  std::uint64_t seed = 0;
  int resolution = 7;
  double depth = 0.5;
  std::string format = "off";
  bool raw = false;
};

struct ModelArgs {
  std::string data, config, ckpt, log;
  std::uint64_t seed = 0;
  int epochs = -1;
  int batch_size = 8;
};

struct BenchArgs {
  std::vector<std::size_t> sizes{100000, 200000};
  int repeats = 3;
  double stride = 2.0;
  std::uint64_t seed = 0;
};

std::vector<Sample> load_dataset(const std::string& manifest) {
  std::vector<Sample> data;
  for (const ManifestEntry& e : read_manifest(manifest)) {
    LoadedMesh loaded = load_mesh(e.path);
    Sample s;
    s.mesh = std::move(loaded.mesh);
    s.colors = std::move(loaded.colors);
    s.label = e.label;
    data.push_back(std::move(s));
  }
  if (data.empty()) throw ArgumentError("manifest '" + manifest + "' lists no samples");
  return data;
}

KeyValueConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  KeyValueConfig kv = KeyValueConfig::load(path);
  std::vector<std::string> known = NetworkConfig::keys();
  for (const std::string& k : TrainConfig::keys()) known.push_back(k);
  kv.require_known(known);
  return kv;
}

NetworkConfig network_config(const KeyValueConfig& kv, const std::vector<Sample>& data) {
  NetworkConfig base = NetworkConfig::desk();
  if (!kv.has("num_classes")) {
    int top = 0;
    for (const Sample& s : data) top = std::max(top, s.label);
    base.num_classes = top + 1;
  }
  base.textured = !data.front().colors.empty();
  return NetworkConfig::from_config(kv, base);
}

int run_decimate(const DecimateArgs& a, std::ostream& out) {
  const LoadedMesh in = load_mesh(a.in);
  const int n_in = static_cast<int>(in.mesh.num_vertices());
  const auto start = Clock::now();
  DecimationResult r;
  if (a.method == "voxel") {
    if (!(a.grid > 0.0)) throw ArgumentError("--method voxel needs a positive --grid");
    r = decimate_voxel(in.mesh, a.grid);
  } else {
    if ((a.target >= 0) == (a.stride > 0.0)) {
      throw ArgumentError("give exactly one of --target and --stride");
    }
    if (a.stride > 0.0 && a.stride < 1.0) throw ArgumentError("--stride must be >= 1");
    const int target = a.target >= 0 ? a.target : stride_target(in.mesh.num_vertices(), a.stride);
    r = decimate(in.mesh, target, a.iters);
  }
  const double elapsed = ms_since(start);
  std::vector<Vec3> colors;
  if (!in.colors.empty()) {
    colors.assign(static_cast<std::size_t>(r.cluster_map.num_output), Vec3::Zero());
    std::vector<int> count(colors.size(), 0);
    for (std::size_t i = 0; i < in.colors.size(); ++i) {
      const auto o = static_cast<std::size_t>(r.cluster_map.iomap[i]);
      colors[o] += in.colors[i];
      ++count[o];
    }
    for (std::size_t o = 0; o < colors.size(); ++o) colors[o] /= count[o];
  }
  MeshWriteOptions options;
  options.colors = colors;
  save_mesh(a.out, r.mesh, options);
  if (!a.clusters.empty()) {
    std::ostringstream s;
    write_cluster_map(s, r.cluster_map);
    write_file_atomic(a.clusters, s.str());
  }
  out << "n_in=" << n_in << " n_out=" << r.mesh.num_vertices() << " removed=" << r.removed_count
      << " cost=" << std::setprecision(9) << r.total_cost << " iterations=" << r.iterations
      << " time_ms=" << std::fixed << std::setprecision(3) << elapsed << '\n';
  return kOk;
}

int run_synth(const SynthArgs& a, std::ostream& out) {
  EngravingOptions options;
  options.resolution = a.resolution;
  options.depth = a.depth;
  const std::vector<Sample> data = synth_engraved_cubes(a.classes, a.per_class, a.seed, options);
  const std::filesystem::path dir(a.out);
  std::filesystem::create_directories(dir);
  std::vector<ManifestEntry> entries;
  std::vector<int> index(static_cast<std::size_t>(a.classes), 0);
  for (const Sample& s : data) {
    char name[64];
    std::snprintf(name, sizeof(name), "class%d_%04d.%s", s.label,
                  index[static_cast<std::size_t>(s.label)]++, a.format.c_str());
    save_mesh(dir / name, a.raw ? s.mesh : normalize_shape(s.mesh));
    entries.push_back({name, s.label});
  }
  const std::filesystem::path manifest = dir / "manifest.tsv";
  write_manifest(manifest, entries);
  out << "samples=" << data.size() << " manifest=" << manifest.string() << '\n';
  return kOk;
}

int run_train(const ModelArgs& a, std::ostream& out) {
  const std::vector<Sample> data = load_dataset(a.data);
  const KeyValueConfig kv = load_config(a.config);
  const NetworkConfig nc = network_config(kv, data);
  TrainConfig tc = TrainConfig::from_config(kv, TrainConfig{});
  if (a.epochs >= 0) tc.epochs = a.epochs;
  tc.seed = a.seed;
  Model model(nc, a.seed);
  out << "parameters=" << model.parameter_count() << " samples=" << data.size() << '\n';
  std::string log;
  const std::string log_path = a.log.empty() ? a.ckpt + ".log" : a.log;
  auto finish = [&] {
    save_checkpoint(a.ckpt, model);
    write_file_atomic(log_path, log);
  };
  try {
    train(model, data, tc, [&](const EpochRecord& r) {
      const std::string line = format_epoch_record(r);
      log += line + '\n';
      out << line << std::endl;
    });
  } catch (const DivergenceError& e) {
    finish();
    throw;
  }
  finish();
  out << "checkpoint=" << a.ckpt << " log=" << log_path << '\n';
  return kOk;
}

int run_eval(const ModelArgs& a, std::ostream& out) {
  const std::vector<Sample> data = load_dataset(a.data);
  std::unique_ptr<Model> model;
  if (!a.ckpt.empty()) {
    model = load_checkpoint(a.ckpt);
  } else {
    model = std::make_unique<Model>(network_config(load_config(a.config), data), a.seed);
  }
  const Metrics m = evaluate(*model, data, a.batch_size);
  std::vector<long> support(static_cast<std::size_t>(m.num_classes), 0);
  out << "class  support  accuracy  iou\n";
  for (int c = 0; c < m.num_classes; ++c) {
    const auto& row = m.confusion[static_cast<std::size_t>(c)];
    long total = 0;
    for (long x : row) total += x;
    char line[128];
    std::snprintf(line, sizeof(line), "%5d  %7ld  %8.4f  %6.4f\n", c, total,
                  total ? static_cast<double>(row[static_cast<std::size_t>(c)]) / total : 0.0,
                  m.iou[static_cast<std::size_t>(c)]);
    out << line;
  }
  out << std::setprecision(9) << "metric overall_accuracy=" << m.overall_accuracy << '\n'
      << "metric mean_accuracy=" << m.mean_accuracy << '\n'
      << "metric mean_iou=" << m.mean_iou << '\n'
      << "metric loss=" << m.loss << '\n'
      << "metric samples=" << data.size() << '\n';
  return kOk;
}

int run_bench(const BenchArgs& a, std::ostream& out) {
  if (a.repeats < 1) throw ArgumentError("--repeats must be positive");
  std::mt19937_64 rng(a.seed);
  out << "edges vertices ours_ms baseline_ms ratio\n";
  for (std::size_t edges : a.sizes) {
    const TriMesh mesh = random_mesh_with_edges(edges, rng);
    const int target = stride_target(mesh.num_vertices(), a.stride);
    double ours = std::numeric_limits<double>::infinity(), base = ours;
    for (int r = 0; r < a.repeats; ++r) {
      auto start = Clock::now();
      decimate(mesh, target);
      ours = std::min(ours, ms_since(start));
      start = Clock::now();
      iterative_qem(mesh, target);
      base = std::min(base, ms_since(start));
    }
    char line[160];
    std::snprintf(line, sizeof(line), "%zu %zu %.3f %.3f %.4f\n", unique_edges(mesh).size(),
                  mesh.num_vertices(), ours, base, ours / base);
    out << line;
  }
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mesh decimation, convolution and training tools", "meshkit"};
  app.require_subcommand(1);
  int threads = 0;
  bool quiet = false;
  app.add_option("--threads", threads, "Worker threads (falls back to MESHKIT_THREADS)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "Silence warnings");

  DecimateArgs dec;
  CLI::App* decimate_cmd = app.add_subcommand("decimate", "Decimate one mesh");
  decimate_cmd->add_option("--in", dec.in, "Input mesh")->required();
  decimate_cmd->add_option("--out", dec.out, "Output mesh")->required();
  decimate_cmd->add_option("--target", dec.target, "Target vertex count")->check(CLI::NonNegativeNumber);
  decimate_cmd->add_option("--stride", dec.stride, "Vertex reduction factor");
  decimate_cmd->add_option("--iters", dec.iters, "Maximum passes")->check(CLI::PositiveNumber);
  decimate_cmd->add_option("--method", dec.method, "qem or voxel")
      ->check(CLI::IsMember({"qem", "voxel"}));
  decimate_cmd->add_option("--grid", dec.grid, "Voxel size for --method voxel");
  decimate_cmd->add_option("--clusters", dec.clusters, "Cluster map sidecar path");

  SynthArgs syn;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Write a synthetic engraved-cube dataset");
  synth_cmd->add_option("--out", syn.out, "Output directory")->required();
  synth_cmd->add_option("--classes", syn.classes, "Number of classes")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--per-class", syn.per_class, "Samples per class")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--seed", syn.seed, "Random seed");
  synth_cmd->add_option("--resolution", syn.resolution, "Quads per face edge")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--depth", syn.depth, "Engraving depth");
  synth_cmd->add_option("--format", syn.format, "off, obj or ply")
      ->check(CLI::IsMember({"off", "obj", "ply"}));
  synth_cmd->add_flag("--raw", syn.raw, "Skip scale normalization");

  ModelArgs tr;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a model on a manifest");
  train_cmd->add_option("--data", tr.data, "Dataset manifest")->required();
  train_cmd->add_option("--config", tr.config, "key = value config file");
  train_cmd->add_option("--ckpt", tr.ckpt, "Checkpoint output path")->required();
  train_cmd->add_option("--log", tr.log, "Training log path (default: <ckpt>.log)");
  train_cmd->add_option("--seed", tr.seed, "Random seed");
  train_cmd->add_option("--epochs", tr.epochs, "Override the configured epoch count")
      ->check(CLI::NonNegativeNumber);

  ModelArgs ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a manifest");
  eval_cmd->add_option("--data", ev.data, "Dataset manifest")->required();
  eval_cmd->add_option("--ckpt", ev.ckpt, "Checkpoint (omit for a freshly initialized model)");
  eval_cmd->add_option("--config", ev.config, "Config for a fresh model");
  eval_cmd->add_option("--seed", ev.seed, "Seed for a fresh model");
  eval_cmd->add_option("--batch-size", ev.batch_size, "Evaluation batch size")
      ->check(CLI::PositiveNumber);

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Time decimation against iterative QEM");
  bench_cmd->add_option("--sizes", bench.sizes, "Edge counts")->delimiter(',');
  bench_cmd->add_option("--repeats", bench.repeats, "Runs per size; the minimum is reported")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--stride", bench.stride, "Vertex reduction factor");
  bench_cmd->add_option("--seed", bench.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFlagFailure;
  }

  const int previous_threads = num_threads();
  const bool previous_warnings = warnings_enabled();
  if (threads == 0) threads = threads_from_environment();
  if (threads > 0) set_num_threads(threads);
  if (quiet) set_warnings_enabled(false);
  int code = kOk;
  try {
    if (*decimate_cmd) {
      code = run_decimate(dec, out);
    } else if (*synth_cmd) {
      code = run_synth(syn, out);
    } else if (*train_cmd) {
      code = run_train(tr, out);
    } else if (*eval_cmd) {
      code = run_eval(ev, out);
    } else {
      code = run_bench(bench, out);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    code = kParseFailure;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    code = kFlagFailure;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    code = kNumericFailure;
  } catch (const StateError& e) {
    err << "error: " << e.what() << '\n';
    code = kRuntimeFailure;
  } catch (const Error& e) {  // structural problems in inputs and failed writes
    err << "error: " << e.what() << '\n';
    code = kParseFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    code = kParseFailure;
  }
  set_num_threads(previous_threads);
  set_warnings_enabled(previous_warnings);
  return code;
}

}  // namespace meshkit::cli
