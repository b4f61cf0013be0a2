// SPDX-License-Identifier: Apache-2.0
// dirsim command line: pattern-sweep, mesh, bench, validate-config.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "dirsim/config.hpp"
#include "dirsim/errors.hpp"
#include "dirsim/scenarios.hpp"

namespace fs = std::filesystem;
using namespace dirsim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitScenario = 3;

std::ofstream open_output(const std::string& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ScenarioError("cannot create output directory " + dir + ": " + ec.message());
  const fs::path path = fs::path(dir) / name;
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write " + path.string());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directional-antenna wireless network simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";

  auto* sweep = app.add_subcommand("pattern-sweep", "Reconstruct an AP's antenna pattern with orbiting hosts");
  sweep->add_option("--config", config_path, "Config file")->required();
  sweep->add_option("--out", out_dir, "Output directory");

  std::string mode = "omni";
  std::uint64_t seed = 1;
  std::string trace_path;
  auto* mesh = app.add_subcommand("mesh", "Relay chain between two clients");
  mesh->add_option("--config", config_path, "Config file")->required();
  mesh->add_option("--mode", mode, "Antenna mode")->check(CLI::IsMember({"omni", "directional"}));
  mesh->add_option("--seed", seed, "Run seed");
  mesh->add_option("--out", out_dir, "Output directory");
  mesh->add_option("--trace", trace_path, "Write the event trace to this file");

  int procedure = 3;
  int hosts = 100;
  int repeats = 10;
  auto* bench = app.add_subcommand("bench", "Time neighbor-list maintenance procedures");
  bench->add_option("--config", config_path, "Config file")->required();
  bench->add_option("--procedure", procedure, "1 symmetric, 2 brute force, 3 neighbors graph")->required();
  bench->add_option("--hosts", hosts, "Mobile hosts");
  bench->add_option("--repeats", repeats, "Repetitions");
  bench->add_option("--out", out_dir, "Output directory");

  auto* validate = app.add_subcommand("validate-config", "Parse a config file and print it in canonical form");
  validate->add_option("file", config_path, "Config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const ConfigDocument doc = load_config_file(config_path);
    if (*validate) {
      for (const std::string& p : doc.radio_profiles()) radio_config_from(doc, p);
      std::cout << serialize_config(doc);
    } else if (*sweep) {
      const PatternSweepResult r = run_pattern_sweep(doc);
      auto out = open_output(out_dir, "pattern.csv");
      write_pattern_csv(out, r);
      std::cout << "pattern.csv: " << r.samples.size() << " samples\n";
    } else if (*mesh) {
      std::unique_ptr<std::ofstream> trace;
      MeshOptions opts;
      if (!trace_path.empty()) {
        trace = std::make_unique<std::ofstream>(trace_path);
        if (!*trace) throw ScenarioError("cannot write " + trace_path);
        opts.trace = trace.get();
      }
      const MeshResult r =
          run_mesh(doc, mode == "omni" ? AntennaMode::Omni : AntennaMode::Directional, seed, opts);
      auto out = open_output(out_dir, "mesh.csv");
      write_mesh_csv(out, r);
      std::cout << "mesh.csv: " << r.packets_delivered << "/" << r.packets_offered << " packets, "
                << r.throughput_bps << " bit/s\n";
    } else if (*bench) {
      const BenchResult r = run_bench(doc, procedure, hosts, repeats);
      auto out = open_output(out_dir, "bench.csv");
      write_bench_csv(out, r);
      std::cout << "bench.csv: " << r.rows.size() << " repetitions\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kExitScenario;
  } catch (const DomainError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kExitScenario;
  }
  return 0;
}
