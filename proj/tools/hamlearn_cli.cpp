// Copyright 2026 The hamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Links only the shared C API, the way an external
// consumer would.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hamlearn/hamlearn.h"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

[[noreturn]] void fail(const std::string& what) {
  std::cerr << "error: " << what << ": " << hl_last_error() << "\n";
  std::exit(1);
}

json load_config(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& backend) {
  json cfg = config_path.empty() ? json::object() : json::parse(read_file(config_path));
  if (seed) cfg["seed"] = *seed;
  if (!backend.empty()) cfg["backend"] = backend;
  return cfg;
}

std::string owned(char* s) {
  std::string out = s ? s : "";
  hl_string_free(s);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg-limited Hamiltonian learning simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, backend, out_dir = ".";
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "config JSON path")->capture_default_str();
  app.add_option("--seed", seed, "override config seed");
  app.add_option("--backend", backend, "qdrift|trotter");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();

  // generate
  auto* gen = app.add_subcommand("generate", "emit a Hamiltonian instance as JSON");
  std::string kind = "heisenberg_chain", gen_out;
  int n_qubits = 6;
  std::uint64_t gen_seed = 1;
  double lo = -1.0, hi = 1.0;
  gen->add_option("--kind", kind, "heisenberg_chain|random_low_intersection")
      ->capture_default_str();
  gen->add_option("--n", n_qubits, "qubit count")->capture_default_str();
  gen->add_option("--gen-seed", gen_seed, "instance seed")->capture_default_str();
  gen->add_option("--coeff-lo", lo)->capture_default_str();
  gen->add_option("--coeff-hi", hi)->capture_default_str();
  gen->add_option("--file", gen_out, "output path (default stdout)");

  // learn
  auto* learn = app.add_subcommand("learn", "run the learning pipeline from a config");

  // study
  auto* study = app.add_subcommand("study", "run a verification study");
  std::string study_name;
  study->add_option("name", study_name, "deviation|scaling|spam|tvbound")->required();

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    hl_hamiltonian* h = nullptr;
    if (hl_hamiltonian_generate(kind.c_str(), n_qubits, gen_seed, lo, hi, &h) != HL_OK) {
      fail("generate");
    }
    char* text = nullptr;
    if (hl_hamiltonian_to_json(h, &text) != HL_OK) fail("serialize");
    const std::string body = owned(text);
    hl_hamiltonian_free(h);
    if (gen_out.empty()) {
      std::cout << body << "\n";
    } else {
      write_file(gen_out, body);
      std::cout << "wrote " << gen_out << "\n";
    }
    return 0;
  }

  if (learn->parsed()) {
    const json cfg = load_config(config_path, seed, backend);
    char* result = nullptr;
    if (hl_learn_run(cfg.dump().c_str(), &result) != HL_OK) fail("learn");
    const std::string body = owned(result);
    std::filesystem::create_directories(out_dir);
    write_file(std::filesystem::path(out_dir) / "learn_result.json", body);
    const json parsed = json::parse(body);
    std::cout << "max_abs_error " << parsed.at("max_abs_error").get<double>()
              << "  total_evolution_time "
              << parsed.at("ledger").at("total_evolution_time").get<double>()
              << "  experiments " << parsed.at("ledger").at("experiment_count").get<long long>()
              << "\nwrote " << (std::filesystem::path(out_dir) / "learn_result.json").string()
              << "\n";
    return 0;
  }

  if (study->parsed()) {
    const json cfg = load_config(config_path, seed, backend);
    char* report = nullptr;
    if (hl_study_run(study_name.c_str(), cfg.dump().c_str(), &report) != HL_OK) fail("study");
    const json parsed = json::parse(owned(report));
    std::filesystem::create_directories(out_dir);
    const auto base = std::filesystem::path(out_dir) / ("study_" + study_name);
    write_file(base.string() + ".csv", parsed.at("csv").get<std::string>());
    json manifest = parsed;
    manifest.erase("csv");
    manifest["config"] = cfg;
    write_file(base.string() + ".json", manifest.dump(2));
    std::cout << "study " << study_name << (parsed.at("pass").get<bool>() ? " PASS" : " FAIL");
    for (const auto& [k, v] : parsed.at("metrics").items()) {
      std::cout << "  " << k << "=" << v.get<double>();
    }
    std::cout << "\nwrote " << base.string() << ".csv and .json\n";
    return parsed.at("pass").get<bool>() ? 0 : 2;
  }

  return 0;
}
