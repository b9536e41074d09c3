// Copyright 2026 The stochpack Authors
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

// Command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 validation failed, 3 structural or
// parse error, 4 I/O error, 5 solver or runtime error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stochpack/stochpack.hpp"

namespace {

using namespace stochpack;

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kStructural = 3, kIo = 4, kRuntime = 5 };

int cmd_validate(const std::string& path) {
  auto file = load_instance(path);
  auto report = validate_instance(file.instance);
  std::cout << "instance: " << path << "\n"
            << "family: " << to_string(file.instance.family) << "\n"
            << "rows: " << file.instance.n << "\nitems: " << file.instance.m << "\n";
  if (report.scale_w) std::cout << "scale_w: " << *report.scale_w << "\n";
  if (file.objective) std::cout << "delta_c: " << file.objective->delta_c() << "\n";
  if (report.ok()) {
    std::cout << "status: pass\n";
    return kOk;
  }
  std::cout << "status: fail\n";
  for (const auto& v : report.violations) {
    std::cout << "violation " << v.condition;
    if (v.row) std::cout << " row=" << *v.row;
    if (v.column) std::cout << " column=" << *v.column;
    std::cout << ": " << v.detail << "\n";
  }
  return kInvalid;
}

int cmd_gen(const std::string& kind, const std::vector<std::string>& params, uint64_t seed,
            const std::string& out, int64_t c_minus, int64_t c_plus, double p) {
  auto inst = generate(kind, parse_gen_params(params), seed);
  InstanceFile file{inst, StochasticObjective::uniform(inst.m, c_minus, c_plus, p)};
  save_instance(out, file);
  std::cout << "wrote " << out << ": family " << to_string(inst.family) << ", " << inst.n
            << " rows, " << inst.m << " items\n";
  return kOk;
}

int cmd_run(const std::string& spec_path, const std::string& out,
            const std::optional<std::string>& summary_path, std::optional<size_t> workers,
            bool sweep) {
  auto spec = load_spec(spec_path);
  auto result = sweep ? sweep_T(spec, workers) : run_experiment(spec, workers);
  write_text_file(out, result.csv());
  auto summary = result.summary();
  std::cout << summary;
  auto sp = summary_path ? summary_path : spec.summary_path;
  if (sp) write_text_file(*sp, summary);
  size_t errors = 0;
  for (const auto& r : result.rows) errors += !r.error.empty();
  std::cout << "rows: " << result.rows.size() << " (errors: " << errors << ")\n";
  return kOk;
}

int cmd_witness(const std::string& path, const std::string& mu_text, const std::string& eps_text,
                const std::string& mode, const std::string& gamma_text,
                const std::optional<std::string>& dump) {
  auto file = load_instance(path);
  Rational mu = parse_rational(mu_text), eps = parse_rational(eps_text);
  WitnessCover cover;
  if (mode == "tdi") {
    cover = enumerate_tdi_cover(file.instance.b, mu, eps);
  } else if (mode == "sparse") {
    cover = enumerate_sparse_cover(file.instance.b, mu, eps, parse_rational(gamma_text));
  } else {
    std::cerr << "unknown witness mode '" << mode << "' (tdi or sparse)\n";
    return kUsage;
  }
  std::cout << "kind: " << to_string(cover.kind) << "\n"
            << "rows: " << cover.b.size() << "\n"
            << "mu: " << to_string(cover.mu) << "\n"
            << "cap: " << to_string(cover.cap) << "\n"
            << "members: " << cover.size() << "\n"
            << "plot_bound: " << cover.size_bound_for_plotting() << "\n";
  if (file.objective) {
    std::vector<int64_t> c(file.objective->c_minus().begin(), file.objective->c_minus().end());
    auto rep = verify_cover_property(cover, file.instance.A, c);
    std::cout << "property_vs_c_minus: " << (rep.holds ? "holds" : "violated") << " ("
              << rep.message << ")\n";
    if (!rep.holds) return kRuntime;
  }
  if (dump) {
    std::ofstream os(*dump);
    if (!os) throw IoError("cannot open '" + *dump + "' for writing");
    os << "# cap " << to_string(cover.cap) << "\n";
    for (size_t k = 0; k < cover.size(); ++k) {
      auto y = cover.vector_of(k);
      for (size_t i = 0; i < y.size(); ++i) os << (i ? "," : "") << to_string(y[i]);
      os << "\n";
    }
  }
  return kOk;
}

int cmd_sparsify(const std::string& path, std::optional<size_t> k, double eps, double delta,
                 uint64_t seed, std::optional<int64_t> s, std::optional<uint64_t> colors) {
  auto file = load_instance(path);
  auto hg = hypergraph_of(file.instance);
  ColoringConfig cc;
  cc.k = k ? *k : hg.k;
  cc.epsilon = eps;
  cc.delta = delta;
  cc.seed = seed;
  cc.num_colors_override = colors;
  if (s) {
    cc.s = *s;
  } else {
    auto adapter = make_adapter(file.instance);
    std::vector<int64_t> ones(file.instance.m, 1);
    cc.s = std::max<int64_t>(
        1, static_cast<int64_t>(std::ceil(adapter->solve_relaxation(ones).value - 1e-9)));
  }
  auto sp = sparsify(hg, cc);
  std::cout << "k: " << cc.k << "\n"
            << "s: " << cc.s << "\n"
            << "beta: " << beta(cc.k, eps, delta) << "\n"
            << "num_colors: " << sp.num_colors << "\n"
            << "colors_used: " << sp.used_colors.size() << "\n"
            << "edges: " << hg.edges.size() << "\n"
            << "surviving: " << sp.surviving.size() << "\n"
            << "survival_fraction: " << sp.survival_fraction(hg.edges.size()) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic packing integer programs with queries"};
  app.require_subcommand(1);

  std::string file;
  auto* validate = app.add_subcommand("validate", "Check an instance file's assumptions");
  validate->add_option("file", file, "Instance file")->required();

  std::string kind, out;
  std::vector<std::string> params;
  uint64_t seed = 1;
  int64_t c_minus = 0, c_plus = 1;
  double p = 0.5;
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->add_option("kind", kind,
                  "bipartite, graph, k-hypergraph, matroid, k-cspip, generic, planted-bipartite, "
                  "explicit")
      ->required();
  gen->add_option("params", params, "key=value generator parameters");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("-o,--output", out, "Output file")->required();
  gen->add_option("--c-minus", c_minus, "Lower objective bound for every item");
  gen->add_option("--c-plus", c_plus, "Upper objective bound for every item");
  gen->add_option("--p", p, "Probability of the upper value");

  std::string spec_path;
  std::optional<std::string> summary_path;
  std::optional<size_t> workers;
  auto* run = app.add_subcommand("run", "Run an experiment spec");
  run->add_option("spec", spec_path, "Experiment spec file")->required();
  run->add_option("-o,--output", out, "CSV output")->required();
  run->add_option("--summary", summary_path, "Summary output");
  run->add_option("--workers", workers, "Worker threads (overrides STOCHPACK_WORKERS)");
  auto* sweep = app.add_subcommand("sweep", "Run an experiment spec over its T grid");
  sweep->add_option("spec", spec_path, "Experiment spec file")->required();
  sweep->add_option("-o,--output", out, "CSV output")->required();
  sweep->add_option("--summary", summary_path, "Summary output");
  sweep->add_option("--workers", workers, "Worker threads (overrides STOCHPACK_WORKERS)");

  std::string mu = "1", eps_text = "0.25", mode = "tdi", gamma = "1";
  std::optional<std::string> dump;
  auto* witness = app.add_subcommand("witness", "Enumerate a witness cover for the instance's b");
  witness->add_option("file", file, "Instance file")->required();
  witness->add_option("--mu", mu, "Target value (rational)");
  witness->add_option("--epsilon", eps_text, "Accuracy (rational)");
  witness->add_option("--mode", mode, "tdi or sparse");
  witness->add_option("--gamma", gamma, "Sparsity parameter for sparse mode");
  witness->add_option("--dump", dump, "Write the members as CSV");

  std::optional<size_t> k;
  double eps = 0.5, delta = 0.5;
  std::optional<int64_t> s;
  std::optional<uint64_t> colors;
  auto* sparse = app.add_subcommand("sparsify", "Colour-code an instance and report survivors");
  sparse->add_option("file", file, "Instance file")->required();
  sparse->add_option("--k", k, "Hyperedge size (defaults to the instance's)");
  sparse->add_option("--epsilon", eps, "Accuracy");
  sparse->add_option("--delta", delta, "Failure probability");
  sparse->add_option("--seed", seed, "Colouring seed");
  sparse->add_option("--s", s, "Rank bound (defaults to the cardinality relaxation)");
  sparse->add_option("--colors", colors, "Override the number of colours");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(file);
    if (*gen) return cmd_gen(kind, params, seed, out, c_minus, c_plus, p);
    if (*run) return cmd_run(spec_path, out, summary_path, workers, false);
    if (*sweep) return cmd_run(spec_path, out, summary_path, workers, true);
    if (*witness) return cmd_witness(file, mu, eps_text, mode, gamma, dump);
    if (*sparse) return cmd_sparsify(file, k, eps, delta, seed, s, colors);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const StructuralError& e) {
    std::cerr << "structural error: " << e.what() << "\n";
    return kStructural;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
