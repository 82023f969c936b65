// Copyright 2026 The PixelVeil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Batch CLI for differentially private image and vector obfuscation.
// Exit codes: 0 success, 1 runtime/I-O failure, 2 usage error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pixelveil/pixelveil.hpp"

namespace pv = pixelveil;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int env_threads() {
  const char* value = std::getenv("PIXELVEIL_THREADS");
  if (!value) return 0;
  const int threads = std::atoi(value);
  return threads > 0 ? threads : 0;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json ledger_json(const pv::BudgetLedger& ledger, double epsilon) {
  return json{{"mechanism", "exponential"},
              {"epsilon", epsilon},
              {"applications", ledger.applications},
              {"eps_prime", ledger.eps_prime},
              {"remainder_values", ledger.remainder_values},
              {"eps_per_remainder_value", ledger.eps_per_remainder_value},
              {"eps_exponential", ledger.eps_exponential},
              {"eps_remainder", ledger.eps_remainder},
              {"total", ledger.total()}};
}

struct ObfuscateArgs {
  std::string mechanism;
  double epsilon = 0.0;
  int pixelize = 1;
  int window = 3;
  int levels = 4;
  std::int64_t sensitive_pixels = 0;
  bool blur = false;
  std::uint64_t seed = 0;
  std::string input;
  std::string output;
};

int run_obfuscate(const ObfuscateArgs& args) {
  if (!(args.epsilon > 0.0)) throw UsageError("--epsilon must be > 0");
  if (args.pixelize < 1) throw UsageError("--pixelize must be >= 1");
  if (args.window < 1) throw UsageError("--window must be >= 1");
  if (args.levels < 2 || args.levels > 256) throw UsageError("--levels must be in [2, 256]");
  if (args.sensitive_pixels < 0) throw UsageError("--sensitive-pixels must be >= 0");

  pv::PixelMechanismConfig cfg;
  cfg.epsilon = args.epsilon;
  cfg.b = args.pixelize;
  cfg.p = args.window;
  cfg.k_prime = args.levels;
  cfg.sensitive_window = args.sensitive_pixels;
  cfg.blur = args.blur;
  cfg.seed = args.seed;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--window/--levels: ") + e.what());
  }

  const pv::Image input = pv::load_image(args.input);
  if (args.mechanism == "laplace") {
    const pv::Image output = pv::laplace_pixel_obfuscate(input, cfg);
    pv::save_image(output, args.output);
    const json summary{{"mechanism", "laplace"},
                       {"epsilon", cfg.epsilon},
                       {"scale", pv::laplace_scale(cfg, input.channels, input.pixels_per_channel())},
                       {"values", pv::block_means(input, cfg.b).means.size()},
                       {"total", cfg.epsilon}};
    std::cout << summary.dump() << "\n";
  } else {
    const pv::ObfuscationResult result = pv::exponential_obfuscate(input, cfg, env_threads());
    pv::save_image(result.image, args.output);
    std::cout << ledger_json(result.ledger, cfg.epsilon).dump() << "\n";
  }
  return kExitOk;
}

int run_metrics(bool want_ssim, bool want_mse, const std::string& path_a,
                const std::string& path_b) {
  const pv::Image a = pv::load_image(path_a);
  const pv::Image b = pv::load_image(path_b);
  if (!a.same_shape(b))
    throw std::runtime_error("image dimensions differ: " + std::to_string(a.width) + "x" +
                             std::to_string(a.height) + "x" + std::to_string(a.channels) +
                             " vs " + std::to_string(b.width) + "x" + std::to_string(b.height) +
                             "x" + std::to_string(b.channels));
  json out;
  if (want_ssim) out["ssim"] = pv::ssim_full(a, b);
  if (want_mse) out["mse"] = pv::mse(a, b);
  std::cout << out.dump() << "\n";
  return kExitOk;
}

struct SweepArgs {
  std::vector<std::string> mechanisms{"exponential", "laplace"};
  std::vector<double> epsilons;
  std::vector<double> eps_log;  // min max count
  std::vector<int> pixelize{1};
  std::vector<int> blur_flags{0};
  int reps = 1;
  int window = 3;
  int levels = 4;
  std::uint64_t seed = 0;
  std::string out;
  std::vector<std::string> images;
};

int run_sweep_cmd(const SweepArgs& args) {
  pv::SweepSpec spec;
  spec.images = args.images;
  spec.mechanisms.clear();
  for (const std::string& name : args.mechanisms) {
    try {
      spec.mechanisms.push_back(pv::mechanism_from_string(name));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--mechanisms: ") + e.what());
    }
  }
  spec.epsilons = args.epsilons;
  if (!args.eps_log.empty()) {
    if (args.eps_log.size() != 3 || !(args.eps_log[0] > 0.0) ||
        !(args.eps_log[1] >= args.eps_log[0]) || args.eps_log[2] < 2)
      throw UsageError("--eps-log expects MIN MAX COUNT with 0 < MIN <= MAX and COUNT >= 2");
    const double lo = std::log10(args.eps_log[0]);
    const double hi = std::log10(args.eps_log[1]);
    const int count = static_cast<int>(args.eps_log[2]);
    for (int i = 0; i < count; ++i)
      spec.epsilons.push_back(std::pow(10.0, lo + (hi - lo) * i / (count - 1)));
  }
  spec.pixelizations = args.pixelize;
  spec.blur_flags.clear();
  for (int flag : args.blur_flags) spec.blur_flags.push_back(flag != 0);
  spec.repetitions = args.reps;
  spec.seed = args.seed;
  spec.p = args.window;
  spec.k_prime = args.levels;
  spec.threads = env_threads();
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const std::vector<pv::SweepRecord> records = pv::run_sweep(spec);
  std::ofstream csv(args.out);
  if (!csv) throw std::runtime_error("cannot write CSV file: " + args.out);
  pv::write_sweep_csv(records, csv);
  if (!csv) throw std::runtime_error("failed to write CSV file: " + args.out);

  std::size_t failed = 0;
  for (const pv::SweepRecord& record : records)
    if (!record.ok) ++failed;
  if (failed > 0) {
    std::cerr << "sweep: " << failed << " of " << records.size() << " cells failed\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int run_vector_obfuscate(double epsilon, std::uint64_t seed, const std::string& in,
                         const std::string& out) {
  if (!(epsilon > 0.0)) throw UsageError("--epsilon must be > 0");
  const pv::VectorSet input = pv::read_vector_set(in);
  pv::VectorSet output = input;
  const std::vector<pv::BoundedVector> vectors = input.bounded();
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const std::uint64_t vector_seed = seed ^ static_cast<std::uint64_t>(i);
    output.vectors[i] = pv::laplace_vector_obfuscate(vectors[i], epsilon, vector_seed).values;
  }
  pv::write_vector_set(output, out);

  // Interpretation aid: the guarantee bounds the output-density ratio of
  // two inputs at distance d by exp(epsilon * d).
  json bounds = json::array();
  for (double d : {0.001, 0.01, 0.1, 1.0})
    bounds.push_back(json{{"d", d}, {"bound", std::exp(epsilon * d)}});
  std::cout << json{{"epsilon", epsilon},
                    {"vectors", output.vectors.size()},
                    {"distance_bounds", bounds}}
                   .dump()
            << "\n";
  return kExitOk;
}

int run_vector_ksame(int k, const std::string& in, const std::string& out) {
  if (k < 1) throw UsageError("--k must be >= 1");
  const pv::VectorSet input = pv::read_vector_set(in);
  pv::VectorSet output = input;
  const std::vector<pv::BoundedVector> obfuscated = pv::ksame_obfuscate(input.bounded(), k);
  for (std::size_t i = 0; i < obfuscated.size(); ++i) output.vectors[i] = obfuscated[i].values;
  pv::write_vector_set(output, out);
  std::cout << json{{"k", k}, {"vectors", output.vectors.size()}}.dump() << "\n";
  return kExitOk;
}

int run_vector_attack(int k, const std::string& path_a, const std::string& path_b,
                      const std::string& ids_path) {
  if (k < 1) throw UsageError("--k must be >= 1");
  const pv::VectorSet gallery_a = pv::read_vector_set(path_a);
  const pv::VectorSet gallery_b = pv::read_vector_set(path_b);

  std::ifstream ids_in(ids_path);
  if (!ids_in) throw std::runtime_error("cannot open ids file: " + ids_path);
  json ids_doc;
  try {
    ids_in >> ids_doc;
  } catch (const json::exception& e) {
    throw pv::SchemaError(std::string("ids file: invalid JSON: ") + e.what());
  }
  if (!ids_doc.is_array() || ids_doc.empty())
    throw pv::SchemaError("ids file: top-level value must be a non-empty array of identity ids");
  std::vector<std::string> shared;
  for (const auto& id : ids_doc) {
    if (!id.is_string()) throw pv::SchemaError("ids file: ids must be strings");
    shared.push_back(id.get<std::string>());
  }

  const pv::IntersectionReport report = pv::intersection_attack(
      pv::ksame_cluster(gallery_a.bounded(), k), gallery_a.effective_ids(),
      pv::ksame_cluster(gallery_b.bounded(), k), gallery_b.effective_ids(), shared);
  std::cout << json{{"min", report.min}, {"mean", report.mean}, {"violations", report.violations}}
                   .dump()
            << "\n";
  return kExitOk;
}

int run_approx(const std::string& gallery_path, const std::string& target_path,
               const std::string& out) {
  const pv::VectorSet gallery = pv::read_vector_set(gallery_path);
  const pv::VectorSet target = pv::read_vector_set(target_path);
  if (target.vectors.size() != 1)
    throw pv::SchemaError(
        "vector file: field 'vectors' of the target must hold exactly one vector");

  const pv::IdentityApproximation approx =
      pv::approximate_identity(gallery.vectors, target.vectors.front());
  const json result{{"weights", approx.weights},
                    {"objective", approx.objective},
                    {"status", pv::to_string(approx.status)},
                    {"synthesized", approx.synthesized}};
  std::ofstream file(out);
  if (!file) throw std::runtime_error("cannot write output file: " + out);
  file << result.dump(2) << "\n";
  std::cout << result.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private image and vector obfuscation"};
  app.require_subcommand(1);

  ObfuscateArgs ob;
  CLI::App* obfuscate = app.add_subcommand("obfuscate", "Obfuscate one image");
  obfuscate->add_option("--mechanism", ob.mechanism, "exp|laplace")
      ->required()
      ->check(CLI::IsMember({"exp", "exponential", "laplace"}));
  obfuscate->add_option("--epsilon", ob.epsilon, "total privacy budget")->required();
  obfuscate->add_option("--pixelize", ob.pixelize, "pixelization block side");
  obfuscate->add_flag("--blur", ob.blur, "Gaussian blur post-processing");
  obfuscate->add_option("--window", ob.window, "exponential window side p");
  obfuscate->add_option("--levels", ob.levels, "candidate intensity levels k'");
  obfuscate->add_option("--sensitive-pixels", ob.sensitive_pixels,
                        "Laplace adjacency pixel count (default: all pixels per channel)");
  obfuscate->add_option("--seed", ob.seed, "RNG seed")->required();
  obfuscate->add_option("input", ob.input, "input image")->required();
  obfuscate->add_option("output", ob.output, "output image")->required();

  bool want_ssim = false, want_mse = false;
  std::string metrics_a, metrics_b;
  CLI::App* metrics = app.add_subcommand("metrics", "Compare two images");
  metrics->add_flag("--ssim", want_ssim, "structural similarity");
  metrics->add_flag("--mse", want_mse, "mean squared error");
  metrics->add_option("a", metrics_a, "first image")->required();
  metrics->add_option("b", metrics_b, "second image")->required();

  SweepArgs sw;
  CLI::App* sweep = app.add_subcommand("sweep", "Run an experiment grid, write CSV");
  sweep->add_option("--mechanisms", sw.mechanisms, "mechanisms to sweep");
  sweep->add_option("--epsilons", sw.epsilons, "explicit privacy budgets");
  sweep->add_option("--eps-log", sw.eps_log, "log-spaced budgets: MIN MAX COUNT")->expected(3);
  sweep->add_option("--pixelize", sw.pixelize, "pixelization block sides");
  sweep->add_option("--blur-flags", sw.blur_flags, "blur settings (0/1)");
  sweep->add_option("--reps", sw.reps, "repetitions per configuration");
  sweep->add_option("--window", sw.window, "exponential window side p");
  sweep->add_option("--levels", sw.levels, "candidate intensity levels k'");
  sweep->add_option("--seed", sw.seed, "RNG seed")->required();
  sweep->add_option("--out", sw.out, "output CSV path")->required();
  sweep->add_option("images", sw.images, "input images")->required();

  CLI::App* vector_cmd = app.add_subcommand("vector", "Bounded-vector mechanisms");
  vector_cmd->require_subcommand(1);

  double vec_epsilon = 0.0;
  std::uint64_t vec_seed = 0;
  std::string vec_in, vec_out;
  CLI::App* vec_ob = vector_cmd->add_subcommand("obfuscate", "Laplace mechanism on vectors");
  vec_ob->add_option("--epsilon", vec_epsilon, "privacy budget")->required();
  vec_ob->add_option("--seed", vec_seed, "RNG seed")->required();
  vec_ob->add_option("input", vec_in, "input vector JSON")->required();
  vec_ob->add_option("output", vec_out, "output vector JSON")->required();

  int ksame_k = 0;
  std::string ksame_in, ksame_out;
  CLI::App* vec_ksame = vector_cmd->add_subcommand("ksame", "k-same cluster averaging");
  vec_ksame->add_option("--k", ksame_k, "minimum cluster size")->required();
  vec_ksame->add_option("input", ksame_in, "input vector JSON")->required();
  vec_ksame->add_option("output", ksame_out, "output vector JSON")->required();

  int attack_k = 0;
  std::string attack_a, attack_b, attack_ids;
  CLI::App* vec_attack = vector_cmd->add_subcommand("attack", "Intersection attack demo");
  vec_attack->add_option("--k", attack_k, "cluster size used in both releases")->required();
  vec_attack->add_option("a", attack_a, "first gallery JSON")->required();
  vec_attack->add_option("b", attack_b, "second gallery JSON")->required();
  vec_attack->add_option("ids", attack_ids, "JSON array of shared identity ids")->required();

  std::string approx_gallery, approx_target, approx_out;
  CLI::App* approx = app.add_subcommand("approx", "Least-absolute-deviations identity fit");
  approx->add_option("--gallery", approx_gallery, "gallery vector JSON")->required();
  approx->add_option("--target", approx_target, "target vector JSON")->required();
  approx->add_option("output", approx_out, "output JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*obfuscate) return run_obfuscate(ob);
    if (*metrics) {
      if (!want_ssim && !want_mse) throw UsageError("pass --ssim and/or --mse");
      return run_metrics(want_ssim, want_mse, metrics_a, metrics_b);
    }
    if (*sweep) return run_sweep_cmd(sw);
    if (*vec_ob) return run_vector_obfuscate(vec_epsilon, vec_seed, vec_in, vec_out);
    if (*vec_ksame) return run_vector_ksame(ksame_k, ksame_in, ksame_out);
    if (*vec_attack) return run_vector_attack(attack_k, attack_a, attack_b, attack_ids);
    if (*approx) return run_approx(approx_gallery, approx_target, approx_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pv::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
