#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dnfl/harness.hpp"
#include "dnfl/recovery.hpp"
#include "dnfl/spectrum.hpp"

namespace fs = std::filesystem;
using namespace dnfl;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

fs::path out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("DNFL_OUT_DIR")) return env;
  return ".";
}

std::optional<std::vector<double>> parse_mu(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_reals(s);
}

/// Flags first, then the config file on top.
ExperimentSpec resolve(const ExperimentSpec& flags, const std::string& config) {
  if (config.empty()) {
    ExperimentSpec s = flags;
    s.config.s = s.s;
    s.config.seed = s.seed;
    return s;
  }
  auto j = to_json(flags);
  j.merge_patch(nlohmann::json::parse(slurp(config)));
  return spec_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn DNF and PTFs from heavy low-degree Fourier coefficients"};
  app.require_subcommand(1);

  ExperimentSpec flags;
  std::string config, out, backend = "exact", construct_backend;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", flags.seed, "master seed");
    cmd->add_option("--out", out, "output directory (default $DNFL_OUT_DIR or .)");
    cmd->add_option("--config", config, "JSON spec; its keys override flags");
  };

  std::string in_path, mu_text;
  std::optional<int> degree;
  auto* transform = app.add_subcommand("transform", "exact spectrum of a function file");
  transform->add_option("--in", in_path, "DNF or truth-table file")->required();
  transform->add_option("--mu", mu_text, "comma-separated means; parity basis if absent");
  transform->add_option("--degree", degree, "keep degree <= d");
  std::string out_file;
  transform->add_option("--out", out_file, "spectrum file (stdout if absent)");

  auto* learn = app.add_subcommand("learn", "run a learner over seeded instances");
  add_common(learn);
  learn->add_option("--learner", flags.learner, "mq | smoothed | mdnf-uniform | mdnf-prod");
  learn->add_option("--n", flags.n);
  learn->add_option("--s", flags.s);
  learn->add_option("--max-len", flags.max_len);
  learn->add_flag("--monotone", flags.monotone);
  learn->add_option("--count", flags.count);
  learn->add_option("--target", flags.target, "fixed DNF, e.g. 'n=4; 0&1|2'");
  learn->add_option("--epsilon", flags.config.epsilon);
  learn->add_option("--delta", flags.config.delta);
  learn->add_option("--c", flags.config.c, "boundedness constant");
  learn->add_option("--dist", flags.dist.mode, "uniform | explicit | smoothed");
  learn->add_option("--smooth-c", flags.dist.c, "perturbation radius");
  learn->add_option("--backend", backend, "exact | sampled");
  learn->add_option("--construct-backend", construct_backend, "exact | sampled");
  learn->add_option("--error-mode", flags.error_mode, "exact | sampled");

  auto* verify = app.add_subcommand("verify-bounds", "exact bound verification sweep");
  add_common(verify);
  verify->add_option("--count", flags.bounds.count);
  verify->add_option("--n", flags.bounds.n);
  verify->add_option("--s", flags.bounds.s);
  verify->add_option("--eps", flags.bounds.eps);

  auto* gen = app.add_subcommand("gen", "seeded random DNF instances");
  add_common(gen);
  gen->add_option("--n", flags.n);
  gen->add_option("--s", flags.s);
  gen->add_option("--max-len", flags.max_len);
  gen->add_flag("--monotone", flags.monotone);
  gen->add_option("--count", flags.count);

  std::string chain_path;
  std::optional<std::uint64_t> samples;
  std::uint64_t eval_seed = 0;
  auto* eval = app.add_subcommand("eval", "error of a chain hypothesis against a function");
  eval->add_option("--function", in_path, "DNF or truth-table file")->required();
  eval->add_option("--chain", chain_path, "chain file")->required();
  eval->add_option("--mu", mu_text);
  eval->add_option("--samples", samples, "sampled estimate with N points");
  eval->add_option("--seed", eval_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    flags.config.backend = parse_backend(backend);
    flags.config.construct_backend =
        construct_backend.empty() ? flags.config.backend : parse_backend(construct_backend);

    if (transform->parsed()) {
      const auto text = cmd_transform(slurp(in_path), parse_mu(mu_text), degree);
      if (out_file.empty()) {
        std::cout << text;
      } else {
        spit(out_file, text);
      }
    } else if (learn->parsed()) {
      flags.command = "learn";
      const auto spec = resolve(flags, config);
      const auto result = cmd_learn(spec);
      const auto dir = out_dir(out);
      spit(dir / "manifest.json", result.manifest.dump(2) + "\n");
      for (std::size_t k = 0; k < result.hypotheses.size(); ++k) {
        spit(dir / ("hypothesis_" + std::to_string(k) + ".chain"), result.hypotheses[k]);
      }
      std::cout << "successes " << result.successes << "/" << spec.count << " (error <= "
                << spec.config.epsilon << "), manifest in " << (dir / "manifest.json") << "\n";
    } else if (verify->parsed()) {
      flags.command = "verify-bounds";
      const auto spec = resolve(flags, config);
      const auto reports = cmd_verify_bounds(spec.bounds, spec.seed);
      const auto dir = out_dir(out);
      spit(dir / "bounds.csv", bounds_csv(reports));
      int failed = 0;
      for (const auto& r : reports) failed += !r.passed();
      std::cout << reports.size() << " bound checks, " << failed << " failed\n";
      if (failed) return 1;
    } else if (gen->parsed()) {
      flags.command = "gen";
      const auto spec = resolve(flags, config);
      std::string text;
      for (const auto& line : cmd_gen(spec)) text += line + "\n";
      spit(out_dir(out) / "instances.txt", text);
      std::cout << text;
    } else if (eval->parsed()) {
      const auto e = cmd_eval(slurp(in_path), slurp(chain_path), parse_mu(mu_text), samples,
                              eval_seed);
      std::cout << "error " << format_real(e.error);
      if (!e.exact) std::cout << " +- " << format_real(e.band);
      std::cout << "\n";
    }
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
