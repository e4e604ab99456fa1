#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "dnfl/harness.hpp"
#include "dnfl/spectrum.hpp"

using namespace dnfl;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> body_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

json strip_times(json m) {
  for (auto& t : m["trials"]) t.erase("wall_time_s");
  return m;
}

}  // namespace

TEST_CASE("spec json round trip") {
  ExperimentSpec spec;
  spec.learner = "mdnf-prod";
  spec.n = 9;
  spec.monotone = true;
  spec.dist.mode = "explicit";
  spec.dist.mu = std::vector<double>(9, 0.1);
  spec.config.epsilon = 0.2;
  spec.config.c = 0.5;
  spec.config.backend = Backend::sampled;
  spec.bounds.cs = {1.0};
  spec.seed = 42;
  const auto back = spec_from_json(to_json(spec));
  CHECK(to_json(back) == to_json(spec));
  CHECK(back.config.seed == 42);

  auto j = to_json(spec);
  j["colour"] = "red";
  CHECK_THROWS(spec_from_json(j));
  auto k = to_json(spec);
  k["config"]["speed"] = 1;
  CHECK_THROWS(spec_from_json(k));
}

TEST_CASE("invalid c is rejected before any work") {
  auto j = to_json(ExperimentSpec{});
  j["config"]["c"] = 1.5;
  const auto spec = spec_from_json(j);
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  CHECK_THROWS_AS(cmd_learn(spec), std::invalid_argument);
}

TEST_CASE("trial seeds follow the splitting rule") {
  CHECK(trial_seed(9, 3, SeedStream::oracle) == split_seed(split_seed(9, 3), 4));
  CHECK(trial_seed(9, 3, SeedStream::target) != trial_seed(9, 4, SeedStream::target));
}

TEST_CASE("transform of OR") {
  const auto out = cmd_transform(slurp(DNFL_DATA_DIR "/or2.dnf"), std::nullopt, std::nullopt);
  CHECK(body_lines(out).size() == 4);
  const auto s = read_spectrum(out);
  CHECK(s[0b00] == 0.5);
  CHECK(s[0b01] == 0.5);
  CHECK(s[0b10] == 0.5);
  CHECK(s[0b11] == -0.5);

  const auto mu_out = cmd_transform("n=2; 0|1", std::vector<double>{0.2, -0.2}, 1);
  const auto m = read_spectrum(mu_out);
  CHECK(m.basis().has_value());
  for (const auto& [a, c] : m.entries()) CHECK(popcount(a) <= 1);
}

TEST_CASE("transform of a parity and the truth table round trip") {
  std::vector<double> chi(16);
  for (Mask x = 0; x < 16; ++x) chi[x] = parity(0b1010, x);
  const auto text = write_truth_table(chi);
  const auto out = cmd_transform(text, std::nullopt, std::nullopt);
  REQUIRE(body_lines(out).size() == 1);
  CHECK(read_spectrum(out)[0b1010] == 1.0);

  const auto loaded = load_function(text);
  CHECK_FALSE(loaded.dnf.has_value());
  CHECK(tabulate(loaded.f) == chi);
  const auto back = inverse_fwht(fwht(chi));
  CHECK(back == chi);
  CHECK_THROWS(load_function("truth n=2\n1 -1 1\n"));
  CHECK_THROWS(load_function(""));
}

TEST_CASE("learn is reproducible and records error") {
  const auto spec = spec_from_json(json::parse(slurp(DNFL_DATA_DIR "/demo_mq.json")));
  const auto a = cmd_learn(spec);
  const auto b = cmd_learn(spec);
  CHECK(strip_times(a.manifest) == strip_times(b.manifest));
  CHECK(a.hypotheses == b.hypotheses);
  REQUIRE(a.manifest["trials"].size() == 2);
  for (const auto& t : a.manifest["trials"]) {
    CHECK(t["error"].get<double>() <= 0.15);
    CHECK(t["error_exact"].get<bool>());
  }
  CHECK(a.successes == 2);
  CHECK(a.manifest.contains("seed_rule"));
}

TEST_CASE("random targets and monotone learners through the harness") {
  ExperimentSpec spec;
  spec.learner = "mdnf-uniform";
  spec.n = 10;
  spec.s = 2;
  spec.monotone = true;
  spec.count = 2;
  spec.config.epsilon = 0.2;
  spec.seed = 3;
  const auto out = cmd_learn(spec);
  for (const auto& t : out.manifest["trials"]) {
    CHECK(t.contains("variables"));
    CHECK(t["kappa"].size() == 10);
  }
  spec.monotone = false;
  spec.target = "n=10; 0&!1";
  CHECK_THROWS(cmd_learn(spec));

  const auto gen = cmd_gen(spec);
  CHECK(gen.size() == 2);
}

TEST_CASE("bound sweeps") {
  BoundSweep sweep;
  sweep.count = 12;
  const auto reports = cmd_verify_bounds(sweep, 1);
  CHECK(reports.size() >= 12);
  for (const auto& r : reports) CHECK(r.passed());
  const auto csv = bounds_csv(reports);
  CHECK(csv.rfind(bound_csv_header(), 0) == 0);

  BoundSweep empty;
  empty.count = 0;
  const auto none = cmd_verify_bounds(empty, 1);
  CHECK(none.empty());
  CHECK(bounds_csv(none) == bound_csv_header() + "\n");
}

TEST_CASE("eval of a chain file") {
  const auto spec = spec_from_json(json::parse(slurp(DNFL_DATA_DIR "/demo_mq.json")));
  const auto out = cmd_learn(spec);
  const auto& t0 = out.manifest["trials"][0];
  const auto mu = t0["mu"].get<std::vector<double>>();
  const auto e = cmd_eval(spec.target, out.hypotheses[0], mu, std::nullopt, 0);
  CHECK(e.error == doctest::Approx(t0["error"].get<double>()));
  const auto s = cmd_eval(spec.target, out.hypotheses[0], mu, 20000, 1);
  CHECK(std::abs(s.error - e.error) <= s.band);
}
