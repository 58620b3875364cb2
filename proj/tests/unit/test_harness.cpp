#include <sstream>
#include <stdexcept>

#include "doctest.h"

#include "halfplane/experiments.hpp"
#include "halfplane/harness.hpp"

using namespace hpq;
using nlohmann::json;

namespace {

ExperimentRecord example() {
  ExperimentRecord r;
  r.name = "bessel";
  r.params = {{"quantity", "E[X_n^2]/(5n), Monte Carlo"}, {"n", 100}};
  r.seed = 7;
  r.replicas = 10;
  r.estimate = 0.1 + 0.2;
  r.stderr_ = 1e-3;
  r.theory = 1.0;
  r.ref = "a, \"quoted\" reference";
  r.risk = 0;
  return r;
}

std::string run_text(const char* name, const ExperimentConfig& cfg, OutputFormat f = OutputFormat::jsonl) {
  std::ostringstream out;
  emit(run_experiment(name, cfg), f, out);
  return out.str();
}

}  // namespace

TEST_CASE("csv") {
  std::ostringstream empty;
  emit({}, OutputFormat::csv, empty);
  CHECK(empty.str() == std::string(csv_header) + "\n");
  CHECK(csv_header == "name,params,seed,replicas,estimate,stderr,theory,ref,risk");
  const std::vector<ExperimentRecord> one{example()};
  std::ostringstream out;
  emit(one, OutputFormat::csv, out);
  const auto text = out.str();
  CHECK(text.find("0.30000000000000004") != std::string::npos);
  CHECK(text.find("\"a, \"\"quoted\"\" reference\"") != std::string::npos);
}

TEST_CASE("jsonl round trip") {
  std::vector<ExperimentRecord> records{example(), example()};
  records[1].theory.reset();
  records[1].exact = true;
  std::stringstream io;
  emit(records, OutputFormat::jsonl, io);
  CHECK(parse_jsonl(io) == records);
  CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("unwritable output") {
  const std::vector<ExperimentRecord> one{example()};
  CHECK_THROWS_AS(emit(one, OutputFormat::jsonl, std::string("/nonexistent/dir/out.jsonl")), std::runtime_error);
}

TEST_CASE("replica runner is independent of the thread count") {
  auto body = [](long r, Moments& m) { m.add(static_cast<double>((r * 7919) % 1000) / 3.0); };
  const auto one = run_replicas<Moments>(1000, 1, body);
  const auto four = run_replicas<Moments>(1000, 4, body);
  CHECK(one.n == 1000);
  CHECK(one.sum == four.sum);
  CHECK(one.sum_sq == four.sum_sq);
  CHECK_THROWS(run_replicas<Moments>(200, 2, [](long r, Moments&) {
    if (r == 150) throw std::runtime_error("boom");
  }));
}

TEST_CASE("experiments are reproducible") {
  ExperimentConfig cfg;
  CHECK(run_text("identities", cfg) == run_text("identities", cfg));
  ExperimentConfig a;
  a.replicas = 300;
  a.params = {{"radii", {4, 8}}};
  a.threads = 1;
  ExperimentConfig b = a;
  b.threads = 3;
  CHECK(run_text("ball-volume", a) == run_text("ball-volume", b));
}

TEST_CASE("registry") {
  CHECK(experiment_names().size() == 12);
  for (const auto& n : experiment_names()) CHECK(experiment_defaults(n).contains("replicas"));
  ExperimentConfig cfg;
  CHECK_THROWS_AS(run_experiment("no-such-experiment", cfg), std::invalid_argument);
  cfg.params = {{"no_such_parameter", 1}};
  CHECK_THROWS_AS(run_experiment("identities", cfg), std::invalid_argument);
  cfg.params = {{"n_max", "many"}};
  CHECK_THROWS_AS(run_experiment("identities", cfg), std::invalid_argument);
}

TEST_CASE("statistics") {
  Moments m;
  for (double x : {1.0, 2.0, 3.0, 4.0}) m.add(x);
  CHECK(m.mean() == doctest::Approx(2.5));
  CHECK(m.variance() == doctest::Approx(5.0 / 3.0));
  CHECK(binomial_stderr(0.5, 100) == doctest::Approx(0.05));
  CHECK(chi_squared_sf(0.0, 3) == doctest::Approx(1.0));
  CHECK(chi_squared_sf(7.814727903, 3) == doctest::Approx(0.05).epsilon(1e-6));
  const std::vector<std::pair<long, long>> same{{100, 100}, {200, 200}, {5, 5}};
  const auto c = two_sample_chi_squared(same);
  CHECK(c.statistic == doctest::Approx(0.0));
  CHECK(c.df == 2);
  std::map<std::pair<int, int>, long> table{{{0, 0}, 500}, {{0, 1}, 500}, {{1, 0}, 500}, {{1, 1}, 500}};
  const auto ind = independence_chi_squared(table);
  CHECK(ind.df == 1);
  CHECK(ind.statistic == doctest::Approx(0.0));
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7}, e{0.1, 0.1, 0.1, 0.1};
  const auto s = least_squares_slope(x, y, e);
  CHECK(s.slope == doctest::Approx(2.0));
  CHECK(s.stderr_ == doctest::Approx(0.1 / std::sqrt(5.0)));
}
