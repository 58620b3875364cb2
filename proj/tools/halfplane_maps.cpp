// halfplane-maps: samplers, exhaustive verifications and the experiment
// registry from the command line.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "halfplane/ball_sampler.hpp"
#include "halfplane/experiments.hpp"
#include "halfplane/harness.hpp"
#include "halfplane/laws.hpp"
#include "halfplane/oracle.hpp"
#include "halfplane/pruning.hpp"
#include "halfplane/schaeffer.hpp"
#include "halfplane/treed_bridge.hpp"

using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  long replicas = 0;
  int threads = 1;
  std::string out;
  std::string format = "jsonl";
};

// Records or raw JSON lines go to --out, or stdout.
class Sink {
 public:
  explicit Sink(const Globals& g) : format_(hpq::parse_format(g.format)) {
    if (!g.out.empty()) {
      file_.open(g.out);
      if (!file_) throw std::runtime_error("cannot write " + g.out);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void records(const std::vector<hpq::ExperimentRecord>& r) { hpq::emit(r, format_, stream()); }
  void line(const json& j) { stream() << j.dump() << '\n'; }

 private:
  hpq::OutputFormat format_;
  std::ofstream file_;
};

json map_summary(const hpq::PlanarMap& m) {
  return {{"vertices", m.vertex_count()}, {"edges", m.edge_count()}, {"area", m.area()}, {"perimeter", m.perimeter()}};
}

// name=value pairs; values are parsed as JSON when possible.
json parse_params(const std::vector<std::string>& pairs, const std::string& inline_json) {
  json params = inline_json.empty() ? json::object() : json::parse(inline_json);
  for (const auto& kv : pairs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("parameter needs name=value: " + kv);
    const std::string value = kv.substr(eq + 1);
    json v = json::parse(value, nullptr, false);
    params[kv.substr(0, eq)] = v.is_discarded() ? json(value) : v;
  }
  return params;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random quadrangulations of the half-plane: samplers, exact checks and experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--replicas", g.replicas, "replica count (0: experiment default)");
  app.add_option("--threads", g.threads, "worker threads (0: all cores)");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));

  // ---- sample ----
  auto* sample = app.add_subcommand("sample", "draw random objects");
  sample->require_subcommand(1);
  long count = 1;
  int half_perimeter = -1;
  bool full = false;
  auto* boltzmann = sample->add_subcommand("boltzmann", "free Boltzmann quadrangulations, or BQ_p with --half-perimeter");
  boltzmann->add_option("--count", count, "number of maps")->check(CLI::PositiveNumber);
  boltzmann->add_option("--half-perimeter", half_perimeter, "fix the half-perimeter p");
  boltzmann->add_flag("--full", full, "print the half-edge tables");
  int radius = 4;
  auto* ball = sample->add_subcommand("ball", "radius-r balls of the half-plane quadrangulation");
  ball->add_option("--radius", radius, "ball radius")->check(CLI::PositiveNumber);
  ball->add_option("--count", count, "number of balls")->check(CLI::PositiveNumber);
  ball->add_flag("--full", full, "print the half-edge tables");
  long window = 1000;
  auto* simple = sample->add_subcommand("simple-boundary", "simple core of the half-plane boundary");
  simple->add_option("--window", window, "boundary positions")->check(CLI::PositiveNumber);
  simple->add_option("--count", count, "number of samples")->check(CLI::PositiveNumber);

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "exhaustive and exact checks");
  verify->require_subcommand(1);
  int max_total = 5;
  auto* vbij = verify->add_subcommand("bijection", "Phi on every positive treed bridge with n + p <= max");
  vbij->add_option("--max", max_total, "bound on n + p")->check(CLI::Range(1, hpq::default_bridge_bound));
  auto* vid = verify->add_subcommand("identities", "exact walk and bridge identities");
  int max_edges = hpq::default_tree_bound;
  auto* vsums = verify->add_subcommand("sums", "truncated partition sums of the tree measures");
  vsums->add_option("--max-edges", max_edges, "truncation")->check(CLI::Range(0, hpq::default_tree_bound));

  // ---- experiment ----
  auto* experiment = app.add_subcommand("experiment", "run a registered experiment");
  std::string name;
  std::vector<std::string> param_pairs;
  std::string param_json;
  bool list = false;
  experiment->add_option("name", name, "experiment name");
  experiment->add_option("--param,-p", param_pairs, "parameter override name=value");
  experiment->add_option("--params", param_json, "parameter overrides as a JSON object");
  experiment->add_flag("--list", list, "list experiments with their defaults");

  CLI11_PARSE(app, argc, argv);
  if (g.threads <= 0) g.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  try {
    Sink sink(g);
    if (*sample) {
      if (*boltzmann) {
        const hpq::FreeBoltzmannSampler free_sampler;
        const hpq::ConditionedBridgeSampler bridges(std::max(1, half_perimeter));
        for (long r = 0; r < count; ++r) {
          hpq::Rng rng(g.seed, static_cast<std::uint64_t>(r), "sample/boltzmann");
          hpq::PlanarMap m = half_perimeter > 0 ? hpq::phi_positive(hpq::sample_B_p(half_perimeter, bridges, rng)).map
                             : half_perimeter == 0 ? hpq::PlanarMap{}
                                                   : free_sampler.sample(rng);
          json j = map_summary(m);
          j["replica"] = r;
          if (full) j["map"] = hpq::map_to_json(m);
          sink.line(j);
        }
      } else if (*ball) {
        for (long r = 0; r < count; ++r) {
          hpq::Rng rng(g.seed, static_cast<std::uint64_t>(r), "sample/ball");
          const auto lb = hpq::sample_uihpq_ball(radius, 1e-9, rng);
          json j = map_summary(lb.ball.map);
          j["replica"] = r;
          j["radius"] = radius;
          j["residual_risk"] = lb.ball.residual_risk;
          if (full) j["map"] = hpq::map_to_json(lb.ball.map);
          sink.line(j);
        }
      } else if (*simple) {
        for (long r = 0; r < count; ++r) {
          hpq::Rng rng(g.seed, static_cast<std::uint64_t>(r), "sample/simple-boundary");
          const auto s = hpq::sample_simple_boundary(window, rng);
          sink.line({{"replica", r},
                     {"window", window},
                     {"survivors", s.survivors},
                     {"labels", s.labels},
                     {"residual_risk", s.residual_risk},
                     {"capped", s.capped}});
        }
      }
      return 0;
    }

    if (*verify) {
      bool ok = true;
      std::vector<hpq::ExperimentRecord> records;
      hpq::ExperimentConfig cfg;
      cfg.seed = g.seed;
      cfg.threads = g.threads;
      if (*vbij) {
        cfg.params = {{"max", max_total}, {"sums", false}};
        records = hpq::run_experiment("bijection", cfg);
        for (const auto& r : records) {
          const bool row_ok = r.params.at("ok").get<bool>() && r.estimate == *r.theory;
          if (!row_ok) std::cerr << "bijection check failed: " << r.params.dump() << '\n';
          ok = ok && row_ok;
        }
      } else if (*vid) {
        records = hpq::run_experiment("identities", cfg);
        for (const auto& r : records) ok = ok && r.estimate == *r.theory;
      } else if (*vsums) {
        cfg.params = {{"max", 1}, {"sums", true}, {"max_edges", max_edges}};
        for (auto& r : hpq::run_experiment("bijection", cfg))
          if (r.quantity() == "truncated partition sum") records.push_back(std::move(r));
        for (const auto& r : records) ok = ok && r.params.at("ok").get<bool>();
      }
      sink.records(records);
      std::cerr << (ok ? "all checks passed" : "CHECK FAILED") << '\n';
      return ok ? 0 : 1;
    }

    if (*experiment) {
      if (list) {
        for (const auto& n : hpq::experiment_names())
          sink.line({{"name", n}, {"defaults", hpq::experiment_defaults(n)}});
        return 0;
      }
      if (name.empty()) throw std::invalid_argument("experiment name required (see --list)");
      hpq::ExperimentConfig cfg;
      cfg.seed = g.seed;
      cfg.replicas = g.replicas;
      cfg.threads = g.threads;
      cfg.params = parse_params(param_pairs, param_json);
      sink.records(hpq::run_experiment(name, cfg));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
