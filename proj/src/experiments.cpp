#include "halfplane/experiments.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>

#include "halfplane/ball_sampler.hpp"
#include "halfplane/geodesics.hpp"
#include "halfplane/laws.hpp"
#include "halfplane/oracle.hpp"
#include "halfplane/pruning.hpp"
#include "halfplane/rng.hpp"
#include "halfplane/schaeffer.hpp"
#include "halfplane/treed_bridge.hpp"

namespace hpq {

using nlohmann::json;

namespace {

// Defaults merged with the caller's values; unknown keys and shape changes
// are configuration errors.
class Params {
 public:
  Params(std::string_view experiment, const json& defaults, const ExperimentConfig& cfg) : values_(defaults) {
    if (!cfg.params.is_object()) throw std::invalid_argument("experiment parameters must be an object");
    for (const auto& [k, v] : cfg.params.items()) {
      if (!values_.contains(k))
        throw std::invalid_argument("experiment " + std::string(experiment) + ": unknown parameter " + k);
      const json& d = values_[k];
      const bool ok = (d.is_number() && v.is_number()) || (d.is_boolean() && v.is_boolean()) ||
                      (d.is_array() && v.is_array()) || (d.is_string() && v.is_string());
      if (!ok) throw std::invalid_argument("experiment " + std::string(experiment) + ": bad value for " + k);
      values_[k] = v;
    }
    if (cfg.replicas > 0) values_["replicas"] = cfg.replicas;
    if (values_.value("replicas", 1L) <= 0) throw std::invalid_argument("replicas must be positive");
  }
  template <class T>
  T get(const char* key) const {
    return values_.at(key).get<T>();
  }
  long replicas() const { return values_.at("replicas").get<long>(); }

 private:
  json values_;
};

struct Context {
  std::string_view name;
  const ExperimentConfig& cfg;

  ExperimentRecord record(std::string quantity, json params, long replicas) const {
    ExperimentRecord r;
    r.name = std::string(name);
    r.params = std::move(params);
    r.params["quantity"] = std::move(quantity);
    r.seed = cfg.seed;
    r.replicas = replicas;
    return r;
  }
  ExperimentRecord exact(std::string quantity, json params, double value, std::optional<double> theory,
                         std::string ref) const {
    auto r = record(std::move(quantity), std::move(params), 1);
    r.estimate = value;
    r.exact = true;
    r.theory = theory;
    r.ref = std::move(ref);
    return r;
  }
  Rng stream(long replica, std::string_view tag) const {
    return Rng(cfg.seed, static_cast<std::uint64_t>(replica), tag);
  }
};

using Records = std::vector<ExperimentRecord>;

// ---- identities ---------------------------------------------------------------

Records identities(const Context& c, const Params& p) {
  Records out;
  const int n_max = p.get<int>("n_max"), p_max = p.get<int>("p_max");
  long holds = 0;
  for (int n = 1; n <= n_max; ++n) holds += w(n) == 8 * step_prob(n, Step::down) * step_prob(n - 1, Step::up);
  out.push_back(c.exact("w(n) = 8 p(n,n-1) p(n-1,n): cases holding", {{"n_max", n_max}}, holds, n_max,
                        "tree weight as a product of walk steps"));
  holds = 0;
  for (int j = 1; j <= n_max; ++j)
    holds += step_prob(j, Step::down) * c_poly(j) / c_poly(j - 1) == step_prob(j - 1, Step::up);
  out.push_back(c.exact("p(j,j-1) C(j)/C(j-1) = p(j-1,j): cases holding", {{"j_max", n_max}}, holds, n_max,
                        "telescoping identity of the boundary walk"));
  holds = 0;
  Rational eight_p = 1;
  for (int q = 1; q <= p_max; ++q) {
    eight_p *= 8;
    holds += bridge_kernel_exact(2 * q, 0, 0) == wc_coefficient(q) / eight_p;
  }
  out.push_back(c.exact("S^(2p)(0,0) = 8^-p [z^p] W_c: cases holding", {{"p_max", p_max}}, holds, p_max,
                        "return probability of the boundary walk"));
  return out;
}

// ---- bijection ----------------------------------------------------------------

Records bijection(const Context& c, const Params& p) {
  Records out;
  const int max = p.get<int>("max");
  for (int total = 1; total <= max; ++total)
    for (int pp = 1; pp <= total; ++pp) {
      const int n = total - pp;
      const auto rep = verify_bijection(n, pp);
      json params = {{"n", n},
                     {"p", pp},
                     {"unconstrained_count", rep.unconstrained_count},
                     {"injective", rep.injective},
                     {"sizes_ok", rep.sizes_ok},
                     {"labels_are_distances", rep.labels_are_distances},
                     {"count_identity", rep.count_identity},
                     {"brute_force", rep.brute_force},
                     {"ok", rep.ok()}};
      if (!rep.ok()) params["witness"] = rep.witness;
      out.push_back(c.exact("distinct images of TB+_{n,p}", std::move(params),
                            static_cast<double>(rep.distinct_images), static_cast<double>(rep.positive_count),
                            "bijection with quadrangulations of area n and perimeter 2p"));
    }
  if (p.get<bool>("sums")) {
    for (const auto& row : verify_partition_sums(p.get<int>("max_edges"))) {
      json params = {{"kind", row.kind == LabelKind::any ? "LT" : "LT+"},
                     {"root_label", row.root_label},
                     {"max_edges", row.max_edges},
                     {"upper", to_double(row.upper)},
                     {"partial_exact", to_string(row.partial)},
                     {"ok", row.ok()}};
      out.push_back(c.exact("truncated partition sum", std::move(params), to_double(row.partial),
                            to_double(row.target), row.kind == LabelKind::any ? "sum of Cat(n) 4^-n = 2" : "w(k)"));
    }
  }
  return out;
}

// ---- bessel -------------------------------------------------------------------

Records bessel(const Context& c, const Params& p) {
  const long n = p.get<long>("n");
  const long reps = p.replicas();
  const double scale = 5.0 * static_cast<double>(n);
  const auto m = run_replicas<Moments>(reps, c.cfg.threads, [&](long r, Moments& acc) {
    Rng rng = c.stream(r, "bessel");
    const double x = sample_walk(0, n, rng).back();
    acc.add(x * x / scale);
  });
  Records out;
  auto mc = c.record("E[X_n^2]/(5n), Monte Carlo", {{"n", n}}, reps);
  mc.estimate = m.mean();
  mc.stderr_ = m.stderr_of_mean();
  mc.theory = 1.0;
  mc.ref = "Bessel-5 scaling of the boundary walk";
  out.push_back(mc);
  out.push_back(c.exact("E[X_n^2]/(5n), exact", {{"n", n}}, walk_second_moment(n) / scale, 1.0,
                        "Bessel-5 scaling of the boundary walk"));
  return out;
}

// ---- contour moments -------------------------------------------------------------

struct ContourAcc {
  long windows = 0, invariant_ok = 0;
  Moments end_v2;  // V at the bridge vertex n, squared, over n
  double num = 0, den = 0, num2 = 0, den2 = 0, numden = 0;  // tree label increments
  void merge(const ContourAcc& o) {
    windows += o.windows;
    invariant_ok += o.invariant_ok;
    end_v2.merge(o.end_v2);
    num += o.num;
    den += o.den;
    num2 += o.num2;
    den2 += o.den2;
    numden += o.numden;
  }
};

Records contour_moments(const Context& c, const Params& p) {
  const long n = p.get<long>("n");
  const long reps = p.replicas();
  TreeSampleOptions opt;
  opt.max_vertices = p.get<std::size_t>("tree_cap");
  const auto acc = run_replicas<ContourAcc>(reps, c.cfg.threads, [&](long r, ContourAcc& a) {
    Rng rng = c.stream(r, "contour-moments");
    const TreedBridge tb = sample_B_pm_window(n, rng, opt);
    const auto corners = corner_walk(tb);
    const ContourPair cp = contour_processes(tb);
    bool ok = cp.C.size() == corners.size() && cp.V.size() == corners.size();
    double num = 0, den = 0;
    std::optional<int> end_label;
    for (std::size_t k = 0; ok && k < corners.size(); ++k) {
      const TbCorner& t = corners[k];
      if (k + 1 < corners.size() && std::abs(cp.C[k + 1] - cp.C[k]) != 1) ok = false;
      if (cp.C[k] != std::labs(t.position) + t.depth) ok = false;
      if (t.depth == 0) {
        if (cp.V[k] != tb.bridge.at(t.position)) ok = false;
        if (t.position == n) end_label = cp.V[k];
      } else {
        const double d = cp.V[k] - tb.bridge.at(t.position);
        num += d * d;
        den += 2.0 * t.depth / 3.0;
      }
    }
    ++a.windows;
    a.invariant_ok += ok && end_label.has_value();
    if (end_label) a.end_v2.add(static_cast<double>(*end_label) * *end_label / static_cast<double>(n));
    a.num += num;
    a.den += den;
    a.num2 += num * num;
    a.den2 += den * den;
    a.numden += num * den;
  });
  Records out;
  auto inv = c.record("contour invariants hold (unit steps of C, V = X on the bridge)", {{"n", n}}, reps);
  inv.estimate = static_cast<double>(acc.invariant_ok) / static_cast<double>(acc.windows);
  inv.stderr_ = binomial_stderr(inv.estimate, acc.windows);
  inv.theory = 1.0;
  inv.ref = "contour of a map with unit edges";
  out.push_back(inv);

  auto end = c.record("E[V(tau_n)^2]/n along the bridge", {{"n", n}}, reps);
  end.estimate = acc.end_v2.mean();
  end.stderr_ = acc.end_v2.stderr_of_mean();
  end.theory = 1.0;
  end.ref = "simple random walk bridge labels";
  out.push_back(end);

  // Ratio of sums, delta-method error over windows.
  const double w = static_cast<double>(acc.windows);
  const double ratio = acc.num / acc.den;
  const double var = (acc.num2 - 2 * ratio * acc.numden + ratio * ratio * acc.den2) / w;
  auto inc = c.record("sum (V - V_root)^2 / sum (2/3) depth over tree corners",
                      {{"n", n}, {"tree_cap", opt.max_vertices}}, reps);
  inc.estimate = ratio;
  inc.stderr_ = std::sqrt(std::max(0.0, var) / w) / (acc.den / w);
  inc.theory = 1.0;
  inc.ref = "label increments uniform on {-1,0,1} given the tree";
  out.push_back(inc);
  return out;
}

// ---- ball volume -------------------------------------------------------------------

struct VolumeAcc {
  Moments volume;
  double risk = 0, max_risk = 0;
  long capped = 0;
  void merge(const VolumeAcc& o) {
    volume.merge(o.volume);
    risk += o.risk;
    max_risk = std::max(max_risk, o.max_risk);
    capped += o.capped;
  }
};

Records ball_volume(const Context& c, const Params& p) {
  const auto radii = p.get<std::vector<int>>("radii");
  const double eps = p.get<double>("epsilon");
  const long reps = p.replicas();
  if (radii.size() < 2) throw std::invalid_argument("ball-volume: need at least two radii");
  Records out;
  std::vector<double> lx, ly, le;
  double total_risk = 0;
  for (int n : radii) {
    if (n < 1) throw std::invalid_argument("ball-volume: radii must be >= 1");
    BallSamplerOptions opt;
    opt.keep_corners = false;
    opt.level_cap = level_cap_for(n, eps);
    const auto acc = run_replicas<VolumeAcc>(reps, c.cfg.threads, [&](long r, VolumeAcc& a) {
      Rng rng = c.stream(r, "ball-volume/" + std::to_string(n));
      const auto bc = sample_ball_corners(n, rng, opt);
      a.volume.add(static_cast<double>(bc.volume));
      a.risk += bc.residual_risk;
      a.max_risk = std::max(a.max_risk, bc.residual_risk);
      a.capped += bc.capped;
    });
    const double n4 = std::pow(static_cast<double>(n), 4);
    auto rec = c.record("E[#ball_n]/n^4", {{"n", n}, {"max_risk_per_ball", acc.max_risk}, {"capped", acc.capped}},
                        reps);
    rec.estimate = acc.volume.mean() / n4;
    rec.stderr_ = acc.volume.stderr_of_mean() / n4;
    rec.theory = 1.0 / 12.0;
    rec.ref = "mean of the limiting ball-volume law";
    rec.risk = acc.risk;
    total_risk += acc.risk;
    out.push_back(rec);
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(acc.volume.mean()));
    le.push_back(acc.volume.stderr_of_mean() / acc.volume.mean());
  }
  const Slope s = least_squares_slope(lx, ly, le);
  auto rec = c.record("log-log slope of E[#ball_n]", {{"radii", radii}}, reps);
  rec.estimate = s.slope;
  rec.stderr_ = s.stderr_;
  rec.theory = 4.0;
  rec.ref = "ball volume grows like n^4";
  rec.risk = total_risk;
  out.push_back(rec);
  return out;
}

// ---- cut points -------------------------------------------------------------------

struct CountAcc {
  std::vector<long> hits;
  long total = 0;
  void merge(const CountAcc& o) {
    if (hits.size() < o.hits.size()) hits.resize(o.hits.size(), 0);
    for (std::size_t i = 0; i < o.hits.size(); ++i) hits[i] += o.hits[i];
    total += o.total;
  }
  void add(std::size_t i) {
    if (hits.size() <= i) hits.resize(i + 1, 0);
    ++hits[i];
  }
};

Records cutpoints(const Context& c, const Params& p) {
  const int k_max = p.get<int>("k_max");
  const long reps = p.replicas();
  const auto acc = run_replicas<CountAcc>(reps, c.cfg.threads, [&](long r, CountAcc& a) {
    Rng rng = c.stream(r, "cutpoints");
    const auto ind = cut_points(k_max, rng);
    ++a.total;
    a.hits.resize(static_cast<std::size_t>(k_max), 0);
    for (int k = 0; k < k_max; ++k) a.hits[k] += ind[k];
  });
  Records out;
  for (int k = 1; k <= k_max; ++k) {
    auto rec = c.record("P(leftmost label-k corner is the bridge vertex -k)", {{"k", k}}, reps);
    rec.estimate = static_cast<double>(acc.hits[k - 1]) / static_cast<double>(acc.total);
    rec.stderr_ = binomial_stderr(rec.estimate, acc.total);
    rec.theory = cut_point_probability(k);
    rec.ref = "cut-point law (k+3)/(3(k+1))";
    out.push_back(rec);
  }
  return out;
}

// ---- perimeter pmf ------------------------------------------------------------------

Records perimeter_pmf(const Context& c, const Params& p) {
  const long reps = p.replicas();
  constexpr std::array<double, 3> law = {3.0 / 4.0, 1.0 / 8.0, 3.0 / 64.0};
  const FreeBoltzmannSampler sampler(p.get<int>("table_half_length"));
  const auto direct = run_replicas<CountAcc>(reps, c.cfg.threads, [&](long r, CountAcc& a) {
    Rng rng = c.stream(r, "perimeter-pmf/sampler");
    const auto d = sampler.sample_area(rng, 1);
    ++a.total;
    if (d.half_perimeter < 3) a.add(static_cast<std::size_t>(d.half_perimeter));
  });
  // Pieces hanging from the simple core of the half-plane map.
  const long window = p.get<long>("window"), windows = p.get<long>("windows");
  struct HangAcc : CountAcc {
    double risk = 0;
    long odd = 0;  // impossible for quadrangulations; reported
    void merge(const HangAcc& o) {
      CountAcc::merge(o);
      risk += o.risk;
      odd += o.odd;
    }
  };
  const auto hang = run_replicas<HangAcc>(windows, c.cfg.threads, [&](long r, HangAcc& a) {
    Rng rng = c.stream(r, "perimeter-pmf/hanging");
    const auto s = sample_simple_boundary(window, rng);
    a.risk += s.residual_risk;
    for (long gap : hanging_perimeters(s)) {
      ++a.total;
      if (gap % 2 != 0) ++a.odd;
      else if (gap / 2 < 3) a.add(static_cast<std::size_t>(gap / 2));
    }
  });
  Records out;
  for (int k = 0; k < 3; ++k) {
    for (int source = 0; source < 2; ++source) {
      const CountAcc& a = source == 0 ? static_cast<const CountAcc&>(direct) : hang;
      const long hits = k < static_cast<int>(a.hits.size()) ? a.hits[k] : 0;
      auto rec = c.record("P(half-perimeter = k)",
                          {{"k", k}, {"source", source == 0 ? "sampler" : "hanging"}},
                          source == 0 ? reps : windows);
      rec.estimate = static_cast<double>(hits) / static_cast<double>(a.total);
      rec.stderr_ = binomial_stderr(law[k], a.total);
      rec.theory = law[k];
      rec.ref = "free Boltzmann perimeter law";
      rec.params["samples"] = a.total;
      if (source == 1) {
        rec.risk = hang.risk;
        rec.params["odd_perimeters"] = hang.odd;
      }
      out.push_back(rec);
    }
  }
  return out;
}

// ---- area tail ------------------------------------------------------------------------

Records area_tail(const Context& c, const Params& p) {
  const long reps = p.replicas();
  const auto cap = p.get<std::size_t>("area_cap");
  const auto grid = p.get<std::vector<double>>("grid");
  for (double g : grid)
    if (g > static_cast<double>(cap)) throw std::invalid_argument("area-tail: grid beyond the area cap");
  const FreeBoltzmannSampler sampler(p.get<int>("table_half_length"));
  const auto acc = run_replicas<CountAcc>(reps, c.cfg.threads, [&](long r, CountAcc& a) {
    Rng rng = c.stream(r, "area-tail");
    const auto d = sampler.sample_area(rng, cap);
    ++a.total;
    a.hits.resize(grid.size() + 2, 0);
    if (d.censored && !d.over_cap) {
      ++a.hits[grid.size() + 1];  // perimeter beyond the table: area unknown
      return;
    }
    if (d.over_cap) ++a.hits[grid.size()];
    for (std::size_t j = 0; j < grid.size(); ++j) a.hits[j] += static_cast<double>(d.area) >= grid[j];
  });
  const double total = static_cast<double>(acc.total);
  const long unknown = acc.hits[grid.size() + 1];
  Records out;
  std::vector<double> lx, ly, ly_hi, le;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double q = static_cast<double>(acc.hits[j]) / total;
    auto rec = c.record("P(Area >= n)", {{"n", grid[j]}, {"unknown_area", unknown}}, reps);
    rec.estimate = q;
    rec.stderr_ = binomial_stderr(q, acc.total);
    rec.ref = "area tail n^(-3/4)";
    rec.risk = static_cast<double>(unknown) / total;
    out.push_back(rec);
    lx.push_back(std::log(grid[j]));
    ly.push_back(std::log(q));
    ly_hi.push_back(std::log(q + static_cast<double>(unknown) / total));
    le.push_back(rec.stderr_ / q);
  }
  const Slope s = least_squares_slope(lx, ly, le);
  const Slope s_hi = least_squares_slope(lx, ly_hi);
  auto rec = c.record("log-log slope of P(Area >= n)",
                      {{"grid", grid},
                       {"area_cap", cap},
                       {"over_cap", acc.hits[grid.size()]},
                       {"unknown_area", unknown},
                       {"slope_if_unknown_large", s_hi.slope}},
                      reps);
  rec.estimate = s.slope;
  rec.stderr_ = s.stderr_;
  rec.theory = -0.75;
  rec.ref = "area tail n^(-3/4)";
  rec.risk = static_cast<double>(unknown) / total;
  out.push_back(rec);
  return out;
}

// ---- simple boundary scaling ----------------------------------------------------------

struct SimpleAcc {
  Moments raw, gap, x2;
  long censored = 0, capped = 0;
  double risk = 0;
  void merge(const SimpleAcc& o) {
    raw.merge(o.raw);
    gap.merge(o.gap);
    x2.merge(o.x2);
    censored += o.censored;
    capped += o.capped;
    risk += o.risk;
  }
};

Records simple_scaling(const Context& c, const Params& p) {
  const long window = p.get<long>("window"), index = p.get<long>("index");
  const long reps = p.replicas();
  const double i = static_cast<double>(index);
  const auto acc = run_replicas<SimpleAcc>(reps, c.cfg.threads, [&](long r, SimpleAcc& a) {
    Rng rng = c.stream(r, "simple-scaling");
    const auto s = sample_simple_boundary(window, rng);
    a.risk += s.residual_risk;
    a.capped += s.capped;
    if (static_cast<long>(s.survivors.size()) <= index) {
      ++a.censored;
      return;
    }
    const double n_i = static_cast<double>(s.survivors[index]);
    const double x = s.labels[index];
    a.raw.add(n_i / i);
    a.gap.add((n_i - static_cast<double>(s.survivors[0])) / i);
    a.x2.add(x * x / (15.0 * i));
  });
  Records out;
  const json base = {{"window", window}, {"i", index}, {"censored", acc.censored}, {"capped", acc.capped}};
  // Censored replicas have n_i > window; their contribution is bracketed from
  // below by the smallest value compatible with that.
  auto add = [&](std::string q, const Moments& m, double floor, double theory, std::string ref) {
    json params = base;
    const double n = static_cast<double>(m.n + acc.censored);
    params["lower_bound"] = n > 0 ? (m.sum + floor * static_cast<double>(acc.censored)) / n : 0.0;
    auto rec = c.record(std::move(q), params, reps);
    rec.estimate = m.mean();
    rec.stderr_ = m.stderr_of_mean();
    rec.theory = theory;
    rec.ref = std::move(ref);
    rec.risk = acc.risk;
    out.push_back(rec);
  };
  add("n_i / i", acc.raw, static_cast<double>(window + 1) / i, 3.0, "mean boundary length swallowed per simple step");
  add("(n_i - n_0) / i", acc.gap, 1.0, 3.0, "mean boundary length swallowed per simple step");
  add("E[X~_i^2]/(15 i)", acc.x2, 0.0, 1.0, "Bessel-5 scaling dilated by sqrt(3)");
  return out;
}

// ---- labels as limit -----------------------------------------------------------------------

struct LabelsAcc {
  Moments per_seed;  // fraction of the fixed probe budget that holds
  long holding = 0, certified_probes = 0, uncertified = 0;
  double trusted_radius = 0;
  void merge(const LabelsAcc& o) {
    per_seed.merge(o.per_seed);
    holding += o.holding;
    certified_probes += o.certified_probes;
    uncertified += o.uncertified;
    trusted_radius += o.trusted_radius;
  }
};

Records labels_limit(const Context& c, const Params& p) {
  const auto windows = p.get<std::vector<long>>("windows");
  const int sources = p.get<int>("sources"), targets = p.get<int>("targets");
  const int core = p.get<int>("core_radius");
  const long reps = p.replicas();
  const long budget = static_cast<long>(sources) * targets;
  Records out;
  for (long window : windows) {
    const auto acc = run_replicas<LabelsAcc>(reps, c.cfg.threads, [&](long r, LabelsAcc& a) {
      const Rng base = c.stream(r, "labels-limit");
      const TreedBridge tb = sample_B_pm_budget_window(window, base);
      Rng probe = base.split(~std::uint64_t{0});
      long holding = 0;
      try {
        const WindowedMap wm = phi_unconstrained_window(tb);
        a.trusted_radius += wm.trusted_radius;
        const auto rep = labels_as_limit_check(wm, probe, core, sources, targets);
        holding = rep.holding;
        a.certified_probes += rep.probes;
      } catch (const std::exception&) {
        // Root chord outside the window or no room beyond the core radius:
        // none of the probes can be certified.
        ++a.uncertified;
      }
      a.holding += holding;
      a.per_seed.add(static_cast<double>(holding) / static_cast<double>(budget));
    });
    auto rec = c.record("fraction of probes with d(x,z) - d(rho,z) = l(x)",
                        {{"window", window},
                         {"probes_per_seed", budget},
                         {"uncertified_windows", acc.uncertified},
                         {"certified_probes", acc.certified_probes},
                         {"fraction_among_certified",
                          acc.certified_probes ? static_cast<double>(acc.holding) / acc.certified_probes : 0.0},
                         {"mean_trusted_radius", acc.trusted_radius / static_cast<double>(reps)}},
                        reps);
    rec.estimate = acc.per_seed.mean();
    rec.stderr_ = acc.per_seed.stderr_of_mean();
    rec.theory = 1.0;
    rec.ref = "labels as limits of distance differences";
    out.push_back(rec);
  }
  return out;
}

// ---- pencil independence ---------------------------------------------------------------

using Code = std::vector<int>;

struct PencilAcc {
  std::map<std::pair<Code, Code>, long> joint;  // (right of the rightmost ray, the rest)
  std::map<Code, std::pair<long, long>> mirror;  // (left piece, flipped right piece)
  long uncertified = 0, bad_rays = 0, non_geodesic = 0;
  double risk = 0;
  void merge(const PencilAcc& o) {
    for (const auto& [k, v] : o.joint) joint[k] += v;
    for (const auto& [k, v] : o.mirror) {
      mirror[k].first += v.first;
      mirror[k].second += v.second;
    }
    uncertified += o.uncertified;
    bad_rays += o.bad_rays;
    non_geodesic += o.non_geodesic;
    risk += o.risk;
  }
};

Records pencil_independence(const Context& c, const Params& p) {
  const int t = p.get<int>("threshold"), depth = p.get<int>("depth");
  const long reps = p.replicas();
  if (depth < 2 || t < depth) throw std::invalid_argument("pencil-independence: need 2 <= depth <= threshold");
  const auto acc = run_replicas<PencilAcc>(reps, c.cfg.threads, [&](long r, PencilAcc& a) {
    Rng rng = c.stream(r, "pencil-independence");
    const auto bc = sample_ball_corners(t, rng);
    a.risk += bc.residual_risk;
    std::vector<int> index;
    const auto small = restrict_corners(bc, depth, &index);
    const auto lb = ball_from_corners(small);
    const CornerIndex idx(bc.corners, bc.vertex_count);
    auto right = rightmost_ray(idx, depth);
    auto left = leftmost_ray(idx, bc.is_tree_root, depth, t);
    if (!ray_well_formed(idx, right) || (left.certified && !ray_well_formed(idx, left))) ++a.bad_rays;
    a.risk += left.residual_risk;
    for (auto& k : right.corners) k = index[k];
    const auto right_path = ray_half_edges(right, lb.half_edge_index);
    const auto sides = split_along_ray(lb.ball.map, lb.vertex_label, right_path, depth - 1);
    const Code right_code = canonical_code(sides.right);
    ++a.joint[{right_code, canonical_code(sides.left)}];
    ++a.mirror[canonical_code(flip(sides.right))].second;
    if (!left.certified) {
      ++a.uncertified;
      return;
    }
    for (auto& k : left.corners) k = index[k];
    const auto left_path = ray_half_edges(left, lb.half_edge_index);
    const auto dist = lb.ball.map.distances_from_root();
    for (int k = 0; k < depth; ++k)
      if (dist[lb.ball.map.target(right_path[k])] != k + 1 || dist[lb.ball.map.target(left_path[k])] != k + 1)
        ++a.non_geodesic;
    const auto tri = pencil_split(lb.ball.map, lb.vertex_label, left_path, right_path, depth - 1);
    ++a.mirror[canonical_code(tri.left)].first;
  });

  // Class ids in code order, so the table does not depend on arrival order.
  std::map<Code, int> rid, lid;
  for (const auto& [k, v] : acc.joint) {
    rid.emplace(k.first, 0);
    lid.emplace(k.second, 0);
  }
  int next = 0;
  for (auto& [k, v] : rid) v = next++;
  next = 0;
  for (auto& [k, v] : lid) v = next++;
  std::map<std::pair<int, int>, long> table;
  for (const auto& [k, v] : acc.joint) table[{rid[k.first], lid[k.second]}] += v;
  const long min_margin = p.get<long>("min_margin");
  const ChiSquared ind = independence_chi_squared(table, min_margin);

  std::vector<std::pair<long, long>> counts;
  for (const auto& [k, v] : acc.mirror) counts.push_back(v);
  const long min_total = p.get<long>("min_cell");
  const ChiSquared mir = two_sample_chi_squared(counts, min_total);

  const json base = {{"threshold", t},
                     {"depth", depth},
                     {"uncertified", acc.uncertified},
                     {"bad_rays", acc.bad_rays},
                     {"non_geodesic_steps", acc.non_geodesic}};
  Records out;
  auto rec = c.record("chi-squared independence, right of the rightmost ray vs the rest", base, reps);
  rec.params["df"] = ind.df;
  rec.params["p_value"] = ind.p_value;
  rec.params["right_classes"] = rid.size();
  rec.params["left_classes"] = lid.size();
  rec.params["min_margin"] = min_margin;
  rec.estimate = ind.statistic;
  rec.theory = ind.df;
  rec.ref = "independence of the two sides of the rightmost ray";
  rec.risk = acc.risk;
  out.push_back(rec);
  auto m = c.record("two-sample chi-squared, left piece vs flipped right piece", base, reps);
  m.params["df"] = mir.df;
  m.params["p_value"] = mir.p_value;
  m.params["classes"] = counts.size();
  m.params["min_cell"] = min_total;
  m.estimate = mir.statistic;
  m.theory = mir.df;
  m.ref = "mirror law of the pencil pieces";
  m.risk = acc.risk;
  out.push_back(m);
  return out;
}

// ---- bridge convergence ---------------------------------------------------------------

// S^(steps)(i, .) and S^(steps+1)(i, .).
std::pair<std::vector<double>, std::vector<double>> kernel_rows(long steps, int i) {
  auto even = bridge_kernel_row(steps, i);
  std::vector<double> odd(even.size() + 1, 0.0);
  for (std::size_t x = 0; x < even.size(); ++x) {
    if (even[x] == 0.0) continue;
    const long l = static_cast<long>(x);
    odd[x + 1] += even[x] * p_up(l);
    if (x > 0) odd[x - 1] += even[x] * p_down(l);
  }
  return {std::move(even), std::move(odd)};
}

double step(int from, int to) { return to > from ? p_up(from) : p_down(from); }

Records bridge_convergence(const Context& c, const Params& p) {
  Records out;
  for (long half : p.get<std::vector<long>>("kernel_half_lengths")) {
    for (int i = 0; i <= 2; ++i) {
      const auto [even, odd] = kernel_rows(2 * half, i);
      for (int j = 0; j <= 2; ++j) {
        const double s = (i + j) % 2 == 0 ? even[j] : odd[j];
        const double ratio = s * 6.0 * std::sqrt(std::numbers::pi) * std::pow(static_cast<double>(half), 2.5) /
                             ((j + 1.0) * (j + 2.0) * (j + 2.0) * (j + 3.0));
        out.push_back(c.exact("S^(2p)(i,j) 6 sqrt(pi) p^(5/2) / ((j+1)(j+2)^2(j+3))",
                              {{"p", half}, {"i", i}, {"j", j}, {"steps", 2 * half + (i + j) % 2}}, ratio, 1.0,
                              "bridge kernel asymptotics"));
      }
    }
  }
  const long half = p.get<long>("pattern_half_length");
  if (half < 4) throw std::invalid_argument("bridge-convergence: pattern half-length must be >= 4");
  // Patterns l_{-3} .. l_3 with l_0 = 0 and positive probability.
  const double norm = bridge_kernel_row(2 * half, 0)[0];
  std::map<int, std::vector<double>> wrap;  // l_3 -> S^(2p-6)(l_3, .)
  for (int mask = 0; mask < 64; ++mask) {
    std::array<int, 7> l{};  // l[k] = l_{k-3}
    bool ok = true;
    for (int k = 4; k <= 6; ++k) l[k] = l[k - 1] + ((mask >> (k - 4)) & 1 ? 1 : -1);
    for (int k = 2; k >= 0; --k) l[k] = l[k + 1] + ((mask >> (k + 3)) & 1 ? 1 : -1);
    for (int v : l) ok = ok && v >= 0;
    if (!ok) continue;
    double forward = 1.0, right = 1.0, left = 1.0;
    for (int k = 0; k < 6; ++k) forward *= step(l[k], l[k + 1]);
    for (int k = 3; k < 6; ++k) right *= step(l[k], l[k + 1]);
    for (int k = 3; k > 0; --k) left *= step(l[k], l[k - 1]);
    if (forward == 0.0) continue;
    auto& row = wrap[l[6]];
    if (row.empty()) row = bridge_kernel_row(2 * half - 6, l[6]);
    const double exact = forward * row[l[0]] / norm;
    const double limit = right * left;
    std::vector<int> pattern(l.begin(), l.end());
    out.push_back(c.exact("P(bridge window = pattern) under B_p",
                          {{"p", half}, {"pattern", pattern}, {"relative_error", std::abs(exact - limit) / limit}},
                          exact, limit, "product of two independent boundary walks"));
  }
  return out;
}

// ---- registry ---------------------------------------------------------------------------

struct Entry {
  std::string_view name;
  Records (*run)(const Context&, const Params&);
  std::function<json()> defaults;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {"identities", identities, [] { return json{{"replicas", 1}, {"n_max", 200}, {"p_max", 20}}; }},
      {"bijection", bijection,
       [] { return json{{"replicas", 1}, {"max", 5}, {"sums", true}, {"max_edges", default_tree_bound}}; }},
      {"bessel", bessel, [] { return json{{"replicas", 10000}, {"n", 10000}}; }},
      {"contour-moments", contour_moments, [] { return json{{"replicas", 2000}, {"n", 100}, {"tree_cap", 10000}}; }},
      {"ball-volume", ball_volume,
       [] { return json{{"replicas", 2000}, {"radii", {8, 16, 32, 64}}, {"epsilon", 1e-6}}; }},
      {"cutpoints", cutpoints, [] { return json{{"replicas", 100000}, {"k_max", 10}}; }},
      {"perimeter-pmf", perimeter_pmf,
       [] {
         return json{{"replicas", 100000}, {"table_half_length", 256}, {"window", 1000}, {"windows", 400}};
       }},
      {"area-tail", area_tail,
       [] {
         std::vector<double> grid;
         for (int k = 0; k <= 8; ++k) grid.push_back(std::round(100.0 * std::pow(10.0, k / 4.0)));
         return json{{"replicas", 1000000}, {"area_cap", 10000}, {"table_half_length", 3000}, {"grid", grid}};
       }},
      {"simple-scaling", simple_scaling,
       [] { return json{{"replicas", 10000}, {"window", 100000}, {"index", 10000}}; }},
      {"labels-limit", labels_limit,
       [] {
         return json{{"replicas", 100},
                     {"windows", {1000, 10000, 100000}},
                     {"sources", 8},
                     {"targets", 16},
                     {"core_radius", 2}};
       }},
      {"pencil-independence", pencil_independence,
       [] {
         return json{{"replicas", 10000}, {"threshold", 32}, {"depth", 2}, {"min_margin", 200}, {"min_cell", 40}};
       }},
      {"bridge-convergence", bridge_convergence,
       [] {
         return json{{"replicas", 1}, {"kernel_half_lengths", {100, 1000, 10000}}, {"pattern_half_length", 1000}};
       }},
  };
  return entries;
}

const Entry& lookup(std::string_view name) {
  for (const auto& e : registry())
    if (e.name == name) return e;
  throw std::invalid_argument("unknown experiment: " + std::string(name));
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : registry()) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

json experiment_defaults(std::string_view name) { return lookup(name).defaults(); }

std::vector<ExperimentRecord> run_experiment(std::string_view name, const ExperimentConfig& config) {
  const Entry& e = lookup(name);
  const Params params(name, e.defaults(), config);
  return e.run(Context{e.name, config}, params);
}

const ExperimentRecord* find_record(const std::vector<ExperimentRecord>& records, std::string_view quantity,
                                    const json& match) {
  for (const auto& r : records) {
    if (r.quantity() != quantity) continue;
    bool ok = true;
    for (const auto& [k, v] : match.items()) ok = ok && r.params.contains(k) && r.params[k] == v;
    if (ok) return &r;
  }
  return nullptr;
}

}  // namespace hpq
