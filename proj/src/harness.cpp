#include "halfplane/harness.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace hpq {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

json record_to_json(const ExperimentRecord& r) {
  json j;
  j["name"] = r.name;
  j["params"] = r.params;
  j["seed"] = r.seed;
  j["replicas"] = r.replicas;
  j["estimate"] = r.estimate;
  j["stderr"] = r.stderr_;
  j["exact"] = r.exact;
  j["theory"] = r.theory ? json(*r.theory) : json(nullptr);
  j["ref"] = r.ref;
  j["risk"] = r.risk;
  return j;
}

ExperimentRecord record_from_json(const json& j) {
  ExperimentRecord r;
  r.name = j.at("name").get<std::string>();
  r.params = j.at("params");
  r.seed = j.at("seed").get<std::uint64_t>();
  r.replicas = j.at("replicas").get<long>();
  r.estimate = j.at("estimate").get<double>();
  r.stderr_ = j.at("stderr").get<double>();
  r.exact = j.value("exact", false);
  if (const auto& t = j.at("theory"); !t.is_null()) r.theory = t.get<double>();
  r.ref = j.value("ref", std::string{});
  r.risk = j.value("risk", 0.0);
  return r;
}

OutputFormat parse_format(std::string_view s) {
  if (s == "jsonl") return OutputFormat::jsonl;
  if (s == "csv") return OutputFormat::csv;
  throw std::invalid_argument("unknown output format: " + std::string(s));
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void emit(std::span<const ExperimentRecord> records, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::jsonl) {
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
    return;
  }
  out << csv_header << '\n';
  for (const auto& r : records) {
    out << csv_field(r.name) << ',' << csv_field(r.params.dump()) << ',' << r.seed << ',' << r.replicas << ','
        << format_double(r.estimate) << ',' << format_double(r.exact ? 0.0 : r.stderr_) << ','
        << (r.theory ? format_double(*r.theory) : std::string{}) << ',' << csv_field(r.ref) << ','
        << format_double(r.risk) << '\n';
  }
}

void emit(std::span<const ExperimentRecord> records, OutputFormat format, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  emit(records, format, f);
  f.flush();
  if (!f) throw std::runtime_error("cannot write " + path);
}

std::vector<ExperimentRecord> parse_jsonl(std::istream& in) {
  std::vector<ExperimentRecord> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(record_from_json(json::parse(line)));
  return out;
}

double binomial_stderr(double p, long n) {
  return n > 0 ? std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n)) : 0.0;
}

double chi_squared_sf(double statistic, int df) {
  if (df <= 0) return 1.0;
  const boost::math::chi_squared_distribution<double> law(df);
  return boost::math::cdf(boost::math::complement(law, std::max(0.0, statistic)));
}

ChiSquared two_sample_chi_squared(std::span<const std::pair<long, long>> counts, long min_total) {
  double n1 = 0, n2 = 0;
  for (const auto& [a, b] : counts) {
    n1 += static_cast<double>(a);
    n2 += static_cast<double>(b);
  }
  ChiSquared out;
  if (n1 == 0 || n2 == 0) return out;
  auto term = [&](double a, double b) {
    const double d = n2 * a - n1 * b;
    return d * d / (n1 * n2 * (a + b));
  };
  long pool_a = 0, pool_b = 0;
  int cells = 0;
  for (const auto& [a, b] : counts) {
    if (a + b >= min_total) {
      out.statistic += term(static_cast<double>(a), static_cast<double>(b));
      ++cells;
    } else {
      pool_a += a;
      pool_b += b;
    }
  }
  if (pool_a + pool_b > 0) {
    out.statistic += term(static_cast<double>(pool_a), static_cast<double>(pool_b));
    ++cells;
  }
  out.df = std::max(0, cells - 1);
  out.p_value = chi_squared_sf(out.statistic, out.df);
  return out;
}

ChiSquared independence_chi_squared(const std::map<std::pair<int, int>, long>& table, long min_margin) {
  std::map<int, long> rows, cols;
  long total = 0;
  for (const auto& [k, v] : table) {
    rows[k.first] += v;
    cols[k.second] += v;
    total += v;
  }
  // Categories kept on each axis; everything else goes to index 0.
  auto index = [&](const std::map<int, long>& margin) {
    std::map<int, int> idx;
    int next = 1;
    for (const auto& [k, v] : margin) idx[k] = v >= min_margin ? next++ : 0;
    return std::pair{idx, next};
  };
  const auto [ri, rn] = index(rows);
  const auto [ci, cn] = index(cols);
  std::vector<double> cell(static_cast<std::size_t>(rn * cn), 0.0), rsum(rn, 0.0), csum(cn, 0.0);
  for (const auto& [k, v] : table) {
    const int r = ri.at(k.first), c = ci.at(k.second);
    cell[static_cast<std::size_t>(r * cn + c)] += static_cast<double>(v);
    rsum[r] += static_cast<double>(v);
    csum[c] += static_cast<double>(v);
  }
  ChiSquared out;
  int used_r = 0, used_c = 0;
  for (double s : rsum) used_r += s > 0;
  for (double s : csum) used_c += s > 0;
  for (int r = 0; r < rn; ++r)
    for (int c = 0; c < cn; ++c) {
      if (rsum[r] == 0 || csum[c] == 0) continue;
      const double e = rsum[r] * csum[c] / static_cast<double>(total);
      const double d = cell[static_cast<std::size_t>(r * cn + c)] - e;
      out.statistic += d * d / e;
    }
  out.df = std::max(0, (used_r - 1) * (used_c - 1));
  out.p_value = chi_squared_sf(out.statistic, out.df);
  return out;
}

Slope least_squares_slope(std::span<const double> x, std::span<const double> y, std::span<const double> y_err) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares_slope: need matching points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Slope out;
  out.slope = sxy / sxx;
  if (y_err.size() == x.size()) {
    double v = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double a = (x[i] - mx) / sxx;
      v += a * a * y_err[i] * y_err[i];
    }
    out.stderr_ = std::sqrt(v);
  }
  return out;
}

}  // namespace hpq
