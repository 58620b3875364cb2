#pragma once
// Experiment records, their jsonl/csv emission, the replica runner and the
// statistics shared by the experiments.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

namespace hpq {

struct ExperimentRecord {
  std::string name;                               // registered experiment
  nlohmann::json params = nlohmann::json::object();  // includes "quantity": what estimate measures
  std::uint64_t seed = 0;
  long replicas = 0;
  double estimate = 0.0;
  double stderr_ = 0.0;  // 0 for exact values
  bool exact = false;
  std::optional<double> theory;
  std::string ref;     // where the theory value comes from
  double risk = 0.0;   // summed residual risk of the approximations behind the estimate

  std::string quantity() const { return params.value("quantity", std::string{}); }
  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

nlohmann::json record_to_json(const ExperimentRecord& r);
ExperimentRecord record_from_json(const nlohmann::json& j);

enum class OutputFormat { jsonl, csv };
OutputFormat parse_format(std::string_view s);  // throws std::invalid_argument

inline constexpr std::string_view csv_header = "name,params,seed,replicas,estimate,stderr,theory,ref,risk";

void emit(std::span<const ExperimentRecord> records, OutputFormat format, std::ostream& out);
// Throws std::runtime_error when the file cannot be written.
void emit(std::span<const ExperimentRecord> records, OutputFormat format, const std::string& path);
std::vector<ExperimentRecord> parse_jsonl(std::istream& in);

// Shortest text that reads back to the same double.
std::string format_double(double x);

// ---- replica runner ---------------------------------------------------------

// Replicas are cut into fixed blocks; each block folds its replicas in order
// into a fresh accumulator and the blocks are merged in block order.  The
// result is therefore the same for every thread count.  Acc needs a default
// constructor and merge(const Acc&); body(replica, acc) must not touch shared
// state.
inline constexpr long replica_block = 64;

template <class Acc, class Body>
Acc run_replicas(long replicas, int threads, Body&& body) {
  const long blocks = (replicas + replica_block - 1) / replica_block;
  std::vector<Acc> partial(static_cast<std::size_t>(blocks));
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (long b; (b = next.fetch_add(1)) < blocks;) {
      try {
        Acc acc;
        const long end = std::min(replicas, (b + 1) * replica_block);
        for (long r = b * replica_block; r < end; ++r) body(r, acc);
        partial[static_cast<std::size_t>(b)] = std::move(acc);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = blocks;
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(std::max(1L, blocks))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  Acc total;
  for (const auto& a : partial) total.merge(a);
  return total;
}

// ---- statistics -------------------------------------------------------------

struct Moments {
  long n = 0;
  double sum = 0.0, sum_sq = 0.0;
  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const Moments& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN(); }
  double variance() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
  }
  double stderr_of_mean() const { return n ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

// Standard error of a frequency k/n.
double binomial_stderr(double p, long n);

struct ChiSquared {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
};
// Upper tail of the chi-squared law.
double chi_squared_sf(double statistic, int df);

// Two samples over the same categories: categories with fewer than
// `min_total` observations in both samples together are pooled into one cell.
ChiSquared two_sample_chi_squared(std::span<const std::pair<long, long>> counts, long min_total = 40);

// Independence in a contingency table given as (row, column) -> count.  Rows
// and columns with marginal below `min_margin` are pooled into an "other"
// category on their axis.
ChiSquared independence_chi_squared(const std::map<std::pair<int, int>, long>& table, long min_margin = 200);

// Least-squares slope of y on x, with the standard error propagated from
// independent errors on y (pass empty `y_err` to skip).
struct Slope {
  double slope = 0.0;
  double stderr_ = 0.0;
};
Slope least_squares_slope(std::span<const double> x, std::span<const double> y, std::span<const double> y_err = {});

}  // namespace hpq
