#include "halfplane/laws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hpq {

Rational step_prob(int level, Step dir) {
  if (level < 0) throw std::invalid_argument("step_prob: level must be >= 0");
  if (dir == Step::down) return Rational(level, 2 * (level + 2));
  return Rational(level + 4, 2 * (level + 2));
}

Rational w(int k) {
  if (k < 0) throw std::invalid_argument("w: k must be >= 0");
  return Rational(2 * k * (k + 3), (k + 1) * (k + 2));
}

Rational c_poly(int j) {
  BigInt a = BigInt(j + 1) * (j + 2) * (j + 2) * (j + 3);
  return Rational(a, 12);
}

Rational wc_coefficient(int p) {
  if (p < 0) throw std::invalid_argument("wc_coefficient: p must be >= 0");
  // binom(3/2, n) (-8)^n with n = p + 2, then divided by 24.
  const int n = p + 2;
  Rational term(1);
  for (int k = 0; k < n; ++k) term *= Rational(3 - 2 * k, 2) * Rational(-8, k + 1);
  return term / 24;
}

Rational bridge_kernel_exact(int steps, int i, int j) {
  if (i < 0 || j < 0 || steps < 0) throw std::invalid_argument("bridge_kernel: negative argument");
  if ((i + j + steps) % 2 != 0) return Rational(0);
  const int top = i + steps + 1;
  std::vector<Rational> dist(top + 1, Rational(0)), next(top + 1);
  dist[i] = 1;
  std::vector<Rational> up(top + 1), down(top + 1);
  for (int x = 0; x <= top; ++x) {
    up[x] = step_prob(x, Step::up);
    down[x] = step_prob(x, Step::down);
  }
  for (int s = 0; s < steps; ++s) {
    for (auto& v : next) v = 0;
    for (int x = 0; x < top; ++x) {
      if (dist[x] == 0) continue;
      next[x + 1] += dist[x] * up[x];
      if (x > 0) next[x - 1] += dist[x] * down[x];
    }
    std::swap(dist, next);
  }
  return j <= top ? dist[j] : Rational(0);
}

Rational hit_below_prob_exact(long n, long m) {
  if (m < 0 || m >= n) throw std::invalid_argument("hit_below_prob: need 0 <= m < n");
  BigInt num = BigInt(m + 1) * (m + 2) * (m + 3);
  BigInt den = BigInt(n + 1) * (n + 2) * (n + 3);
  return Rational(num, den);
}

Rational dip_prob_exact(long x, long m) {
  if (m < 0 || m >= x) throw std::invalid_argument("dip_prob: need 0 <= m < x");
  return 1 - w(static_cast<int>(x - m)) / w(static_cast<int>(x));
}

long double w_gap(long double a, long double b) {
  return 4.0L * (a - b) * (a + b + 3.0L) / ((a + 1.0L) * (a + 2.0L) * (b + 1.0L) * (b + 2.0L));
}

double hit_below_prob(long n, long m) {
  if (m < 0 || m >= n) throw std::invalid_argument("hit_below_prob: need 0 <= m < n");
  const double a = static_cast<double>(m), b = static_cast<double>(n);
  return ((a + 1) / (b + 1)) * ((a + 2) / (b + 2)) * ((a + 3) / (b + 3));
}

double future_clean_right(long double y, long double t) {
  if (y <= t) return 0.0;
  const long double u = y - t;
  const long double lead = (u + 2) * (u + 3) / ((y + 2) * (y + 3));
  return static_cast<double>(lead * (1.0L - 6.0L / ((u + 1) * (u + 2) * (u + 3))));
}

double future_clean_left(long double y, long double t) {
  if (y <= t) return 0.0;
  const long double u = y - t;
  return static_cast<double>(future_clean_right(y, t) * ((u + 1) * (y + 3)) / ((u + 3) * (y + 1)));
}

double dip_prob(long x, long m) {
  if (m < 0 || m >= x) throw std::invalid_argument("dip_prob: need 0 <= m < x");
  const long double gap = w_gap(static_cast<long double>(x), static_cast<long double>(x - m));
  return static_cast<double>(gap / static_cast<long double>(w_of(static_cast<double>(x))));
}

std::vector<double> bridge_kernel_row(long steps, int i) {
  const long top = i + steps + 1;
  std::vector<double> dist(top + 1, 0.0), next(top + 1, 0.0);
  dist[i] = 1.0;
  // Masses below this are dropped; the Gaussian tail puts them beyond about
  // 30 sqrt(steps) levels, which bounds the sweep.
  constexpr double negligible = 1e-40;
  long frontier = i;  // highest level carrying mass
  long dirty = 0;     // both buffers are zero from here up
  for (long s = 0; s < steps; ++s) {
    const long hi = std::min<long>({top - 1, i + s, frontier});
    dirty = std::min<long>(top + 1, std::max(dirty, hi + 2));
    std::fill(next.begin(), next.begin() + dirty, 0.0);
    long reached = 0;
    for (long x = (i + s) % 2; x <= hi; x += 2) {
      const double m = dist[x];
      if (m < negligible) continue;
      next[x + 1] += m * p_up(x);
      if (x > 0) next[x - 1] += m * p_down(x);
      reached = x + 1;
    }
    frontier = reached;
    std::swap(dist, next);
  }
  return dist;
}

double bridge_kernel(long steps, int i, int j) {
  if ((i + j + steps) % 2 != 0) return 0.0;
  const auto row = bridge_kernel_row(steps, i);
  return j < static_cast<long>(row.size()) ? row[j] : 0.0;
}

double walk_second_moment(long steps) {
  const auto row = bridge_kernel_row(steps, 0);
  double m2 = 0.0;
  for (std::size_t x = 0; x < row.size(); ++x) m2 += row[x] * static_cast<double>(x) * static_cast<double>(x);
  return m2;
}

PlusOffspring plus_offspring(long label) {
  const double l = static_cast<double>(label);
  const double a = w_of(l - 1) / 12.0, b = w_of(l) / 12.0, c = w_of(l + 1) / 12.0;
  return {a, a + b, a + b + c};
}

namespace {

// Depth-first growth in preorder.  `child_label` returns the label of a new
// child of a vertex labelled l, or nullopt for "stop".
template <class Offspring>
std::optional<LabelledTree> grow_tree(int root_label, Offspring&& child_label,
                                      const TreeSampleOptions& opt) {
  LabelledTree tree;
  std::vector<std::size_t> open{tree.push_vertex(root_label)};
  while (!open.empty()) {
    const std::size_t v = open.back();
    const auto child = child_label(tree.label(v));
    if (!child) {
      open.pop_back();
      continue;
    }
    if (opt.max_vertices != 0 && tree.vertex_count() >= opt.max_vertices) return std::nullopt;
    tree.add_child_count(v);
    open.push_back(tree.push_vertex(*child));
  }
  return tree;
}

}  // namespace

std::optional<LabelledTree> sample_tree_rho(int root_label, Rng& rng, TreeSampleOptions opt) {
  return grow_tree(
      root_label,
      [&rng](int l) -> std::optional<int> {
        // Geometric(1/2) offspring and uniform increments, from one draw.
        const std::uint64_t r = rng.below(6);
        if (r < 3) return std::nullopt;
        return l + static_cast<int>(r) - 4;
      },
      opt);
}

std::optional<LabelledTree> sample_tree_rho_plus(int root_label, Rng& rng, TreeSampleOptions opt) {
  if (root_label < 1) throw std::invalid_argument("rho^+ needs a root label >= 1");
  std::vector<PlusOffspring> table;
  return grow_tree(
      root_label,
      [&rng, &table](int l) -> std::optional<int> {
        if (static_cast<std::size_t>(l) >= table.size()) {
          const std::size_t old = table.size();
          table.resize(static_cast<std::size_t>(l) * 2 + 2);
          for (std::size_t k = old; k < table.size(); ++k) table[k] = plus_offspring(static_cast<long>(k));
        }
        const PlusOffspring& o = table[static_cast<std::size_t>(l)];
        const double u = rng.uniform();
        if (u < o.to_minus) return l - 1;
        if (u < o.to_same) return l;
        if (u < o.to_plus) return l + 1;
        return std::nullopt;
      },
      opt);
}

std::optional<std::size_t> sample_rho_plus_size(int root_label, Rng& rng, std::size_t cap) {
  if (root_label < 1) throw std::invalid_argument("rho^+ needs a root label >= 1");
  static thread_local std::vector<PlusOffspring> table;
  std::vector<int> open{root_label};
  std::size_t edges = 0;
  while (!open.empty()) {
    const int l = open.back();
    if (static_cast<std::size_t>(l) + 1 >= table.size()) {
      const std::size_t old = table.size();
      table.resize(static_cast<std::size_t>(l) * 2 + 2);
      for (std::size_t k = old; k < table.size(); ++k) table[k] = plus_offspring(static_cast<long>(k));
    }
    const PlusOffspring& o = table[static_cast<std::size_t>(l)];
    const double u = rng.uniform();
    int child;
    if (u < o.to_minus) child = l - 1;
    else if (u < o.to_same) child = l;
    else if (u < o.to_plus) child = l + 1;
    else {
      open.pop_back();
      continue;
    }
    if (++edges > cap) return std::nullopt;
    open.push_back(child);
  }
  return edges;
}

long sample_plus_min(long root, long at_most, Rng& rng) {
  if (at_most < 1 || at_most > root) throw std::invalid_argument("sample_plus_min: need 1 <= at_most <= root");
  const long double r = static_cast<long double>(root);
  const auto below = [&](long l) { return w_gap(r, r - static_cast<long double>(l)); };  // w_root * P(min <= l)
  const long double target = static_cast<long double>(rng.uniform_positive()) * below(at_most);
  // Smallest l with below(l) >= target; in the gap g = root - l this reads
  // (g+1)(g+2) <= 4 / c.
  const long double c = 4.0L / ((r + 1.0L) * (r + 2.0L)) + target;
  const long double g = std::floor((std::sqrt(1.0L + 16.0L / c) - 3.0L) / 2.0L);
  long l = std::clamp(root - static_cast<long>(g), 1L, at_most);
  while (l > 1 && below(l - 1) >= target) --l;
  while (l < at_most && below(l) < target) ++l;
  return l;
}

std::vector<int> sample_walk(int x0, long steps, Rng& rng) {
  if (x0 < 0) throw std::invalid_argument("sample_walk: start must be >= 0");
  std::vector<int> path(static_cast<std::size_t>(steps) + 1);
  path[0] = x0;
  int x = x0;
  for (long s = 1; s <= steps; ++s) {
    x += rng.uniform() < p_down(x) ? -1 : 1;
    path[static_cast<std::size_t>(s)] = x;
  }
  return path;
}

ConditionedBridgeSampler::ConditionedBridgeSampler(int max_half_length, int level_cap)
    : max_p_(max_half_length) {
  if (max_half_length < 1) throw std::invalid_argument("bridge sampler: p must be >= 1");
  const int steps = 2 * max_half_length;
  cap_ = level_cap > 0 ? level_cap
                       : std::min(steps, static_cast<int>(10.0 * std::sqrt(static_cast<double>(steps))) + 20);
  const std::size_t width = static_cast<std::size_t>(cap_) + 1;
  table_.assign((static_cast<std::size_t>(steps) + 1) * width, 0.0);
  table_[0] = 1.0;
  for (int m = 1; m <= steps; ++m) {
    const double* prev = &table_[(m - 1) * width];
    double* cur = &table_[m * width];
    for (int x = 0; x <= cap_; ++x) {
      double v = x < cap_ ? p_up(x) * prev[x + 1] : 0.0;
      if (x > 0) v += p_down(x) * prev[x - 1];
      cur[x] = v;
    }
  }
}

double ConditionedBridgeSampler::s_to_zero(int steps, int level) const {
  if (level < 0 || level > cap_) return 0.0;
  return table_[static_cast<std::size_t>(steps) * (cap_ + 1) + level];
}

std::vector<int> ConditionedBridgeSampler::sample(int half_length, Rng& rng) const {
  if (half_length < 1 || half_length > max_p_) throw std::invalid_argument("bridge sampler: p out of range");
  const int steps = 2 * half_length;
  std::vector<int> labels(static_cast<std::size_t>(steps));
  int x = 0;
  labels[0] = 0;
  for (int t = 0; t + 1 < steps; ++t) {
    const int rest = steps - t - 1;
    const double up = p_up(x) * s_to_zero(rest, x + 1);
    const double down = x > 0 ? p_down(x) * s_to_zero(rest, x - 1) : 0.0;
    x += rng.uniform() * (up + down) < down ? -1 : 1;
    labels[static_cast<std::size_t>(t + 1)] = x;
  }
  return labels;
}

namespace {
double log_c(long p) {
  const double q = static_cast<double>(p);
  return std::log(2.0) + std::lgamma(q + 0.5) - 0.5 * std::log(std::numbers::pi) - std::lgamma(q + 3.0);
}
}  // namespace

double PerimeterLaw::pmf(long p) { return p < 0 ? 0.0 : 0.75 * std::exp(log_c(p)); }

double PerimeterLaw::tail(long p) {
  if (p <= 0) return 1.0;
  return 0.5 * (static_cast<double>(p) + 2.0) * std::exp(log_c(p));
}

long PerimeterLaw::sample(Rng& rng) {
  double u = rng.uniform();
  while (u == 0.0) u = rng.uniform();
  // Largest p with tail(p) > u.
  long lo = 0, hi = 1;
  while (tail(hi) > u) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (tail(mid) > u ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace hpq
