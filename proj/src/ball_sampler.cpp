#include "halfplane/ball_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "halfplane/laws.hpp"

namespace hpq {

long double SideEscape::clean(long double u) const {
  if (u <= 0) return 0.0L;
  const long double num = u * (u * u + 6 * u + 11);
  return left ? num / ((u + 3) * (t + u + 1) * (t + u + 2)) : num / ((u + 1) * (t + u + 2) * (t + u + 3));
}

long double SideEscape::bad(long double u) const {
  if (u <= 0) return 1.0L;
  if (left)
    return (t * t * u + 3 * t * t + 2 * t * u * u + 9 * t * u + 9 * t + 6) /
           ((u + 3) * (t + u + 1) * (t + u + 2));
  return (t * t * u + t * t + 2 * t * u * u + 7 * t * u + 5 * t + 6) / ((u + 1) * (t + u + 2) * (t + u + 3));
}

long double SideEscape::increment(long double u) const {
  if (left)
    return 2 * (t * u * u * u + 9 * t * u * u + 26 * t * u + 27 * t + 9 * u + 27) /
           ((u + 3) * (u + 4) * (t + u + 1) * (t + u + 2) * (t + u + 3));
  return 2 * (t * u * u * u + 6 * t * u * u + 11 * t * u + 9 * t + 9 * u + 18) /
         ((u + 1) * (u + 2) * (t + u + 2) * (t + u + 3) * (t + u + 4));
}

long double SideEscape::descent(long double u) const {
  const long double d = (u + 2) * (u + 3);
  if (left) return (u + t + 2) * (t * u * u * u + 9 * t * u * u + (26 * t + 9) * u + 27 * t + 27) / d;
  return (u + t + 3) * (t * u * u * u + 6 * t * u * u + (11 * t + 9) * u + 9 * t + 18) / d;
}

std::vector<double> entrance_count_law(long double y, int entry, int t, int terms) {
  if (!(y > entry && entry > t)) throw std::invalid_argument("entrance_count_law: need y > entry > t");
  const double e = entry, gap = entry - t;
  const double a = 4.0 / ((gap + 1) * (gap + 2));  // 2 - w_{entry-t}
  const double rho = static_cast<double>(w_gap(e, gap)) / a;
  const double q0 = 4.0 / a;
  const double d0 = static_cast<double>(y - entry);
  const auto n = static_cast<std::size_t>(terms) + 1;
  std::vector<double> q(n), s(n), g(n), r(n);
  for (std::size_t k = 0; k < n; ++k) q[k] = q0 * std::pow(rho, static_cast<double>(k));
  s[0] = std::sqrt(0.25 + q[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = q[k];
    for (std::size_t j = 1; j < k; ++j) acc -= s[j] * s[k - j];
    s[k] = acc / (2 * s[0]);
  }
  g[0] = d0 * d0 + 2 * d0 * s[0] + q[0];
  for (std::size_t k = 1; k < n; ++k) g[k] = 2 * d0 * s[k] + q[k];
  r[0] = 1.0 / g[0];
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0;
    for (std::size_t j = 1; j <= k; ++j) acc += g[j] * r[k - j];
    r[k] = -acc / g[0];
  }
  std::vector<double> p(n - 1);
  double z = 0;
  for (std::size_t k = 1; k < n; ++k) z += p[k - 1] = std::max(0.0, -r[k]);
  for (double& x : p) x /= z;
  return p;
}

Excursion run_excursion(const SideEscape& e, long u, Rng& rng, long double cap) {
  const double uu = rng.uniform_positive();
  if (uu <= static_cast<double>(e.clean(static_cast<long double>(u)))) return {Excursion::Kind::clean, -1};
  // Highest level before the bad event: M = min{Z >= u : bad(Z) < beta} - 1.
  const long double beta = (e.bad(static_cast<long double>(u)) - (1.0L - uu)) / uu;
  long lo = u, step = 1, hi;
  for (;;) {
    hi = u + step;
    if (static_cast<long double>(hi) > cap) return {Excursion::Kind::capped, -1};
    if (e.bad(static_cast<long double>(hi)) < beta) break;
    lo = hi;
    step *= 2;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (e.bad(static_cast<long double>(mid)) < beta ? hi : lo) = mid;
  }
  const long double top = e.descent(static_cast<long double>(lo));
  const long double v = static_cast<long double>(rng.uniform_positive()) * top;
  if (v <= e.descent(0)) return {Excursion::Kind::reach, 0};
  long a = 0, b = lo;  // descent(a) < v <= descent(b)
  while (b - a > 1) {
    const long mid = a + (b - a) / 2;
    (e.descent(static_cast<long double>(mid)) >= v ? b : a) = mid;
  }
  return {Excursion::Kind::dip, b};
}

namespace {

class BallBuilder {
 public:
  BallBuilder(int t, Rng& rng, const BallSamplerOptions& opt)
      : t_(t), entry_(4 * t), rng_(rng), opt_(opt), offspring_(static_cast<std::size_t>(4 * t + 3)) {
    for (std::size_t l = 0; l < offspring_.size(); ++l) offspring_[l] = plus_offspring(static_cast<long>(l));
    out_.threshold = t;
    out_.is_tree_root.push_back(0);
  }

  BallCorners run() {
    run_left();
    std::vector<PhiCorner> left;
    for (std::size_t b = blocks_.size(); b-- > 0;) {
      const std::size_t hi = b + 1 < blocks_.size() ? blocks_[b + 1] : out_.corners.size();
      left.insert(left.end(), out_.corners.begin() + static_cast<long>(blocks_[b]),
                  out_.corners.begin() + static_cast<long>(hi));
    }
    out_.corners = std::move(left);
    out_.right_begin = out_.corners.size();
    run_right();
    return std::move(out_);
  }

 private:
  enum class Mode { full, need_dip, free, group };
  struct Frame {
    long label;
    Mode mode;
    int vertex;
    long remaining;
  };

  long double dip(long c) const {
    if (c <= t_) return 1.0L;
    return w_gap(c, c - t_) / static_cast<long double>(w_of(static_cast<double>(c)));
  }

  void emit(int vertex, long label) {
    if (opt_.keep_corners) out_.corners.push_back({vertex, static_cast<int>(label)});
  }

  int new_vertex(long label, bool root) {
    ++out_.volume;
    const int v = out_.vertex_count++;
    if (opt_.keep_corners) out_.is_tree_root.push_back(root ? 1 : 0);
    emit(v, label);
    return v;
  }

  void push_child(long c, bool dips) {
    if (c <= t_)
      stack_.push_back({c, Mode::full, new_vertex(c, false), 0});
    else if (dips)
      stack_.push_back({c, Mode::need_dip, -1, 0});
    else if (stack_.back().mode == Mode::full)
      emit(stack_.back().vertex, stack_.back().label);
  }

  void pop() {
    stack_.pop_back();
    if (!stack_.empty() && stack_.back().mode == Mode::full) emit(stack_.back().vertex, stack_.back().label);
  }

  long sample_entrances(long y) {
    const auto p = entrance_count_law(y, entry_, t_);
    double u = rng_.uniform();
    for (std::size_t k = 0; k < p.size(); ++k)
      if ((u -= p[k]) < 0) return static_cast<long>(k) + 1;
    return static_cast<long>(p.size());
  }

  // Tree with root label `root`: full when root <= t, otherwise conditioned to dip.
  void grow(long root) {
    if (root <= t_)
      stack_.push_back({root, Mode::full, new_vertex(root, true), 0});
    else
      stack_.push_back({root, Mode::need_dip, -1, 0});
    while (!stack_.empty()) {
      Frame& f = stack_.back();
      switch (f.mode) {
        case Mode::group:
          if (f.remaining == 0) {
            pop();
          } else {
            --f.remaining;
            stack_.push_back({entry_, Mode::need_dip, -1, 0});
          }
          break;
        case Mode::full:
        case Mode::free: {
          const PlusOffspring& o = offspring_[static_cast<std::size_t>(f.label)];
          const double u = rng_.uniform();
          long c;
          if (u < o.to_minus)
            c = f.label - 1;
          else if (u < o.to_same)
            c = f.label;
          else if (u < o.to_plus)
            c = f.label + 1;
          else {
            pop();
            break;
          }
          push_child(c, c <= t_ || rng_.uniform() < static_cast<double>(dip(c)));
          break;
        }
        case Mode::need_dip: {
          if (f.label > entry_) {
            f.remaining = sample_entrances(f.label);
            f.label = entry_;
            f.mode = Mode::group;
            break;
          }
          const long l = f.label;
          const long double dl = dip(l);
          long double x = static_cast<long double>(rng_.uniform()) * 12.0L * dl;
          bool done = false;
          for (long c = std::max(1L, l - 1); c <= l + 1 && !done; ++c) {
            const long double wc = w_of(static_cast<double>(c));
            const long double dc = dip(c);
            if ((x -= wc * dc) < 0) {
              f.mode = Mode::free;
              push_child(c, true);
              done = true;
            } else if ((x -= wc * (1 - dc) * dl) < 0) {
              done = true;  // non-dipping child: nothing to record
            }
          }
          if (!done) {  // rounding at the top end: treat as the last dipping child
            f.mode = Mode::free;
            push_child(l + 1, true);
          }
          break;
        }
      }
    }
  }

  // Skip mode from level t+u; returns the u-level of the bad event (0 when the
  // walk reached t) or -1 when the side stays clean.
  long excursion(const SideEscape& e, long u) {
    out_.residual_risk += static_cast<double>(e.bad(opt_.level_cap) / e.clean(opt_.level_cap));
    const Excursion x = run_excursion(e, u, rng_, opt_.level_cap);
    if (x.kind == Excursion::Kind::capped) out_.capped = true;
    if (x.kind == Excursion::Kind::clean || x.kind == Excursion::Kind::capped) return -1;
    ++out_.bad_events;
    return x.kind == Excursion::Kind::reach ? 0 : x.level;
  }

  void run_right() {
    const SideEscape e{static_cast<long double>(t_), false};
    long y = 0;
    for (;;) {
      if (y <= t_) {
        if (rng_.uniform() < p_down(y)) {
          grow(y);
          --y;
        } else {
          ++y;
        }
        continue;
      }
      const long dip_at = excursion(e, y - t_);
      if (dip_at < 0) return;
      if (dip_at == 0) {
        y = t_;
        continue;
      }
      grow(t_ + dip_at);
      y = t_ + dip_at - 1;
    }
  }

  void run_left() {
    const SideEscape e{static_cast<long double>(t_), true};
    long y = 0;
    auto tree = [&](long root) {
      blocks_.push_back(out_.corners.size());
      grow(root);
    };
    for (;;) {
      if (y <= t_) {
        if (rng_.uniform() < p_up(y)) {
          ++y;
          if (y <= t_ || rng_.uniform() < static_cast<double>(dip(y))) tree(y);
        } else {
          --y;
        }
        continue;
      }
      const long dip_at = excursion(e, y - t_);
      if (dip_at < 0) return;
      if (dip_at == 0) {
        y = t_;
        continue;
      }
      y = t_ + dip_at + 1;
      tree(y);
    }
  }

  int t_;
  long entry_;
  Rng& rng_;
  BallSamplerOptions opt_;
  std::vector<PlusOffspring> offspring_;
  std::vector<Frame> stack_;
  std::vector<std::size_t> blocks_;
  BallCorners out_;
};

}  // namespace

BallCorners sample_ball_corners(int threshold, Rng& rng, BallSamplerOptions opt) {
  if (threshold < 1) throw std::invalid_argument("sample_ball_corners: threshold must be >= 1");
  return BallBuilder(threshold, rng, opt).run();
}

LabelledBall ball_from_corners(const BallCorners& bc) {
  const int n = static_cast<int>(bc.corners.size());
  int f = -1;
  for (int s = 0; s < n && f < 0; ++s) {
    const int k = (static_cast<int>(bc.right_begin) + s) % n;
    if (bc.corners[k].label == 1) f = k;
  }
  if (f < 0) throw std::logic_error("ball_from_corners: no corner with label 1");
  auto phi = phi_from_corners(bc.corners, bc.vertex_count, 0, SuccessorRule::cyclic, 2 * f + 1);
  LabelledBall out;
  out.ball.map = std::move(phi.map);
  out.ball.radius = bc.threshold;
  out.ball.residual_risk = bc.residual_risk;
  out.vertex_label = std::move(phi.vertex_label);
  out.vertex_index = std::move(phi.vertex_index);
  out.half_edge_index = std::move(phi.half_edge_index);
  return out;
}

BallCorners restrict_corners(const BallCorners& bc, int radius, std::vector<int>* index) {
  if (radius > bc.threshold) throw std::invalid_argument("restrict_corners: radius above the threshold");
  BallCorners out;
  out.threshold = radius;
  out.vertex_count = bc.vertex_count;
  out.is_tree_root = bc.is_tree_root;
  out.residual_risk = bc.residual_risk;
  out.capped = bc.capped;
  out.bad_events = bc.bad_events;
  if (index) index->assign(bc.corners.size(), -1);
  std::vector<char> seen(static_cast<std::size_t>(bc.vertex_count), 0);
  out.volume = 1;
  for (std::size_t k = 0; k < bc.corners.size(); ++k) {
    if (k == bc.right_begin) out.right_begin = out.corners.size();
    const PhiCorner& c = bc.corners[k];
    if (c.label > radius) continue;
    if (index) (*index)[k] = static_cast<int>(out.corners.size());
    if (!seen[c.vertex]) {
      seen[c.vertex] = 1;
      ++out.volume;
    }
    out.corners.push_back(c);
  }
  if (bc.right_begin == bc.corners.size()) out.right_begin = out.corners.size();
  return out;
}

long double level_cap_for(int threshold, double epsilon) {
  // Measured: risk * cap stays near 3e4 for t in [8, 64]; run cost does not
  // depend on the cap.
  const long double want = 1.0e5L * (threshold + 1) / std::max(epsilon, 1e-300);
  return std::clamp(want, 1.0e6L, 1.0e15L);
}

LabelledBall sample_uihpq_ball(int radius, double epsilon, Rng& rng) {
  if (radius < 0) throw std::invalid_argument("sample_uihpq_ball: radius >= 0");
  if (radius == 0) {
    LabelledBall out;
    out.vertex_label = {0};
    return out;
  }
  BallSamplerOptions opt;
  opt.level_cap = level_cap_for(radius, epsilon);
  return ball_from_corners(sample_ball_corners(radius, rng, opt));
}

}  // namespace hpq
