#include "halfplane/pruning.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "halfplane/ball_sampler.hpp"
#include "halfplane/schaeffer.hpp"
#include "halfplane/treed_bridge.hpp"

namespace hpq {

std::vector<int> root_direction_boundary(const PlanarMap& map) {
  if (map.root() < 0) return {};
  // outer_contour runs against the root direction: o_j = twin(b_{-j}).
  const auto outer = map.outer_contour();
  std::vector<int> b;
  b.reserve(outer.size());
  b.push_back(map.root());
  for (std::size_t j = outer.size() - 1; j >= 1; --j) b.push_back(map.twin(outer[j]));
  return b;
}

bool has_simple_boundary(const PlanarMap& map) {
  std::vector<char> seen(static_cast<std::size_t>(map.vertex_count()), 0);
  for (int h : root_direction_boundary(map)) {
    char& s = seen[static_cast<std::size_t>(map.origin(h))];
    if (s) return false;
    s = 1;
  }
  return true;
}

PrunedDecomposition prune(const PlanarMap& map) {
  PrunedDecomposition d;
  d.core_vertex.assign(static_cast<std::size_t>(map.vertex_count()), -1);
  if (map.root() < 0) {
    d.core = map;
    d.hanging.emplace_back();
    d.survivors = {0};
    d.boundary_vertex = {0};
    d.core_vertex[0] = 0;
    return d;
  }
  const auto b = root_direction_boundary(map);
  const int P = static_cast<int>(b.size());
  const auto V = static_cast<std::size_t>(map.vertex_count());
  std::vector<int> first(V, -1), last(V, -1);
  d.boundary_vertex.resize(static_cast<std::size_t>(P));
  for (int k = 0; k < P; ++k) {
    const int v = map.origin(b[static_cast<std::size_t>(k)]);
    d.boundary_vertex[static_cast<std::size_t>(k)] = v;
    if (first[static_cast<std::size_t>(v)] < 0) first[static_cast<std::size_t>(v)] = k;
    last[static_cast<std::size_t>(v)] = k;
  }
  std::vector<int> cover(static_cast<std::size_t>(P) + 1, 0);
  for (std::size_t v = 0; v < V; ++v)
    if (first[v] >= 0 && first[v] < last[v]) {
      ++cover[static_cast<std::size_t>(first[v])];
      --cover[static_cast<std::size_t>(last[v])];
    }
  for (int k = 0, c = 0; k < P; ++k) {
    c += cover[static_cast<std::size_t>(k)];
    if (c == 0) d.survivors.push_back(k);
  }

  // Inner faces of a piece are reached from its boundary stretch without
  // crossing the outer face; its vertices are the ones they and the stretch touch.
  const auto face = map.face_of();
  const int outer = map.outer_face();
  std::vector<std::vector<int>> face_edges(static_cast<std::size_t>(map.face_count()));
  for (int h = 0; h < map.half_edge_count(); ++h) face_edges[static_cast<std::size_t>(face[static_cast<std::size_t>(h)])].push_back(h);

  std::vector<char> interior(V, 0), reached(face_edges.size(), 0);
  int prev = -1;
  for (int n : d.survivors) {
    const int vi = d.boundary_vertex[static_cast<std::size_t>(n)];
    if (n - prev - 1 == 0) {
      d.hanging.emplace_back();
      prev = n;
      continue;
    }
    std::vector<char> keep(V, 0);
    keep[static_cast<std::size_t>(vi)] = 1;
    std::vector<int> stack;
    const auto touch = [&](int v) {
      if (!keep[static_cast<std::size_t>(v)]) {
        keep[static_cast<std::size_t>(v)] = 1;
        interior[static_cast<std::size_t>(v)] = 1;
      }
    };
    for (int k = prev + 1; k < n; ++k) {
      const int bk = b[static_cast<std::size_t>(k)];
      touch(map.origin(bk));
      const int f = face[static_cast<std::size_t>(bk)];
      if (f != outer && !reached[static_cast<std::size_t>(f)]) {
        reached[static_cast<std::size_t>(f)] = 1;
        stack.push_back(f);
      }
    }
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      for (int h : face_edges[static_cast<std::size_t>(f)]) {
        touch(map.origin(h));
        const int g = face[static_cast<std::size_t>(map.twin(h))];
        if (g != outer && !reached[static_cast<std::size_t>(g)]) {
          reached[static_cast<std::size_t>(g)] = 1;
          stack.push_back(g);
        }
      }
    }
    d.hanging.push_back(induced_submap(map, keep, b[static_cast<std::size_t>(prev + 1)]));
    prev = n;
  }

  std::vector<char> keep(V, 0);
  int next_id = 0;
  for (std::size_t v = 0; v < V; ++v)
    if (!interior[v]) {
      keep[v] = 1;
      d.core_vertex[v] = next_id++;
    }
  d.core = induced_submap(map, keep, b[static_cast<std::size_t>(d.survivors.front())]);
  return d;
}

PlanarMap reattach(const PrunedDecomposition& d) {
  const PlanarMap& core = d.core;
  if (core.root() < 0) {
    if (d.hanging.size() == 1) return d.hanging.front();
    throw std::invalid_argument("reattach: single-vertex core carries one piece");
  }
  const auto core_b = root_direction_boundary(core);
  if (core_b.size() != d.hanging.size()) throw std::invalid_argument("reattach: one piece per core boundary vertex");

  std::vector<HalfEdge> he(core.half_edges());
  int vertices = core.vertex_count();
  std::vector<int> boundary;  // glued boundary in root direction, global ids
  int root = -1;
  for (std::size_t i = 0; i < core_b.size(); ++i) {
    const PlanarMap& q = d.hanging[i];
    if (q.root() >= 0) {
      const int offset = static_cast<int>(he.size());
      const int attach = core.origin(core_b[i]);
      const int qroot_vertex = q.root_vertex();
      // Piece vertices other than its root vertex get fresh ids.
      std::vector<int> vid(static_cast<std::size_t>(q.vertex_count()), -1);
      for (int v = 0; v < q.vertex_count(); ++v) vid[static_cast<std::size_t>(v)] = v == qroot_vertex ? attach : vertices++;
      for (const HalfEdge& e : q.half_edges())
        he.push_back({e.twin + offset, e.next + offset, vid[static_cast<std::size_t>(e.origin)]});
      for (int h : root_direction_boundary(q)) boundary.push_back(h + offset);
      if (i == 0) root = q.root() + offset;
    }
    boundary.push_back(core_b[i]);
    if (root < 0) root = core_b[i];
  }
  // Outer face: next(twin(b_{k+1})) = twin(b_k), cyclically.
  const std::size_t B = boundary.size();
  for (std::size_t k = 0; k < B; ++k) {
    const int cur = boundary[k], nxt = boundary[(k + 1) % B];
    he[static_cast<std::size_t>(he[static_cast<std::size_t>(nxt)].twin)].next = he[static_cast<std::size_t>(cur)].twin;
  }
  return PlanarMap(vertices, std::move(he), root);
}

// ---- free Boltzmann ----------------------------------------------------------

FreeBoltzmannSampler::FreeBoltzmannSampler(int table_half_length) : bridges_(table_half_length) {}

PlanarMap FreeBoltzmannSampler::sample(Rng& rng) const {
  const long p = PerimeterLaw::sample(rng);
  if (p == 0) return PlanarMap();
  if (p <= bridges_.max_half_length()) return phi_positive(sample_B_p(static_cast<int>(p), bridges_, rng)).map;
  const ConditionedBridgeSampler own(static_cast<int>(p));
  return phi_positive(sample_B_p(static_cast<int>(p), own, rng)).map;
}

FreeBoltzmannSampler::AreaDraw FreeBoltzmannSampler::sample_area(Rng& rng, std::size_t area_cap) const {
  AreaDraw out;
  out.half_perimeter = PerimeterLaw::sample(rng);
  if (out.half_perimeter == 0) return out;
  if (out.half_perimeter > bridges_.max_half_length()) {
    out.censored = true;
    return out;
  }
  const auto x = bridges_.sample(static_cast<int>(out.half_perimeter), rng);
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (x[(i + 1) % n] != x[i] - 1) continue;
    const auto size = sample_rho_plus_size(x[i], rng, area_cap - out.area);
    if (!size) {
      out.censored = out.over_cap = true;
      out.area = area_cap;
      return out;
    }
    out.area += *size;
  }
  return out;
}

// ---- simple boundary of the half-plane ----------------------------------------

namespace {

// Classes of equal boundary vertices on the right side.  Positions i < j at
// level y are one vertex iff no tree in [i, j) reaches a label <= y; a tree
// with min m at level x closes the open class of every level in [m, x].
class RightClasses {
 public:
  explicit RightClasses(long window) : cover_(static_cast<std::size_t>(window) + 2, 0), window_(window) {}

  void visit(long level, long pos) {
    grow(level);
    auto& c = cls_[static_cast<std::size_t>(level)];
    if (!c.open) {
      c.open = true;
      c.start = pos;
    }
    c.last = pos;
  }
  // Tree at level x with min m: classes closed, each erasing [start, last).
  void close(long m, long x) {
    for (long y = m; y <= std::min<long>(x, static_cast<long>(cls_.size()) - 1); ++y) {
      auto& c = cls_[static_cast<std::size_t>(y)];
      if (!c.open) continue;
      erase(c.start, c.last);
      c.open = false;
    }
  }
  void erase(long a, long b) {
    if (a >= b) return;
    ++cover_[static_cast<std::size_t>(a)];
    --cover_[static_cast<std::size_t>(std::min(b, window_ + 1))];
  }
  std::vector<long> open_levels() const {
    std::vector<long> out;
    for (std::size_t y = 0; y < cls_.size(); ++y)
      if (cls_[y].open) out.push_back(static_cast<long>(y));
    return out;
  }
  long start(long y) const { return cls_[static_cast<std::size_t>(y)].start; }
  long last(long y) const { return cls_[static_cast<std::size_t>(y)].last; }
  void drop(long y) { cls_[static_cast<std::size_t>(y)].open = false; }

  std::vector<long> survivors() const {
    std::vector<long> out;
    int c = 0;
    for (long k = 0; k <= window_; ++k) {
      c += cover_[static_cast<std::size_t>(k)];
      if (c == 0) out.push_back(k);
    }
    return out;
  }

 private:
  struct Cls {
    long start = 0, last = 0;
    bool open = false;
  };
  void grow(long level) {
    if (static_cast<std::size_t>(level) >= cls_.size()) cls_.resize(static_cast<std::size_t>(level) * 2 + 2);
  }
  std::vector<Cls> cls_;
  std::vector<int> cover_;
  long window_;
};

}  // namespace

SimpleBoundarySample sample_simple_boundary(long window, Rng& rng, long double level_cap) {
  if (window < 1) throw std::invalid_argument("sample_simple_boundary: window >= 1");
  SimpleBoundarySample out;
  RightClasses cls(window);
  std::vector<int> x(static_cast<std::size_t>(window) + 1);
  long level = 0;
  for (long k = 0;; ++k) {
    x[static_cast<std::size_t>(k)] = static_cast<int>(level);
    cls.visit(level, k);
    if (k == window) break;
    if (rng.uniform() < p_down(level)) {
      cls.close(sample_plus_min(level, level, rng), level);
      --level;
    } else {
      ++level;
    }
  }

  const auto note_risk = [&](const SideEscape& e) {
    out.residual_risk += static_cast<double>(e.bad(level_cap) / e.clean(level_cap));
  };

  // Right future: an open class either meets a tree reaching its level, or
  // the walk revisits the level (the class runs past the window), or neither.
  std::set<long> open;
  for (long y : cls.open_levels()) open.insert(y);
  const auto extend = [&](long y) {
    if (open.erase(y)) {
      cls.erase(cls.start(y), window + 1);
      cls.drop(y);
    }
  };
  const auto close_range = [&](long m, long top) {
    for (auto it = open.lower_bound(m); it != open.end() && *it <= top;) {
      cls.erase(cls.start(*it), cls.last(*it));
      cls.drop(*it);
      it = open.erase(it);
    }
  };
  while (!open.empty()) {
    const long y1 = *open.rbegin();
    if (level <= y1) {
      ++out.future_steps;
      if (rng.uniform() < p_down(level)) {
        close_range(sample_plus_min(level, level, rng), level);
        --level;
      } else {
        ++level;
      }
      extend(level);
      continue;
    }
    const SideEscape e{static_cast<long double>(y1), false};
    note_risk(e);
    const Excursion ex = run_excursion(e, level - y1, rng, level_cap);
    if (ex.kind == Excursion::Kind::clean) break;
    if (ex.kind == Excursion::Kind::capped) {
      out.capped = true;
      break;
    }
    if (ex.kind == Excursion::Kind::reach) {
      level = y1;
      extend(y1);
      continue;
    }
    const long root = y1 + ex.level;
    close_range(sample_plus_min(root, y1, rng), y1);
    level = root - 1;
    extend(level);
  }

  // Classes that never close.  Level 0 is the root vertex.  Any other such
  // level y continues on the left side exactly when, walking away from the
  // root, the left walk is at y at or after its last tree reaching <= y.
  std::vector<long> wrap(open.begin(), open.end());
  if (!wrap.empty() && wrap.front() == 0) {
    cls.erase(0, cls.last(0));
    wrap.erase(wrap.begin());
  }
  if (!wrap.empty() && !out.capped) {
    const long ystar = wrap.back();
    std::vector<char> in_wrap(static_cast<std::size_t>(ystar) + 1, 0), seen(in_wrap.size(), 0);
    for (long y : wrap) in_wrap[static_cast<std::size_t>(y)] = 1;
    const auto reset = [&](long m, long top) {
      for (long y = m; y <= std::min(top, ystar); ++y) seen[static_cast<std::size_t>(y)] = 0;
    };
    const auto mark = [&](long y) {
      if (y <= ystar && in_wrap[static_cast<std::size_t>(y)]) seen[static_cast<std::size_t>(y)] = 1;
    };
    long l = 0;
    for (;;) {
      if (l <= ystar) {
        ++out.future_steps;
        if (rng.uniform() < p_up(l)) {
          ++l;
          reset(sample_plus_min(l, l, rng), l);
        } else {
          --l;
        }
        mark(l);
        continue;
      }
      const SideEscape e{static_cast<long double>(ystar), true};
      note_risk(e);
      const Excursion ex = run_excursion(e, l - ystar, rng, level_cap);
      if (ex.kind == Excursion::Kind::clean) break;
      if (ex.kind == Excursion::Kind::capped) {
        out.capped = true;
        break;
      }
      if (ex.kind == Excursion::Kind::reach) {
        l = ystar;
        mark(l);
        continue;
      }
      l = ystar + ex.level + 1;
      reset(sample_plus_min(l, ystar, rng), ystar);
    }
    for (long y : wrap) cls.erase(seen[static_cast<std::size_t>(y)] ? 0 : cls.start(y), cls.last(y));
  }

  out.survivors = cls.survivors();
  out.labels.reserve(out.survivors.size());
  for (long n : out.survivors) out.labels.push_back(x[static_cast<std::size_t>(n)]);
  return out;
}

std::vector<long> hanging_perimeters(const SimpleBoundarySample& s) {
  std::vector<long> out;
  for (std::size_t i = 1; i < s.survivors.size(); ++i) out.push_back(s.survivors[i] - s.survivors[i - 1] - 1);
  return out;
}

}  // namespace hpq
