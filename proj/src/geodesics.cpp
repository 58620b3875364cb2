#include "halfplane/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "halfplane/laws.hpp"

namespace hpq {

CornerIndex::CornerIndex(std::span<const PhiCorner> corners, int vertex_count)
    : corners_(corners),
      successor_(successors(corners, 0, SuccessorRule::cyclic)),
      first_(static_cast<std::size_t>(vertex_count), -1),
      last_(static_cast<std::size_t>(vertex_count), -1) {
  for (int k = 0; k < static_cast<int>(corners.size()); ++k) {
    const int v = corners[k].vertex;
    if (first_[v] < 0) first_[v] = k;
    last_[v] = k;
  }
}

int CornerIndex::vertex_of_successor(int corner) const {
  const int s = successor_[corner];
  if (s == to_delta) return delta_vertex;
  if (s < 0) throw std::runtime_error("unresolved successor");
  return corners_[s].vertex;
}

GeodesicRay rightmost_ray(const CornerIndex& idx, int depth) {
  GeodesicRay ray;
  ray.depth = depth;
  ray.corners.assign(static_cast<std::size_t>(depth), -1);
  int found = 0;
  const auto corners = idx.corners();
  for (int k = 0; k < static_cast<int>(corners.size()) && found < depth; ++k) {
    const int l = corners[k].label;
    if (l >= 1 && l <= depth && ray.corners[l - 1] < 0) {
      ray.corners[l - 1] = k;
      ++found;
    }
  }
  if (found < depth) throw std::runtime_error("rightmost_ray: some label up to depth is missing");
  return ray;
}

std::vector<int> gamma_n(const CornerIndex& idx, std::span<const char> tree_root, int n) {
  const auto corners = idx.corners();
  int start = -1;
  for (const PhiCorner& c : corners)
    if (c.label == n && tree_root[c.vertex]) {
      start = c.vertex;
      break;
    }
  if (start < 0) return {};
  std::vector<int> out(static_cast<std::size_t>(n));
  out[n - 1] = idx.last_corner(start);
  for (int i = n - 1; i >= 1; --i) out[i - 1] = idx.last_corner(idx.vertex_of_successor(out[i]));
  return out;
}

GeodesicRay leftmost_ray(const CornerIndex& idx, std::span<const char> tree_root, int depth, int max_start) {
  GeodesicRay out;
  out.depth = depth;
  out.certified = false;
  const GeodesicRay right = rightmost_ray(idx, max_start);
  const auto corners = idx.corners();
  for (int n = depth; n <= max_start; ++n) {
    const auto g = gamma_n(idx, tree_root, n);
    if (g.empty()) continue;
    for (int m = depth; m <= n; ++m) {
      if (corners[g[m - 1]].vertex != corners[right.corners[m - 1]].vertex) continue;
      out.corners.assign(g.begin(), g.begin() + depth);
      out.certified = true;
      out.start_label = n;
      return out;
    }
  }
  return out;
}

bool ray_well_formed(const CornerIndex& idx, const GeodesicRay& ray) {
  const auto corners = idx.corners();
  if (static_cast<int>(ray.corners.size()) != ray.depth) return false;
  for (int i = 1; i <= ray.depth; ++i)
    if (corners[ray.corners[i - 1]].label != i) return false;
  for (int i = 1; i < ray.depth; ++i)
    if (idx.vertex_of_successor(ray.corners[i]) != corners[ray.corners[i - 1]].vertex) return false;
  return ray.depth == 0 || idx.vertex_of_successor(ray.corners[0]) == delta_vertex;
}

std::vector<char> tree_root_flags(const CornerTable& table) {
  std::vector<char> flags(static_cast<std::size_t>(table.vertex_count), 0);
  for (std::size_t k = 0; k < table.corners.size(); ++k)
    if (table.origin[k].depth == 0) flags[table.corners[k].vertex] = 1;
  return flags;
}

namespace {

double window_risk(const TreedBridge& w, int level) {
  const long yl = w.bridge.at(w.bridge.first()), yr = w.bridge.at(w.bridge.last());
  if (yl <= level || yr <= level) throw std::runtime_error("uncertified leftmost corner");
  return (1.0 - future_clean_left(yl, level)) + (1.0 - future_clean_right(yr, level));
}

void require_positive_window(const TreedBridge& w) {
  if (w.bridge.cyclic() || w.kind != TreedKind::positive)
    throw std::invalid_argument("geodesic rays: needs a positive window");
}

}  // namespace

GeodesicRay rightmost_ray(const TreedBridge& window, int depth) {
  require_positive_window(window);
  const double risk = window_risk(window, depth);
  const CornerTable t = real_corners(window);
  const CornerIndex idx(t.corners, t.vertex_count);
  GeodesicRay ray = rightmost_ray(idx, depth);
  ray.residual_risk = risk;
  return ray;
}

GeodesicRay leftmost_ray(const TreedBridge& window, int depth) {
  require_positive_window(window);
  const long yl = window.bridge.at(window.bridge.first()), yr = window.bridge.at(window.bridge.last());
  const int max_start = static_cast<int>(std::min(yl, yr)) - 1;
  if (max_start < depth) throw std::runtime_error("uncertified leftmost corner");
  const CornerTable t = real_corners(window);
  const CornerIndex idx(t.corners, t.vertex_count);
  const auto roots = tree_root_flags(t);
  GeodesicRay ray = leftmost_ray(idx, roots, depth, max_start);
  if (!ray.certified) throw std::runtime_error("leftmost ray did not stabilise inside the window");
  ray.residual_risk = window_risk(window, ray.start_label);
  return ray;
}

std::vector<int> ray_half_edges(const GeodesicRay& ray, std::span<const int> half_edge_index) {
  std::vector<int> path;
  path.reserve(ray.corners.size());
  for (int c : ray.corners) {
    const int h = half_edge_index[2 * c + 1];
    if (h < 0) throw std::logic_error("ray_half_edges: chord outside the map");
    path.push_back(h);
  }
  return path;
}

// ---- cutting --------------------------------------------------------------

CutMap cut_along_path(const PlanarMap& map, std::span<const int> path, int root) {
  const int n = map.half_edge_count(), nv = map.vertex_count();
  const int d = static_cast<int>(path.size());
  if (d == 0) throw std::invalid_argument("cut_along_path: empty path");
  if (map.origin(root) != map.origin(path[0])) throw std::invalid_argument("cut_along_path: root off the path start");
  for (int k = 1; k < d; ++k)
    if (map.origin(path[k]) != map.target(path[k - 1])) throw std::invalid_argument("cut_along_path: broken path");

  const int total = n + 2 * d;
  std::vector<int> sigma(static_cast<std::size_t>(total)), origin(static_cast<std::size_t>(total)),
      twin(static_cast<std::size_t>(total));
  for (int h = 0; h < n; ++h) {
    sigma[h] = map.sigma(h);
    origin[h] = map.origin(h);
    twin[h] = map.twin(h);
  }
  auto e_left = [&](int k) { return n + 2 * k; };      // copy of path[k]
  auto t_left = [&](int k) { return n + 2 * k + 1; };  // copy of twin(path[k])
  for (int k = 0; k < d; ++k) {
    twin[e_left(k)] = t_left(k);
    twin[t_left(k)] = e_left(k);
    origin[e_left(k)] = nv + k;
    origin[t_left(k)] = k + 1 < d ? nv + k + 1 : map.target(path[k]);
  }

  // Split the rotation at a path vertex: clockwise from `forward` to `back`
  // stays on the right; the rest moves to the left copy, framed by the copies.
  auto split = [&](int forward, int back, int fwd_copy, int back_copy, int left_vertex) {
    std::vector<int> cycle{forward};
    for (int h = map.sigma(forward); h != forward; h = map.sigma(h)) cycle.push_back(h);
    const auto pos = std::find(cycle.begin(), cycle.end(), back) - cycle.begin();
    if (pos == static_cast<long>(cycle.size())) throw std::logic_error("cut_along_path: path not at vertex");
    sigma[back] = forward;
    std::vector<int> left_arc(cycle.begin() + pos + 1, cycle.end());
    // Left copy, clockwise: back_copy (if any), arc, fwd_copy.
    std::vector<int> ring;
    if (back_copy >= 0) ring.push_back(back_copy);
    ring.insert(ring.end(), left_arc.begin(), left_arc.end());
    ring.push_back(fwd_copy);
    for (std::size_t i = 0; i < ring.size(); ++i) {
      sigma[ring[i]] = ring[(i + 1) % ring.size()];
      origin[ring[i]] = left_vertex;
    }
  };
  // v_0: the right copy runs clockwise from e_1 to the root.
  split(path[0], root, e_left(0), -1, nv);
  for (int k = 1; k < d; ++k) split(path[k], map.twin(path[k - 1]), e_left(k), t_left(k - 1), nv + k);
  // v_D stays whole; the doubled last edge bounds a digon.
  const int t_last = map.twin(path[d - 1]);
  sigma[t_left(d - 1)] = map.sigma(t_last) == t_last ? t_last : map.sigma(t_last);
  sigma[t_last] = t_left(d - 1);

  std::vector<HalfEdge> he(static_cast<std::size_t>(total));
  for (int h = 0; h < total; ++h) he[h] = {twin[h], sigma[twin[h]], origin[h]};
  CutMap out;
  out.vertex_source.resize(static_cast<std::size_t>(nv + d));
  for (int v = 0; v < nv; ++v) out.vertex_source[v] = v;
  for (int k = 0; k < d; ++k) out.vertex_source[nv + k] = k == 0 ? map.origin(path[0]) : map.target(path[k - 1]);
  out.left_copy.resize(static_cast<std::size_t>(n));
  for (int h = 0; h < n; ++h) out.left_copy[h] = h;
  for (int k = 0; k < d; ++k) {
    out.left_copy[path[k]] = e_left(k);
    out.left_copy[map.twin(path[k])] = t_left(k);
  }
  out.right_root = root;
  out.left_root = e_left(0);
  out.map = PlanarMap(nv + d, std::move(he), root);
  return out;
}

PlanarMap component_submap(const PlanarMap& map, const std::vector<char>& keep, int root) {
  const int nv = map.vertex_count();
  std::vector<std::vector<int>> out(static_cast<std::size_t>(nv));
  for (int h = 0; h < map.half_edge_count(); ++h) out[map.origin(h)].push_back(map.target(h));
  std::vector<char> reached(static_cast<std::size_t>(nv), 0);
  const int r = map.origin(root);
  if (!keep[r]) throw std::invalid_argument("component_submap: root vertex not kept");
  std::deque<int> queue{r};
  reached[r] = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : out[v])
      if (keep[w] && !reached[w]) {
        reached[w] = 1;
        queue.push_back(w);
      }
  }
  return induced_submap(map, reached, root);
}

namespace {

std::vector<char> labels_at_most(const std::vector<int>& source, std::span<const int> labels, int max_label) {
  std::vector<char> keep(source.size());
  for (std::size_t v = 0; v < source.size(); ++v) keep[v] = labels[source[v]] <= max_label;
  return keep;
}

}  // namespace

RaySides split_along_ray(const PlanarMap& map, std::span<const int> labels, std::span<const int> path,
                         int max_label) {
  const CutMap cut = cut_along_path(map, path, map.root());
  const auto keep = labels_at_most(cut.vertex_source, labels, max_label);
  return {component_submap(cut.map, keep, cut.left_root), component_submap(cut.map, keep, cut.right_root)};
}

PencilTriple pencil_split(const PlanarMap& map, std::span<const int> labels, std::span<const int> left_path,
                          std::span<const int> right_path, int max_label) {
  const CutMap first = cut_along_path(map, right_path, map.root());
  std::vector<int> inner;
  inner.reserve(left_path.size());
  for (int h : left_path) inner.push_back(first.left_copy[h]);
  const CutMap second = cut_along_path(first.map, inner, first.left_root);
  std::vector<int> source(second.vertex_source.size());
  for (std::size_t v = 0; v < source.size(); ++v) source[v] = first.vertex_source[second.vertex_source[v]];
  const auto keep1 = labels_at_most(first.vertex_source, labels, max_label);
  const auto keep2 = labels_at_most(source, labels, max_label);
  PencilTriple out;
  out.right = component_submap(first.map, keep1, first.right_root);
  out.middle = component_submap(second.map, keep2, second.right_root);
  out.left = component_submap(second.map, keep2, second.left_root);
  return out;
}

// ---- cut points -----------------------------------------------------------

double cut_point_probability(int k) { return (k + 3.0) / (3.0 * (k + 1.0)); }

namespace {

// log of prod_{j=a}^{b} w_j / 2.
long double log_half_w(long a, long b) {
  long double s = 0;
  for (long j = a; j <= b; ++j) s += std::log1p(-2.0L / ((j + 1.0L) * (j + 2.0L)));
  return s;
}

}  // namespace

std::vector<char> cut_points(int k_max, Rng& rng) {
  if (k_max < 1) throw std::invalid_argument("cut_points: k_max >= 1");
  const int m = k_max;
  std::vector<int> tree_min(static_cast<std::size_t>(m + 1), std::numeric_limits<int>::max());
  // Trees at -i for 2 <= i <= m: min label by plain inversion.
  for (int i = 2; i <= m; ++i) tree_min[i] = static_cast<int>(sample_plus_min(i, i, rng));
  // Trees beyond m that reach label <= m: the probability that none of
  // T(-(L+1)), ..., T(-N) does telescopes to prod_{j=L-m+1}^{L} w_j / prod_{j=N-m+1}^{N} w_j.
  int beyond = std::numeric_limits<int>::max();  // smallest min label among trees beyond m
  long last = m;
  for (;;) {
    const long double log_num = log_half_w(last - m + 1, last);
    const long double log_u = std::log(static_cast<long double>(rng.uniform_positive()));
    if (log_u <= log_num) break;  // none of the remaining trees reaches m
    // Smallest N with log_num - log_half_w(N-m+1, N) < log_u.
    auto survives_to = [&](long n) { return log_num - log_half_w(n - m + 1, n) >= log_u; };
    long lo = last, hi = last + 1;
    while (survives_to(hi)) {
      lo = hi;
      hi = last + 2 * (hi - last);
    }
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      (survives_to(mid) ? lo : hi) = mid;
    }
    beyond = std::min(beyond, static_cast<int>(sample_plus_min(hi, m, rng)));
    last = hi;
  }
  std::vector<char> out(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    int lowest = beyond;
    for (int i = k + 1; i <= m; ++i) lowest = std::min(lowest, tree_min[i]);
    out[k - 1] = lowest > k;
  }
  return out;
}

// ---- unconstrained windows --------------------------------------------------

std::vector<int> proper_ray(const CornerTable& table, std::span<const int> forward_successor, int vertex) {
  int c = -1;
  for (int k = 0; k < static_cast<int>(table.corners.size()); ++k)
    if (table.corners[k].vertex == vertex) {
      c = k;
      break;
    }
  if (c < 0) throw std::invalid_argument("proper_ray: vertex has no corner");
  std::vector<int> chain{c};
  while (forward_successor[c] >= 0) {
    c = forward_successor[c];
    chain.push_back(c);
  }
  return chain;
}

LabelsLimitReport labels_as_limit_check(const WindowedMap& w, Rng& rng, int core_radius, int sources, int targets) {
  LabelsLimitReport rep;
  rep.trusted_radius = w.trusted_radius;
  if (w.trusted_radius <= core_radius) throw std::runtime_error("labels_as_limit_check: trusted region too small");
  const auto& map = w.map;
  const int rho = map.root_vertex();
  const auto d_rho = map.distances_from(rho);
  std::vector<int> core, frontier;
  for (int v = 0; v < map.vertex_count(); ++v) {
    if (!w.trusted[v] || d_rho[v] < 0) continue;
    if (d_rho[v] <= core_radius) core.push_back(v);
    if (d_rho[v] == w.trusted_radius) frontier.push_back(v);
  }
  for (int s = 0; s < sources; ++s) {
    const int x = core[rng.below(core.size())];
    const auto d_x = map.distances_from(x);
    const int target = w.vertex_label[x] - w.vertex_label[rho];
    for (int k = 0; k < targets; ++k) {
      const int z = frontier[rng.below(frontier.size())];
      const int diff = d_x[z] - d_rho[z] - target;
      ++rep.probes;
      if (diff == 0) ++rep.holding;
      rep.max_violation = std::max(rep.max_violation, std::abs(diff));
    }
  }
  return rep;
}

}  // namespace hpq
