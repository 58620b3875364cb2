#include "halfplane/schaeffer.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace hpq {

std::vector<int> successors(std::span<const PhiCorner> corners, int delta_label, SuccessorRule rule) {
  const int n = static_cast<int>(corners.size());
  std::vector<int> succ(n, unresolved);
  if (n == 0) return succ;
  int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
  for (const PhiCorner& c : corners) {
    lo = std::min(lo, c.label);
    hi = std::max(hi, c.label);
  }
  // nearest[l - lo + 1]: closest corner to the right with label l.
  std::vector<int> nearest(static_cast<std::size_t>(hi - lo + 2), -1);
  auto slot = [&](int label) -> int& { return nearest[static_cast<std::size_t>(label - lo + 1)]; };
  const bool cyclic = rule == SuccessorRule::cyclic;
  for (int pass = cyclic ? 2 : 1; pass >= 1; --pass) {
    for (int i = n - 1; i >= 0; --i) {
      const int l = corners[i].label;
      if (pass == 1) {
        if (cyclic && l == delta_label + 1) {
          succ[i] = to_delta;
        } else if (l - 1 >= lo - 1) {
          const int s = slot(l - 1);
          if (s >= 0) succ[i] = s;
        }
      }
      slot(l) = i;
    }
  }
  return succ;
}

PhiOutput phi_from_corners(std::span<const PhiCorner> corners, int vertex_count, int delta_label,
                           SuccessorRule rule, int root) {
  const int n = static_cast<int>(corners.size());
  PhiOutput out;
  out.successor = successors(corners, delta_label, rule);
  const auto& succ = out.successor;
  if (root < 0 || root >= 2 * n || succ[root / 2] == unresolved)
    throw std::invalid_argument("phi: root chord is not available");

  // In-chords per target corner, ordered by (source - target) mod n, i.e.
  // longest arc first.
  std::vector<int> in_start(static_cast<std::size_t>(n) + 1, 0);
  for (int k = 0; k < n; ++k)
    if (succ[k] >= 0) ++in_start[succ[k] + 1];
  for (int k = 0; k < n; ++k) in_start[k + 1] += in_start[k];
  std::vector<int> in_list(static_cast<std::size_t>(in_start[n]));
  {
    std::vector<int> fill(in_start.begin(), in_start.end() - 1);
    for (int k = 0; k < n; ++k)
      if (succ[k] >= 0) in_list[fill[succ[k]]++] = k;
  }
  for (int c = 0; c < n; ++c) {
    auto first = in_list.begin() + in_start[c], last = in_list.begin() + in_start[c + 1];
    std::sort(first, last, [&](int a, int b) { return (a - c + n) % n < (b - c + n) % n; });
  }

  // Counterclockwise rotation lists, stored vertex by vertex.
  std::vector<std::vector<int>> corners_of(static_cast<std::size_t>(vertex_count));
  for (int k = 0; k < n; ++k) corners_of[corners[k].vertex].push_back(k);
  std::vector<int> rot_start(static_cast<std::size_t>(vertex_count) + 1, 0);
  std::vector<int> rotation;
  rotation.reserve(2 * static_cast<std::size_t>(n));
  for (int v = 0; v < vertex_count; ++v) {
    rot_start[v] = static_cast<int>(rotation.size());
    if (v == delta_vertex) {
      for (int k = 0; k < n; ++k)
        if (succ[k] == to_delta) rotation.push_back(2 * k + 1);
    } else {
      const auto& cs = corners_of[v];
      for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
        const int c = *it;
        if (succ[c] != unresolved) rotation.push_back(2 * c);
        for (int j = in_start[c]; j < in_start[c + 1]; ++j) rotation.push_back(2 * in_list[j] + 1);
      }
    }
  }
  rot_start[vertex_count] = static_cast<int>(rotation.size());

  std::vector<int> place(2 * static_cast<std::size_t>(n), -1);
  std::vector<int> owner(2 * static_cast<std::size_t>(n), -1);
  for (int v = 0; v < vertex_count; ++v)
    for (int j = rot_start[v]; j < rot_start[v + 1]; ++j) {
      place[rotation[j]] = j;
      owner[rotation[j]] = v;
    }
  // sigma turns clockwise: predecessor in the counterclockwise list.
  auto sigma = [&](int h) {
    const int v = owner[h];
    const int j = place[h] == rot_start[v] ? rot_start[v + 1] - 1 : place[h] - 1;
    return rotation[j];
  };

  // Keep the component of the root.
  std::vector<int> new_half(2 * static_cast<std::size_t>(n), -1);
  std::vector<int> order{root};
  new_half[root] = 0;
  for (std::size_t q = 0; q < order.size(); ++q) {
    const int h = order[q];
    for (int g : {h ^ 1, sigma(h ^ 1)})
      if (new_half[g] < 0) {
        new_half[g] = static_cast<int>(order.size());
        order.push_back(g);
      }
  }
  std::vector<int> new_vertex(static_cast<std::size_t>(vertex_count), -1);
  int vertices = 0;
  std::vector<HalfEdge> he(order.size());
  for (std::size_t q = 0; q < order.size(); ++q) {
    const int h = order[q];
    const int v = owner[h];
    if (new_vertex[v] < 0) new_vertex[v] = vertices++;
    he[q].origin = new_vertex[v];
    he[q].twin = new_half[h ^ 1];
    he[q].next = new_half[sigma(h ^ 1)];
  }
  if (order.size() == 1) throw std::logic_error("phi: dangling root");

  out.vertex_label.assign(static_cast<std::size_t>(vertices), 0);
  for (int k = 0; k < n; ++k)
    if (new_vertex[corners[k].vertex] >= 0) out.vertex_label[new_vertex[corners[k].vertex]] = corners[k].label;
  if (new_vertex[delta_vertex] >= 0) out.vertex_label[new_vertex[delta_vertex]] = delta_label;
  out.map = PlanarMap(vertices, std::move(he), 0);
  out.vertex_index = std::move(new_vertex);
  out.half_edge_index = std::move(new_half);
  return out;
}

CornerTable real_corners(const TreedBridge& b) {
  CornerTable t;
  const long lo = b.bridge.cyclic() ? 0 : b.bridge.first();
  const long hi = b.bridge.cyclic() ? b.bridge.length() - 1 : b.bridge.last();
  t.bridge_first = lo;
  t.first_at_or_after.assign(static_cast<std::size_t>(hi - lo + 2), 0);
  int next_vertex = 1;
  for (long i = lo; i <= hi; ++i) {
    t.first_at_or_after[static_cast<std::size_t>(i - lo)] = static_cast<int>(t.corners.size());
    const auto it = b.trees.find(i);
    if (it == b.trees.end()) continue;
    const LabelledTree& tree = it->second;
    const auto depth = tree.depths();
    for (std::size_t v : tree.contour()) {
      t.corners.push_back({next_vertex + static_cast<int>(v), tree.label(v)});
      t.origin.push_back({i, static_cast<int>(v), tree.label(v), depth[v]});
    }
    next_vertex += static_cast<int>(tree.vertex_count());
  }
  t.first_at_or_after.back() = static_cast<int>(t.corners.size());
  t.vertex_count = next_vertex;
  return t;
}

namespace {

int first_corner_at_or_after(const CornerTable& t, long position) {
  return t.first_at_or_after[static_cast<std::size_t>(position - t.bridge_first)];
}

// First corner with the given label at or after `start`, wrapping when cyclic.
int scan_for_label(const CornerTable& t, int start, int label, bool wrap) {
  const int n = static_cast<int>(t.corners.size());
  for (int s = 0; s < n; ++s) {
    const int k = start + s;
    if (k >= n && !wrap) break;
    if (t.corners[k % n].label == label) return k % n;
  }
  return -1;
}

// Root chord: the image of the bridge edge from position 0 to position 1.
int root_half_edge(const CornerTable& t, const Bridge& b, bool wrap) {
  const int x0 = b.at(0);
  if (b.at(1) == x0 + 1) {
    const int f = scan_for_label(t, first_corner_at_or_after(t, 1), x0 + 1, wrap);
    if (f < 0) throw std::invalid_argument("phi: no corner carries the root edge");
    return 2 * f + 1;
  }
  // Down-step at 0: out-chord of the last corner of T(0).
  return 2 * (first_corner_at_or_after(t, 1) - 1);
}

}  // namespace

PointedMap phi_pointed(const TreedBridge& b) {
  std::string why;
  if (!b.bridge.cyclic()) throw std::invalid_argument("phi_pointed: needs a finite treed bridge");
  if (!b.valid(&why)) throw std::invalid_argument("phi_pointed: malformed treed bridge: " + why);
  const CornerTable t = real_corners(b);
  int min_label = std::numeric_limits<int>::max();
  for (const PhiCorner& c : t.corners) min_label = std::min(min_label, c.label);
  const int delta_label = min_label - 1;
  auto phi = phi_from_corners(t.corners, t.vertex_count, delta_label, SuccessorRule::cyclic,
                              root_half_edge(t, b.bridge, true));
  return {std::move(phi.map), delta_label, std::move(phi.vertex_label)};
}

PointedMap phi_positive(const TreedBridge& b) {
  if (b.kind != TreedKind::positive) throw std::invalid_argument("phi_positive: needs a positive treed bridge");
  PointedMap m = phi_pointed(b);
  if (m.delta_label != 0) throw std::logic_error("phi_positive: added vertex must carry label 0");
  return m;
}

BallMap phi_infinite_positive_window(const TreedBridge& b, int radius) {
  if (b.bridge.cyclic() || b.kind != TreedKind::positive)
    throw std::invalid_argument("phi_infinite_positive_window: needs a positive window");
  BallMap out;
  out.radius = radius;
  const long yl = b.bridge.at(b.bridge.first()), yr = b.bridge.at(b.bridge.last());
  if (yl <= radius || yr <= radius) throw std::runtime_error("unresolved successor: window ends at a low level");
  out.residual_risk = (1.0 - future_clean_left(yl, radius)) + (1.0 - future_clean_right(yr, radius));
  if (radius <= 0) return out;

  const CornerTable full = real_corners(b);
  CornerTable t;
  t.bridge_first = full.bridge_first;
  t.vertex_count = full.vertex_count;
  t.first_at_or_after.reserve(full.first_at_or_after.size());
  std::size_t f = 0;
  for (std::size_t k = 0; k <= full.corners.size(); ++k) {
    while (f < full.first_at_or_after.size() && full.first_at_or_after[f] == static_cast<int>(k)) {
      t.first_at_or_after.push_back(static_cast<int>(t.corners.size()));
      ++f;
    }
    if (k < full.corners.size() && full.corners[k].label <= radius) {
      t.corners.push_back(full.corners[k]);
      t.origin.push_back(full.origin[k]);
    }
  }
  if (t.corners.empty()) throw std::runtime_error("unresolved successor: no label-1 corner in window");
  auto phi = phi_from_corners(t.corners, t.vertex_count, 0, SuccessorRule::cyclic,
                              root_half_edge(t, b.bridge, true));
  out.map = std::move(phi.map);
  return out;
}

WindowedMap phi_unconstrained_window(const TreedBridge& b) {
  if (b.bridge.cyclic()) throw std::invalid_argument("phi_unconstrained_window: needs a window");
  const CornerTable t = real_corners(b);
  const int root = root_half_edge(t, b.bridge, false);
  auto phi = phi_from_corners(t.corners, t.vertex_count, std::numeric_limits<int>::min() / 2,
                              SuccessorRule::forward, root);
  WindowedMap out;
  out.map = std::move(phi.map);
  out.vertex_label = std::move(phi.vertex_label);
  out.trusted.assign(static_cast<std::size_t>(out.map.vertex_count()), 1);

  // A corner is safe when its chord is resolved and no corner left of the
  // window can reach it: some real corner with label <= l precedes it.
  int prefix_min = std::numeric_limits<int>::max();
  for (std::size_t k = 0; k < t.corners.size(); ++k) {
    const PhiCorner& c = t.corners[k];
    const int v = phi.vertex_index[c.vertex];
    const bool safe = phi.successor[k] != unresolved && prefix_min <= c.label;
    if (v >= 0 && !safe) out.trusted[v] = 0;
    prefix_min = std::min(prefix_min, c.label);
  }
  const auto d = out.map.distances_from_root();
  int nearest_untrusted = std::numeric_limits<int>::max();
  for (int v = 0; v < out.map.vertex_count(); ++v)
    if (!out.trusted[v]) nearest_untrusted = std::min(nearest_untrusted, d[v]);
  out.trusted_radius = nearest_untrusted == std::numeric_limits<int>::max()
                           ? *std::max_element(d.begin(), d.end())
                           : nearest_untrusted - 1;
  return out;
}

}  // namespace hpq
