#include "halfplane/map.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace hpq {

PlanarMap::PlanarMap(int vertex_count, std::vector<HalfEdge> half_edges, int root)
    : vertex_count_(vertex_count), half_edges_(std::move(half_edges)), root_(root) {
  if (half_edges_.empty() ? root_ != -1 : (root_ < 0 || root_ >= half_edge_count()))
    throw std::invalid_argument("map: root out of range");
}

std::vector<int> PlanarMap::face_of() const {
  std::vector<int> face(half_edges_.size(), -1);
  int count = 0;
  // Number faces by first appearance in a walk from the root, so numbering is
  // stable under relabelling; stragglers (disconnected input) come after.
  auto mark = [&](int start) {
    if (face[start] >= 0) return;
    for (int h = start; face[h] < 0; h = next(h)) face[h] = count;
    ++count;
  };
  if (root_ >= 0) {
    // BFS order over half-edges from the root.
    std::vector<char> seen(half_edges_.size(), 0);
    std::deque<int> queue{root_};
    seen[root_] = 1;
    while (!queue.empty()) {
      const int h = queue.front();
      queue.pop_front();
      mark(h);
      for (int g : {twin(h), next(h)})
        if (!seen[g]) {
          seen[g] = 1;
          queue.push_back(g);
        }
    }
  }
  for (int h = 0; h < half_edge_count(); ++h) mark(h);
  return face;
}

int PlanarMap::face_count() const {
  if (half_edges_.empty()) return 1;
  const auto f = face_of();
  return *std::max_element(f.begin(), f.end()) + 1;
}

int PlanarMap::outer_face() const { return root_ < 0 ? -1 : face_of()[twin(root_)]; }

std::vector<int> PlanarMap::face_degrees() const {
  const auto f = face_of();
  std::vector<int> deg(half_edges_.empty() ? 0 : *std::max_element(f.begin(), f.end()) + 1, 0);
  for (int x : f) ++deg[x];
  return deg;
}

int PlanarMap::perimeter() const {
  if (root_ < 0) return 0;
  int n = 0;
  const int start = twin(root_);
  int h = start;
  do {
    ++n;
    h = next(h);
  } while (h != start);
  return n;
}

int PlanarMap::area() const { return root_ < 0 ? 0 : face_count() - 1; }

bool PlanarMap::well_formed(std::string* why) const {
  auto fail = [why](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  const int n = half_edge_count();
  if (n % 2 != 0) return fail("odd number of half-edges");
  std::vector<char> has_prev(n, 0);
  for (int h = 0; h < n; ++h) {
    const HalfEdge& e = half_edges_[h];
    if (e.twin < 0 || e.twin >= n || e.next < 0 || e.next >= n) return fail("index out of range");
    if (e.twin == h || twin(e.twin) != h) return fail("twin is not a fixed-point-free involution");
    if (e.origin < 0 || e.origin >= vertex_count_) return fail("origin out of range");
    if (origin(e.next) != target(h)) return fail("next does not start at the target");
    if (has_prev[e.next]++) return fail("next is not a permutation");
  }
  if (n == 0) return vertex_count_ == 1 ? true : fail("edgeless map with several vertices");
  // Every vertex must be an orbit of sigma.
  std::vector<int> orbit_vertex(n, -1);
  std::vector<char> vertex_seen(vertex_count_, 0);
  for (int h = 0; h < n; ++h) {
    if (orbit_vertex[h] >= 0) continue;
    const int v = origin(h);
    if (vertex_seen[v]++) return fail("vertex split into several rotation orbits");
    for (int g = h; orbit_vertex[g] < 0; g = sigma(g)) {
      if (origin(g) != v) return fail("rotation orbit mixes vertices");
      orbit_vertex[g] = v;
    }
  }
  for (int v = 0; v < vertex_count_; ++v)
    if (!vertex_seen[v]) return fail("isolated vertex");
  const auto d = distances_from(root_vertex());
  if (std::find(d.begin(), d.end(), -1) != d.end()) return fail("disconnected");
  return true;
}

bool PlanarMap::is_quadrangulation_with_boundary(std::string* why) const {
  if (!well_formed(why)) return false;
  if (root_ < 0) return true;
  const auto f = face_of();
  const auto deg = face_degrees();
  const int outer = f[twin(root_)];
  for (int x = 0; x < static_cast<int>(deg.size()); ++x)
    if (x != outer && deg[x] != 4) {
      if (why) *why = "inner face of degree " + std::to_string(deg[x]);
      return false;
    }
  const int faces = static_cast<int>(deg.size());
  if (vertex_count_ - edge_count() + faces != 2) {
    if (why) *why = "Euler characteristic is not 2";
    return false;
  }
  return true;
}

std::vector<int> PlanarMap::distances_from(int vertex) const {
  std::vector<int> dist(vertex_count_, -1);
  std::vector<std::vector<int>> out(vertex_count_);
  for (int h = 0; h < half_edge_count(); ++h) out[origin(h)].push_back(h);
  std::deque<int> queue{vertex};
  dist[vertex] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int h : out[v]) {
      const int u = target(h);
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

std::vector<int> PlanarMap::outer_contour() const {
  std::vector<int> contour;
  if (root_ < 0) return contour;
  const int start = twin(root_);
  int h = start;
  do {
    contour.push_back(h);
    h = next(h);
  } while (h != start);
  return contour;
}

namespace {

// BFS order of half-edges from the root through twin and next.
std::vector<int> bfs_labels(const PlanarMap& map) {
  const int n = map.half_edge_count();
  std::vector<int> label(n, -1);
  if (map.root() < 0) return label;
  std::vector<int> order;
  order.reserve(n);
  label[map.root()] = 0;
  order.push_back(map.root());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int h = order[k];
    for (int g : {map.twin(h), map.next(h)})
      if (label[g] < 0) {
        label[g] = static_cast<int>(order.size());
        order.push_back(g);
      }
  }
  return label;
}

}  // namespace

std::vector<int> canonical_code(const PlanarMap& map) {
  const auto label = bfs_labels(map);
  const int n = map.half_edge_count();
  std::vector<int> code(2 * static_cast<std::size_t>(n));
  for (int h = 0; h < n; ++h) {
    if (label[h] < 0) throw std::invalid_argument("canonical_code: map is not connected");
    code[2 * label[h]] = label[map.twin(h)];
    code[2 * label[h] + 1] = label[map.next(h)];
  }
  return code;
}

PlanarMap canonical_form(const PlanarMap& map) {
  if (map.root() < 0) return PlanarMap();
  const auto code = canonical_code(map);
  const int n = map.half_edge_count();
  std::vector<HalfEdge> he(n);
  for (int h = 0; h < n; ++h) {
    he[h].twin = code[2 * h];
    he[h].next = code[2 * h + 1];
  }
  // Vertices = orbits of sigma, numbered by first appearance.
  int vertices = 0;
  for (int h = 0; h < n; ++h) {
    if (he[h].origin >= 0) continue;
    for (int g = h; he[g].origin < 0; g = he[he[g].twin].next) he[g].origin = vertices;
    ++vertices;
  }
  return PlanarMap(vertices, std::move(he), 0);
}

PlanarMap induced_submap(const PlanarMap& map, const std::vector<char>& keep, int root) {
  const int n = map.half_edge_count();
  std::vector<int> new_vertex(map.vertex_count(), -1);
  int vertices = 0;
  for (int v = 0; v < map.vertex_count(); ++v)
    if (keep[v]) new_vertex[v] = vertices++;
  std::vector<int> new_half(n, -1);
  int kept = 0;
  for (int h = 0; h < n; ++h)
    if (keep[map.origin(h)] && keep[map.target(h)]) new_half[h] = kept++;
  if (kept == 0) return PlanarMap();
  std::vector<HalfEdge> he(kept);
  for (int h = 0; h < n; ++h) {
    const int k = new_half[h];
    if (k < 0) continue;
    he[k].twin = new_half[map.twin(h)];
    he[k].origin = new_vertex[map.origin(h)];
    // next' = sigma' o twin, sigma' = first kept half-edge along sigma.
    int g = map.sigma(map.twin(h));
    while (new_half[g] < 0) g = map.sigma(g);
    he[k].next = new_half[g];
  }
  if (root < 0 || new_half[root] < 0) throw std::invalid_argument("induced_submap: root not kept");
  return PlanarMap(vertices, std::move(he), new_half[root]);
}

PlanarMap ball(const PlanarMap& map, int radius) {
  if (radius <= 0 || map.root() < 0) return PlanarMap();
  const auto d = map.distances_from_root();
  std::vector<char> keep(map.vertex_count());
  for (int v = 0; v < map.vertex_count(); ++v) keep[v] = d[v] >= 0 && d[v] <= radius;
  return induced_submap(map, keep, map.root());
}

Rational local_distance(const PlanarMap& a, const PlanarMap& b) {
  if (canonical_code(a) == canonical_code(b) && a.vertex_count() == b.vertex_count()) return Rational(0);
  const auto da = a.distances_from_root(), db = b.distances_from_root();
  const int limit = std::max(*std::max_element(da.begin(), da.end()), *std::max_element(db.begin(), db.end()));
  int agree = 0;
  for (int r = 1; r <= limit; ++r) {
    if (canonical_code(ball(a, r)) != canonical_code(ball(b, r))) break;
    agree = r;
  }
  return Rational(1, 1 + agree);
}

PlanarMap flip(const PlanarMap& map) {
  if (map.root() < 0) return map;
  const int n = map.half_edge_count();
  std::vector<int> prev(n);
  for (int h = 0; h < n; ++h) prev[map.next(h)] = h;
  std::vector<HalfEdge> he(map.half_edges());
  for (int h = 0; h < n; ++h) he[h].next = map.twin(prev[map.twin(h)]);
  return PlanarMap(map.vertex_count(), std::move(he), map.sigma(map.root()));
}

nlohmann::json map_to_json(const PlanarMap& map) {
  nlohmann::json half = nlohmann::json::array();
  for (const HalfEdge& e : map.half_edges())
    half.push_back({{"twin", e.twin}, {"next", e.next}, {"origin", e.origin}});
  return {{"vertices", map.vertex_count()},
          {"half_edges", std::move(half)},
          {"root", map.root()},
          {"outer_face", map.outer_face()}};
}

PlanarMap map_from_json(const nlohmann::json& j) {
  std::vector<HalfEdge> he;
  for (const auto& e : j.at("half_edges"))
    he.push_back({e.at("twin").get<int>(), e.at("next").get<int>(), e.at("origin").get<int>()});
  PlanarMap map(j.at("vertices").get<int>(), std::move(he), j.at("root").get<int>());
  if (j.contains("outer_face") && j.at("outer_face").get<int>() != map.outer_face())
    throw std::invalid_argument("map json: outer_face disagrees with the root");
  return map;
}

}  // namespace hpq
