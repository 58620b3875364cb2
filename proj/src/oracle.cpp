#include "halfplane/oracle.hpp"

#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "halfplane/laws.hpp"
#include "halfplane/map.hpp"
#include "halfplane/schaeffer.hpp"

namespace hpq {

namespace {

void check_bound(int value, int bound) {
  if (value > bound) throw std::invalid_argument("bound exceeded");
}

bool label_allowed(LabelKind kind, int label) { return kind == LabelKind::any || label >= 1; }

// Preorder arrays of a tree or of a forest hanging below one vertex.
struct Preorder {
  std::vector<int> labels, degrees;
  int roots = 0;
};

class RecursiveTrees {
 public:
  explicit RecursiveTrees(LabelKind kind) : kind_(kind) {}

  const std::vector<Preorder>& trees(int edges, int label) {
    const auto key = std::make_pair(edges, label);
    if (auto it = trees_.find(key); it != trees_.end()) return it->second;
    std::vector<Preorder> out;
    for (const Preorder& f : forests(edges, label)) {
      Preorder t;
      t.labels.push_back(label);
      t.degrees.push_back(f.roots);
      t.labels.insert(t.labels.end(), f.labels.begin(), f.labels.end());
      t.degrees.insert(t.degrees.end(), f.degrees.begin(), f.degrees.end());
      t.roots = 1;
      out.push_back(std::move(t));
    }
    return trees_[key] = std::move(out);
  }

 private:
  // Ordered children of a vertex labelled `label`, `edges` edges below it:
  // first child subtree with k edges, then the remaining children.
  const std::vector<Preorder>& forests(int edges, int label) {
    const auto key = std::make_pair(edges, label);
    if (auto it = forests_.find(key); it != forests_.end()) return it->second;
    std::vector<Preorder> out;
    if (edges == 0) {
      out.emplace_back();
    } else {
      for (int k = 0; k < edges; ++k)
        for (int d = -1; d <= 1; ++d) {
          if (!label_allowed(kind_, label + d)) continue;
          const auto firsts = trees(k, label + d);  // copy: the memo may rehash
          const auto rests = forests(edges - 1 - k, label);
          for (const Preorder& t : firsts)
            for (const Preorder& r : rests) {
              Preorder f = t;
              f.labels.insert(f.labels.end(), r.labels.begin(), r.labels.end());
              f.degrees.insert(f.degrees.end(), r.degrees.begin(), r.degrees.end());
              f.roots = 1 + r.roots;
              out.push_back(std::move(f));
            }
        }
    }
    return forests_[key] = std::move(out);
  }

  LabelKind kind_;
  std::map<std::pair<int, int>, std::vector<Preorder>> trees_, forests_;
};

// Every ballot word of length 2n, as the parent of each non-root vertex in
// preorder.
void for_each_ballot(int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> parent(static_cast<std::size_t>(n) + 1, -1), stack{0};
  int created = 1;
  std::function<void(int)> step = [&](int ups_left) {
    if (ups_left == 0) {
      visit(parent);
      return;
    }
    // Up: new child of the top vertex.
    const int v = created++;
    parent[static_cast<std::size_t>(v)] = stack.back();
    stack.push_back(v);
    step(ups_left - 1);
    stack.pop_back();
    --created;
    // Down, when not at the root: close the top vertex.
    if (stack.size() > 1) {
      const int top = stack.back();
      stack.pop_back();
      step(ups_left);
      stack.push_back(top);
    }
  };
  step(n);
}

// Walks every increment vector in {-1,0,1}^n for one tree shape.
template <class Visit>
void for_each_labelling(LabelKind kind, int root_label, const std::vector<int>& parent, Visit&& visit) {
  const std::size_t n = parent.size() - 1;
  std::vector<int> inc(n, -1), labels(n + 1);
  labels[0] = root_label;
  for (;;) {
    bool ok = label_allowed(kind, root_label);
    for (std::size_t v = 1; v <= n && ok; ++v) {
      labels[v] = labels[static_cast<std::size_t>(parent[v])] + inc[v - 1];
      ok = label_allowed(kind, labels[v]);
    }
    if (ok) visit(labels);
    std::size_t i = 0;
    while (i < n && inc[i] == 1) inc[i++] = -1;
    if (i == n) return;
    ++inc[i];
  }
}

std::vector<std::vector<int>> bridges(TreedKind kind, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> x{0};
  std::function<void()> rec = [&]() {
    const int len = static_cast<int>(x.size());
    if (len == 2 * p) {
      if (std::abs(x.back()) == 1) out.push_back(x);
      return;
    }
    for (int d : {1, -1}) {
      const int y = x.back() + d;
      if (kind == TreedKind::positive && y < 0) continue;
      if (std::abs(y) > 2 * p - len) continue;  // must still return to 0
      x.push_back(y);
      rec();
      x.pop_back();
    }
  };
  rec();
  return out;
}

std::vector<long> cyclic_down_steps(const std::vector<int>& x) {
  std::vector<long> out;
  const std::size_t m = x.size();
  for (std::size_t i = 0; i < m; ++i)
    if (x[(i + 1) % m] == x[i] - 1) out.push_back(static_cast<long>(i));
  return out;
}

void for_each_composition(int n, int parts, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> c(static_cast<std::size_t>(parts), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == parts - 1) {
      c[static_cast<std::size_t>(i)] = left;
      visit(c);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      c[static_cast<std::size_t>(i)] = k;
      rec(i + 1, left - k);
    }
  };
  if (parts == 0) {
    if (n == 0) visit(c);
    return;
  }
  rec(0, n);
}

LabelKind label_kind(TreedKind k) { return k == TreedKind::positive ? LabelKind::positive : LabelKind::any; }

}  // namespace

std::vector<LabelledTree> enumerate_labelled_trees(LabelKind kind, int root_label, int edges, int bound) {
  check_bound(edges, bound);
  std::vector<LabelledTree> out;
  if (!label_allowed(kind, root_label)) return out;
  RecursiveTrees rec(kind);
  for (const Preorder& t : rec.trees(edges, root_label)) out.emplace_back(t.labels, t.degrees);
  return out;
}

std::vector<LabelledTree> enumerate_labelled_trees_ballot(LabelKind kind, int root_label, int edges, int bound) {
  check_bound(edges, bound);
  std::vector<LabelledTree> out;
  for_each_ballot(edges, [&](const std::vector<int>& parent) {
    std::vector<int> degrees(parent.size(), 0);
    for (std::size_t v = 1; v < parent.size(); ++v) ++degrees[static_cast<std::size_t>(parent[v])];
    for_each_labelling(kind, root_label, parent,
                       [&](const std::vector<int>& labels) { out.emplace_back(labels, degrees); });
  });
  return out;
}

std::uint64_t count_labelled_trees(LabelKind kind, int root_label, int edges, int bound) {
  check_bound(edges, bound);
  std::uint64_t count = 0;
  for_each_ballot(edges, [&](const std::vector<int>& parent) {
    for_each_labelling(kind, root_label, parent, [&](const std::vector<int>&) { ++count; });
  });
  return count;
}

std::vector<TreedBridge> enumerate_treed_bridges(TreedKind kind, int n, int p, int bound) {
  check_bound(n + p, bound);
  if (p < 1) throw std::invalid_argument("enumerate_treed_bridges: p >= 1");
  std::vector<TreedBridge> out;
  std::map<std::pair<int, int>, std::vector<LabelledTree>> memo;
  const auto trees = [&](int label, int edges) -> const std::vector<LabelledTree>& {
    auto key = std::make_pair(label, edges);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, enumerate_labelled_trees(label_kind(kind), label, edges, bound)).first;
    return it->second;
  };
  for (const auto& x : bridges(kind, p)) {
    const auto ds = cyclic_down_steps(x);
    for_each_composition(n, static_cast<int>(ds.size()), [&](const std::vector<int>& sizes) {
      std::vector<const std::vector<LabelledTree>*> choices;
      for (std::size_t k = 0; k < ds.size(); ++k)
        choices.push_back(&trees(x[static_cast<std::size_t>(ds[k])], sizes[k]));
      std::vector<std::size_t> pick(ds.size(), 0);
      for (const auto* c : choices)
        if (c->empty()) return;
      for (;;) {
        TreedBridge tb;
        tb.bridge = Bridge::finite(x);
        tb.kind = kind;
        for (std::size_t k = 0; k < ds.size(); ++k) tb.trees.emplace(ds[k], (*choices[k])[pick[k]]);
        out.push_back(std::move(tb));
        std::size_t i = 0;
        while (i < pick.size() && pick[i] + 1 == choices[i]->size()) pick[i++] = 0;
        if (i == pick.size()) return;
        ++pick[i];
      }
    });
  }
  return out;
}

std::uint64_t count_treed_bridges(TreedKind kind, int n, int p, int bound) {
  check_bound(n + p, bound);
  std::map<std::pair<int, int>, std::uint64_t> memo;
  const auto count = [&](int label, int edges) {
    auto key = std::make_pair(label, edges);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, count_labelled_trees(label_kind(kind), label, edges, bound)).first;
    return it->second;
  };
  std::uint64_t total = 0;
  for (const auto& x : bridges(kind, p)) {
    const auto ds = cyclic_down_steps(x);
    for_each_composition(n, static_cast<int>(ds.size()), [&](const std::vector<int>& sizes) {
      std::uint64_t prod = 1;
      for (std::size_t k = 0; k < ds.size(); ++k) prod *= count(x[static_cast<std::size_t>(ds[k])], sizes[k]);
      total += prod;
    });
  }
  return total;
}

GluingCount count_quadrangulations_by_gluing(int faces) {
  if (faces < 0 || faces > 3) throw std::invalid_argument("bound exceeded");
  const int H = 4 * faces + 2;
  std::vector<int> next(static_cast<std::size_t>(H)), face(static_cast<std::size_t>(H));
  for (int q = 0; q < faces; ++q)
    for (int s = 0; s < 4; ++s) {
      next[static_cast<std::size_t>(4 * q + s)] = 4 * q + (s + 1) % 4;
      face[static_cast<std::size_t>(4 * q + s)] = q;
    }
  const int d = 4 * faces;  // the digon d, d+1 is the outer face
  next[static_cast<std::size_t>(d)] = d + 1;
  next[static_cast<std::size_t>(d + 1)] = d;
  face[static_cast<std::size_t>(d)] = face[static_cast<std::size_t>(d + 1)] = faces;

  std::vector<int> twin(static_cast<std::size_t>(H), -1);
  std::uint64_t valid = 0;
  std::set<std::vector<int>> codes;

  const auto examine = [&]() {
    // Connected through the face graph.
    std::vector<int> up(static_cast<std::size_t>(faces) + 1);
    std::iota(up.begin(), up.end(), 0);
    std::function<int(int)> find = [&](int a) {
      return up[static_cast<std::size_t>(a)] == a ? a : up[static_cast<std::size_t>(a)] = find(up[static_cast<std::size_t>(a)]);
    };
    for (int h = 0; h < H; ++h)
      up[static_cast<std::size_t>(find(face[static_cast<std::size_t>(h)]))] = find(face[static_cast<std::size_t>(twin[static_cast<std::size_t>(h)])]);
    for (int f = 0; f <= faces; ++f)
      if (find(f) != find(0)) return;
    // Vertices are the cycles of next o twin; planar iff V = n + 2.
    std::vector<int> origin(static_cast<std::size_t>(H), -1);
    int vertices = 0;
    for (int h = 0; h < H; ++h) {
      if (origin[static_cast<std::size_t>(h)] >= 0) continue;
      for (int g = h; origin[static_cast<std::size_t>(g)] < 0; g = next[static_cast<std::size_t>(twin[static_cast<std::size_t>(g)])])
        origin[static_cast<std::size_t>(g)] = vertices;
      ++vertices;
    }
    if (vertices != faces + 2) return;
    ++valid;
    std::vector<HalfEdge> he(static_cast<std::size_t>(H));
    for (int h = 0; h < H; ++h)
      he[static_cast<std::size_t>(h)] = {twin[static_cast<std::size_t>(h)], next[static_cast<std::size_t>(h)], origin[static_cast<std::size_t>(h)]};
    codes.insert(canonical_code(PlanarMap(vertices, std::move(he), twin[static_cast<std::size_t>(d)])));
  };

  std::function<void()> match = [&]() {
    int h = 0;
    while (h < H && twin[static_cast<std::size_t>(h)] >= 0) ++h;
    if (h == H) {
      examine();
      return;
    }
    for (int g = h + 1; g < H; ++g) {
      if (twin[static_cast<std::size_t>(g)] >= 0) continue;
      twin[static_cast<std::size_t>(h)] = g;
      twin[static_cast<std::size_t>(g)] = h;
      match();
      twin[static_cast<std::size_t>(h)] = twin[static_cast<std::size_t>(g)] = -1;
    }
  };
  match();

  std::uint64_t labellings = 1;
  for (int k = 1; k <= faces; ++k) labellings *= 4ULL * static_cast<std::uint64_t>(k);
  return {valid / labellings, codes.size()};
}

BijectionReport verify_bijection(int n, int p) {
  BijectionReport r;
  r.n = n;
  r.p = p;
  const auto positive = enumerate_treed_bridges(TreedKind::positive, n, p);
  r.positive_count = positive.size();
  r.unconstrained_count = count_treed_bridges(TreedKind::unconstrained, n, p);
  r.count_identity = r.unconstrained_count == static_cast<std::uint64_t>(n + p + 1) * r.positive_count;
  r.sizes_ok = r.labels_are_distances = true;
  std::set<std::vector<int>> codes;
  for (const TreedBridge& b : positive) {
    const PointedMap m = phi_positive(b);
    codes.insert(canonical_code(m.map));
    const bool sizes = m.map.area() == n && m.map.perimeter() == 2 * p;
    int delta = -1;
    for (int v = 0; v < m.map.vertex_count(); ++v)
      if (m.vertex_label[static_cast<std::size_t>(v)] == 0) delta = v;
    bool labels = delta >= 0;
    if (labels) {
      const auto dist = m.map.distances_from(delta);
      for (int v = 0; v < m.map.vertex_count(); ++v) labels = labels && dist[static_cast<std::size_t>(v)] == m.vertex_label[static_cast<std::size_t>(v)];
    }
    if ((!sizes || !labels) && r.witness.empty()) r.witness = treed_bridge_to_json(b).dump();
    r.sizes_ok = r.sizes_ok && sizes;
    r.labels_are_distances = r.labels_are_distances && labels;
  }
  r.distinct_images = codes.size();
  r.injective = r.distinct_images == r.positive_count;
  if (p == 1 && n <= 3) {
    const GluingCount g = count_quadrangulations_by_gluing(n);
    r.brute_force = static_cast<int>(g.by_canonical_form);
    r.brute_force_ok = g.by_symmetry == g.by_canonical_form && g.by_canonical_form == r.positive_count;
  }
  return r;
}

std::vector<PartitionSumRow> verify_partition_sums(int max_edges) {
  check_bound(max_edges, default_tree_bound);
  // Tail of all labelled trees: sum_{n > N} 3^n Cat(n) 12^{-n} = 2 - sum_{n <= N} Cat(n) 4^{-n}.
  Rational head = 0, catalan = 1, quarter = 1;
  for (int m = 0; m <= max_edges; ++m) {
    head += catalan * quarter;
    catalan = catalan * 2 * (2 * m + 1) / (m + 2);
    quarter /= 4;
  }
  const Rational tail = Rational(2) - head;

  std::vector<PartitionSumRow> rows;
  const auto row = [&](LabelKind kind, int k, Rational target) {
    PartitionSumRow r{kind, k, max_edges, 0, 0, std::move(target)};
    Rational weight = 1;
    for (int m = 0; m <= max_edges; ++m) {
      r.partial += Rational(count_labelled_trees(kind, k, m)) * weight;
      weight /= 12;
    }
    r.upper = r.partial + tail;
    rows.push_back(std::move(r));
  };
  row(LabelKind::any, 0, 2);
  for (int k = 1; k <= 3; ++k) row(LabelKind::positive, k, w(k));
  return rows;
}

}  // namespace hpq
