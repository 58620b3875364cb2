#include "halfplane/treed_bridge.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hpq {

Bridge Bridge::finite(std::vector<int> labels) {
  if (labels.empty() || labels.size() % 2 != 0 || labels[0] != 0)
    throw std::invalid_argument("bridge: need even length and x_0 = 0");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (std::abs(labels[(i + 1) % labels.size()] - labels[i]) != 1)
      throw std::invalid_argument("bridge: steps must be +-1");
  Bridge b;
  b.labels_ = std::move(labels);
  b.cyclic_ = true;
  return b;
}

Bridge Bridge::window(std::vector<int> labels, long left) {
  if (left < 0 || left >= static_cast<long>(labels.size()) || labels[left] != 0)
    throw std::invalid_argument("bridge window: need x_0 = 0 inside the window");
  for (std::size_t i = 0; i + 1 < labels.size(); ++i)
    if (std::abs(labels[i + 1] - labels[i]) != 1) throw std::invalid_argument("bridge: steps must be +-1");
  Bridge b;
  b.labels_ = std::move(labels);
  b.left_ = left;
  return b;
}

int Bridge::at(long i) const {
  if (cyclic_) {
    const long n = length();
    return labels_[static_cast<std::size_t>(((i % n) + n) % n)];
  }
  if (!contains(i)) throw std::out_of_range("bridge: position outside window");
  return labels_[static_cast<std::size_t>(i + left_)];
}

std::vector<long> Bridge::down_steps() const {
  std::vector<long> out;
  const long hi = cyclic_ ? length() - 1 : last();
  for (long i = cyclic_ ? 0 : first(); i <= hi; ++i)
    if (down_step(i)) out.push_back(i);
  return out;
}

std::vector<long> down_steps(const Bridge& b) { return b.down_steps(); }

std::size_t TreedBridge::size() const {
  std::size_t n = 0;
  for (const auto& [i, t] : trees) n += t.size();
  return n;
}

bool TreedBridge::valid(std::string* why) const {
  auto fail = [why](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  for (long i : bridge.down_steps())
    if (!trees.count(i)) return fail("missing tree at down-step " + std::to_string(i));
  for (const auto& [i, t] : trees) {
    if (!bridge.down_step(i)) return fail("tree at non-down-step " + std::to_string(i));
    if (t.root_label() != bridge.at(i)) return fail("root label mismatch at " + std::to_string(i));
    if (!t.labels_valid()) return fail("tree labels jump by more than 1");
    if (kind == TreedKind::positive && t.min_label() < 1) return fail("non-positive tree label");
  }
  if (kind == TreedKind::positive)
    for (int x : bridge.labels())
      if (x < 0) return fail("negative bridge label");
  return true;
}

std::vector<TbCorner> corner_walk(const TreedBridge& b) {
  std::vector<TbCorner> out;
  const long lo = b.bridge.cyclic() ? 0 : b.bridge.first();
  const long hi = b.bridge.cyclic() ? b.bridge.length() - 1 : b.bridge.last();
  for (long i = lo; i <= hi; ++i) {
    const auto it = b.trees.find(i);
    if (it == b.trees.end()) {
      out.push_back({i, -1, b.bridge.at(i), 0});
      continue;
    }
    const LabelledTree& t = it->second;
    const auto depth = t.depths();
    for (std::size_t v : t.contour())
      out.push_back({i, static_cast<int>(v), t.label(v), depth[v]});
  }
  return out;
}

ContourPair contour_processes(const TreedBridge& b) {
  ContourPair cp;
  const auto corners = corner_walk(b);
  const long n = b.bridge.length();
  bool found = false;
  for (std::size_t k = 0; k < corners.size(); ++k) {
    const TbCorner& c = corners[k];
    long along = std::labs(c.position);
    if (b.bridge.cyclic()) along = std::min(c.position, n - c.position);
    cp.C.push_back(static_cast<int>(along) + c.depth);
    cp.V.push_back(c.label);
    if (!found && c.position == 0) {
      cp.origin = k;
      found = true;
    }
  }
  return cp;
}

namespace {

LabelledTree plus_tree(int label, Rng& rng) {
  return *sample_tree_rho_plus(label, rng);
}

void attach_trees(TreedBridge& tb, Rng& rng, bool positive, TreeSampleOptions opt = {}) {
  // One draw seeds the per-position tree streams, so repeated calls on the
  // same generator stay independent.
  const Rng trees(rng());
  for (long i : tb.bridge.down_steps()) {
    Rng tree_rng = trees.split(static_cast<std::uint64_t>(i + (1L << 40)));
    const int root = tb.bridge.at(i);
    if (positive) {
      tb.trees.emplace(i, plus_tree(root, tree_rng));
    } else {
      for (;;) {
        auto t = sample_tree_rho(root, tree_rng, opt);
        if (t) {
          tb.trees.emplace(i, std::move(*t));
          break;
        }
      }
    }
  }
}

}  // namespace

TreedBridge sample_B_p(int p, const ConditionedBridgeSampler& bridges, Rng& rng) {
  TreedBridge tb;
  tb.bridge = Bridge::finite(bridges.sample(p, rng));
  tb.kind = TreedKind::positive;
  attach_trees(tb, rng, true);
  return tb;
}

TreedBridge sample_B_inf_window(long left, long right, Rng& rng) {
  const auto r = sample_walk(0, right, rng);
  const auto l = sample_walk(0, left, rng);
  std::vector<int> labels(l.rbegin(), l.rend());
  labels.insert(labels.end(), r.begin() + 1, r.end());
  TreedBridge tb;
  tb.bridge = Bridge::window(std::move(labels), left);
  tb.kind = TreedKind::positive;
  attach_trees(tb, rng, true);
  return tb;
}

TreedBridge sample_B_pm_window(long length, Rng& rng, TreeSampleOptions opt) {
  std::vector<int> labels(static_cast<std::size_t>(2 * length + 1));
  labels[static_cast<std::size_t>(length)] = 0;
  for (long i = 1; i <= length; ++i) {
    labels[static_cast<std::size_t>(length + i)] = labels[static_cast<std::size_t>(length + i - 1)] + (rng.below(2) ? 1 : -1);
    labels[static_cast<std::size_t>(length - i)] = labels[static_cast<std::size_t>(length - i + 1)] + (rng.below(2) ? 1 : -1);
  }
  TreedBridge tb;
  tb.bridge = Bridge::window(std::move(labels), length);
  tb.kind = TreedKind::unconstrained;
  attach_trees(tb, rng, false, opt);
  return tb;
}

TreedBridge sample_B_pm_budget_window(long vertex_budget, const Rng& base) {
  auto stream = [&](long i, std::uint64_t what) {
    const std::uint64_t slot = i < 0 ? static_cast<std::uint64_t>(-2 * i - 1) : static_cast<std::uint64_t>(2 * i);
    return base.split(2 * slot + what);
  };
  auto step = [&](long i) { return stream(i, 0).below(2) ? 1 : -1; };
  auto tree = [&](long i, int label, long used, bool forced) {
    Rng r = stream(i, 1);
    TreeSampleOptions opt;
    if (!forced) opt.max_vertices = static_cast<std::size_t>(std::max(1L, vertex_budget - used));
    return sample_tree_rho(label, r, opt);
  };

  std::vector<int> right{0}, left;  // left[k] = x_{-k-1}
  std::map<long, LabelledTree> trees;
  long used = 1;
  bool right_open = true, left_open = true;
  while ((right_open || left_open) && used < vertex_budget) {
    if (right_open) {
      // The root edge needs x_1, so the first step is always taken.
      const long i = static_cast<long>(right.size()) - 1;
      const int next = right.back() + step(i);
      if (next < right.back()) {
        auto t = tree(i, right.back(), used, i == 0);
        if (t) {
          used += static_cast<long>(t->size());
          trees.emplace(i, std::move(*t));
          right.push_back(next);
        } else {
          right_open = false;
        }
      } else {
        right.push_back(next);
      }
    }
    if (left_open && used < vertex_budget) {
      const long i = -static_cast<long>(left.size()) - 1;
      const int above = left.empty() ? 0 : left.back();  // x_{i+1}
      const int here = above - step(i);
      if (above == here - 1) {
        auto t = tree(i, here, used, false);
        if (t) {
          used += static_cast<long>(t->size());
          trees.emplace(i, std::move(*t));
          left.push_back(here);
        } else {
          left_open = false;
        }
      } else {
        left.push_back(here);
      }
    }
  }
  std::vector<int> labels(left.rbegin(), left.rend());
  labels.insert(labels.end(), right.begin(), right.end());
  TreedBridge tb;
  tb.bridge = Bridge::window(std::move(labels), static_cast<long>(left.size()));
  tb.kind = TreedKind::unconstrained;
  tb.trees = std::move(trees);
  return tb;
}

TreedBridge sample_B_c_window(long length, Rng& rng) {
  std::vector<int> labels(static_cast<std::size_t>(2 * length + 1));
  for (long i = -length; i <= length; ++i) labels[static_cast<std::size_t>(i + length)] = static_cast<int>(std::labs(i));
  TreedBridge tb;
  tb.bridge = Bridge::window(std::move(labels), length);
  tb.kind = TreedKind::positive;
  attach_trees(tb, rng, true);
  return tb;
}

namespace {

// Replace one side of the root by the geodesic staircase x_i = |i|.
TreedBridge staircase_side(const TreedBridge& b, bool replace_left) {
  if (b.bridge.cyclic()) throw std::invalid_argument("staircase: needs a window");
  const long lo = b.bridge.first(), hi = b.bridge.last();
  std::vector<int> labels;
  for (long i = lo; i <= hi; ++i) {
    const bool replaced = replace_left ? i < 0 : i > 0;
    labels.push_back(replaced ? static_cast<int>(std::labs(i)) : b.bridge.at(i));
  }
  TreedBridge out;
  out.bridge = Bridge::window(std::move(labels), -lo);
  out.kind = TreedKind::positive;
  for (const auto& [i, t] : b.trees) {
    const bool replaced = replace_left ? i < 0 : i > 0;
    if (!replaced && out.bridge.down_step(i)) out.trees.emplace(i, t);
  }
  for (long i : out.bridge.down_steps())
    if (!out.trees.count(i)) out.trees.emplace(i, LabelledTree(out.bridge.at(i)));
  return out;
}

}  // namespace

TreedBridge derive_B_r(const TreedBridge& b) { return staircase_side(b, true); }
TreedBridge derive_B_l(const TreedBridge& b) { return staircase_side(b, false); }

Rational tb_local_distance(const TreedBridge& a, const TreedBridge& b) {
  if (a == b) return Rational(0);
  const auto& A = a.bridge;
  const auto& B = b.bridge;
  auto agrees_at = [&](long r) {
    for (long i = -r; i <= r; ++i) {
      if (!A.contains(i) || !B.contains(i) || A.at(i) != B.at(i)) return false;
      const bool da = A.down_step(i), db = B.down_step(i);
      if (da != db) return false;
      if (!da) continue;
      const auto ta = a.trees.find(i), tb = b.trees.find(i);
      if (ta == a.trees.end() || tb == b.trees.end()) return false;
      if (truncate_tree(ta->second, static_cast<int>(r)) != truncate_tree(tb->second, static_cast<int>(r)))
        return false;
    }
    return true;
  };
  // Stop where either object runs out of stored information.
  long limit = std::min(A.cyclic() ? A.length() / 2 : std::min(-A.first(), A.last()),
                        B.cyclic() ? B.length() / 2 : std::min(-B.first(), B.last()));
  long agree = 0;
  for (long r = 0; r <= limit; ++r) {
    if (!agrees_at(r)) break;
    agree = r;
  }
  return Rational(1, 1 + agree);
}

nlohmann::json treed_bridge_to_json(const TreedBridge& b) {
  nlohmann::json trees = nlohmann::json::object();
  for (const auto& [i, t] : b.trees) {
    const long index = b.bridge.cyclic() ? i : i + b.bridge.origin_index();
    trees[std::to_string(index)] = tree_to_json(t);
  }
  return {{"bridge", b.bridge.labels()},
          {"origin_index", b.bridge.origin_index()},
          {"cyclic", b.bridge.cyclic()},
          {"kind", b.kind == TreedKind::positive ? "positive" : "unconstrained"},
          {"trees", std::move(trees)}};
}

TreedBridge treed_bridge_from_json(const nlohmann::json& j) {
  TreedBridge b;
  auto labels = j.at("bridge").get<std::vector<int>>();
  const long origin = j.at("origin_index").get<long>();
  // Without the flag, a bridge that starts at 0 and closes up is read as finite.
  const bool closes = origin == 0 && !labels.empty() && labels.size() % 2 == 0 && std::abs(labels.back()) == 1;
  const bool cyclic = j.value("cyclic", closes);
  b.bridge = cyclic ? Bridge::finite(std::move(labels)) : Bridge::window(std::move(labels), origin);
  b.kind = j.value("kind", std::string("positive")) == "positive" ? TreedKind::positive : TreedKind::unconstrained;
  for (const auto& [key, value] : j.at("trees").items()) {
    const long index = std::stol(key);
    b.trees.emplace(cyclic ? index : index - origin, tree_from_json(value));
  }
  return b;
}

}  // namespace hpq
