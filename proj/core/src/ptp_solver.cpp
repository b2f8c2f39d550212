#include "fleetsup/ptp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "assignment.hpp"

namespace fleetsup {

std::size_t ArcSelection::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BnbNode BnbNode::root(std::size_t vertex_count) {
  BnbNode node;
  node.visit.assign(vertex_count, Fixing::kFree);
  node.visit.front() = Fixing::kOne;
  node.visit.back() = Fixing::kOne;
  node.arc_zero.assign(vertex_count * vertex_count, 0);
  node.forced_succ.assign(vertex_count, npos);
  node.forced_pred.assign(vertex_count, npos);
  node.bound = std::numeric_limits<double>::infinity();
  return node;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool arc_admissible(const StaticSnapshot& s, const BnbNode& node, std::size_t i, std::size_t j) {
  const std::size_t m = s.vertex_count();
  if (i == j || j == 0 || i == m - 1) return false;
  if (!s.has_arc(i, j) || node.arc_zero[i * m + j]) return false;
  if (node.visit[i] == Fixing::kZero || node.visit[j] == Fixing::kZero) return false;
  if (node.forced_succ[i] != BnbNode::npos && node.forced_succ[i] != j) return false;
  if (node.forced_pred[j] != BnbNode::npos && node.forced_pred[j] != i) return false;
  return true;
}

double cheapest_incoming(const StaticSnapshot& s, const BnbNode& node, std::size_t j) {
  double best = kInf;
  for (std::size_t i = 0; i + 1 < s.vertex_count(); ++i) {
    if (arc_admissible(s, node, i, j)) best = std::min(best, s.cost(i, j));
  }
  return best;
}

// Rows are vertices 0..n, columns are vertices 1..n+1. Leaving robot i
// unvisited is the self-loop i->i, priced at the reward it forgoes.
std::vector<double> relaxation_table(const StaticSnapshot& s, const BnbNode& node) {
  const std::size_t n = s.robot_count();
  const std::size_t k = n + 1;
  std::vector<double> table(k * k, detail::kForbidden);
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 1; j <= n + 1; ++j) {
      double& cell = table[i * k + (j - 1)];
      if (i == j) {
        const bool must_visit = node.visit[i] == Fixing::kOne || node.forced_succ[i] != BnbNode::npos ||
                                node.forced_pred[i] != BnbNode::npos;
        if (!must_visit) cell = s.reward(i);
      } else if (arc_admissible(s, node, i, j)) {
        cell = s.cost(i, j);
      }
    }
  }
  return table;
}

std::uint64_t mask_of(const std::vector<std::size_t>& vertices) {
  std::uint64_t mask = 0;
  for (auto v : vertices) mask |= std::uint64_t{1} << v;
  return mask;
}

struct QueuedNode {
  BnbNode node;
  std::size_t order = 0;
};

struct WorseFirst {
  bool operator()(const QueuedNode& a, const QueuedNode& b) const {
    if (a.node.bound != b.node.bound) return a.node.bound < b.node.bound;
    return a.order > b.order;
  }
};

PtpSolution finish(Path path, double objective, SolverStats stats,
                   std::chrono::steady_clock::time_point start) {
  PtpSolution sol{path, objective, nodes_of(path), arcs_of(path), stats};
  sol.stats.wall_time =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
  return sol;
}

}  // namespace

double net_gain_bound(const StaticSnapshot& snapshot, const BnbNode& node) {
  const std::size_t n = snapshot.robot_count();
  double bound = -cheapest_incoming(snapshot, node, n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    if (node.visit[i] == Fixing::kZero) continue;
    const double gain = snapshot.reward(i) - cheapest_incoming(snapshot, node, i);
    if (node.visit[i] == Fixing::kOne || node.forced_pred[i] != BnbNode::npos ||
        node.forced_succ[i] != BnbNode::npos) {
      bound += gain;
    } else if (gain > 0.0) {
      bound += gain;
    }
  }
  return bound;
}

bool preferred(double value, const Path& path, double other_value, const Path& other) {
  if (value > other_value + kTolerance) return true;
  if (value < other_value - kTolerance) return false;
  if (path.length() != other.length()) return path.length() < other.length();
  return std::lexicographical_compare(path.vertices().begin(), path.vertices().end(),
                                      other.vertices().begin(), other.vertices().end());
}

ArcSelection arcs_of(const Path& path) {
  ArcSelection arcs(path.robot_count() + 2);
  const auto vs = path.vertices();
  for (std::size_t k = 0; k + 1 < vs.size(); ++k) arcs.set(vs[k].index, vs[k + 1].index);
  return arcs;
}

std::vector<std::uint8_t> nodes_of(const Path& path) {
  std::vector<std::uint8_t> y(path.robot_count() + 2, 0);
  for (auto v : path.vertices()) y[v.index] = 1;
  return y;
}

std::vector<std::vector<std::size_t>> detect_subtours(const ArcSelection& arcs) {
  const std::size_t m = arcs.vertex_count();
  std::vector<std::size_t> succ(m, BnbNode::npos);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && arcs(i, j)) succ[i] = j;
    }
  }
  std::vector<bool> done(m, false);
  for (std::size_t v = 0; v != BnbNode::npos && !done[v]; v = succ[v]) done[v] = true;

  std::vector<std::vector<std::size_t>> cycles;
  for (std::size_t start = 0; start < m; ++start) {
    if (done[start] || succ[start] == BnbNode::npos) continue;
    std::vector<std::size_t> walk;
    std::size_t v = start;
    while (v != BnbNode::npos && !done[v]) {
      done[v] = true;
      walk.push_back(v);
      v = succ[v];
    }
    if (v == start) {
      std::sort(walk.begin(), walk.end());
      cycles.push_back(std::move(walk));
    }
  }
  return cycles;
}

Path extract_path(const ArcSelection& arcs, const StaticSnapshot& snapshot) {
  const std::size_t m = snapshot.vertex_count();
  if (arcs.vertex_count() != m) throw std::logic_error("arc selection does not match snapshot size");
  std::vector<VertexId> walk{VertexId{0}};
  std::vector<bool> seen(m, false);
  seen[0] = true;
  std::size_t v = 0;
  while (v != m - 1) {
    std::size_t next = BnbNode::npos;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == v || !arcs(v, j)) continue;
      if (next != BnbNode::npos) throw std::logic_error("vertex " + std::to_string(v) + " has two successors");
      next = j;
    }
    if (next == BnbNode::npos) throw std::logic_error("path dead-ends at vertex " + std::to_string(v));
    if (seen[next]) throw std::logic_error("path revisits vertex " + std::to_string(next));
    seen[next] = true;
    walk.emplace_back(next);
    v = next;
  }
  return Path(snapshot.robot_count(), std::move(walk));
}

PtpSolution solve_bnb(const StaticSnapshot& snapshot) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = snapshot.robot_count();
  const std::size_t m = n + 2;
  const std::size_t k = n + 1;
  if (n > kMaxBnbRobots) {
    throw SizingError("solve_bnb supports at most " + std::to_string(kMaxBnbRobots) + " robots");
  }

  double robot_reward_sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) robot_reward_sum += snapshot.reward(i);

  std::optional<Path> best_path;
  double best_value = -kInf;
  if (snapshot.has_arc(0, n + 1)) {
    best_path = Path::direct(n);
    best_value = -snapshot.cost(0, n + 1);
  }
  auto prunable = [&](double bound) { return bound < best_value - kTolerance; };

  SolverStats stats;
  std::unordered_set<std::uint64_t> cut_pool;
  std::priority_queue<QueuedNode, std::vector<QueuedNode>, WorseFirst> open;
  std::size_t order = 0;
  open.push({BnbNode::root(m), order++});

  while (!open.empty()) {
    BnbNode node = open.top().node;
    open.pop();
    if (prunable(node.bound)) continue;
    ++stats.nodes_explored;
    if (prunable(net_gain_bound(snapshot, node))) continue;

    const auto table = relaxation_table(snapshot, node);
    const auto assignment = detail::solve_assignment(table, k);
    if (!assignment.feasible) continue;
    const double relaxed = robot_reward_sum - assignment.cost;
    if (prunable(relaxed)) continue;

    ArcSelection arcs(m);
    for (std::size_t i = 0; i <= n; ++i) {
      const std::size_t j = assignment.col_of_row[i] + 1;
      if (j != i) arcs.set(i, j);
    }
    const auto subtours = detect_subtours(arcs);
    if (subtours.empty()) {
      Path path = extract_path(arcs, snapshot);
      const double value = static_value(path, snapshot);
      if (!best_path || preferred(value, path, best_value, *best_path)) {
        best_path = std::move(path);
        best_value = value;
      }
      continue;
    }

    // Lazy cut: the selected arcs violate sum_{delta+(S)} x >= y_b for some subtour S.
    const auto& cycle = *std::min_element(subtours.begin(), subtours.end(),
                                          [](const auto& a, const auto& b) { return a.size() < b.size(); });
    if (cut_pool.insert(mask_of(cycle)).second) ++stats.cuts_added;

    // Branch on the visit variable of the most rewarding free robot in the subtour first.
    std::size_t branch_robot = BnbNode::npos;
    for (auto v : cycle) {
      if (node.visit[v] != Fixing::kFree) continue;
      if (branch_robot == BnbNode::npos || snapshot.reward(v) > snapshot.reward(branch_robot)) branch_robot = v;
    }
    if (branch_robot != BnbNode::npos) {
      for (Fixing f : {Fixing::kZero, Fixing::kOne}) {
        BnbNode child = node;
        child.visit[branch_robot] = f;
        child.bound = relaxed;
        child.depth = node.depth + 1;
        open.push({std::move(child), order++});
      }
      continue;
    }

    // Every robot in the subtour must be visited: at least one cycle arc has to go.
    std::vector<std::pair<std::size_t, std::size_t>> cycle_arcs;
    for (auto v : cycle) {
      const std::size_t w = assignment.col_of_row[v] + 1;
      if (node.forced_succ[v] != w) cycle_arcs.emplace_back(v, w);
    }
    for (std::size_t h = 0; h < cycle_arcs.size(); ++h) {
      BnbNode child = node;
      const auto [fi, fj] = cycle_arcs[h];
      child.arc_zero[fi * m + fj] = 1;
      for (std::size_t g = 0; g < h; ++g) {
        const auto [gi, gj] = cycle_arcs[g];
        child.forced_succ[gi] = gj;
        child.forced_pred[gj] = gi;
      }
      child.bound = relaxed;
      child.depth = node.depth + 1;
      open.push({std::move(child), order++});
    }
  }

  if (!best_path) throw InfeasibleError("control center is unreachable from the supervisor");
  return finish(*best_path, best_value, stats, start);
}

PtpSolution solve_dp(const StaticSnapshot& snapshot) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = snapshot.robot_count();
  if (n > kMaxDpRobots) {
    throw SizingError("solve_dp supports at most " + std::to_string(kMaxDpRobots) + " robots");
  }
  const std::size_t sink = n + 1;
  const std::size_t subsets = std::size_t{1} << n;
  constexpr std::uint8_t kNoParent = 0xff;

  // value[S * n + j]: best reward-minus-cost of a walk 0 -> ... -> j visiting exactly S (j in S).
  std::vector<double> value(subsets * n, -kInf);
  std::vector<std::uint8_t> parent(subsets * n, kNoParent);
  auto arc = [&](std::size_t i, std::size_t j) { return snapshot.has_arc(i, j) ? snapshot.cost(i, j) : kInf; };

  for (std::size_t j = 0; j < n; ++j) value[(std::size_t{1} << j) * n + j] = snapshot.reward(j + 1) - arc(0, j + 1);
  for (std::size_t s = 1; s < subsets; ++s) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(s >> j & 1)) continue;
      const double here = value[s * n + j];
      if (here == -kInf) continue;
      for (std::size_t next = 0; next < n; ++next) {
        if (s >> next & 1) continue;
        const std::size_t t = s | (std::size_t{1} << next);
        const double cand = here - arc(j + 1, next + 1) + snapshot.reward(next + 1);
        if (cand > value[t * n + next]) {
          value[t * n + next] = cand;
          parent[t * n + next] = static_cast<std::uint8_t>(j);
        }
      }
    }
  }

  auto rebuild = [&](std::size_t s, std::size_t j) {
    std::vector<VertexId> rev{VertexId{sink}};
    while (true) {
      rev.emplace_back(j + 1);
      const std::uint8_t p = parent[s * n + j];
      s &= ~(std::size_t{1} << j);
      if (p == kNoParent) break;
      j = p;
    }
    rev.emplace_back(0);
    std::reverse(rev.begin(), rev.end());
    return Path(n, std::move(rev));
  };

  std::optional<Path> best_path;
  double best_value = -kInf;
  if (snapshot.has_arc(0, sink)) {
    best_path = Path::direct(n);
    best_value = -snapshot.cost(0, sink);
  }
  for (std::size_t s = 1; s < subsets; ++s) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(s >> j & 1) || value[s * n + j] == -kInf) continue;
      const double total = value[s * n + j] - arc(j + 1, sink);
      if (total == -kInf || total < best_value - kTolerance) continue;
      Path path = rebuild(s, j);
      if (!best_path || preferred(total, path, best_value, *best_path)) {
        best_path = std::move(path);
        best_value = total;
      }
    }
  }
  if (!best_path) throw InfeasibleError("control center is unreachable from the supervisor");

  SolverStats stats;
  stats.nodes_explored = subsets;
  return finish(*best_path, static_value(*best_path, snapshot), stats, start);
}

}  // namespace fleetsup
