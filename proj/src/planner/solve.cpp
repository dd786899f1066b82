#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#include "locomanip/planner.hpp"

namespace locomanip {
namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

struct Move {
  Cell d;
  Mode mode;
  int to;  // destination cell index
};

struct Key {
  std::uint64_t h1;
  std::uint64_t h2;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const { return k.h1 ^ (k.h2 * 0x9e3779b97f4a7c15ULL); }
};

class BranchAndBound {
 public:
  BranchAndBound(const ProblemInstance& inst, const SolveOptions& opts)
      : inst_(inst), map_(inst.map), cfg_(inst.config), opts_(opts), n_(map_.n_grid) {
    const int cells = n_ * n_;
    free_.assign(cells, 0);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) free_[i * n_ + j] = !map_.blocked({i, j});
    }
    free_count_ = static_cast<int>(std::count(free_.begin(), free_.end(), 1));
    build_moves();
    build_distances();
    build_goal_bounds();

    std::mt19937_64 rng(0x5eed5eedULL);
    zobrist_a_.resize(cells);
    zobrist_b_.resize(cells);
    for (int c = 0; c < cells; ++c) {
      zobrist_a_[c] = rng();
      zobrist_b_[c] = rng();
    }
  }

  SolveResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    start_time_ = t0;
    visited_.assign(n_ * n_, 0);
    path_.clear();
    counts_ = {0, 0, 0};

    const int s = map_.cell_index(map_.start);
    visited_[s] = 1;
    h1_ = zobrist_a_[s];
    h2_ = zobrist_b_[s];
    const double open = dfs(0, s, 1);

    SolveResult res;
    res.nodes = nodes_;
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (have_incumbent_) {
      std::vector<Cell> steps;
      std::vector<Mode> modes;
      for (const auto& m : best_path_) {
        steps.push_back(m.d);
        modes.push_back(m.mode);
      }
      res.plan = make_plan(n_, map_.start, steps, modes);
      res.objective = objective_value(*res.plan, cfg_, map_.goal);
    }
    if (!aborted_) {
      res.status = have_incumbent_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
      res.bound = res.objective;
      res.gap = 0.0;
    } else {
      res.status = have_incumbent_ ? SolveStatus::kFeasible : SolveStatus::kUnknown;
      res.bound = have_incumbent_ ? std::max(open, res.objective) : open;
      res.gap = have_incumbent_
                    ? (res.bound - res.objective) / std::max(1.0, std::abs(res.objective))
                    : std::numeric_limits<double>::infinity();
    }
    return res;
  }

 private:
  void build_moves() {
    std::vector<Cell> displacements;
    for (Mode m : kAllModes) {
      for (Cell d : inst_.steps(m)) {
        if (std::find(displacements.begin(), displacements.end(), d) == displacements.end()) {
          displacements.push_back(d);
        }
      }
    }
    // Shorter strides first, then the fixed lexicographic order.
    std::sort(displacements.begin(), displacements.end(), [](Cell a, Cell b) {
      const int ma = manhattan(a), mb = manhattan(b);
      return ma != mb ? ma < mb : a < b;
    });
    moves_.assign(n_ * n_, {});
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        const Cell from{i, j};
        if (!free_[i * n_ + j]) continue;
        for (Cell d : displacements) {
          const Cell to = from + d;
          if (!map_.in_bounds(to) || !free_[map_.cell_index(to)]) continue;
          // Only the cheapest legal mode can be part of an optimum; equal
          // penalties resolve to the lowest mode index.
          const ModeSet legal = inst_.legal_modes(from, d);
          std::optional<Mode> best;
          for (Mode m : kAllModes) {
            if (!legal.contains(m)) continue;
            if (!best || cfg_.penalty(m) < cfg_.penalty(*best)) best = m;
          }
          if (best) moves_[i * n_ + j].push_back({d, *best, map_.cell_index(to)});
        }
      }
    }
    min_penalty_ = std::numeric_limits<double>::infinity();
    for (const auto& list : moves_) {
      for (const auto& mv : list) min_penalty_ = std::min(min_penalty_, cfg_.penalty(mv.mode));
    }
    if (!std::isfinite(min_penalty_)) min_penalty_ = 0.0;
  }

  // All-pairs step counts over the move graph.
  void build_distances() {
    const int cells = n_ * n_;
    dist_.assign(static_cast<std::size_t>(cells) * cells, kUnreachable);
    std::vector<int> queue(cells);
    for (int src = 0; src < cells; ++src) {
      if (!free_[src]) continue;
      int* row = &dist_[static_cast<std::size_t>(src) * cells];
      int head = 0, tail = 0;
      row[src] = 0;
      queue[tail++] = src;
      while (head < tail) {
        const int c = queue[head++];
        for (const auto& mv : moves_[c]) {
          if (row[mv.to] == kUnreachable) {
            row[mv.to] = row[c] + 1;
            queue[tail++] = mv.to;
          }
        }
      }
    }
  }

  // goal_lb_[c * (T+1) + r]: least squared goal error over cells reachable
  // from c in at most r steps.
  void build_goal_bounds() {
    const int cells = n_ * n_;
    const int T = cfg_.horizon;
    goal_lb_.assign(static_cast<std::size_t>(cells) * (T + 1), 0);
    std::vector<int> err(cells);
    for (int c = 0; c < cells; ++c) {
      err[c] = squared_norm(Cell{c / n_, c % n_} - map_.goal);
    }
    for (int c = 0; c < cells; ++c) {
      if (!free_[c]) continue;
      const int* row = &dist_[static_cast<std::size_t>(c) * cells];
      for (int r = 0; r <= T; ++r) {
        int best = std::numeric_limits<int>::max();
        for (int c2 = 0; c2 < cells; ++c2) {
          if (row[c2] <= r) best = std::min(best, err[c2]);
        }
        goal_lb_[static_cast<std::size_t>(c) * (T + 1) + r] = best;
      }
    }
  }

  double penalty_of(const std::array<int, 3>& counts) const {
    double p = 0.0;
    for (int k = 0; k < 3; ++k) p += counts[k] * cfg_.mode_penalties[k];
    return p;
  }

  double bound(int t, int pos, int visited_count) const {
    const int T = cfg_.horizon;
    const int r = T - t;
    const int fresh = std::min(r, free_count_ - visited_count);
    const int goal_err = goal_lb_[static_cast<std::size_t>(pos) * (T + 1) + r];
    return cfg_.w_exp * (visited_count + fresh) - cfg_.w_goal * goal_err - penalty_of(counts_) -
           r * min_penalty_;
  }

  double tolerance() const { return 1e-9 * std::max(1.0, std::abs(incumbent_)); }

  bool out_of_budget() {
    if (aborted_) return true;
    if (nodes_ >= opts_.node_limit) {
      aborted_ = true;
    } else if ((nodes_ & 0xfff) == 0) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time_).count();
      if (elapsed > opts_.time_limit_s) aborted_ = true;
    }
    return aborted_;
  }

  // Returns the best bound among subtrees left unexplored because the budget
  // ran out (-inf when the subtree was closed).
  double dfs(int t, int pos, int visited_count) {
    ++nodes_;
    const int T = cfg_.horizon;
    if (t == T) {
      const double value = cfg_.w_exp * visited_count -
                           cfg_.w_goal * squared_norm(Cell{pos / n_, pos % n_} - map_.goal) -
                           penalty_of(counts_);
      if (!have_incumbent_ || value > incumbent_ + tolerance()) {
        have_incumbent_ = true;
        incumbent_ = value;
        best_path_ = path_;
      }
      return -std::numeric_limits<double>::infinity();
    }

    if (t > 0 && remember(t, pos)) return -std::numeric_limits<double>::infinity();

    struct Child {
      const Move* move;
      double bound;
      bool fresh;
    };
    std::vector<Child> children;
    children.reserve(moves_[pos].size());
    for (const auto& mv : moves_[pos]) {
      const bool fresh = !visited_[mv.to];
      counts_[mode_index(mv.mode)] += 1;
      const double b = bound(t + 1, mv.to, visited_count + (fresh ? 1 : 0));
      counts_[mode_index(mv.mode)] -= 1;
      children.push_back({&mv, b, fresh});
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& a, const Child& b) { return a.bound > b.bound; });

    double open = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < children.size(); ++k) {
      const Child& ch = children[k];
      if (have_incumbent_ && ch.bound <= incumbent_ + tolerance()) break;
      if (out_of_budget()) {
        for (std::size_t r = k; r < children.size(); ++r) open = std::max(open, children[r].bound);
        break;
      }
      const Move& mv = *ch.move;
      counts_[mode_index(mv.mode)] += 1;
      path_.push_back(mv);
      if (ch.fresh) {
        visited_[mv.to] = 1;
        h1_ ^= zobrist_a_[mv.to];
        h2_ ^= zobrist_b_[mv.to];
      }
      const double sub = dfs(t + 1, mv.to, visited_count + (ch.fresh ? 1 : 0));
      if (ch.fresh) {
        visited_[mv.to] = 0;
        h1_ ^= zobrist_a_[mv.to];
        h2_ ^= zobrist_b_[mv.to];
      }
      path_.pop_back();
      counts_[mode_index(mv.mode)] -= 1;
      open = std::max(open, sub);
    }
    return open;
  }

  // Transposition check: the same (t, position, visited set) reached again
  // with no smaller accrued penalty cannot lead anywhere better.
  bool remember(int t, int pos) {
    const Key key{h1_ ^ (static_cast<std::uint64_t>(t) << 40) ^ static_cast<std::uint64_t>(pos),
                  h2_ + static_cast<std::uint64_t>(t) * 0x100000001b3ULL + pos};
    const double pen = penalty_of(counts_);
    auto it = seen_.find(key);
    if (it != seen_.end()) {
      if (it->second <= pen + 1e-12) return true;
      it->second = pen;
      return false;
    }
    if (seen_.size() < kSeenCapacity) seen_.emplace(key, pen);
    return false;
  }

  static constexpr std::size_t kSeenCapacity = 4'000'000;

  const ProblemInstance& inst_;
  const GridMap& map_;
  const PlanConfig& cfg_;
  SolveOptions opts_;
  int n_;
  std::vector<std::uint8_t> free_;
  int free_count_ = 0;
  std::vector<std::vector<Move>> moves_;
  std::vector<int> dist_;
  std::vector<int> goal_lb_;
  double min_penalty_ = 0.0;
  std::vector<std::uint64_t> zobrist_a_, zobrist_b_;

  std::vector<std::uint8_t> visited_;
  std::vector<Move> path_;
  std::array<int, 3> counts_{0, 0, 0};
  std::uint64_t h1_ = 0, h2_ = 0;
  std::unordered_map<Key, double, KeyHash> seen_;

  bool have_incumbent_ = false;
  double incumbent_ = 0.0;
  std::vector<Move> best_path_;
  std::int64_t nodes_ = 0;
  bool aborted_ = false;
  std::chrono::steady_clock::time_point start_time_;
};

}  // namespace

SolveResult solve(const ProblemInstance& instance, const SolveOptions& options) {
  BranchAndBound bb(instance, options);
  return bb.run();
}

}  // namespace locomanip
