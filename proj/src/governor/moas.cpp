#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "locomanip/errors.hpp"
#include "locomanip/governor.hpp"

namespace locomanip {

void AxisBounds::validate() const {
  if (!(x_max > 0.0) || !(v_max > 0.0) || !(w_max > 0.0) || !(accel_max > 0.0)) {
    throw InvalidConfig("axis bounds must be positive");
  }
  if (horizon_steps < 1) throw InvalidConfig("rollout horizon must be at least one step");
  if (!(dt > 0.0)) throw InvalidConfig("dt must be positive");
}

namespace {

struct Rollout {
  AxisReference ref;
  double residual;
  AxisState state;

  Rollout(const MoasSample& sample, const ContactModel& env)
      : ref{sample.x_ref, sample.w_ref},
        residual(sample.w - env.spring(sample.x)),
        state{sample.x, sample.v, sample.w, 0.0, 0.0} {}

  void step(const AdmittanceGains& gains, const AxisBounds& bounds, const ContactModel& env) {
    const auto c = governed_control(state, ref, gains, bounds.accel_max, bounds.dt);
    state.z_x = c.z_x;
    state.z_f = c.z_f;
    state = integrate_axis(state, c.u, bounds.dt);
    state.w = env.spring(state.x) + residual;
  }
};

bool within(const AxisState& s, const AxisBounds& b) {
  return std::abs(s.x) <= b.x_max && std::abs(s.v) <= b.v_max && std::abs(s.w) <= b.w_max;
}

}  // namespace

bool is_admissible(const MoasSample& sample, const AdmittanceGains& gains,
                   const AxisBounds& bounds, const ContactModel& env) {
  Rollout r(sample, env);
  for (int k = 0;; ++k) {
    if (!within(r.state, bounds)) return false;
    if (k == bounds.horizon_steps) return true;
    r.step(gains, bounds, env);
  }
}

std::vector<AxisState> rollout(const MoasSample& sample, const AdmittanceGains& gains,
                               const AxisBounds& bounds, const ContactModel& env) {
  Rollout r(sample, env);
  std::vector<AxisState> out{r.state};
  for (int k = 0; k < bounds.horizon_steps; ++k) {
    r.step(gains, bounds, env);
    out.push_back(r.state);
  }
  return out;
}

std::uint64_t GridSpec::total() const {
  std::uint64_t n = 1;
  for (int c : counts) n *= static_cast<std::uint64_t>(std::max(c, 0));
  return n;
}

std::array<double, 5> GridSpec::half_widths(const AxisBounds& b) const {
  return extent.value_or(std::array<double, 5>{b.x_max, b.v_max, b.x_max, b.w_max, b.w_max});
}

double grid_value(int i, int count, double bound) {
  if (count <= 1) return 0.0;
  // Exact at both ends and at the centre, and mirror pairs are exact negatives.
  return bound * (static_cast<double>(2 * i - (count - 1)) / static_cast<double>(count - 1));
}

MoasIndex::MoasIndex(std::vector<MoasSample> samples, const AxisBounds& bounds)
    : samples_(std::move(samples)),
      scales_{bounds.x_max, bounds.v_max, bounds.x_max, bounds.w_max, bounds.w_max} {
  std::vector<KdTree<5>::Point> pts;
  pts.reserve(samples_.size());
  for (const auto& s : samples_) pts.push_back(normalize(s));
  tree_ = KdTree<5>(std::move(pts));
}

std::array<double, 5> MoasIndex::normalize(const MoasSample& s) const {
  auto a = s.as_array();
  for (int d = 0; d < 5; ++d) a[d] /= scales_[d];
  return a;
}

double MoasIndex::distance(const MoasSample& a, const MoasSample& b) const {
  return std::sqrt(KdTree<5>::distance2(normalize(a), normalize(b)));
}

MoasIndex::Hit MoasIndex::nearest(const MoasSample& query) const {
  if (empty()) throw EmptyIndex("nearest-neighbour query on an empty admissible set");
  const auto h = tree_.nearest(normalize(query));
  return {h.index, std::sqrt(h.dist2)};
}

std::vector<MoasIndex::Hit> MoasIndex::k_nearest(const MoasSample& query, std::size_t k) const {
  if (empty()) throw EmptyIndex("nearest-neighbour query on an empty admissible set");
  std::vector<Hit> out;
  for (const auto& h : tree_.k_nearest(normalize(query), k)) out.push_back({h.index, std::sqrt(h.dist2)});
  return out;
}

MoasIndex::Hit MoasIndex::linear_scan(const MoasSample& query) const {
  if (empty()) throw EmptyIndex("nearest-neighbour query on an empty admissible set");
  const auto h = tree_.linear_scan(normalize(query));
  return {h.index, std::sqrt(h.dist2)};
}

MoasIndex build_moas(const AdmittanceGains& gains, const AxisBounds& bounds,
                     const ContactModel& env, const GridSpec& grid, int workers,
                     MoasBuildSummary* summary) {
  gains.validate();
  bounds.validate();
  env.validate();
  for (int c : grid.counts) {
    if (c < 1) throw InvalidConfig("grid sample counts must be positive");
  }
  for (double h : grid.half_widths(bounds)) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidConfig("grid extent must be positive");
  }
  const std::uint64_t total = grid.total();
  if (total > grid.budget) {
    throw InvalidConfig("grid has " + std::to_string(total) + " samples, budget is " +
                        std::to_string(grid.budget));
  }

  const std::array<double, 5> span = grid.half_widths(bounds);
  auto sample_at = [&](std::uint64_t flat) {
    std::array<double, 5> v{};
    for (int d = 4; d >= 0; --d) {
      const auto c = static_cast<std::uint64_t>(grid.counts[d]);
      v[d] = grid_value(static_cast<int>(flat % c), grid.counts[d], span[d]);
      flat /= c;
    }
    return MoasSample{v[0], v[1], v[2], v[3], v[4]};
  };

  std::vector<std::uint8_t> keep(total, 0);
  const int n_workers = std::max(1, workers);
  auto work = [&](int w) {
    for (std::uint64_t i = static_cast<std::uint64_t>(w); i < total; i += n_workers) {
      keep[i] = is_admissible(sample_at(i), gains, bounds, env) ? 1 : 0;
    }
  };
  if (n_workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work, w);
  }

  std::vector<MoasSample> retained;
  for (std::uint64_t i = 0; i < total; ++i) {
    if (keep[i]) retained.push_back(sample_at(i));
  }
  if (summary) {
    summary->total = total;
    summary->retained = retained.size();
    summary->retained_fraction = static_cast<double>(retained.size()) / static_cast<double>(total);
  }
  if (retained.empty()) throw EmptySet("no grid sample is admissible; check gains and bounds");
  return MoasIndex(std::move(retained), bounds);
}

MoasSample nearest(const MoasIndex& index, const MoasSample& query) {
  return index.samples()[index.nearest(query).index];
}

double default_tolerance(const GridSpec& grid) {
  double s = 0.0;
  for (int c : grid.counts) {
    if (c > 1) {
      const double spacing = 2.0 / (c - 1);
      s += spacing * spacing;
    }
  }
  return 0.5 * std::sqrt(s);
}

bool is_member(const MoasIndex& index, const MoasSample& query, const GovernorOptions& opts) {
  if (opts.exact) return is_admissible(query, opts.gains, opts.bounds, opts.env);
  return index.nearest(query).distance <= opts.tol;
}

GovernResult govern(const MoasIndex& index, const MoasSample& query, const GovernorOptions& opts) {
  if (index.empty()) throw EmptyIndex("governor has an empty admissible set");
  if (is_member(index, query, opts)) return {query.x_ref, query.w_ref, false};

  // Membership only depends on (state, refs), so each distinct reference pair
  // is tried once, in order of its nearest stored sample. The batch grows
  // until every stored pair has been seen.
  std::set<std::pair<double, double>> tried;
  std::size_t k = std::max<std::size_t>(1, opts.max_candidates);
  for (std::size_t seen = 0;;) {
    const auto hits = index.k_nearest(query, std::min(k, index.size()));
    for (std::size_t i = seen; i < hits.size(); ++i) {
      const MoasSample& c = index.samples()[hits[i].index];
      if (!tried.emplace(c.x_ref, c.w_ref).second) continue;
      MoasSample moved = query;
      moved.x_ref = c.x_ref;
      moved.w_ref = c.w_ref;
      if (is_member(index, moved, opts)) return {c.x_ref, c.w_ref, true};
    }
    seen = hits.size();
    if (seen >= index.size()) break;
    k *= 4;
  }
  const MoasSample& c = index.samples()[index.nearest(query).index];
  return {c.x_ref, c.w_ref, true};
}

GovernResult govern(const MoasIndex& index, const MoasSample& query, double tol) {
  GovernorOptions opts;
  opts.tol = tol;
  return govern(index, query, opts);
}

}  // namespace locomanip
