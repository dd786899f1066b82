#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <set>

#include "locomanip/governor.hpp"
#include "test_support.hpp"

using namespace locomanip;

namespace {

const AdmittanceGains kGains{1.0, 8.0, 16.0, -0.004, 0.0, 0.0};

ContactModel wall() {
  ContactModel c;
  c.wall_position = 0.04;
  c.k_env = 2000.0;
  return c;
}

AxisBounds bounds() {
  AxisBounds b;
  b.accel_max = 2.0;
  b.horizon_steps = 150;
  return b;
}

GridSpec small_grid() {
  GridSpec g;
  g.counts = {7, 7, 7, 5, 5};
  return g;
}

}  // namespace

TEST(KdTree, MatchesLinearScan) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<KdTree<3>::Point> pts(800);
  for (auto& p : pts) p = {u(rng), u(rng), std::round(u(rng) * 4) / 4};
  pts.push_back(pts[5]);  // duplicate point; the lower index must win
  KdTree<3> tree(pts);
  for (int i = 0; i < 3000; ++i) {
    const KdTree<3>::Point q{u(rng), u(rng), std::round(u(rng) * 4) / 4};
    const auto a = tree.nearest(q), b = tree.linear_scan(q);
    ASSERT_EQ(a.index, b.index);
    ASSERT_EQ(a.dist2, b.dist2);
  }
  EXPECT_EQ(tree.nearest(pts[5]).index, 5u);
}

TEST(KdTree, KNearestOrdered) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<KdTree<2>::Point> pts(300);
  for (auto& p : pts) p = {u(rng), u(rng)};
  KdTree<2> tree(pts);
  for (int i = 0; i < 200; ++i) {
    const KdTree<2>::Point q{u(rng), u(rng)};
    const auto hits = tree.k_nearest(q, 10);
    ASSERT_EQ(hits.size(), 10u);
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t k = 0; k < pts.size(); ++k) all.emplace_back(KdTree<2>::distance2(pts[k], q), k);
    std::sort(all.begin(), all.end());
    for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(hits[k].index, all[k].second);
  }
}

TEST(Admissible, Examples) {
  const AxisBounds b = bounds();
  EXPECT_TRUE(is_admissible({}, kGains, b, wall()));
  EXPECT_FALSE(is_admissible({b.x_max, 0, 2 * b.x_max, 0, 0}, kGains, b, ContactModel{}));
  EXPECT_FALSE(is_admissible({1.5 * b.x_max, 0, 0, 0, 0}, kGains, b, wall()));
}

TEST(Admissible, RolloutAgreesWithReference) {
  std::mt19937_64 rng(6);
  const AxisBounds b = bounds();
  std::uniform_real_distribution<double> x(-b.x_max, b.x_max), v(-b.v_max, b.v_max),
      w(-b.w_max, b.w_max);
  for (int i = 0; i < 500; ++i) {
    const MoasSample s{x(rng), v(rng), x(rng), w(rng), w(rng)};
    EXPECT_EQ(is_admissible(s, kGains, b, wall()), support::reference_admissible(s, kGains, b, wall()));
  }
  const auto states = rollout({0.01, 0.02, 0.03, 0.0, 0.0}, kGains, b, wall());
  EXPECT_EQ(states.size(), static_cast<std::size_t>(b.horizon_steps) + 1);
}

TEST(BuildMoas, VacuousBoundsKeepEverything) {
  AxisBounds b = bounds();
  b.x_max = b.v_max = b.w_max = 1e9;
  MoasBuildSummary sum;
  GridSpec g;
  g.counts = {3, 3, 3, 3, 3};
  g.extent = {0.05, 0.1, 0.05, 30, 30};
  build_moas(kGains, b, ContactModel{}, g, 1, &sum);
  EXPECT_DOUBLE_EQ(sum.retained_fraction, 1.0);
}

TEST(BuildMoas, TinyBoundsKeepAtMostTheOrigin) {
  AxisBounds b = bounds();
  b.x_max = 1e-12;
  GridSpec g;
  g.counts = {3, 3, 3, 1, 1};
  g.extent = {0.05, 0.1, 0.05, 30, 30};
  try {
    const auto idx = build_moas(kGains, b, wall(), g);
    for (const auto& s : idx.samples()) EXPECT_EQ(s, MoasSample{});
  } catch (const EmptySet&) {
  }
}

TEST(BuildMoas, WorkerCountDoesNotMatter) {
  const auto a = build_moas(kGains, bounds(), wall(), small_grid(), 1);
  const auto b = build_moas(kGains, bounds(), wall(), small_grid(), 3);
  EXPECT_EQ(a.samples(), b.samples());
}

TEST(BuildMoas, BudgetAndEmpty) {
  GridSpec g;
  g.budget = 10;
  EXPECT_THROW(build_moas(kGains, bounds(), wall(), g), InvalidConfig);
  AxisBounds b = bounds();
  b.x_max = 1e-9;
  GridSpec even;
  even.counts = {2, 2, 2, 2, 2};
  EXPECT_THROW(build_moas(kGains, b, wall(), even), EmptySet);
}

TEST(MoasIndex, NearestExamples) {
  const auto idx = build_moas(kGains, bounds(), wall(), small_grid());
  const auto& s = idx.samples()[idx.size() / 2];
  const auto hit = idx.nearest(s);
  EXPECT_EQ(idx.samples()[hit.index], s);
  EXPECT_DOUBLE_EQ(hit.distance, 0.0);

  const MoasIndex one({MoasSample{0.01, 0, 0, 0, 0}}, bounds());
  EXPECT_EQ(nearest(one, {0.04, -0.1, 0.02, 20, -3}), (MoasSample{0.01, 0, 0, 0, 0}));
  EXPECT_THROW(MoasIndex().nearest({}), EmptyIndex);
}

TEST(Govern, InsideIsUnchanged) {
  const GridSpec g = small_grid();
  const auto idx = build_moas(kGains, bounds(), wall(), g);
  GovernorOptions opts;
  opts.tol = default_tolerance(g);
  for (std::size_t k = 0; k < idx.size(); k += 97) {
    const auto& s = idx.samples()[k];
    const auto r = govern(idx, s, opts);
    EXPECT_FALSE(r.modified);
    EXPECT_EQ(r.x_ref, s.x_ref);
    EXPECT_EQ(r.w_ref, s.w_ref);
  }
}

TEST(Govern, ReplacesUnsafeReference) {
  const GridSpec g = small_grid();
  const AxisBounds b = bounds();
  const auto idx = build_moas(kGains, b, wall(), g);
  GovernorOptions opts;
  opts.exact = true;
  opts.gains = kGains;
  opts.bounds = b;
  opts.env = wall();
  const MoasSample q{0.03, 0.05, 0.2, 0.0, 0.0};
  ASSERT_FALSE(is_admissible(q, kGains, b, wall()));
  const auto r = govern(idx, q, opts);
  EXPECT_TRUE(r.modified);
  EXPECT_LE(std::abs(r.x_ref), b.x_max);
  EXPECT_TRUE(is_admissible({q.x, q.v, r.x_ref, q.w, r.w_ref}, kGains, b, wall()));
}

TEST(Govern, InfiniteToleranceNeverModifies) {
  const auto idx = build_moas(kGains, bounds(), wall(), small_grid());
  const auto r = govern(idx, {0.05, 0.1, 9.0, 30, -30}, std::numeric_limits<double>::infinity());
  EXPECT_FALSE(r.modified);
  EXPECT_EQ(r.x_ref, 9.0);
}

TEST(Govern, Idempotent) {
  const GridSpec g = small_grid();
  const AxisBounds b = bounds();
  const auto idx = build_moas(kGains, b, wall(), g);
  std::set<std::pair<double, double>> ref_pairs;
  for (const auto& s : idx.samples()) ref_pairs.emplace(s.x_ref, s.w_ref);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0), jitter(-0.05, 0.05);
  for (bool exact : {false, true}) {
    GovernorOptions opts;
    opts.tol = default_tolerance(g);
    opts.exact = exact;
    opts.gains = kGains;
    opts.bounds = b;
    opts.env = wall();
    int repaired = 0;
    for (int i = 0; i < 200; ++i) {
      // State close to a stored one, references anywhere in range.
      const auto& s = idx.samples()[std::uniform_int_distribution<std::size_t>(0, idx.size() - 1)(rng)];
      MoasSample q{s.x + jitter(rng) * b.x_max, s.v + jitter(rng) * b.v_max, 1.5 * u(rng) * b.x_max,
                   s.w, 1.5 * u(rng) * b.w_max};
      bool repairable = false;
      for (const auto& [xr, wr] : ref_pairs) {
        if (is_member(idx, {q.x, q.v, xr, q.w, wr}, opts)) {
          repairable = true;
          break;
        }
      }
      const auto r1 = govern(idx, q, opts);
      q.x_ref = r1.x_ref;
      q.w_ref = r1.w_ref;
      // Whenever some stored reference pair works, govern finds one.
      EXPECT_EQ(is_member(idx, q, opts), repairable);
      if (!repairable) continue;
      repaired += r1.modified;
      const auto r2 = govern(idx, q, opts);
      EXPECT_FALSE(r2.modified);
      EXPECT_EQ(r2.x_ref, r1.x_ref);
      EXPECT_EQ(r2.w_ref, r1.w_ref);
    }
    EXPECT_GT(repaired, 20);
  }
}

TEST(MoasIo, RoundTripAndFingerprint) {
  const GridSpec g = small_grid();
  MoasArtifact a;
  a.gains = kGains;
  a.bounds = bounds();
  a.env = wall();
  a.grid = g;
  a.fingerprint = moas_fingerprint(a.gains, a.bounds, a.env, g);
  a.samples = build_moas(kGains, a.bounds, a.env, g).samples();
  const auto path = std::filesystem::temp_directory_path() / "locomanip_moas_test.bin";
  save_moas(path, a);
  const auto back = load_moas(path, a.fingerprint);
  EXPECT_EQ(back.samples, a.samples);
  EXPECT_EQ(back.fingerprint, a.fingerprint);

  AdmittanceGains other = kGains;
  other.k_d += 1;
  EXPECT_NE(moas_fingerprint(other, a.bounds, a.env, g), a.fingerprint);
  EXPECT_THROW(load_moas(path, moas_fingerprint(other, a.bounds, a.env, g)), FingerprintMismatch);
  a.fingerprint ^= 1;
  save_moas(path, a);
  EXPECT_THROW(load_moas(path), FingerprintMismatch);
  std::filesystem::remove(path);
  EXPECT_THROW(load_moas(path), IoError);
}
