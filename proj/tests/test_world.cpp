#include <gtest/gtest.h>

#include "locomanip/world.hpp"
#include "test_support.hpp"

using namespace locomanip;

TEST(World, MinimalDocumentIsValid) {
  const auto m = load_map(R"({"n_grid":5,"start":[0,0],"goal":[4,4]})");
  EXPECT_EQ(m.n_grid, 5);
  EXPECT_TRUE(m.terrains.empty());
  EXPECT_TRUE(m.obstacles.empty());
  EXPECT_EQ(m.goal, (Cell{4, 4}));
}

TEST(World, InvertedObstacleRejected) {
  EXPECT_THROW(load_map(R"({"n_grid":5,"start":[0,0],"goal":[4,4],
      "obstacles":[{"x_min":3,"x_max":2,"y_min":0,"y_max":1}]})"),
               InvalidMap);
}

TEST(World, StartInsideObstacleRejected) {
  EXPECT_THROW(load_map(R"({"n_grid":5,"start":[0,0],"goal":[4,4],
      "obstacles":[{"x_min":0,"x_max":1,"y_min":0,"y_max":1}]})"),
               InvalidMap);
}

TEST(World, BadDocumentsAreParseErrors) {
  EXPECT_THROW(load_map("{not json"), ParseError);
  EXPECT_THROW(load_map(R"({"n_grid":5,"goal":[4,4]})"), ParseError);
  EXPECT_THROW(load_map(R"({"n_grid":5,"start":[0,0],"goal":[4,4],
      "terrains":[{"center":[1,1],"radius":1,"mode":"swim"}]})"),
               ParseError);
}

TEST(World, FixturesLoad) {
  for (const char* name : {"fig5.json", "benchmark.json", "corridor.json", "empty5.json",
                           "crawl_everywhere.json"}) {
    SCOPED_TRACE(name);
    EXPECT_NO_THROW(load_map_file(support::fixture(name)));
  }
  const auto fig5 = load_map_file(support::fixture("fig5.json"));
  EXPECT_EQ(fig5.n_grid, 20);
  EXPECT_FALSE(fig5.terrains.empty());
  EXPECT_FALSE(fig5.obstacles.empty());
}

TEST(World, MissingFileIsIoError) {
  EXPECT_THROW(load_map_file("/nonexistent/map.json"), IoError);
}

TEST(World, DiskMembership) {
  EXPECT_TRUE(cell_contains({0, 0, 1, Mode::kCrawl}, {0, 0}));
  EXPECT_FALSE(cell_contains({0, 0, 1, Mode::kCrawl}, {1, 1}));
  EXPECT_TRUE(cell_contains({2.5, 2.5, 1.2, Mode::kCrawl}, {3, 3}));
  // The boundary is closed.
  EXPECT_TRUE(cell_contains({0, 0, 1, Mode::kCrawl}, {1, 0}));
}

TEST(World, DiskMembershipIsSymmetric) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> c(-5, 5), r(0.1, 4);
  std::uniform_int_distribution<int> p(-6, 6);
  for (int i = 0; i < 2000; ++i) {
    const TerrainRegion reg{c(rng), c(rng), r(rng), Mode::kBiped};
    const Cell q{p(rng), p(rng)};
    const TerrainRegion mirrored{-reg.center_x, -reg.center_y, reg.radius, Mode::kBiped};
    EXPECT_EQ(cell_contains(reg, q), cell_contains(mirrored, {-q.x, -q.y}));
  }
}

TEST(World, TerrainModesIntersect) {
  GridMap m;
  m.n_grid = 5;
  m.terrains = {{2, 2, 1, Mode::kCrawl}, {3, 2, 1, Mode::kBiped}};
  EXPECT_EQ(m.terrain_modes({0, 0}), ModeSet::all());
  EXPECT_EQ(m.terrain_modes({1, 2}), ModeSet::only(Mode::kCrawl));
  EXPECT_EQ(m.terrain_modes({4, 2}), ModeSet::only(Mode::kBiped));
  EXPECT_TRUE(m.terrain_modes({2, 2}).empty());
}

TEST(World, RoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto m = support::random_map(rng, 6);
    const auto back = load_map(save_map(m));
    EXPECT_EQ(save_map(back), save_map(m));
    EXPECT_EQ(back.start, m.start);
    EXPECT_EQ(back.obstacles.size(), m.obstacles.size());
  }
}

TEST(World, ModeNames) {
  for (Mode m : kAllModes) EXPECT_EQ(parse_mode(mode_name(m)), m);
  EXPECT_THROW(parse_mode("fly"), ParseError);
}
