#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "locomanip/errors.hpp"

namespace locomanip {

// Locomotion modes. The numeric values are the labels used on plan
// waypoints (1 = biped, 2 = crawl, 3 = roll).
enum class Mode : int { kBiped = 1, kCrawl = 2, kRoll = 3 };

inline constexpr std::array<Mode, 3> kAllModes = {Mode::kBiped, Mode::kCrawl,
                                                  Mode::kRoll};

constexpr int mode_index(Mode m) { return static_cast<int>(m) - 1; }
constexpr Mode mode_from_index(int k) { return static_cast<Mode>(k + 1); }

std::string_view mode_name(Mode m);
// Accepts "biped" | "crawl" | "roll". Throws ParseError otherwise.
Mode parse_mode(std::string_view name);

// Small bit set over the three modes.
class ModeSet {
 public:
  constexpr ModeSet() = default;
  static constexpr ModeSet all() { return ModeSet(0b111); }
  static constexpr ModeSet none() { return ModeSet(0); }
  static constexpr ModeSet only(Mode m) { return ModeSet(1u << mode_index(m)); }

  constexpr bool contains(Mode m) const { return (bits_ >> mode_index(m)) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr ModeSet operator&(ModeSet o) const { return ModeSet(bits_ & o.bits_); }
  constexpr ModeSet operator|(ModeSet o) const { return ModeSet(bits_ | o.bits_); }
  constexpr bool operator==(const ModeSet&) const = default;
  constexpr std::uint8_t bits() const { return bits_; }

 private:
  constexpr explicit ModeSet(std::uint8_t bits) : bits_(bits) {}
  std::uint8_t bits_ = 0;
};

// Integer grid cell (or integer displacement between cells).
struct Cell {
  int x = 0;
  int y = 0;

  friend constexpr Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Cell operator-(Cell a, Cell b) { return {a.x - b.x, a.y - b.y}; }
  constexpr auto operator<=>(const Cell&) const = default;
};

constexpr int manhattan(Cell c) { return (c.x < 0 ? -c.x : c.x) + (c.y < 0 ? -c.y : c.y); }
constexpr int squared_norm(Cell c) { return c.x * c.x + c.y * c.y; }

// Circular region (grid units) that forces a locomotion mode on every cell
// inside its closed disk.
struct TerrainRegion {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 1.0;
  Mode required_mode = Mode::kCrawl;
};

// Axis-aligned rectangle of forbidden cells, inclusive bounds.
struct RectObstacle {
  int x_min = 0;
  int x_max = 0;
  int y_min = 0;
  int y_max = 0;

  bool contains(Cell c) const {
    return x_min <= c.x && c.x <= x_max && y_min <= c.y && c.y <= y_max;
  }
};

bool cell_contains(const TerrainRegion& region, Cell p);

struct GridMap {
  int n_grid = 0;
  double cell_size_m = 0.5;
  std::vector<TerrainRegion> terrains;
  std::vector<RectObstacle> obstacles;
  Cell start;
  Cell goal;

  bool in_bounds(Cell c) const {
    return 0 <= c.x && c.x < n_grid && 0 <= c.y && c.y < n_grid;
  }
  bool blocked(Cell c) const;
  // Modes the terrain allows at `c`. All modes outside every region; the
  // intersection of required modes otherwise (empty when regions conflict).
  ModeSet terrain_modes(Cell c) const;
  int cell_index(Cell c) const { return c.x * n_grid + c.y; }
};

// Throws InvalidMap describing the first broken invariant.
void validate_map(const GridMap& map);

GridMap load_map(std::string_view document);
GridMap load_map_file(const std::filesystem::path& path);
std::string save_map(const GridMap& map);

}  // namespace locomanip
