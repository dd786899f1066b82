#include "locomanip/world.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace locomanip {

using nlohmann::json;

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::kBiped:
      return "biped";
    case Mode::kCrawl:
      return "crawl";
    case Mode::kRoll:
      return "roll";
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  if (name == "biped") return Mode::kBiped;
  if (name == "crawl") return Mode::kCrawl;
  if (name == "roll") return Mode::kRoll;
  throw ParseError("unknown mode name '" + std::string(name) + "'");
}

bool cell_contains(const TerrainRegion& region, Cell p) {
  const double dx = p.x - region.center_x;
  const double dy = p.y - region.center_y;
  return dx * dx + dy * dy <= region.radius * region.radius;
}

bool GridMap::blocked(Cell c) const {
  for (const auto& o : obstacles) {
    if (o.contains(c)) return true;
  }
  return false;
}

ModeSet GridMap::terrain_modes(Cell c) const {
  ModeSet allowed = ModeSet::all();
  for (const auto& r : terrains) {
    if (cell_contains(r, c)) allowed = allowed & ModeSet::only(r.required_mode);
  }
  return allowed;
}

namespace {

std::string cell_str(Cell c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

}  // namespace

void validate_map(const GridMap& map) {
  if (map.n_grid <= 0) throw InvalidMap("n_grid must be positive");
  if (!(map.cell_size_m > 0.0)) throw InvalidMap("cell_size_m must be positive");
  if (!map.in_bounds(map.start)) throw InvalidMap("start " + cell_str(map.start) + " outside grid");
  if (!map.in_bounds(map.goal)) throw InvalidMap("goal " + cell_str(map.goal) + " outside grid");
  for (std::size_t k = 0; k < map.terrains.size(); ++k) {
    if (!(map.terrains[k].radius > 0.0)) {
      throw InvalidMap("terrain " + std::to_string(k) + " has non-positive radius");
    }
  }
  for (std::size_t k = 0; k < map.obstacles.size(); ++k) {
    const auto& o = map.obstacles[k];
    if (o.x_min > o.x_max || o.y_min > o.y_max) {
      throw InvalidMap("obstacle " + std::to_string(k) + " has inverted bounds");
    }
  }
  if (map.blocked(map.start)) throw InvalidMap("start " + cell_str(map.start) + " lies in an obstacle");
  if (map.blocked(map.goal)) throw InvalidMap("goal " + cell_str(map.goal) + " lies in an obstacle");
}

namespace {

Cell parse_cell(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ParseError(std::string(what) + " must be an integer pair [i, j]");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

GridMap load_map(std::string_view document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("map document is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("map document must be a JSON object");

  GridMap map;
  map.n_grid = required<int>(j, "n_grid");
  map.cell_size_m = j.value("cell_size_m", 0.5);
  if (!j.contains("start")) throw ParseError("missing key 'start'");
  if (!j.contains("goal")) throw ParseError("missing key 'goal'");
  map.start = parse_cell(j["start"], "start");
  map.goal = parse_cell(j["goal"], "goal");

  for (const auto& t : j.value("terrains", json::array())) {
    if (!t.contains("center") || !t["center"].is_array() || t["center"].size() != 2) {
      throw ParseError("terrain center must be a pair [x, y]");
    }
    TerrainRegion r;
    try {
      r.center_x = t["center"][0].get<double>();
      r.center_y = t["center"][1].get<double>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad terrain center: ") + e.what());
    }
    r.radius = required<double>(t, "radius");
    r.required_mode = parse_mode(required<std::string>(t, "mode"));
    map.terrains.push_back(r);
  }
  for (const auto& o : j.value("obstacles", json::array())) {
    map.obstacles.push_back({required<int>(o, "x_min"), required<int>(o, "x_max"),
                             required<int>(o, "y_min"), required<int>(o, "y_max")});
  }
  validate_map(map);
  return map;
}

GridMap load_map_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open map file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_map(ss.str());
}

std::string save_map(const GridMap& map) {
  json j;
  j["n_grid"] = map.n_grid;
  j["cell_size_m"] = map.cell_size_m;
  j["start"] = {map.start.x, map.start.y};
  j["goal"] = {map.goal.x, map.goal.y};
  j["terrains"] = json::array();
  for (const auto& t : map.terrains) {
    j["terrains"].push_back({{"center", {t.center_x, t.center_y}},
                             {"radius", t.radius},
                             {"mode", std::string(mode_name(t.required_mode))}});
  }
  j["obstacles"] = json::array();
  for (const auto& o : map.obstacles) {
    j["obstacles"].push_back(
        {{"x_min", o.x_min}, {"x_max", o.x_max}, {"y_min", o.y_min}, {"y_max", o.y_max}});
  }
  return j.dump(2);
}

}  // namespace locomanip
