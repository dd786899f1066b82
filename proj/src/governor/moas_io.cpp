#include <cstdio>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "locomanip/errors.hpp"
#include "locomanip/governor.hpp"

namespace locomanip {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'L', 'M', 'M', 'O', 'A', 'S', '0', '1'};

void feed(std::uint64_t& h, const std::string& text) {
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
}

void feed(std::uint64_t& h, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g;", v);
  feed(h, std::string(buf));
}

json to_json(const AdmittanceGains& g) {
  return {{"m_d", g.m_d}, {"d_d", g.d_d}, {"k_d", g.k_d},
          {"k_f", g.k_f}, {"k_ix", g.k_ix}, {"k_if", g.k_if}};
}

json to_json(const AxisBounds& b) {
  return {{"x_max", b.x_max},
          {"v_max", b.v_max},
          {"w_max", b.w_max},
          {"accel_max", b.accel_max},
          {"horizon_steps", b.horizon_steps},
          {"dt", b.dt}};
}

json to_json(const ContactModel& c) {
  json dist = json::array();
  for (const auto& s : c.disturbance) dist.push_back({s.t_start, s.value});
  return {{"wall_position", c.wall_position}, {"k_env", c.k_env}, {"disturbance", dist}};
}

}  // namespace

std::uint64_t moas_fingerprint(const AdmittanceGains& gains, const AxisBounds& bounds,
                               const ContactModel& env, const GridSpec& grid) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : {gains.m_d, gains.d_d, gains.k_d, gains.k_f, gains.k_ix, gains.k_if}) feed(h, v);
  for (double v : {bounds.x_max, bounds.v_max, bounds.w_max, bounds.accel_max, bounds.dt}) feed(h, v);
  feed(h, std::to_string(bounds.horizon_steps) + ";");
  // Rollouts only see the spring; the disturbance schedule does not enter.
  feed(h, env.wall_position);
  feed(h, env.k_env);
  for (int c : grid.counts) feed(h, std::to_string(c) + ";");
  if (grid.extent) {
    feed(h, std::string("extent;"));
    for (double v : *grid.extent) feed(h, v);
  }
  return h;
}

void save_moas(const std::filesystem::path& path, const MoasArtifact& a) {
  json meta;
  meta["gains"] = to_json(a.gains);
  meta["bounds"] = to_json(a.bounds);
  meta["env"] = to_json(a.env);
  meta["grid"] = a.grid.counts;
  if (a.grid.extent) meta["extent"] = *a.grid.extent;
  meta["fingerprint"] = a.fingerprint;
  const std::string text = meta.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write MOAS artifact " + path.string());
  const std::uint64_t meta_len = text.size();
  const std::uint64_t count = a.samples.size();
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&meta_len), sizeof meta_len);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  for (const auto& s : a.samples) {
    const auto v = s.as_array();
    out.write(reinterpret_cast<const char*>(v.data()), sizeof(double) * v.size());
  }
  if (!out) throw IoError("failed writing MOAS artifact " + path.string());
}

MoasArtifact load_moas(const std::filesystem::path& path, std::optional<std::uint64_t> expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open MOAS artifact " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw ParseError(path.string() + " is not a MOAS artifact");
  }
  std::uint64_t meta_len = 0;
  in.read(reinterpret_cast<char*>(&meta_len), sizeof meta_len);
  if (!in || meta_len > (1u << 24)) throw ParseError("corrupt MOAS header");
  std::string text(meta_len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(meta_len));

  MoasArtifact a;
  try {
    const json meta = json::parse(text);
    const auto& g = meta.at("gains");
    a.gains = {g.at("m_d"), g.at("d_d"), g.at("k_d"), g.at("k_f"), g.at("k_ix"), g.at("k_if")};
    const auto& b = meta.at("bounds");
    a.bounds = {b.at("x_max"), b.at("v_max"), b.at("w_max"), b.at("accel_max"),
                b.at("horizon_steps"), b.at("dt")};
    const auto& e = meta.at("env");
    a.env.wall_position = e.at("wall_position");
    a.env.k_env = e.at("k_env");
    for (const auto& s : e.at("disturbance")) a.env.disturbance.push_back({s.at(0), s.at(1)});
    a.grid.counts = meta.at("grid").get<std::array<int, 5>>();
    if (meta.contains("extent")) a.grid.extent = meta["extent"].get<std::array<double, 5>>();
    a.fingerprint = meta.at("fingerprint").get<std::uint64_t>();
  } catch (const json::exception& ex) {
    throw ParseError(std::string("corrupt MOAS metadata: ") + ex.what());
  }

  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!in) throw ParseError("truncated MOAS artifact");
  a.samples.resize(count);
  for (auto& s : a.samples) {
    std::array<double, 5> v{};
    in.read(reinterpret_cast<char*>(v.data()), sizeof(double) * v.size());
    s = {v[0], v[1], v[2], v[3], v[4]};
  }
  if (!in) throw ParseError("truncated MOAS artifact");

  const auto actual = moas_fingerprint(a.gains, a.bounds, a.env, a.grid);
  if (actual != a.fingerprint) {
    throw FingerprintMismatch("MOAS artifact parameters do not match its fingerprint");
  }
  if (expected && *expected != a.fingerprint) {
    throw FingerprintMismatch("MOAS artifact was built for different gains, bounds or grid");
  }
  return a;
}

}  // namespace locomanip
