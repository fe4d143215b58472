#include "cachelab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cachelab {

namespace {

bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  std::size_t pos = 0;
  try {
    out = std::stoull(value, &pos, 10);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != value.size())
    throw config_error("config key '" + key + "': invalid integer '" + value + "'");
  return out;
}

double parse_f64(const std::string& key, const std::string& value) {
  double out = 0;
  std::size_t pos = 0;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != value.size() || !(out == out))
    throw config_error("config key '" + key + "': invalid number '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw config_error("config key '" + key + "': expected 0/1/true/false, got '" + value + "'");
}

void check_capacity(const char* name, const cache_geometry& g, bool allow_non_pow2) {
  if (g.capacity_bytes == 0 || g.associativity == 0 || g.block_size_bytes == 0)
    throw config_error(std::string(name) + ": capacity, associativity and block size must be > 0");
  bool cap_ok = is_pow2(g.capacity_bytes) ||
                (allow_non_pow2 && g.capacity_bytes % 3 == 0 && is_pow2(g.capacity_bytes / 3));
  if (!cap_ok)
    throw config_error(std::string(name) + ": capacity not a power of two (" +
                       std::to_string(g.capacity_bytes) +
                       " bytes); 3*2^k sizes need allow_non_pow2 = 1");
  if (!is_pow2(g.associativity))
    throw config_error(std::string(name) + ": associativity not a power of two (" +
                       std::to_string(g.associativity) + ")");
  if (!is_pow2(g.block_size_bytes))
    throw config_error(std::string(name) + ": block size not a power of two (" +
                       std::to_string(g.block_size_bytes) + ")");
  std::uint64_t frame = std::uint64_t(g.associativity) * g.block_size_bytes;
  if (g.capacity_bytes % frame != 0 || g.capacity_bytes / frame < 1)
    throw config_error(std::string(name) + ": associativity " +
                       std::to_string(g.associativity) + " x block " +
                       std::to_string(g.block_size_bytes) + " B does not divide capacity " +
                       std::to_string(g.capacity_bytes) + " B into whole sets");
}

hierarchy_config make_preset(unsigned cores, std::uint64_t l1_kb, std::uint64_t l2_kb,
                             double clock_ghz, bool non_pow2) {
  hierarchy_config c;
  c.core_count = cores;
  c.l1i = {l1_kb * 1024, 2, 64};
  c.l1d = {l1_kb * 1024, 2, 64};
  c.l2 = {l2_kb * 1024, 2, 64};
  c.l1_hit_cycles = 1;
  c.l2_hit_cycles = 10;
  c.mem_cycles = 100;
  c.clock_hz = clock_ghz * 1e9;
  c.allow_non_pow2 = non_pow2;
  return c;
}

// Each entry notes the datasheet row it encodes (model / GHz / L1 kB / L2 MB).
// Quad-core parts with two 4 MB halves are modeled as one shared pool.
const std::vector<std::pair<std::string, hierarchy_config>>& registry() {
  static const std::vector<std::pair<std::string, hierarchy_config>> presets = {
      // "3070 / 2.66 / 32 / 4" row of the Conroe family block.
      {"conroe-e6600", make_preset(2, 32, 4096, 2.66, false)},
      // "E6700 / 2.67 / 32 / 4"
      {"conroe-e6700", make_preset(2, 32, 4096, 2.67, false)},
      // "E4300 / 1.8 / 32 / 2"
      {"allendale-e4300", make_preset(2, 32, 2048, 1.8, false)},
      // "E8000 / 2.66 / 32 / 6" -- 6 MB is a 3*2^k size
      {"wolfdale-e8000", make_preset(2, 32, 6144, 2.66, true)},
      // "Q6600 / 2.4 / 32 / 2x4"
      {"kentsfield-q6600", make_preset(4, 32, 8192, 2.4, false)},
      // "QX6700 / 2.67 / 32 / 2x4"
      {"yorkfield-qx6700", make_preset(4, 32, 8192, 2.67, false)},
  };
  return presets;
}

}  // namespace

std::uint64_t cache_geometry::sets() const {
  return capacity_bytes / (std::uint64_t(associativity) * block_size_bytes);
}

raw_config parse_config_text(const std::string& text) {
  raw_config kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + ": expected key = value, got '" +
                         line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error("config line " + std::to_string(lineno) + ": empty key");
    kv.emplace_back(key, value);
  }
  return kv;
}

hierarchy_config validate_config(const raw_config& kv) {
  static const char* known[] = {"cores",         "l1i_kb",        "l1d_kb",     "l2_kb",
                                "assoc_l1",      "assoc_l2",      "block_bytes", "l1_hit_cycles",
                                "l2_hit_cycles", "mem_cycles",    "clock_mhz",  "allow_non_pow2"};
  std::vector<std::pair<std::string, std::string>> seen;
  for (const auto& [key, value] : kv) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw config_error("unknown config key '" + key + "'");
    for (const auto& s : seen)
      if (s.first == key) throw config_error("duplicate config key '" + key + "'");
    seen.emplace_back(key, value);
  }
  auto get = [&](const char* key) -> const std::string& {
    for (const auto& s : seen)
      if (s.first == key) return s.second;
    throw config_error("missing config key '" + std::string(key) + "'");
  };

  hierarchy_config cfg;
  cfg.core_count = static_cast<unsigned>(parse_u64("cores", get("cores")));
  unsigned block = static_cast<unsigned>(parse_u64("block_bytes", get("block_bytes")));
  cfg.l1i = {parse_u64("l1i_kb", get("l1i_kb")) * 1024,
             static_cast<unsigned>(parse_u64("assoc_l1", get("assoc_l1"))), block};
  cfg.l1d = {parse_u64("l1d_kb", get("l1d_kb")) * 1024, cfg.l1i.associativity, block};
  cfg.l2 = {parse_u64("l2_kb", get("l2_kb")) * 1024,
            static_cast<unsigned>(parse_u64("assoc_l2", get("assoc_l2"))), block};
  cfg.l1_hit_cycles = static_cast<unsigned>(parse_u64("l1_hit_cycles", get("l1_hit_cycles")));
  cfg.l2_hit_cycles = static_cast<unsigned>(parse_u64("l2_hit_cycles", get("l2_hit_cycles")));
  cfg.mem_cycles = static_cast<unsigned>(parse_u64("mem_cycles", get("mem_cycles")));
  cfg.clock_hz = parse_f64("clock_mhz", get("clock_mhz")) * 1e6;
  cfg.allow_non_pow2 = parse_bool("allow_non_pow2", get("allow_non_pow2"));
  validate(cfg);
  return cfg;
}

void validate(const hierarchy_config& cfg) {
  if (cfg.core_count < 1) throw config_error("cores must be >= 1");
  check_capacity("l1i", cfg.l1i, cfg.allow_non_pow2);
  check_capacity("l1d", cfg.l1d, cfg.allow_non_pow2);
  check_capacity("l2", cfg.l2, cfg.allow_non_pow2);
  if (cfg.l1i.block_size_bytes != cfg.l1d.block_size_bytes ||
      cfg.l1d.block_size_bytes != cfg.l2.block_size_bytes)
    throw config_error("block size must match across levels");
  if (cfg.l2.capacity_bytes < cfg.l1d.capacity_bytes)
    throw config_error("l2 capacity " + std::to_string(cfg.l2.capacity_bytes) +
                       " B smaller than l1d " + std::to_string(cfg.l1d.capacity_bytes) + " B");
  if (cfg.l1_hit_cycles == 0 || cfg.l2_hit_cycles == 0 || cfg.mem_cycles == 0)
    throw config_error("latencies must be > 0");
  if (!(cfg.l1_hit_cycles <= cfg.l2_hit_cycles && cfg.l2_hit_cycles <= cfg.mem_cycles))
    throw config_error("latency ordering violated: need l1_hit_cycles <= l2_hit_cycles <= mem_cycles");
  if (!(cfg.clock_hz > 0)) throw config_error("clock_mhz must be > 0");
}

std::string serialize_config(const hierarchy_config& cfg) {
  auto kb = [](std::uint64_t bytes, const char* name) {
    if (bytes % 1024 != 0)
      throw config_error(std::string(name) + ": capacity " + std::to_string(bytes) +
                         " B not expressible in whole kB");
    return bytes / 1024;
  };
  char clock[32];
  std::snprintf(clock, sizeof clock, "%.17g", cfg.clock_hz / 1e6);
  std::ostringstream out;
  out << "cores = " << cfg.core_count << "\n"
      << "l1i_kb = " << kb(cfg.l1i.capacity_bytes, "l1i") << "\n"
      << "l1d_kb = " << kb(cfg.l1d.capacity_bytes, "l1d") << "\n"
      << "l2_kb = " << kb(cfg.l2.capacity_bytes, "l2") << "\n"
      << "assoc_l1 = " << cfg.l1d.associativity << "\n"
      << "assoc_l2 = " << cfg.l2.associativity << "\n"
      << "block_bytes = " << cfg.l2.block_size_bytes << "\n"
      << "l1_hit_cycles = " << cfg.l1_hit_cycles << "\n"
      << "l2_hit_cycles = " << cfg.l2_hit_cycles << "\n"
      << "mem_cycles = " << cfg.mem_cycles << "\n"
      << "clock_mhz = " << clock << "\n"
      << "allow_non_pow2 = " << (cfg.allow_non_pow2 ? 1 : 0) << "\n";
  return out.str();
}

hierarchy_config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return validate_config(parse_config_text(buf.str()));
}

hierarchy_config preset(const std::string& name) {
  for (const auto& [pname, cfg] : registry())
    if (pname == name) return cfg;
  std::string msg = "unknown preset '" + name + "' (known:";
  for (const auto& [pname, cfg] : registry()) msg += " " + pname;
  msg += ")";
  throw config_error(msg);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [pname, cfg] : registry()) names.push_back(pname);
  return names;
}

}  // namespace cachelab
