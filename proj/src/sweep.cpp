#include "cachelab/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cachelab/timing.hpp"

namespace cachelab {

namespace {

cache_stats accumulate(const std::vector<cache_stats>& per_core) {
  cache_stats sum;
  for (const auto& s : per_core) {
    sum.read_hits += s.read_hits;
    sum.read_misses += s.read_misses;
    sum.write_hits += s.write_hits;
    sum.write_misses += s.write_misses;
    sum.ifetch_hits += s.ifetch_hits;
    sum.ifetch_misses += s.ifetch_misses;
    sum.evictions += s.evictions;
    sum.writebacks += s.writebacks;
    sum.invalidations_received += s.invalidations_received;
    sum.total_miss_latency_cycles += s.total_miss_latency_cycles;
  }
  return sum;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& key, const std::string& value) {
  std::vector<std::uint64_t> out;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(item, &pos, 10);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size())
      throw config_error("sweep key '" + key + "': bad list item '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw config_error("sweep key '" + key + "': empty list");
  return out;
}

hierarchy_config sweep_base_config() {
  hierarchy_config c;
  c.core_count = 2;
  c.l1i = {4 * 1024, 2, 64};
  c.l1d = {4 * 1024, 2, 64};
  c.l2 = {512 * 1024, 2, 64};
  c.l1_hit_cycles = 1;
  c.l2_hit_cycles = 10;
  c.mem_cycles = 100;
  c.clock_hz = 2660e6;
  c.allow_non_pow2 = true;
  return c;
}

}  // namespace

sweep_spec builtin_sweep(const std::string& name) {
  sweep_spec s;
  s.core_counts = {2, 4};
  s.workload = {workload_kind::radix, 2, 8192, 6, 42};
  s.base = sweep_base_config();
  if (name == "mb-grid") {
    for (std::uint64_t kb : {512, 1024, 2048, 4096, 6144, 8192, 12288})
      s.l2_sizes_bytes.push_back(kb * 1024);
  } else if (name == "small-grid") {
    for (std::uint64_t kb : {8, 16, 32, 64}) s.l2_sizes_bytes.push_back(kb * 1024);
  } else {
    throw config_error("unknown sweep spec '" + name + "' (built-in: mb-grid small-grid)");
  }
  return s;
}

std::vector<std::string> builtin_sweep_names() { return {"mb-grid", "small-grid"}; }

sweep_spec parse_sweep_spec(const std::string& text) {
  raw_config kv = parse_config_text(text);
  sweep_spec s;
  s.base = sweep_base_config();
  raw_config base_kv;  // forwarded to the hierarchy validator
  bool have_sizes = false, have_cores = false;

  for (const auto& [key, value] : kv) {
    if (key == "l2_sizes_kb") {
      s.l2_sizes_bytes.clear();
      for (std::uint64_t kb : parse_u64_list(key, value)) s.l2_sizes_bytes.push_back(kb * 1024);
      have_sizes = true;
    } else if (key == "core_counts") {
      s.core_counts.clear();
      for (std::uint64_t c : parse_u64_list(key, value))
        s.core_counts.push_back(static_cast<unsigned>(c));
      have_cores = true;
    } else if (key == "workload") {
      s.workload.workload = workload_from_name(value);
    } else if (key == "scale") {
      s.workload.scale = parse_u64_list(key, value).at(0);
    } else if (key == "iterations") {
      s.workload.iterations = static_cast<unsigned>(parse_u64_list(key, value).at(0));
    } else if (key == "seed") {
      s.workload.seed = parse_u64_list(key, value).at(0);
    } else if (key == "hit_time_base_ns" || key == "hit_time_slope_ns") {
      std::size_t pos = 0;
      double ns = 0;
      try {
        ns = std::stod(value, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != value.size())
        throw config_error("sweep key '" + key + "': invalid number '" + value + "'");
      (key == "hit_time_base_ns" ? s.hit_model.base : s.hit_model.slope) = ns * 1e-9;
    } else if (key == "cores" || key == "l2_kb") {
      throw config_error("sweep spec: '" + key + "' is set by the grid lists, not the base config");
    } else {
      base_kv.emplace_back(key, value);
    }
  }
  if (!have_sizes) throw config_error("sweep spec: missing key 'l2_sizes_kb'");
  if (!have_cores) throw config_error("sweep spec: missing key 'core_counts'");

  // The grid dimensions stand in for cores/l2_kb in the base hierarchy.
  base_kv.emplace_back("cores", std::to_string(s.core_counts.front()));
  base_kv.emplace_back("l2_kb", std::to_string(s.l2_sizes_bytes.front() / 1024));
  s.base = validate_config(base_kv);
  return s;
}

sweep_spec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open sweep spec '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sweep_spec(buf.str());
}

sweep_row make_row(const hierarchy_config& cfg, const hit_time_model& model, const sim_report& r) {
  cache_stats l1d_all = accumulate(r.l1d);
  double cycle_s = 1.0 / cfg.clock_hz;
  sweep_row row;
  row.cores = cfg.core_count;
  row.l2_bytes = cfg.l2.capacity_bytes;
  row.miss_rate_l1d = miss_rate(l1d_all, miss_category::all);
  row.miss_rate_l2 = miss_rate(r.l2, miss_category::all);
  row.avg_miss_latency_ns = l1d_all.avg_miss_latency_cycles() * cycle_s * 1e9;
  row.amat_ns =
      amat(model.at_sets(cfg.l2.sets()), row.miss_rate_l2, cfg.mem_cycles * cycle_s) * 1e9;
  if (r.instructions_executed > 0) {
    access_time_inputs ai;
    ai.n1 = double(l1d_all.read_hits);
    ai.tn1 = double(r.instructions_executed);
    ai.e1 = r.sim_seconds();
    ai.wr1 = miss_rate(l1d_all, miss_category::write);
    ai.ml1 = l1d_all.avg_miss_latency_cycles() * cycle_s;
    row.paper_access_time_ns = avg_cache_access_time(ai) * 1e9;
  }
  row.execution_time_s = r.sim_seconds();
  return row;
}

std::vector<sweep_row> run_sweep(const sweep_spec& spec) {
  if (spec.l2_sizes_bytes.empty() || spec.core_counts.empty())
    throw config_error("sweep spec: size and core lists must be non-empty");
  auto cores = spec.core_counts;
  auto sizes = spec.l2_sizes_bytes;
  std::sort(cores.begin(), cores.end());
  std::sort(sizes.begin(), sizes.end());

  std::vector<sweep_row> rows;
  for (unsigned c : cores) {
    for (std::uint64_t bytes : sizes) {
      try {
        hierarchy_config cfg = spec.base;
        cfg.core_count = c;
        cfg.l2.capacity_bytes = bytes;
        validate(cfg);
        generator_params params = spec.workload;
        params.cores = c;
        trace_file t = generate(params);
        sim_report r = run_trace(cfg, t.records);
        rows.push_back(make_row(cfg, spec.hit_model, r));
      } catch (const std::exception& e) {
        throw config_error("sweep combination cores=" + std::to_string(c) +
                           " l2_bytes=" + std::to_string(bytes) + ": " + e.what());
      }
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<sweep_row>& rows, std::ostream& out) {
  out << "cores,l2_bytes,miss_rate_l1d,miss_rate_l2,avg_miss_latency_ns,amat_ns,"
         "paper_access_time_ns,execution_time_s\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%u,%llu,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", r.cores,
                  static_cast<unsigned long long>(r.l2_bytes), r.miss_rate_l1d, r.miss_rate_l2,
                  r.avg_miss_latency_ns, r.amat_ns, r.paper_access_time_ns, r.execution_time_s);
    out << buf;
  }
}

}  // namespace cachelab
