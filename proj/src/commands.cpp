#include "cachelab/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "cachelab/contention.hpp"
#include "cachelab/sweep.hpp"
#include "cachelab/trace.hpp"

namespace cachelab {

namespace {

void csv_row(std::ostream& out, const char* cache, int core, const cache_stats& s) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%s,%d,%llu,%llu,%llu,%llu,%llu,%llu,%llu,%llu,%llu,%llu,%llu,%llu,%.6g\n", cache,
                core, (unsigned long long)(s.read_hits + s.read_misses),
                (unsigned long long)s.read_hits, (unsigned long long)s.read_misses,
                (unsigned long long)(s.write_hits + s.write_misses),
                (unsigned long long)s.write_hits, (unsigned long long)s.write_misses,
                (unsigned long long)(s.ifetch_hits + s.ifetch_misses),
                (unsigned long long)s.ifetch_hits, (unsigned long long)s.ifetch_misses,
                (unsigned long long)s.evictions, (unsigned long long)s.writebacks,
                (unsigned long long)s.invalidations_received, s.avg_miss_latency_cycles());
  out << buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open output file '" + path + "'");
  return out;
}

// Run facts that do not belong in the data file (the CSV stays byte-stable
// and free of derived-state surprises). Content is deterministic too.
void write_meta_sidecar(const std::string& csv_path, const hierarchy_config& cfg,
                        const trace_header& th, const sim_report& r) {
  std::ofstream meta(csv_path + ".meta", std::ios::binary);
  if (!meta) return;  // sidecar is best-effort
  char buf[160];
  meta << "# run sidecar for " << csv_path << "\n";
  meta << "trace_generator = " << th.generator << "\n";
  meta << "trace_seed = " << th.seed << "\n";
  meta << "trace_records = " << th.record_count << "\n";
  meta << "instructions_executed = " << r.instructions_executed << "\n";
  meta << "total_cycles = " << r.total_cycles << "\n";
  std::snprintf(buf, sizeof buf, "sim_seconds = %.9g\n", r.sim_seconds());
  meta << buf;
  meta << "# hierarchy\n" << serialize_config(cfg);
}

}  // namespace

void write_report_csv(const sim_report& r, std::ostream& out) {
  out << "cache,core,reads,read_hits,read_misses,writes,write_hits,write_misses,ifetches,"
         "ifetch_hits,ifetch_misses,evictions,writebacks,invalidations,avg_miss_latency_cycles\n";
  for (std::size_t c = 0; c < r.l1i.size(); ++c) csv_row(out, "l1i", int(c), r.l1i[c]);
  for (std::size_t c = 0; c < r.l1d.size(); ++c) csv_row(out, "l1d", int(c), r.l1d[c]);
  csv_row(out, "l2", -1, r.l2);
}

hierarchy_config resolve_config(const std::string& name_or_path) {
  if (std::filesystem::exists(name_or_path)) return load_config_file(name_or_path);
  for (const auto& n : preset_names())
    if (n == name_or_path) return preset(name_or_path);
  std::string msg = "no config file or preset named '" + name_or_path + "' (presets:";
  for (const auto& n : preset_names()) msg += " " + n;
  throw config_error(msg + ")");
}

int cmd_simulate(const std::string& config, const std::string& trace, const std::string& out_path,
                 std::ostream& diag) {
  try {
    hierarchy_config cfg = resolve_config(config);
    trace_file t = load_trace_file(trace);
    sim_report r = run_trace(cfg, t.records);
    auto out = open_out(out_path);
    write_report_csv(r, out);
    write_meta_sidecar(out_path, cfg, t.header, r);
    return 0;
  } catch (const config_error& e) {
    diag << "config error: " << e.what() << "\n";
    return 1;
  } catch (const trace_error& e) {
    diag << "trace error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_sweep(const std::string& spec, const std::string& out_path, std::ostream& diag) {
  try {
    sweep_spec s;
    bool is_builtin = false;
    for (const auto& n : builtin_sweep_names()) is_builtin = is_builtin || n == spec;
    if (is_builtin)
      s = builtin_sweep(spec);
    else if (std::filesystem::exists(spec))
      s = load_sweep_spec(spec);
    else
      throw config_error("no sweep spec file or built-in named '" + spec +
                         "' (built-in: mb-grid small-grid)");
    auto rows = run_sweep(s);
    auto out = open_out(out_path);
    write_sweep_csv(rows, out);
    return 0;
  } catch (const config_error& e) {
    diag << "config error: " << e.what() << "\n";
    return 1;
  } catch (const trace_error& e) {
    diag << "trace error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_contention(std::uint64_t n, unsigned p, unsigned r, unsigned k, std::uint64_t trials,
                   std::uint64_t seed, std::ostream& out, std::ostream& diag) {
  try {
    contention_scenario sc{n, p, r, k};
    validate(sc);
    if (k >= p) throw std::invalid_argument("contention: requires k < p");

    double read_p = read_simultaneous(sc);
    model_value w1 = write_probability(write_case::same_content_same_block, sc);
    model_value w2 = write_probability(write_case::diff_content_same_block, sc);
    model_value w3 = write_probability(write_case::same_content_diff_block, sc);
    model_value w4 = write_probability(write_case::diff_content_diff_block, sc);
    model_value mixed_diff = mixed_access(sc, false);
    model_value mixed_same = mixed_access(sc, true);
    empirical_report mc = monte_carlo(sc, trials, seed);

    char buf[256];
    auto line = [&](const char* label, double closed, bool flagged, double emp, double se) {
      std::snprintf(buf, sizeof buf, "%-40s closed %-12.6g", label, closed);
      out << buf;
      if (emp >= 0.0) {
        std::snprintf(buf, sizeof buf, " empirical %.6g +/- %.6g", emp, se);
        out << buf;
      }
      if (flagged) out << "  [out of model: value > 1]";
      out << "\n";
    };

    out << "contention scenario n=" << n << " p=" << p << " r=" << r << " k=" << k
        << " trials=" << trials << " seed=" << seed << "\n";
    line("read simultaneous (1/n)^r", read_p, false, -1, 0);
    line("  specific block touched (>=1 request)", read_p, false, mc.specific_block_freq,
         mc.specific_block_std_error);
    line("  all requests on one block", read_p, false, mc.all_same_block_freq,
         mc.all_same_block_std_error);
    line("write case 1 same-content same-block", w1.value, w1.out_of_model, mc.case_freq[0],
         mc.case_std_error[0]);
    line("write case 2 diff-content same-block", w2.value, w2.out_of_model, mc.case_freq[1],
         mc.case_std_error[1]);
    line("write case 3 same-content diff-block", w3.value, w3.out_of_model, mc.case_freq[2],
         mc.case_std_error[2]);
    line("write case 4 diff-content diff-block", w4.value, w4.out_of_model, mc.case_freq[3],
         mc.case_std_error[3]);
    line("mixed access, different blocks", mixed_diff.value, mixed_diff.out_of_model, -1, 0);
    line("mixed access, same block", mixed_same.value, mixed_same.out_of_model, -1, 0);
    return 0;
  } catch (const std::invalid_argument& e) {
    diag << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_generate(const generator_params& params, const std::string& out_path, std::ostream& diag) {
  try {
    trace_file t = generate(params);
    save_trace_file(t, out_path);
    return 0;
  } catch (const config_error& e) {
    diag << "config error: " << e.what() << "\n";
    return 1;
  } catch (const trace_error& e) {
    diag << "trace error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cachelab
