#include "cachelab/generators.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <utility>

namespace cachelab {

namespace {

constexpr std::uint64_t code_region_bytes = 4096;
constexpr std::uint64_t radix_buckets = 1024;
constexpr std::uint64_t key_bytes = 4;
constexpr std::uint64_t counter_bytes = 4;
constexpr std::uint64_t fft_element_bytes = 16;
constexpr std::uint64_t fmm_body_bytes = 32;
constexpr std::uint64_t fmm_bodies_per_cell = 8;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 over (seed, a, b) so per-core/per-iteration streams differ
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (a + 1) + 0xbf58476d1ce4e5b9ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Emits records; issues one instruction fetch from the core's code region
/// after every fourth data reference by that core.
class trace_builder {
 public:
  trace_builder(const generator_params& p, std::vector<address_region> code)
      : code_(std::move(code)), data_count_(p.cores, 0), fetch_off_(p.cores, 0) {
    t_.header.core_count = p.cores;
    t_.header.generator = workload_name(p.workload);
    t_.header.seed = p.seed;
  }

  void data(unsigned core, access_kind kind, std::uint64_t addr) {
    t_.records.push_back({int(core), kind, addr});
    if (++data_count_[core] % 4 == 0) {
      t_.records.push_back({int(core), access_kind::ifetch, code_[core].base + fetch_off_[core]});
      fetch_off_[core] = (fetch_off_[core] + 4) % code_[core].size;
    }
  }

  trace_file finish() {
    t_.header.record_count = t_.records.size();
    return std::move(t_);
  }

 private:
  trace_file t_;
  std::vector<address_region> code_;
  std::vector<std::uint64_t> data_count_;
  std::vector<std::uint64_t> fetch_off_;
};

std::uint64_t round_up_4k(std::uint64_t v) { return (v + 4095) / 4096 * 4096; }

struct radix_layout {
  std::vector<address_region> keys, hist, code;
  address_region global;
};

radix_layout radix_regions(const generator_params& p) {
  std::uint64_t keys_per_core = p.scale / p.cores;
  if (keys_per_core == 0)
    throw std::invalid_argument("radix: scale must be >= cores (need one key per core)");
  std::vector<std::pair<std::string, std::uint64_t>> want;
  for (unsigned c = 0; c < p.cores; ++c)
    want.emplace_back("keys" + std::to_string(c), keys_per_core * key_bytes);
  for (unsigned c = 0; c < p.cores; ++c)
    want.emplace_back("hist" + std::to_string(c), radix_buckets * counter_bytes);
  want.emplace_back("global-hist", radix_buckets * counter_bytes);
  for (unsigned c = 0; c < p.cores; ++c)
    want.emplace_back("code" + std::to_string(c), code_region_bytes);
  auto placed = plan_regions(want);
  radix_layout lay;
  for (unsigned c = 0; c < p.cores; ++c) lay.keys.push_back(placed[c]);
  for (unsigned c = 0; c < p.cores; ++c) lay.hist.push_back(placed[p.cores + c]);
  lay.global = placed[2 * p.cores];
  for (unsigned c = 0; c < p.cores; ++c) lay.code.push_back(placed[2 * p.cores + 1 + c]);
  return lay;
}

struct fft_layout {
  address_region src, dst;
  std::vector<address_region> code;
};

fft_layout fft_regions(const generator_params& p) {
  std::uint64_t n = p.scale;
  if (n % p.cores != 0)
    throw std::invalid_argument("fft: cores must divide the matrix side (scale=" +
                                std::to_string(n) + ", cores=" + std::to_string(p.cores) + ")");
  std::vector<std::pair<std::string, std::uint64_t>> want;
  want.emplace_back("src-matrix", n * n * fft_element_bytes);
  want.emplace_back("dst-matrix", n * n * fft_element_bytes);
  for (unsigned c = 0; c < p.cores; ++c)
    want.emplace_back("code" + std::to_string(c), code_region_bytes);
  auto placed = plan_regions(want);
  fft_layout lay;
  lay.src = placed[0];
  lay.dst = placed[1];
  for (unsigned c = 0; c < p.cores; ++c) lay.code.push_back(placed[2 + c]);
  return lay;
}

struct fmm_layout {
  address_region bodies, forces;
  std::vector<address_region> code;
  std::uint64_t cells = 0;
};

fmm_layout fmm_regions(const generator_params& p) {
  std::vector<std::pair<std::string, std::uint64_t>> want;
  want.emplace_back("bodies", p.scale * fmm_body_bytes);
  want.emplace_back("forces", p.scale * fmm_body_bytes);
  for (unsigned c = 0; c < p.cores; ++c)
    want.emplace_back("code" + std::to_string(c), code_region_bytes);
  auto placed = plan_regions(want);
  fmm_layout lay;
  lay.bodies = placed[0];
  lay.forces = placed[1];
  for (unsigned c = 0; c < p.cores; ++c) lay.code.push_back(placed[2 + c]);
  lay.cells = (p.scale + fmm_bodies_per_cell - 1) / fmm_bodies_per_cell;
  return lay;
}

}  // namespace

workload_kind workload_from_name(const std::string& name) {
  if (name == "radix") return workload_kind::radix;
  if (name == "fft") return workload_kind::fft;
  if (name == "fmm") return workload_kind::fmm;
  throw std::invalid_argument("unknown workload '" + name + "' (known: radix fft fmm)");
}

const char* workload_name(workload_kind w) {
  switch (w) {
    case workload_kind::radix: return "radix";
    case workload_kind::fft: return "fft";
    case workload_kind::fmm: return "fmm";
  }
  return "?";
}

void validate(const generator_params& p) {
  if (p.cores < 1) throw std::invalid_argument("generator: cores must be >= 1");
  if (p.scale < 1) throw std::invalid_argument("generator: scale must be >= 1");
  if (p.iterations < 1) throw std::invalid_argument("generator: iterations must be >= 1");
}

std::vector<address_region> plan_regions(
    const std::vector<std::pair<std::string, std::uint64_t>>& sizes) {
  std::vector<address_region> out;
  std::uint64_t offset = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out.push_back({sizes[i].first, ((std::uint64_t(i) + 1) << 30) + offset, sizes[i].second});
    offset += round_up_4k(sizes[i].second);
  }
  return out;
}

// Phases follow the benchmark's structure: each core generates its keys,
// builds a local histogram, reads every other core's histogram (the
// all-to-all exchange), then all cores merge into one shared histogram.
trace_file generate_radix(const generator_params& p) {
  validate(p);
  auto lay = radix_regions(p);
  trace_builder b(p, lay.code);
  std::uint64_t keys_per_core = p.scale / p.cores;
  std::uint64_t share = radix_buckets / p.cores;

  for (unsigned it = 0; it < p.iterations; ++it) {
    for (std::uint64_t s = 0; s < keys_per_core; ++s)
      for (unsigned c = 0; c < p.cores; ++c)
        b.data(c, access_kind::write, lay.keys[c].base + s * key_bytes);

    for (std::uint64_t s = 0; s < radix_buckets; ++s)
      for (unsigned c = 0; c < p.cores; ++c)
        b.data(c, access_kind::write, lay.hist[c].base + s * counter_bytes);

    for (unsigned d = 1; d < p.cores; ++d)
      for (std::uint64_t s = 0; s < radix_buckets; ++s)
        for (unsigned c = 0; c < p.cores; ++c)
          b.data(c, access_kind::read, lay.hist[(c + d) % p.cores].base + s * counter_bytes);

    // Merge: seeded bucket order models data-dependent updates.
    std::vector<std::mt19937_64> gen;
    for (unsigned c = 0; c < p.cores; ++c) gen.emplace_back(mix_seed(p.seed, c, it));
    for (std::uint64_t s = 0; s < share; ++s)
      for (unsigned c = 0; c < p.cores; ++c) {
        std::uint64_t bkt = gen[c]() % radix_buckets;
        b.data(c, access_kind::read, lay.global.base + bkt * counter_bytes);
        b.data(c, access_kind::write, lay.global.base + bkt * counter_bytes);
      }
    // Every core ends the merge on bucket 0: cross-core invalidations are
    // part of the pattern, not a seed accident.
    for (unsigned c = 0; c < p.cores; ++c) {
      b.data(c, access_kind::read, lay.global.base);
      b.data(c, access_kind::write, lay.global.base);
    }
  }
  return b.finish();
}

// Band-partitioned transpose: core c reads its n/p source rows in row-major
// order and writes them to column-major destination positions.
trace_file generate_fft(const generator_params& p) {
  validate(p);
  auto lay = fft_regions(p);
  trace_builder b(p, lay.code);
  std::uint64_t n = p.scale;
  std::uint64_t band = n / p.cores;

  for (unsigned it = 0; it < p.iterations; ++it)
    for (std::uint64_t r = 0; r < band; ++r)
      for (std::uint64_t col = 0; col < n; ++col)
        for (unsigned c = 0; c < p.cores; ++c) {
          std::uint64_t row = std::uint64_t(c) * band + r;
          b.data(c, access_kind::read, lay.src.base + (row * n + col) * fft_element_bytes);
          b.data(c, access_kind::write, lay.dst.base + (col * n + row) * fft_element_bytes);
        }
  return b.finish();
}

// Cells of 8 bodies, contiguously partitioned over cores. Per time step a
// core reads each of its cells, reads two seeded-random remote cells per own
// cell (the unstructured interaction traffic), and writes its force slots.
trace_file generate_fmm(const generator_params& p) {
  validate(p);
  auto lay = fmm_regions(p);
  trace_builder b(p, lay.code);
  std::uint64_t cells = lay.cells;

  auto cell_begin = [&](unsigned c) { return cells * c / p.cores; };
  std::uint64_t steps = 0;
  for (unsigned c = 0; c < p.cores; ++c)
    steps = std::max(steps, cell_begin(c + 1) - cell_begin(c));

  auto read_cell = [&](unsigned core, std::uint64_t cell) {
    for (std::uint64_t i = 0; i < fmm_bodies_per_cell; ++i) {
      std::uint64_t body = cell * fmm_bodies_per_cell + i;
      if (body >= p.scale) break;
      b.data(core, access_kind::read, lay.bodies.base + body * fmm_body_bytes);
    }
  };

  for (unsigned it = 0; it < p.iterations; ++it) {
    std::vector<std::mt19937_64> gen;
    for (unsigned c = 0; c < p.cores; ++c) gen.emplace_back(mix_seed(p.seed, c, it) ^ 0x5bull);
    for (std::uint64_t s = 0; s < steps; ++s)
      for (unsigned c = 0; c < p.cores; ++c) {
        std::uint64_t own = cell_begin(c) + s;
        if (own >= cell_begin(c + 1)) continue;
        read_cell(c, own);
        if (cells > 1)
          for (int rem = 0; rem < 2; ++rem) {
            std::uint64_t other = gen[c]() % (cells - 1);
            if (other >= own) ++other;
            read_cell(c, other);
          }
        for (std::uint64_t i = 0; i < fmm_bodies_per_cell; ++i) {
          std::uint64_t body = own * fmm_bodies_per_cell + i;
          if (body >= p.scale) break;
          b.data(c, access_kind::write, lay.forces.base + body * fmm_body_bytes);
        }
      }
  }
  return b.finish();
}

trace_file generate(const generator_params& p) {
  switch (p.workload) {
    case workload_kind::radix: return generate_radix(p);
    case workload_kind::fft: return generate_fft(p);
    case workload_kind::fmm: return generate_fmm(p);
  }
  throw std::invalid_argument("generator: unknown workload");
}

std::vector<address_region> regions_for(const generator_params& p) {
  validate(p);
  std::vector<address_region> all;
  switch (p.workload) {
    case workload_kind::radix: {
      auto lay = radix_regions(p);
      all.insert(all.end(), lay.keys.begin(), lay.keys.end());
      all.insert(all.end(), lay.hist.begin(), lay.hist.end());
      all.push_back(lay.global);
      all.insert(all.end(), lay.code.begin(), lay.code.end());
      break;
    }
    case workload_kind::fft: {
      auto lay = fft_regions(p);
      all.push_back(lay.src);
      all.push_back(lay.dst);
      all.insert(all.end(), lay.code.begin(), lay.code.end());
      break;
    }
    case workload_kind::fmm: {
      auto lay = fmm_regions(p);
      all.push_back(lay.bodies);
      all.push_back(lay.forces);
      all.insert(all.end(), lay.code.begin(), lay.code.end());
      break;
    }
  }
  return all;
}

}  // namespace cachelab
