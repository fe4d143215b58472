#include "cachelab/engine.hpp"

#include <cassert>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace cachelab {

double miss_rate(const cache_stats& stats, miss_category category) {
  std::uint64_t miss = 0, acc = 0;
  switch (category) {
    case miss_category::read:
      miss = stats.read_misses;
      acc = stats.read_hits + stats.read_misses;
      break;
    case miss_category::write:
      miss = stats.write_misses;
      acc = stats.write_hits + stats.write_misses;
      break;
    case miss_category::ifetch:
      miss = stats.ifetch_misses;
      acc = stats.ifetch_hits + stats.ifetch_misses;
      break;
    case miss_category::all:
      miss = stats.misses();
      acc = stats.accesses();
      break;
  }
  return acc ? double(miss) / double(acc) : 0.0;
}

bool counters_match(const sim_report& r) {
  std::uint64_t l1_misses = 0;
  for (const auto& s : r.l1i) l1_misses += s.misses();
  for (const auto& s : r.l1d) l1_misses += s.misses();
  return r.l2.accesses() == l1_misses + r.l1_writebacks_to_l2;
}

cache_array::cache_array(const cache_geometry& g)
    : sets_(g.sets()), ways_(g.associativity), lines_(sets_ * ways_) {
  for (std::uint64_t s = 0; s < sets_; ++s)
    for (unsigned w = 0; w < ways_; ++w) lines_[s * ways_ + w].lru_rank = w;
}

int cache_array::find(std::uint64_t block) const {
  std::uint64_t set = set_of(block);
  for (unsigned w = 0; w < ways_; ++w) {
    const cache_line& ln = lines_[set * ways_ + w];
    if (ln.state != line_state::invalid && ln.tag == block) return int(w);
  }
  return -1;
}

void cache_array::touch(std::uint64_t set, unsigned way) {
  unsigned r = lines_[set * ways_ + way].lru_rank;
  for (unsigned w = 0; w < ways_; ++w) {
    cache_line& ln = lines_[set * ways_ + w];
    if (ln.lru_rank < r) ++ln.lru_rank;
  }
  lines_[set * ways_ + way].lru_rank = 0;
}

unsigned cache_array::victim_way(std::uint64_t set) const {
  for (unsigned w = 0; w < ways_; ++w)
    if (lines_[set * ways_ + w].state == line_state::invalid) return w;
  for (unsigned w = 0; w < ways_; ++w)
    if (lines_[set * ways_ + w].lru_rank == ways_ - 1) return w;
  return 0;
}

hierarchy_sim::hierarchy_sim(const hierarchy_config& cfg) : cfg_(cfg) {
  validate(cfg);
  l1i_.reserve(cfg.core_count);
  l1d_.reserve(cfg.core_count);
  for (unsigned c = 0; c < cfg.core_count; ++c) {
    l1i_.emplace_back(cfg.l1i);
    l1d_.emplace_back(cfg.l1d);
  }
  l2_ = cache_array(cfg.l2);
  report_.l1i.resize(cfg.core_count);
  report_.l1d.resize(cfg.core_count);
  report_.clock_hz = cfg.clock_hz;
}

// A dirty L1 line leaving for L2 (victim eviction or coherence downgrade).
// Inclusion guarantees the block is still resident in L2.
void hierarchy_sim::forward_writeback(std::uint64_t block) {
  int way = l2_.find(block);
  assert(way >= 0 && "inclusion: dirty L1 block must be resident in L2");
  std::uint64_t set = l2_.set_of(block);
  l2_.line(set, unsigned(way)).state = line_state::dirty;
  l2_.touch(set, unsigned(way));
  ++report_.l2.write_hits;
  ++report_.l1_writebacks_to_l2;
}

// On a write: invalidate every other L1 copy (dirty owner writes back first).
// On a read/ifetch: downgrade a dirty owner to clean with a writeback.
void hierarchy_sim::coherence_scan(const trace_record& rec) {
  std::uint64_t block = rec.address / cfg_.l2.block_size_bytes;
  bool is_write = rec.kind == access_kind::write;
  for (unsigned c = 0; c < cfg_.core_count; ++c) {
    for (int which = 0; which < 2; ++which) {
      cache_array& arr = which ? l1d_[c] : l1i_[c];
      cache_stats& st = which ? report_.l1d[c] : report_.l1i[c];
      bool is_requester = c == unsigned(rec.core) &&
                          ((rec.kind == access_kind::ifetch) ? which == 0 : which == 1);
      if (is_requester) continue;
      int way = arr.find(block);
      if (way < 0) continue;
      cache_line& ln = arr.line(arr.set_of(block), unsigned(way));
      if (ln.state == line_state::dirty) {
        ++st.writebacks;
        forward_writeback(block);
        ln.state = is_write ? line_state::invalid : line_state::clean;
        ++st.invalidations_received;
      } else if (is_write) {
        ln.state = line_state::invalid;
        ++st.invalidations_received;
      }
    }
  }
}

void hierarchy_sim::install_l2(std::uint64_t block, line_state st) {
  std::uint64_t set = l2_.set_of(block);
  unsigned w = l2_.victim_way(set);
  cache_line& victim = l2_.line(set, w);
  if (victim.state != line_state::invalid) {
    // Inclusive L2: evicting a line expels every L1 copy. A dirty L1 copy
    // merges into the dying line and leaves with its memory writeback.
    for (unsigned c = 0; c < cfg_.core_count; ++c) {
      for (int which = 0; which < 2; ++which) {
        cache_array& arr = which ? l1d_[c] : l1i_[c];
        cache_stats& cst = which ? report_.l1d[c] : report_.l1i[c];
        int lw = arr.find(victim.tag);
        if (lw < 0) continue;
        cache_line& ln = arr.line(arr.set_of(victim.tag), unsigned(lw));
        if (ln.state == line_state::dirty) {
          ++cst.writebacks;
          victim.state = line_state::dirty;
        }
        ln.state = line_state::invalid;
        ++cst.invalidations_received;
      }
    }
    ++report_.l2.evictions;
    if (victim.state == line_state::dirty) ++report_.l2.writebacks;
  }
  victim.tag = block;
  victim.state = st;
  l2_.touch(set, w);
}

service_level hierarchy_sim::fetch_through_l2(const trace_record& rec, cache_stats& requester) {
  std::uint64_t block = rec.address / cfg_.l2.block_size_bytes;
  int way = l2_.find(block);
  if (way >= 0) {
    switch (rec.kind) {
      case access_kind::read: ++report_.l2.read_hits; break;
      case access_kind::write: ++report_.l2.write_hits; break;
      case access_kind::ifetch: ++report_.l2.ifetch_hits; break;
    }
    l2_.touch(l2_.set_of(block), unsigned(way));
    requester.total_miss_latency_cycles += cfg_.l2_hit_cycles;
    return service_level::l2;
  }
  switch (rec.kind) {
    case access_kind::read: ++report_.l2.read_misses; break;
    case access_kind::write: ++report_.l2.write_misses; break;
    case access_kind::ifetch: ++report_.l2.ifetch_misses; break;
  }
  report_.l2.total_miss_latency_cycles += cfg_.mem_cycles;
  requester.total_miss_latency_cycles += cfg_.mem_cycles;
  // The L2 copy matches memory on arrival; dirty data, if any, lives in L1.
  install_l2(block, line_state::clean);
  return service_level::memory;
}

unsigned hierarchy_sim::fill_l1(cache_array& arr, cache_stats& st, std::uint64_t block) {
  std::uint64_t set = arr.set_of(block);
  unsigned w = arr.victim_way(set);
  cache_line& victim = arr.line(set, w);
  if (victim.state != line_state::invalid) {
    ++st.evictions;
    if (victim.state == line_state::dirty) {
      ++st.writebacks;
      forward_writeback(victim.tag);
    }
  }
  return w;
}

access_outcome hierarchy_sim::access(const trace_record& rec) {
  if (rec.core < 0 || unsigned(rec.core) >= cfg_.core_count)
    throw std::invalid_argument("core " + std::to_string(rec.core) + " out of range (cores=" +
                                std::to_string(cfg_.core_count) + ")");
  std::uint64_t block = rec.address / cfg_.l2.block_size_bytes;
  bool is_ifetch = rec.kind == access_kind::ifetch;
  unsigned core = unsigned(rec.core);
  cache_array& arr = is_ifetch ? l1i_[core] : l1d_[core];
  cache_stats& st = is_ifetch ? report_.l1i[core] : report_.l1d[core];

  access_outcome out;
  int way = arr.find(block);
  if (way >= 0) {
    std::uint64_t set = arr.set_of(block);
    cache_line& ln = arr.line(set, unsigned(way));
    if (rec.kind == access_kind::write && ln.state == line_state::clean) {
      coherence_scan(rec);  // upgrade: expel the other clean copies
      ln.state = line_state::dirty;
    }
    arr.touch(set, unsigned(way));
    switch (rec.kind) {
      case access_kind::read: ++st.read_hits; break;
      case access_kind::write: ++st.write_hits; break;
      case access_kind::ifetch: ++st.ifetch_hits; break;
    }
    out = {service_level::l1, cfg_.l1_hit_cycles};
  } else {
    switch (rec.kind) {
      case access_kind::read: ++st.read_misses; break;
      case access_kind::write: ++st.write_misses; break;
      case access_kind::ifetch: ++st.ifetch_misses; break;
    }
    coherence_scan(rec);
    service_level level = fetch_through_l2(rec, st);
    unsigned w = fill_l1(arr, st, block);
    std::uint64_t set = arr.set_of(block);
    cache_line& ln = arr.line(set, w);
    ln.tag = block;
    ln.state = rec.kind == access_kind::write ? line_state::dirty : line_state::clean;
    arr.touch(set, w);
    out = {level, level == service_level::l2 ? cfg_.l2_hit_cycles : cfg_.mem_cycles};
  }
  report_.total_cycles += out.latency_cycles;
  if (is_ifetch) ++report_.instructions_executed;
  return out;
}

bool hierarchy_sim::single_dirty_owner_ok() const {
  std::unordered_map<std::uint64_t, int> owners;
  for (unsigned c = 0; c < cfg_.core_count; ++c) {
    for (const cache_array* arr : {&l1i_[c], &l1d_[c]}) {
      for (std::uint64_t s = 0; s < arr->sets(); ++s)
        for (unsigned w = 0; w < arr->ways(); ++w) {
          const cache_line& ln = arr->line(s, w);
          if (ln.state == line_state::dirty && ++owners[ln.tag] > 1) return false;
        }
    }
  }
  return true;
}

sim_report run_trace(const hierarchy_config& cfg, const std::vector<trace_record>& records) {
  hierarchy_sim sim(cfg);
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      sim.access(records[i]);
    } catch (const std::invalid_argument& e) {
      throw trace_error("record " + std::to_string(i) + ": " + e.what());
    }
  }
  return sim.report();
}

sim_report run_trace_checked(const hierarchy_config& cfg,
                             const std::vector<trace_record>& records) {
  hierarchy_sim sim(cfg);
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      sim.access(records[i]);
    } catch (const std::invalid_argument& e) {
      throw trace_error("record " + std::to_string(i) + ": " + e.what());
    }
    if (!sim.single_dirty_owner_ok())
      throw std::logic_error("coherence violation: two dirty copies after record " +
                             std::to_string(i));
  }
  return sim.report();
}

}  // namespace cachelab
