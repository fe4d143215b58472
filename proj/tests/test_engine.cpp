#include "cachelab/engine.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "reference_cache.hpp"

using namespace cachelab;

namespace {

hierarchy_config tiny_cfg(unsigned cores) {
  hierarchy_config c;
  c.core_count = cores;
  c.l1i = {256, 2, 64};  // 2 sets x 2 ways
  c.l1d = {256, 2, 64};
  c.l2 = {512, 2, 64};  // 4 sets x 2 ways, 8 blocks
  c.l1_hit_cycles = 1;
  c.l2_hit_cycles = 10;
  c.mem_cycles = 100;
  c.clock_hz = 1e9;
  return c;
}

hierarchy_config one_way_cfg() {
  hierarchy_config c;
  c.core_count = 1;
  c.l1i = {64, 1, 64};  // a single line
  c.l1d = {64, 1, 64};
  c.l2 = {128, 2, 64};  // 1 set x 2 ways
  c.l1_hit_cycles = 1;
  c.l2_hit_cycles = 10;
  c.mem_cycles = 100;
  c.clock_hz = 1e9;
  return c;
}

std::vector<trace_record> random_records(std::mt19937_64& gen, unsigned cores, std::size_t len,
                                         std::uint64_t blocks) {
  std::vector<trace_record> v;
  for (std::size_t i = 0; i < len; ++i) {
    trace_record r;
    r.core = int(gen() % cores);
    switch (gen() % 4) {
      case 0: r.kind = access_kind::write; break;
      case 1: r.kind = access_kind::ifetch; break;
      default: r.kind = access_kind::read; break;  // reads twice as likely
    }
    r.address = (gen() % blocks) * 64;
    v.push_back(r);
  }
  return v;
}

// Valid lines of one set ordered most-recent-first, as (tag, dirty) pairs.
std::vector<std::pair<std::uint64_t, bool>> set_content(const cache_array& arr,
                                                        std::uint64_t set) {
  std::vector<std::pair<unsigned, std::pair<std::uint64_t, bool>>> ranked;
  for (unsigned w = 0; w < arr.ways(); ++w) {
    const cache_line& ln = arr.line(set, w);
    if (ln.state != line_state::invalid)
      ranked.push_back({ln.lru_rank, {ln.tag, ln.state == line_state::dirty}});
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::pair<std::uint64_t, bool>> out;
  for (auto& [rank, line] : ranked) out.push_back(line);
  return out;
}

bool arrays_agree(const cache_array& arr, refmodel::ref_cache& ref) {
  for (std::uint64_t s = 0; s < arr.sets(); ++s) {
    auto got = set_content(arr, s);
    std::vector<std::pair<std::uint64_t, bool>> want;
    for (std::uint64_t b : ref.mru[s]) want.push_back({b, ref.dirty.count(b) > 0});
    if (got != want) return false;
  }
  return true;
}

bool ranks_are_permutations(const cache_array& arr) {
  for (std::uint64_t s = 0; s < arr.sets(); ++s) {
    std::vector<bool> seen(arr.ways(), false);
    for (unsigned w = 0; w < arr.ways(); ++w) {
      unsigned r = arr.line(s, w).lru_rank;
      if (r >= arr.ways() || seen[r]) return false;
      seen[r] = true;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("cold miss, then an immediate hit") {
  hierarchy_sim sim(tiny_cfg(1));
  auto first = sim.access({0, access_kind::read, 0x1000});
  CHECK(first.level_hit == service_level::memory);
  CHECK(first.latency_cycles == 100);
  auto second = sim.access({0, access_kind::read, 0x1000});
  CHECK(second.level_hit == service_level::l1);
  CHECK(second.latency_cycles == 1);
  CHECK(sim.report().l1d[0].read_misses == 1);
  CHECK(sim.report().l1d[0].read_hits == 1);
}

TEST_CASE("remote read of a dirty line: downgrade, writeback, L2 hit") {
  hierarchy_sim sim(tiny_cfg(2));
  auto w = sim.access({0, access_kind::write, 0x2000});
  CHECK(w.level_hit == service_level::memory);
  auto r = sim.access({1, access_kind::read, 0x2000});
  CHECK(r.level_hit == service_level::l2);
  CHECK(r.latency_cycles == 10);

  const sim_report& rep = sim.report();
  CHECK(rep.l1d[0].invalidations_received == 1);
  CHECK(rep.l1d[0].writebacks == 1);
  CHECK(rep.l1_writebacks_to_l2 == 1);
  CHECK(rep.l2.write_misses == 1);
  CHECK(rep.l2.write_hits == 1);  // the forwarded writeback
  CHECK(rep.l2.read_hits == 1);
  CHECK(counters_match(rep));

  std::uint64_t block = 0x2000 / 64;
  int w0 = sim.l1d_array(0).find(block);
  REQUIRE(w0 >= 0);  // the owner keeps a clean copy
  CHECK(sim.l1d_array(0).line(sim.l1d_array(0).set_of(block), unsigned(w0)).state ==
        line_state::clean);
  CHECK(sim.single_dirty_owner_ok());
}

TEST_CASE("write to a clean shared line upgrades and invalidates peers") {
  hierarchy_sim sim(tiny_cfg(2));
  sim.access({0, access_kind::read, 0x0});
  sim.access({1, access_kind::read, 0x0});
  auto up = sim.access({0, access_kind::write, 0x0});
  CHECK(up.level_hit == service_level::l1);
  CHECK(up.latency_cycles == 1);

  const sim_report& rep = sim.report();
  CHECK(rep.l1d[1].invalidations_received == 1);
  CHECK(rep.l1d[1].writebacks == 0);
  CHECK(rep.l2.accesses() == 2);  // the upgrade itself never reaches L2
  CHECK(sim.l1d_array(1).find(0) < 0);
  CHECK(sim.single_dirty_owner_ok());
}

TEST_CASE("instruction fetches route to the i-cache") {
  hierarchy_sim sim(tiny_cfg(1));
  sim.access({0, access_kind::ifetch, 0x0});
  sim.access({0, access_kind::ifetch, 0x0});
  const sim_report& rep = sim.report();
  CHECK(rep.l1i[0].ifetch_misses == 1);
  CHECK(rep.l1i[0].ifetch_hits == 1);
  CHECK(rep.l1d[0].accesses() == 0);
  CHECK(rep.instructions_executed == 2);
}

TEST_CASE("ifetch of a block the same core holds dirty in l1d") {
  hierarchy_sim sim(tiny_cfg(1));
  sim.access({0, access_kind::write, 0x0});
  auto f = sim.access({0, access_kind::ifetch, 0x0});
  CHECK(f.level_hit == service_level::l2);
  const sim_report& rep = sim.report();
  CHECK(rep.l1d[0].writebacks == 1);
  CHECK(rep.l1d[0].invalidations_received == 1);
  CHECK(rep.l2.ifetch_hits == 1);
  CHECK(counters_match(rep));
}

TEST_CASE("clean back-invalidation on L2 eviction") {
  hierarchy_sim sim(one_way_cfg());
  sim.access({0, access_kind::write, 0 * 64});   // dirty block 0
  sim.access({0, access_kind::read, 1 * 64});    // evicts 0 from L1 (forwarded wb)
  sim.access({0, access_kind::read, 2 * 64});    // L2 evicts block 1, still clean in L1
  const sim_report& rep = sim.report();
  CHECK(rep.l1d[0].writebacks == 1);
  CHECK(rep.l1d[0].evictions == 1);
  CHECK(rep.l1d[0].invalidations_received == 1);
  CHECK(rep.l2.evictions == 1);
  CHECK(rep.l2.writebacks == 0);
  CHECK(rep.l1_writebacks_to_l2 == 1);
  CHECK(counters_match(rep));
}

TEST_CASE("dirty flush merges into the dying L2 line") {
  hierarchy_sim sim(one_way_cfg());
  sim.access({0, access_kind::write, 0 * 64});
  sim.access({0, access_kind::write, 1 * 64});  // block 0 forwarded; block 1 dirty in L1
  sim.access({0, access_kind::read, 2 * 64});   // L2 evicts block 1 while dirty in L1
  const sim_report& rep = sim.report();
  CHECK(rep.l1d[0].writebacks == 2);
  CHECK(rep.l1_writebacks_to_l2 == 1);  // the flush merged, it never re-entered L2
  CHECK(rep.l2.writebacks == 1);
  CHECK(rep.l2.evictions == 1);
  CHECK(rep.l1d[0].invalidations_received == 1);
  CHECK(counters_match(rep));
}

TEST_CASE("latency accounting is exact") {
  hierarchy_sim sim(tiny_cfg(1));
  sim.access({0, access_kind::read, 0x0});   // mem: 100
  sim.access({0, access_kind::read, 0x0});   // l1: 1
  sim.access({0, access_kind::read, 0x40});  // mem: 100
  sim.access({0, access_kind::write, 0x0});  // l1: 1
  const sim_report& rep = sim.report();
  CHECK(rep.total_cycles == 202);
  CHECK(rep.l1d[0].total_miss_latency_cycles == 200);
  CHECK(rep.l1d[0].avg_miss_latency_cycles() == 100.0);
  CHECK(rep.sim_seconds() == doctest::Approx(202e-9).epsilon(1e-12));
}

TEST_CASE("empty trace yields an all-zero report") {
  sim_report rep = run_trace(tiny_cfg(2), {});
  CHECK(rep.l1d[0] == cache_stats{});
  CHECK(rep.l1d[1] == cache_stats{});
  CHECK(rep.l1i[0] == cache_stats{});
  CHECK(rep.l2 == cache_stats{});
  CHECK(rep.total_cycles == 0);
  CHECK(rep.sim_seconds() == 0.0);
  CHECK(counters_match(rep));
}

TEST_CASE("determinism: the same trace twice gives bit-identical reports") {
  std::mt19937_64 gen(11);
  auto recs = random_records(gen, 2, 500, 8);
  hierarchy_config cfg = tiny_cfg(2);
  CHECK(run_trace(cfg, recs) == run_trace(cfg, recs));
}

TEST_CASE("miss_rate categories") {
  cache_stats s;
  s.read_hits = 90;
  s.read_misses = 10;
  s.write_hits = 1;
  s.write_misses = 3;
  CHECK(miss_rate(s, miss_category::read) == doctest::Approx(0.1));
  CHECK(miss_rate(s, miss_category::write) == doctest::Approx(0.75));
  CHECK(miss_rate(s, miss_category::ifetch) == 0.0);  // no accesses -> 0
  CHECK(miss_rate(s, miss_category::all) == doctest::Approx(13.0 / 104.0));
  CHECK(miss_rate(cache_stats{}, miss_category::all) == 0.0);
}

TEST_CASE("access and run_trace reject bad cores") {
  hierarchy_sim sim(tiny_cfg(2));
  CHECK_THROWS_AS(sim.access({2, access_kind::read, 0}), std::invalid_argument);
  CHECK_THROWS_AS(sim.access({-1, access_kind::read, 0}), std::invalid_argument);
  std::vector<trace_record> recs = {{0, access_kind::read, 0}, {5, access_kind::read, 0}};
  CHECK_THROWS_WITH_AS(run_trace(tiny_cfg(2), recs), doctest::Contains("record 1"), trace_error);
}

TEST_CASE("oracle equivalence on random multicore traces") {
  std::mt19937_64 gen(303);
  for (int t = 0; t < 200; ++t) {
    hierarchy_config cfg = tiny_cfg(2);
    auto recs = random_records(gen, 2, 1 + gen() % 2000, 8);
    hierarchy_sim sim(cfg);
    refmodel::ref_hierarchy ref(cfg);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      auto got = sim.access(recs[i]);
      auto want = ref.access(recs[i]);
      service_level want_level = want == refmodel::level::l1   ? service_level::l1
                                 : want == refmodel::level::l2 ? service_level::l2
                                                               : service_level::memory;
      if (got.level_hit != want_level) {
        CAPTURE(t);
        CAPTURE(i);
        REQUIRE(got.level_hit == want_level);
      }
    }
    // full-state agreement at the end of each trace
    for (unsigned c = 0; c < cfg.core_count; ++c) {
      CHECK(arrays_agree(sim.l1i_array(c), ref.l1i[c]));
      CHECK(arrays_agree(sim.l1d_array(c), ref.l1d[c]));
    }
    CHECK(arrays_agree(sim.l2_array(), ref.l2));
    CHECK(counters_match(sim.report()));
  }
}

TEST_CASE("oracle equivalence with four cores and per-access state compare") {
  std::mt19937_64 gen(99);
  hierarchy_config cfg = tiny_cfg(4);
  auto recs = random_records(gen, 4, 800, 8);
  hierarchy_sim sim(cfg);
  refmodel::ref_hierarchy ref(cfg);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    sim.access(recs[i]);
    ref.access(recs[i]);
    bool ok = arrays_agree(sim.l2_array(), ref.l2);
    for (unsigned c = 0; c < 4 && ok; ++c)
      ok = arrays_agree(sim.l1i_array(c), ref.l1i[c]) && arrays_agree(sim.l1d_array(c), ref.l1d[c]);
    if (!ok) {
      CAPTURE(i);
      REQUIRE(ok);
    }
  }
}

TEST_CASE("LRU stack property: fully-associative misses are monotone in size") {
  std::mt19937_64 gen(555);
  for (int t = 0; t < 50; ++t) {
    auto recs = random_records(gen, 1, 1000, 40);
    for (auto& r : recs)
      if (r.kind == access_kind::ifetch) r.kind = access_kind::read;
    std::uint64_t prev = ~0ull;
    for (unsigned blocks : {4, 8, 16, 32}) {
      hierarchy_config cfg;
      cfg.core_count = 1;
      cfg.l1i = {64 * blocks, blocks, 64};
      cfg.l1d = {64 * blocks, blocks, 64};
      cfg.l2 = {4096, 64, 64};  // holds the whole 40-block universe
      cfg.l1_hit_cycles = 1;
      cfg.l2_hit_cycles = 10;
      cfg.mem_cycles = 100;
      cfg.clock_hz = 1e9;
      std::uint64_t misses = run_trace(cfg, recs).l1d[0].misses();
      CHECK(misses <= prev);
      prev = misses;
    }
  }
}

TEST_CASE("per-set inclusion: misses non-increasing in ways at fixed sets") {
  std::mt19937_64 gen(556);
  for (int t = 0; t < 20; ++t) {
    auto recs = random_records(gen, 1, 1000, 24);
    for (auto& r : recs)
      if (r.kind == access_kind::ifetch) r.kind = access_kind::read;
    std::uint64_t prev = ~0ull;
    for (unsigned ways : {1, 2, 4, 8}) {
      hierarchy_config cfg;
      cfg.core_count = 1;
      cfg.l1i = {4 * ways * 64, ways, 64};  // 4 sets throughout
      cfg.l1d = {4 * ways * 64, ways, 64};
      cfg.l2 = {4096, 64, 64};
      cfg.l1_hit_cycles = 1;
      cfg.l2_hit_cycles = 10;
      cfg.mem_cycles = 100;
      cfg.clock_hz = 1e9;
      std::uint64_t misses = run_trace(cfg, recs).l1d[0].misses();
      CHECK(misses <= prev);
      prev = misses;
    }
  }
}

TEST_CASE("counters are independent of the clock") {
  std::mt19937_64 gen(77);
  auto recs = random_records(gen, 2, 600, 8);
  hierarchy_config cfg = tiny_cfg(2);
  sim_report base = run_trace(cfg, recs);
  for (double hz : {2e9, 3e9}) {
    cfg.clock_hz = hz;
    sim_report rep = run_trace(cfg, recs);
    CHECK(rep.l1i == base.l1i);
    CHECK(rep.l1d == base.l1d);
    CHECK(rep.l2 == base.l2);
    CHECK(rep.instructions_executed == base.instructions_executed);
    CHECK(rep.total_cycles == base.total_cycles);
    CHECK(rep.sim_seconds() != base.sim_seconds());
  }
}

TEST_CASE("structural invariants hold after random runs") {
  std::mt19937_64 gen(1234);
  for (int t = 0; t < 10; ++t) {
    hierarchy_config cfg = tiny_cfg(4);
    auto recs = random_records(gen, 4, 1500, 16);
    hierarchy_sim sim(cfg);
    for (const auto& r : recs) sim.access(r);
    for (unsigned c = 0; c < 4; ++c) {
      CHECK(ranks_are_permutations(sim.l1i_array(c)));
      CHECK(ranks_are_permutations(sim.l1d_array(c)));
    }
    CHECK(ranks_are_permutations(sim.l2_array()));
    CHECK(sim.single_dirty_owner_ok());
    CHECK(counters_match(sim.report()));
    CHECK_NOTHROW(run_trace_checked(cfg, recs));
  }
}
