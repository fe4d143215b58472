#include "cachelab/contention.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cachelab {

void validate(const contention_scenario& s) {
  if (s.n < 1) throw std::invalid_argument("contention: requires n >= 1");
  if (s.p < 1) throw std::invalid_argument("contention: requires p >= 1");
  if (s.r > s.p)
    throw std::invalid_argument("contention: requires r <= p (each core raises at most one request)");
  if (s.k < 1) throw std::invalid_argument("contention: requires k >= 1");
}

double read_simultaneous(const contention_scenario& s) {
  validate(s);
  double v = 1.0;
  for (unsigned i = 0; i < s.r; ++i) v *= 1.0 / double(s.n);
  return v;
}

static model_value flagged(double v) { return {v, v > 1.0}; }

model_value write_probability(write_case c, const contention_scenario& s) {
  validate(s);
  switch (c) {
    case write_case::same_content_same_block:
    case write_case::diff_content_same_block:
      return flagged(1.0 / double(s.n));
    case write_case::same_content_diff_block:
    case write_case::diff_content_diff_block:
      if (s.k >= s.p) throw std::invalid_argument("contention: requires k < p");
      return flagged(double(s.k) / double(s.n));
  }
  throw std::invalid_argument("contention: unknown write case");
}

model_value mixed_access(const contention_scenario& s, bool same_block) {
  validate(s);
  if (!same_block) return flagged(1.0 / double(s.n));
  return flagged(double(s.k) / double(s.n));
}

empirical_report monte_carlo(const contention_scenario& s, std::uint64_t trials,
                             std::uint64_t seed) {
  validate(s);
  if (trials < 1) throw std::invalid_argument("contention: requires trials >= 1");

  // gen() % n rather than a distribution: distributions are not specified
  // bit-for-bit across standard libraries, the raw engine is.
  std::mt19937_64 gen(seed);
  std::uint64_t hit_block0 = 0, all_same = 0, cases[4] = {0, 0, 0, 0};
  std::vector<std::uint64_t> blocks(s.r), values(s.r);

  for (std::uint64_t t = 0; t < trials; ++t) {
    for (unsigned i = 0; i < s.r; ++i) {
      blocks[i] = gen() % s.n;
      values[i] = gen() % s.k;
    }
    bool touches0 = false, same_block = true, same_value = true;
    for (unsigned i = 0; i < s.r; ++i) {
      if (blocks[i] == 0) touches0 = true;
      if (blocks[i] != blocks[0]) same_block = false;
      if (values[i] != values[0]) same_value = false;
    }
    if (touches0) ++hit_block0;
    if (same_block) ++all_same;
    int quadrant = (same_block ? 0 : 2) + (same_value ? 0 : 1);
    ++cases[quadrant];
  }

  auto freq = [&](std::uint64_t c) { return double(c) / double(trials); };
  auto stderr_of = [&](double f) { return std::sqrt(f * (1.0 - f) / double(trials)); };

  empirical_report rep;
  rep.trials = trials;
  rep.specific_block_freq = freq(hit_block0);
  rep.specific_block_std_error = stderr_of(rep.specific_block_freq);
  rep.all_same_block_freq = freq(all_same);
  rep.all_same_block_std_error = stderr_of(rep.all_same_block_freq);
  for (int q = 0; q < 4; ++q) {
    rep.case_freq[q] = freq(cases[q]);
    rep.case_std_error[q] = stderr_of(rep.case_freq[q]);
  }
  return rep;
}

}  // namespace cachelab
