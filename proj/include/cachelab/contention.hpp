#pragma once

#include <cstdint>

namespace cachelab {

/// n cache blocks, p cores, r simultaneous requests (r <= p: each core
/// raises at most one), k distinct written values (consulted by the
/// same-block write cases and the mixed case; requires k < p there).
struct contention_scenario {
  std::uint64_t n = 1;
  unsigned p = 1;
  unsigned r = 0;
  unsigned k = 1;
};

void validate(const contention_scenario& s);

/// Write cases in source order 1-4.
enum class write_case {
  same_content_same_block,
  diff_content_same_block,
  same_content_diff_block,
  diff_content_diff_block,
};

/// A closed-form output. The formulas are evaluated as printed, so k/n can
/// exceed 1; that is reported, never clamped.
struct model_value {
  double value = 0.0;
  bool out_of_model = false;  // true when the printed form left [0,1]
};

/// (1/n)^r, evaluated by repeated multiplication.
double read_simultaneous(const contention_scenario& s);

/// Cases 1,2 -> 1/n; cases 3,4 -> k/n.
model_value write_probability(write_case c, const contention_scenario& s);

/// Different blocks -> 1/n; same block -> k/n.
model_value mixed_access(const contention_scenario& s, bool same_block);

struct empirical_report {
  std::uint64_t trials = 0;
  // Fraction of trials in which block 0 was chosen by at least one request.
  double specific_block_freq = 0.0;
  double specific_block_std_error = 0.0;
  // Fraction of trials in which all r requests landed on one block.
  double all_same_block_freq = 0.0;
  double all_same_block_std_error = 0.0;
  // Write quadrants in case order: (same block, same value), (same block,
  // diff values), (diff blocks, same value), (diff blocks, diff values).
  double case_freq[4] = {0, 0, 0, 0};
  double case_std_error[4] = {0, 0, 0, 0};
};

/// r requests choose blocks uniformly from n and values from k, `trials`
/// times. Bit-reproducible for a fixed seed across platforms.
empirical_report monte_carlo(const contention_scenario& s, std::uint64_t trials,
                             std::uint64_t seed);

}  // namespace cachelab
