#include "cachelab/contention.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"

using namespace cachelab;

TEST_CASE("read_simultaneous evaluates (1/n)^r as printed") {
  CHECK(read_simultaneous({1, 8, 5, 1}) == 1.0);
  CHECK(read_simultaneous({1024, 2, 2, 1}) == (1.0 / 1024) * (1.0 / 1024));
  CHECK(read_simultaneous({8, 1, 1, 1}) == 0.125);
  CHECK(read_simultaneous({16, 4, 0, 1}) == 1.0);  // no requests
}

TEST_CASE("write cases follow the printed forms") {
  contention_scenario s{4, 4, 2, 1};
  CHECK(write_probability(write_case::same_content_same_block, s).value == 0.25);
  CHECK(write_probability(write_case::diff_content_same_block, s).value == 0.25);
  CHECK_FALSE(write_probability(write_case::same_content_same_block, s).out_of_model);

  contention_scenario s3{16, 4, 3, 3};
  CHECK(write_probability(write_case::same_content_diff_block, s3).value == doctest::Approx(0.1875));
  CHECK(write_probability(write_case::diff_content_diff_block, s3).value == doctest::Approx(0.1875));
}

TEST_CASE("k/n beyond 1 is flagged, never clamped") {
  contention_scenario s{2, 4, 2, 3};
  model_value v = write_probability(write_case::diff_content_diff_block, s);
  CHECK(v.value == doctest::Approx(1.5));
  CHECK(v.out_of_model);
}

TEST_CASE("cases 3 and 4 require k < p") {
  contention_scenario s{16, 4, 2, 4};
  CHECK_THROWS_WITH_AS(write_probability(write_case::same_content_diff_block, s),
                       doctest::Contains("requires k < p"), std::invalid_argument);
  CHECK_THROWS_AS(write_probability(write_case::diff_content_diff_block, s),
                  std::invalid_argument);
  // cases 1 and 2 never consult k
  CHECK_NOTHROW(write_probability(write_case::same_content_same_block, s));
}

TEST_CASE("scenario validation") {
  CHECK_THROWS_AS(read_simultaneous({0, 1, 0, 1}), std::invalid_argument);
  CHECK_THROWS_WITH_AS(read_simultaneous({4, 2, 3, 1}), doctest::Contains("r <= p"),
                       std::invalid_argument);
  CHECK_THROWS_AS(read_simultaneous({4, 0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(read_simultaneous({4, 2, 1, 0}), std::invalid_argument);
}

TEST_CASE("mixed access") {
  CHECK(mixed_access({10, 4, 2, 2}, false).value == doctest::Approx(0.1));
  CHECK(mixed_access({10, 4, 2, 2}, true).value == doctest::Approx(0.2));
  CHECK(mixed_access({1, 1, 1, 1}, true).value == 1.0);  // identity case
  model_value big = mixed_access({2, 8, 4, 5}, true);
  CHECK(big.value == doctest::Approx(2.5));
  CHECK(big.out_of_model);
}

TEST_CASE("monte_carlo is reproducible and sane at the edges") {
  contention_scenario s{8, 4, 2, 2};
  empirical_report a = monte_carlo(s, 5000, 99);
  empirical_report b = monte_carlo(s, 5000, 99);
  CHECK(a.specific_block_freq == b.specific_block_freq);
  CHECK(a.all_same_block_freq == b.all_same_block_freq);
  for (int q = 0; q < 4; ++q) CHECK(a.case_freq[q] == b.case_freq[q]);

  empirical_report one = monte_carlo(s, 1, 7);
  CHECK((one.specific_block_freq == 0.0 || one.specific_block_freq == 1.0));
  CHECK((one.all_same_block_freq == 0.0 || one.all_same_block_freq == 1.0));

  double sum = a.case_freq[0] + a.case_freq[1] + a.case_freq[2] + a.case_freq[3];
  CHECK(sum == doctest::Approx(1.0));
  CHECK_THROWS_AS(monte_carlo(s, 0, 1), std::invalid_argument);
}

TEST_CASE("r=1: closed form and the empirical block estimate agree within 3 sigma") {
  for (std::uint64_t n : {2ull, 8ull, 64ull}) {
    contention_scenario s{n, 4, 1, 2};
    double closed = read_simultaneous(s);
    empirical_report mc = monte_carlo(s, 1000000, 2024);
    REQUIRE(mc.specific_block_std_error > 0.0);
    CHECK(std::abs(mc.specific_block_freq - closed) <= 3.0 * mc.specific_block_std_error);
  }
}

TEST_CASE("r=2: the collision estimate tracks 1/n, not the printed (1/n)^2") {
  contention_scenario s{4, 4, 2, 2};
  double closed = read_simultaneous(s);  // 0.0625 as printed
  CHECK(closed == doctest::Approx(0.0625));
  empirical_report mc = monte_carlo(s, 1000000, 31);
  // all-same-block collisions happen with probability (1/n)^(r-1) = 0.25
  CHECK(std::abs(mc.all_same_block_freq - 0.25) <= 3.0 * mc.all_same_block_std_error);
  CHECK(std::abs(mc.all_same_block_freq - closed) > 10.0 * mc.all_same_block_std_error);
}

TEST_CASE("standard errors follow the binomial formula") {
  contention_scenario s{8, 2, 1, 1};
  empirical_report mc = monte_carlo(s, 10000, 5);
  double f = mc.specific_block_freq;
  CHECK(mc.specific_block_std_error == doctest::Approx(std::sqrt(f * (1 - f) / 10000.0)));
}
