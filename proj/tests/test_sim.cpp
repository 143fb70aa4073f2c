#include <cmath>
#include <sstream>

#include "doctest.h"
#include "healthchain/sim.hpp"

using namespace healthchain::sim;

TEST_CASE("poisson sampler hits the distribution's moments across regimes") {
  // Means straddle the inversion/PTRS switch at 30.
  for (const double mean : {0.5, 5.0, 12.0, 29.5, 30.5, 115.74, 347.22}) {
    CAPTURE(mean);
    std::mt19937_64 rng(321);
    const PoissonSampler sampler(mean);
    const std::size_t n = 200'000;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(sampler(rng));
      sum += x;
      sum_sq += x * x;
    }
    const double sample_mean = sum / n;
    const double sample_var = sum_sq / n - sample_mean * sample_mean;
    CHECK(std::fabs(sample_mean - mean) <= 4.0 * std::sqrt(mean / n));
    CHECK(std::fabs(sample_var - mean) <= 0.05 * mean + 4.0 * mean / std::sqrt(n));
  }
}

TEST_CASE("poisson_arrivals: rate arithmetic, zeros and determinism") {
  SUBCASE("per-second mean 1.0 within the CLT bound") {
    const WorkloadSpec spec{86'400.0, 86'400, 7};
    const auto arrivals = poisson_arrivals(spec);
    REQUIRE(arrivals.size() == 86'400);
    double sum = 0;
    for (const auto a : arrivals) sum += static_cast<double>(a);
    const double mean = sum / 86'400.0;
    CHECK(std::fabs(mean - 1.0) <= 3.0 * std::sqrt(1.0 / 86'400.0));
  }
  SUBCASE("zero rate gives all zeros") {
    const auto arrivals = poisson_arrivals({0.0, 86'400, 7});
    for (const auto a : arrivals) REQUIRE(a == 0);
  }
  SUBCASE("fixed seed reproduces the series") {
    const WorkloadSpec spec{1'000'000.0, 86'400, 99};
    CHECK(poisson_arrivals(spec) == poisson_arrivals(spec));
  }
}

TEST_CASE("simulate_day tracks the closed form on the paper's workloads") {
  SUBCASE("10M/day against Ethereum-class 25 tps") {
    const auto result = simulate_day({10'000'000.0, 86'400, 1}, {"ethereum", 25.0});
    CHECK(result.arrived_total == result.sealed_total + result.end_backlog);
    const double expected = 7'840'000.0;
    CHECK(std::fabs(static_cast<double>(result.end_backlog) - expected) <=
          0.001 * expected);
  }
  SUBCASE("30M/day against Bitcoin-class 7 tps") {
    const auto result = simulate_day({30'000'000.0, 86'400, 2}, {"bitcoin", 7.0});
    const double expected = 29'395'200.0;
    CHECK(std::fabs(static_cast<double>(result.end_backlog) - expected) <=
          0.001 * expected);
    CHECK(result.sealed_total == 604'800);  // 7 tps credited exactly over a day
  }
  SUBCASE("below the viability threshold the backlog clears") {
    const auto result = simulate_day({2'000'000.0, 86'400, 3}, {"ethereum", 25.0});
    CHECK(result.end_backlog <= 1'000);  // subcritical residual queue only
  }
  SUBCASE("trajectory is the per-second backlog") {
    const auto result = simulate_day({1'000.0, 600, 4}, {"x", 1.0}, true);
    REQUIRE(result.trajectory.size() == 600);
    CHECK(result.trajectory.back() == result.end_backlog);
  }
}

TEST_CASE("expected_backlog closed form") {
  CHECK(expected_backlog(10'000'000, 25) == 7'840'000.0);
  CHECK(expected_backlog(33'000'000, 7) == 32'395'200.0);
  CHECK(expected_backlog(30'000'000, 7) == 29'395'200.0);
  CHECK(expected_backlog(10'000'000, 10'000'000.0 / 86'400.0) <= 1e-6);  // boundary
  CHECK(expected_backlog(10'000'000, 116) == 0.0);
  CHECK(expected_backlog(2'000'000, 25) == 0.0);
}

TEST_CASE("sweep rows are sorted, seeded per row and monotone") {
  const auto rows = sweep(10'000'000.0, {50.0, 7.0, 25.0}, 42);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].mu_tps == 7.0);
  CHECK(rows[1].mu_tps == 25.0);
  CHECK(rows[2].mu_tps == 50.0);
  CHECK(rows[0].expected_unsealed == 9'395'200.0);
  CHECK(rows[1].expected_unsealed == 7'840'000.0);
  CHECK(rows[2].expected_unsealed == 5'680'000.0);
  CHECK(rows[0].seed == 42);
  CHECK(rows[2].seed == 44);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].expected_unsealed <= rows[i - 1].expected_unsealed);
    CHECK(rows[i].simulated_unsealed <= rows[i - 1].simulated_unsealed);
  }

  SUBCASE("rates above lambda/T give zero rows") {
    const auto zero = sweep(10'000'000.0, {116.0, 200.0}, 1);
    for (const auto& row : zero) CHECK(row.expected_unsealed == 0.0);
  }
  SUBCASE("CSV bytes are stable across runs") {
    std::ostringstream a, b;
    write_sweep_csv(a, rows);
    write_sweep_csv(b, sweep(10'000'000.0, {50.0, 7.0, 25.0}, 42));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("seal_rate_tps,expected_unsealed,simulated_unsealed,seed\n", 0) == 0);
  }
}

TEST_CASE("sidechains_needed reproduces the planning table") {
  // Bitcoin-class column.
  CHECK(sidechains_needed({300'000, 110.0, 7.0}) == 55);
  CHECK(sidechains_needed({100'000, 110.0, 25.0}) == 6);
  CHECK(sidechains_needed({1, 110.0, 7.0}) == 1);
  CHECK(sidechains_needed({1, 110.0, 257.0}) == 1);
  // Floor at one sidechain even for tiny populations.
  CHECK(sidechains_needed({1'000, 110.0, 50.0}) == 1);
  // Halved per-patient rate: ceil(2,750,000 / 604,800) = 5.
  CHECK(sidechains_needed({50'000, 55.0, 7.0}) == 5);
  CHECK_THROWS_AS(sidechains_needed({0, 110.0, 7.0}), std::invalid_argument);
}

TEST_CASE("encounter arithmetic") {
  CHECK(encounters_per_day(100'000'000) == 273'972);  // floor; source prints 273,973
  CHECK(encounters_per_day(47'000'000) == 128'767);
  CHECK(encounters_per_day(365) == 1);
  CHECK(encounters_per_day(0) == 0);

  CHECK(tx_per_patient_day(30'000'000, 273'973) == 110);
  CHECK(tx_per_patient_day(0, 273'973) == 0);
  CHECK(tx_per_patient_day(273'973, 273'973) == 1);
  CHECK_THROWS_AS(tx_per_patient_day(1, 0), std::invalid_argument);
}

TEST_CASE("format_number renders integers plainly") {
  CHECK(format_number(7.0) == "7");
  CHECK(format_number(29'395'200.0) == "29395200");
  CHECK(format_number(115.74) == "115.74");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(254.6296296) == "254.62963");
}
