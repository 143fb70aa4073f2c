#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace healthchain::sim {

inline constexpr std::int64_t kSecondsPerDay = 86'400;
inline constexpr std::int64_t kDaysPerYear = 365;
inline constexpr double kDefaultTxPerPatientDay = 110.0;

// Poisson arrival workload: lambda_day transactions per day on average,
// generated second by second over the horizon.
struct WorkloadSpec {
  double lambda_day = 0.0;
  std::int64_t horizon_seconds = kSecondsPerDay;
  std::uint64_t seed = 0;
};

// A chain technology's sealing throughput.
struct SealModel {
  std::string name;
  double mu_tps = 0.0;
};

struct SimResult {
  std::uint64_t end_backlog = 0;   // unsealed transactions at the horizon
  std::uint64_t sealed_total = 0;
  std::uint64_t arrived_total = 0;
  std::vector<std::uint64_t> trajectory;  // per-second backlog when requested
};

struct CapacityQuery {
  std::uint64_t n_patients = 0;
  double r_per_patient_day = kDefaultTxPerPatientDay;
  double mu_tps = 0.0;
};

// Exact Poisson sampler: CDF-inversion walk below mean 30, Hörmann's
// transformed rejection with squeeze (PTRS) above. No normal approximation
// anywhere, so simulated means stay faithful to the closed-form oracle.
// Streams are pinned to mt19937_64 with an explicit 53-bit uniform mapping
// and are reproducible across platforms.
class PoissonSampler {
 public:
  explicit PoissonSampler(double mean);

  std::uint64_t operator()(std::mt19937_64& rng) const;

  double mean() const { return mean_; }

 private:
  std::uint64_t draw_inversion(std::mt19937_64& rng) const;
  std::uint64_t draw_ptrs(std::mt19937_64& rng) const;

  double mean_ = 0.0;
  // inversion state
  std::uint64_t cap_ = 0;
  double p0_ = 0.0;
  // PTRS constants
  double log_mean_ = 0.0;
  double b_ = 0.0;
  double a_ = 0.0;
  double inv_alpha_ = 0.0;
  double v_r_ = 0.0;
};

// T per-second arrival counts, each ~ Poisson(lambda_day / T); deterministic
// for a fixed seed.
std::vector<std::uint64_t> poisson_arrivals(const WorkloadSpec& spec);

// Second-by-second backlog recursion: B(t+1) = max(0, B(t) + A(t) - c(t)),
// where the sealing credit c(t) accrues mu per second with fractional carry
// (token bucket), so e.g. 7 tps grants exactly 604,800 over a day.
SimResult simulate_day(const WorkloadSpec& spec, const SealModel& seal,
                       bool keep_trajectory = false);

// Closed-form oracle for simulate_day: max(0, lambda - mu * horizon).
double expected_backlog(double lambda_day, double mu_tps,
                        std::int64_t horizon_seconds = kSecondsPerDay);

struct SweepRow {
  double mu_tps = 0.0;
  double expected_unsealed = 0.0;
  std::uint64_t simulated_unsealed = 0;
  std::uint64_t seed = 0;
};

// One row per sealing rate, sorted ascending; each row simulates with its
// own fixed seed (base_seed + row index).
std::vector<SweepRow> sweep(double lambda_day, std::vector<double> mu_list,
                            std::uint64_t base_seed = 0,
                            std::int64_t horizon_seconds = kSecondsPerDay);

// Columns: seal_rate_tps,expected_unsealed,simulated_unsealed,seed
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

// Sidechains required to absorb n_patients * r transactions per day at
// mu_tps per sidechain: max(1, ceil(n * r / (mu * 86400))).
std::uint64_t sidechains_needed(const CapacityQuery& query);

// floor(annual / 365)
std::int64_t encounters_per_day(std::int64_t annual_encounters);

// Average transactions per patient encounter per day, rounded up (the
// conservative capacity-planning figure). Throws std::invalid_argument when
// daily_encounters is zero.
std::int64_t tx_per_patient_day(std::int64_t daily_tx, std::int64_t daily_encounters);

// Deterministic number formatting for CSV/stdout: integers render without
// exponent or trailing zeros.
std::string format_number(double value);

}  // namespace healthchain::sim
