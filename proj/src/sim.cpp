#include "healthchain/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace healthchain::sim {

namespace {

constexpr double kPtrsThreshold = 30.0;

// 53-bit uniform in [0, 1); pinned mapping, independent of stdlib
// distribution internals.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

PoissonSampler::PoissonSampler(double mean) : mean_(mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw std::invalid_argument("Poisson mean must be finite and non-negative");
  if (mean_ == 0.0) return;
  if (mean_ < kPtrsThreshold) {
    p0_ = std::exp(-mean_);
    cap_ = static_cast<std::uint64_t>(mean_ + 60.0 * std::sqrt(mean_) + 100.0);
  } else {
    // Hörmann (1993), transformed rejection with squeeze. Exact.
    const double slam = std::sqrt(mean_);
    log_mean_ = std::log(mean_);
    b_ = 0.931 + 2.53 * slam;
    a_ = -0.059 + 0.02483 * b_;
    inv_alpha_ = 1.1239 + 1.1328 / (b_ - 3.4);
    v_r_ = 0.9277 - 3.6224 / (b_ - 2.0);
  }
}

std::uint64_t PoissonSampler::operator()(std::mt19937_64& rng) const {
  if (mean_ == 0.0) return 0;
  return mean_ < kPtrsThreshold ? draw_inversion(rng) : draw_ptrs(rng);
}

std::uint64_t PoissonSampler::draw_inversion(std::mt19937_64& rng) const {
  const double u = uniform01(rng);
  double p = p0_;
  double cum = p;
  std::uint64_t k = 0;
  while (u > cum && k < cap_) {
    ++k;
    p *= mean_ / static_cast<double>(k);
    cum += p;
  }
  return k;
}

std::uint64_t PoissonSampler::draw_ptrs(std::mt19937_64& rng) const {
  while (true) {
    const double u = uniform01(rng) - 0.5;
    const double v = uniform01(rng);
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a_ / us + b_) * u + mean_ + 0.43);
    if (us >= 0.07 && v <= v_r_) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha_) - std::log(a_ / (us * us) + b_) <=
        k * log_mean_ - mean_ - std::lgamma(k + 1.0))
      return static_cast<std::uint64_t>(k);
  }
}

std::vector<std::uint64_t> poisson_arrivals(const WorkloadSpec& spec) {
  if (spec.lambda_day < 0.0) throw std::invalid_argument("lambda_day must be >= 0");
  if (spec.horizon_seconds <= 0) throw std::invalid_argument("horizon must be positive");

  std::mt19937_64 rng(spec.seed);
  const PoissonSampler sampler(spec.lambda_day / static_cast<double>(spec.horizon_seconds));
  std::vector<std::uint64_t> arrivals(static_cast<std::size_t>(spec.horizon_seconds));
  for (auto& a : arrivals) a = sampler(rng);
  return arrivals;
}

SimResult simulate_day(const WorkloadSpec& spec, const SealModel& seal,
                       bool keep_trajectory) {
  if (spec.lambda_day < 0.0) throw std::invalid_argument("lambda_day must be >= 0");
  if (spec.horizon_seconds <= 0) throw std::invalid_argument("horizon must be positive");
  if (!(seal.mu_tps > 0.0)) throw std::invalid_argument("mu_tps must be positive");

  std::mt19937_64 rng(spec.seed);
  const PoissonSampler sampler(spec.lambda_day / static_cast<double>(spec.horizon_seconds));

  SimResult result;
  if (keep_trajectory) result.trajectory.reserve(static_cast<std::size_t>(spec.horizon_seconds));

  std::uint64_t backlog = 0;
  double credit_carry = 0.0;
  for (std::int64_t t = 0; t < spec.horizon_seconds; ++t) {
    const std::uint64_t arrived = sampler(rng);
    result.arrived_total += arrived;
    backlog += arrived;

    credit_carry += seal.mu_tps;
    const double whole = std::floor(credit_carry);
    credit_carry -= whole;
    const std::uint64_t credit = static_cast<std::uint64_t>(whole);

    const std::uint64_t sealed = std::min(backlog, credit);
    result.sealed_total += sealed;
    backlog -= sealed;

    if (keep_trajectory) result.trajectory.push_back(backlog);
  }
  result.end_backlog = backlog;
  return result;
}

double expected_backlog(double lambda_day, double mu_tps, std::int64_t horizon_seconds) {
  if (lambda_day < 0.0 || mu_tps < 0.0 || horizon_seconds < 0)
    throw std::invalid_argument("expected_backlog inputs must be >= 0");
  return std::max(0.0, lambda_day - mu_tps * static_cast<double>(horizon_seconds));
}

std::vector<SweepRow> sweep(double lambda_day, std::vector<double> mu_list,
                            std::uint64_t base_seed, std::int64_t horizon_seconds) {
  if (mu_list.empty()) throw std::invalid_argument("mu list must be non-empty");
  std::sort(mu_list.begin(), mu_list.end());

  std::vector<SweepRow> rows;
  rows.reserve(mu_list.size());
  for (std::size_t i = 0; i < mu_list.size(); ++i) {
    SweepRow row;
    row.mu_tps = mu_list[i];
    row.seed = base_seed + i;
    row.expected_unsealed = expected_backlog(lambda_day, row.mu_tps, horizon_seconds);
    row.simulated_unsealed =
        simulate_day(WorkloadSpec{lambda_day, horizon_seconds, row.seed},
                     SealModel{"", row.mu_tps})
            .end_backlog;
    rows.push_back(row);
  }
  return rows;
}

std::string format_number(double value) {
  if (std::fabs(value) < 9.007199254740992e15 && value == std::floor(value)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", value);
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "seal_rate_tps,expected_unsealed,simulated_unsealed,seed\n";
  for (const auto& row : rows) {
    out << format_number(row.mu_tps) << ',' << format_number(row.expected_unsealed) << ','
        << row.simulated_unsealed << ',' << row.seed << '\n';
  }
}

std::uint64_t sidechains_needed(const CapacityQuery& query) {
  if (query.n_patients == 0 || !(query.r_per_patient_day > 0.0) || !(query.mu_tps > 0.0))
    throw std::invalid_argument("capacity query fields must be positive");
  const double daily_tx = static_cast<double>(query.n_patients) * query.r_per_patient_day;
  const double per_chain = query.mu_tps * static_cast<double>(kSecondsPerDay);
  const double needed = std::ceil(daily_tx / per_chain);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(needed));
}

std::int64_t encounters_per_day(std::int64_t annual_encounters) {
  if (annual_encounters < 0) throw std::invalid_argument("annual encounters must be >= 0");
  return annual_encounters / kDaysPerYear;
}

std::int64_t tx_per_patient_day(std::int64_t daily_tx, std::int64_t daily_encounters) {
  if (daily_encounters <= 0)
    throw std::invalid_argument("daily encounters must be positive");
  if (daily_tx < 0) throw std::invalid_argument("daily transactions must be >= 0");
  return (daily_tx + daily_encounters - 1) / daily_encounters;  // ceil
}

}  // namespace healthchain::sim
