#ifndef NETMISO_RATES_HPP
#define NETMISO_RATES_HPP

// Instantaneous and expected rates, rate gaps between schemes, and the
// high-SNR affine approximation (pre-log slope and rate offset).

#include <cstdint>
#include <vector>

#include "netmiso/precoding.hpp"

namespace netmiso {

// Per-SNR Monte Carlo statistics for one scheme.
struct RatePoint {
  double snr_db = 0.0;
  Scheme scheme = Scheme::kCentralized;
  double sum_rate = 0.0;             // bits per channel use
  std::vector<double> per_rx_rate;   // means, sum equals sum_rate
  double stderr_bits = 0.0;          // sample std of the trial sums / sqrt(T)
  double p_outage = 0.0;
  double p_inconsistent = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t resampled = 0;  // rank-deficient draws rejected and redrawn
};

// Affine high-SNR description R ~ dof*log2(P) - rate_offset.
struct AffineFit {
  double dof = 0.0;
  double rate_offset = 0.0;   // vertical offset
  double power_offset = 0.0;  // rate_offset / dof
  double residual = 0.0;      // rms deviation over the fitted points
};

// Per-receiver rates log2(1 + P|h_i t_i|^2 / (1 + sum_{l != i} P|h_i t_l|^2))
// where t are the fully scaled transmit columns of the result.
std::vector<double> instantaneous_rate(const CMat& H, const PrecodeResult& r,
                                       double snr_linear);

// One Monte Carlo trial: channel draw, precoding, rates. Rank-deficient
// draws are rejected and redrawn on the next substream.
struct TrialOutcome {
  std::vector<double> per_rx;
  double sum = 0.0;
  bool outage = false;
  bool inconsistent = false;
  std::size_t attempts = 1;
};

TrialOutcome run_trial(const ScenarioConfig& cfg, Scheme scheme,
                       double snr_db, std::uint64_t trial);

// Monte Carlo mean over independent realizations with per-trial streams.
// Trial values are reduced in trial order, so the result is bit-identical
// for any thread count.
RatePoint expected_sum_rate(const ScenarioConfig& cfg, Scheme scheme,
                            double snr_db, std::size_t trials,
                            std::size_t threads = 1);

// Signed sum-rate difference (reference minus candidate) at one SNR.
double rate_gap(const RatePoint& reference, const RatePoint& candidate);

// Least-squares line in (log2 P, R) over the top n_fit points.
AffineFit affine_fit(std::vector<RatePoint> points, std::size_t n_fit = 3);

}  // namespace netmiso

#endif  // NETMISO_RATES_HPP
