#ifndef NETMISO_STATS_HPP
#define NETMISO_STATS_HPP

// Small statistics helpers shared by the Monte Carlo estimators.

#include <cmath>
#include <cstddef>
#include <vector>

namespace netmiso {

// Compensated summation in index order; the result does not depend on how
// trials were scheduled across workers.
inline double kahan_sum(const std::vector<double>& xs) {
  double sum = 0.0, carry = 0.0;
  for (double x : xs) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

inline double mean(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : kahan_sum(xs) / static_cast<double>(xs.size());
}

inline double sample_stddev(const std::vector<double>& xs, double m) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0, carry = 0.0;
  for (double x : xs) {
    const double d = (x - m) * (x - m) - carry;
    const double t = acc + d;
    carry = (t - acc) - d;
    acc = t;
  }
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

inline double standard_error(const std::vector<double>& xs, double m) {
  if (xs.empty()) return 0.0;
  return sample_stddev(xs, m) / std::sqrt(static_cast<double>(xs.size()));
}

// 95% Wilson score interval for a binomial frequency.
struct WilsonInterval {
  double lower = 0.0;
  double center = 0.0;
  double upper = 0.0;
  double half_width = 0.0;
};

inline WilsonInterval wilson_interval(std::size_t events, std::size_t samples) {
  WilsonInterval w;
  if (samples == 0) return w;
  const double z = 1.959963984540054;
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(events) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  w.center = (p + z2 / (2.0 * n)) / denom;
  w.half_width =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  w.lower = std::max(0.0, w.center - w.half_width);
  w.upper = std::min(1.0, w.center + w.half_width);
  return w;
}

// Binomial counter with its Wilson interval.
struct BinomialEstimate {
  std::size_t events = 0;
  std::size_t samples = 0;

  double freq() const {
    return samples == 0 ? 0.0
                        : static_cast<double>(events) / static_cast<double>(samples);
  }
  WilsonInterval wilson() const { return wilson_interval(events, samples); }
};

inline double log2_of_snr_db(double snr_db) {
  // log2(P) with P = 10^(snr_db/10)
  return snr_db * 0.1 * 3.321928094887362;
}

inline double log2_of_pbar_db(double snr_db) { return 0.5 * log2_of_snr_db(snr_db); }

}  // namespace netmiso

#endif  // NETMISO_STATS_HPP
