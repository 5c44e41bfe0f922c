#include "netmiso/rates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "netmiso/stats.hpp"

namespace netmiso {

std::vector<double> instantaneous_rate(const CMat& H, const PrecodeResult& r,
                                       double snr_linear) {
  const CMat t = scaled_columns(r);
  const CMat g = matmul(H, t);  // g(i,l) = h_i t_l
  std::vector<double> rates(H.rows(), 0.0);
  for (std::size_t i = 0; i < H.rows(); ++i) {
    const double sig = std::norm(g(i, i));
    double interf = 0.0;
    for (std::size_t l = 0; l < t.cols(); ++l)
      if (l != i) interf += std::norm(g(i, l));
    rates[i] = std::log2(1.0 + snr_linear * sig / (1.0 + snr_linear * interf));
  }
  return rates;
}

TrialOutcome run_trial(const ScenarioConfig& cfg, Scheme scheme, double snr_db,
                       std::uint64_t trial) {
  const double p = std::pow(10.0, snr_db / 10.0);
  constexpr std::size_t kMaxAttempts = 64;
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt == kMaxAttempts)
      throw SingularMatrixError(
          "run_trial: persistent rank deficiency, giving up after 64 redraws");
    RngStream rng(cfg.seed, trial, attempt);
    try {
      const ChannelRealization real = generate(cfg, rng, p);
      const PrecodeResult res = run_scheme(scheme, real, cfg, trial);
      TrialOutcome out;
      out.per_rx = instantaneous_rate(real.H, res, p);
      out.sum = kahan_sum(out.per_rx);
      out.outage = res.outage;
      out.inconsistent = !res.consistent;
      out.attempts = attempt + 1;
      return out;
    } catch (const SingularMatrixError&) {
      continue;  // reject and redraw on the next substream
    }
  }
}

RatePoint expected_sum_rate(const ScenarioConfig& cfg, Scheme scheme,
                            double snr_db, std::size_t trials,
                            std::size_t threads) {
  std::vector<TrialOutcome> slots(trials);
  const std::size_t workers = std::max<std::size_t>(1, threads);
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t)
      slots[t] = run_trial(cfg, scheme, snr_db, t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (;;) {
        const std::size_t t = next.fetch_add(1);
        if (t >= trials) return;
        try {
          slots[t] = run_trial(cfg, scheme, snr_db, t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  RatePoint pt;
  pt.snr_db = snr_db;
  pt.scheme = scheme;
  pt.trials = trials;
  pt.seed = cfg.seed;
  pt.per_rx_rate.assign(cfg.K, 0.0);

  std::vector<double> sums(trials);
  for (std::size_t t = 0; t < trials; ++t) sums[t] = slots[t].sum;
  pt.sum_rate = mean(sums);
  pt.stderr_bits = standard_error(sums, pt.sum_rate);

  for (std::size_t k = 0; k < cfg.K; ++k) {
    std::vector<double> col(trials);
    for (std::size_t t = 0; t < trials; ++t) col[t] = slots[t].per_rx[k];
    pt.per_rx_rate[k] = mean(col);
  }
  std::size_t outages = 0, inconsistents = 0, redraws = 0;
  for (const auto& s : slots) {
    outages += s.outage ? 1 : 0;
    inconsistents += s.inconsistent ? 1 : 0;
    redraws += s.attempts - 1;
  }
  pt.p_outage = double(outages) / double(trials);
  pt.p_inconsistent = double(inconsistents) / double(trials);
  pt.resampled = redraws;
  return pt;
}

double rate_gap(const RatePoint& reference, const RatePoint& candidate) {
  if (reference.snr_db != candidate.snr_db)
    throw DimensionError("rate_gap: SNR points disagree");
  if (reference.per_rx_rate.size() != candidate.per_rx_rate.size())
    throw DimensionError("rate_gap: receiver counts disagree");
  return reference.sum_rate - candidate.sum_rate;
}

AffineFit affine_fit(std::vector<RatePoint> points, std::size_t n_fit) {
  if (points.size() < 3)
    throw DimensionError("affine_fit: at least 3 rate points required");
  std::stable_sort(points.begin(), points.end(),
                   [](const RatePoint& a, const RatePoint& b) {
                     return a.snr_db < b.snr_db;
                   });
  n_fit = std::max<std::size_t>(3, std::min(n_fit, points.size()));
  const std::size_t first = points.size() - n_fit;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = first; i < points.size(); ++i) {
    const double x = log2_of_snr_db(points[i].snr_db);
    const double y = points[i].sum_rate;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(n_fit);
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12)
    throw DimensionError("affine_fit: degenerate SNR spacing");

  AffineFit fit;
  fit.dof = (n * sxy - sx * sy) / denom;
  // offset as the mean of dof*log2(P) - R over the fitted points
  double acc = 0.0;
  for (std::size_t i = first; i < points.size(); ++i)
    acc += fit.dof * log2_of_snr_db(points[i].snr_db) - points[i].sum_rate;
  fit.rate_offset = acc / n;
  fit.power_offset = fit.dof != 0.0 ? fit.rate_offset / fit.dof : 0.0;
  double rss = 0.0;
  for (std::size_t i = first; i < points.size(); ++i) {
    const double pred =
        fit.dof * log2_of_snr_db(points[i].snr_db) - fit.rate_offset;
    rss += (points[i].sum_rate - pred) * (points[i].sum_rate - pred);
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

}  // namespace netmiso
