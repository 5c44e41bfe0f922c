#include "netmiso/lemmas.hpp"

#include <algorithm>
#include <cmath>

namespace netmiso {

SlopeFit fit_slope(const std::vector<double>& xs,
                   const std::vector<double>& estimates) {
  if (xs.size() != estimates.size())
    throw DimensionError("fit_slope: x/y length mismatch");
  if (xs.size() < 4)
    throw DimensionError("fit_slope: at least 4 points required");
  SlopeFit fit;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (estimates[i] > 0.0) {
      fit.x.push_back(xs[i]);
      fit.y.push_back(std::log2(estimates[i]));
    } else {
      ++fit.excluded;
    }
  }
  const std::size_t n = fit.x.size();
  if (n < 2)
    throw SingularMatrixError(
        "fit_slope: fewer than 2 positive estimates to fit");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += fit.x[i];
    sy += fit.y[i];
    sxx += fit.x[i] * fit.x[i];
    sxy += fit.x[i] * fit.y[i];
  }
  const double denom = double(n) * sxx - sx * sx;
  if (std::abs(denom) < 1e-12)
    throw SingularMatrixError("fit_slope: degenerate abscissae");
  fit.slope = (double(n) * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / double(n);
  double ss_res = 0.0, ss_tot = 0.0;
  const double ym = sy / double(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = fit.intercept + fit.slope * fit.x[i];
    ss_res += (fit.y[i] - pred) * (fit.y[i] - pred);
    ss_tot += (fit.y[i] - ym) * (fit.y[i] - ym);
  }
  fit.r_squared = ss_tot > 1e-30 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

namespace {

// Redraws on rank-deficient channel realizations, mirroring the rate path.
template <typename Fn>
void for_each_trial(const ScenarioConfig& cfg, double snr_db,
                    std::size_t trials, Fn&& body) {
  const double p = std::pow(10.0, snr_db / 10.0);
  constexpr std::size_t kMaxAttempts = 64;
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts)
        throw SingularMatrixError("lemma estimator: persistent rank deficiency");
      RngStream rng(cfg.seed, t, attempt);
      const ChannelRealization real = generate(cfg, rng, p);
      try {
        body(real);
        break;
      } catch (const SingularMatrixError&) {
        continue;
      }
    }
  }
}

}  // namespace

InconsistencyPoint estimate_inconsistency(const ScenarioConfig& cfg,
                                          double snr_db, std::size_t trials) {
  cfg.validate_for_cdzf();
  const bool exact = cfg.csit_mode != CsitMode::kDistributed;
  InconsistencyPoint out;
  out.snr_db = snr_db;
  out.trials = trials;
  out.per_tx.assign(cfg.M - 1, BinomialEstimate{});

  for_each_trial(cfg, snr_db, trials, [&](const ChannelRealization& real) {
    const double q = quantizer_step(real.snr_linear, cfg.alpha_q);
    bool any = false;
    for (std::size_t j = 1; j < cfg.M; ++j) {
      const CMat actual_q = quantize_matrix(real.est[j], q);
      const CMat recon_q =
          exact ? actual_q
                : map_estimate_quantized_csit(real.est[0], j, cfg,
                                              real.snr_linear);
      const bool mismatch = !lattice_equal(recon_q, actual_q, q);
      any = any || mismatch;
      out.per_tx[j - 1].events += mismatch ? 1 : 0;
      out.per_tx[j - 1].samples += 1;
      for (std::size_t e = 0; e < actual_q.size(); ++e) {
        const cx a = actual_q.data()[e];
        const cx r = recon_q.data()[e];
        out.per_scalar.events +=
            (lattice_index(a.real(), q) != lattice_index(r.real(), q)) ? 1 : 0;
        out.per_scalar.events +=
            (lattice_index(a.imag(), q) != lattice_index(r.imag(), q)) ? 1 : 0;
        out.per_scalar.samples += 2;
      }
    }
    out.any_mismatch.events += any ? 1 : 0;
    out.any_mismatch.samples += 1;
  });
  return out;
}

OutagePoint estimate_outage(const ScenarioConfig& cfg, double snr_db,
                            std::size_t trials) {
  cfg.validate_for_cdzf();
  const bool exact = cfg.csit_mode != CsitMode::kDistributed;
  OutagePoint out;
  out.snr_db = snr_db;
  out.trials = trials;
  for_each_trial(cfg, snr_db, trials, [&](const ChannelRealization& real) {
    const PrecodeResult r = cdzf(real, cfg, exact);
    out.outage.events += r.outage ? 1 : 0;
    out.outage.samples += 1;
  });
  return out;
}

GapMomentsPoint estimate_precoder_gap_moments(const ScenarioConfig& cfg,
                                              double snr_db,
                                              std::size_t trials) {
  cfg.validate_for_cdzf();
  GapMomentsPoint out;
  out.snr_db = snr_db;
  out.trials = trials;
  out.per_tx_sq.assign(cfg.M - 1, 0.0);
  out.per_tx_abs.assign(cfg.M - 1, 0.0);

  std::size_t column_samples = 0;
  for_each_trial(cfg, snr_db, trials, [&](const ChannelRealization& real) {
    const CMat v = centralized_zf_matrix(real.est[0]);
    const CMat w = cdzf(real, cfg, /*exact_knowledge=*/true).W;
    for (std::size_t i = 0; i < cfg.K; ++i) {
      const CMat dcol = sub(column(v, i), column(w, i));
      const double g2 = frobenius_norm(dcol);
      out.global_sq += g2 * g2;
      out.global_abs += g2;
      for (std::size_t j = 1; j < cfg.M; ++j) {
        const CMat dblk = take_rows(dcol, cfg.antenna_offset(j), cfg.N[j]);
        const double b = frobenius_norm(dblk);
        out.per_tx_sq[j - 1] += b * b;
        out.per_tx_abs[j - 1] += b;
      }
    }
    column_samples += cfg.K;
  });
  const double denom = double(column_samples);
  out.global_sq /= denom;
  out.global_abs /= denom;
  for (std::size_t j = 0; j + 1 < cfg.M; ++j) {
    out.per_tx_sq[j] /= denom;
    out.per_tx_abs[j] /= denom;
  }
  return out;
}

RatioTailsPoint estimate_ratio_tails(const ScenarioConfig& cfg, double snr_db,
                                     std::size_t trials, double epsilon) {
  cfg.validate_for_cdzf();
  if (!(epsilon > 0.0) || !(epsilon < cfg.alpha_q))
    throw ConfigError("epsilon", "ratio tails require 0 < epsilon < alpha_q");
  const bool exact = cfg.csit_mode != CsitMode::kDistributed;
  const double p = std::pow(10.0, snr_db / 10.0);

  RatioTailsPoint out;
  out.snr_db = snr_db;
  out.trials = trials;
  out.eta = std::pow(std::sqrt(p), -epsilon);

  for_each_trial(cfg, snr_db, trials, [&](const ChannelRealization& real) {
    const PrecodeResult vres = centralized_zf(real.est[0], cfg);
    const PrecodeResult wres = cdzf(real, cfg, exact);
    if (!wres.consistent || wres.outage) return;
    out.conditioned_trials += 1;

    const CMat tv = scaled_columns(vres);
    const CMat tw = scale(scaled_columns(wres), cx{1.0 / wres.mu, 0.0});
    const CMat gv = matmul(real.H, tv);
    const CMat gw = matmul(real.H, tw);
    for (std::size_t i = 0; i < cfg.K; ++i) {
      double iv = 0, iw = 0, dv = 0, dw = 0;
      for (std::size_t l = 0; l < cfg.K; ++l) {
        const double av = std::norm(gv(i, l));
        const double aw = std::norm(gw(i, l));
        dv += av;
        dw += aw;
        if (l != i) {
          iv += av;
          iw += aw;
        }
      }
      const double fi = (1.0 + p * iw) / (1.0 + p * iv);
      const double fd = (1.0 + p * dv) / (1.0 + p * dw);
      out.fi_upper.events += (fi >= 1.0 + out.eta) ? 1 : 0;
      out.fi_lower.events += (1.0 / fi >= 1.0 + out.eta) ? 1 : 0;
      out.fd_upper.events += (fd >= 1.0 + out.eta) ? 1 : 0;
      out.fd_lower.events += (1.0 / fd >= 1.0 + out.eta) ? 1 : 0;
      out.fi_upper.samples += 1;
      out.fi_lower.samples += 1;
      out.fd_upper.samples += 1;
      out.fd_lower.samples += 1;
    }
  });
  return out;
}

namespace {

struct ProductBound {
  double lower = 0.0;
  double upper = 0.0;
  bool zero = false;
};

std::vector<ProductBound> product_bounds(const std::vector<double>& snr_db,
                                         const std::vector<BinomialEstimate>& est) {
  std::vector<ProductBound> out(est.size());
  for (std::size_t i = 0; i < est.size(); ++i) {
    const WilsonInterval w = est[i].wilson();
    const double l2p = log2_of_snr_db(snr_db[i]);
    out[i].lower = w.lower * l2p;
    out[i].upper = w.upper * l2p;
    out[i].zero = est[i].events == 0;
  }
  return out;
}

}  // namespace

bool product_strictly_decreasing(const std::vector<double>& snr_db,
                                 const std::vector<BinomialEstimate>& est,
                                 std::size_t span) {
  if (snr_db.size() != est.size() || est.size() < 2) return false;
  span = std::min(span, est.size());
  const auto b = product_bounds(snr_db, est);
  const std::size_t first = est.size() - span;
  for (std::size_t k = first; k + 1 < est.size(); ++k) {
    if (b[k].zero && b[k + 1].zero) continue;  // already at the floor
    if (!(b[k + 1].upper < b[k].lower)) return false;
  }
  return true;
}

bool product_non_increasing(const std::vector<double>& snr_db,
                            const std::vector<BinomialEstimate>& est,
                            std::size_t span) {
  if (snr_db.size() != est.size() || est.size() < 2) return false;
  span = std::min(span, est.size());
  const auto b = product_bounds(snr_db, est);
  const std::size_t first = est.size() - span;
  for (std::size_t k = first; k + 1 < est.size(); ++k)
    if (!(b[k + 1].lower <= b[k].upper)) return false;
  return true;
}

LemmaSuiteResult run_lemma_suite(const ScenarioConfig& cfg, double epsilon) {
  cfg.validate_for_cdzf();
  LemmaSuiteResult res;

  std::vector<double> grid = cfg.snr_grid_db;
  std::sort(grid.begin(), grid.end());

  std::vector<double> snrs, log2p, log2pbar;
  std::vector<BinomialEstimate> inconsistency_any, outage_freqs;
  std::vector<double> outage_vals, tx2_sq, global_sq;

  for (double snr : grid) {
    res.inconsistency.push_back(estimate_inconsistency(cfg, snr, cfg.trials));
    res.outage.push_back(estimate_outage(cfg, snr, cfg.trials));
    res.gaps.push_back(estimate_precoder_gap_moments(cfg, snr, cfg.trials));
    res.tails.push_back(estimate_ratio_tails(cfg, snr, cfg.trials, epsilon));

    snrs.push_back(snr);
    log2p.push_back(log2_of_snr_db(snr));
    log2pbar.push_back(log2_of_pbar_db(snr));
    inconsistency_any.push_back(res.inconsistency.back().any_mismatch);
    outage_freqs.push_back(res.outage.back().outage);
    outage_vals.push_back(res.outage.back().outage.freq());
    tx2_sq.push_back(res.gaps.back().per_tx_sq.empty()
                         ? 0.0
                         : res.gaps.back().per_tx_sq[0]);
    global_sq.push_back(res.gaps.back().global_sq);
  }

  res.consistency_trend_pass =
      product_strictly_decreasing(snrs, inconsistency_any, 4);
  res.outage_trend_pass =
      product_strictly_decreasing(snrs, outage_freqs, snrs.size());

  bool all_outage_zero = true;
  for (const auto& f : outage_freqs) all_outage_zero &= (f.events == 0);
  if (all_outage_zero) {
    res.outage_slope_pass = true;  // nothing to fit, no decay to refute
  } else {
    res.outage_slope = fit_slope(log2pbar, outage_vals);
    res.outage_slope_pass = res.outage_slope.slope <= kOutageSlopeMax;
  }

  res.tx2_sq_slope = fit_slope(log2p, tx2_sq);
  res.gap_slope_pass = res.tx2_sq_slope.slope >= kGapSlopeLow &&
                       res.tx2_sq_slope.slope <= kGapSlopeHigh &&
                       res.tx2_sq_slope.r_squared >= kGapSlopeMinR2;
  res.global_sq_slope = fit_slope(log2p, global_sq);
  res.global_vs_tx2_slope_diff =
      std::abs(res.global_sq_slope.slope - res.tx2_sq_slope.slope);
  res.corollary_pass = res.global_vs_tx2_slope_diff <= kGapGlobalSlopeTol;

  std::vector<BinomialEstimate> fi_u, fi_l, fd_u, fd_l;
  for (const auto& t : res.tails) {
    fi_u.push_back(t.fi_upper);
    fi_l.push_back(t.fi_lower);
    fd_u.push_back(t.fd_upper);
    fd_l.push_back(t.fd_lower);
  }
  res.tails_pass = product_non_increasing(snrs, fi_u, 3) &&
                   product_non_increasing(snrs, fi_l, 3) &&
                   product_non_increasing(snrs, fd_u, 3) &&
                   product_non_increasing(snrs, fd_l, 3);
  return res;
}

}  // namespace netmiso
