#include "netmiso/output.hpp"

#include <charconv>
#include <cmath>

#include "json.hpp"

namespace netmiso {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string rate_points_csv(const std::vector<RatePoint>& points) {
  std::string out =
      "snr_db,scheme,sum_rate,stderr,p_outage,p_inconsistent,trials,seed\n";
  for (const auto& p : points) {
    out += format_double(p.snr_db);
    out += ',';
    out += to_string(p.scheme);
    out += ',';
    out += format_double(p.sum_rate);
    out += ',';
    out += format_double(p.stderr_bits);
    out += ',';
    out += format_double(p.p_outage);
    out += ',';
    out += format_double(p.p_inconsistent);
    out += ',';
    out += std::to_string(p.trials);
    out += ',';
    out += std::to_string(p.seed);
    out += '\n';
  }
  return out;
}

std::string manifest_json(const RunManifest& m) {
  json j;
  j["tool"] = "netmiso";
  j["version"] = kToolVersion;
  j["command"] = m.command;
  j["config"] = json::parse(m.config_json);
  j["seed"] = m.seed;
  j["schemes"] = m.schemes;
  j["threads"] = m.threads;
  j["wall_clock_utc"] = m.wall_clock_utc;
  j["outputs"] = m.outputs;
  return j.dump(2) + "\n";
}

namespace {

json binomial_json(const BinomialEstimate& b) {
  const WilsonInterval w = b.wilson();
  return json{{"events", b.events},
              {"samples", b.samples},
              {"freq", b.freq()},
              {"wilson_lower", w.lower},
              {"wilson_upper", w.upper},
              {"wilson_half_width", w.half_width}};
}

json slope_json(const SlopeFit& s) {
  return json{{"slope", s.slope},
              {"intercept", s.intercept},
              {"r_squared", s.r_squared},
              {"excluded_points", s.excluded},
              {"x", s.x},
              {"log2_y", s.y}};
}

json matrix_json(const CMat& a) {
  json entries = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t jx = 0; jx < a.cols(); ++jx)
      row.push_back(json::array({a(i, jx).real(), a(i, jx).imag()}));
    entries.push_back(row);
  }
  return json{{"rows", a.rows()}, {"cols", a.cols()}, {"entries", entries}};
}

json precode_json(const PrecodeResult& r, const CMat& H, double p) {
  json blocks = json::array();
  for (const auto& b : r.per_tx_blocks) blocks.push_back(matrix_json(b));
  const std::vector<double> rates = instantaneous_rate(H, r, p);
  double sum = 0.0;
  for (double x : rates) sum += x;
  return json{{"scheme", to_string(r.scheme)},
              {"columns_unscaled", matrix_json(r.W)},
              {"mu", r.mu},
              {"per_tx_blocks", blocks},
              {"outage", r.outage},
              {"consistent", r.consistent},
              {"correction_residual", r.correction_residual},
              {"per_rx_rate", rates},
              {"sum_rate", sum}};
}

}  // namespace

std::string lemma_report_json(const ScenarioConfig& cfg,
                              const LemmaSuiteResult& res, double epsilon) {
  json j;
  j["tool"] = "netmiso";
  j["version"] = kToolVersion;
  j["config"] = json::parse(config_to_json_text(cfg));
  j["epsilon"] = epsilon;

  {
    json pts = json::array();
    for (const auto& p : res.inconsistency) {
      json per_tx = json::array();
      for (const auto& b : p.per_tx) per_tx.push_back(binomial_json(b));
      pts.push_back(json{{"snr_db", p.snr_db},
                         {"trials", p.trials},
                         {"any_tx", binomial_json(p.any_mismatch)},
                         {"per_tx", per_tx},
                         {"per_scalar", binomial_json(p.per_scalar)}});
    }
    j["consistency"] = {{"points", pts},
                        {"trend_product_strictly_decreasing_top4",
                         res.consistency_trend_pass},
                        {"pass", res.consistency_trend_pass}};
  }
  {
    json pts = json::array();
    for (const auto& p : res.outage)
      pts.push_back(json{{"snr_db", p.snr_db},
                         {"trials", p.trials},
                         {"outage", binomial_json(p.outage)}});
    j["power_outage"] = {{"points", pts},
                         {"trend_product_decreasing", res.outage_trend_pass},
                         {"slope_vs_log2_sqrt_p", slope_json(res.outage_slope)},
                         {"slope_max", kOutageSlopeMax},
                         {"slope_pass", res.outage_slope_pass},
                         {"pass", res.outage_trend_pass && res.outage_slope_pass}};
  }
  {
    json pts = json::array();
    for (const auto& p : res.gaps)
      pts.push_back(json{{"snr_db", p.snr_db},
                         {"trials", p.trials},
                         {"per_tx_sq", p.per_tx_sq},
                         {"per_tx_abs", p.per_tx_abs},
                         {"global_sq", p.global_sq},
                         {"global_abs", p.global_abs}});
    j["precoder_gap"] = {
        {"points", pts},
        {"tx2_sq_slope_vs_log2_p", slope_json(res.tx2_sq_slope)},
        {"slope_window", json::array({kGapSlopeLow, kGapSlopeHigh})},
        {"min_r_squared", kGapSlopeMinR2},
        {"slope_pass", res.gap_slope_pass},
        {"global_sq_slope_vs_log2_p", slope_json(res.global_sq_slope)},
        {"global_vs_tx2_slope_diff", res.global_vs_tx2_slope_diff},
        {"global_match_tol", kGapGlobalSlopeTol},
        {"global_match_pass", res.corollary_pass},
        {"pass", res.gap_slope_pass && res.corollary_pass}};
  }
  {
    json pts = json::array();
    for (const auto& p : res.tails)
      pts.push_back(json{{"snr_db", p.snr_db},
                         {"eta", p.eta},
                         {"trials", p.trials},
                         {"conditioned_trials", p.conditioned_trials},
                         {"interference_ratio_upper", binomial_json(p.fi_upper)},
                         {"interference_ratio_lower", binomial_json(p.fi_lower)},
                         {"total_power_ratio_upper", binomial_json(p.fd_upper)},
                         {"total_power_ratio_lower", binomial_json(p.fd_lower)}});
    j["ratio_tails"] = {{"points", pts},
                        {"trend_products_non_increasing_top3", res.tails_pass},
                        {"pass", res.tails_pass}};
  }
  j["all_pass"] = res.consistency_trend_pass && res.outage_trend_pass &&
                  res.outage_slope_pass && res.gap_slope_pass &&
                  res.corollary_pass && res.tails_pass;
  return j.dump(2) + "\n";
}

std::string single_shot_json(const ScenarioConfig& cfg, double snr_db,
                             std::uint64_t trial) {
  const double p = std::pow(10.0, snr_db / 10.0);
  const bool exact = cfg.csit_mode != CsitMode::kDistributed;
  const Scheme cdzf_scheme = exact ? Scheme::kCdzfHierarchical
                                   : Scheme::kCdzfDistributed;

  constexpr std::size_t kMaxAttempts = 64;
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt == kMaxAttempts)
      throw SingularMatrixError("single_shot: persistent rank deficiency");
    RngStream rng(cfg.seed, trial, attempt);
    const ChannelRealization real = generate(cfg, rng, p);
    try {
      const double q = quantizer_step(p, cfg.alpha_q);
      json j;
      j["tool"] = "netmiso";
      j["version"] = kToolVersion;
      j["config"] = json::parse(config_to_json_text(cfg));
      j["snr_db"] = snr_db;
      j["snr_linear"] = p;
      j["trial"] = trial;
      j["attempt"] = attempt;
      j["quantizer_step"] = q;
      j["noise_scale"] = real.zbar;
      j["channel_weight"] = real.zbreve;
      j["H"] = matrix_json(real.H);

      json ests = json::array(), quant = json::array(), recon = json::array();
      json agree = json::array();
      for (std::size_t jx = 0; jx < cfg.M; ++jx) ests.push_back(matrix_json(real.est[jx]));
      for (std::size_t jx = 1; jx < cfg.M; ++jx) {
        const CMat actual_q = quantize_matrix(real.est[jx], q);
        const CMat recon_q =
            exact ? actual_q
                  : map_estimate_quantized_csit(real.est[0], jx, cfg, p);
        quant.push_back(matrix_json(actual_q));
        recon.push_back(matrix_json(recon_q));
        agree.push_back(check_consistency(recon_q, actual_q, q));
      }
      j["estimates"] = ests;
      j["quantized_estimates"] = quant;
      j["reconstructed_estimates"] = recon;
      j["reconstruction_agrees"] = agree;

      const PrecodeResult vres = centralized_zf(real.est[0], cfg);
      const PrecodeResult wres = cdzf(real, cfg, exact);
      j["centralized"] = precode_json(vres, real.H, p);
      j[to_string(cdzf_scheme)] = precode_json(wres, real.H, p);
      return j.dump(2) + "\n";
    } catch (const SingularMatrixError&) {
      continue;
    }
  }
}

}  // namespace netmiso
