#include "netmiso/precoding.hpp"

#include <cmath>

namespace netmiso {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kCentralized: return "centralized";
    case Scheme::kNaive: return "naive";
    case Scheme::kApZf: return "apzf";
    case Scheme::kCdzfDistributed: return "cdzf-distributed";
    case Scheme::kCdzfHierarchical: return "cdzf-hierarchical";
    case Scheme::kTx1Only: return "tx1-only";
  }
  return "centralized";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "centralized") return Scheme::kCentralized;
  if (s == "naive") return Scheme::kNaive;
  if (s == "apzf") return Scheme::kApZf;
  if (s == "cdzf-distributed") return Scheme::kCdzfDistributed;
  if (s == "cdzf-hierarchical") return Scheme::kCdzfHierarchical;
  if (s == "tx1-only") return Scheme::kTx1Only;
  throw ConfigError("schemes", "unknown scheme \"" + s + "\"");
}

CMat scaled_columns(const PrecodeResult& r) {
  CMat out;
  for (const auto& block : r.per_tx_blocks) out = vstack(out, block);
  return out;
}

namespace {

double max_row_norm(const CMat& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

std::vector<CMat> split_blocks(const CMat& w, const ScenarioConfig& cfg,
                               double factor) {
  std::vector<CMat> blocks;
  blocks.reserve(cfg.M);
  for (std::size_t j = 0; j < cfg.M; ++j)
    blocks.push_back(
        scale(take_rows(w, cfg.antenna_offset(j), cfg.N[j]), cx{factor, 0.0}));
  return blocks;
}

double back_off(const ScenarioConfig& cfg, double snr_linear) {
  return 1.0 - std::pow(std::sqrt(snr_linear), -cfg.alpha_mu);
}

}  // namespace

CMat centralized_zf_matrix(const CMat& est) {
  const std::size_t k = est.rows();
  const std::size_t nt = est.cols();
  if (nt < k)
    throw DimensionError("centralized_zf: fewer antennas than receivers");
  const double ref = std::max(1.0, frobenius_norm(est));
  CMat v(nt, k);
  for (std::size_t i = 0; i < k; ++i) {
    const CMat others = remove_row(est, i);
    const CMat proj = orth_complement_projector(others, nt);
    const CMat d = matmul(proj, hermitian(take_row(est, i)));
    const double nd = frobenius_norm(d);
    if (!(nd > 1e-12 * ref))
      throw SingularMatrixError(
          "centralized_zf: projected matched filter vanished");
    set_column(v, i, scale(d, cx{1.0 / nd, 0.0}));
  }
  if (!all_finite(v))
    throw SingularMatrixError("centralized_zf: non-finite precoder");
  return v;
}

PrecodeResult centralized_zf(const CMat& est, const ScenarioConfig& cfg) {
  PrecodeResult r;
  r.scheme = Scheme::kCentralized;
  r.W = centralized_zf_matrix(est);
  r.mu = 1.0;
  r.per_tx_blocks = split_blocks(r.W, cfg, 1.0 / std::sqrt(double(cfg.K)));
  r.outage = false;
  r.consistent = true;
  return r;
}

PrecodeResult naive_distributed_zf(const ChannelRealization& real,
                                   const ScenarioConfig& cfg) {
  PrecodeResult r;
  r.scheme = Scheme::kNaive;
  r.W = CMat(cfg.total_antennas(), cfg.K);
  bool identical = true;
  for (std::size_t j = 0; j < cfg.M; ++j) {
    const CMat vj = centralized_zf_matrix(real.est[j]);
    const std::size_t off = cfg.antenna_offset(j);
    for (std::size_t n = 0; n < cfg.N[j]; ++n)
      for (std::size_t c = 0; c < cfg.K; ++c) r.W(off + n, c) = vj(off + n, c);
    identical = identical && (real.est[j] == real.est[0]);
  }
  r.mu = 1.0;
  r.per_tx_blocks = split_blocks(r.W, cfg, 1.0 / std::sqrt(double(cfg.K)));
  r.outage = false;  // every block comes from a valid centralized layout
  r.consistent = identical;
  return r;
}

CMat fixed_passive_block(std::size_t tx, std::size_t n_antennas,
                         std::size_t k) {
  // Golden-ratio phase table; any estimate-independent pattern works as long
  // as every node can reproduce it.
  constexpr double kGolden = 0.61803398874989484820;
  const double amp = 1.0 / std::sqrt(double(k) * double(n_antennas));
  CMat out(n_antennas, k);
  for (std::size_t n = 0; n < n_antennas; ++n) {
    for (std::size_t c = 0; c < k; ++c) {
      const double seq =
          kGolden * (1.0 + double((tx * 64 + n) * 64 + c));
      const double phase = 2.0 * 3.14159265358979323846 * (seq - std::floor(seq));
      out(n, c) = cx{amp * std::cos(phase), amp * std::sin(phase)};
    }
  }
  return out;
}

PrecodeResult ap_zf(const ChannelRealization& real, const ScenarioConfig& cfg) {
  std::vector<CMat> passive;
  for (std::size_t j = 1; j < cfg.M; ++j)
    passive.push_back(fixed_passive_block(j, cfg.N[j], cfg.K));
  return ap_zf_with_blocks(real, cfg, passive);
}

PrecodeResult ap_zf_with_blocks(const ChannelRealization& real,
                                const ScenarioConfig& cfg,
                                const std::vector<CMat>& passive_blocks) {
  if (cfg.N[0] + 1 < cfg.K)
    throw DimensionError("ap_zf: TX 1 needs at least K-1 antennas");
  if (passive_blocks.size() != cfg.M - 1)
    throw DimensionError("ap_zf: one passive block per TX 2..M required");

  const std::size_t n1 = cfg.N[0];
  const std::size_t nt = cfg.total_antennas();
  const CMat& est = real.est[0];

  CMat fixed_stack;  // (N_T - N_1) x K
  for (const auto& b : passive_blocks) fixed_stack = vstack(fixed_stack, b);

  CMat x(n1, cfg.K);
  for (std::size_t l = 0; l < cfg.K; ++l) {
    const CMat others = remove_row(est, l);
    const CMat a = take_cols(others, 0, n1);
    CMat xp(n1, 1);
    if (cfg.K > 1 && nt > n1) {
      const CMat b = scale(matmul(take_cols(others, n1, nt - n1),
                                  column(fixed_stack, l)),
                           cx{-1.0, 0.0});
      xp = matmul(pinv(a), b);
    }
    // Leftover spatial freedom carries the matched filter for receiver l.
    if (n1 + 1 > cfg.K) {
      const CMat pn = orth_complement_projector(a, n1);
      const CMat d =
          matmul(pn, hermitian(take_cols(take_row(est, l), 0, n1)));
      const double nd = frobenius_norm(d);
      if (nd > 1e-12)
        xp = add(xp, scale(d, cx{1.0 / (nd * std::sqrt(double(cfg.K))), 0.0}));
    }
    set_column(x, l, xp);
  }

  const double m = max_row_norm(x);
  const double feasible = m > 1.0 ? 1.0 / m : 1.0;

  PrecodeResult r;
  r.scheme = Scheme::kApZf;
  r.W = vstack(x, fixed_stack);
  r.mu = feasible;
  r.outage = feasible < 0.1;
  r.consistent = true;  // passive blocks are common knowledge
  r.per_tx_blocks.push_back(scale(x, cx{feasible, 0.0}));
  for (const auto& b : passive_blocks) r.per_tx_blocks.push_back(b);
  return r;
}

CMat map_estimate_quantized_csit(const CMat& own_estimate, std::size_t tx,
                                 const ScenarioConfig& cfg, double snr_linear) {
  if (tx >= cfg.M) throw DimensionError("map_estimate: TX index out of range");
  const double pbar = std::sqrt(snr_linear);
  const double z1 = std::pow(pbar, -cfg.alphas[0]);
  const double zj = std::pow(pbar, -cfg.alphas[tx]);
  const double shrink = std::sqrt(std::max(0.0, 1.0 - z1 * z1)) *
                        std::sqrt(std::max(0.0, 1.0 - zj * zj));
  const double q = quantizer_step(snr_linear, cfg.alpha_q);
  return quantize_matrix(scale(own_estimate, cx{shrink, 0.0}), q);
}

PrecodeResult cdzf(const ChannelRealization& real, const ScenarioConfig& cfg,
                   bool exact_knowledge) {
  cfg.validate_for_cdzf();
  const std::size_t n1 = cfg.N[0];
  const std::size_t nt = cfg.total_antennas();
  const double q = quantizer_step(real.snr_linear, cfg.alpha_q);
  const CMat& est1 = real.est[0];

  const CMat v = centralized_zf_matrix(est1);

  // Blocks actually transmitted by TXs 2..M (zero-forcers of the quantized
  // estimates) and TX 1's reconstruction of them.
  CMat sent_tail(0, cfg.K);
  CMat recon_tail(0, cfg.K);
  bool consistent = true;
  {
    CMat sent_rows(nt, cfg.K), recon_rows(nt, cfg.K);
    for (std::size_t j = 1; j < cfg.M; ++j) {
      const CMat actual_q = quantize_matrix(real.est[j], q);
      const CMat w_full = centralized_zf_matrix(actual_q);
      const CMat recon_q =
          exact_knowledge
              ? actual_q
              : map_estimate_quantized_csit(est1, j, cfg, real.snr_linear);
      consistent = consistent && lattice_equal(recon_q, actual_q, q);
      const CMat what_full = lattice_equal(recon_q, actual_q, q)
                                 ? w_full
                                 : centralized_zf_matrix(recon_q);
      const std::size_t off = cfg.antenna_offset(j);
      for (std::size_t n = 0; n < cfg.N[j]; ++n)
        for (std::size_t c = 0; c < cfg.K; ++c) {
          sent_rows(off + n, c) = w_full(off + n, c);
          recon_rows(off + n, c) = what_full(off + n, c);
        }
    }
    sent_tail = take_rows(sent_rows, n1, nt - n1);
    recon_tail = take_rows(recon_rows, n1, nt - n1);
  }

  // TX 1: start from its centralized columns and add, per receiver, the
  // correction that restores the centralized interference pattern given the
  // reconstructed tail blocks.
  CMat w_head = take_rows(v, 0, n1);
  double worst_residual = 0.0;
  for (std::size_t l = 0; l < cfg.K; ++l) {
    if (cfg.K == 1 || nt == n1) break;
    const CMat others = remove_row(est1, l);
    const CMat a = take_cols(others, 0, n1);
    const CMat tail_gap =
        sub(take_rows(column(v, l), n1, nt - n1), column(recon_tail, l));
    const CMat b = matmul(take_cols(others, n1, nt - n1), tail_gap);
    const CMat phi = matmul(pinv(a), b);
    const double resid = frobenius_norm(sub(matmul(a, phi), b)) /
                         std::max(frobenius_norm(b), 1e-30);
    worst_residual = std::max(worst_residual, resid);
    set_column(w_head, l, add(column(w_head, l), phi));
  }

  PrecodeResult r;
  r.scheme = exact_knowledge ? Scheme::kCdzfHierarchical
                             : Scheme::kCdzfDistributed;
  r.W = vstack(w_head, sent_tail);
  r.mu = back_off(cfg, real.snr_linear);
  r.consistent = exact_knowledge ? true : consistent;
  r.correction_residual = worst_residual;

  const double col_scale = r.mu / std::sqrt(double(cfg.K));
  CMat t1 = scale(w_head, cx{col_scale, 0.0});
  r.outage = max_row_norm(t1) > 1.0;
  if (r.outage) {
    // Fall back to the uncorrected centralized block, scaled to fit.
    t1 = scale(take_rows(v, 0, n1), cx{col_scale, 0.0});
    const double m = max_row_norm(t1);
    if (m > 1.0) t1 = scale(t1, cx{1.0 / m, 0.0});
  }
  r.per_tx_blocks.push_back(t1);
  for (std::size_t j = 1; j < cfg.M; ++j)
    r.per_tx_blocks.push_back(scale(
        take_rows(sent_tail, cfg.antenna_offset(j) - n1, cfg.N[j]),
        cx{col_scale, 0.0}));
  return r;
}

PrecodeResult tx1_only_zf(const ChannelRealization& real,
                          const ScenarioConfig& cfg, std::uint64_t trial) {
  const std::size_t n1 = cfg.N[0];
  const std::size_t nt = cfg.total_antennas();
  const CMat head = take_cols(real.est[0], 0, n1);

  PrecodeResult r;
  r.scheme = Scheme::kTx1Only;
  r.mu = 1.0;
  r.consistent = true;
  r.outage = false;
  r.W = CMat(nt, cfg.K);
  CMat t1(n1, cfg.K);

  if (n1 >= cfg.K) {
    const CMat vs = centralized_zf_matrix(head);
    const double s = 1.0 / std::sqrt(double(cfg.K));
    for (std::size_t n = 0; n < n1; ++n)
      for (std::size_t c = 0; c < cfg.K; ++c) {
        r.W(n, c) = vs(n, c);
        t1(n, c) = vs(n, c) * s;
      }
  } else {
    // Round-robin subset of receivers, rotating with the trial index.
    const std::size_t serve = n1;
    const std::size_t start = static_cast<std::size_t>(trial % cfg.K);
    CMat sub(serve, n1);
    std::vector<std::size_t> chosen(serve);
    for (std::size_t m = 0; m < serve; ++m) {
      chosen[m] = (start + m) % cfg.K;
      for (std::size_t c = 0; c < n1; ++c) sub(m, c) = head(chosen[m], c);
    }
    const CMat vs = centralized_zf_matrix(sub);
    const double s = 1.0 / std::sqrt(double(serve));
    for (std::size_t m = 0; m < serve; ++m)
      for (std::size_t n = 0; n < n1; ++n) {
        r.W(n, chosen[m]) = vs(n, m);
        t1(n, chosen[m]) = vs(n, m) * s;
      }
  }
  r.per_tx_blocks.push_back(t1);
  for (std::size_t j = 1; j < cfg.M; ++j)
    r.per_tx_blocks.emplace_back(cfg.N[j], cfg.K);
  return r;
}

bool check_consistency(const CMat& reconstruction, const CMat& actual,
                       double step) {
  return lattice_equal(reconstruction, actual, step);
}

PrecodeResult run_scheme(Scheme scheme, const ChannelRealization& real,
                         const ScenarioConfig& cfg, std::uint64_t trial) {
  switch (scheme) {
    case Scheme::kCentralized: return centralized_zf(real.est[0], cfg);
    case Scheme::kNaive: return naive_distributed_zf(real, cfg);
    case Scheme::kApZf: return ap_zf(real, cfg);
    case Scheme::kCdzfDistributed:
      return cdzf(real, cfg, cfg.csit_mode != CsitMode::kDistributed);
    case Scheme::kCdzfHierarchical: return cdzf(real, cfg, true);
    case Scheme::kTx1Only: return tx1_only_zf(real, cfg, trial);
  }
  throw ConfigError("schemes", "unhandled scheme");
}

}  // namespace netmiso
