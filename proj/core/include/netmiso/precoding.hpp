#ifndef NETMISO_PRECODING_HPP
#define NETMISO_PRECODING_HPP

// Precoding strategies for the jointly-serving multi-transmitter downlink:
// the ideal centralized zero-forcer, the naive per-TX zero-forcer, the
// active-passive scheme with fixed blocks at the less-informed TXs, and the
// quantize-and-correct scheme in which the best-informed TX reconstructs the
// other TXs' quantized estimates and compensates their interference.

#include <cstdint>
#include <string>
#include <vector>

#include "netmiso/channel.hpp"
#include "netmiso/linalg.hpp"

namespace netmiso {

enum class Scheme {
  kCentralized,
  kNaive,
  kApZf,
  kCdzfDistributed,
  kCdzfHierarchical,
  kTx1Only,
};

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

// Output of one precoding strategy on one channel realization.
//
// `per_tx_blocks` are the matrices actually applied at each TX, including the
// power back-off and the deterministic per-column scale, and always satisfy
// the per-antenna unit-norm constraint. `W` keeps the assembled columns
// before power scaling for diagnostics. `outage` records a per-antenna
// violation at the best-informed TX before its fallback was applied.
struct PrecodeResult {
  Scheme scheme = Scheme::kCentralized;
  CMat W;                           // N_T x K, pre power scaling
  double mu = 1.0;                  // power back-off folded into the blocks
  std::vector<CMat> per_tx_blocks;  // N_j x K per TX, fully scaled
  bool outage = false;
  bool consistent = true;
  // Max relative residual of the interference-matching solve (zero for
  // schemes without a correction step).
  double correction_residual = 0.0;
};

// Stacks the per-TX blocks into the N_T x K transmit matrix whose columns
// feed the rate formula.
CMat scaled_columns(const PrecodeResult& r);

// Unit-norm zero-forcing columns for one channel view: column i is the
// matched filter projected onto the orthogonal complement of the other
// receivers' rows. Throws SingularMatrixError on rank-deficient views or a
// vanishing projected direction.
CMat centralized_zf_matrix(const CMat& est);

// All TXs share the best estimate. Columns are unit norm, a deterministic
// 1/sqrt(K) block scale meets the per-antenna constraint, mu == 1 and the
// result is always consistent.
PrecodeResult centralized_zf(const CMat& est, const ScenarioConfig& cfg);

// Every TX runs the centralized zero-forcer on its own estimate and
// transmits its own block; the assembled matrix mixes blocks from different
// runs. Consistent only in the degenerate case of identical estimates.
PrecodeResult naive_distributed_zf(const ChannelRealization& real,
                                   const ScenarioConfig& cfg);

// Deterministic unit-modulus pattern (scaled 1/sqrt(K*N_j)) transmitted by a
// passive TX; common knowledge across the network.
CMat fixed_passive_block(std::size_t tx, std::size_t n_antennas, std::size_t k);

// Active-passive zero-forcing: TXs 2..M transmit fixed blocks, TX 1 solves
// the realignment system on its own estimate. A per-trial back-off scales
// TX 1's block into the power budget; below the 0.1 floor the trial is
// flagged as outage (the block is still scaled to fit so a transmit signal
// exists). Always consistent.
PrecodeResult ap_zf(const ChannelRealization& real, const ScenarioConfig& cfg);

// Same with caller-supplied passive blocks (used to exercise degenerate
// patterns such as silent passive TXs).
PrecodeResult ap_zf_with_blocks(const ChannelRealization& real,
                                const ScenarioConfig& cfg,
                                const std::vector<CMat>& passive_blocks);

// Most probable quantization cell of TX j's estimate given the best
// estimate: per real scalar the conditional density is Gaussian and
// symmetric-unimodal, so the maximizing cell is the one containing the
// conditional mean zbreve1*zbreve_j*x. Ties on a cell boundary follow the
// quantizer's round-half-up.
CMat map_estimate_quantized_csit(const CMat& own_estimate, std::size_t tx,
                                 const ScenarioConfig& cfg, double snr_linear);

// Quantize-and-correct scheme. TXs 2..M zero-force their quantized
// estimates; TX 1 starts from the centralized columns on its own estimate
// and adds, per receiver, the correction that reproduces the centralized
// interference given its reconstruction of the other blocks. In
// `exact_knowledge` mode (hierarchical or idealized CSIT) the reconstruction
// is the true quantized estimate; otherwise it is the MAP estimate.
// mu = 1 - sqrt(P)^(-alpha_mu) scales all blocks. On a per-antenna violation
// at TX 1 the flag is set and TX 1 falls back to its uncorrected centralized
// block scaled to fit.
PrecodeResult cdzf(const ChannelRealization& real, const ScenarioConfig& cfg,
                   bool exact_knowledge);

// TXs 2..M silent. TX 1 zero-forces all K receivers when it has enough
// antennas, otherwise serves min(N_1, K) receivers round-robin by trial.
PrecodeResult tx1_only_zf(const ChannelRealization& real,
                          const ScenarioConfig& cfg, std::uint64_t trial);

// Exact agreement of a reconstruction with the actual quantized estimate,
// compared on integer cell indices with no tolerance.
bool check_consistency(const CMat& reconstruction, const CMat& actual,
                       double step);

// Dispatch helper used by the sweep and the single-shot dump.
PrecodeResult run_scheme(Scheme scheme, const ChannelRealization& real,
                         const ScenarioConfig& cfg, std::uint64_t trial);

}  // namespace netmiso

#endif  // NETMISO_PRECODING_HPP
