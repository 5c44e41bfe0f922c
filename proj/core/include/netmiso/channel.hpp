#ifndef NETMISO_CHANNEL_HPP
#define NETMISO_CHANNEL_HPP

// True-channel and per-transmitter estimate generation under the
// distributed-CSIT noise model, the scalar uniform quantizer applied by the
// less-informed transmitters, and the hierarchical knowledge sets.

#include <cstdint>
#include <string>
#include <vector>

#include "netmiso/linalg.hpp"

namespace netmiso {

struct ConfigError : std::runtime_error {
  ConfigError(std::string field_name, const std::string& message)
      : std::runtime_error(message), field(std::move(field_name)) {}
  std::string field;
};

enum class CsitMode { kDistributed, kHierarchical, kCentralizedIdeal };

std::string to_string(CsitMode mode);
CsitMode csit_mode_from_string(const std::string& s);

// Network geometry, accuracy exponents, quantizer/back-off exponents, SNR
// grid, trial count and seed. Loadable from JSON with exactly these field
// names; unknown keys are rejected.
struct ScenarioConfig {
  std::size_t M = 0;              // transmitter count
  std::size_t K = 0;              // receiver count
  std::vector<std::size_t> N;     // per-TX antenna counts
  std::vector<double> alphas;     // accuracy exponents, strictly decreasing
  double alpha_q = 0.0;           // quantization-step exponent
  double alpha_mu = 0.0;          // power back-off exponent
  std::vector<double> snr_grid_db;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  CsitMode csit_mode = CsitMode::kDistributed;

  std::size_t total_antennas() const;
  // First antenna index (within the stacked channel) owned by TX j.
  std::size_t antenna_offset(std::size_t tx) const;

  // Basic invariants that hold for every scheme.
  void validate() const;
  // Additional preconditions for running the quantize-and-correct scheme:
  // 0 < alpha_q < min alpha, 0 < alpha_mu < alpha_q, N[0] >= K-1.
  void validate_for_cdzf() const;
};

ScenarioConfig config_from_json_text(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string config_to_json_text(const ScenarioConfig& cfg);

// One fading draw: the true channel plus the M estimates and their noise
// matrices. est[j] = zbreve[j] * H + zbar[j] * noise[j], entry variance 1.
struct ChannelRealization {
  CMat H;                      // K x N_T true channel
  std::vector<CMat> est;       // M estimates, one per TX
  std::vector<CMat> noise;     // M estimation-noise matrices
  double snr_linear = 0.0;
  std::vector<double> zbar;    // noise scale per TX
  std::vector<double> zbreve;  // sqrt(1 - zbar^2)
};

// Draw order is fixed (H first, then the noise matrices in TX order,
// row-major within each) so trial reproducibility survives refactoring.
// In the centralized-ideal mode every estimate is a copy of the best one.
ChannelRealization generate(const ScenarioConfig& cfg, RngStream& rng,
                            double snr_linear);

// Quantization step for transmit power P: sqrt(P)^(-alpha_q).
double quantizer_step(double snr_linear, double alpha_q);

// Nearest-lattice-point scalar quantizer; half-step ties round up.
double quantize_uniform(double x, double q);

// Element-wise quantization of real and imaginary parts.
CMat quantize_matrix(const CMat& a, double q);

// Integer cell index of an already-quantized value.
long long lattice_index(double x, double q);

// Exact equality of two quantized matrices on the integer lattice.
bool lattice_equal(const CMat& a, const CMat& b, double q);

// Quantized per-TX estimates together with the step that produced them.
struct QuantizedCsit {
  double step = 0.0;
  std::vector<CMat> cells;  // quantized estimate per TX (index 0 unused level)
};

// Knowledge set of TX j under hierarchical CSIT: its own estimate plus the
// estimates of every less-informed TX. TX 0 receives all M.
std::vector<CMat> hierarchical_view(const ChannelRealization& real,
                                    std::size_t tx);

}  // namespace netmiso

#endif  // NETMISO_CHANNEL_HPP
