#ifndef NETMISO_OUTPUT_HPP
#define NETMISO_OUTPUT_HPP

// Deterministic result serialization: round-trip decimal CSV for rate
// sweeps, JSON for the lemma report and the single-trial pipeline dump, and
// the run manifest that makes every output replayable.

#include <cstdint>
#include <string>
#include <vector>

#include "netmiso/lemmas.hpp"
#include "netmiso/rates.hpp"

namespace netmiso {

inline constexpr const char* kToolVersion = "0.1.0";

// Shortest decimal form that parses back to the same double; no locale
// dependence.
std::string format_double(double v);

// Header: snr_db,scheme,sum_rate,stderr,p_outage,p_inconsistent,trials,seed
// One row per entry, '\n' newlines, byte-identical across reruns.
std::string rate_points_csv(const std::vector<RatePoint>& points);

struct RunManifest {
  std::string command;
  std::string config_json;  // full config snapshot
  std::uint64_t seed = 0;
  std::vector<std::string> schemes;
  std::size_t threads = 1;
  std::string wall_clock_utc;  // informational; outputs depend only on the rest
  std::vector<std::string> outputs;
};

std::string manifest_json(const RunManifest& m);

std::string lemma_report_json(const ScenarioConfig& cfg,
                              const LemmaSuiteResult& res, double epsilon);

// Full pipeline state of one trial: channel, estimates, quantized views, the
// reconstruction at the best-informed TX, both precoders, flags and
// per-receiver rates. Rates match the sweep's contribution for the same
// (config, snr, trial).
std::string single_shot_json(const ScenarioConfig& cfg, double snr_db,
                             std::uint64_t trial);

}  // namespace netmiso

#endif  // NETMISO_OUTPUT_HPP
