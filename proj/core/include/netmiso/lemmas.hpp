#ifndef NETMISO_LEMMAS_HPP
#define NETMISO_LEMMAS_HPP

// Statistical estimators and log-log slope fits that check the scheme's
// asymptotic claims at desk scale: inconsistency and power-outage
// frequencies, precoder-difference moments, and the interference/total-power
// ratio tails.

#include <string>
#include <vector>

#include "netmiso/precoding.hpp"
#include "netmiso/stats.hpp"

namespace netmiso {

// Ordinary least squares on caller-supplied (x, log2 y) pairs.
struct SlopeFit {
  std::vector<double> x;
  std::vector<double> y;  // log2 of the retained estimates
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t excluded = 0;  // nonpositive estimates that could not enter the log
};

// xs are log2-domain abscissae; estimates must be positive to participate.
// Requires at least 4 input points and at least 2 usable ones.
SlopeFit fit_slope(const std::vector<double>& xs,
                   const std::vector<double>& estimates);

struct InconsistencyPoint {
  double snr_db = 0.0;
  BinomialEstimate any_mismatch;              // reconstruction != actual, any TX
  std::vector<BinomialEstimate> per_tx;       // index 0 <-> TX 2
  BinomialEstimate per_scalar;                // disagreement per real component
  std::size_t trials = 0;
};

// Frequency of reconstruction mismatch for the quantize-and-correct scheme.
// Exercises the MAP path in distributed mode; in hierarchical or idealized
// modes the reconstruction is exact and every frequency is zero.
InconsistencyPoint estimate_inconsistency(const ScenarioConfig& cfg,
                                          double snr_db, std::size_t trials);

struct OutagePoint {
  double snr_db = 0.0;
  BinomialEstimate outage;  // per-antenna violation at TX 1 before fallback
  std::size_t trials = 0;
};

OutagePoint estimate_outage(const ScenarioConfig& cfg, double snr_db,
                            std::size_t trials);

struct GapMomentsPoint {
  double snr_db = 0.0;
  std::vector<double> per_tx_sq;   // E ||v_block - w_block||^2, index 0 <-> TX 2
  std::vector<double> per_tx_abs;  // E ||v_block - w_block||
  double global_sq = 0.0;          // E ||v_col - w_col||^2 over whole columns
  double global_abs = 0.0;
  std::size_t trials = 0;
};

// Monte Carlo moments of the difference between the centralized columns on
// the best estimate and the quantize-and-correct columns (exact-knowledge
// correction, before power scaling).
GapMomentsPoint estimate_precoder_gap_moments(const ScenarioConfig& cfg,
                                              double snr_db,
                                              std::size_t trials);

struct RatioTailsPoint {
  double snr_db = 0.0;
  double eta = 0.0;
  BinomialEstimate fi_upper;  // interference ratio >= 1 + eta
  BinomialEstimate fi_lower;  // its reciprocal >= 1 + eta
  BinomialEstimate fd_upper;  // total-power ratio >= 1 + eta
  BinomialEstimate fd_lower;
  std::size_t conditioned_trials = 0;  // consistent and not in outage
  std::size_t trials = 0;
};

// Tail frequencies of the interference-power ratio and total-received-power
// ratio between the distributed and centralized precoders (through the true
// channel, back-off stripped), conditioned on feasible-consistent trials.
// eta = sqrt(P)^(-epsilon) with 0 < epsilon < alpha_q.
RatioTailsPoint estimate_ratio_tails(const ScenarioConfig& cfg, double snr_db,
                                     std::size_t trials, double epsilon);

// --- verdict thresholds shared by the report tool and the test suite ---

inline constexpr double kGapSlopeLow = -0.65;
inline constexpr double kGapSlopeHigh = -0.35;
inline constexpr double kGapSlopeMinR2 = 0.9;
inline constexpr double kGapGlobalSlopeTol = 0.1;
inline constexpr double kOutageSlopeMax = -0.05;
inline constexpr double kRatioTailEpsilon = 0.2;

// Interval-aware trend checks for frequency * log2(P) products over the last
// `span` grid points. "Strict" demands separation beyond the combined Wilson
// half-widths; "non-increasing" allows equality within them.
bool product_strictly_decreasing(const std::vector<double>& snr_db,
                                 const std::vector<BinomialEstimate>& est,
                                 std::size_t span);
bool product_non_increasing(const std::vector<double>& snr_db,
                            const std::vector<BinomialEstimate>& est,
                            std::size_t span);

struct LemmaSuiteResult {
  std::vector<InconsistencyPoint> inconsistency;
  bool consistency_trend_pass = false;  // product strictly decreasing, top 4

  std::vector<OutagePoint> outage;
  bool outage_trend_pass = false;  // product decreasing over the grid
  SlopeFit outage_slope;           // vs log2(sqrt(P))
  bool outage_slope_pass = false;

  std::vector<GapMomentsPoint> gaps;
  SlopeFit tx2_sq_slope;  // log2 E||diff||^2 vs log2 P
  bool gap_slope_pass = false;
  SlopeFit global_sq_slope;
  double global_vs_tx2_slope_diff = 0.0;
  bool corollary_pass = false;

  std::vector<RatioTailsPoint> tails;
  bool tails_pass = false;  // all four products non-increasing, top 3
};

// Runs every estimator over the config's SNR grid and applies the pinned
// verdict thresholds.
LemmaSuiteResult run_lemma_suite(const ScenarioConfig& cfg,
                                 double epsilon = kRatioTailEpsilon);

}  // namespace netmiso

#endif  // NETMISO_LEMMAS_HPP
