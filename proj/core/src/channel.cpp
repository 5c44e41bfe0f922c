#include "netmiso/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace netmiso {

std::string to_string(CsitMode mode) {
  switch (mode) {
    case CsitMode::kDistributed: return "distributed";
    case CsitMode::kHierarchical: return "hierarchical";
    case CsitMode::kCentralizedIdeal: return "centralized-ideal";
  }
  return "distributed";
}

CsitMode csit_mode_from_string(const std::string& s) {
  if (s == "distributed") return CsitMode::kDistributed;
  if (s == "hierarchical") return CsitMode::kHierarchical;
  if (s == "centralized-ideal") return CsitMode::kCentralizedIdeal;
  throw ConfigError("csit_mode",
                    "csit_mode must be one of distributed, hierarchical, "
                    "centralized-ideal; got \"" + s + "\"");
}

std::size_t ScenarioConfig::total_antennas() const {
  std::size_t n = 0;
  for (auto v : N) n += v;
  return n;
}

std::size_t ScenarioConfig::antenna_offset(std::size_t tx) const {
  std::size_t off = 0;
  for (std::size_t j = 0; j < tx; ++j) off += N[j];
  return off;
}

void ScenarioConfig::validate() const {
  if (M < 1) throw ConfigError("M", "M must be at least 1");
  if (K < 1) throw ConfigError("K", "K must be at least 1");
  if (N.size() != M)
    throw ConfigError("N", "N must list one antenna count per TX (" +
                               std::to_string(M) + " entries)");
  for (auto n : N)
    if (n < 1) throw ConfigError("N", "antenna counts must be positive");
  if (alphas.size() != M)
    throw ConfigError("alphas", "alphas must list one exponent per TX (" +
                                    std::to_string(M) + " entries)");
  if (alphas.front() > 1.0)
    throw ConfigError("alphas", "accuracy exponents must not exceed 1");
  if (alphas.back() < 0.0)
    throw ConfigError("alphas", "accuracy exponents must be nonnegative");
  for (std::size_t j = 1; j < M; ++j)
    if (!(alphas[j - 1] > alphas[j]))
      throw ConfigError("alphas", "accuracy exponents must be strictly "
                                  "decreasing across TXs");
  if (total_antennas() < K)
    throw ConfigError("N", "total antenna count must be at least K");
  if (snr_grid_db.empty())
    throw ConfigError("snr_grid_db", "SNR grid must not be empty");
  for (double s : snr_grid_db)
    if (s < 0.0)
      throw ConfigError("snr_grid_db",
                        "SNR points below 0 dB leave the model's validity "
                        "range (noise scale would exceed 1)");
  if (trials < 1) throw ConfigError("trials", "trials must be at least 1");
  if (alpha_q < 0.0) throw ConfigError("alpha_q", "alpha_q must be nonnegative");
  if (alpha_mu < 0.0)
    throw ConfigError("alpha_mu", "alpha_mu must be nonnegative");
}

void ScenarioConfig::validate_for_cdzf() const {
  validate();
  if (!(alpha_q > 0.0) || !(alpha_q < alphas.back()))
    throw ConfigError("alpha_q",
                      "quantize-and-correct runs require 0 < alpha_q < the "
                      "smallest accuracy exponent");
  if (!(alpha_mu > 0.0) || !(alpha_mu < alpha_q))
    throw ConfigError("alpha_mu",
                      "quantize-and-correct runs require 0 < alpha_mu < alpha_q");
  if (N[0] + 1 < K)
    throw ConfigError("N", "the best-informed TX needs at least K-1 antennas");
}

namespace {

using nlohmann::json;

const char* const kKnownKeys[] = {"M",       "K",        "N",
                                  "alphas",  "alpha_q",  "alpha_mu",
                                  "snr_grid_db", "trials", "seed",
                                  "csit_mode"};

void require_key(const json& j, const char* key) {
  if (!j.contains(key))
    throw ConfigError(key, std::string("missing required field \"") + key + "\"");
}

}  // namespace

ScenarioConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("", "config root must be a JSON object");

  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kKnownKeys) known = known || (it.key() == k);
    if (!known)
      throw ConfigError(it.key(), "unknown config field \"" + it.key() + "\"");
  }
  for (const char* k : kKnownKeys) require_key(j, k);

  ScenarioConfig cfg;
  try {
    cfg.M = j.at("M").get<std::size_t>();
    cfg.K = j.at("K").get<std::size_t>();
    cfg.N = j.at("N").get<std::vector<std::size_t>>();
    cfg.alphas = j.at("alphas").get<std::vector<double>>();
    cfg.alpha_q = j.at("alpha_q").get<double>();
    cfg.alpha_mu = j.at("alpha_mu").get<double>();
    cfg.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
    cfg.trials = j.at("trials").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError("", std::string("config field has wrong type: ") + e.what());
  }
  cfg.csit_mode = csit_mode_from_string(j.at("csit_mode").get<std::string>());
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

std::string config_to_json_text(const ScenarioConfig& cfg) {
  json j;
  j["M"] = cfg.M;
  j["K"] = cfg.K;
  j["N"] = cfg.N;
  j["alphas"] = cfg.alphas;
  j["alpha_q"] = cfg.alpha_q;
  j["alpha_mu"] = cfg.alpha_mu;
  j["snr_grid_db"] = cfg.snr_grid_db;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["csit_mode"] = to_string(cfg.csit_mode);
  return j.dump(2);
}

ChannelRealization generate(const ScenarioConfig& cfg, RngStream& rng,
                            double snr_linear) {
  if (!(snr_linear >= 1.0))
    throw ConfigError("snr_grid_db",
                      "transmit power below 0 dB leaves the estimation model's "
                      "validity range");
  const std::size_t nt = cfg.total_antennas();
  const double pbar = std::sqrt(snr_linear);

  ChannelRealization out;
  out.snr_linear = snr_linear;
  out.H = sample_cgauss(rng, cfg.K, nt, 1.0);
  out.zbar.resize(cfg.M);
  out.zbreve.resize(cfg.M);
  out.noise.reserve(cfg.M);
  out.est.reserve(cfg.M);
  for (std::size_t jx = 0; jx < cfg.M; ++jx) {
    const double z = std::pow(pbar, -cfg.alphas[jx]);
    const double zb = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.zbar[jx] = z;
    out.zbreve[jx] = zb;
    out.noise.push_back(sample_cgauss(rng, cfg.K, nt, 1.0));
    out.est.push_back(add(scale(out.H, cx{zb, 0.0}),
                          scale(out.noise.back(), cx{z, 0.0})));
  }
  if (cfg.csit_mode == CsitMode::kCentralizedIdeal) {
    for (std::size_t jx = 1; jx < cfg.M; ++jx) out.est[jx] = out.est[0];
  }
  return out;
}

double quantizer_step(double snr_linear, double alpha_q) {
  return std::pow(std::sqrt(snr_linear), -alpha_q);
}

double quantize_uniform(double x, double q) {
  return q * std::floor(x / q + 0.5);
}

CMat quantize_matrix(const CMat& a, double q) {
  CMat out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cx v = a.data()[i];
    out.data()[i] = cx{quantize_uniform(v.real(), q),
                       quantize_uniform(v.imag(), q)};
  }
  return out;
}

long long lattice_index(double x, double q) { return std::llround(x / q); }

bool lattice_equal(const CMat& a, const CMat& b, double q) {
  if (!a.same_shape(b)) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (lattice_index(a.data()[i].real(), q) !=
        lattice_index(b.data()[i].real(), q))
      return false;
    if (lattice_index(a.data()[i].imag(), q) !=
        lattice_index(b.data()[i].imag(), q))
      return false;
  }
  return true;
}

std::vector<CMat> hierarchical_view(const ChannelRealization& real,
                                    std::size_t tx) {
  if (tx >= real.est.size())
    throw DimensionError("hierarchical_view: TX index out of range");
  return {real.est.begin() + static_cast<std::ptrdiff_t>(tx), real.est.end()};
}

}  // namespace netmiso
