#ifndef IRS_SWIPT_CONFIG_HPP
#define IRS_SWIPT_CONFIG_HPP

#include "irs_swipt/numerics.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace irs_swipt {

enum class FadingG { AllOnesLoS, Rayleigh };
/// Which hop carries the IRS element gain.
enum class GainHop { IrsUser, ApIrs, Both };

/// Raised for malformed configuration; `key()` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error("config key '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct Geometry {
  double d_ap_irs = 15.0;
  double d_irs_ehr = 3.0;
  double d_ap_idr = 50.0;
  /// IRS-IDR distance; negative means derived (IDR on the perpendicular
  /// through the AP, so sqrt(d_ap_idr^2 + d_ap_irs^2)).
  double d_irs_idr = -1.0;

  /// EHRs sit on the AP-IRS segment.
  double d_ap_ehr() const { return d_ap_irs - d_irs_ehr; }
  double irs_idr() const {
    return d_irs_idr > 0.0 ? d_irs_idr : std::hypot(d_ap_idr, d_ap_irs);
  }
};

struct ExperimentConfig {
  int M = 4;
  int N = 50;
  int K_I = 2;
  int K_E = 2;
  double P = 1.0;                     // watts
  std::vector<double> gamma{10.0, 10.0};  // linear, per IDR
  std::vector<double> alpha{1.0, 1.0};    // per EHR
  std::vector<double> sigma2{1e-12, 1e-12};  // watts, per IDR
  Geometry geometry;
  FadingG fading_G = FadingG::AllOnesLoS;
  double irs_element_gain_db = 3.0;
  GainHop gain_hop = GainHop::IrsUser;
  double pathloss_ref_db = 30.0;
  double exp_ap_irs = 2.2;
  double exp_irs_user = 2.2;
  double exp_ap_user = 3.6;
  std::uint64_t seed = 1;

  // Algorithm controls.
  double eps = 1e-4;
  int wpt_max_iter = 100;
  int swipt_max_outer = 30;
  int randomization_samples = 1000;
  int phase_restarts = 0;      // extra random phase starts for solve_p2
  int infeasible_restarts = 5;  // random phase restarts when SDR1 is infeasible at start
  double rank_one_tol = 1e-6;
  double sdp_feas_tol = 1e-7;
  double sdp_gap_tol = 1e-7;
  int sdp_max_iter = 200;
  bool null_on_direct = false;

  /// Throws ConfigError on violations; returns non-fatal warnings.
  std::vector<std::string> validate() const {
    std::vector<std::string> warnings;
    if (M < 1) throw ConfigError("M", "must be >= 1");
    if (N < 0) throw ConfigError("N", "must be >= 0");
    if (K_I < 0) throw ConfigError("K_I", "must be >= 0");
    if (K_E < 0) throw ConfigError("K_E", "must be >= 0");
    if (!(P > 0.0)) throw ConfigError("P", "transmit power must be positive");
    if (static_cast<int>(gamma.size()) != K_I)
      throw ConfigError("gamma", "expected one target per IDR");
    for (double g : gamma)
      if (!(g > 0.0)) throw ConfigError("gamma", "SINR targets must be positive");
    if (static_cast<int>(sigma2.size()) != K_I)
      throw ConfigError("sigma2", "expected one noise power per IDR");
    for (double s : sigma2)
      if (!(s > 0.0)) throw ConfigError("sigma2", "noise power must be positive");
    if (static_cast<int>(alpha.size()) != K_E)
      throw ConfigError("alpha", "expected one weight per EHR");
    bool any_positive = false;
    for (double a : alpha) {
      if (a < 0.0) throw ConfigError("alpha", "weights must be nonnegative");
      any_positive = any_positive || a > 0.0;
    }
    if (K_E >= 1 && !any_positive)
      throw ConfigError("alpha", "at least one weight must be positive");
    if (geometry.d_ap_irs < 1.0) throw ConfigError("d_ap_irs_m", "must be >= 1 m");
    if (geometry.d_irs_ehr < 1.0) throw ConfigError("d_irs_ehr_m", "must be >= 1 m");
    if (geometry.d_ap_ehr() < 1.0)
      throw ConfigError("d_irs_ehr_m", "AP-EHR distance (d_ap_irs - d_irs_ehr) must be >= 1 m");
    if (geometry.d_ap_idr < 1.0) throw ConfigError("d_ap_idr_m", "must be >= 1 m");
    if (geometry.irs_idr() < 1.0) throw ConfigError("d_irs_idr_m", "must be >= 1 m");
    if (!(eps > 0.0)) throw ConfigError("eps", "must be positive");
    if (wpt_max_iter < 1) throw ConfigError("wpt_max_iter", "must be >= 1");
    if (swipt_max_outer < 1) throw ConfigError("swipt_max_outer", "must be >= 1");
    if (randomization_samples < 1) throw ConfigError("randomization_samples", "must be >= 1");
    for (auto [name, e] : {std::pair{"exp_ap_irs", exp_ap_irs},
                           std::pair{"exp_irs_user", exp_irs_user},
                           std::pair{"exp_ap_user", exp_ap_user}})
      if (e < 2.0)
        warnings.push_back(std::string("pathloss exponent ") + name + " below 2");
    return warnings;
  }

  /// Resize per-user vectors after K_I / K_E changed, repeating the first entry.
  void broadcast_user_vectors() {
    auto fit = [](std::vector<double>& v, int n, double fallback) {
      const double fill = v.empty() ? fallback : v.front();
      v.assign(static_cast<std::size_t>(std::max(n, 0)), fill);
    };
    if (static_cast<int>(gamma.size()) != K_I) fit(gamma, K_I, 10.0);
    if (static_cast<int>(sigma2.size()) != K_I) fit(sigma2, K_I, 1e-12);
    if (static_cast<int>(alpha.size()) != K_E) fit(alpha, K_E, 1.0);
  }
};

inline const char* to_string(FadingG f) {
  return f == FadingG::AllOnesLoS ? "los" : "rayleigh";
}

inline const char* to_string(GainHop h) {
  switch (h) {
    case GainHop::IrsUser: return "irs_user";
    case GainHop::ApIrs: return "ap_irs";
    case GainHop::Both: return "both";
  }
  return "?";
}

namespace detail {

inline std::vector<double> number_or_list(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(key, "array entries must be numbers");
      out.push_back(e.get<double>());
    }
    if (out.empty()) throw ConfigError(key, "array must not be empty");
    return out;
  }
  throw ConfigError(key, "expected a number or an array of numbers");
}

}  // namespace detail

/// Builds a config from a flat JSON object. Keys with a _dB/_dBm suffix are
/// converted to linear units here; internal units are watts and linear gains.
/// Scalar per-user entries are broadcast to all users.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "expected a flat JSON object");
  ExperimentConfig c;
  std::vector<double> gamma, alpha, sigma2;

  auto num = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    return v.get<double>();
  };
  auto integer = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    return v.get<long long>();
  };
  auto boolean = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
    return v.get<bool>();
  };
  auto str = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError(key, "expected a string");
    return v.get<std::string>();
  };

  bool have_power = false;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const auto& v = it.value();
    if (k == "M") c.M = static_cast<int>(integer(v, k));
    else if (k == "N") c.N = static_cast<int>(integer(v, k));
    else if (k == "K_I") c.K_I = static_cast<int>(integer(v, k));
    else if (k == "K_E") c.K_E = static_cast<int>(integer(v, k));
    else if (k == "P_W" || k == "P_dBm") {
      if (have_power) throw ConfigError(k, "give only one of P_W and P_dBm");
      have_power = true;
      c.P = k == "P_W" ? num(v, k) : numerics::dbm_to_watts(num(v, k));
    } else if (k == "gamma") {
      gamma = detail::number_or_list(v, k);
    } else if (k == "gamma_dB") {
      gamma = detail::number_or_list(v, k);
      for (auto& g : gamma) g = numerics::from_db(g);
    } else if (k == "alpha") {
      alpha = detail::number_or_list(v, k);
    } else if (k == "sigma2_W") {
      sigma2 = detail::number_or_list(v, k);
    } else if (k == "sigma2_dBm") {
      sigma2 = detail::number_or_list(v, k);
      for (auto& s : sigma2) s = numerics::dbm_to_watts(s);
    } else if (k == "d_ap_irs_m") c.geometry.d_ap_irs = num(v, k);
    else if (k == "d_irs_ehr_m") c.geometry.d_irs_ehr = num(v, k);
    else if (k == "d_ap_idr_m") c.geometry.d_ap_idr = num(v, k);
    else if (k == "d_irs_idr_m") c.geometry.d_irs_idr = num(v, k);
    else if (k == "fading_G") {
      const auto s = str(v, k);
      if (s == "los") c.fading_G = FadingG::AllOnesLoS;
      else if (s == "rayleigh") c.fading_G = FadingG::Rayleigh;
      else throw ConfigError(k, "expected \"los\" or \"rayleigh\"");
    } else if (k == "irs_element_gain_dB") c.irs_element_gain_db = num(v, k);
    else if (k == "irs_gain_hop") {
      const auto s = str(v, k);
      if (s == "irs_user") c.gain_hop = GainHop::IrsUser;
      else if (s == "ap_irs") c.gain_hop = GainHop::ApIrs;
      else if (s == "both") c.gain_hop = GainHop::Both;
      else throw ConfigError(k, "expected \"irs_user\", \"ap_irs\" or \"both\"");
    } else if (k == "pathloss_ref_dB") c.pathloss_ref_db = num(v, k);
    else if (k == "exp_ap_irs") c.exp_ap_irs = num(v, k);
    else if (k == "exp_irs_user") c.exp_irs_user = num(v, k);
    else if (k == "exp_ap_user") c.exp_ap_user = num(v, k);
    else if (k == "seed") {
      const auto s = integer(v, k);
      if (s < 0) throw ConfigError(k, "must be nonnegative");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (k == "eps") c.eps = num(v, k);
    else if (k == "wpt_max_iter") c.wpt_max_iter = static_cast<int>(integer(v, k));
    else if (k == "swipt_max_outer") c.swipt_max_outer = static_cast<int>(integer(v, k));
    else if (k == "randomization_samples") c.randomization_samples = static_cast<int>(integer(v, k));
    else if (k == "phase_restarts") c.phase_restarts = static_cast<int>(integer(v, k));
    else if (k == "infeasible_restarts") c.infeasible_restarts = static_cast<int>(integer(v, k));
    else if (k == "rank_one_tol") c.rank_one_tol = num(v, k);
    else if (k == "sdp_feas_tol") c.sdp_feas_tol = num(v, k);
    else if (k == "sdp_gap_tol") c.sdp_gap_tol = num(v, k);
    else if (k == "sdp_max_iter") c.sdp_max_iter = static_cast<int>(integer(v, k));
    else if (k == "null_on_direct") c.null_on_direct = boolean(v, k);
    else throw ConfigError(k, "unknown key");
  }

  auto per_user = [](std::vector<double> given, std::vector<double>& dst, int n,
                     const char* key) {
    if (given.empty()) return;
    if (given.size() == 1) {
      dst.assign(static_cast<std::size_t>(std::max(n, 0)), given.front());
    } else {
      if (static_cast<int>(given.size()) != n)
        throw ConfigError(key, "expected " + std::to_string(n) + " entries");
      dst = std::move(given);
    }
  };
  c.broadcast_user_vectors();
  per_user(gamma, c.gamma, c.K_I, "gamma");
  per_user(alpha, c.alpha, c.K_E, "alpha");
  per_user(sigma2, c.sigma2, c.K_I, "sigma2");
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<file>", std::string("parse error: ") + e.what());
  }
  return config_from_json(j);
}

/// Echo in the same flat key space the loader accepts (linear units).
inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  return {
      {"M", c.M},
      {"N", c.N},
      {"K_I", c.K_I},
      {"K_E", c.K_E},
      {"P_W", c.P},
      {"gamma", c.gamma},
      {"alpha", c.alpha},
      {"sigma2_W", c.sigma2},
      {"d_ap_irs_m", c.geometry.d_ap_irs},
      {"d_irs_ehr_m", c.geometry.d_irs_ehr},
      {"d_ap_idr_m", c.geometry.d_ap_idr},
      {"d_irs_idr_m", c.geometry.irs_idr()},
      {"fading_G", to_string(c.fading_G)},
      {"irs_element_gain_dB", c.irs_element_gain_db},
      {"irs_gain_hop", to_string(c.gain_hop)},
      {"pathloss_ref_dB", c.pathloss_ref_db},
      {"exp_ap_irs", c.exp_ap_irs},
      {"exp_irs_user", c.exp_irs_user},
      {"exp_ap_user", c.exp_ap_user},
      {"seed", c.seed},
      {"eps", c.eps},
      {"wpt_max_iter", c.wpt_max_iter},
      {"swipt_max_outer", c.swipt_max_outer},
      {"randomization_samples", c.randomization_samples},
      {"phase_restarts", c.phase_restarts},
      {"infeasible_restarts", c.infeasible_restarts},
      {"rank_one_tol", c.rank_one_tol},
      {"sdp_feas_tol", c.sdp_feas_tol},
      {"sdp_gap_tol", c.sdp_gap_tol},
      {"sdp_max_iter", c.sdp_max_iter},
      {"null_on_direct", c.null_on_direct},
  };
}

}  // namespace irs_swipt

#endif  // IRS_SWIPT_CONFIG_HPP
