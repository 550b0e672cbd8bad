// Copyright 2026 The CRE Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cre/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string_view>
#include <vector>

#include "cre/error.h"

namespace cre {
namespace {

double ParseDouble(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, key + ": expected a number, got '" + text + "'");
  }
}

long long ParseInt(const std::string& key, const std::string& text) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParse, key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

bool ParseBool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw Error(ErrorCode::kParse, key + ": expected true/false, got '" + text + "'");
}

std::string FormatDouble(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

struct KeySpec {
  const char* section;
  const char* key;
  std::function<void(RawConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RawConfig&)> get;
};

#define CRE_DOUBLE_KEY(sec, name, field)                                       \
  KeySpec {                                                                    \
    sec, name,                                                                 \
        [](RawConfig& c, const std::string& k, const std::string& v) {         \
          c.field = ParseDouble(k, v);                                         \
        },                                                                     \
        [](const RawConfig& c) { return FormatDouble(c.field); }               \
  }
#define CRE_INT_KEY(sec, name, field)                                          \
  KeySpec {                                                                    \
    sec, name,                                                                 \
        [](RawConfig& c, const std::string& k, const std::string& v) {         \
          c.field = static_cast<decltype(c.field)>(ParseInt(k, v));            \
        },                                                                     \
        [](const RawConfig& c) { return std::to_string(c.field); }             \
  }

const std::vector<KeySpec>& KeyTable() {
  static const std::vector<KeySpec> table = {
      CRE_INT_KEY("network", "num_clients", num_clients),
      CRE_INT_KEY("network", "num_channels", num_channels),
      CRE_DOUBLE_KEY("network", "cell_radius_m", cell_radius_m),
      CRE_DOUBLE_KEY("network", "carrier_freq_GHz", carrier_freq_ghz),
      KeySpec{"network", "downlink_rate_rule",
              [](RawConfig& c, const std::string& k, const std::string& v) {
                if (v == "min") {
                  c.downlink_rule = DownlinkRule::kMin;
                } else if (v == "max") {
                  c.downlink_rule = DownlinkRule::kMax;
                } else {
                  throw Error(ErrorCode::kParse, k + ": expected min or max");
                }
              },
              [](const RawConfig& c) {
                return std::string(c.downlink_rule == DownlinkRule::kMin ? "min" : "max");
              }},

      CRE_DOUBLE_KEY("radio", "p_down_W", p_down_w),
      CRE_DOUBLE_KEY("radio", "p_max_W", p_max_w),
      CRE_DOUBLE_KEY("radio", "B_down_Hz", b_down_hz),
      CRE_DOUBLE_KEY("radio", "B_up_Hz", b_up_hz),
      CRE_DOUBLE_KEY("radio", "N0_dBm_per_Hz", n0_dbm_per_hz),
      CRE_DOUBLE_KEY("radio", "antenna_gain_dB", antenna_gain_db),
      CRE_DOUBLE_KEY("radio", "rician_K", rician_k),
      CRE_DOUBLE_KEY("radio", "rician_sigma", rician_sigma),

      CRE_DOUBLE_KEY("compute", "model_bits", model_bits),
      CRE_DOUBLE_KEY("compute", "cycles_per_sample", cycles_per_sample),
      CRE_DOUBLE_KEY("compute", "cpu_freq_Hz", cpu_freq_hz),
      CRE_DOUBLE_KEY("compute", "energy_coeff", energy_coeff),
      CRE_DOUBLE_KEY("compute", "E_add_J", e_add_j),
      CRE_DOUBLE_KEY("compute", "T_max_s", t_max_s),

      CRE_DOUBLE_KEY("learning", "eta", eta),
      CRE_INT_KEY("learning", "rounds", rounds),
      CRE_INT_KEY("learning", "tau_fixed", tau_fixed),
      CRE_INT_KEY("learning", "num_classes", num_classes),
      CRE_INT_KEY("learning", "feature_dim", feature_dim),
      CRE_DOUBLE_KEY("learning", "class_separation", class_separation),
      CRE_DOUBLE_KEY("learning", "mean_dataset_size", mean_dataset_size),
      CRE_DOUBLE_KEY("learning", "dataset_size_std", dataset_size_std),
      CRE_DOUBLE_KEY("learning", "non_iid_degree", non_iid_degree),
      CRE_DOUBLE_KEY("learning", "test_fraction", test_fraction),
      KeySpec{"learning", "running_max_rho_beta",
              [](RawConfig& c, const std::string& k, const std::string& v) {
                c.running_max_rho_beta = ParseBool(k, v);
              },
              [](const RawConfig& c) {
                return std::string(c.running_max_rho_beta ? "true" : "false");
              }},

      CRE_DOUBLE_KEY("solver", "V", v),
      CRE_DOUBLE_KEY("solver", "objective_energy_unit_J", objective_energy_unit_j),
      CRE_DOUBLE_KEY("solver", "eps_p", eps_p),
      CRE_DOUBLE_KEY("solver", "eps_tau", eps_tau),
      KeySpec{"solver", "sa_temp",
              [](RawConfig& c, const std::string& k, const std::string& v) {
                if (v == "auto") {
                  c.sa_temp.reset();
                } else {
                  c.sa_temp = ParseDouble(k, v);
                }
              },
              [](const RawConfig& c) {
                return c.sa_temp ? FormatDouble(*c.sa_temp) : std::string("auto");
              }},
      CRE_DOUBLE_KEY("solver", "sa_decay", sa_decay),
      CRE_INT_KEY("solver", "sa_iters", sa_iters),
      CRE_INT_KEY("solver", "inner_max_iters", inner_max_iters),

      CRE_INT_KEY("run", "seed", seed),
  };
  return table;
}

#undef CRE_DOUBLE_KEY
#undef CRE_INT_KEY

void RequirePositive(const char* name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::kNonPositiveParameter,
                std::string(name) + " must be positive, got " + FormatDouble(v));
  }
}

void RequireFraction(const char* name, double v, bool open_low, bool open_high) {
  bool ok = (open_low ? v > 0.0 : v >= 0.0) && (open_high ? v < 1.0 : v <= 1.0);
  if (!ok) {
    throw Error(ErrorCode::kInvalidFraction,
                std::string(name) + " out of range, got " + FormatDouble(v));
  }
}

}  // namespace

double DbToLinear(double db) { return std::pow(10.0, db / 10.0); }

double DbmPerHzToWattPerHz(double dbm_per_hz) {
  return std::pow(10.0, (dbm_per_hz - 30.0) / 10.0);
}

SystemConfig ValidateConfig(const RawConfig& raw) {
  if (raw.num_clients < 1 || raw.num_channels < 1) {
    throw Error(ErrorCode::kDegenerateTopology,
                "need at least one client and one channel");
  }
  RequirePositive("cell_radius_m", raw.cell_radius_m);
  RequirePositive("carrier_freq_GHz", raw.carrier_freq_ghz);
  RequirePositive("p_down_W", raw.p_down_w);
  RequirePositive("p_max_W", raw.p_max_w);
  RequirePositive("B_down_Hz", raw.b_down_hz);
  RequirePositive("B_up_Hz", raw.b_up_hz);
  RequirePositive("rician_K", raw.rician_k);
  RequirePositive("rician_sigma", raw.rician_sigma);
  RequirePositive("model_bits", raw.model_bits);
  RequirePositive("cycles_per_sample", raw.cycles_per_sample);
  RequirePositive("cpu_freq_Hz", raw.cpu_freq_hz);
  RequirePositive("energy_coeff", raw.energy_coeff);
  RequirePositive("E_add_J", raw.e_add_j);
  RequirePositive("T_max_s", raw.t_max_s);
  RequirePositive("eta", raw.eta);
  RequirePositive("class_separation", raw.class_separation);
  RequirePositive("mean_dataset_size", raw.mean_dataset_size);
  RequirePositive("objective_energy_unit_J", raw.objective_energy_unit_j);
  RequirePositive("eps_p", raw.eps_p);
  RequirePositive("eps_tau", raw.eps_tau);
  if (raw.sa_temp) RequirePositive("sa_temp", *raw.sa_temp);
  if (raw.tau_fixed < 1) RequirePositive("tau_fixed", 0.0);
  if (raw.sa_iters < 1) RequirePositive("sa_iters", 0.0);
  if (raw.inner_max_iters < 1) RequirePositive("inner_max_iters", 0.0);
  if (raw.num_classes < 2) RequirePositive("num_classes - 1", raw.num_classes - 1);
  if (raw.feature_dim < 1) RequirePositive("feature_dim", raw.feature_dim);
  if (raw.rounds < 0) {
    throw Error(ErrorCode::kNonPositiveParameter, "rounds must be >= 0");
  }
  if (!(raw.dataset_size_std >= 0.0)) {
    throw Error(ErrorCode::kNonPositiveParameter, "dataset_size_std must be >= 0");
  }
  if (!(raw.v >= 0.0) || !std::isfinite(raw.v)) {
    throw Error(ErrorCode::kNonPositiveParameter, "V must be >= 0");
  }
  RequireFraction("sa_decay", raw.sa_decay, true, true);
  RequireFraction("non_iid_degree", raw.non_iid_degree, false, false);
  RequireFraction("test_fraction", raw.test_fraction, false, true);

  SystemConfig cfg;
  cfg.num_clients = raw.num_clients;
  cfg.num_channels = raw.num_channels;
  cfg.cell_radius_m = raw.cell_radius_m;
  cfg.carrier_freq_ghz = raw.carrier_freq_ghz;
  cfg.downlink_rule = raw.downlink_rule;
  cfg.p_down = raw.p_down_w;
  cfg.p_max = raw.p_max_w;
  cfg.b_down = raw.b_down_hz;
  cfg.b_up = raw.b_up_hz;
  cfg.n0 = DbmPerHzToWattPerHz(raw.n0_dbm_per_hz);
  cfg.antenna_gain = DbToLinear(raw.antenna_gain_db);
  cfg.rician_k = raw.rician_k;
  cfg.rician_sigma = raw.rician_sigma;
  cfg.model_bits = raw.model_bits;
  cfg.cycles_per_sample = raw.cycles_per_sample;
  cfg.cpu_freq = raw.cpu_freq_hz;
  cfg.energy_coeff = raw.energy_coeff;
  cfg.e_add = raw.e_add_j;
  cfg.t_max = raw.t_max_s;
  cfg.eta = raw.eta;
  cfg.rounds = raw.rounds;
  cfg.tau_fixed = raw.tau_fixed;
  cfg.num_classes = raw.num_classes;
  cfg.feature_dim = raw.feature_dim;
  cfg.class_separation = raw.class_separation;
  cfg.mean_dataset_size = raw.mean_dataset_size;
  cfg.dataset_size_std = raw.dataset_size_std;
  cfg.non_iid_degree = raw.non_iid_degree;
  cfg.test_fraction = raw.test_fraction;
  cfg.running_max_rho_beta = raw.running_max_rho_beta;
  cfg.v = raw.v;
  cfg.objective_energy_unit = raw.objective_energy_unit_j;
  cfg.eps_p = raw.eps_p;
  cfg.eps_tau = raw.eps_tau;
  cfg.sa_temp = raw.sa_temp;
  cfg.sa_decay = raw.sa_decay;
  cfg.sa_iters = raw.sa_iters;
  cfg.inner_max_iters = raw.inner_max_iters;
  cfg.seed = raw.seed;
  return cfg;
}

RawConfig ParseConfig(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  RawConfig raw;
  const auto& table = KeyTable();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw Error(ErrorCode::kUnknownKey, "key '" + section + "' outside a section");
    }
    for (const auto& [key, value] : body) {
      const KeySpec* spec = nullptr;
      for (const auto& s : table) {
        if (section == s.section && key == s.key) {
          spec = &s;
          break;
        }
      }
      if (spec == nullptr) {
        throw Error(ErrorCode::kUnknownKey, "[" + section + "] " + key);
      }
      spec->set(raw, section + "." + key, value.data());
    }
  }
  return raw;
}

RawConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path);
  return ParseConfig(in);
}

void WriteConfig(std::ostream& out, const RawConfig& raw) {
  std::string current;
  for (const auto& spec : KeyTable()) {
    if (current != spec.section) {
      if (!current.empty()) out << "\n";
      current = spec.section;
      out << "[" << current << "]\n";
    }
    out << spec.key << " = " << spec.get(raw) << "\n";
  }
}

std::uint64_t ConfigHash(const RawConfig& raw) {
  std::ostringstream os;
  WriteConfig(os, raw);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::kInvalidFraction: return "InvalidFraction";
    case ErrorCode::kDegenerateTopology: return "DegenerateTopology";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kEmptyParticipation: return "EmptyParticipation";
    case ErrorCode::kZeroRate: return "ZeroRate";
    case ErrorCode::kDegenerateStep: return "DegenerateStep";
    case ErrorCode::kStepSizeTooLarge: return "StepSizeTooLarge";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kInfeasibleLatency: return "InfeasibleLatency";
    case ErrorCode::kInfeasiblePower: return "InfeasiblePower";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kInvalidDegree: return "InvalidDegree";
    case ErrorCode::kTooManyClients: return "TooManyClients";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kUsage: return "Usage";
  }
  return "Unknown";
}

}  // namespace cre
