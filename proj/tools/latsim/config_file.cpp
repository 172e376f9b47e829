#include "config_file.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "latsim/errors.hpp"
#include "latsim/version.hpp"

namespace latsim::cli {

namespace {

struct KeyInfo {
  const char* section;
  const char* key;
};

// Every accepted key, with its home section. Keys are globally unique so the
// LATSIM_<KEY> environment override needs no section prefix.
const std::vector<KeyInfo>& schema() {
  static const std::vector<KeyInfo> keys = {
      {"radio", "noise_power"},    {"radio", "noise_power_db"},
      {"radio", "pu_rx_power"},    {"radio", "pu_rx_power_db"},
      {"radio", "tx_power"},       {"radio", "tx_power_db"},
      {"radio", "link_gain"},      {"radio", "su_link_snr"},
      {"radio", "su_link_snr_db"},
      {"rsi", "chi_sq"},           {"rsi", "chi_sq_db"},
      {"rsi", "rsi_family"},       {"rsi", "rician_k"},
      {"traffic", "p_idle_to_busy"},
      {"traffic", "p_busy_to_idle"},
      {"sensing", "n_samples_per_slot"},
      {"sensing", "pd_target"},
      {"sim", "n_slots"},          {"sim", "seed"},
      {"sim", "warmup_slots"},     {"sim", "thin_trace"},
      {"protocol", "protocol"},
      {"lbt", "sensing_fraction"},
      {"dsa", "n_nodes"},          {"dsa", "backoff_window"},
      {"dsa", "packet_len"},       {"dsa", "fd_abort"},
      {"dsa", "su_rx_power"},      {"dsa", "su_rx_power_db"},
      {"sweep", "tx_power_min"},   {"sweep", "tx_power_min_db"},
      {"sweep", "tx_power_max"},   {"sweep", "tx_power_max_db"},
      {"sweep", "grid_points"},    {"sweep", "chi_sq_list"},
      {"sweep", "chi_sq_db_list"}, {"sweep", "tau_list"},
  };
  return keys;
}

const KeyInfo* find_key(const std::string& key) {
  for (const KeyInfo& k : schema()) {
    if (key == k.key) return &k;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string to_upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_ini(const std::string& text) {
  KeyValues values;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        std::ostringstream os;
        os << "config line " << line_no << ": malformed section header '" << line << "'";
        throw ConfigError(os.str());
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "config line " << line_no << ": expected 'key = value', got '" << line << "'";
      throw ConfigError(os.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section == "meta") continue;  // manifest provenance, not configuration
    const KeyInfo* info = find_key(key);
    if (info == nullptr) {
      std::ostringstream os;
      os << "config line " << line_no << ": unknown key '" << key << "'";
      throw ConfigError(os.str());
    }
    if (!section.empty() && section != info->section) {
      std::ostringstream os;
      os << "config line " << line_no << ": key '" << key << "' belongs to section ["
         << info->section << "], found in [" << section << "]";
      throw ConfigError(os.str());
    }
    if (values.count(key) != 0) {
      std::ostringstream os;
      os << "config line " << line_no << ": duplicate key '" << key << "'";
      throw ConfigError(os.str());
    }
    values[key] = value;
  }
  return values;
}

void apply_env_overrides(KeyValues& values) {
  for (const KeyInfo& k : schema()) {
    const std::string var = "LATSIM_" + to_upper(k.key);
    if (const char* v = std::getenv(var.c_str())) {
      values[k.key] = v;
    }
  }
}

double parse_f64(const std::string& key, const std::string& raw) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + raw + "' is not a number");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& raw) {
  try {
    if (!raw.empty() && raw.front() == '-') throw std::invalid_argument("negative");
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + raw + "' is not a non-negative integer");
  }
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string v = to_upper(raw);
  if (v == "TRUE" || v == "1" || v == "YES" || v == "ON") return true;
  if (v == "FALSE" || v == "0" || v == "NO" || v == "OFF") return false;
  throw ConfigError(key + ": '" + raw + "' is not a boolean (true/false)");
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::istringstream in(raw);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key + ": empty element in list '" + raw + "'");
    out.push_back(parse_f64(key, item));
  }
  if (out.empty()) throw ConfigError(key + ": list must not be empty");
  return out;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Reads a power-like quantity accepted in linear or dB form.
struct Resolver {
  const KeyValues& values;

  bool has(const std::string& key) const { return values.count(key) != 0; }

  void set_f64(double& target, const std::string& key) const {
    if (has(key)) target = parse_f64(key, values.at(key));
  }

  void set_power(double& target, const std::string& key) const {
    const std::string db_key = key + "_db";
    if (has(key) && has(db_key)) {
      throw ConfigError("conflicting keys '" + key + "' and '" + db_key +
                        "': give the value in one form only");
    }
    if (has(key)) {
      target = parse_f64(key, values.at(key));
    } else if (has(db_key)) {
      target = db_to_linear(parse_f64(db_key, values.at(db_key)));
    }
  }

  void set_u64(std::uint64_t& target, const std::string& key) const {
    if (has(key)) target = parse_u64(key, values.at(key));
  }

  void set_u32(std::uint32_t& target, const std::string& key) const {
    if (has(key)) {
      const std::uint64_t v = parse_u64(key, values.at(key));
      if (v > 0xFFFFFFFFull) throw ConfigError(key + ": value too large");
      target = static_cast<std::uint32_t>(v);
    }
  }

  void set_size(std::size_t& target, const std::string& key) const {
    if (has(key)) target = static_cast<std::size_t>(parse_u64(key, values.at(key)));
  }

  void set_bool(bool& target, const std::string& key) const {
    if (has(key)) target = parse_bool(key, values.at(key));
  }
};

}  // namespace

ResolvedConfig resolve_config_text(const std::string& text) {
  KeyValues values = parse_ini(text);
  apply_env_overrides(values);
  const Resolver r{values};

  ResolvedConfig out;
  ScenarioConfig& sc = out.scenario;
  SweepSpec& sw = out.sweep;

  r.set_power(sc.radio.noise_power, "noise_power");
  r.set_power(sc.radio.pu_rx_power, "pu_rx_power");
  r.set_power(sc.radio.tx_power, "tx_power");
  r.set_f64(sc.radio.link_gain, "link_gain");

  r.set_power(sc.rsi.chi_sq, "chi_sq");
  if (r.has("rsi_family")) {
    const std::string fam = to_upper(values.at("rsi_family"));
    if (fam == "GAUSSIAN") {
      sc.rsi.family = RsiFamily::Gaussian;
    } else if (fam == "RAYLEIGH") {
      sc.rsi.family = RsiFamily::Rayleigh;
    } else if (fam == "RICIAN") {
      sc.rsi.family = RsiFamily::Rician;
    } else {
      throw ConfigError("rsi_family: '" + values.at("rsi_family") +
                        "' is not one of gaussian, rayleigh, rician");
    }
  }
  r.set_f64(sc.rsi.rician_k, "rician_k");

  r.set_f64(sc.traffic.p_idle_to_busy, "p_idle_to_busy");
  r.set_f64(sc.traffic.p_busy_to_idle, "p_busy_to_idle");

  r.set_u32(sc.n_samples_per_slot, "n_samples_per_slot");
  r.set_f64(sc.pd_target, "pd_target");

  r.set_u64(sc.n_slots, "n_slots");
  r.set_u64(sc.seed, "seed");
  r.set_u64(sc.warmup_slots, "warmup_slots");
  r.set_bool(sc.thin_trace, "thin_trace");

  if (r.has("protocol")) {
    const std::string proto = to_upper(values.at("protocol"));
    if (proto == "LAT") {
      sc.protocol.kind = ProtocolKind::Lat;
    } else if (proto == "LBT") {
      sc.protocol.kind = ProtocolKind::Lbt;
    } else if (proto == "DSA") {
      sc.protocol.kind = ProtocolKind::Dsa;
    } else {
      throw ConfigError("protocol: '" + values.at("protocol") + "' is not one of lat, lbt, dsa");
    }
  }
  r.set_f64(sc.protocol.lbt.sensing_fraction, "sensing_fraction");
  r.set_u32(sc.protocol.dsa.n_nodes, "n_nodes");
  r.set_u32(sc.protocol.dsa.backoff_window, "backoff_window");
  r.set_u32(sc.protocol.dsa.packet_len, "packet_len");
  r.set_bool(sc.protocol.dsa.fd_abort, "fd_abort");

  // Derived defaults: the SU data-link SNR follows the transmit power unless
  // pinned, and SU-to-SU received power mirrors the PU's unless pinned.
  if (r.has("su_link_snr") || r.has("su_link_snr_db")) {
    r.set_power(sc.radio.su_link_snr, "su_link_snr");
  } else {
    sc.radio.su_link_snr = sc.radio.link_gain * sc.radio.tx_power / sc.radio.noise_power;
  }
  if (r.has("su_rx_power") || r.has("su_rx_power_db")) {
    r.set_power(sc.protocol.dsa.su_rx_power, "su_rx_power");
  } else {
    sc.protocol.dsa.su_rx_power = sc.radio.pu_rx_power;
  }

  r.set_power(sw.tx_power_min, "tx_power_min");
  r.set_power(sw.tx_power_max, "tx_power_max");
  r.set_size(sw.grid_points, "grid_points");
  if (r.has("chi_sq_list") && r.has("chi_sq_db_list")) {
    throw ConfigError("conflicting keys 'chi_sq_list' and 'chi_sq_db_list': give one form only");
  }
  if (r.has("chi_sq_list")) {
    sw.chi_sq_list = parse_list("chi_sq_list", values.at("chi_sq_list"));
  } else if (r.has("chi_sq_db_list")) {
    sw.chi_sq_list = parse_list("chi_sq_db_list", values.at("chi_sq_db_list"));
    for (double& v : sw.chi_sq_list) v = db_to_linear(v);
  }
  if (r.has("tau_list")) sw.tau_list = parse_list("tau_list", values.at("tau_list"));

  // Cross-field validation; messages name the offending key.
  sc.validate();
  sc.protocol.lbt.validate();
  sc.protocol.dsa.validate();
  for (const double chi : sw.chi_sq_list) {
    if (!(std::isfinite(chi) && chi >= 0.0)) {
      throw ConfigError("chi_sq_list: entries must be finite and >= 0");
    }
  }
  for (const double tau : sw.tau_list) {
    if (!(tau > 0.0 && tau < 1.0)) {
      std::ostringstream os;
      os << "tau_list: value " << tau << " out of range (0, 1)";
      throw ConfigError(os.str());
    }
  }
  if (!(sw.tx_power_min > 0.0)) throw ConfigError("tx_power_min: must be > 0");
  if (!(sw.tx_power_max >= sw.tx_power_min)) {
    throw ConfigError("tx_power_max: must be >= tx_power_min");
  }
  if (sw.grid_points < 1) throw ConfigError("grid_points: must be >= 1");
  if (sc.warmup_slots >= sc.n_slots) {
    std::ostringstream os;
    os << "warmup_slots: value " << sc.warmup_slots << " must be < n_slots (" << sc.n_slots
       << ")";
    throw ConfigError(os.str());
  }
  return out;
}

ResolvedConfig load_config(const std::string& path) {
  if (path.empty()) return resolve_config_text("");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return resolve_config_text(buf.str());
}

namespace {

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string exact_list(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i > 0) out += ", ";
    out += exact(vs[i]);
  }
  return out;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* protocol_name(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::Lat:
      return "lat";
    case ProtocolKind::Lbt:
      return "lbt";
    case ProtocolKind::Dsa:
      return "dsa";
  }
  return "lat";
}

const char* family_name(RsiFamily family) {
  switch (family) {
    case RsiFamily::Gaussian:
      return "gaussian";
    case RsiFamily::Rayleigh:
      return "rayleigh";
    case RsiFamily::Rician:
      return "rician";
  }
  return "gaussian";
}

}  // namespace

std::string render_manifest(const ResolvedConfig& config, const ManifestMeta& meta) {
  const ScenarioConfig& sc = config.scenario;
  const SweepSpec& sw = config.sweep;
  std::ostringstream os;
  os << "# latsim run manifest; re-run with: latsim " << meta.command
     << " --config <this file> --out <dir>\n";
  os << "[meta]\n";
  os << "version = " << kVersion << "\n";
  os << "command = " << meta.command << "\n";
  os << "created_utc = " << utc_now() << "\n";
  os << "source_config = " << (meta.source_config.empty() ? "(defaults)" : meta.source_config)
     << "\n";
  os << "out_dir = " << meta.out_dir << "\n";
  os << "\n[radio]\n";
  os << "noise_power = " << exact(sc.radio.noise_power) << "\n";
  os << "pu_rx_power = " << exact(sc.radio.pu_rx_power) << "\n";
  os << "tx_power = " << exact(sc.radio.tx_power) << "\n";
  os << "link_gain = " << exact(sc.radio.link_gain) << "\n";
  os << "su_link_snr = " << exact(sc.radio.su_link_snr) << "\n";
  os << "\n[rsi]\n";
  os << "chi_sq = " << exact(sc.rsi.chi_sq) << "\n";
  os << "rsi_family = " << family_name(sc.rsi.family) << "\n";
  os << "rician_k = " << exact(sc.rsi.rician_k) << "\n";
  os << "\n[traffic]\n";
  os << "p_idle_to_busy = " << exact(sc.traffic.p_idle_to_busy) << "\n";
  os << "p_busy_to_idle = " << exact(sc.traffic.p_busy_to_idle) << "\n";
  os << "\n[sensing]\n";
  os << "n_samples_per_slot = " << sc.n_samples_per_slot << "\n";
  os << "pd_target = " << exact(sc.pd_target) << "\n";
  os << "\n[sim]\n";
  os << "n_slots = " << sc.n_slots << "\n";
  os << "seed = " << sc.seed << "\n";
  os << "warmup_slots = " << sc.warmup_slots << "\n";
  os << "thin_trace = " << (sc.thin_trace ? "true" : "false") << "\n";
  os << "\n[protocol]\n";
  os << "protocol = " << protocol_name(sc.protocol.kind) << "\n";
  os << "\n[lbt]\n";
  os << "sensing_fraction = " << exact(sc.protocol.lbt.sensing_fraction) << "\n";
  os << "\n[dsa]\n";
  os << "n_nodes = " << sc.protocol.dsa.n_nodes << "\n";
  os << "backoff_window = " << sc.protocol.dsa.backoff_window << "\n";
  os << "packet_len = " << sc.protocol.dsa.packet_len << "\n";
  os << "fd_abort = " << (sc.protocol.dsa.fd_abort ? "true" : "false") << "\n";
  os << "su_rx_power = " << exact(sc.protocol.dsa.su_rx_power) << "\n";
  os << "\n[sweep]\n";
  os << "tx_power_min = " << exact(sw.tx_power_min) << "\n";
  os << "tx_power_max = " << exact(sw.tx_power_max) << "\n";
  os << "grid_points = " << sw.grid_points << "\n";
  os << "chi_sq_list = " << exact_list(sw.chi_sq_list) << "\n";
  os << "tau_list = " << exact_list(sw.tau_list) << "\n";
  return os.str();
}

}  // namespace latsim::cli
