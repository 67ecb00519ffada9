#include "aimc/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace aimc {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::fr: return "fr";
    case Scheme::occ: return "occ";
    case Scheme::lm: return "lm";
    case Scheme::cactus: return "cactus";
    case Scheme::custom: return "custom";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ParseError("config: key '" + key + "' has a malformed number '" + v + "'");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ParseError("config: key '" + key + "' has a malformed integer '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ParseError("config: key '" + key + "' has a malformed integer '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError("config: key '" + key + "' expects true/false, got '" + v + "'");
}

Scheme parse_scheme(const std::string& v) {
  if (v == "fr") return Scheme::fr;
  if (v == "occ") return Scheme::occ;
  if (v == "lm") return Scheme::lm;
  if (v == "cactus") return Scheme::cactus;
  if (v == "custom") return Scheme::custom;
  throw ParseError("config: key 'scheme' must be fr|occ|lm|cactus|custom, got '" + v + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("config: line " + std::to_string(lineno) + " has no key");
    if (val.empty())
      throw ParseError("config: key '" + key + "' has no value");
    if (!seen.insert(key).second) throw ParseError("config: duplicate key '" + key + "'");

    if (key == "n") cfg.n = static_cast<int>(parse_long(key, val));
    else if (key == "distribution") {
      if (val != "binomial" && val != "pmf")
        throw ParseError("config: key 'distribution' must be binomial|pmf, got '" + val + "'");
      cfg.distribution = val;
    } else if (key == "p") cfg.p = parse_double(key, val);
    else if (key == "pmf_file") cfg.pmf_file = val;
    else if (key == "delta_imc") {
      if (val == "circuit") cfg.delta_imc_volts.reset();
      else cfg.delta_imc_volts = parse_double(key, val);
    } else if (key == "v_dd") cfg.circuit.v_dd = parse_double(key, val);
    else if (key == "c_cell") cfg.circuit.c_cell = parse_double(key, val);
    else if (key == "c_par") cfg.circuit.c_par = parse_double(key, val);
    else if (key == "sigma_cap_rel") cfg.circuit.sigma_cap_rel = parse_double(key, val);
    else if (key == "sigma_adc") cfg.circuit.sigma_adc = parse_double(key, val);
    else if (key == "b_adc") {
      const auto dots = val.find("..");
      if (dots == std::string::npos) {
        cfg.b_lo = cfg.b_hi = static_cast<int>(parse_long(key, val));
      } else {
        cfg.b_lo = static_cast<int>(parse_long(key, trim(val.substr(0, dots))));
        cfg.b_hi = static_cast<int>(parse_long(key, trim(val.substr(dots + 2))));
        if (cfg.b_lo > cfg.b_hi)
          throw ParseError("config: key 'b_adc' range is empty ('" + val + "')");
      }
    } else if (key == "scheme") cfg.scheme = parse_scheme(val);
    else if (key == "t1") cfg.custom_t1 = parse_double(key, val);
    else if (key == "delta_adc") cfg.custom_delta_adc = parse_double(key, val);
    else if (key == "n_samples") cfg.n_samples = parse_long(key, val);
    else if (key == "seed") cfg.seed = parse_u64(key, val);
    else if (key == "csnr_spec_db") cfg.csnr_spec_db = parse_double(key, val);
    else if (key == "grid_points") cfg.grid_points = static_cast<int>(parse_long(key, val));
    else if (key == "grid_t1_min") cfg.grid_t1_min = parse_double(key, val);
    else if (key == "grid_t1_max") cfg.grid_t1_max = parse_double(key, val);
    else if (key == "grid_tm_min") cfg.grid_tm_min = parse_double(key, val);
    else if (key == "grid_tm_max") cfg.grid_tm_max = parse_double(key, val);
    else if (key == "threads") cfg.threads = static_cast<int>(parse_long(key, val));
    else if (key == "empirical") cfg.empirical = parse_bool(key, val);
    else if (key == "debug_mu_off_bias") cfg.debug_mu_off_bias = parse_double(key, val);
    else throw ParseError("config: unknown key '" + key + "'");
  }
  if (cfg.n < 1) throw ParseError("config: key 'n' is required and must be >= 1");
  if (cfg.distribution == "pmf" && cfg.pmf_file.empty())
    throw ParseError("config: distribution = pmf requires key 'pmf_file'");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace aimc
