#ifndef AIMC_CONFIG_HPP
#define AIMC_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "aimc/simulator.hpp"

namespace aimc {

/// Config syntax or schema violation (maps to exit code 2).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Scheme { fr, occ, lm, cactus, custom };

std::string to_string(Scheme s);

/// One run description, parsed from a flat `key = value` file. Unknown or
/// duplicate keys are hard errors so scripted sweeps cannot silently typo.
struct RunConfig {
  int n = 0;
  std::string distribution = "binomial";  // "binomial" | "pmf"
  double p = 0.25;
  std::string pmf_file;

  std::optional<double> delta_imc_volts;  // unset -> circuit law
  CircuitParams circuit;

  int b_lo = 0;  // b_adc; b_lo == b_hi for a single precision
  int b_hi = 0;

  std::optional<Scheme> scheme;
  std::optional<double> custom_t1;
  std::optional<double> custom_delta_adc;

  long n_samples = 500000;
  std::uint64_t seed = 0;
  std::optional<double> csnr_spec_db;

  int grid_points = 200;
  std::optional<double> grid_t1_min;
  std::optional<double> grid_t1_max;
  std::optional<double> grid_tm_min;
  std::optional<double> grid_tm_max;

  int threads = 1;
  bool empirical = false;
  double debug_mu_off_bias = 0.0;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace aimc

#endif
