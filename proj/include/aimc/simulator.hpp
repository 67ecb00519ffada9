#ifndef AIMC_SIMULATOR_HPP
#define AIMC_SIMULATOR_HPP

#include <cstdint>
#include <vector>

#include "aimc/dist.hpp"
#include "aimc/philox.hpp"
#include "aimc/quantizer.hpp"

namespace aimc {

/// Behavioral constants of one SRAM column: charge-sharing supply and
/// capacitances plus the two stochastic non-idealities (static bit-cell
/// capacitance mismatch and ADC thermal noise).
struct CircuitParams {
  double v_dd = 0.9;
  double c_cell = 1e-15;
  double c_par = 0.0;
  double sigma_cap_rel = 0.0;
  double sigma_adc = 0.0;

  void validate() const;
};

/// Ideal dot-product level spacing from the charge-sharing law
/// v_dd * c_cell / (n * c_cell + c_par).
double delta_imc(const CircuitParams& circuit, int n);

/// One Bernoulli(0.5) operand pair, bit-packed, with y = <w, x>.
struct DotProductSample {
  std::vector<std::uint64_t> w;
  std::vector<std::uint64_t> x;
  int y_ideal;
};

DotProductSample sample_dot_product(int n, Philox4x32& rng);

struct SimReport {
  double csnr_db_empirical;  // +inf when every sample decoded exactly
  double mse_dp_empirical;
  double mean_error;
  long n_samples;
  std::uint64_t seed;
};

/// Full control over one Monte Carlo run. Results are a deterministic
/// function of (everything here, n_partitions); n_threads only schedules.
struct SimConfig {
  int n = 0;                  // dot product dimension
  double delta_imc = 0.0;     // volts
  double sigma_adc = 0.0;     // additive noise std, volts
  double sigma_cap_rel = 0.0; // relative bit-cell capacitance mismatch std
  double p = 0.25;            // y ~ Bi(n, p); operand bits are Be(sqrt(p))
  const DotProductPmf* explicit_pmf = nullptr;  // sample y by inverse CDF instead
  long n_samples = 500000;
  std::uint64_t seed = 0;
  int n_partitions = 16;
  int n_threads = 1;
  double mu_off = 0.0;        // encoding offset (closed-form value from analytic)
  double mu_off_bias = 0.0;   // fault-injection hook for calibration checks
};

SimReport simulate_csnr(const SimConfig& cfg, const UniformAdc& adc);
SimReport simulate_csnr(const SimConfig& cfg, const GeneralAdc& adc);

/// Default column run: Be(0.5) operands, delta_imc from the circuit law,
/// encoding offset computed analytically for Bi(n, 0.25).
SimReport simulate_csnr(const CircuitParams& circuit, int n, const UniformAdc& adc,
                        long n_samples, std::uint64_t seed, int n_partitions = 16,
                        int n_threads = 1);
SimReport simulate_csnr(const CircuitParams& circuit, int n, const GeneralAdc& adc,
                        long n_samples, std::uint64_t seed, int n_partitions = 16,
                        int n_threads = 1);

}  // namespace aimc

#endif
