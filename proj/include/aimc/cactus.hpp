#ifndef AIMC_CACTUS_HPP
#define AIMC_CACTUS_HPP

#include <optional>

#include "aimc/analytic.hpp"

namespace aimc {

struct CactusResult {
  UniformAdc adc;            // the winning quantizer (t1_opt, delta_adc_opt)
  double t1_opt;
  double t_m_opt;
  double delta_adc_opt;
  double mse_dp_min;
  double csnr_max_db;
  long candidates_evaluated;
};

/// Exhaustive CSNR-optimal clipping-threshold search. When 2^b_adc >= N the
/// levels are aligned directly with the ideal dot-product lattice
/// (t1 = delta_imc/2, step delta_imc); otherwise every candidate with
/// delta_adc a whole multiple of delta_imc and t1 midway between lattice
/// points is scored with the closed-form report and the strictly smallest
/// MSE_dp wins (first seen kept on ties).
CactusResult cactus(const AimcParams& params, int b_adc);

/// Smallest precision in 1..ceil(log2 N) whose CACTUS CSNR meets the target;
/// nullopt when even the full precision cannot.
std::optional<int> min_adc_precision(const AimcParams& params, double csnr_spec_db);

}  // namespace aimc

#endif
