#include "aimc/cactus.hpp"

#include <stdexcept>

namespace aimc {

CactusResult cactus(const AimcParams& params, int b_adc) {
  if (b_adc < 1) throw std::invalid_argument("cactus: b_adc must be >= 1");
  const long n = params.n_max();
  const double d = params.delta_imc();
  const long m = (1L << b_adc) - 1;

  if ((1L << b_adc) >= n) {
    // Levels coincide with the ideal lattice {0, delta_imc, 2*delta_imc, ...}.
    UniformAdc adc(b_adc, 0.5 * d, d);
    AccuracyReport rep = accuracy_report(params, adc);
    return CactusResult{adc,    adc.t1(),   adc.t_m(), adc.delta_adc(),
                        rep.mse_dp, rep.csnr_db, 1};
  }

  long count = 0;
  bool have_best = false;
  UniformAdc best(b_adc, 0.5 * d, d);
  AccuracyReport best_rep{};
  for (long k = 1; (2 * m - 1) * k < 2 * n; ++k) {
    const double delta_adc = k * d;
    for (long l = 0; (m - 1) * k + l < n; ++l) {
      UniformAdc adc(b_adc, (l + 0.5) * d, delta_adc);
      AccuracyReport rep = accuracy_report(params, adc);
      ++count;
      if (!have_best || rep.mse_dp < best_rep.mse_dp) {
        have_best = true;
        best = adc;
        best_rep = rep;
      }
    }
  }
  return CactusResult{best,          best.t1(),        best.t_m(), best.delta_adc(),
                      best_rep.mse_dp, best_rep.csnr_db, count};
}

std::optional<int> min_adc_precision(const AimcParams& params, double csnr_spec_db) {
  const long n = params.n_max();
  int b_cap = 1;
  while ((1L << b_cap) < n) ++b_cap;  // ceil(log2 N)
  for (int b = 1; b <= b_cap; ++b) {
    if (cactus(params, b).csnr_max_db >= csnr_spec_db) return b;
  }
  return std::nullopt;
}

}  // namespace aimc
