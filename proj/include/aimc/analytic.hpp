#ifndef AIMC_ANALYTIC_HPP
#define AIMC_ANALYTIC_HPP

#include <optional>

#include <Eigen/Dense>

#include "aimc/dist.hpp"
#include "aimc/quantizer.hpp"

namespace aimc {

/// AIMC column model without the ADC part: distribution of the ideal dot
/// product, voltage spacing of its levels, and additive analog noise std.
class AimcParams {
 public:
  AimcParams(DotProductPmf pmf, double delta_imc, double sigma_a);

  const DotProductPmf& pmf() const { return pmf_; }
  double delta_imc() const { return delta_imc_; }
  double sigma_a() const { return sigma_a_; }
  int n_max() const { return pmf_.n_max(); }

 private:
  DotProductPmf pmf_;
  double delta_imc_;
  double sigma_a_;
};

/// Dot-product accuracy of one (column, ADC) pair. mse_dp and mu_off are in
/// dot-product units (volts divided by delta_imc); csnr_db carries a +inf
/// sentinel when the column is exactly error-free.
struct AccuracyReport {
  double mu_off;
  double mse_dp;
  double csnr_db;
  std::optional<double> sqnr_db;
};

/// MSE below this is treated as exactly zero error (CSNR reported +inf).
inline constexpr double kMseEpsilon = 1e-18;

/// Single-Gaussian approximation of the pre-ADC mixture (the input model
/// the OCC and Lloyd-Max baselines are designed against).
Gaussian mixture_gaussian_approx(const AimcParams& params);

/// Fixed digital offset that makes the encoded dot-product error zero mean:
/// E[Q(y*delta_imc + eta)/delta_imc - y].
double mu_off(const AimcParams& params, const UniformAdc& adc);

/// Closed-form mean-calibrated dot-product MSE and CSNR of a uniform ADC.
/// sqnr_db is left unset; attach it separately when wanted.
AccuracyReport accuracy_report(const AimcParams& params, const UniformAdc& adc);

/// Distribution of the quantizer output conditioned on y_ideal = y:
/// probabilities over the M+1 levels, summing to 1.
Eigen::ArrayXd quantizer_output_pmf(int y, const AimcParams& params, const UniformAdc& adc);
Eigen::ArrayXd quantizer_output_pmf(int y, const AimcParams& params, const GeneralAdc& adc);

/// Accuracy of an arbitrary quantizer, evaluated directly from the
/// conditional output distribution (the route that also serves as the
/// brute-force oracle for the closed form above). The encoding divides
/// levels by delta_imc_for_encoding before the offset calibration.
AccuracyReport accuracy_report_general(const AimcParams& params, const GeneralAdc& adc,
                                       double delta_imc_for_encoding);
AccuracyReport accuracy_report_general(const AimcParams& params, const GeneralAdc& adc);

}  // namespace aimc

#endif
