#include "aimc/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "aimc/kahan.hpp"

namespace aimc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailZ = 12.0;

double csnr_from_mse(double var_y, double mse) {
  if (mse < kMseEpsilon) return kInf;
  return 10.0 * std::log10(var_y / mse);
}

// Per-y brackets of the closed-form sums, evaluated in units of delta_imc.
// With c the index of the cell containing y, the uniform-level telescoping
// collapses the saturated CDF terms into the in-cell residual r_c - y, so
// every remaining Phi/Phic factor is evaluated on its small side:
//   E[Q/delta - y | y]      = (r_c - y) - d * S1
//   E[(Q/delta - y)^2 | y]  = (r_c - y)^2 - 2 d * S2
//   S1 = sum_{k<=c} Phi(u_k/s) - sum_{k>c} Phic(u_k/s)
//   S2 = sum_{k<=c} u_k Phi(u_k/s) - sum_{k>c} u_k Phic(u_k/s)
// where u_k = t_k - y. Terms die off like the Gaussian tail, so both sums
// stop once |u_k| exceeds kTailZ sigmas.
struct YBrackets {
  double mean;  // E[Q/delta - y | y]
  double sq;    // E[(Q/delta - y)^2 | y]
};

YBrackets y_brackets(double y, double t1r, double dr, int m, double sr) {
  int c;
  if (y < t1r) {
    c = 0;
  } else {
    const double q = (y - t1r) / dr;
    c = q >= m - 1 ? m : static_cast<int>(q) + 1;
    // keep the in-cell identity t_c <= y exact at lattice boundaries
    if (c >= 1 && t1r + (c - 1) * dr > y) --c;
    if (c < m && t1r + c * dr <= y) ++c;
  }
  const double rc = t1r + (c - 0.5) * dr;
  const double e0 = rc - y;

  KahanSum s1, s2;
  for (int k = c; k >= 1; --k) {
    const double u = t1r + (k - 1) * dr - y;
    if (sr > 0.0 && u < -kTailZ * sr) break;
    const double w = normal_cdf_scaled(u, sr);
    if (sr == 0.0 && w == 0.0) break;
    s1.add(w);
    s2.add(u * w);
  }
  for (int k = c + 1; k <= m; ++k) {
    const double u = t1r + (k - 1) * dr - y;
    if (sr > 0.0 && u > kTailZ * sr) break;
    const double w = normal_ccdf_scaled(u, sr);
    if (sr == 0.0 && w == 0.0) break;
    s1.add(-w);
    s2.add(-u * w);
  }
  return {e0 - dr * s1.value(), e0 * e0 - 2.0 * dr * s2.value()};
}

}  // namespace

AimcParams::AimcParams(DotProductPmf pmf, double delta_imc, double sigma_a)
    : pmf_(std::move(pmf)), delta_imc_(delta_imc), sigma_a_(sigma_a) {
  if (!(delta_imc > 0.0) || !std::isfinite(delta_imc))
    throw std::invalid_argument("AimcParams: delta_imc must be > 0");
  if (!(sigma_a >= 0.0) || !std::isfinite(sigma_a))
    throw std::invalid_argument("AimcParams: sigma_a must be >= 0");
}

Gaussian mixture_gaussian_approx(const AimcParams& params) {
  const PmfMoments mom = pmf_moments(params.pmf());
  const double d = params.delta_imc();
  return Gaussian{d * mom.mean,
                  std::sqrt(d * d * mom.variance + params.sigma_a() * params.sigma_a())};
}

double mu_off(const AimcParams& params, const UniformAdc& adc) {
  const double d = params.delta_imc();
  const double t1r = adc.t1() / d;
  const double dr = adc.delta_adc() / d;
  const double sr = params.sigma_a() / d;
  const int m = adc.num_thresholds();
  KahanSum acc;
  for (int y = 0; y <= params.n_max(); ++y) {
    const double p = params.pmf().prob(y);
    if (p == 0.0) continue;
    acc.add(p * y_brackets(y, t1r, dr, m, sr).mean);
  }
  return acc.value();
}

AccuracyReport accuracy_report(const AimcParams& params, const UniformAdc& adc) {
  const double d = params.delta_imc();
  const double t1r = adc.t1() / d;
  const double dr = adc.delta_adc() / d;
  const double sr = params.sigma_a() / d;
  const int m = adc.num_thresholds();
  KahanSum mean_acc, sq_acc;
  for (int y = 0; y <= params.n_max(); ++y) {
    const double p = params.pmf().prob(y);
    if (p == 0.0) continue;
    const YBrackets b = y_brackets(y, t1r, dr, m, sr);
    mean_acc.add(p * b.mean);
    sq_acc.add(p * b.sq);
  }
  const double mu = mean_acc.value();
  const double mse = std::max(sq_acc.value() - mu * mu, 0.0);
  const double var_y = pmf_moments(params.pmf()).variance;
  return AccuracyReport{mu, mse, csnr_from_mse(var_y, mse), std::nullopt};
}

namespace {

// P(Q outputs level k | y_ideal = y) via adjacent CDF differences, taking
// each difference on the side where it keeps relative accuracy.
Eigen::ArrayXd output_pmf_impl(double yv, double sigma, const Eigen::ArrayXd& t) {
  const int m = static_cast<int>(t.size());
  Eigen::ArrayXd p(m + 1);
  p[0] = normal_cdf_scaled(t[0] - yv, sigma);
  for (int k = 1; k < m; ++k) {
    const double ua = t[k - 1] - yv;
    const double ub = t[k] - yv;
    if (ua >= 0.0)
      p[k] = normal_ccdf_scaled(ua, sigma) - normal_ccdf_scaled(ub, sigma);
    else
      p[k] = normal_cdf_scaled(ub, sigma) - normal_cdf_scaled(ua, sigma);
    p[k] = std::max(p[k], 0.0);
  }
  p[m] = normal_ccdf_scaled(t[m - 1] - yv, sigma);
  return p;
}

}  // namespace

Eigen::ArrayXd quantizer_output_pmf(int y, const AimcParams& params, const GeneralAdc& adc) {
  if (y < 0 || y > params.n_max())
    throw std::invalid_argument("quantizer_output_pmf: y outside support");
  return output_pmf_impl(y * params.delta_imc(), params.sigma_a(), adc.thresholds());
}

Eigen::ArrayXd quantizer_output_pmf(int y, const AimcParams& params, const UniformAdc& adc) {
  if (y < 0 || y > params.n_max())
    throw std::invalid_argument("quantizer_output_pmf: y outside support");
  const int m = adc.num_thresholds();
  Eigen::ArrayXd t(m);
  for (int k = 1; k <= m; ++k) t[k - 1] = adc.threshold(k);
  return output_pmf_impl(y * params.delta_imc(), params.sigma_a(), t);
}

AccuracyReport accuracy_report_general(const AimcParams& params, const GeneralAdc& adc,
                                       double delta_imc_for_encoding) {
  if (!(delta_imc_for_encoding > 0.0))
    throw std::invalid_argument("accuracy_report_general: encoding scale must be > 0");
  const int n = params.n_max();
  const int m = adc.num_thresholds();
  const Eigen::ArrayXd enc = adc.levels() / delta_imc_for_encoding;
  const double sigma = params.sigma_a();
  const double d = params.delta_imc();

  Eigen::ArrayXXd cond(n + 1, m + 1);
  for (int y = 0; y <= n; ++y)
    cond.row(y) = output_pmf_impl(y * d, sigma, adc.thresholds()).transpose();

  KahanSum mu_acc;
  for (int y = 0; y <= n; ++y) {
    const double p = params.pmf().prob(y);
    if (p == 0.0) continue;
    for (int k = 0; k <= m; ++k) mu_acc.add(p * cond(y, k) * (enc[k] - y));
  }
  const double mu = mu_acc.value();

  KahanSum mse_acc;
  for (int y = 0; y <= n; ++y) {
    const double p = params.pmf().prob(y);
    if (p == 0.0) continue;
    for (int k = 0; k <= m; ++k) {
      const double e = enc[k] - mu - y;
      mse_acc.add(p * cond(y, k) * e * e);
    }
  }
  const double mse = std::max(mse_acc.value(), 0.0);
  const double var_y = pmf_moments(params.pmf()).variance;
  return AccuracyReport{mu, mse, csnr_from_mse(var_y, mse), std::nullopt};
}

AccuracyReport accuracy_report_general(const AimcParams& params, const GeneralAdc& adc) {
  return accuracy_report_general(params, adc, params.delta_imc());
}

}  // namespace aimc
