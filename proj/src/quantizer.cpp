#include "aimc/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aimc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailZ = 12.0;  // beyond this many sigmas a cell carries no mass

double to_db(double signal, double noise) {
  if (noise <= 0.0) return kInf;
  if (signal <= 0.0 && noise <= 0.0) return kInf;
  return 10.0 * std::log10(signal / noise);
}

// Probability mass of a standard normal over [za, zb], tail-aware.
double interval_prob(double za, double zb) {
  if (za == -kInf) return zb == kInf ? 1.0 : std_normal_cdf(zb);
  if (zb == kInf) return std_normal_ccdf(za);
  if (za >= 0.0) return std_normal_ccdf(za) - std_normal_ccdf(zb);
  return std_normal_cdf(zb) - std_normal_cdf(za);
}

// E[(r - V)^2 1{lo <= V < hi}] for V ~ N(mean, sigma^2), sigma > 0.
double gauss_cell_mse(double mean, double sigma, double lo, double hi, double r) {
  const double za = lo == -kInf ? -kInf : (lo - mean) / sigma;
  const double zb = hi == kInf ? kInf : (hi - mean) / sigma;
  const double c = r - mean;
  const double pa = za == -kInf ? 0.0 : std_normal_pdf(za);
  const double pb = zb == kInf ? 0.0 : std_normal_pdf(zb);
  const double zapa = za == -kInf ? 0.0 : za * pa;
  const double zbpb = zb == kInf ? 0.0 : zb * pb;
  const double mass = interval_prob(za, zb);
  return (c * c + sigma * sigma) * mass - 2.0 * c * sigma * (pa - pb) +
         sigma * sigma * (zapa - zbpb);
}

}  // namespace

UniformAdc::UniformAdc(int b_adc, double t1, double delta_adc)
    : b_adc_(b_adc), t1_(t1), delta_adc_(delta_adc) {
  if (b_adc < 1 || b_adc > 24) throw std::invalid_argument("UniformAdc: b_adc outside [1,24]");
  if (!(delta_adc > 0.0) || !std::isfinite(delta_adc))
    throw std::invalid_argument("UniformAdc: delta_adc must be > 0");
  if (!std::isfinite(t1)) throw std::invalid_argument("UniformAdc: t1 must be finite");
  m_ = (1 << b_adc) - 1;
}

GeneralAdc::GeneralAdc(Eigen::ArrayXd thresholds, Eigen::ArrayXd levels)
    : thresholds_(std::move(thresholds)), levels_(std::move(levels)) {
  const int m = static_cast<int>(thresholds_.size());
  if (m < 1) throw std::invalid_argument("GeneralAdc: needs at least one threshold");
  if (levels_.size() != m + 1)
    throw std::invalid_argument("GeneralAdc: levels must have one more entry than thresholds");
  for (int k = 1; k < m; ++k)
    if (thresholds_[k] < thresholds_[k - 1])
      throw std::invalid_argument("GeneralAdc: thresholds must be non-decreasing");
  if (!(levels_[0] < thresholds_[0]))
    throw std::invalid_argument("GeneralAdc: levels[0] must lie below the first threshold");
  for (int k = 1; k < m; ++k)
    if (levels_[k] < thresholds_[k - 1] || levels_[k] >= thresholds_[k])
      throw std::invalid_argument("GeneralAdc: interior level outside its cell");
  if (levels_[m] < thresholds_[m - 1])
    throw std::invalid_argument("GeneralAdc: top level below the last threshold");
}

GeneralAdc to_general(const UniformAdc& adc) {
  const int m = adc.num_thresholds();
  Eigen::ArrayXd t(m), r(m + 1);
  for (int k = 1; k <= m; ++k) t[k - 1] = adc.threshold(k);
  for (int k = 0; k <= m; ++k) r[k] = adc.level(k);
  return GeneralAdc(std::move(t), std::move(r));
}

int quantize_index(const UniformAdc& adc, double v) {
  if (v < adc.t1()) return 0;
  const int m = adc.num_thresholds();
  if (v >= adc.t_m()) return m;
  const int k = static_cast<int>((v - adc.t1()) / adc.delta_adc()) + 1;
  return std::clamp(k, 1, m);
}

int quantize_index(const GeneralAdc& adc, double v) {
  const auto& t = adc.thresholds();
  // number of thresholds <= v
  const double* begin = t.data();
  const double* end = t.data() + t.size();
  return static_cast<int>(std::upper_bound(begin, end, v) - begin);
}

double quantize(const UniformAdc& adc, double v) { return adc.level(quantize_index(adc, v)); }

double quantize(const GeneralAdc& adc, double v) { return adc.levels()[quantize_index(adc, v)]; }

UniformAdc full_range_adc(int n_max, double delta_imc, int b_adc) {
  if (n_max < 1) throw std::invalid_argument("full_range_adc: n_max must be >= 1");
  if (!(delta_imc > 0.0)) throw std::invalid_argument("full_range_adc: delta_imc must be > 0");
  const int m = (1 << b_adc) - 1;
  const double delta_adc = n_max * delta_imc / (m + 1);
  return UniformAdc(b_adc, 0.5 * delta_adc, delta_adc);
}

namespace {

// Granular noise (2a)^2/(12*4^b) plus the exact Gaussian overload
// distortion 2[(1+a^2)*Phic(a) - a*phi(a)] for a clip range of +-a.
double occ_objective(double a, int b_adc) {
  const double grain = a * a * std::pow(4.0, -b_adc) / 3.0;
  const double over = 2.0 * ((1.0 + a * a) * std_normal_ccdf(a) - a * std_normal_pdf(a));
  return grain + over;
}

double golden_minimize(double lo, double hi, double tol, auto&& f) {
  constexpr double kGolden = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double occ_clip_factor(int b_adc) {
  if (b_adc < 2 || b_adc > 24) throw std::invalid_argument("occ_clip_factor: b_adc outside [2,24]");
  // Coarse scan brackets the minimum before the golden-section refinement.
  const double step = 1.0 / 32.0;
  double best_a = step;
  double best_f = occ_objective(best_a, b_adc);
  for (int i = 2; i <= 256; ++i) {
    const double a = i * step;
    const double f = occ_objective(a, b_adc);
    if (f < best_f) {
      best_f = f;
      best_a = a;
    }
  }
  const double lo = std::max(best_a - 2 * step, 1e-6);
  const double hi = std::min(best_a + 2 * step, 8.0);
  return golden_minimize(lo, hi, 1e-6, [&](double a) { return occ_objective(a, b_adc); });
}

UniformAdc occ_adc(double mean, double sigma, int b_adc) {
  if (!(sigma > 0.0)) throw std::invalid_argument("occ_adc: sigma must be > 0");
  if (b_adc == 1) {
    const double c = std::sqrt(2.0 / M_PI);  // optimal two-level spacing
    return UniformAdc(1, mean, 2.0 * c * sigma);
  }
  const int m = (1 << b_adc) - 1;
  const double k = occ_clip_factor(b_adc);
  return UniformAdc(b_adc, mean - k * sigma, 2.0 * k * sigma / (m - 1));
}

namespace {

double general_mse_q(double mean, double sigma, const Eigen::ArrayXd& t, const Eigen::ArrayXd& r) {
  const int m = static_cast<int>(t.size());
  double mse = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double lo = k == 0 ? -kInf : t[k - 1];
    const double hi = k == m ? kInf : t[k];
    if (lo != -kInf && lo - mean > kTailZ * sigma) break;
    if (hi != kInf && mean - hi > kTailZ * sigma) continue;
    mse += gauss_cell_mse(mean, sigma, lo, hi, r[k]);
  }
  return mse;
}

}  // namespace

double mse_q(const Gaussian& input, const UniformAdc& adc) {
  if (input.sigma < 0.0) throw std::invalid_argument("mse_q: sigma must be >= 0");
  if (input.sigma == 0.0) {
    const double q = quantize(adc, input.mean);
    return (q - input.mean) * (q - input.mean);
  }
  const int m = adc.num_thresholds();
  const int klo = quantize_index(adc, input.mean - kTailZ * input.sigma);
  const int khi = quantize_index(adc, input.mean + kTailZ * input.sigma);
  double mse = 0.0;
  for (int k = klo; k <= khi; ++k) {
    const double lo = k == 0 ? -kInf : adc.threshold(k);
    const double hi = k == m ? kInf : adc.threshold(k + 1);
    mse += gauss_cell_mse(input.mean, input.sigma, lo, hi, adc.level(k));
  }
  return mse;
}

double mse_q(const Gaussian& input, const GeneralAdc& adc) {
  if (input.sigma < 0.0) throw std::invalid_argument("mse_q: sigma must be >= 0");
  if (input.sigma == 0.0) {
    const double q = quantize(adc, input.mean);
    return (q - input.mean) * (q - input.mean);
  }
  return general_mse_q(input.mean, input.sigma, adc.thresholds(), adc.levels());
}

template <class Adc>
static double mixture_mse_q(const DotProductPmf& pmf, double delta_imc, double sigma_a,
                            const Adc& adc) {
  double mse = 0.0;
  for (int y = 0; y <= pmf.n_max(); ++y) {
    const double p = pmf.prob(y);
    if (p == 0.0) continue;
    mse += p * mse_q(Gaussian{y * delta_imc, sigma_a}, adc);
  }
  return mse;
}

double mse_q(const DotProductPmf& pmf, double delta_imc, double sigma_a, const UniformAdc& adc) {
  return mixture_mse_q(pmf, delta_imc, sigma_a, adc);
}

double mse_q(const DotProductPmf& pmf, double delta_imc, double sigma_a, const GeneralAdc& adc) {
  return mixture_mse_q(pmf, delta_imc, sigma_a, adc);
}

double sqnr_db(const Gaussian& input, const UniformAdc& adc) {
  return to_db(input.sigma * input.sigma, mse_q(input, adc));
}

double sqnr_db(const Gaussian& input, const GeneralAdc& adc) {
  return to_db(input.sigma * input.sigma, mse_q(input, adc));
}

template <class Adc>
static double mixture_sqnr_db(const DotProductPmf& pmf, double delta_imc, double sigma_a,
                              const Adc& adc) {
  const double var_in = delta_imc * delta_imc * pmf_moments(pmf).variance + sigma_a * sigma_a;
  return to_db(var_in, mse_q(pmf, delta_imc, sigma_a, adc));
}

double sqnr_db(const DotProductPmf& pmf, double delta_imc, double sigma_a, const UniformAdc& adc) {
  return mixture_sqnr_db(pmf, delta_imc, sigma_a, adc);
}

double sqnr_db(const DotProductPmf& pmf, double delta_imc, double sigma_a, const GeneralAdc& adc) {
  return mixture_sqnr_db(pmf, delta_imc, sigma_a, adc);
}

LloydMaxTrace lloyd_max_trace(double mean, double sigma, int b_adc) {
  if (!(sigma > 0.0)) throw std::invalid_argument("lloyd_max: sigma must be > 0");
  if (b_adc < 1 || b_adc > 16) throw std::invalid_argument("lloyd_max: b_adc outside [1,16]");
  const int m = (1 << b_adc) - 1;
  Eigen::ArrayXd r(m + 1), t(m);
  for (int k = 0; k <= m; ++k)
    r[k] = mean - 4.0 * sigma + (k + 0.5) * (8.0 * sigma / (m + 1));

  std::vector<double> history;
  double prev = kInf;
  for (int iter = 0; iter < 10000; ++iter) {
    for (int k = 0; k < m; ++k) t[k] = 0.5 * (r[k] + r[k + 1]);
    for (int k = 0; k <= m; ++k) {
      const double lo = k == 0 ? -kInf : t[k - 1];
      const double hi = k == m ? kInf : t[k];
      const double za = lo == -kInf ? -kInf : (lo - mean) / sigma;
      const double zb = hi == kInf ? kInf : (hi - mean) / sigma;
      const double mass = interval_prob(za, zb);
      if (mass <= 0.0) continue;  // empty cell; keep the previous level
      const double pa = za == -kInf ? 0.0 : std_normal_pdf(za);
      const double pb = zb == kInf ? 0.0 : std_normal_pdf(zb);
      r[k] = mean + sigma * (pa - pb) / mass;
    }
    const double mse = general_mse_q(mean, sigma, t, r);
    history.push_back(mse);
    if (std::isfinite(prev) && prev - mse <= 1e-10 * prev) break;
    prev = mse;
  }
  for (int k = 0; k < m; ++k) t[k] = 0.5 * (r[k] + r[k + 1]);
  return LloydMaxTrace{GeneralAdc(std::move(t), std::move(r)), std::move(history)};
}

GeneralAdc lloyd_max(double mean, double sigma, int b_adc) {
  return lloyd_max_trace(mean, sigma, b_adc).adc;
}

}  // namespace aimc
