#include "aimc/dist.hpp"

#include <cmath>
#include <stdexcept>

namespace aimc {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
}  // namespace

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double std_normal_ccdf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf_scaled(double u, double sigma) {
  if (sigma > 0.0) return std_normal_cdf(u / sigma);
  if (u < 0.0) return 0.0;
  if (u > 0.0) return 1.0;
  return 0.5;
}

double normal_ccdf_scaled(double u, double sigma) {
  if (sigma > 0.0) return std_normal_ccdf(u / sigma);
  if (u < 0.0) return 1.0;
  if (u > 0.0) return 0.0;
  return 0.5;
}

DotProductPmf::DotProductPmf(Eigen::ArrayXd probs) : probs_(std::move(probs)) {
  if (probs_.size() < 1) throw std::invalid_argument("pmf: empty support");
  if ((probs_ < 0.0).any()) throw std::invalid_argument("pmf: negative probability");
  const double total = probs_.sum();
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("pmf: probabilities do not sum to 1");
}

DotProductPmf binomial_pmf(int n, double p) {
  if (n < 0) throw std::invalid_argument("binomial_pmf: n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_pmf: p outside [0,1]");
  Eigen::ArrayXd probs = Eigen::ArrayXd::Zero(n + 1);
  if (p == 0.0) {
    probs[0] = 1.0;
    return DotProductPmf(std::move(probs));
  }
  if (p == 1.0) {
    probs[n] = 1.0;
    return DotProductPmf(std::move(probs));
  }
  // Unnormalized recurrence from the mode outward; ratios keep every term
  // representable even when C(n,k) itself overflows.
  const int mode = std::min(n, static_cast<int>((n + 1) * p));
  probs[mode] = 1.0;
  const double odds = p / (1.0 - p);
  for (int y = mode + 1; y <= n; ++y)
    probs[y] = probs[y - 1] * (static_cast<double>(n - y + 1) / y) * odds;
  for (int y = mode - 1; y >= 0; --y)
    probs[y] = probs[y + 1] * (static_cast<double>(y + 1) / (n - y)) / odds;
  probs /= probs.sum();
  return DotProductPmf(std::move(probs));
}

DotProductPmf point_mass_pmf(int n_max, int y) {
  if (y < 0 || y > n_max) throw std::invalid_argument("point_mass_pmf: y outside support");
  Eigen::ArrayXd probs = Eigen::ArrayXd::Zero(n_max + 1);
  probs[y] = 1.0;
  return DotProductPmf(std::move(probs));
}

PmfMoments pmf_moments(const DotProductPmf& pmf) {
  const Eigen::ArrayXd& p = pmf.probs();
  const Eigen::ArrayXd y = Eigen::ArrayXd::LinSpaced(p.size(), 0.0, p.size() - 1.0);
  const double mean = (y * p).sum();
  const double var = (y * y * p).sum() - mean * mean;
  return {mean, std::max(var, 0.0)};
}

}  // namespace aimc
