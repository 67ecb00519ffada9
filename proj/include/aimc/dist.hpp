#ifndef AIMC_DIST_HPP
#define AIMC_DIST_HPP

#include <Eigen/Dense>

namespace aimc {

/// Standard normal CDF, accurate in both tails (backed by erfc).
double std_normal_cdf(double x);

/// Upper tail 1 - Phi(x), without cancellation for large x.
double std_normal_ccdf(double x);

/// Standard normal density.
double std_normal_pdf(double x);

// Phi(u / sigma) and its complement with the sigma == 0 limit:
// the step function that is 0 below, 1 above and 0.5 at u == 0.
double normal_cdf_scaled(double u, double sigma);
double normal_ccdf_scaled(double u, double sigma);

/// Distribution of an ideal dot product over {0, ..., n_max}.
/// Probabilities are stored densely; they must be nonnegative and
/// sum to 1 within 1e-12.
class DotProductPmf {
 public:
  explicit DotProductPmf(Eigen::ArrayXd probs);

  int n_max() const { return static_cast<int>(probs_.size()) - 1; }
  const Eigen::ArrayXd& probs() const { return probs_; }
  double prob(int y) const { return probs_[y]; }

 private:
  Eigen::ArrayXd probs_;
};

/// Bi(n, p), computed by the multiplicative recurrence outward from the
/// mode so it stays finite for n in the thousands.
DotProductPmf binomial_pmf(int n, double p);

/// Degenerate distribution concentrated at y (support still {0..n_max}).
DotProductPmf point_mass_pmf(int n_max, int y);

struct PmfMoments {
  double mean;
  double variance;
};

PmfMoments pmf_moments(const DotProductPmf& pmf);

}  // namespace aimc

#endif
