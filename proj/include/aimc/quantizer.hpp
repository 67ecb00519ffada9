#ifndef AIMC_QUANTIZER_HPP
#define AIMC_QUANTIZER_HPP

#include <vector>

#include <Eigen/Dense>

#include "aimc/dist.hpp"

namespace aimc {

/// Uniform ADC with M = 2^b_adc - 1 thresholds t_k = t1 + (k-1)*delta_adc
/// (k = 1..M) and M+1 levels r_k = t1 + (k-0.5)*delta_adc (k = 0..M).
/// Parameterized by (t1, delta_adc) so the 1-bit case stays well defined.
class UniformAdc {
 public:
  UniformAdc(int b_adc, double t1, double delta_adc);

  int b_adc() const { return b_adc_; }
  double t1() const { return t1_; }
  double delta_adc() const { return delta_adc_; }

  int num_thresholds() const { return m_; }                 // M
  double threshold(int k) const { return t1_ + (k - 1) * delta_adc_; }  // k = 1..M
  double level(int k) const { return t1_ + (k - 0.5) * delta_adc_; }    // k = 0..M
  double t_m() const { return threshold(m_); }

 private:
  int b_adc_;
  int m_;
  double t1_;
  double delta_adc_;
};

/// Arbitrary scalar quantizer: sorted thresholds (size M) and levels
/// (size M+1) interleaved the same way as the uniform case.
class GeneralAdc {
 public:
  GeneralAdc(Eigen::ArrayXd thresholds, Eigen::ArrayXd levels);

  int num_thresholds() const { return static_cast<int>(thresholds_.size()); }
  const Eigen::ArrayXd& thresholds() const { return thresholds_; }
  const Eigen::ArrayXd& levels() const { return levels_; }

 private:
  Eigen::ArrayXd thresholds_;
  Eigen::ArrayXd levels_;
};

GeneralAdc to_general(const UniformAdc& adc);

// Cell index of v: 0 if v < t_1, k if t_k <= v < t_{k+1}, M if v >= t_M.
int quantize_index(const UniformAdc& adc, double v);
int quantize_index(const GeneralAdc& adc, double v);

double quantize(const UniformAdc& adc, double v);
double quantize(const GeneralAdc& adc, double v);

/// Full-range uniform ADC spanning the ideal dot-product range
/// [0, n_max*delta_imc]: delta_adc = n_max*delta_imc/(M+1), t1 = delta_adc/2.
UniformAdc full_range_adc(int n_max, double delta_imc, int b_adc);

/// Clipping factor k(b) used by the optimal clipping criterion: minimizes
/// uniform granular noise (2k)^2/(12*4^b) plus the exact Gaussian overload
/// distortion beyond +-k, reproducing the classic table
/// (1.711, 2.152, 2.559, 2.936, 3.287, 3.615, 3.924 for 2..8 b).
double occ_clip_factor(int b_adc);

/// OCC uniform ADC for a Gaussian input: thresholds symmetric about the
/// mean at mean -+ k(b)*sigma. For b_adc == 1 the threshold sits at the
/// mean and the two levels at mean -+ sqrt(2/pi)*sigma.
UniformAdc occ_adc(double mean, double sigma, int b_adc);

/// Lloyd-Max quantizer for N(mean, sigma^2): alternates centroid and
/// midpoint updates (closed-form Gaussian cell integrals) until the
/// relative MSE_q change drops below 1e-10 or 10^4 iterations.
GeneralAdc lloyd_max(double mean, double sigma, int b_adc);

struct LloydMaxTrace {
  GeneralAdc adc;
  std::vector<double> mse_history;  // MSE_q after each iteration
};
LloydMaxTrace lloyd_max_trace(double mean, double sigma, int b_adc);

struct Gaussian {
  double mean;
  double sigma;  // >= 0; 0 degenerates to a point mass
};

// Mean squared quantization error E[(Q(V) - V)^2].
double mse_q(const Gaussian& input, const UniformAdc& adc);
double mse_q(const Gaussian& input, const GeneralAdc& adc);
double mse_q(const DotProductPmf& pmf, double delta_imc, double sigma_a, const UniformAdc& adc);
double mse_q(const DotProductPmf& pmf, double delta_imc, double sigma_a, const GeneralAdc& adc);

// SQNR = Var(V_in)/MSE_q in dB (+inf once MSE_q underflows the signal).
double sqnr_db(const Gaussian& input, const UniformAdc& adc);
double sqnr_db(const Gaussian& input, const GeneralAdc& adc);
double sqnr_db(const DotProductPmf& pmf, double delta_imc, double sigma_a, const UniformAdc& adc);
double sqnr_db(const DotProductPmf& pmf, double delta_imc, double sigma_a, const GeneralAdc& adc);

}  // namespace aimc

#endif
