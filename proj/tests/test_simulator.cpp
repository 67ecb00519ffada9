#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "aimc/analytic.hpp"
#include "aimc/simulator.hpp"

using namespace aimc;

TEST_CASE("delta_imc charge-sharing law") {
  CircuitParams c;
  c.v_dd = 0.9;
  c.c_cell = 1e-15;
  CHECK(delta_imc(c, 128) == doctest::Approx(0.00703125).epsilon(1e-15));

  c.c_par = 6.84e-15;
  CHECK(delta_imc(c, 16) == doctest::Approx(0.0394).epsilon(5e-4));

  c.c_par = 1.0;  // enormous parasitic swamps the cells
  CHECK(delta_imc(c, 16) < 1e-12);

  c.c_par = -1.0;
  CHECK_THROWS_AS(delta_imc(c, 16), std::invalid_argument);
  c.c_par = 0.0;
  CHECK_THROWS_AS(delta_imc(c, 0), std::invalid_argument);
}

TEST_CASE("sample_dot_product statistics and determinism") {
  {
    Philox4x32 rng(9, 0);
    int ones = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) ones += sample_dot_product(1, rng).y_ideal;
    const double p_hat = static_cast<double>(ones) / trials;
    const double bound = 3.0 * std::sqrt(0.25 * 0.75 / trials);
    CHECK(std::abs(p_hat - 0.25) <= bound);
  }
  {
    Philox4x32 rng(9, 1);
    double sum = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) sum += sample_dot_product(128, rng).y_ideal;
    const double mean = sum / trials;
    CHECK(std::abs(mean - 32.0) <= 3.0 * std::sqrt(24.0 / trials));
  }
  {
    Philox4x32 a(123, 7), b(123, 7);
    for (int i = 0; i < 20; ++i) {
      const DotProductSample sa = sample_dot_product(100, a);
      const DotProductSample sb = sample_dot_product(100, b);
      CHECK(sa.w == sb.w);
      CHECK(sa.x == sb.x);
      CHECK(sa.y_ideal == sb.y_ideal);
    }
  }
}

TEST_CASE("noiseless aligned column decodes every sample exactly") {
  CircuitParams c;
  c.sigma_adc = 0.0;
  const double d = delta_imc(c, 16);
  const UniformAdc adc(5, 0.5 * d, d);
  const SimReport rep = simulate_csnr(c, 16, adc, 20000, 1);
  CHECK(rep.mse_dp_empirical == 0.0);
  CHECK(rep.mean_error == 0.0);
  CHECK(rep.csnr_db_empirical == std::numeric_limits<double>::infinity());
}

TEST_CASE("bit-identical replay for a fixed seed and partition count") {
  CircuitParams c;
  c.sigma_adc = 0.0005;
  const double d = delta_imc(c, 64);
  const UniformAdc adc = full_range_adc(64, d, 4);
  const SimReport a = simulate_csnr(c, 64, adc, 50000, 7, 8, 1);
  const SimReport b = simulate_csnr(c, 64, adc, 50000, 7, 8, 4);  // threads differ
  CHECK(a.csnr_db_empirical == b.csnr_db_empirical);
  CHECK(a.mean_error == b.mean_error);
  CHECK(a.mse_dp_empirical == b.mse_dp_empirical);

  const SimReport other = simulate_csnr(c, 64, adc, 50000, 8, 8, 1);
  CHECK(a.csnr_db_empirical != other.csnr_db_empirical);
}

TEST_CASE("empirical matches theory and stays calibrated") {
  CircuitParams c;
  c.sigma_adc = 0.001;
  const int n = 64;
  const double d = delta_imc(c, n);
  const AimcParams params(binomial_pmf(n, 0.25), d, c.sigma_adc);
  const UniformAdc adc = full_range_adc(n, d, 4);
  const AccuracyReport theory = accuracy_report(params, adc);
  const SimReport sim = simulate_csnr(c, n, adc, 500000, 3);
  REQUIRE(theory.csnr_db < 40.0);
  CHECK(std::abs(sim.csnr_db_empirical - theory.csnr_db) < 0.5);
  CHECK(std::abs(sim.mean_error) <= 3.0 * std::sqrt(theory.mse_dp / sim.n_samples));
}

TEST_CASE("general quantizer path matches its conditional-pmf theory") {
  CircuitParams c;
  c.sigma_adc = 0.0008;
  const int n = 32;
  const double d = delta_imc(c, n);
  const AimcParams params(binomial_pmf(n, 0.25), d, c.sigma_adc);
  const PmfMoments mom = pmf_moments(params.pmf());
  const GeneralAdc lm = lloyd_max(d * mom.mean,
                                  std::sqrt(d * d * mom.variance + c.sigma_adc * c.sigma_adc), 3);
  const AccuracyReport theory = accuracy_report_general(params, lm);
  const SimReport sim = simulate_csnr(c, n, lm, 400000, 11);
  REQUIRE(theory.csnr_db < 40.0);
  CHECK(std::abs(sim.csnr_db_empirical - theory.csnr_db) < 0.5);
}

TEST_CASE("capacitance mismatch widens the error but keeps the lattice mean") {
  CircuitParams c;
  c.sigma_adc = 0.0;
  c.sigma_cap_rel = 0.1;
  const int n = 32;
  const double d = delta_imc(c, n);
  const UniformAdc adc(6, 0.5 * d, d);
  const SimReport with = simulate_csnr(c, n, adc, 100000, 5);
  c.sigma_cap_rel = 0.0;
  const SimReport without = simulate_csnr(c, n, adc, 100000, 5);
  CHECK(without.mse_dp_empirical == 0.0);
  CHECK(with.mse_dp_empirical > 0.0);
}

TEST_CASE("explicit pmf sampling honors the distribution") {
  const DotProductPmf pmf = point_mass_pmf(8, 3);
  SimConfig cfg;
  cfg.n = 8;
  cfg.delta_imc = 0.01;
  cfg.sigma_adc = 0.0;
  cfg.explicit_pmf = &pmf;
  cfg.n_samples = 1000;
  const UniformAdc adc(4, 0.005, 0.01);
  const SimReport rep = simulate_csnr(cfg, adc);
  CHECK(rep.mse_dp_empirical == 0.0);  // every sample is y = 3, decoded exactly

  cfg.sigma_cap_rel = 0.01;
  CHECK_THROWS_AS(simulate_csnr(cfg, adc), std::invalid_argument);
}

TEST_CASE("pre-ADC samples follow the Gaussian mixture (KS at 1%)") {
  const int n = 128;
  CircuitParams c;
  c.sigma_adc = 0.0005;
  const double d = delta_imc(c, n);
  const DotProductPmf pmf = binomial_pmf(n, 0.25);

  const int samples = 100000;
  std::vector<double> v(samples);
  Philox4x32 rng(31, 0);
  for (int i = 0; i < samples; ++i) {
    const DotProductSample s = sample_dot_product(n, rng);
    v[i] = s.y_ideal * d + c.sigma_adc * rng.normal();
  }
  std::sort(v.begin(), v.end());

  auto mixture_cdf = [&](double x) {
    double acc = 0.0;
    for (int y = 0; y <= n; ++y) {
      const double p = pmf.prob(y);
      if (p == 0.0) continue;
      acc += p * std_normal_cdf((x - y * d) / c.sigma_adc);
    }
    return acc;
  };

  double ks = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double f = mixture_cdf(v[i]);
    ks = std::max(ks, std::abs(f - static_cast<double>(i + 1) / samples));
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / samples));
  }
  const double critical = 1.628 / std::sqrt(static_cast<double>(samples));  // 1% level
  CHECK(ks < critical);
}

TEST_CASE("doubling the sample count halves the estimator variance") {
  CircuitParams c;
  c.sigma_adc = 0.002;
  const int n = 16;
  const double d = delta_imc(c, n);
  const UniformAdc adc = full_range_adc(n, d, 3);

  auto spread = [&](long samples) {
    std::vector<double> vals;
    for (std::uint64_t seed = 100; seed < 132; ++seed)
      vals.push_back(simulate_csnr(c, n, adc, samples, seed).csnr_db_empirical);
    double mean = 0;
    for (double x : vals) mean += x;
    mean /= vals.size();
    double var = 0;
    for (double x : vals) var += (x - mean) * (x - mean);
    return var / vals.size();
  };

  const double v1 = spread(4000);
  const double v2 = spread(8000);
  const double ratio = v1 / v2;
  CHECK(ratio > 1.2);
  CHECK(ratio < 3.5);
}
