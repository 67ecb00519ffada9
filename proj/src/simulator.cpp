#include "aimc/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "aimc/analytic.hpp"
#include "aimc/kahan.hpp"

namespace aimc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kMismatchStream = 0x8000000000000000ull;
}  // namespace

void CircuitParams::validate() const {
  if (!(v_dd > 0.0)) throw std::invalid_argument("CircuitParams: v_dd must be > 0");
  if (!(c_cell > 0.0)) throw std::invalid_argument("CircuitParams: c_cell must be > 0");
  if (!(c_par >= 0.0)) throw std::invalid_argument("CircuitParams: c_par must be >= 0");
  if (!(sigma_cap_rel >= 0.0))
    throw std::invalid_argument("CircuitParams: sigma_cap_rel must be >= 0");
  if (!(sigma_adc >= 0.0)) throw std::invalid_argument("CircuitParams: sigma_adc must be >= 0");
}

double delta_imc(const CircuitParams& circuit, int n) {
  circuit.validate();
  if (n < 1) throw std::invalid_argument("delta_imc: n must be >= 1");
  return circuit.v_dd * circuit.c_cell / (n * circuit.c_cell + circuit.c_par);
}

namespace {

int popcount_dot(const std::vector<std::uint64_t>& w, const std::vector<std::uint64_t>& x) {
  int y = 0;
  for (std::size_t i = 0; i < w.size(); ++i) y += std::popcount(w[i] & x[i]);
  return y;
}

void draw_words(int n, Philox4x32& rng, std::vector<std::uint64_t>& out) {
  const int words = (n + 63) / 64;
  out.resize(words);
  for (int i = 0; i < words; ++i) out[i] = rng.next_u64();
  const int tail = n % 64;
  if (tail != 0) out[words - 1] &= (~0ull) >> (64 - tail);
}

void draw_biased_bits(int n, double q, Philox4x32& rng, std::vector<std::uint64_t>& out) {
  const int words = (n + 63) / 64;
  out.assign(words, 0);
  for (int i = 0; i < n; ++i)
    if (rng.uniform01() < q) out[i / 64] |= 1ull << (i % 64);
}

}  // namespace

DotProductSample sample_dot_product(int n, Philox4x32& rng) {
  if (n < 1) throw std::invalid_argument("sample_dot_product: n must be >= 1");
  DotProductSample s;
  draw_words(n, rng, s.w);
  draw_words(n, rng, s.x);
  s.y_ideal = popcount_dot(s.w, s.x);
  return s;
}

namespace {

struct Partial {
  KahanSum err;
  KahanSum err2;
  long long y_sum = 0;
  long long y2_sum = 0;
};

// Encoding y_imc = enc(cell index) - mu_off works in dot-product units, so
// an aligned quantizer decodes noiseless samples back to y exactly.
struct UniformEncoder {
  const UniformAdc& adc;
  double base;  // t1/delta_imc - 0.5*step
  double step;  // delta_adc/delta_imc
  UniformEncoder(const UniformAdc& a, double d)
      : adc(a), base(a.t1() / d - 0.5 * (a.delta_adc() / d)), step(a.delta_adc() / d) {}
  double operator()(double v) const { return base + quantize_index(adc, v) * step; }
};

struct GeneralEncoder {
  const GeneralAdc& adc;
  Eigen::ArrayXd enc;
  GeneralEncoder(const GeneralAdc& a, double d) : adc(a), enc(a.levels() / d) {}
  double operator()(double v) const { return enc[quantize_index(adc, v)]; }
};

template <class Encoder>
SimReport run_simulation(const SimConfig& cfg, const Encoder& encode) {
  if (cfg.n < 1) throw std::invalid_argument("simulate_csnr: n must be >= 1");
  if (cfg.n_samples < 1) throw std::invalid_argument("simulate_csnr: n_samples must be >= 1");
  if (cfg.n_samples > 2000000000L)
    throw std::invalid_argument("simulate_csnr: n_samples above 2e9 (exact accumulators)");
  if (cfg.n_partitions < 1) throw std::invalid_argument("simulate_csnr: n_partitions must be >= 1");
  if (!(cfg.delta_imc > 0.0)) throw std::invalid_argument("simulate_csnr: delta_imc must be > 0");
  if (!(cfg.sigma_adc >= 0.0)) throw std::invalid_argument("simulate_csnr: sigma_adc must be >= 0");
  if (!(cfg.sigma_cap_rel >= 0.0))
    throw std::invalid_argument("simulate_csnr: sigma_cap_rel must be >= 0");
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw std::invalid_argument("simulate_csnr: p outside [0,1]");
  if (cfg.explicit_pmf && cfg.sigma_cap_rel > 0.0)
    throw std::invalid_argument(
        "simulate_csnr: capacitance mismatch needs an operand-level model; "
        "explicit pmf sampling cannot provide one");

  // Static per-column device variation, shared by all partitions.
  std::vector<double> eps;
  if (cfg.sigma_cap_rel > 0.0) {
    Philox4x32 rng(cfg.seed, kMismatchStream);
    eps.resize(cfg.n);
    for (double& e : eps) e = cfg.sigma_cap_rel * rng.normal();
  }

  // Inverse-CDF table for explicit distributions.
  std::vector<double> cum;
  if (cfg.explicit_pmf) {
    const auto& p = cfg.explicit_pmf->probs();
    cum.resize(p.size());
    double acc = 0.0;
    for (int i = 0; i < p.size(); ++i) {
      acc += p[i];
      cum[i] = acc;
    }
    cum.back() = 1.0;
  }

  const bool fair_bits = !cfg.explicit_pmf && cfg.p == 0.25;
  const double bit_q = std::sqrt(cfg.p);
  const double mu = cfg.mu_off + cfg.mu_off_bias;
  const int parts = cfg.n_partitions;
  std::vector<Partial> partials(parts);

  auto worker = [&](int part) {
    Philox4x32 rng(cfg.seed, static_cast<std::uint64_t>(part));
    const long base_count = cfg.n_samples / parts;
    const long count = base_count + (part < cfg.n_samples % parts ? 1 : 0);
    Partial acc;
    std::vector<std::uint64_t> w, x;
    for (long s = 0; s < count; ++s) {
      int y;
      double analog = 0.0;  // ideal dot product in units of delta_imc
      if (cfg.explicit_pmf) {
        const double u = rng.uniform01();
        y = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
        y = std::min<int>(y, static_cast<int>(cum.size()) - 1);
        analog = y;
      } else {
        if (fair_bits) {
          draw_words(cfg.n, rng, w);
          draw_words(cfg.n, rng, x);
        } else {
          draw_biased_bits(cfg.n, bit_q, rng, w);
          draw_biased_bits(cfg.n, bit_q, rng, x);
        }
        y = popcount_dot(w, x);
        analog = y;
        if (!eps.empty()) {
          double mismatch = 0.0;
          for (std::size_t i = 0; i < w.size(); ++i) {
            std::uint64_t active = w[i] & x[i];
            while (active) {
              mismatch += eps[i * 64 + std::countr_zero(active)];
              active &= active - 1;
            }
          }
          analog += mismatch;
        }
      }
      double v = analog * cfg.delta_imc;
      if (cfg.sigma_adc > 0.0) v += cfg.sigma_adc * rng.normal();
      const double y_imc = encode(v) - mu;
      const double e = y_imc - y;
      acc.err.add(e);
      acc.err2.add(e * e);
      acc.y_sum += y;
      acc.y2_sum += static_cast<long long>(y) * y;
    }
    partials[part] = acc;
  };

  const int threads = std::clamp(cfg.n_threads, 1, parts);
  if (threads == 1) {
    for (int p = 0; p < parts; ++p) worker(p);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int p = t; p < parts; p += threads) worker(p);
      });
    for (auto& th : pool) th.join();
  }

  // Fixed partition order keeps the reduction independent of scheduling.
  KahanSum err, err2;
  long long y_sum = 0, y2_sum = 0;
  for (const Partial& p : partials) {
    err.add(p.err.value());
    err2.add(p.err2.value());
    y_sum += p.y_sum;
    y2_sum += p.y2_sum;
  }

  const double n = static_cast<double>(cfg.n_samples);
  const double mean_y = static_cast<double>(y_sum) / n;
  const double var_y = static_cast<double>(y2_sum) / n - mean_y * mean_y;
  const double mse = err2.value() / n;
  const double csnr = mse < kMseEpsilon ? kInf : 10.0 * std::log10(var_y / mse);
  return SimReport{csnr, mse, err.value() / n, cfg.n_samples, cfg.seed};
}

}  // namespace

SimReport simulate_csnr(const SimConfig& cfg, const UniformAdc& adc) {
  return run_simulation(cfg, UniformEncoder(adc, cfg.delta_imc));
}

SimReport simulate_csnr(const SimConfig& cfg, const GeneralAdc& adc) {
  return run_simulation(cfg, GeneralEncoder(adc, cfg.delta_imc));
}

namespace {

SimConfig default_column_config(const CircuitParams& circuit, int n, long n_samples,
                                std::uint64_t seed, int n_partitions, int n_threads) {
  circuit.validate();
  SimConfig cfg;
  cfg.n = n;
  cfg.delta_imc = delta_imc(circuit, n);
  cfg.sigma_adc = circuit.sigma_adc;
  cfg.sigma_cap_rel = circuit.sigma_cap_rel;
  cfg.p = 0.25;
  cfg.n_samples = n_samples;
  cfg.seed = seed;
  cfg.n_partitions = n_partitions;
  cfg.n_threads = n_threads;
  return cfg;
}

}  // namespace

SimReport simulate_csnr(const CircuitParams& circuit, int n, const UniformAdc& adc,
                        long n_samples, std::uint64_t seed, int n_partitions, int n_threads) {
  SimConfig cfg = default_column_config(circuit, n, n_samples, seed, n_partitions, n_threads);
  AimcParams params(binomial_pmf(n, 0.25), cfg.delta_imc, cfg.sigma_adc);
  cfg.mu_off = mu_off(params, adc);
  return simulate_csnr(cfg, adc);
}

SimReport simulate_csnr(const CircuitParams& circuit, int n, const GeneralAdc& adc,
                        long n_samples, std::uint64_t seed, int n_partitions, int n_threads) {
  SimConfig cfg = default_column_config(circuit, n, n_samples, seed, n_partitions, n_threads);
  AimcParams params(binomial_pmf(n, 0.25), cfg.delta_imc, cfg.sigma_adc);
  cfg.mu_off = accuracy_report_general(params, adc).mu_off;
  return simulate_csnr(cfg, adc);
}

}  // namespace aimc
