#include "odmr/dipolar.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "odmr/constants.hpp"

namespace odmr {

double r_eff(const EnsembleDensity& density) {
  if (!(density.rho > 0)) {
    throw std::invalid_argument("r_eff: density must be positive");
  }
  return 0.907 * std::pow(density.rho, -1.0 / 3.0);
}

double dominant_pair_sum_r6(const std::vector<Eigen::Vector3d>& points, double box,
                            int reference) {
  const Eigen::Vector3d& p = points[reference];
  double best = 0.0;
  for (int j = 0; j < static_cast<int>(points.size()); ++j) {
    if (j == reference) continue;
    Eigen::Vector3d d = points[j] - p;
    for (int k = 0; k < 3; ++k) d[k] -= box * std::round(d[k] / box);
    const double r2 = d.squaredNorm();
    if (r2 > 0) best = std::max(best, 1.0 / (r2 * r2 * r2));
  }
  return best;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d49bb133111ebull;
  return z ^ (z >> 31);
}

// Most probable value of a positive-valued heavy-tailed sample: maximize
// the density of v via a Gaussian kernel estimate in log space,
// p_v(v) = p_x(ln v)/v.
double log_kde_mode(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const size_t n = samples.size();
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = std::log(samples[i]);

  double mean = 0.0;
  for (double xi : x) mean += xi;
  mean /= n;
  double var = 0.0;
  for (double xi : x) var += (xi - mean) * (xi - mean);
  var /= std::max<size_t>(1, n - 1);
  const double iqr = x[(3 * n) / 4] - x[n / 4];
  const double sigma = std::min(std::sqrt(var), iqr / 1.34);
  const double h = std::max(1e-6, 0.9 * sigma * std::pow(double(n), -0.2));

  const double lo = x.front();
  const double hi = x[(99 * n) / 100];
  const int grid = 512;
  double best_val = -1e300;
  double best_x = lo;
  for (int g = 0; g < grid; ++g) {
    const double xg = lo + (hi - lo) * g / (grid - 1);
    double dens = 0.0;
    for (double xi : x) {
      const double u = (xg - xi) / h;
      dens += std::exp(-0.5 * u * u);
    }
    // log density of v at v = e^xg is log(dens) - xg (up to constants)
    const double val = std::log(std::max(dens, 1e-300)) - xg;
    if (val > best_val) {
      best_val = val;
      best_x = xg;
    }
  }
  return std::exp(best_x);
}

}  // namespace

LatticeSumResult lattice_sum_mc(const EnsembleDensity& density, int n_defects,
                                std::uint64_t seed, int n_trials) {
  if (n_defects < 100) {
    throw std::invalid_argument("lattice_sum_mc: need at least 100 defects");
  }
  if (n_trials < 1) {
    throw std::invalid_argument("lattice_sum_mc: need at least one trial");
  }
  if (!(density.rho > 0)) {
    throw std::invalid_argument("lattice_sum_mc: density must be positive");
  }
  const double box = std::pow(n_defects / density.rho, 1.0 / 3.0);
  if (box < 10.0 * r_eff(density)) {
    throw std::invalid_argument("lattice_sum_mc: box smaller than 10*r_eff");
  }

  std::vector<double> samples;
  samples.reserve(static_cast<size_t>(n_defects) * n_trials);
  std::vector<Eigen::Vector3d> pts(n_defects);
  for (int t = 0; t < n_trials; ++t) {
    // Per-trial substream: reproducible regardless of evaluation order.
    std::uint64_t s = seed;
    std::uint64_t trial_seed = splitmix64(s) ^ (0x2545f4914f6cdd1dull * (t + 1));
    std::mt19937_64 rng(trial_seed);
    std::uniform_real_distribution<double> uni(0.0, box);
    for (auto& p : pts) p = Eigen::Vector3d(uni(rng), uni(rng), uni(rng));
    for (int i = 0; i < n_defects; ++i) {
      samples.push_back(dominant_pair_sum_r6(pts, box, i));
    }
  }

  LatticeSumResult out;
  out.sum_r6 = log_kde_mode(samples);

  // Block bootstrap over trials for the standard error.
  const int n_blocks = std::min(10, n_trials);
  const size_t per_trial = n_defects;
  std::vector<double> block_modes;
  for (int b = 0; b < n_blocks; ++b) {
    std::vector<double> block;
    for (int t = b; t < n_trials; t += n_blocks) {
      const size_t off = static_cast<size_t>(t) * per_trial;
      block.insert(block.end(), samples.begin() + off,
                   samples.begin() + off + per_trial);
    }
    block_modes.push_back(log_kde_mode(block));
  }
  double mean = 0.0;
  for (double m : block_modes) mean += m;
  mean /= block_modes.size();
  double var = 0.0;
  for (double m : block_modes) var += (m - mean) * (m - mean);
  var /= std::max<size_t>(1, block_modes.size() - 1);
  out.stderr_ = std::sqrt(var / block_modes.size());
  return out;
}

double local_field_variance(double sum_r6, double spin) {
  if (sum_r6 < 0) {
    throw std::invalid_argument("local_field_variance: sum_r6 must be >= 0");
  }
  const double gamma_e = constants::two_pi * 28.03e9;
  const double s2 = spin * (spin + 1.0);
  return constants::pi * constants::mu0 * constants::mu0 * constants::hbar *
         constants::hbar * gamma_e * gamma_e * s2 * sum_r6;
}

double anderson_ratio(double variance_t2, double b_a) {
  if (!(b_a > 0)) throw std::invalid_argument("anderson_ratio: b_a must be positive");
  return (2.0 / 3.0) * variance_t2 / (b_a * b_a);
}

DipolarReport dipolar_chain(const EnsembleDensity& density, double omega_a,
                            double gamma_e, int n_defects, std::uint64_t seed,
                            int n_trials) {
  DipolarReport rep;
  rep.rho = density.rho;
  rep.r_eff_m = r_eff(density);
  const LatticeSumResult mc = lattice_sum_mc(density, n_defects, seed, n_trials);
  rep.sum_r6 = mc.sum_r6;
  rep.sum_r6_stderr = mc.stderr_;
  rep.variance_T2 = local_field_variance(mc.sum_r6, density.spin);
  rep.B_a_T = omega_a / gamma_e;
  rep.R2 = anderson_ratio(rep.variance_T2, rep.B_a_T);
  rep.R2_dB = 10.0 * std::log10(rep.R2);
  return rep;
}

}  // namespace odmr
