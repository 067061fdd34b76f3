#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace odmr {

struct EnsembleDensity {
  double rho = 0.0;   // defects per m^3
  double spin = 1.0;  // spin quantum number
};

// Effective nearest-partner spacing 0.907 * rho^(-1/3), meters.
double r_eff(const EnsembleDensity& density);

struct LatticeSumResult {
  double sum_r6 = 0.0;    // m^-6, most probable per-spin value
  double stderr_ = 0.0;   // m^-6, block-bootstrap standard error
};

// Dominant dipolar partner term of one reference spin: the largest
// r^-6 over all partners with minimum-image distances in a periodic
// cube of side box (m^-6).
double dominant_pair_sum_r6(const std::vector<Eigen::Vector3d>& points,
                            double box, int reference);

// Monte-Carlo estimate of the typical (most probable) per-spin dipolar sum
// for defects placed uniformly at random at the given density. Deterministic
// for a fixed seed, independent of evaluation order. Throws
// std::invalid_argument if n_defects < 100.
LatticeSumResult lattice_sum_mc(const EnsembleDensity& density, int n_defects,
                                std::uint64_t seed, int n_trials);

// Azimuthally averaged local-field variance (tesla^2):
// pi * mu0^2 * hbar^2 * gamma_e^2 * S(S+1) * sum_r6.
double local_field_variance(double sum_r6, double spin);

// Second-to-first hyperbola strength ratio R2 = (2/3) * variance / b_a^2.
double anderson_ratio(double variance_t2, double b_a);

struct DipolarReport {
  double rho = 0.0;          // m^-3
  double r_eff_m = 0.0;
  double sum_r6 = 0.0;       // m^-6
  double sum_r6_stderr = 0.0;
  double variance_T2 = 0.0;
  double B_a_T = 0.0;
  double R2 = 0.0;
  double R2_dB = 0.0;
};

// Full chain: MC lattice sum -> variance -> Anderson ratio at the effective
// field B_a = omega_a / gamma_e.
DipolarReport dipolar_chain(const EnsembleDensity& density, double omega_a,
                            double gamma_e, int n_defects, std::uint64_t seed,
                            int n_trials);

}  // namespace odmr
