#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "odmr/spectrum.hpp"

namespace odmr {

struct Peak {
  double field_T = 0.0;
  double freq_Hz = 0.0;
  double amplitude = 0.0;
  std::string tag;  // family hypothesis, empty if unassigned
};

using PeakSet = std::vector<Peak>;

// Per-column local maxima above threshold*column-max, separated by at least
// min_separation_bins; sub-bin frequency via 3-point parabolic interpolation.
PeakSet extract_peaks(const OdmrMap& map, double threshold, int min_separation_bins);

// Tag each peak with the nearest candidate family within tolerance_hz;
// exact ties leave the peak untagged.
void assign_families(PeakSet& peaks, const std::vector<LineFamily>& candidates,
                     double tolerance_hz);

// Forward model: predicted line frequencies (Hz) at one field value.
class FitModel {
 public:
  virtual ~FitModel() = default;
  virtual std::vector<double> frequencies(const std::vector<double>& params,
                                          double field_T) const = 0;
  virtual std::vector<std::string> family_labels() const = 0;
  virtual std::vector<std::string> parameter_names() const = 0;
};

struct FitProblem {
  PeakSet peaks;
  const FitModel* model = nullptr;
  std::vector<double> initial;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> frozen;  // empty = all free
};

struct FitOptions {
  int n_restarts = 8;
  int max_iterations = 2000;
  double simplex_tol = 1e-10;  // diameter in scaled coordinates
  std::uint64_t seed = 0;
  int n_bootstrap = 0;  // residual-bootstrap resamples for confidence
};

struct FitResult {
  std::vector<double> parameters;
  double residual_rms_hz = 0.0;
  bool converged = false;
  std::vector<double> ci_low;   // 2.5% bootstrap percentile (if requested)
  std::vector<double> ci_high;  // 97.5%
  int n_peaks = 0;
};

// Sum-of-squared-frequency-residual loss at the given parameters.
double fit_loss(const FitProblem& problem, const std::vector<double>& params);

// Derivative-free simplex descent with seeded random restarts within bounds.
// Deterministic for a fixed seed. Throws std::invalid_argument for
// under-determined problems.
FitResult fit_parameters(const FitProblem& problem, const FitOptions& options = {});

// ---- Built-in models ----

// NV transition frequencies of the selected orientations as a function of
// the misalignment angles. Parameters: theta_deg, phi_deg, d_zfs_hz.
class MisalignmentModel : public FitModel {
 public:
  MisalignmentModel(std::vector<Orientation> orientations, NvParameters base,
                    FieldConfiguration cfg_template);
  std::vector<double> frequencies(const std::vector<double>& params,
                                  double field_T) const override;
  std::vector<std::string> family_labels() const override;
  std::vector<std::string> parameter_names() const override;

 private:
  std::vector<Orientation> orientations_;
  NvParameters base_;
  FieldConfiguration cfg_;
};

// Closed-form GSLAC hyperbola. Parameters: psi_deg, d_zfs_hz.
class GslacModel : public FitModel {
 public:
  explicit GslacModel(NvParameters base);
  std::vector<double> frequencies(const std::vector<double>& params,
                                  double field_T) const override;
  std::vector<std::string> family_labels() const override;
  std::vector<std::string> parameter_names() const override;

 private:
  NvParameters base_;
};

// Arc family for indices n = 1..n_max.
// Parameters: f_arc_hz, b_arc_T, b_center_T.
class ArcModel : public FitModel {
 public:
  explicit ArcModel(int n_max);
  std::vector<double> frequencies(const std::vector<double>& params,
                                  double field_T) const override;
  std::vector<std::string> family_labels() const override;
  std::vector<std::string> parameter_names() const override;

 private:
  int n_max_;
};

// Acoustic comb n*f_a for n = 1..n_max. Parameter: f_a_hz.
class CombModel : public FitModel {
 public:
  explicit CombModel(int n_max);
  std::vector<double> frequencies(const std::vector<double>& params,
                                  double field_T) const override;
  std::vector<std::string> family_labels() const override;
  std::vector<std::string> parameter_names() const override;

 private:
  int n_max_;
};

}  // namespace odmr
