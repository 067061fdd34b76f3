#include "odmr/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace odmr {

PeakSet extract_peaks(const OdmrMap& map, double threshold, int min_separation_bins) {
  if (!(threshold > 0) || !(threshold < 1)) {
    throw std::invalid_argument("extract_peaks: threshold must be in (0,1)");
  }
  map.validate();
  PeakSet peaks;
  const Eigen::Index rows = map.intensity.rows();
  for (Eigen::Index c = 0; c < map.intensity.cols(); ++c) {
    const auto col = map.intensity.col(c);
    const double colmax = col.maxCoeff();
    if (!(colmax > 0)) continue;
    const double cut = threshold * colmax;

    struct Cand {
      Eigen::Index row;
      double value;
    };
    std::vector<Cand> cands;
    for (Eigen::Index r = 1; r + 1 < rows; ++r) {
      if (col(r) >= cut && col(r) >= col(r - 1) && col(r) > col(r + 1)) {
        cands.push_back({r, col(r)});
      }
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Cand& a, const Cand& b) { return a.value > b.value; });
    std::vector<Eigen::Index> kept;
    for (const Cand& cd : cands) {
      bool ok = true;
      for (Eigen::Index k : kept) {
        if (std::abs(k - cd.row) < min_separation_bins) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      kept.push_back(cd.row);
      // 3-point parabolic sub-bin refinement
      const double y0 = col(cd.row - 1), y1 = col(cd.row), y2 = col(cd.row + 1);
      const double denom = y0 - 2 * y1 + y2;
      double delta = 0.0;
      if (denom != 0.0) delta = 0.5 * (y0 - y2) / denom;
      delta = std::clamp(delta, -0.5, 0.5);
      const double df = (cd.row + 1 < rows)
                            ? map.freq_axis[cd.row + 1] - map.freq_axis[cd.row]
                            : map.freq_axis[cd.row] - map.freq_axis[cd.row - 1];
      Peak p;
      p.field_T = map.field_axis[c];
      p.freq_Hz = map.freq_axis[cd.row] + delta * df;
      p.amplitude = y1;
      peaks.push_back(p);
    }
  }
  return peaks;
}

namespace {

double family_freq_at(const LineFamily& fam, double field) {
  const auto& x = fam.field_T;
  if (x.empty() || field < x.front() - 1e-15 || field > x.back() + 1e-15) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  auto it = std::lower_bound(x.begin(), x.end(), field);
  if (it == x.begin()) return fam.freq_Hz.front();
  const size_t i = it - x.begin();
  if (i >= x.size()) return fam.freq_Hz.back();
  const double x1 = x[i - 1], x2 = x[i];
  if (x2 == x1) return fam.freq_Hz[i];
  const double t = (field - x1) / (x2 - x1);
  return fam.freq_Hz[i - 1] * (1 - t) + fam.freq_Hz[i] * t;
}

}  // namespace

void assign_families(PeakSet& peaks, const std::vector<LineFamily>& candidates,
                     double tolerance_hz) {
  for (Peak& p : peaks) {
    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    const LineFamily* winner = nullptr;
    for (const auto& fam : candidates) {
      const double f = family_freq_at(fam, p.field_T);
      if (std::isnan(f)) continue;
      const double d = std::abs(f - p.freq_Hz);
      if (d < best) {
        second = best;
        best = d;
        winner = &fam;
      } else if (d < second) {
        second = d;
      }
    }
    p.tag.clear();
    if (winner && best <= tolerance_hz && second > best) {
      p.tag = winner->label();
    }
  }
}

double fit_loss(const FitProblem& problem, const std::vector<double>& params) {
  const auto labels = problem.model->family_labels();
  double loss = 0.0;
  for (const Peak& p : problem.peaks) {
    const std::vector<double> pred = problem.model->frequencies(params, p.field_T);
    double r = std::numeric_limits<double>::infinity();
    if (!p.tag.empty()) {
      for (size_t i = 0; i < labels.size() && i < pred.size(); ++i) {
        if (labels[i] == p.tag) {
          r = std::abs(pred[i] - p.freq_Hz);
          break;
        }
      }
    }
    if (std::isinf(r)) {
      for (double f : pred) r = std::min(r, std::abs(f - p.freq_Hz));
    }
    if (std::isinf(r)) r = 0.0;  // model predicts nothing at this field
    loss += r * r;
  }
  return loss;
}

namespace {

struct ReducedProblem {
  const FitProblem* full;
  std::vector<int> free_idx;
  std::vector<double> scale;  // per free parameter

  std::vector<double> expand(const std::vector<double>& reduced) const {
    std::vector<double> p = full->initial;
    for (size_t i = 0; i < free_idx.size(); ++i) p[free_idx[i]] = reduced[i];
    return p;
  }
};

// Standard Nelder-Mead with bound clamping; returns best point found.
std::pair<std::vector<double>, double> nelder_mead(
    const ReducedProblem& rp, std::vector<double> start, int max_iter, double tol) {
  const size_t n = start.size();
  const auto& lo = rp.full->lower;
  const auto& hi = rp.full->upper;
  auto clampv = [&](std::vector<double>& x) {
    for (size_t i = 0; i < n; ++i) {
      const int j = rp.free_idx[i];
      if (j < static_cast<int>(lo.size())) x[i] = std::max(x[i], lo[j]);
      if (j < static_cast<int>(hi.size())) x[i] = std::min(x[i], hi[j]);
    }
  };
  auto eval = [&](std::vector<double> x) {
    clampv(x);
    return fit_loss(*rp.full, rp.expand(x));
  };

  std::vector<std::vector<double>> simplex;
  std::vector<double> fvals;
  clampv(start);
  simplex.push_back(start);
  for (size_t i = 0; i < n; ++i) {
    auto v = start;
    v[i] += 0.05 * rp.scale[i];
    clampv(v);
    if (v[i] == start[i]) v[i] -= 0.05 * rp.scale[i];
    simplex.push_back(v);
  }
  for (auto& v : simplex) fvals.push_back(eval(v));

  auto order = [&]() {
    std::vector<size_t> idx(simplex.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](size_t a, size_t b) { return fvals[a] < fvals[b]; });
    std::vector<std::vector<double>> s2;
    std::vector<double> f2;
    for (size_t i : idx) {
      s2.push_back(simplex[i]);
      f2.push_back(fvals[i]);
    }
    simplex.swap(s2);
    fvals.swap(f2);
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    order();
    // scaled simplex diameter
    double diam = 0.0;
    for (size_t i = 1; i < simplex.size(); ++i) {
      for (size_t k = 0; k < n; ++k) {
        diam = std::max(diam,
                        std::abs(simplex[i][k] - simplex[0][k]) / rp.scale[k]);
      }
    }
    if (diam < tol) break;

    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i + 1 < simplex.size(); ++i) {
      for (size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k];
    }
    for (size_t k = 0; k < n; ++k) centroid[k] /= n;

    auto combine = [&](double coeff) {
      std::vector<double> x(n);
      for (size_t k = 0; k < n; ++k) {
        x[k] = centroid[k] + coeff * (simplex.back()[k] - centroid[k]);
      }
      clampv(x);
      return x;
    };

    auto xr = combine(-1.0);
    const double fr = eval(xr);
    if (fr < fvals[0]) {
      auto xe = combine(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex.back() = xe;
        fvals.back() = fe;
      } else {
        simplex.back() = xr;
        fvals.back() = fr;
      }
    } else if (fr < fvals[fvals.size() - 2]) {
      simplex.back() = xr;
      fvals.back() = fr;
    } else {
      const bool outside = fr < fvals.back();
      auto xc = combine(outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < std::min(fr, fvals.back())) {
        simplex.back() = xc;
        fvals.back() = fc;
      } else {
        // shrink toward the best vertex
        for (size_t i = 1; i < simplex.size(); ++i) {
          for (size_t k = 0; k < n; ++k) {
            simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
          }
          clampv(simplex[i]);
          fvals[i] = eval(simplex[i]);
        }
      }
    }
  }
  order();
  return {simplex[0], fvals[0]};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d49bb133111ebull;
  return z ^ (z >> 31);
}

FitResult solve_once(const FitProblem& problem, const FitOptions& options) {
  const size_t n_params = problem.initial.size();
  ReducedProblem rp;
  rp.full = &problem;
  for (size_t i = 0; i < n_params; ++i) {
    const bool frozen = i < problem.frozen.size() && problem.frozen[i];
    if (!frozen) rp.free_idx.push_back(static_cast<int>(i));
  }
  if (problem.peaks.size() < rp.free_idx.size()) {
    throw std::invalid_argument("fit_parameters: under-determined problem");
  }

  FitResult res;
  res.n_peaks = static_cast<int>(problem.peaks.size());
  if (rp.free_idx.empty()) {
    res.parameters = problem.initial;
    res.residual_rms_hz = std::sqrt(fit_loss(problem, problem.initial) /
                                    std::max<size_t>(1, problem.peaks.size()));
    res.converged = true;
    return res;
  }

  for (int j : rp.free_idx) {
    double s = 1.0;
    if (j < static_cast<int>(problem.lower.size()) &&
        j < static_cast<int>(problem.upper.size()) &&
        problem.upper[j] > problem.lower[j]) {
      s = problem.upper[j] - problem.lower[j];
    } else if (problem.initial[j] != 0.0) {
      s = std::abs(problem.initial[j]);
    }
    rp.scale.push_back(s);
  }

  std::vector<double> start0;
  for (int j : rp.free_idx) start0.push_back(problem.initial[j]);
  const double initial_loss = fit_loss(problem, problem.initial);

  std::vector<double> best = start0;
  double best_loss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, options.n_restarts); ++r) {
    std::vector<double> start = start0;
    if (r > 0) {
      std::mt19937_64 rng(mix_seed(options.seed, r));
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      for (size_t i = 0; i < start.size(); ++i) {
        const int j = rp.free_idx[i];
        if (j < static_cast<int>(problem.lower.size()) &&
            j < static_cast<int>(problem.upper.size()) &&
            problem.upper[j] > problem.lower[j]) {
          start[i] = problem.lower[j] +
                     uni(rng) * (problem.upper[j] - problem.lower[j]);
        } else {
          start[i] = start0[i] * (0.5 + uni(rng));
        }
      }
    }
    auto [x, f] =
        nelder_mead(rp, start, options.max_iterations, options.simplex_tol);
    if (f < best_loss) {
      best_loss = f;
      best = x;
    }
  }

  res.parameters = rp.expand(best);
  res.residual_rms_hz =
      std::sqrt(best_loss / std::max<size_t>(1, problem.peaks.size()));
  res.converged = best_loss <= initial_loss + 1e-30;
  if (best_loss > initial_loss) {
    res.parameters = problem.initial;
    res.residual_rms_hz =
        std::sqrt(initial_loss / std::max<size_t>(1, problem.peaks.size()));
    res.converged = false;
  }
  return res;
}

}  // namespace

FitResult fit_parameters(const FitProblem& problem, const FitOptions& options) {
  if (!problem.model) throw std::invalid_argument("fit_parameters: missing model");
  FitResult res = solve_once(problem, options);

  if (options.n_bootstrap > 0 && !problem.peaks.empty()) {
    const size_t n_params = problem.initial.size();
    std::vector<std::vector<double>> samples(n_params);
    FitOptions boot_opts = options;
    boot_opts.n_restarts = 1;
    boot_opts.max_iterations = std::min(options.max_iterations, 400);
    boot_opts.n_bootstrap = 0;
    for (int b = 0; b < options.n_bootstrap; ++b) {
      std::mt19937_64 rng(mix_seed(options.seed ^ 0xb00757ull, b));
      std::uniform_int_distribution<size_t> pick(0, problem.peaks.size() - 1);
      FitProblem bp = problem;
      bp.initial = res.parameters;  // refit from the optimum
      bp.peaks.clear();
      for (size_t i = 0; i < problem.peaks.size(); ++i) {
        bp.peaks.push_back(problem.peaks[pick(rng)]);
      }
      const FitResult br = solve_once(bp, boot_opts);
      for (size_t k = 0; k < n_params; ++k) samples[k].push_back(br.parameters[k]);
    }
    res.ci_low.resize(n_params);
    res.ci_high.resize(n_params);
    for (size_t k = 0; k < n_params; ++k) {
      std::sort(samples[k].begin(), samples[k].end());
      const size_t n = samples[k].size();
      res.ci_low[k] = samples[k][static_cast<size_t>(0.025 * (n - 1))];
      res.ci_high[k] = samples[k][static_cast<size_t>(0.975 * (n - 1))];
    }
  }
  return res;
}

// ---- Built-in models ----

MisalignmentModel::MisalignmentModel(std::vector<Orientation> orientations,
                                     NvParameters base, FieldConfiguration cfg_template)
    : orientations_(std::move(orientations)), base_(base), cfg_(cfg_template) {}

std::vector<double> MisalignmentModel::frequencies(const std::vector<double>& params,
                                                   double field_T) const {
  NvParameters p = base_;
  FieldConfiguration cfg = cfg_;
  cfg.b_main = field_T;
  cfg.theta_mis = constants::deg_to_rad(params.at(0));
  cfg.phi_mis = constants::deg_to_rad(params.at(1));
  if (params.size() > 2) p.d_zfs = constants::two_pi * params[2];

  const Eigen::Vector3d b_cr = lab_field_vector(cfg);
  std::vector<double> out;
  for (Orientation o : orientations_) {
    const DefectFrameField f = defect_frame_field(b_cr, crystal_axes::axis(o));
    const EigenDecomposition d =
        eigh(build_nv_hamiltonian(Eigen::Vector3d(f.b_perp, 0, f.b_par), p));
    const std::vector<int> basis_of = assign_basis_indices(d);
    double energy_of[3];
    for (int k = 0; k < 3; ++k) energy_of[basis_of[k]] = d.eigenvalues[k];
    // basis 0 = label -1, basis 1 = label 0, basis 2 = label +1
    out.push_back(std::abs(energy_of[0] - energy_of[1]) / constants::two_pi);
    out.push_back(std::abs(energy_of[2] - energy_of[1]) / constants::two_pi);
    out.push_back(std::abs(energy_of[0] - energy_of[2]) / constants::two_pi);
  }
  return out;
}

std::vector<std::string> MisalignmentModel::family_labels() const {
  std::vector<std::string> out;
  for (Orientation o : orientations_) {
    const std::string n = orientation_name(o);
    out.push_back("nv_single/" + n + "/T(-1,0)");
    out.push_back("nv_single/" + n + "/T(+1,0)");
    out.push_back("nv_single/" + n + "/T(-1,+1)");
  }
  return out;
}

std::vector<std::string> MisalignmentModel::parameter_names() const {
  return {"theta_deg", "phi_deg", "d_zfs_hz"};
}

GslacModel::GslacModel(NvParameters base) : base_(base) {}

std::vector<double> GslacModel::frequencies(const std::vector<double>& params,
                                            double field_T) const {
  NvParameters p = base_;
  if (params.size() > 1) p.d_zfs = constants::two_pi * params[1];
  return {gslac_frequency(constants::deg_to_rad(params.at(0)), field_T, p)};
}

std::vector<std::string> GslacModel::family_labels() const {
  return {"gslac_hyperbola/alpha"};
}

std::vector<std::string> GslacModel::parameter_names() const {
  return {"psi_deg", "d_zfs_hz"};
}

ArcModel::ArcModel(int n_max) : n_max_(n_max) {}

std::vector<double> ArcModel::frequencies(const std::vector<double>& params,
                                          double field_T) const {
  const double f_arc = params.at(0);
  const double b_arc = params.at(1);
  const double b_center = params.at(2);
  std::vector<double> out;
  for (int n = 1; n <= n_max_; ++n) {
    out.push_back(f_arc * std::abs(std::tanh((field_T - b_center) / (n * b_arc))));
  }
  return out;
}

std::vector<std::string> ArcModel::family_labels() const {
  std::vector<std::string> out;
  for (int n = 1; n <= n_max_; ++n) out.push_back("arc:" + std::to_string(n));
  return out;
}

std::vector<std::string> ArcModel::parameter_names() const {
  return {"f_arc_hz", "b_arc_T", "b_center_T"};
}

CombModel::CombModel(int n_max) : n_max_(n_max) {}

std::vector<double> CombModel::frequencies(const std::vector<double>& params,
                                           double /*field_T*/) const {
  std::vector<double> out;
  for (int n = 1; n <= n_max_; ++n) out.push_back(n * params.at(0));
  return out;
}

std::vector<std::string> CombModel::family_labels() const {
  std::vector<std::string> out;
  for (int n = 1; n <= n_max_; ++n) out.push_back("acoustic:" + std::to_string(n));
  return out;
}

std::vector<std::string> CombModel::parameter_names() const { return {"f_a_hz"}; }

}  // namespace odmr
