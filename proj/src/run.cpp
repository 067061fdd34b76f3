#include "odmr/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "odmr/dipolar.hpp"
#include "odmr/fit.hpp"
#include "odmr/lines.hpp"
#include "odmr/spectrum.hpp"

namespace odmr {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

const std::set<std::string> kSweepKeys = {
    "field_start", "field_stop", "field_points", "theta", "phi", "coil1",
    "coil2", "compensate_at", "compensate", "orientations", "families",
    "d_zfs", "e_strain", "gamma_e", "gamma_n", "quadrupole_q",
    "hyperfine_par", "hyperfine_perp", "psi", "p1_max_order", "f_a",
    "n_acoustic", "f_arc", "b_arc", "arc_n_max", "b_center",
    "weight_nv_single", "weight_gslac_hyperbola", "weight_flip_flip",
    "weight_flip_flop", "weight_gslac_fraction", "weight_p1",
    "weight_acoustic", "weight_arc",
};

const std::set<std::string> kMapKeys = {
    "freq_start", "freq_stop", "freq_points", "linewidth", "amplitude", "clip",
    "linewidth_nv_single", "linewidth_gslac_hyperbola", "linewidth_flip_flip",
    "linewidth_flip_flop", "linewidth_gslac_fraction", "linewidth_p1",
    "linewidth_acoustic", "linewidth_arc",
    "amplitude_nv_single", "amplitude_gslac_hyperbola", "amplitude_flip_flip",
    "amplitude_flip_flop", "amplitude_gslac_fraction", "amplitude_p1",
    "amplitude_acoustic", "amplitude_arc",
};

const std::set<std::string> kFitKeys = {
    "peaks", "map", "threshold", "min_separation", "assign_tolerance",
    "fit_model", "theta_init", "phi_init", "psi_init", "f_arc_init",
    "b_arc_init", "b_center_init", "f_a_init", "frozen", "n_restarts",
    "max_iterations", "n_bootstrap", "theta_min", "theta_max", "phi_min",
    "phi_max", "psi_min", "psi_max",
};

const std::set<std::string> kDipolarKeys = {
    "rho", "spin", "n_defects", "n_trials", "f_resonance", "p1_visibility",
    "gamma_e",
};

const std::set<std::string> kAcousticKeys = {"f_a", "thickness", "n_acoustic"};

std::set<std::string> merge(std::initializer_list<std::set<std::string>> sets) {
  std::set<std::string> out;
  for (const auto& s : sets) out.insert(s.begin(), s.end());
  return out;
}

NvParameters nv_params_from(const RunConfig& c) {
  NvParameters p;
  p.d_zfs = constants::two_pi * c.get_hz("d_zfs", 2.87e9);
  p.e_strain = constants::two_pi * c.get_hz("e_strain", 0.0);
  p.gamma_e = constants::two_pi * c.get_hz_per_tesla("gamma_e", 28.03e9);
  p.validate();
  return p;
}

P1Parameters p1_params_from(const RunConfig& c) {
  P1Parameters p;
  p.gamma_e = constants::two_pi * c.get_hz_per_tesla("gamma_e", 28.03e9);
  p.gamma_n = constants::two_pi * c.get_hz_per_tesla("gamma_n", 3.0766e6);
  p.quadrupole_q = constants::two_pi * c.get_hz("quadrupole_q", -3.97e6);
  p.hyperfine_par = constants::two_pi * c.get_hz("hyperfine_par", 114e6);
  p.hyperfine_perp = constants::two_pi * c.get_hz("hyperfine_perp", 81.3e6);
  p.validate();
  return p;
}

SweepGrid grid_from(const RunConfig& c) {
  SweepGrid g;
  g.field_start = c.get_tesla("field_start", 0.0);
  g.field_stop = c.get_tesla("field_stop", 0.16);
  g.n_field = c.get_int("field_points", 401);
  g.cfg.theta_mis = c.get_rad("theta", constants::deg_to_rad(2.86));
  g.cfg.phi_mis = c.get_rad("phi", constants::deg_to_rad(1.71));
  g.cfg.b_coil1 = c.get_tesla("coil1", 0.0);
  g.cfg.b_coil2 = c.get_tesla("coil2", 0.0);
  if (c.has("compensate_at")) {
    g.coil_mode = CoilMode::compensate_at;
    g.compensate_field = c.get_tesla("compensate_at");
  } else if (c.get_string("compensate", "") == "tracking") {
    g.coil_mode = CoilMode::compensate_tracking;
  }
  g.validate();
  return g;
}

std::vector<Orientation> orientations_from(const RunConfig& c) {
  std::vector<Orientation> out;
  auto names = c.get_list("orientations");
  if (names.empty()) names = {"alpha", "beta", "gamma", "delta"};
  for (const auto& n : names) out.push_back(orientation_from_name(n));
  return out;
}

const LineFamily* find_family(const std::vector<LineFamily>& fams, LineClass cls,
                              Orientation o, int i, int j) {
  for (const auto& f : fams) {
    if (f.cls == cls && f.orientation == o && f.level_i == i && f.level_j == j) {
      return &f;
    }
  }
  return nullptr;
}

std::vector<LineFamily> build_families(const RunConfig& c) {
  const SweepGrid grid = grid_from(c);
  const NvParameters nv = nv_params_from(c);
  const P1Parameters p1 = p1_params_from(c);
  const auto orientations = orientations_from(c);

  auto tokens = c.get_list("families");
  if (tokens.empty()) tokens = {"nv_single"};
  auto enabled = [&](const std::string& t) {
    for (const auto& tok : tokens) {
      if (tok == t || tok.rfind(t + ":", 0) == 0) return true;
    }
    return false;
  };

  std::vector<LineFamily> out;
  if (enabled("nv_single")) {
    for (Orientation o : orientations) {
      for (auto& f : nv_transitions(grid, o, nv)) out.push_back(std::move(f));
    }
  }
  const bool want_flip_flop = enabled("flip_flop");
  const bool want_flip_flip = enabled("flip_flip");
  bool want_fraction = false;
  std::vector<int> fraction_ls;
  for (const auto& tok : tokens) {
    if (tok.rfind("fraction:", 0) == 0) {
      want_fraction = true;
      fraction_ls.push_back(std::stoi(tok.substr(9)));
    }
  }

  std::optional<LineFamily> gslac;
  if (enabled("gslac") || c.has("psi")) {
    gslac = gslac_line(grid, c.get_rad("psi", constants::deg_to_rad(0.8)), nv);
    if (enabled("gslac")) out.push_back(*gslac);
  }

  // Parent for flip-flip / fractional lines: the closed-form hyperbola when
  // psi is configured, else the diagonalized T(-1,0) of alpha.
  std::optional<LineFamily> parent;
  if (gslac) {
    parent = *gslac;
  } else if (want_flip_flip || want_fraction) {
    auto fams = nv_transitions(grid, Orientation::alpha, nv);
    parent = fams[0];  // T(-1,0)
  }
  if (want_flip_flip && parent) out.push_back(flip_flip_line(*parent));
  for (int l : fraction_ls) {
    if (parent) out.push_back(fractional_lines(*parent, l));
  }

  std::vector<LineFamily> p1_fams;
  if (enabled("p1")) {
    const int max_order = c.get_int("p1_max_order", 3);
    for (Orientation o : orientations) {
      for (auto& f : p1_transitions(grid, o, p1, max_order)) {
        p1_fams.push_back(f);
        out.push_back(std::move(f));
      }
    }
  }

  if (want_flip_flop) {
    // NV-NV: T(-1,+1) of the non-parallel orientations minus T(-1,0) of alpha.
    auto alpha_fams = nv_transitions(grid, Orientation::alpha, nv);
    const LineFamily& black = alpha_fams[0];  // T(-1,0)_alpha
    for (Orientation o :
         {Orientation::beta, Orientation::gamma, Orientation::delta}) {
      auto fams = nv_transitions(grid, o, nv);
      out.push_back(flip_flop_lines(fams[2], black));  // T(-1,+1)_o
    }
    // NV-P1: the P1 mI=0 electron-flip partner.
    for (const auto& pf : p1_fams) {
      if (pf.sub == 1 && pf.component.rfind("mI=0", 0) == 0) {
        out.push_back(flip_flop_lines(pf, black));
      }
    }
  }

  if (enabled("acoustic")) {
    for (auto& f :
         acoustic_comb(c.get_hz("f_a", 20.4e6), c.get_int("n_acoustic", 5), grid)) {
      out.push_back(std::move(f));
    }
  }
  if (enabled("arc")) {
    const int n_max = c.get_int("arc_n_max", 4);
    for (int n = 1; n <= n_max; ++n) {
      out.push_back(arc_family(c.get_hz("f_arc", 13.9e6),
                               c.get_tesla("b_arc", 0.89e-3), n,
                               c.get_tesla("b_center", 102.4e-3), grid));
    }
  }

  for (auto& f : out) {
    const std::string key = "weight_" + line_class_name(f.cls);
    f.weight = c.get_number(key, f.weight);
  }
  return out;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

void write_manifest(const RunContext& ctx, const std::string& command,
                    const std::vector<std::string>& outputs,
                    Json extra = Json::object()) {
  Json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["seed"] = ctx.seed;
  m["config_hash"] = hex64(ctx.config.hash());
  Json cfg = Json::object();
  for (const auto& [k, v] : ctx.config.entries()) cfg[k] = v.raw;
  m["config"] = cfg;
  m["outputs"] = outputs;
  if (!extra.empty()) m["details"] = extra;
  std::ofstream out(fs::path(ctx.out_dir) / "manifest.json");
  out << m.dump(2) << '\n';
}

ClassValueMap class_map_from(const RunConfig& c, const std::string& prefix,
                             double fallback) {
  ClassValueMap m;
  if (prefix == "linewidth") {
    m.default_value = c.get_hz(prefix, fallback);
  } else {
    m.default_value = c.get_number(prefix, fallback);
  }
  for (LineClass cls :
       {LineClass::nv_single, LineClass::gslac_hyperbola, LineClass::flip_flip,
        LineClass::flip_flop, LineClass::gslac_fraction, LineClass::p1,
        LineClass::acoustic, LineClass::arc}) {
    const std::string key = prefix + "_" + line_class_name(cls);
    if (c.has(key)) {
      m.by_class[cls] =
          (prefix == "linewidth") ? c.get_hz(key) : c.get_number(key, 0.0);
    }
  }
  return m;
}

Json families_json(const std::vector<LineFamily>& fams) {
  Json arr = Json::array();
  for (const auto& f : fams) {
    Json j;
    j["label"] = f.label();
    j["class"] = line_class_name(f.cls);
    j["sub"] = f.sub;
    j["orientation"] = f.orientation ? orientation_name(*f.orientation) : "none";
    j["levels"] = {f.level_i, f.level_j};
    j["weight"] = f.weight;
    j["n_samples"] = f.field_T.size();
    if (!f.clamped.empty()) j["n_clamped"] = f.clamped.size();
    arr.push_back(j);
  }
  return arr;
}

PeakSet load_peaks_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open peaks file: " + path);
  PeakSet peaks;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    Peak p;
    std::getline(ls, cell, ',');
    p.field_T = std::stod(cell);
    std::getline(ls, cell, ',');
    p.freq_Hz = std::stod(cell);
    if (std::getline(ls, cell, ',')) p.amplitude = std::stod(cell);
    if (std::getline(ls, cell, ',')) p.tag = cell;
    peaks.push_back(p);
  }
  return peaks;
}

void write_peaks_csv(const PeakSet& peaks, const std::string& path) {
  std::ofstream out(path);
  out << "field_T,freq_Hz,amplitude,tag\n";
  out << std::setprecision(9);
  for (const auto& p : peaks) {
    out << p.field_T << ',' << p.freq_Hz << ',' << p.amplitude << ',' << p.tag
        << '\n';
  }
}

}  // namespace

int cmd_lines(const RunContext& ctx) {
  ctx.config.require_known(kSweepKeys);
  const auto families = build_families(ctx.config);
  fs::create_directories(ctx.out_dir);
  const std::string csv = (fs::path(ctx.out_dir) / "lines.csv").string();
  write_families_csv(families, csv);

  Json extra;
  extra["families"] = families_json(families);
  std::ofstream jm(fs::path(ctx.out_dir) / "families.json");
  jm << extra.dump(2) << '\n';
  write_manifest(ctx, "lines", {"lines.csv", "families.json"}, extra);
  return 0;
}

int cmd_map(const RunContext& ctx) {
  ctx.config.require_known(merge({kSweepKeys, kMapKeys}));
  const RunConfig& c = ctx.config;
  const auto families = build_families(c);

  const auto field_axis = grid_from(c).fields();
  const auto freq_axis = linspace(c.get_hz("freq_start", 0.0),
                                  c.get_hz("freq_stop", 6e9),
                                  c.get_int("freq_points", 600));
  const ClassValueMap widths = class_map_from(c, "linewidth", 1e6);
  const ClassValueMap amps = class_map_from(c, "amplitude", 1.0);
  const double clip = c.get_number("clip", std::numeric_limits<double>::infinity());
  const OdmrMap map = synthesize_map(families, field_axis, freq_axis, widths,
                                     amps, clip);
  fs::create_directories(ctx.out_dir);
  export_map_csv(map, (fs::path(ctx.out_dir) / "map.csv").string());
  export_map_pgm(map, (fs::path(ctx.out_dir) / "map.pgm").string());

  Json extra;
  extra["field_T"] = {map.field_axis.front(), map.field_axis.back()};
  extra["freq_Hz"] = {map.freq_axis.front(), map.freq_axis.back()};
  extra["shape"] = {map.intensity.rows(), map.intensity.cols()};
  extra["families"] = families_json(families);
  std::ofstream jm(fs::path(ctx.out_dir) / "map_meta.json");
  jm << extra.dump(2) << '\n';
  write_manifest(ctx, "map", {"map.csv", "map.pgm", "map_meta.json"}, extra);
  return 0;
}

int cmd_fit(const RunContext& ctx) {
  ctx.config.require_known(merge({kSweepKeys, kMapKeys, kFitKeys}));
  const RunConfig& c = ctx.config;

  PeakSet peaks;
  if (c.has("peaks")) {
    peaks = load_peaks_csv(c.get_string("peaks", ""));
  } else if (c.has("map")) {
    const OdmrMap map = import_map_csv(c.get_string("map", ""));
    peaks = extract_peaks(map, c.get_number("threshold", 0.2),
                          c.get_int("min_separation", 3));
  } else {
    std::cerr << "fit: config must provide 'peaks' or 'map'\n";
    return 2;
  }

  const std::string model_name = c.get_string("fit_model", "misalignment");
  std::unique_ptr<FitModel> model;
  FitProblem problem;
  if (model_name == "misalignment") {
    SweepGrid g = grid_from(c);
    model = std::make_unique<MisalignmentModel>(orientations_from(c),
                                                nv_params_from(c), g.cfg);
    problem.initial = {constants::rad_to_deg(c.get_rad("theta_init", 0.0)),
                       constants::rad_to_deg(c.get_rad("phi_init", 0.0)),
                       c.get_hz("d_zfs", 2.87e9)};
    problem.lower = {constants::rad_to_deg(c.get_rad("theta_min", -constants::deg_to_rad(10))),
                     constants::rad_to_deg(c.get_rad("phi_min", -constants::deg_to_rad(10))),
                     2.8e9};
    problem.upper = {constants::rad_to_deg(c.get_rad("theta_max", constants::deg_to_rad(10))),
                     constants::rad_to_deg(c.get_rad("phi_max", constants::deg_to_rad(10))),
                     2.9e9};
    problem.frozen = {false, false, true};
  } else if (model_name == "gslac") {
    model = std::make_unique<GslacModel>(nv_params_from(c));
    problem.initial = {constants::rad_to_deg(c.get_rad("psi_init", constants::deg_to_rad(1.0))),
                       c.get_hz("d_zfs", 2.87e9)};
    problem.lower = {constants::rad_to_deg(c.get_rad("psi_min", constants::deg_to_rad(0.01))),
                     2.8e9};
    problem.upper = {constants::rad_to_deg(c.get_rad("psi_max", constants::deg_to_rad(10))),
                     2.9e9};
    problem.frozen = {false, true};
  } else if (model_name == "arc") {
    model = std::make_unique<ArcModel>(c.get_int("arc_n_max", 4));
    problem.initial = {c.get_hz("f_arc_init", 10e6), c.get_tesla("b_arc_init", 1e-3),
                       c.get_tesla("b_center_init", 102.4e-3)};
    problem.lower = {1e6, 1e-5, 95e-3};
    problem.upper = {30e6, 1e-2, 110e-3};
  } else if (model_name == "comb") {
    model = std::make_unique<CombModel>(c.get_int("n_acoustic", 5));
    problem.initial = {c.get_hz("f_a_init", 20e6)};
    problem.lower = {1e6};
    problem.upper = {100e6};
  } else {
    std::cerr << "fit: unknown fit_model '" << model_name << "'\n";
    return 2;
  }

  // frozen = comma list of parameter names
  const auto frozen_names = c.get_list("frozen");
  if (!frozen_names.empty()) {
    const auto names = model->parameter_names();
    problem.frozen.assign(problem.initial.size(), false);
    for (const auto& fn : frozen_names) {
      bool found = false;
      for (size_t i = 0; i < names.size(); ++i) {
        if (names[i] == fn) {
          problem.frozen[i] = true;
          found = true;
        }
      }
      if (!found) {
        std::cerr << "fit: unknown parameter in 'frozen': " << fn << '\n';
        return 2;
      }
    }
  }

  problem.model = model.get();
  problem.peaks = peaks;
  if (c.has("assign_tolerance")) {
    // Tag peaks against the model evaluated at the initial guess.
    SweepGrid g = grid_from(c);
    std::vector<LineFamily> cands;
    const auto labels = model->family_labels();
    for (size_t i = 0; i < labels.size(); ++i) {
      LineFamily f;
      f.component = labels[i];
      for (double b : g.fields()) {
        const auto pred = model->frequencies(problem.initial, b);
        f.field_T.push_back(b);
        f.freq_Hz.push_back(pred[i]);
      }
      cands.push_back(std::move(f));
    }
    // label() of these synthetic families is not the model label; tag directly.
    for (auto& p : problem.peaks) {
      double best = std::numeric_limits<double>::infinity(), second = best;
      std::string tag;
      for (size_t i = 0; i < cands.size(); ++i) {
        double fr = cands[i].freq_Hz.empty() ? 0 : 0;
        (void)fr;
        // linear interpolation over the candidate grid
        const auto& xs = cands[i].field_T;
        auto it = std::lower_bound(xs.begin(), xs.end(), p.field_T);
        double f;
        if (it == xs.begin()) {
          f = cands[i].freq_Hz.front();
        } else if (it == xs.end()) {
          f = cands[i].freq_Hz.back();
        } else {
          const size_t k = it - xs.begin();
          const double t = (p.field_T - xs[k - 1]) / (xs[k] - xs[k - 1]);
          f = cands[i].freq_Hz[k - 1] * (1 - t) + cands[i].freq_Hz[k] * t;
        }
        const double d = std::abs(f - p.freq_Hz);
        if (d < best) {
          second = best;
          best = d;
          tag = labels[i];
        } else if (d < second) {
          second = d;
        }
      }
      if (best <= c.get_hz("assign_tolerance") && second > best) p.tag = tag;
    }
  }

  FitOptions opts;
  opts.n_restarts = c.get_int("n_restarts", 8);
  opts.max_iterations = c.get_int("max_iterations", 2000);
  opts.n_bootstrap = c.get_int("n_bootstrap", 0);
  opts.seed = ctx.seed;
  const FitResult res = fit_parameters(problem, opts);

  fs::create_directories(ctx.out_dir);
  write_peaks_csv(problem.peaks, (fs::path(ctx.out_dir) / "peaks_used.csv").string());

  Json rep;
  rep["model"] = model_name;
  const auto names = model->parameter_names();
  Json params = Json::object();
  for (size_t i = 0; i < res.parameters.size() && i < names.size(); ++i) {
    params[names[i]] = res.parameters[i];
  }
  rep["parameters"] = params;
  Json frozen = Json::array();
  for (size_t i = 0; i < problem.frozen.size(); ++i) {
    if (problem.frozen[i]) frozen.push_back(names[i]);
  }
  rep["frozen"] = frozen;
  rep["residual_rms_hz"] = res.residual_rms_hz;
  rep["n_peaks"] = res.n_peaks;
  rep["converged"] = res.converged;
  rep["seed"] = ctx.seed;
  if (!res.ci_low.empty()) {
    Json ci = Json::object();
    for (size_t i = 0; i < names.size() && i < res.ci_low.size(); ++i) {
      ci[names[i]] = {res.ci_low[i], res.ci_high[i]};
    }
    rep["bootstrap_ci_95"] = ci;
  }
  // per-family residual RMS over tagged peaks
  {
    std::map<std::string, std::pair<double, int>> acc;
    for (const auto& p : problem.peaks) {
      if (p.tag.empty()) continue;
      const auto pred = model->frequencies(res.parameters, p.field_T);
      const auto labels = model->family_labels();
      for (size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == p.tag) {
          const double r = pred[i] - p.freq_Hz;
          acc[p.tag].first += r * r;
          acc[p.tag].second += 1;
          break;
        }
      }
    }
    Json per = Json::object();
    for (const auto& [tag, sr] : acc) {
      per[tag] = std::sqrt(sr.first / sr.second);
    }
    rep["per_family_residual_rms_hz"] = per;
  }
  std::ofstream out(fs::path(ctx.out_dir) / "fit_report.json");
  out << rep.dump(2) << '\n';
  write_manifest(ctx, "fit", {"fit_report.json", "peaks_used.csv"});
  return res.converged ? 0 : 3;
}

int cmd_dipolar(const RunContext& ctx) {
  ctx.config.require_known(kDipolarKeys);
  const RunConfig& c = ctx.config;
  EnsembleDensity density;
  density.rho = c.get_per_m3("rho", 8.125e16 * 1e6);
  density.spin = c.get_number("spin", 1.0);
  const double gamma_e = constants::two_pi * c.get_hz_per_tesla("gamma_e", 28.03e9);
  const double omega_a = constants::two_pi * c.get_hz("f_resonance", 145e6);
  const DipolarReport rep =
      dipolar_chain(density, omega_a, gamma_e, c.get_int("n_defects", 800),
                    ctx.seed, c.get_int("n_trials", 1000));

  Json j;
  j["rho"] = rep.rho;
  j["r_eff_m"] = rep.r_eff_m;
  j["sum_r6"] = rep.sum_r6;
  j["sum_r6_stderr"] = rep.sum_r6_stderr;
  j["variance_T2"] = rep.variance_T2;
  j["B_a_T"] = rep.B_a_T;
  j["R2"] = rep.R2;
  j["R2_dB"] = rep.R2_dB;
  const double p1 = c.get_number("p1_visibility", 0.02);
  j["p1_visibility"] = p1;
  j["r2_p1"] = rep.R2 * p1;
  j["r2_p1_dB"] = 10.0 * std::log10(rep.R2 * p1);
  fs::create_directories(ctx.out_dir);
  std::ofstream out(fs::path(ctx.out_dir) / "dipolar.json");
  out << j.dump(2) << '\n';
  write_manifest(ctx, "dipolar", {"dipolar.json"});
  return 0;
}

int cmd_acoustic(const RunContext& ctx) {
  ctx.config.require_known(kAcousticKeys);
  const RunConfig& c = ctx.config;
  const double f_a = c.get_hz("f_a", 20.4e6);
  const double t = c.get_meters("thickness", 0.5e-3);
  const int n_max = c.get_int("n_acoustic", 5);
  Json j;
  j["f_a_hz"] = f_a;
  j["thickness_m"] = t;
  j["sound_speed_m_s"] = sound_speed(f_a, t);
  Json comb = Json::array();
  for (int n = 1; n <= n_max; ++n) comb.push_back(n * f_a);
  j["comb_hz"] = comb;
  fs::create_directories(ctx.out_dir);
  std::ofstream out(fs::path(ctx.out_dir) / "acoustic.json");
  out << j.dump(2) << '\n';
  write_manifest(ctx, "acoustic", {"acoustic.json"});
  return 0;
}

std::string preset_config(const std::string& name) {
  if (name == "fig2") {
    return R"(# full-range ODMR overview: NV singles, multiphoton halves,
# flip-flip, flip-flops and first-order P1 lines
field_start = 0 mT
field_stop = 160 mT
field_points = 401
compensate_at = 38 mT
families = nv_single,fraction:2,flip_flip,flip_flop,p1
p1_max_order = 1
psi = 0.8 deg
freq_start = 0 MHz
freq_stop = 6 GHz
freq_points = 800
)";
  }
  if (name == "fig3") {
    return R"(# GSLAC hyperbolas: first and second Larmor lines plus fractions
field_start = 82 mT
field_stop = 122 mT
field_points = 401
compensate = tracking
psi = 0.8 deg
families = gslac,flip_flip,fraction:2,fraction:3
freq_start = 0 MHz
freq_stop = 400 MHz
freq_points = 800
)";
  }
  if (name == "fig4") {
    return R"(# flip-flop region, side coils compensated at 59 mT
field_start = 30 mT
field_stop = 90 mT
field_points = 301
compensate_at = 59 mT
families = nv_single,p1,flip_flop
p1_max_order = 1
freq_start = 0 MHz
freq_stop = 3 GHz
freq_points = 600
)";
  }
  if (name == "fig5") {
    return R"(# P1 transitions up to third order, no side-coil correction
field_start = 0 mT
field_stop = 160 mT
field_points = 401
coil1 = 0 mT
coil2 = 0 mT
families = p1
p1_max_order = 3
freq_start = 0 MHz
freq_stop = 5 GHz
freq_points = 800
)";
  }
  if (name == "fig6") {
    return R"(# low-frequency arcs around the GSLAC with fractional hyperbolas
field_start = 95 mT
field_stop = 110 mT
field_points = 301
compensate = tracking
psi = 0.8 deg
families = arc,gslac,fraction:2,fraction:3,fraction:4
arc_n_max = 4
freq_start = 0 MHz
freq_stop = 15 MHz
freq_points = 400
)";
  }
  if (name == "fig7") {
    return R"(# acoustic comb overlay
field_start = 0 mT
field_stop = 160 mT
field_points = 401
families = acoustic
f_a = 20.4 MHz
n_acoustic = 5
freq_start = 0 MHz
freq_stop = 110 MHz
freq_points = 400
)";
  }
  throw std::runtime_error("unknown preset: " + name);
}

}  // namespace odmr
