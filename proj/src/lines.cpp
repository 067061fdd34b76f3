#include "odmr/lines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace odmr {

std::string line_class_name(LineClass c) {
  switch (c) {
    case LineClass::nv_single: return "nv_single";
    case LineClass::nv_multiphoton: return "nv_multiphoton";
    case LineClass::gslac_hyperbola: return "gslac_hyperbola";
    case LineClass::gslac_fraction: return "gslac_fraction";
    case LineClass::flip_flip: return "flip_flip";
    case LineClass::flip_flop: return "flip_flop";
    case LineClass::p1: return "p1";
    case LineClass::acoustic: return "acoustic";
    case LineClass::arc: return "arc";
  }
  return "?";
}

LineClass line_class_from_name(const std::string& name) {
  for (LineClass c :
       {LineClass::nv_single, LineClass::nv_multiphoton, LineClass::gslac_hyperbola,
        LineClass::gslac_fraction, LineClass::flip_flip, LineClass::flip_flop,
        LineClass::p1, LineClass::acoustic, LineClass::arc}) {
    if (line_class_name(c) == name) return c;
  }
  throw std::invalid_argument("unknown line class: " + name);
}

std::string LineFamily::label() const {
  std::string s = line_class_name(cls);
  if (sub != 0) s += ":" + std::to_string(sub);
  if (orientation) s += "/" + orientation_name(*orientation);
  if (cls == LineClass::nv_single || cls == LineClass::nv_multiphoton) {
    s += "/T(" + std::to_string(level_i) + "," + std::to_string(level_j) + ")";
  }
  if (!component.empty()) s += "/" + component;
  return s;
}

std::vector<double> SweepGrid::fields() const {
  validate();
  std::vector<double> out(n_field);
  for (int i = 0; i < n_field; ++i) {
    out[i] = field_start + (field_stop - field_start) * i / (n_field - 1);
  }
  return out;
}

FieldConfiguration SweepGrid::at(double b_main) const {
  FieldConfiguration c = cfg;
  c.b_main = b_main;
  if (coil_mode == CoilMode::compensate_tracking) {
    auto [b1, b2] = compensate_misalignment(b_main, c);
    c.b_coil1 = b1;
    c.b_coil2 = b2;
  } else if (coil_mode == CoilMode::compensate_at) {
    auto [b1, b2] = compensate_misalignment(compensate_field, c);
    c.b_coil1 += b1;
    c.b_coil2 += b2;
  }
  return c;
}

void SweepGrid::validate() const {
  if (n_field < 2) throw std::invalid_argument("SweepGrid: n_field must be >= 2");
  if (!(field_stop > field_start)) {
    throw std::invalid_argument("SweepGrid: fields must be increasing");
  }
}

namespace {

// Field in the defect frame: z along the axis, x in the (axis, B) plane.
Eigen::Vector3d defect_frame_vector(const Eigen::Vector3d& b_crystal,
                                    const Eigen::Vector3d& axis) {
  const DefectFrameField f = defect_frame_field(b_crystal, axis);
  return Eigen::Vector3d(f.b_perp, 0.0, f.b_par);
}

}  // namespace

std::vector<LineFamily> nv_transitions(const SweepGrid& grid, Orientation orientation,
                                       const NvParameters& params) {
  params.validate();
  const Eigen::Vector3d axis = crystal_axes::axis(orientation);
  const std::vector<double> bs = grid.fields();

  // Basis index 0 is m=+1; the descending branch carries the label -1.
  const int basis_label[3] = {-1, 0, +1};
  const std::pair<int, int> pairs[3] = {{-1, 0}, {+1, 0}, {-1, +1}};

  std::vector<LineFamily> families(3);
  for (int k = 0; k < 3; ++k) {
    families[k].cls = LineClass::nv_single;
    families[k].orientation = orientation;
    families[k].level_i = pairs[k].first;
    families[k].level_j = pairs[k].second;
  }

  for (double b : bs) {
    const Eigen::Vector3d b_cr = lab_field_vector(grid.at(b));
    const EigenDecomposition d = eigh(build_nv_hamiltonian(
        defect_frame_vector(b_cr, axis), params));
    const std::vector<int> basis_of = assign_basis_indices(d);
    double energy_of[3] = {0, 0, 0};  // by label index: -1 -> 0, 0 -> 1, +1 -> 2
    for (int k = 0; k < 3; ++k) {
      const int label = basis_label[basis_of[k]];
      energy_of[label + 1] = d.eigenvalues[k];
    }
    for (int k = 0; k < 3; ++k) {
      const double e_i = energy_of[pairs[k].first + 1];
      const double e_j = energy_of[pairs[k].second + 1];
      families[k].field_T.push_back(b);
      families[k].freq_Hz.push_back(std::abs(e_i - e_j) / constants::two_pi);
    }
  }
  return families;
}

std::vector<LineFamily> p1_transitions(const SweepGrid& grid, Orientation orientation,
                                       const P1Parameters& params, int max_order) {
  params.validate();
  if (max_order < 1 || max_order > 3) {
    throw std::invalid_argument("p1_transitions: max_order must be in {1,2,3}");
  }
  const Eigen::Vector3d axis = crystal_axes::axis(orientation);
  const std::vector<double> bs = grid.fields();

  // Basis index = 3*e + n with e: mS=+1/2(0),-1/2(1); n: mI=+1(0),0(1),-1(2).
  struct PairSpec {
    int bi, bj, order;
    std::string component;
  };
  std::vector<PairSpec> specs;
  const char* mi_name[3] = {"+1", "0", "-1"};
  for (int ni = 0; ni < 3; ++ni) {
    for (int nj = 0; nj < 3; ++nj) {
      const int order = 1 + std::abs(ni - nj);
      if (order > max_order) continue;
      std::string comp = (ni == nj)
                             ? std::string("mI=") + mi_name[ni]
                             : std::string("mI(") + mi_name[ni] + "->" + mi_name[nj] + ")";
      specs.push_back({0 * 3 + ni, 1 * 3 + nj, order, comp});
    }
  }

  std::vector<LineFamily> families(specs.size());
  for (size_t k = 0; k < specs.size(); ++k) {
    families[k].cls = LineClass::p1;
    families[k].sub = specs[k].order;
    families[k].orientation = orientation;
    families[k].level_i = specs[k].bi;
    families[k].level_j = specs[k].bj;
    families[k].component = specs[k].component;
  }

  bool any_mixed = false;
  for (double b : bs) {
    const Eigen::Vector3d b_cr = lab_field_vector(grid.at(b));
    const EigenDecomposition d = eigh(build_p1_hamiltonian(
        defect_frame_vector(b_cr, axis), params));
    const std::vector<int> basis_of = assign_basis_indices(d);
    std::vector<double> energy_of(6, 0.0);
    std::vector<double> purity(6, 0.0);
    for (int k = 0; k < 6; ++k) {
      energy_of[basis_of[k]] = d.eigenvalues[k];
      purity[basis_of[k]] = std::norm(d.eigenvectors(basis_of[k], k));
    }
    for (size_t k = 0; k < specs.size(); ++k) {
      families[k].field_T.push_back(b);
      families[k].freq_Hz.push_back(
          std::abs(energy_of[specs[k].bi] - energy_of[specs[k].bj]) /
          constants::two_pi);
      if (purity[specs[k].bi] < 0.6 || purity[specs[k].bj] < 0.6) any_mixed = true;
    }
  }
  if (any_mixed) {
    for (auto& f : families) {
      if (f.component.find("mixed") == std::string::npos) f.component += "/mixed";
    }
  }
  return families;
}

double gslac_frequency(double psi, double b, const NvParameters& params) {
  if (std::abs(psi) >= 0.2) {
    throw std::invalid_argument("gslac_frequency: |psi| must be < 0.2 rad");
  }
  const double detune = params.d_zfs - params.gamma_e * b;
  const double omega_a0 = std::sqrt(2.0) * params.d_zfs * std::abs(psi);
  if (omega_a0 == 0.0) return std::abs(detune) / constants::two_pi;
  const double eta = detune / omega_a0;
  return omega_a0 * std::sqrt(1.0 + eta * eta) / constants::two_pi;
}

LineFamily gslac_line(const SweepGrid& grid, double psi, const NvParameters& params) {
  LineFamily fam;
  fam.cls = LineClass::gslac_hyperbola;
  fam.orientation = Orientation::alpha;
  fam.level_i = -1;
  fam.level_j = 0;
  for (double b : grid.fields()) {
    fam.field_T.push_back(b);
    fam.freq_Hz.push_back(gslac_frequency(psi, b, params));
  }
  return fam;
}

double effective_drive(double psi, double b, double omega_la1,
                       const NvParameters& params) {
  const double omega_a0 = std::sqrt(2.0) * params.d_zfs * std::abs(psi);
  if (omega_a0 == 0.0) return omega_la1;  // |eta| -> infinity limit
  const double eta = (params.d_zfs - params.gamma_e * b) / omega_a0;
  return omega_la1 * eta / std::sqrt(1.0 + eta * eta);
}

LineFamily flip_flip_line(const LineFamily& parent) {
  LineFamily out = parent;
  out.cls = LineClass::flip_flip;
  out.sub = 0;
  out.component = "2x " + parent.label();
  for (double& f : out.freq_Hz) f *= 2.0;
  out.clamped.clear();
  return out;
}

LineFamily fractional_lines(const LineFamily& parent, int l) {
  if (l < 2) throw std::invalid_argument("fractional_lines: l must be >= 2");
  LineFamily out = parent;
  out.cls = LineClass::gslac_fraction;
  out.sub = l;
  out.component = parent.label() + " /" + std::to_string(l);
  for (double& f : out.freq_Hz) f /= l;
  out.clamped.clear();
  return out;
}

LineFamily flip_flop_lines(const LineFamily& a, const LineFamily& b) {
  if (a.field_T.size() != b.field_T.size()) {
    throw std::invalid_argument("flip_flop_lines: mismatched grids");
  }
  for (size_t i = 0; i < a.field_T.size(); ++i) {
    if (a.field_T[i] != b.field_T[i]) {
      throw std::invalid_argument("flip_flop_lines: mismatched grids");
    }
  }
  LineFamily out;
  out.cls = LineClass::flip_flop;
  out.orientation = a.orientation;
  out.component = a.label() + " - " + b.label();
  out.field_T = a.field_T;
  out.freq_Hz.resize(a.freq_Hz.size());
  for (size_t i = 0; i < a.freq_Hz.size(); ++i) {
    double f = std::abs(a.freq_Hz[i] - b.freq_Hz[i]);
    if (f < 1e3) {
      if (f != 0.0) out.clamped.push_back(static_cast<int>(i));
      f = 0.0;
    }
    out.freq_Hz[i] = f;
  }
  return out;
}

namespace {

// J_n(x) for any integer order and sign of argument.
double bessel_j(int n, double x) {
  double sign = 1.0;
  if (n < 0) {
    n = -n;
    if (n % 2 != 0) sign = -sign;
  }
  if (x < 0) {
    x = -x;
    if (n % 2 != 0) sign = -sign;
  }
  return sign * std::cyl_bessel_j(static_cast<double>(n), x);
}

}  // namespace

double bloch_siegert_shift(double omega_t, double omega_s1, double omega_la,
                           int l, int l_max) {
  if (!(omega_la > 0)) {
    throw std::invalid_argument("bloch_siegert_shift: omega_la must be positive");
  }
  if (l_max < std::abs(l) + 20) {
    throw std::invalid_argument("bloch_siegert_shift: l_max must be >= |l| + 20");
  }
  const double x = omega_s1 / omega_la;
  const double pref = omega_t * omega_t / (2.0 * omega_la);

  auto term = [&](int lp) {
    const double j = bessel_j(lp, x) + bessel_j(lp + 2, x);
    return pref * j * j / static_cast<double>(l - lp);
  };

  // Expand symmetrically outward so the convergence check sees the tail.
  double sum = 0.0;
  double prev_checkpoint = 0.0;
  bool converged = false;
  int radius = 0;
  std::vector<int> pending;
  for (int lp = -l_max; lp <= l_max; ++lp) {
    if (lp != l) pending.push_back(lp);
  }
  std::stable_sort(pending.begin(), pending.end(), [&](int a, int b) {
    return std::abs(a - l) < std::abs(b - l);
  });
  int since_check = 0;
  for (int lp : pending) {
    sum += term(lp);
    ++since_check;
    ++radius;
    if (since_check >= 10) {
      const double scale = std::max(std::abs(sum), 1e-300);
      if (std::abs(sum - prev_checkpoint) < 1e-12 * scale) {
        converged = true;
        break;
      }
      prev_checkpoint = sum;
      since_check = 0;
    }
  }
  if (!converged && omega_t != 0.0) {
    // The tail decays as 1/(l-l')^2 once the Bessel factors saturate; if
    // the last checkpoint still moved, the budget was insufficient.
    const double scale = std::max(std::abs(sum), 1e-300);
    if (std::abs(sum - prev_checkpoint) >= 1e-12 * scale) {
      throw std::runtime_error("bloch_siegert_shift: sum not converged at l_max");
    }
  }
  return sum;
}

std::vector<LineFamily> acoustic_comb(double f_a, int n_max, const SweepGrid& grid) {
  if (!(f_a > 0)) throw std::invalid_argument("acoustic_comb: f_a must be positive");
  std::vector<LineFamily> out;
  const std::vector<double> bs = grid.fields();
  for (int n = 1; n <= n_max; ++n) {
    LineFamily fam;
    fam.cls = LineClass::acoustic;
    fam.sub = n;
    fam.field_T = bs;
    fam.freq_Hz.assign(bs.size(), n * f_a);
    out.push_back(std::move(fam));
  }
  return out;
}

double sound_speed(double f_a, double thickness_m) { return 2.0 * f_a * thickness_m; }

LineFamily arc_family(double f_arc, double b_arc, int n, double b_center,
                      const SweepGrid& grid) {
  if (n < 1) throw std::invalid_argument("arc_family: n must be >= 1");
  LineFamily fam;
  fam.cls = LineClass::arc;
  fam.sub = n;
  for (double b : grid.fields()) {
    fam.field_T.push_back(b);
    fam.freq_Hz.push_back(f_arc * std::abs(std::tanh((b - b_center) / (n * b_arc))));
  }
  return fam;
}

void write_families_csv(const std::vector<LineFamily>& families,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "field_T,freq_Hz,class,orientation,i,j,weight\n";
  out << std::setprecision(9);
  for (const auto& fam : families) {
    std::string cls = line_class_name(fam.cls);
    if (fam.sub != 0) cls += ":" + std::to_string(fam.sub);
    const std::string ori =
        fam.orientation ? orientation_name(*fam.orientation) : "none";
    for (size_t i = 0; i < fam.field_T.size(); ++i) {
      out << fam.field_T[i] << ',' << fam.freq_Hz[i] << ',' << cls << ',' << ori
          << ',' << fam.level_i << ',' << fam.level_j << ',' << fam.weight << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace odmr
