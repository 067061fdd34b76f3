#pragma once

#include <optional>
#include <string>
#include <vector>

#include "odmr/geometry.hpp"
#include "odmr/spin_core.hpp"

namespace odmr {

enum class LineClass {
  nv_single,
  nv_multiphoton,
  gslac_hyperbola,
  gslac_fraction,
  flip_flip,
  flip_flop,
  p1,
  acoustic,
  arc,
};

std::string line_class_name(LineClass c);
LineClass line_class_from_name(const std::string& name);

// A labeled curve f(B) in the frequency-field plane.
struct LineFamily {
  LineClass cls = LineClass::nv_single;
  int sub = 0;  // photon number l, P1 order k, or comb/arc index n
  std::optional<Orientation> orientation;
  int level_i = 0;
  int level_j = 0;
  std::string component;  // e.g. "mI=0", flip-flop parent tags, "mixed"
  std::vector<double> field_T;
  std::vector<double> freq_Hz;
  double weight = 1.0;
  std::vector<int> clamped;  // sample indices clamped to 0 Hz

  std::string label() const;  // e.g. "nv_single/alpha/T(-1,0)"
};

// How the side coils follow the main-coil sweep.
enum class CoilMode {
  fixed,                 // b_coil1/b_coil2 used as given at every point
  compensate_tracking,   // recompensated at every field point
  compensate_at,         // compensated once at compensate_field, then held
};

struct SweepGrid {
  double field_start = 0.0;  // tesla (main coil)
  double field_stop = 0.16;
  int n_field = 2;
  FieldConfiguration cfg;    // template; b_main replaced per point
  CoilMode coil_mode = CoilMode::fixed;
  double compensate_field = 0.0;  // tesla, for CoilMode::compensate_at

  std::vector<double> fields() const;
  // Configuration at one sweep point, coil mode applied.
  FieldConfiguration at(double b_main) const;
  void validate() const;
};

// All three level-pair transitions of one NV- orientation over the sweep.
// Level labels follow the convention that the branch descending with B is
// m_S = -1. Families: (-1,0), (+1,0), (-1,+1).
std::vector<LineFamily> nv_transitions(const SweepGrid& grid, Orientation orientation,
                                       const NvParameters& params);

// Electron-flip P1 transitions classified by order k = 1 + |dm_I|
// (k = 1: dm_I = 0; k = 2: |dm_I| = 1; k = 3: |dm_I| = 2); families with
// k > max_order are omitted. Strongly mixed levels are tagged "mixed".
std::vector<LineFamily> p1_transitions(const SweepGrid& grid, Orientation orientation,
                                       const P1Parameters& params, int max_order);

// Closed-form GSLAC resonance frequency (Hz) for small misalignment psi.
double gslac_frequency(double psi, double b, const NvParameters& params);

// Closed-form GSLAC hyperbola over a sweep.
LineFamily gslac_line(const SweepGrid& grid, double psi, const NvParameters& params);

// Effective transverse drive amplitude (rad/s).
double effective_drive(double psi, double b, double omega_la1,
                       const NvParameters& params);

LineFamily flip_flip_line(const LineFamily& parent);

LineFamily fractional_lines(const LineFamily& parent, int l);

// Pointwise |f_a - f_b|; parents must share the field grid. Frequencies
// below 1 kHz are clamped to 0 and recorded in `clamped`.
LineFamily flip_flop_lines(const LineFamily& a, const LineFamily& b);

// Bloch-Siegert shift of the l'th multiphoton resonance (rad/s).
// Throws std::runtime_error if the Bessel sum has not converged at l_max.
double bloch_siegert_shift(double omega_t, double omega_s1, double omega_la,
                           int l, int l_max);

// Horizontal comb lines at n*f_a, n = 1..n_max.
std::vector<LineFamily> acoustic_comb(double f_a, int n_max, const SweepGrid& grid);

// Bulk acoustic standing-wave speed-of-sound estimate 2*f_a*t (m/s).
double sound_speed(double f_a, double thickness_m);

// Empirical arc f = f_arc*|tanh((B-b_center)/(n*b_arc))|.
LineFamily arc_family(double f_arc, double b_arc, int n, double b_center,
                      const SweepGrid& grid);

// CSV columns: field_T,freq_Hz,class,orientation,i,j,weight
void write_families_csv(const std::vector<LineFamily>& families,
                        const std::string& path);

}  // namespace odmr
