#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "odmr/constants.hpp"
#include "odmr/lines.hpp"

using namespace odmr;

namespace {

SweepGrid aligned_grid(double start, double stop, int n) {
  SweepGrid g;
  g.field_start = start;
  g.field_stop = stop;
  g.n_field = n;
  g.cfg.theta_mis = 0;
  g.cfg.phi_mis = 0;
  return g;
}

}  // namespace

TEST_CASE("sweep grid") {
  SUBCASE("fields are the linspace endpoints inclusive") {
    const auto g = aligned_grid(0.01, 0.05, 5);
    const auto bs = g.fields();
    REQUIRE(bs.size() == 5);
    CHECK(bs.front() == doctest::Approx(0.01));
    CHECK(bs.back() == doctest::Approx(0.05));
    CHECK(bs[2] == doctest::Approx(0.03));
  }

  SUBCASE("invalid grids are rejected") {
    SweepGrid g;
    g.n_field = 1;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g.n_field = 5;
    g.field_start = 0.1;
    g.field_stop = 0.1;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }

  SUBCASE("tracking compensation keeps every sweep point on axis") {
    SweepGrid g = aligned_grid(0.01, 0.06, 3);
    g.cfg.theta_mis = constants::deg_to_rad(2.86);
    g.cfg.phi_mis = constants::deg_to_rad(1.71);
    g.coil_mode = CoilMode::compensate_tracking;
    for (double b : g.fields()) {
      const auto f =
          defect_frame_field(lab_field_vector(g.at(b)), crystal_axes::alpha());
      CHECK(std::abs(f.psi) < 1e-10);
    }
  }

  SUBCASE("held compensation is exact only at the reference field") {
    SweepGrid g = aligned_grid(0.019, 0.076, 4);
    g.cfg.theta_mis = constants::deg_to_rad(2.86);
    g.cfg.phi_mis = constants::deg_to_rad(1.71);
    g.coil_mode = CoilMode::compensate_at;
    g.compensate_field = 0.038;
    const auto f38 =
        defect_frame_field(lab_field_vector(g.at(0.038)), crystal_axes::alpha());
    CHECK(std::abs(f38.psi) < 1e-10);
    const auto f76 =
        defect_frame_field(lab_field_vector(g.at(0.076)), crystal_axes::alpha());
    CHECK(f76.psi > constants::deg_to_rad(0.5));
  }
}

TEST_CASE("NV transition families") {
  NvParameters nv;

  SUBCASE("three families with the canonical level pairs") {
    const auto fams = nv_transitions(aligned_grid(0.0, 0.05, 3),
                                     Orientation::alpha, nv);
    REQUIRE(fams.size() == 3);
    CHECK(fams[0].level_i == -1);
    CHECK(fams[0].level_j == 0);
    CHECK(fams[1].level_i == +1);
    CHECK(fams[1].level_j == 0);
    CHECK(fams[2].level_i == -1);
    CHECK(fams[2].level_j == +1);
    for (const auto& f : fams) {
      CHECK(f.cls == LineClass::nv_single);
      CHECK(f.orientation == Orientation::alpha);
      CHECK(f.field_T.size() == 3);
    }
  }

  SUBCASE("aligned closed form at 50 mT") {
    auto g = aligned_grid(0.05, 0.06, 2);
    const auto fams = nv_transitions(g, Orientation::alpha, nv);
    const double d_hz = nv.d_zfs / constants::two_pi;
    const double gb = nv.gamma_e / constants::two_pi * 0.05;
    CHECK(fams[0].freq_Hz[0] == doctest::Approx(d_hz - gb).epsilon(1e-9));
    CHECK(fams[1].freq_Hz[0] == doctest::Approx(d_hz + gb).epsilon(1e-9));
    CHECK(fams[2].freq_Hz[0] == doctest::Approx(2 * gb).epsilon(1e-9));
  }

  SUBCASE("double-quantum line is a signed combination of the singles") {
    SweepGrid g = aligned_grid(0.001, 0.15, 31);
    g.cfg.theta_mis = constants::deg_to_rad(2.86);
    g.cfg.phi_mis = constants::deg_to_rad(1.71);
    const auto fams = nv_transitions(g, Orientation::beta, nv);
    for (size_t i = 0; i < fams[0].freq_Hz.size(); ++i) {
      const double a = fams[0].freq_Hz[i], b = fams[1].freq_Hz[i],
                   c = fams[2].freq_Hz[i];
      const double mismatch =
          std::min(std::abs(c - (a + b)), std::abs(c - std::abs(a - b)));
      CHECK(mismatch < 1e3);
    }
  }

  SUBCASE("families are continuous across the sweep") {
    SweepGrid g = aligned_grid(0.0, 0.16, 201);
    g.cfg.theta_mis = constants::deg_to_rad(2.86);
    g.cfg.phi_mis = constants::deg_to_rad(1.71);
    const double db = (0.16 - 0.0) / 200;
    const double slope_bound = 2.5 * nv.gamma_e / constants::two_pi * db;
    const double b_apex = nv.d_zfs / nv.gamma_e;
    for (auto o : {Orientation::alpha, Orientation::delta}) {
      for (const auto& f : nv_transitions(g, o, nv)) {
        for (size_t i = 1; i < f.freq_Hz.size(); ++i) {
          // the level labels hand over at the anticrossing; skip that window
          if (o == Orientation::alpha && std::abs(f.field_T[i] - b_apex) < 2e-3) {
            continue;
          }
          CHECK(std::abs(f.freq_Hz[i] - f.freq_Hz[i - 1]) < slope_bound);
        }
      }
    }
  }
}

TEST_CASE("GSLAC closed form") {
  NvParameters nv;
  const double psi = constants::deg_to_rad(0.8);

  SUBCASE("psi = 0 reduces to the aligned detuning") {
    CHECK(gslac_frequency(0.0, 0.05, nv) ==
          doctest::Approx((nv.d_zfs - nv.gamma_e * 0.05) / constants::two_pi));
    CHECK(gslac_frequency(0.0, 0.15, nv) ==
          doctest::Approx((nv.gamma_e * 0.15 - nv.d_zfs) / constants::two_pi));
  }

  SUBCASE("apex sits at D/gamma_e with the sqrt(2)*D*psi minimum") {
    const auto fam = gslac_line(aligned_grid(0.09, 0.115, 2001), psi, nv);
    const auto it = std::min_element(fam.freq_Hz.begin(), fam.freq_Hz.end());
    const size_t k = it - fam.freq_Hz.begin();
    const double b_apex = nv.d_zfs / nv.gamma_e;  // 102.4 mT
    CHECK(std::abs(fam.field_T[k] - b_apex) < 2e-5);
    const double f_min = std::sqrt(2.0) * nv.d_zfs * psi / constants::two_pi;
    CHECK(*it == doctest::Approx(f_min).epsilon(1e-6));
    CHECK(f_min == doctest::Approx(56.7e6).epsilon(0.01));
  }

  SUBCASE("matches full diagonalization to 2% near the crossing") {
    for (double b = 0.098; b <= 0.107; b += 0.0005) {
      const Eigen::Vector3d b_def(b * std::sin(psi), 0, b * std::cos(psi));
      const auto d = eigh(build_nv_hamiltonian(b_def, nv));
      const double gap = (d.eigenvalues[1] - d.eigenvalues[0]) / constants::two_pi;
      CHECK(gslac_frequency(psi, b, nv) == doctest::Approx(gap).epsilon(0.02));
    }
  }

  SUBCASE("oversized psi is rejected") {
    CHECK_THROWS_AS(gslac_frequency(0.3, 0.1, nv), std::invalid_argument);
  }
}

TEST_CASE("effective drive") {
  NvParameters nv;
  const double w1 = constants::two_pi * 1e6;
  const double b_apex = nv.d_zfs / nv.gamma_e;

  SUBCASE("vanishes at the apex and saturates far away") {
    CHECK(effective_drive(constants::deg_to_rad(0.8), b_apex, w1, nv) ==
          doctest::Approx(0.0).epsilon(1e-12));
    const double far = effective_drive(constants::deg_to_rad(0.8), 0.02, w1, nv);
    CHECK(std::abs(far) == doctest::Approx(w1).epsilon(1e-3));
  }

  SUBCASE("psi = 0 returns the bare drive") {
    CHECK(effective_drive(0.0, 0.05, w1, nv) == doctest::Approx(w1));
  }

  SUBCASE("eta/sqrt(1+eta^2) form") {
    const double psi = constants::deg_to_rad(0.8);
    const double b = 0.101;
    const double wa0 = std::sqrt(2.0) * nv.d_zfs * psi;
    const double eta = (nv.d_zfs - nv.gamma_e * b) / wa0;
    CHECK(effective_drive(psi, b, w1, nv) ==
          doctest::Approx(w1 * eta / std::sqrt(1 + eta * eta)));
  }
}

TEST_CASE("derived line families") {
  NvParameters nv;
  const auto parent = gslac_line(aligned_grid(0.09, 0.115, 11),
                                 constants::deg_to_rad(0.8), nv);

  SUBCASE("flip-flip doubles the parent pointwise") {
    const auto ff = flip_flip_line(parent);
    CHECK(ff.cls == LineClass::flip_flip);
    REQUIRE(ff.freq_Hz.size() == parent.freq_Hz.size());
    for (size_t i = 0; i < ff.freq_Hz.size(); ++i) {
      CHECK(ff.freq_Hz[i] == doctest::Approx(2 * parent.freq_Hz[i]));
    }
  }

  SUBCASE("fractional lines divide by l") {
    for (int l : {2, 3, 4}) {
      const auto fr = fractional_lines(parent, l);
      CHECK(fr.cls == LineClass::gslac_fraction);
      CHECK(fr.sub == l);
      for (size_t i = 0; i < fr.freq_Hz.size(); ++i) {
        CHECK(fr.freq_Hz[i] == doctest::Approx(parent.freq_Hz[i] / l));
      }
    }
    CHECK_THROWS_AS(fractional_lines(parent, 1), std::invalid_argument);
  }

  SUBCASE("flip-flop is the pointwise difference with sub-kHz clamping") {
    LineFamily other = parent;
    for (size_t i = 0; i < other.freq_Hz.size(); ++i) {
      other.freq_Hz[i] += (i == 3) ? 0.5e3 : 5e6;
    }
    const auto fl = flip_flop_lines(parent, other);
    CHECK(fl.cls == LineClass::flip_flop);
    for (size_t i = 0; i < fl.freq_Hz.size(); ++i) {
      if (i == 3) {
        CHECK(fl.freq_Hz[i] == 0.0);
      } else {
        CHECK(fl.freq_Hz[i] == doctest::Approx(5e6));
      }
    }
    REQUIRE(fl.clamped.size() == 1);
    CHECK(fl.clamped[0] == 3);
  }

  SUBCASE("flip-flop rejects mismatched field grids") {
    auto other = gslac_line(aligned_grid(0.09, 0.115, 12),
                            constants::deg_to_rad(0.8), nv);
    CHECK_THROWS_AS(flip_flop_lines(parent, other), std::invalid_argument);
  }
}

TEST_CASE("P1 transition families") {
  P1Parameters p1;

  SUBCASE("family count by maximum order") {
    const auto g = aligned_grid(0.03, 0.04, 2);
    CHECK(p1_transitions(g, Orientation::alpha, p1, 1).size() == 3);
    CHECK(p1_transitions(g, Orientation::alpha, p1, 2).size() == 7);
    CHECK(p1_transitions(g, Orientation::alpha, p1, 3).size() == 9);
    CHECK_THROWS_AS(p1_transitions(g, Orientation::alpha, p1, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(p1_transitions(g, Orientation::alpha, p1, 4),
                    std::invalid_argument);
  }

  SUBCASE("orders follow k = 1 + |dm_I|") {
    const auto fams =
        p1_transitions(aligned_grid(0.03, 0.04, 2), Orientation::alpha, p1, 3);
    int count[4] = {0, 0, 0, 0};
    for (const auto& f : fams) {
      REQUIRE(f.sub >= 1);
      REQUIRE(f.sub <= 3);
      ++count[f.sub];
      CHECK(f.sub == 1 + std::abs((f.level_i % 3) - (f.level_j % 3)));
    }
    CHECK(count[1] == 3);
    CHECK(count[2] == 4);
    CHECK(count[3] == 2);
  }

  SUBCASE("nine lines collapse to five clusters at 38 mT aligned") {
    const auto fams =
        p1_transitions(aligned_grid(0.038, 0.039, 2), Orientation::alpha, p1, 3);
    std::vector<double> f0;
    for (const auto& f : fams) f0.push_back(f.freq_Hz[0]);
    std::sort(f0.begin(), f0.end());
    int clusters = 1;
    for (size_t i = 1; i < f0.size(); ++i) {
      if (f0[i] - f0[i - 1] > 25e6) ++clusters;
    }
    CHECK(clusters == 5);
    // adjacent clusters separated by ~A_par/2
    CHECK(f0.back() - f0.front() == doctest::Approx(2 * 114e6).epsilon(0.1));
  }
}

namespace {

// Quasienergy splitting (rad/s) of a driven two-level system
// H(t) = (omega0/2) sz + omega_t cos(omega_la t) sx from the one-period
// propagator, integrated with RK4.
double quasienergy_gap(double omega0, double omega_t, double omega_la) {
  using Mat2 = Eigen::Matrix2cd;
  const double period = constants::two_pi / omega_la;
  const int steps = 4000;
  const double h = period / steps;
  Mat2 sz, sx;
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  const Complex mi(0, -1);
  auto deriv = [&](double t, const Mat2& m) {
    const Mat2 ham =
        0.5 * omega0 * sz + omega_t * std::cos(omega_la * t) * sx;
    return Mat2(mi * ham * m);
  };
  Mat2 u = Mat2::Identity();
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Mat2 k1 = deriv(t, u);
    const Mat2 k2 = deriv(t + h / 2, u + (h / 2) * k1);
    const Mat2 k3 = deriv(t + h / 2, u + (h / 2) * k2);
    const Mat2 k4 = deriv(t + h, u + h * k3);
    u += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  Eigen::ComplexEigenSolver<Mat2> es(u);
  double d = std::abs(std::arg(es.eigenvalues()[0]) -
                      std::arg(es.eigenvalues()[1]));
  d = std::min(d, constants::two_pi - d);
  return d / period;
}

}  // namespace

TEST_CASE("Bloch-Siegert shift") {
  SUBCASE("static limit is omega_t^2 / (4 omega_la)") {
    const double wt = constants::two_pi * 1e6;
    const double wla = constants::two_pi * 50e6;
    CHECK(bloch_siegert_shift(wt, 0.0, wla, 0, 60) ==
          doctest::Approx(wt * wt / (4 * wla)).epsilon(1e-9));
  }

  SUBCASE("l = 1 static value from the two surviving Bessel terms") {
    // at x = 0 only l' = 0 (J0+J2 = 1) and l' = -2 (J-2+J0 = 1) survive:
    // pref/(1-0) + pref/(1+2) with pref = wt^2/(2 wla)
    const double wt = constants::two_pi * 2e6;
    const double wla = constants::two_pi * 40e6;
    const double pref = wt * wt / (2 * wla);
    CHECK(bloch_siegert_shift(wt, 0.0, wla, 1, 60) ==
          doctest::Approx(pref * (1.0 + 1.0 / 3.0)).epsilon(1e-9));
  }

  SUBCASE("zero drive gives zero shift") {
    CHECK(bloch_siegert_shift(0.0, 0.0, constants::two_pi * 10e6, 0, 40) == 0.0);
    CHECK(bloch_siegert_shift(0.0, constants::two_pi * 3e6,
                              constants::two_pi * 10e6, 0, 40) == 0.0);
  }

  SUBCASE("quadratic in the drive amplitude") {
    const double wla = constants::two_pi * 30e6;
    const double ws1 = constants::two_pi * 12e6;
    const double s1 = bloch_siegert_shift(1e6, ws1, wla, 0, 80);
    const double s2 = bloch_siegert_shift(2e6, ws1, wla, 0, 80);
    CHECK(s2 == doctest::Approx(4 * s1).epsilon(1e-12));
  }

  SUBCASE("argument validation") {
    CHECK_THROWS_AS(bloch_siegert_shift(1e6, 0, -1.0, 0, 60),
                    std::invalid_argument);
    CHECK_THROWS_AS(bloch_siegert_shift(1e6, 0, 1e8, 0, 10),
                    std::invalid_argument);
  }

  SUBCASE("matches the Floquet quasienergy resonance") {
    // the shifted resonance condition omega0 + shift = omega_la puts the
    // quasienergy-gap minimum at omega0 = omega_la - shift, below the drive
    const double wla = 1.0;
    const double wt = 0.1;
    const double predicted = bloch_siegert_shift(wt, 0.0, wla, 0, 60);
    REQUIRE(predicted == doctest::Approx(wt * wt / 4).epsilon(1e-9));

    double best_w0 = wla, best_gap = 1e300;
    const int n_scan = 41;
    std::vector<double> w0s(n_scan), gaps(n_scan);
    for (int i = 0; i < n_scan; ++i) {
      w0s[i] = wla * (1.0 - 0.008 * i / (n_scan - 1));
      gaps[i] = quasienergy_gap(w0s[i], wt, wla);
      if (gaps[i] < best_gap) {
        best_gap = gaps[i];
        best_w0 = w0s[i];
      }
    }
    // parabolic refinement around the scan minimum
    for (int i = 1; i < n_scan - 1; ++i) {
      if (w0s[i] == best_w0) {
        const double denom = gaps[i - 1] - 2 * gaps[i] + gaps[i + 1];
        if (denom > 0) {
          best_w0 += 0.5 * (gaps[i - 1] - gaps[i + 1]) / denom *
                     (w0s[i + 1] - w0s[i]);
        }
      }
    }
    const double measured = wla - best_w0;
    // absolute comparison: Approx's default scale of 1 would swamp a shift
    // this small
    CHECK(std::abs(measured - predicted) < 0.10 * predicted);
  }
}

TEST_CASE("acoustic comb and arcs") {
  SUBCASE("comb lines at integer multiples") {
    const auto g = aligned_grid(0.0, 0.1, 3);
    const auto comb = acoustic_comb(20.4e6, 4, g);
    REQUIRE(comb.size() == 4);
    for (int n = 1; n <= 4; ++n) {
      const auto& fam = comb[n - 1];
      CHECK(fam.sub == n);
      for (double f : fam.freq_Hz) CHECK(f == doctest::Approx(n * 20.4e6));
    }
    CHECK_THROWS_AS(acoustic_comb(-1.0, 2, g), std::invalid_argument);
  }

  SUBCASE("standing-wave sound speed") {
    CHECK(sound_speed(20.4e6, 0.5e-3) == doctest::Approx(20400.0));
  }

  SUBCASE("arc shape: zero at center, saturates at f_arc, wider for larger n") {
    const auto g = aligned_grid(0.05, 0.15, 101);
    const double b0 = 0.1024;
    const auto a1 = arc_family(13.9e6, 0.89e-3, 1, b0, g);
    const auto a2 = arc_family(13.9e6, 0.89e-3, 2, b0, g);
    double min1 = 1e300;
    size_t kmin = 0;
    for (size_t i = 0; i < a1.freq_Hz.size(); ++i) {
      CHECK(a1.freq_Hz[i] <= 13.9e6 * (1 + 1e-12));
      if (a1.freq_Hz[i] < min1) {
        min1 = a1.freq_Hz[i];
        kmin = i;
      }
    }
    CHECK(std::abs(a1.field_T[kmin] - b0) < 1.5e-3);
    CHECK(a1.freq_Hz.front() == doctest::Approx(13.9e6).epsilon(1e-6));
    // the wider arc lies strictly below at points where tanh is unsaturated
    CHECK(a2.freq_Hz[kmin + 1] < a1.freq_Hz[kmin + 1]);
    CHECK(a2.freq_Hz[kmin - 1] < a1.freq_Hz[kmin - 1]);
  }
}

TEST_CASE("line family CSV") {
  NvParameters nv;
  const auto fams = nv_transitions(aligned_grid(0.01, 0.03, 3),
                                   Orientation::beta, nv);
  const std::string path = "test_lines_families.csv";
  write_families_csv(fams, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "field_T,freq_Hz,class,orientation,i,j,weight");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    std::istringstream is(line);
    std::string field, freq, cls, ori, li, lj, w;
    std::getline(is, field, ',');
    std::getline(is, freq, ',');
    std::getline(is, cls, ',');
    std::getline(is, ori, ',');
    std::getline(is, li, ',');
    std::getline(is, lj, ',');
    std::getline(is, w, ',');
    CHECK(cls == "nv_single");
    CHECK(ori == "beta");
    CHECK(std::stod(freq) > 0);
  }
  CHECK(rows == 9);
  in.close();
  std::remove(path.c_str());
}
