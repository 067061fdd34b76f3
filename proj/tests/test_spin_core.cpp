#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "odmr/spin_core.hpp"

using namespace odmr;
using Complex = std::complex<double>;

namespace {

ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return 0.5 * (a + ComplexMatrix(a.adjoint()));
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("spin_operators defining representations") {
  const auto half = spin_operators(0.5);
  CHECK(half.sz(0, 0) == Complex(0.5, 0));
  CHECK(half.sz(1, 1) == Complex(-0.5, 0));
  CHECK(half.sx(0, 1) == Complex(0.5, 0));

  const auto one = spin_operators(1.0);
  CHECK(one.sz(0, 0) == Complex(1, 0));
  CHECK(one.sz(1, 1) == Complex(0, 0));
  CHECK(one.sz(2, 2) == Complex(-1, 0));
  const ComplexMatrix sp = one.sx + Complex(0, 1) * one.sy;
  CHECK(std::abs(sp(0, 1) - std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(sp(1, 2) - std::sqrt(2.0)) < 1e-14);

  CHECK_THROWS_AS(spin_operators(1.5), std::invalid_argument);
}

TEST_CASE("spin operator algebra") {
  for (double s : {0.5, 1.0}) {
    const auto ops = spin_operators(s);
    const ComplexMatrix comm =
        ops.sx * ops.sy - ops.sy * ops.sx - Complex(0, 1) * ops.sz;
    CHECK(max_abs(comm) < 1e-12);
    const ComplexMatrix casimir = ops.sx * ops.sx + ops.sy * ops.sy +
                                  ops.sz * ops.sz -
                                  s * (s + 1) * ComplexMatrix::Identity(ops.dim(), ops.dim());
    CHECK(max_abs(casimir) < 1e-12);
    CHECK(is_hermitian(ops.sx));
    CHECK(is_hermitian(ops.sy));
    CHECK(is_hermitian(ops.sz));
  }
}

TEST_CASE("kron_product identities and index formula") {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix i3 = ComplexMatrix::Identity(3, 3);
  CHECK(max_abs(kron_product(i2, i3) - ComplexMatrix::Identity(6, 6)) == 0.0);

  ComplexMatrix dz = ComplexMatrix::Zero(2, 2);
  dz(0, 0) = 1;
  dz(1, 1) = -1;
  const ComplexMatrix k = kron_product(dz, i3);
  for (int i = 0; i < 6; ++i) {
    CHECK(k(i, i) == Complex(i < 3 ? 1 : -1, 0));
  }

  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  ComplexMatrix a(2, 2), b(3, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = Complex(g(rng), g(rng));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = Complex(g(rng), g(rng));
  const ComplexMatrix ab = kron_product(a, b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k2 = 0; k2 < 3; ++k2)
        for (int l = 0; l < 3; ++l)
          CHECK(std::abs(ab(3 * i + k2, 3 * j + l) - a(i, j) * b(k2, l)) < 1e-15);
}

TEST_CASE("NV Hamiltonian spectra") {
  NvParameters p;

  SUBCASE("zero field") {
    const auto d = eigh(build_nv_hamiltonian(Eigen::Vector3d::Zero(), p));
    CHECK(std::abs(d.eigenvalues[0]) < 1e-3);
    CHECK(d.eigenvalues[1] / constants::two_pi == doctest::Approx(2.87e9).epsilon(1e-12));
    CHECK(d.eigenvalues[2] / constants::two_pi == doctest::Approx(2.87e9).epsilon(1e-12));
  }

  SUBCASE("50 mT aligned transition frequencies") {
    const auto d = eigh(build_nv_hamiltonian(Eigen::Vector3d(0, 0, 0.05), p));
    // transitions from the m=0 level
    std::vector<double> freqs;
    for (int k = 0; k < 3; ++k) {
      const double f = d.eigenvalues[k] / constants::two_pi;
      if (std::abs(f) > 1e6) freqs.push_back(std::abs(f));
    }
    std::sort(freqs.begin(), freqs.end());
    CHECK(freqs[0] == doctest::Approx(1468.5e6).epsilon(1e-9));
    CHECK(freqs[1] == doctest::Approx(4271.5e6).epsilon(1e-9));
  }

  SUBCASE("strain splits the upper doublet by 2E") {
    p.e_strain = constants::two_pi * 5e6;
    const auto d = eigh(build_nv_hamiltonian(Eigen::Vector3d::Zero(), p));
    CHECK((d.eigenvalues[2] - d.eigenvalues[1]) / constants::two_pi ==
          doctest::Approx(10e6).epsilon(1e-9));
  }

  SUBCASE("aligned closed form over field range") {
    for (double b : {0.0, 0.05, 0.1024, 0.15, 0.2}) {
      const auto d = eigh(build_nv_hamiltonian(Eigen::Vector3d(0, 0, b), p));
      std::vector<double> expect = {0.0, (p.d_zfs - p.gamma_e * b) / constants::two_pi,
                                    (p.d_zfs + p.gamma_e * b) / constants::two_pi};
      std::sort(expect.begin(), expect.end());
      for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(d.eigenvalues[k] / constants::two_pi - expect[k]) < 1e3);
      }
    }
  }

  SUBCASE("B -> -B with relabeling leaves the spectrum invariant") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Vector3d b(0.02 * g(rng), 0.02 * g(rng), 0.05 * g(rng));
      const auto d1 = eigh(build_nv_hamiltonian(b, p));
      const auto d2 = eigh(build_nv_hamiltonian(-b, p));
      for (int k = 0; k < 3; ++k) {
        CHECK(d1.eigenvalues[k] ==
              doctest::Approx(d2.eigenvalues[k]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("P1 Hamiltonian spectra") {
  P1Parameters p;

  SUBCASE("empty Hamiltonian") {
    P1Parameters zero = p;
    zero.quadrupole_q = 0;
    // hyperfine couplings must stay positive; make them negligible instead
    zero.hyperfine_par = 1e-6;
    zero.hyperfine_perp = 1e-6;
    const auto d = eigh(build_p1_hamiltonian(Eigen::Vector3d::Zero(), zero));
    for (int k = 0; k < 6; ++k) CHECK(std::abs(d.eigenvalues[k]) < 1e-3);
  }

  SUBCASE("0.1 T aligned, mI=0 electron flip near gamma_e*B") {
    const auto d = eigh(build_p1_hamiltonian(Eigen::Vector3d(0, 0, 0.1), p));
    const auto basis_of = assign_basis_indices(d);
    std::vector<double> e_of(6);
    for (int k = 0; k < 6; ++k) e_of[basis_of[k]] = d.eigenvalues[k];
    // basis 1 = (+1/2, mI=0), basis 4 = (-1/2, mI=0)
    const double f = std::abs(e_of[1] - e_of[4]) / constants::two_pi;
    CHECK(std::abs(f - 2803e6) < 10e6);
  }

  SUBCASE("first-order lines split pairwise by ~A_par at 38 mT aligned") {
    const auto d = eigh(build_p1_hamiltonian(Eigen::Vector3d(0, 0, 0.038), p));
    const auto basis_of = assign_basis_indices(d);
    std::vector<double> e_of(6);
    for (int k = 0; k < 6; ++k) e_of[basis_of[k]] = d.eigenvalues[k];
    std::vector<double> lines;
    for (int mi = 0; mi < 3; ++mi) {
      lines.push_back(std::abs(e_of[mi] - e_of[3 + mi]) / constants::two_pi);
    }
    std::sort(lines.begin(), lines.end());
    // second-order hyperfine shifts ~A_perp^2 / (gamma_e B) ~ 6 MHz skew the
    // gaps away from exactly A_par at this field
    CHECK(std::abs(lines[1] - lines[0] - 114e6) < 8e6);
    CHECK(std::abs(lines[2] - lines[1] - 114e6) < 8e6);
  }

  SUBCASE("isotropic hyperfine is rotation invariant") {
    P1Parameters iso = p;
    iso.hyperfine_perp = iso.hyperfine_par;
    iso.quadrupole_q = 0;  // the quadrupole term itself defines an axis
    const double b = 0.07;
    const auto d1 = eigh(build_p1_hamiltonian(Eigen::Vector3d(0, 0, b), iso));
    const Eigen::Vector3d tilted =
        b * Eigen::Vector3d(std::sin(0.7), 0, std::cos(0.7));
    const auto d2 = eigh(build_p1_hamiltonian(tilted, iso));
    for (int k = 0; k < 6; ++k) {
      CHECK(std::abs(d1.eigenvalues[k] - d2.eigenvalues[k]) / constants::two_pi <
            1e3);
    }
  }
}

TEST_CASE("eigh on canonical matrices") {
  SUBCASE("already diagonal") {
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = 3;
    h(1, 1) = 1;
    h(2, 2) = 2;
    const auto d = eigh(h);
    CHECK(d.eigenvalues[0] == 1.0);
    CHECK(d.eigenvalues[1] == 2.0);
    CHECK(d.eigenvalues[2] == 3.0);
    CHECK(std::norm(d.eigenvectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::norm(d.eigenvectors(2, 1)) == doctest::Approx(1.0));
    CHECK(std::norm(d.eigenvectors(0, 2)) == doctest::Approx(1.0));
  }

  SUBCASE("Pauli x") {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 1) = 1;
    h(1, 0) = 1;
    const auto d = eigh(h);
    CHECK(d.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(d.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("known spectrum through a random unitary") {
    std::mt19937_64 rng(11);
    ComplexMatrix g = random_hermitian(6, rng);
    const auto gd = eigh(g);  // unitary source
    Eigen::VectorXd spec(6);
    spec << -3, -1, 0, 0.5, 2, 10;
    const ComplexMatrix h = gd.eigenvectors * spec.asDiagonal() *
                            gd.eigenvectors.adjoint();
    const auto d = eigh(h);
    for (int k = 0; k < 6; ++k) {
      CHECK(d.eigenvalues[k] == doctest::Approx(spec[k]).epsilon(1e-12));
    }
  }

  SUBCASE("rejects non-Hermitian input") {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 1) = 1;
    h(1, 0) = 2;
    CHECK_THROWS_AS(eigh(h), std::invalid_argument);
  }
}

TEST_CASE("eigh invariants on random matrices") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = (trial % 2 == 0) ? 3 : 6;
    const ComplexMatrix h = random_hermitian(n, rng);
    const auto d = eigh(h);
    const double scale = std::max(1.0, max_abs(h));
    const ComplexMatrix vtv = d.eigenvectors.adjoint() * d.eigenvectors;
    CHECK(max_abs(vtv - ComplexMatrix::Identity(n, n)) <= 1e-12);
    const ComplexMatrix rec = d.eigenvectors *
                              d.eigenvalues.cast<Complex>().asDiagonal() *
                              d.eigenvectors.adjoint();
    CHECK(max_abs(rec - h) <= 1e-12 * scale);
    CHECK(d.eigenvalues.sum() ==
          doctest::Approx(h.trace().real()).epsilon(1e-10));
    for (int k = 1; k < n; ++k) CHECK(d.eigenvalues[k] >= d.eigenvalues[k - 1]);
  }
}

TEST_CASE("label_states") {
  NvParameters p;

  SUBCASE("aligned field below the GSLAC") {
    const auto d = eigh(build_nv_hamiltonian(Eigen::Vector3d(0, 0, 0.05), p));
    const auto labels = label_states(d, {-1, 0, +1});
    // ascending energy: m=0 (~0), then the descending branch, then +1
    CHECK(labels[0] == 0);
    CHECK(labels[1] == -1);
    CHECK(labels[2] == +1);
  }

  SUBCASE("zero field ground level is m=0") {
    const auto d = eigh(build_nv_hamiltonian(Eigen::Vector3d::Zero(), p));
    const auto labels = label_states(d, {-1, 0, +1});
    CHECK(labels[0] == 0);
  }

  SUBCASE("near-equal mixing at the GSLAC") {
    const double b = p.d_zfs / p.gamma_e;
    const double psi = 1e-3;
    const auto d = eigh(build_nv_hamiltonian(
        Eigen::Vector3d(b * psi, 0, b), p));
    // the two anticrossing states are half-and-half
    double w00 = std::norm(d.eigenvectors(0, 0));
    double w10 = std::norm(d.eigenvectors(1, 0));
    CHECK(std::abs(w00 + w10 - 1.0) < 1e-6);
    CHECK(std::abs(w00 - 0.5) < 0.05);
    const auto labels = label_states(d, {-1, 0, +1});
    CHECK((labels[0] == -1 || labels[0] == 0));
  }
}
