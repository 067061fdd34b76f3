#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "odmr/constants.hpp"

namespace odmr {

using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// Angular-momentum matrices in the Sz eigenbasis, ordered m = +s ... -s.
// Entries are in units of hbar (dimensionless).
struct SpinOperatorSet {
  double s = 0;
  ComplexMatrix sx, sy, sz;

  int dim() const { return static_cast<int>(2 * s + 1.5); }
};

// s must be 1/2 or 1.
SpinOperatorSet spin_operators(double s);

// Kronecker product, first factor is the slow (block) index.
ComplexMatrix kron_product(const ComplexMatrix& a, const ComplexMatrix& b);

// All frequencies are angular (rad/s); gyromagnetic ratios rad/s/T.
struct NvParameters {
  double d_zfs = constants::two_pi * 2.87e9;
  double e_strain = 0.0;
  double gamma_e = constants::two_pi * 28.03e9;

  // Throws std::invalid_argument on d_zfs <= 0; warns on large strain.
  void validate() const;
};

struct P1Parameters {
  double gamma_e = constants::two_pi * 28.03e9;
  double gamma_n = constants::two_pi * 3.0766e6;
  double quadrupole_q = -constants::two_pi * 3.97e6;
  double hyperfine_par = constants::two_pi * 114e6;
  double hyperfine_perp = constants::two_pi * 81.3e6;

  void validate() const;
};

// H/hbar of the NV- ground-state triplet, 3x3, angular frequency units.
// b_defect is the magnetic field (tesla) expressed in the defect frame
// (z along the NV symmetry axis).
ComplexMatrix build_nv_hamiltonian(const Eigen::Vector3d& b_defect,
                                   const NvParameters& params);

// H/hbar of the P1 center on (electron S=1/2) x (14N nucleus I=1), 6x6.
// z is the Jahn-Teller distortion axis.
ComplexMatrix build_p1_hamiltonian(const Eigen::Vector3d& b_defect,
                                   const P1Parameters& params);

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  ComplexMatrix eigenvectors;    // columns, orthonormal
};

bool is_hermitian(const ComplexMatrix& h, double rel_tol = 1e-12);

// Deterministic cyclic Jacobi diagonalization of a Hermitian matrix.
// Throws std::invalid_argument for non-Hermitian input and
// std::runtime_error if the sweep budget is exhausted.
EigenDecomposition eigh(const ComplexMatrix& h);

// Label each eigenvector with the basis label of maximal overlap
// |<basis|vec>|^2; ties broken toward the lower basis index. Labels are
// advisory near anticrossings and may repeat.
std::vector<int> label_states(const EigenDecomposition& decomp,
                              const std::vector<int>& basis_labels);

// One-to-one variant: greedy assignment by descending overlap, each basis
// index used once. Returns, for each eigenvector, the assigned basis index.
std::vector<int> assign_basis_indices(const EigenDecomposition& decomp);

}  // namespace odmr
