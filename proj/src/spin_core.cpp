#include "odmr/spin_core.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace odmr {

SpinOperatorSet spin_operators(double s) {
  const bool half = std::abs(s - 0.5) < 1e-12;
  const bool one = std::abs(s - 1.0) < 1e-12;
  if (!half && !one) {
    throw std::invalid_argument("spin_operators: unsupported spin value");
  }
  const int dim = half ? 2 : 3;

  ComplexMatrix sp = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix sz = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = s - k;  // basis ordered m = +s ... -s
    sz(k, k) = m;
    if (k > 0) {
      // <m|S+|m-1>, raising from row k to row k-1
      const double mm = s - k;
      sp(k - 1, k) = std::sqrt(s * (s + 1) - mm * (mm + 1));
    }
  }
  const ComplexMatrix sm = sp.adjoint();

  SpinOperatorSet ops;
  ops.s = s;
  ops.sx = 0.5 * (sp + sm);
  ops.sy = Complex(0, -0.5) * (sp - sm);
  ops.sz = sz;
  return ops;
}

ComplexMatrix kron_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void NvParameters::validate() const {
  if (!(d_zfs > 0)) {
    throw std::invalid_argument("NvParameters: d_zfs must be positive");
  }
  if (std::abs(e_strain) > 0.1 * d_zfs) {
    std::cerr << "warning: e_strain exceeds 0.1*d_zfs\n";
  }
}

void P1Parameters::validate() const {
  if (!(hyperfine_par > 0) || !(hyperfine_perp > 0)) {
    throw std::invalid_argument("P1Parameters: hyperfine couplings must be positive");
  }
}

ComplexMatrix build_nv_hamiltonian(const Eigen::Vector3d& b_defect,
                                   const NvParameters& params) {
  if (!b_defect.allFinite()) {
    throw std::invalid_argument("build_nv_hamiltonian: field must be finite");
  }
  const SpinOperatorSet s = spin_operators(1.0);
  const ComplexMatrix sp = s.sx + Complex(0, 1) * s.sy;
  const ComplexMatrix sm = s.sx - Complex(0, 1) * s.sy;

  ComplexMatrix h = params.d_zfs * (s.sz * s.sz);
  h += 0.5 * params.e_strain * (sp * sp + sm * sm);
  h -= params.gamma_e *
       (b_defect.x() * s.sx + b_defect.y() * s.sy + b_defect.z() * s.sz);
  return h;
}

ComplexMatrix build_p1_hamiltonian(const Eigen::Vector3d& b_defect,
                                   const P1Parameters& params) {
  if (!b_defect.allFinite()) {
    throw std::invalid_argument("build_p1_hamiltonian: field must be finite");
  }
  const SpinOperatorSet se = spin_operators(0.5);
  const SpinOperatorSet in = spin_operators(1.0);
  const ComplexMatrix ie = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix ii = ComplexMatrix::Identity(3, 3);

  const ComplexMatrix sx = kron_product(se.sx, ii);
  const ComplexMatrix sy = kron_product(se.sy, ii);
  const ComplexMatrix sz = kron_product(se.sz, ii);
  const ComplexMatrix ix = kron_product(ie, in.sx);
  const ComplexMatrix iy = kron_product(ie, in.sy);
  const ComplexMatrix iz = kron_product(ie, in.sz);

  ComplexMatrix h =
      params.gamma_e * (b_defect.x() * sx + b_defect.y() * sy + b_defect.z() * sz);
  h -= params.gamma_n * (b_defect.x() * ix + b_defect.y() * iy + b_defect.z() * iz);
  h += params.hyperfine_perp * (sx * ix + sy * iy);
  h += params.hyperfine_par * (sz * iz);
  h += params.quadrupole_q *
       (iz * iz - (1.0 * (1.0 + 1.0) / 3.0) * ComplexMatrix::Identity(6, 6));
  return h;
}

bool is_hermitian(const ComplexMatrix& h, double rel_tol) {
  if (h.rows() != h.cols()) return false;
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

namespace {

// One cyclic-Jacobi sweep over all (p,q) pairs in fixed order.
double jacobi_sweep(ComplexMatrix& a, ComplexMatrix& v) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index p = 0; p < n - 1; ++p) {
    for (Eigen::Index q = p + 1; q < n; ++q) {
      const double apq = std::abs(a(p, q));
      if (apq == 0.0) continue;
      const double app = a(p, p).real();
      const double aqq = a(q, q).real();
      const Complex phase = a(p, q) / apq;

      const double tau = (aqq - app) / (2.0 * apq);
      const double t =
          (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;

      // G restricted to (p,q), from the dephasing diag(1, conj(phase))
      // followed by a real rotation; zeroes a(p,q).
      const Complex gpp = c, gpq = s;
      const Complex gqp = -s * std::conj(phase), gqq = c * std::conj(phase);

      // columns update: A <- A G, V <- V G
      for (Eigen::Index i = 0; i < n; ++i) {
        const Complex aip = a(i, p), aiq = a(i, q);
        a(i, p) = aip * gpp + aiq * gqp;
        a(i, q) = aip * gpq + aiq * gqq;
        const Complex vip = v(i, p), viq = v(i, q);
        v(i, p) = vip * gpp + viq * gqp;
        v(i, q) = vip * gpq + viq * gqq;
      }
      // rows update: A <- G^dagger A
      for (Eigen::Index j = 0; j < n; ++j) {
        const Complex apj = a(p, j), aqj = a(q, j);
        a(p, j) = std::conj(gpp) * apj + std::conj(gqp) * aqj;
        a(q, j) = std::conj(gpq) * apj + std::conj(gqq) * aqj;
      }
      a(p, q) = 0.0;
      a(q, p) = 0.0;
      a(p, p) = a(p, p).real();
      a(q, q) = a(q, q).real();
    }
  }
  double off = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) off = std::max(off, std::abs(a(i, j)));
  }
  return off;
}

}  // namespace

EigenDecomposition eigh(const ComplexMatrix& h) {
  if (!is_hermitian(h, 1e-9)) {
    throw std::invalid_argument("eigh: input is not Hermitian within tolerance");
  }
  const Eigen::Index n = h.rows();
  ComplexMatrix a = 0.5 * (h + ComplexMatrix(h.adjoint()));
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  const double scale = std::max(1e-300, a.cwiseAbs().maxCoeff());
  constexpr int kMaxSweeps = 100;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double off = jacobi_sweep(a, v);
    if (off <= 1e-15 * scale) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw std::runtime_error("eigh: Jacobi iteration did not converge");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = v.col(order[k]);
    // deterministic phase: largest-magnitude component real positive
    Eigen::Index imax = 0;
    double amax = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = std::abs(out.eigenvectors(i, k));
      if (m > amax + 1e-15) {
        amax = m;
        imax = i;
      }
    }
    const Complex z = out.eigenvectors(imax, k);
    if (std::abs(z) > 0) out.eigenvectors.col(k) *= std::conj(z) / std::abs(z);
  }
  return out;
}

std::vector<int> label_states(const EigenDecomposition& decomp,
                              const std::vector<int>& basis_labels) {
  const Eigen::Index n = decomp.eigenvectors.cols();
  if (static_cast<Eigen::Index>(basis_labels.size()) != n) {
    throw std::invalid_argument("label_states: basis_labels size mismatch");
  }
  std::vector<int> labels(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index best = 0;
    double bestw = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = std::norm(decomp.eigenvectors(i, k));
      if (w > bestw + 1e-12) {  // ties go to the lower basis index
        bestw = w;
        best = i;
      }
    }
    labels[k] = basis_labels[best];
  }
  return labels;
}

std::vector<int> assign_basis_indices(const EigenDecomposition& decomp) {
  const Eigen::Index n = decomp.eigenvectors.cols();
  struct Entry {
    double w;
    Eigen::Index vec, basis;
  };
  std::vector<Entry> entries;
  entries.reserve(n * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      entries.push_back({std::norm(decomp.eigenvectors(i, k)), k, i});
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.w != b.w) return a.w > b.w;
    if (a.vec != b.vec) return a.vec < b.vec;
    return a.basis < b.basis;
  });
  std::vector<int> out(n, -1);
  std::vector<bool> vec_done(n, false), basis_done(n, false);
  for (const Entry& e : entries) {
    if (vec_done[e.vec] || basis_done[e.basis]) continue;
    out[e.vec] = static_cast<int>(e.basis);
    vec_done[e.vec] = true;
    basis_done[e.basis] = true;
  }
  return out;
}

}  // namespace odmr
