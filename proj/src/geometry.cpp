#include "odmr/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace odmr {

std::string orientation_name(Orientation o) {
  switch (o) {
    case Orientation::alpha: return "alpha";
    case Orientation::beta: return "beta";
    case Orientation::gamma: return "gamma";
    case Orientation::delta: return "delta";
  }
  return "?";
}

Orientation orientation_from_name(const std::string& name) {
  if (name == "alpha") return Orientation::alpha;
  if (name == "beta") return Orientation::beta;
  if (name == "gamma") return Orientation::gamma;
  if (name == "delta") return Orientation::delta;
  throw std::invalid_argument("unknown orientation: " + name);
}

namespace crystal_axes {

Eigen::Vector3d alpha() { return Eigen::Vector3d(1, -1, -1).normalized(); }
Eigen::Vector3d beta() { return Eigen::Vector3d(-1, 1, -1).normalized(); }
Eigen::Vector3d gamma() { return Eigen::Vector3d(-1, -1, 1).normalized(); }
Eigen::Vector3d delta() { return Eigen::Vector3d(1, 1, 1).normalized(); }

Eigen::Vector3d axis(Orientation o) {
  switch (o) {
    case Orientation::alpha: return alpha();
    case Orientation::beta: return beta();
    case Orientation::gamma: return gamma();
    case Orientation::delta: return delta();
  }
  throw std::invalid_argument("bad orientation");
}

}  // namespace crystal_axes

namespace {

// Columns: the nominal lab axes (1st coil, 2nd coil, main coil) expressed
// in crystal cubic coordinates. Lab z along alpha, lab y along [110].
Eigen::Matrix3d nominal_lab_axes() {
  const Eigen::Vector3d z = crystal_axes::alpha();
  const Eigen::Vector3d y = Eigen::Vector3d(1, 1, 0).normalized();
  const Eigen::Vector3d x = y.cross(z);
  Eigen::Matrix3d m;
  m.col(0) = x;
  m.col(1) = y;
  m.col(2) = z;
  return m;
}

}  // namespace

Eigen::Matrix3d lab_to_crystal_matrix(double theta_mis, double phi_mis) {
  const Eigen::Matrix3d rz =
      Eigen::AngleAxisd(theta_mis, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  const Eigen::Matrix3d ry =
      Eigen::AngleAxisd(phi_mis, Eigen::Vector3d::UnitY()).toRotationMatrix();
  // crystal rotated from lab by Rz(theta)*Ry(phi); lab components map
  // through the inverse, then onto the cubic axes.
  return nominal_lab_axes() * (rz * ry).transpose();
}

Eigen::Vector3d lab_field_vector(const FieldConfiguration& cfg) {
  const Eigen::Vector3d b_lab(cfg.b_coil1, cfg.b_coil2, cfg.b_main);
  return lab_to_crystal_matrix(cfg.theta_mis, cfg.phi_mis) * b_lab;
}

std::pair<double, double> compensate_misalignment(double b_main,
                                                  const FieldConfiguration& cfg) {
  const double limit = constants::deg_to_rad(30.0);
  if (std::abs(cfg.theta_mis) >= limit || std::abs(cfg.phi_mis) >= limit) {
    throw std::invalid_argument("compensate_misalignment: angles must be < 30 deg");
  }
  const Eigen::Matrix3d m = lab_to_crystal_matrix(cfg.theta_mis, cfg.phi_mis);
  const Eigen::Vector3d a = crystal_axes::alpha();

  // Basis transverse to alpha.
  Eigen::Vector3d u = a.cross(Eigen::Vector3d(1, 1, 0).normalized()).normalized();
  Eigen::Vector3d w = a.cross(u);

  Eigen::Matrix2d sys;
  sys << u.dot(m.col(0)), u.dot(m.col(1)), w.dot(m.col(0)), w.dot(m.col(1));
  const Eigen::Vector2d rhs(-u.dot(m.col(2)) * b_main, -w.dot(m.col(2)) * b_main);
  if (std::abs(sys.determinant()) < 1e-12) {
    throw std::runtime_error("compensate_misalignment: singular coil geometry");
  }
  const Eigen::Vector2d sol = sys.fullPivLu().solve(rhs);
  return {sol[0], sol[1]};
}

DefectFrameField defect_frame_field(const Eigen::Vector3d& b_crystal,
                                    const Eigen::Vector3d& axis) {
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("defect_frame_field: axis must be unit norm");
  }
  DefectFrameField out;
  out.b_par = b_crystal.dot(axis);
  out.b_perp = (b_crystal - out.b_par * axis).norm();
  out.psi = std::atan2(out.b_perp, out.b_par);
  return out;
}

}  // namespace odmr
