#pragma once

#include <Eigen/Dense>
#include <string>

#include "odmr/constants.hpp"

namespace odmr {

enum class Orientation { alpha, beta, gamma, delta };

std::string orientation_name(Orientation o);
Orientation orientation_from_name(const std::string& name);

// The four <111> crystallographic unit vectors in cubic coordinates.
namespace crystal_axes {
Eigen::Vector3d axis(Orientation o);
Eigen::Vector3d alpha();  // [ 1,-1,-1]/sqrt(3)
Eigen::Vector3d beta();   // [-1, 1,-1]/sqrt(3)
Eigen::Vector3d gamma();  // [-1,-1, 1]/sqrt(3)
Eigen::Vector3d delta();  // [ 1, 1, 1]/sqrt(3)
}  // namespace crystal_axes

// Coil currents/fields plus the two misalignment angles. The lab z axis is
// nominally along alpha (main coil), lab y along [110] (2nd coil), lab x
// completes the right-handed frame (1st coil).
struct FieldConfiguration {
  double b_main = 0.0;   // tesla
  double b_coil1 = 0.0;  // tesla
  double b_coil2 = 0.0;  // tesla
  double theta_mis = constants::deg_to_rad(2.86);  // azimuthal, radians
  double phi_mis = constants::deg_to_rad(1.71);    // polar, radians
};

// Rotation mapping lab-frame components to crystal cubic coordinates for
// the given misalignment angles (extrinsic Rz(theta)*Ry(phi) convention).
Eigen::Matrix3d lab_to_crystal_matrix(double theta_mis, double phi_mis);

// Total coil field expressed on the crystal cubic axes (tesla).
Eigen::Vector3d lab_field_vector(const FieldConfiguration& cfg);

// Side-coil fields that make the total field parallel to alpha for the
// given main-coil field. Throws std::runtime_error on singular geometry
// and std::invalid_argument for |angles| >= 30 deg.
std::pair<double, double> compensate_misalignment(double b_main,
                                                  const FieldConfiguration& cfg);

struct DefectFrameField {
  double b_par = 0.0;   // tesla, along the defect axis
  double b_perp = 0.0;  // tesla, transverse magnitude
  double psi = 0.0;     // radians, atan2(b_perp, b_par)
};

DefectFrameField defect_frame_field(const Eigen::Vector3d& b_crystal,
                                    const Eigen::Vector3d& axis);

}  // namespace odmr
