#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "odmr/lines.hpp"

namespace odmr {

// Rectangular intensity grid over (B, f); rows = frequency, columns = field.
struct OdmrMap {
  std::vector<double> field_axis;  // tesla, strictly increasing
  std::vector<double> freq_axis;   // Hz, strictly increasing
  Eigen::MatrixXd intensity;       // normalized to [0,1]

  void validate() const;
};

// Per-class parameters; classes absent from the map fall back to the default.
struct ClassValueMap {
  double default_value = 0.0;
  std::map<LineClass, double> by_class;

  double at(LineClass c) const {
    auto it = by_class.find(c);
    return it == by_class.end() ? default_value : it->second;
  }
};

// Sum of unit-peak Lorentzians along every family curve, weighted by
// amplitude * family weight, before clipping/normalization.
Eigen::MatrixXd synthesize_map_raw(const std::vector<LineFamily>& families,
                                   const std::vector<double>& field_axis,
                                   const std::vector<double>& freq_axis,
                                   const ClassValueMap& linewidth_hz,
                                   const ClassValueMap& amplitude);

// Raw synthesis clipped at clip_level, then max-normalized to [0,1].
OdmrMap synthesize_map(const std::vector<LineFamily>& families,
                       const std::vector<double>& field_axis,
                       const std::vector<double>& freq_axis,
                       const ClassValueMap& linewidth_hz,
                       const ClassValueMap& amplitude,
                       double clip_level = std::numeric_limits<double>::infinity());

// CSV: header row of field values, first column of frequency values,
// 9 significant digits.
void export_map_csv(const OdmrMap& map, const std::string& path);
OdmrMap import_map_csv(const std::string& path);

// Binary 16-bit P5 PGM; row 0 is the highest frequency.
void export_map_pgm(const OdmrMap& map, const std::string& path);

std::vector<double> linspace(double start, double stop, int n);

}  // namespace odmr
