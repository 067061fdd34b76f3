#include "odmr/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace odmr {

void OdmrMap::validate() const {
  auto monotone = [](const std::vector<double>& v) {
    for (size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] > v[i - 1])) return false;
    }
    return !v.empty();
  };
  if (!monotone(field_axis) || !monotone(freq_axis)) {
    throw std::invalid_argument("OdmrMap: axes must be strictly increasing");
  }
  if (intensity.rows() != static_cast<Eigen::Index>(freq_axis.size()) ||
      intensity.cols() != static_cast<Eigen::Index>(field_axis.size())) {
    throw std::invalid_argument("OdmrMap: intensity shape mismatch");
  }
  if (!intensity.allFinite() || intensity.minCoeff() < 0 || intensity.maxCoeff() > 1) {
    throw std::invalid_argument("OdmrMap: intensity must be finite in [0,1]");
  }
}

std::vector<double> linspace(double start, double stop, int n) {
  if (n < 2) throw std::invalid_argument("linspace: n must be >= 2");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = start + (stop - start) * i / (n - 1);
  return v;
}

namespace {

// Family frequency at one field value by linear interpolation; NaN outside
// the family's field range.
double family_freq_at(const LineFamily& fam, double field) {
  const auto& x = fam.field_T;
  if (x.empty() || field < x.front() || field > x.back()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  auto it = std::lower_bound(x.begin(), x.end(), field);
  if (it == x.begin()) return fam.freq_Hz.front();
  const size_t i = it - x.begin();
  if (i >= x.size()) return fam.freq_Hz.back();
  const double x1 = x[i - 1], x2 = x[i];
  if (x2 == x1) return fam.freq_Hz[i];
  const double t = (field - x1) / (x2 - x1);
  return fam.freq_Hz[i - 1] * (1 - t) + fam.freq_Hz[i] * t;
}

}  // namespace

Eigen::MatrixXd synthesize_map_raw(const std::vector<LineFamily>& families,
                                   const std::vector<double>& field_axis,
                                   const std::vector<double>& freq_axis,
                                   const ClassValueMap& linewidth_hz,
                                   const ClassValueMap& amplitude) {
  const Eigen::Index n_f = freq_axis.size();
  const Eigen::Index n_b = field_axis.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_f, n_b);
  for (const auto& fam : families) {
    const double width = linewidth_hz.at(fam.cls);
    if (!(width > 0)) {
      throw std::invalid_argument("synthesize_map: linewidth must be positive");
    }
    const double amp = amplitude.at(fam.cls) * fam.weight;
    const double hw = width / 2.0;
    for (Eigen::Index c = 0; c < n_b; ++c) {
      const double f0 = family_freq_at(fam, field_axis[c]);
      if (std::isnan(f0)) continue;
      for (Eigen::Index r = 0; r < n_f; ++r) {
        const double u = (freq_axis[r] - f0) / hw;
        out(r, c) += amp / (1.0 + u * u);
      }
    }
  }
  return out;
}

OdmrMap synthesize_map(const std::vector<LineFamily>& families,
                       const std::vector<double>& field_axis,
                       const std::vector<double>& freq_axis,
                       const ClassValueMap& linewidth_hz,
                       const ClassValueMap& amplitude, double clip_level) {
  Eigen::MatrixXd raw =
      synthesize_map_raw(families, field_axis, freq_axis, linewidth_hz, amplitude);
  raw = raw.cwiseMin(clip_level);
  const double mx = raw.maxCoeff();
  if (mx > 0) raw /= mx;
  OdmrMap map;
  map.field_axis = field_axis;
  map.freq_axis = freq_axis;
  map.intensity = std::move(raw);
  map.validate();
  return map;
}

void export_map_csv(const OdmrMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  std::ostringstream os;
  os.precision(9);
  os << "freq_Hz\\field_T";
  for (double b : map.field_axis) os << ',' << b;
  os << '\n';
  for (Eigen::Index r = 0; r < map.intensity.rows(); ++r) {
    os << map.freq_axis[r];
    for (Eigen::Index c = 0; c < map.intensity.cols(); ++c) {
      os << ',' << map.intensity(r, c);
    }
    os << '\n';
  }
  out << os.str();
  if (!out) throw std::runtime_error("write failed: " + path);
}

OdmrMap import_map_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  OdmrMap map;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty map CSV: " + path);
  {
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');  // corner header
    while (std::getline(ls, cell, ',')) map.field_axis.push_back(std::stod(cell));
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');
    map.freq_axis.push_back(std::stod(cell));
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != map.field_axis.size()) {
      throw std::runtime_error("ragged map CSV: " + path);
    }
    rows.push_back(std::move(row));
  }
  map.intensity.resize(rows.size(), map.field_axis.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) map.intensity(r, c) = rows[r][c];
  }
  map.validate();
  return map;
}

void export_map_pgm(const OdmrMap& map, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const Eigen::Index rows = map.intensity.rows();
  const Eigen::Index cols = map.intensity.cols();
  out << "P5\n" << cols << ' ' << rows << "\n65535\n";
  // row 0 = highest frequency
  for (Eigen::Index r = rows - 1; r >= 0; --r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto v = static_cast<std::uint16_t>(
          std::lround(map.intensity(r, c) * 65535.0));
      const unsigned char bytes[2] = {static_cast<unsigned char>(v >> 8),
                                      static_cast<unsigned char>(v & 0xff)};
      out.write(reinterpret_cast<const char*>(bytes), 2);
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace odmr
