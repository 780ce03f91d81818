#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ist/grid.hpp"
#include "ist/verify.hpp"

namespace ist::io {

namespace detail {

inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

}  // namespace detail

/// Rows `x,y,re,im`, row-major with x outer.
inline void write_field2d_csv(const std::string& path, const ComplexField2D& u) {
  auto out = detail::open_out(path);
  out << "x,y,re,im\n";
  for (int i = 0; i < u.grid.gx.n; ++i)
    for (int j = 0; j < u.grid.gy.n; ++j)
      out << detail::fmt17(u.grid.gx.point(i)) << ',' << detail::fmt17(u.grid.gy.point(j))
          << ',' << detail::fmt17(u.at(i, j).real()) << ','
          << detail::fmt17(u.at(i, j).imag()) << '\n';
}

/// Rows `x,re,im`.
inline void write_field1d_csv(const std::string& path, const ComplexField1D& f) {
  auto out = detail::open_out(path);
  out << "x,re,im\n";
  for (int j = 0; j < f.grid.n; ++j)
    out << detail::fmt17(f.grid.point(j)) << ',' << detail::fmt17(f[j].real()) << ','
        << detail::fmt17(f[j].imag()) << '\n';
}

inline ComplexField1D read_field1d_csv(const std::string& path) {
  auto in = detail::open_in(path);
  std::string line;
  std::vector<double> xs;
  std::vector<complex> vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!line.empty() && !(std::isdigit(static_cast<unsigned char>(line[0])) ||
                           line[0] == '-' || line[0] == '+' || line[0] == '.'))
      continue;  // header
    std::istringstream ss(line);
    double x, re, im;
    char c1, c2;
    if (!(ss >> x >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',')
      throw std::runtime_error("malformed 1d csv row in " + path);
    xs.push_back(x);
    vs.push_back(complex(re, im));
  }
  if (xs.size() < 2) throw dimension_error("read_field1d_csv: need at least 2 rows");
  Grid1D g = Grid1D::over(xs.front(), xs.back(), static_cast<int>(xs.size()));
  return ComplexField1D(g, std::move(vs));
}

inline ComplexField2D read_field2d_csv(const std::string& path) {
  auto in = detail::open_in(path);
  std::string line;
  std::vector<double> xs, ys;
  std::vector<complex> vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-' ||
          line[0] == '+' || line[0] == '.'))
      continue;
    std::istringstream ss(line);
    double x, y, re, im;
    char c1, c2, c3;
    if (!(ss >> x >> c1 >> y >> c2 >> re >> c3 >> im) || c1 != ',' || c2 != ',' ||
        c3 != ',')
      throw std::runtime_error("malformed 2d csv row in " + path);
    if (xs.empty() || x != xs.back()) xs.push_back(x);
    if (xs.size() == 1) ys.push_back(y);
    vs.push_back(complex(re, im));
  }
  if (xs.size() < 2 || ys.size() < 2)
    throw dimension_error("read_field2d_csv: need at least a 2x2 grid");
  if (vs.size() != xs.size() * ys.size())
    throw dimension_error("read_field2d_csv: ragged rows");
  Grid2D g(Grid1D::over(xs.front(), xs.back(), static_cast<int>(xs.size())),
           Grid1D::over(ys.front(), ys.back(), static_cast<int>(ys.size())));
  return ComplexField2D(g, std::move(vs));
}

struct VerificationSummary {
  double conservation_error = 0.0;
  double residual_linf = 0.0;
  double residual_l2 = 0.0;
  double norm_drift = 0.0;
  double k = 0.0;
  int grid = 0;
  std::vector<double> times;
};

inline void write_report_json(const std::string& path, const VerificationSummary& s) {
  nlohmann::json j;
  j["conservation_error"] = s.conservation_error;
  j["residual_linf"] = s.residual_linf;
  j["residual_l2"] = s.residual_l2;
  j["norm_drift"] = s.norm_drift;
  j["k"] = s.k;
  j["grid"] = s.grid;
  j["times"] = s.times;
  auto out = detail::open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace ist::io
