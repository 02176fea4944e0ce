#pragma once

#include <stdexcept>
#include <string>

namespace cvbs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Angle at 0 or pi/2, where sin(2 theta) vanishes.
class DegenerateAngle : public Error {
 public:
  explicit DegenerateAngle(const std::string& what) : Error("DegenerateAngle: " + what) {}
};

// Gaussian contraction has no finite value (e.g. two delta kets along one quadrature).
class DivergentOverlap : public Error {
 public:
  explicit DivergentOverlap(const std::string& what) : Error("DivergentOverlap: " + what) {}
};

class NonConvergentSeries : public Error {
 public:
  explicit NonConvergentSeries(const std::string& what) : Error("NonConvergentSeries: " + what) {}
};

class GridTooCoarse : public Error {
 public:
  explicit GridTooCoarse(const std::string& what) : Error("GridTooCoarse: " + what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("InvalidArgument: " + what) {}
};

}  // namespace cvbs
