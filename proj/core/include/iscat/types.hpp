#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace iscat {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: geometry, sizes, indices, config values.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Singular factorization, non-finite residual, failed decomposition.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// The localization operator carries no signal above the truncation floor.
class DegenerateData : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

// Threshold selection picked no zone.
class EmptySelection : public Error {
 public:
  using Error::Error;
};

}  // namespace iscat
