#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace igashell {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Voigt3 = Eigen::Vector3d;   // [11, 22, 12], strains carry engineering shear
using Voigt3x3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed input data (knot vectors, patches, model descriptions).
class ValidationError : public Error {
public:
    using Error::Error;
};

class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

/// Constitutive update failure: inverted states, non-convergent local solves.
class MaterialError : public Error {
public:
    using Error::Error;
};

/// Multi-patch model inconsistencies (merging, strips, references).
class ModelError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}
    double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace igashell
