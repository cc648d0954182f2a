#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace edgc {

/// Row-major dense matrix; one row per sample.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Binary label of a sample. `correct` is the set the base system handles
/// well (X), `error` the set of its mistakes (Y).
enum class Label : std::uint8_t { correct = 0, error = 1 };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs violate a documented precondition (shape, range, emptiness).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A numerical step could not be carried out (singular system, degenerate spectrum).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace edgc
