#ifndef OED_TYPES_HPP
#define OED_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace oed {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Per-coordinate [lo, hi] box, used for design-space projection.
struct Box {
  Vector lo;
  Vector hi;

  Box() = default;
  Box(Vector lo_, Vector hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size() || (lo.array() >= hi.array()).any())
      throw std::invalid_argument("Box: lo must be componentwise below hi");
  }

  static Box cube(Eigen::Index dim, double lo_, double hi_) {
    return Box(Vector::Constant(dim, lo_), Vector::Constant(dim, hi_));
  }

  Eigen::Index dim() const { return lo.size(); }
  bool contains(const Vector& x) const {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }
  Vector project(const Vector& x) const {
    return x.cwiseMax(lo).cwiseMin(hi);
  }
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad dimensions, unknown names, schema violations. CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

/// Non-finite model output or other runtime evaluation failure. Exit code 1.
struct EvalError : Error {
  using Error::Error;
};

/// Laplace precision not SPD even after one jitter attempt.
struct SingularFitError : Error {
  using Error::Error;
};

/// Operation requested on the boundary of a bounded support.
struct BoundaryError : Error {
  using Error::Error;
};

}  // namespace oed

#endif  // OED_TYPES_HPP
