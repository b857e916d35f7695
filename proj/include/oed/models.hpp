#ifndef OED_MODELS_HPP
#define OED_MODELS_HPP

#include "oed/model.hpp"

namespace oed {

/// Stochastic quadratic benchmark: f(xi, theta) = -(1/2 xi.A.xi + xi.A.theta)
/// with A = diag(1..n). Scalar output; ships the closed-form ascent direction
/// -A.(xi + theta).
ModelPtr make_example1_quadratic(Eigen::Index n = 20);

/// Scalar quadratic design model:
///   g(xi, theta) = (xi.A.xi) theta - (xi.A.1) theta^2 - 8 theta - 1,
/// design box [-2, 2]^2.
ModelPtr make_example2_quadratic_oed(Matrix A = (Matrix(2, 2) << 1.0, -0.2, -0.2, 0.5).finished());

struct TimoshenkoParams {
  double length = 10000.0;     // mm
  double height = 2000.0;      // mm
  double base = 100.0;         // mm
  double load = 1000.0;        // N/mm (1.00 kN/mm)
  double shear_factor = 5.0 / 6.0;

  double inertia() const { return base * height * height * height / 12.0; }
  double area() const { return base * height; }
};

/// Strain-gauge response (normal strain, shear strain) on a uniformly loaded
/// beam; design = gauge position (x1, x2) in mm, parameters = (E, G) in MPa.
ModelPtr make_timoshenko(TimoshenkoParams params = {});

/// Oracle model g = J.theta + offset, constant in xi. Conjugate with a
/// Gaussian prior, so posterior moments and the information gain are closed
/// form; used purely for estimator verification.
ModelPtr make_linear_gaussian(Matrix J, Vector offset = Vector(), Eigen::Index dim_xi = 1,
                              double box_halfwidth = 10.0);

/// Builtin lookup by the names exposed in config files.
/// Throws ConfigError for unknown names.
ModelPtr make_builtin(const std::string& name);

}  // namespace oed

#endif  // OED_MODELS_HPP
