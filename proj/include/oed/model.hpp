#ifndef OED_MODEL_HPP
#define OED_MODEL_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "oed/types.hpp"

namespace oed {

/// Finite-difference scheme for the model Jacobians.
/// Step per coordinate: h_i = rel_step * max(1, |x_i|).
struct FDScheme {
  enum class Mode { forward, central };
  Mode mode = Mode::forward;
  double rel_step = 1e-6;

  static FDScheme forward(double rel = 1e-6) { return {Mode::forward, rel}; }
  static FDScheme central(double rel = 1e-5) { return {Mode::central, rel}; }

  void validate() const {
    if (!(rel_step > 0.0) || rel_step > 1e-2)
      throw ConfigError("FDScheme: rel_step must be in (0, 1e-2]");
  }
  double step(double x) const { return rel_step * std::max(1.0, std::abs(x)); }
};

/// Deterministic experiment response g(xi, theta) with a thread-safe call
/// counter. Evaluation must stay valid slightly outside the design box so the
/// differentiation operators can place FD stencils near the boundary.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;

  Eigen::Index design_dim() const { return dim_xi_; }
  Eigen::Index param_dim() const { return d_; }
  Eigen::Index output_dim() const { return r_; }
  const Box& bounds() const { return bounds_; }

  Vector eval(const Vector& xi, const Vector& theta) const {
    if (xi.size() != dim_xi_)
      throw ConfigError("ForwardModel::eval: design dimension mismatch (got " +
                        std::to_string(xi.size()) + ", expected " +
                        std::to_string(dim_xi_) + ")");
    if (theta.size() != d_)
      throw ConfigError("ForwardModel::eval: parameter dimension mismatch (got " +
                        std::to_string(theta.size()) + ", expected " +
                        std::to_string(d_) + ")");
    calls_.fetch_add(1, std::memory_order_relaxed);
    return do_eval(xi, theta);
  }

  std::uint64_t eval_count() const { return calls_.load(std::memory_order_relaxed); }

  /// Closed-form ascent direction of the model's objective, when one exists
  /// (the stochastic quadratic benchmark ships one).
  virtual bool has_analytic_design_gradient() const { return false; }
  virtual Vector analytic_design_gradient(const Vector& /*xi*/, const Vector& /*theta*/) const {
    throw ConfigError("model has no analytic design gradient");
  }

 protected:
  ForwardModel(Eigen::Index dim_xi, Eigen::Index d, Eigen::Index r, Box bounds)
      : dim_xi_(dim_xi), d_(d), r_(r), bounds_(std::move(bounds)) {
    if (dim_xi < 1 || d < 1 || r < 1)
      throw ConfigError("ForwardModel: dimensions must be positive");
    if (bounds_.dim() != dim_xi)
      throw ConfigError("ForwardModel: bounds dimension mismatch");
  }

  virtual Vector do_eval(const Vector& xi, const Vector& theta) const = 0;

 private:
  Eigen::Index dim_xi_, d_, r_;
  Box bounds_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

using ModelPtr = std::shared_ptr<const ForwardModel>;

/// d g / d theta, r x d. Cost: d+1 calls (forward), 2d (central).
Matrix jac_theta(const ForwardModel& model, const Vector& xi, const Vector& theta,
                 const FDScheme& scheme);

/// d g / d xi, r x dim_xi. Cost: dim_xi+1 calls (forward), 2*dim_xi (central).
Matrix jac_xi(const ForwardModel& model, const Vector& xi, const Vector& theta,
              const FDScheme& scheme);

/// Mixed second derivatives d^2 g / (d xi_s d theta): one r x d block per
/// design coordinate s. Nested finite differences; cost (dim_xi+1)(d+1)
/// forward-mode calls, 4*dim_xi*d central.
std::vector<Matrix> cross_jac(const ForwardModel& model, const Vector& xi,
                              const Vector& theta, const FDScheme& scheme);

}  // namespace oed

#endif  // OED_MODEL_HPP
