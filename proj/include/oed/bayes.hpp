#ifndef OED_BAYES_HPP
#define OED_BAYES_HPP

#include <optional>

#include "oed/model.hpp"
#include "oed/rng.hpp"
#include "oed/types.hpp"

namespace oed {

/// Parameter prior: Gaussian with full covariance or componentwise uniform.
/// A Gaussian with exactly zero covariance degenerates to a point mass: it can
/// be sampled (always the mean) but has no density or curvature.
class Prior {
 public:
  enum class Kind { gaussian, uniform };

  static Prior gaussian(Vector mean, Matrix cov);
  static Prior uniform(Vector lo, Vector hi);

  bool degenerate() const { return degenerate_; }

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return mean_.size(); }

  /// Gaussian: the mean. Uniform: the box midpoint.
  const Vector& mean() const { return mean_; }
  /// Gaussian: marginal standard deviations. Uniform: the per-coordinate range.
  const Vector& spread() const { return spread_; }

  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  const Matrix& cov() const { return cov_; }

  double logpdf(const Vector& theta) const;
  Vector sample(RngStream& rng) const;

  /// -grad grad log pi(theta): the prior precision for Gaussians, zero for a
  /// uniform prior strictly inside its support.
  Matrix neg_log_hessian(const Vector& theta) const;

  bool in_support(const Vector& theta) const;

  /// For uniform priors, pull theta into the open interior shrunk by
  /// 1e-9 * range per coordinate; identity for Gaussians.
  Vector clamp_to_interior(const Vector& theta) const;

 private:
  Prior() = default;

  Kind kind_ = Kind::gaussian;
  Vector mean_, spread_;
  Vector lo_, hi_;          // uniform support
  Matrix cov_, prec_;       // gaussian
  Matrix chol_lower_;
  double logdet_cov_ = 0.0;
  bool degenerate_ = false;
};

/// Gaussian measurement noise with fixed SPD covariance.
class NoiseModel {
 public:
  explicit NoiseModel(Matrix cov);
  static NoiseModel diagonal(const Vector& variances);

  Eigen::Index dim() const { return cov_.rows(); }
  const Matrix& cov() const { return cov_; }
  const Matrix& prec() const { return prec_; }
  double logdet_cov() const { return logdet_cov_; }

  /// v . Sigma_eps^{-1} . v
  double mahalanobis2(const Vector& v) const { return v.dot(prec_ * v); }

  Vector sample(RngStream& rng) const { return chol_lower_ * rng.normal_vector(dim()); }

 private:
  Matrix cov_, prec_, chol_lower_;
  double logdet_cov_;
};

/// Repeated-experiment data: one row per experiment.
struct ObservationSet {
  Matrix y;  // n_exp x r
  Eigen::Index n_exp() const { return y.rows(); }
};

struct BayesProblem {
  ModelPtr model;
  Prior prior;
  NoiseModel noise;
  int n_exp = 1;

  BayesProblem(ModelPtr model_, Prior prior_, NoiseModel noise_, int n_exp_);
};

/// y_i = g(xi, theta_t) + eps_i for i = 1..n_exp; one model call, the response
/// shared across replicates.
ObservationSet synthesize_data(const BayesProblem& problem, const Vector& xi,
                               const Vector& theta_t, RngStream& rng);

/// Log-likelihood of Y at theta. Exactly one model call; never exponentiated.
double log_likelihood(const BayesProblem& problem, const ObservationSet& Y, const Vector& xi,
                      const Vector& theta);

/// Same likelihood given a precomputed response g(xi, theta) (no model call).
double log_likelihood_given_response(const BayesProblem& problem, const ObservationSet& Y,
                                     const Vector& g);

/// Likelihood written in the residual form r_i = g(xi,theta) + eps_i - g(xi,theta*):
/// the data never materialize, so Y(xi') = g(xi',theta) + eps is exact by
/// construction along FD stencils.
double log_likelihood_from_residuals(const BayesProblem& problem, const Vector& g_data,
                                     const Matrix& eps, const Vector& g_at);

/// log p of the noise realizations themselves: the pathwise numerator, which
/// depends on neither the model nor the design.
double pathwise_log_numerator(const BayesProblem& problem, const Matrix& eps);

}  // namespace oed

#endif  // OED_BAYES_HPP
