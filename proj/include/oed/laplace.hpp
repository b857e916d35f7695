#ifndef OED_LAPLACE_HPP
#define OED_LAPLACE_HPP

#include "oed/bayes.hpp"
#include "oed/nelder_mead.hpp"

namespace oed {

/// Gaussian posterior approximation N(theta_hat, cov) plus the model-call cost
/// of fitting it. Immutable once built; safe to share across workers.
struct LaplaceFit {
  Vector theta_hat;
  Matrix cov;
  Matrix prec;
  double logdet_cov = 0.0;
  int map_cost = 0;              // model calls spent locating theta_hat
  Matrix prec_chol_lower;        // L with L L^T = prec; used for sampling/pdf

  double logpdf(const Vector& theta) const;
  Vector sample(RngStream& rng) const;
};

struct MapResult {
  Vector theta_hat;
  int cost = 0;                  // model calls consumed (the paper's C_MAP)
  bool converged = false;
};

/// Posterior mode of || . ||^2-misfit plus negative log-prior, located with
/// Nelder-Mead started at the prior mean. For uniform priors the search is
/// clamped to the open interior of the support.
MapResult map_estimate(const BayesProblem& problem, const ObservationSet& Y, const Vector& xi,
                       const NelderMeadConfig& nm_config = {});

/// Gauss-Newton posterior precision at theta_hat:
///   prec = n_exp * Jtheta' Sigma_eps^-1 Jtheta + prior curvature,
/// inverted via Cholesky. Cost: the jac_theta calls (d+1 forward).
/// A single jitter of 1e-10 * trace/d is applied if the factorization fails;
/// a second failure raises SingularFitError.
LaplaceFit laplace_covariance(const BayesProblem& problem, const Vector& xi,
                              const Vector& theta_hat, const FDScheme& scheme);

/// Same fit from a precomputed Jacobian (no model calls).
LaplaceFit laplace_covariance_from_jacobian(const BayesProblem& problem, const Matrix& jac,
                                            const Vector& theta_hat);

}  // namespace oed

#endif  // OED_LAPLACE_HPP
