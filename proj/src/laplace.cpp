#include "oed/laplace.hpp"

#include <cmath>

namespace oed {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

double LaplaceFit::logpdf(const Vector& theta) const {
  Vector c = theta - theta_hat;
  double quad = c.dot(prec * c);
  double d = static_cast<double>(theta_hat.size());
  return -0.5 * (d * kLog2Pi + logdet_cov) - 0.5 * quad;
}

Vector LaplaceFit::sample(RngStream& rng) const {
  // x = theta_hat + L^-T z has covariance (L L^T)^-1 = prec^-1.
  Vector z = rng.normal_vector(theta_hat.size());
  return theta_hat + prec_chol_lower.transpose().triangularView<Eigen::Upper>().solve(z);
}

MapResult map_estimate(const BayesProblem& problem, const ObservationSet& Y, const Vector& xi,
                       const NelderMeadConfig& nm_config) {
  const Prior& prior = problem.prior;

  auto objective = [&](const Vector& theta_raw) {
    Vector theta = prior.clamp_to_interior(theta_raw);
    Vector g = problem.model->eval(xi, theta);
    double misfit = 0.0;
    for (Eigen::Index i = 0; i < Y.y.rows(); ++i)
      misfit += problem.noise.mahalanobis2(Y.y.row(i).transpose() - g);
    return 0.5 * misfit - prior.logpdf(theta);
  };

  // spread() is the prior sd (gaussian) or the range (uniform); 5% of either
  // sizes the initial simplex.
  NelderMeadResult nm = nelder_mead(objective, prior.mean(), 0.05 * prior.spread(), nm_config);

  MapResult res;
  res.theta_hat = prior.clamp_to_interior(nm.x);
  res.cost = nm.evals;
  res.converged = nm.converged;
  return res;
}

LaplaceFit laplace_covariance_from_jacobian(const BayesProblem& problem, const Matrix& jac,
                                            const Vector& theta_hat) {
  const Eigen::Index d = problem.model->param_dim();
  Matrix prec = static_cast<double>(problem.n_exp) * jac.transpose() * problem.noise.prec() * jac +
                problem.prior.neg_log_hessian(theta_hat);
  prec = 0.5 * (prec + prec.transpose()).eval();

  Eigen::LLT<Matrix> llt(prec);
  if (llt.info() != Eigen::Success) {
    double jitter = 1e-10 * prec.trace() / static_cast<double>(d);
    prec += jitter * Matrix::Identity(d, d);
    llt.compute(prec);
    if (llt.info() != Eigen::Success)
      throw SingularFitError("laplace_covariance: precision not SPD after jitter");
  }

  LaplaceFit fit;
  fit.theta_hat = theta_hat;
  fit.prec = prec;
  fit.prec_chol_lower = llt.matrixL();
  fit.cov = llt.solve(Matrix::Identity(d, d));
  fit.logdet_cov = -2.0 * fit.prec_chol_lower.diagonal().array().log().sum();
  return fit;
}

LaplaceFit laplace_covariance(const BayesProblem& problem, const Vector& xi,
                              const Vector& theta_hat, const FDScheme& scheme) {
  if (!problem.prior.in_support(theta_hat))
    throw BoundaryError("laplace_covariance: theta_hat outside prior support");
  Matrix J = jac_theta(*problem.model, xi, theta_hat, scheme);
  return laplace_covariance_from_jacobian(problem, J, theta_hat);
}

}  // namespace oed
