#include "oed/bayes.hpp"

#include <cmath>

namespace oed {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;

// Lower Cholesky factor, or throw.
Matrix spd_cholesky(const Matrix& m, const char* what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw ConfigError(std::string(what) + ": matrix is not symmetric positive definite");
  return llt.matrixL();
}

double logdet_from_chol(const Matrix& L) {
  return 2.0 * L.diagonal().array().log().sum();
}
}  // namespace

Prior Prior::gaussian(Vector mean, Matrix cov) {
  if (cov.rows() != cov.cols() || cov.rows() != mean.size())
    throw ConfigError("gaussian prior: cov must be d x d matching mean");
  Prior p;
  p.kind_ = Kind::gaussian;
  p.mean_ = std::move(mean);
  p.cov_ = std::move(cov);
  p.chol_lower_ = spd_cholesky(p.cov_, "gaussian prior cov");
  p.logdet_cov_ = logdet_from_chol(p.chol_lower_);
  p.prec_ = Eigen::LLT<Matrix>(p.cov_).solve(Matrix::Identity(p.dim(), p.dim()));
  p.spread_ = p.cov_.diagonal().array().sqrt();
  p.lo_ = Vector::Constant(p.dim(), -std::numeric_limits<double>::infinity());
  p.hi_ = Vector::Constant(p.dim(), std::numeric_limits<double>::infinity());
  return p;
}

Prior Prior::uniform(Vector lo, Vector hi) {
  if (lo.size() != hi.size() || (lo.array() >= hi.array()).any())
    throw ConfigError("uniform prior: need lo < hi componentwise");
  Prior p;
  p.kind_ = Kind::uniform;
  p.lo_ = std::move(lo);
  p.hi_ = std::move(hi);
  p.mean_ = 0.5 * (p.lo_ + p.hi_);
  p.spread_ = p.hi_ - p.lo_;
  return p;
}

double Prior::logpdf(const Vector& theta) const {
  if (theta.size() != dim()) throw ConfigError("prior logpdf: dimension mismatch");
  if (kind_ == Kind::gaussian) {
    Vector c = theta - mean_;
    return -0.5 * (dim() * kLog2Pi + logdet_cov_) - 0.5 * c.dot(prec_ * c);
  }
  if (!in_support(theta)) return -std::numeric_limits<double>::infinity();
  return -spread_.array().log().sum();
}

Vector Prior::sample(RngStream& rng) const {
  if (kind_ == Kind::gaussian) return mean_ + chol_lower_ * rng.normal_vector(dim());
  Vector out(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) out[i] = rng.uniform(lo_[i], hi_[i]);
  return out;
}

Matrix Prior::neg_log_hessian(const Vector& theta) const {
  if (kind_ == Kind::gaussian) return prec_;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (theta[i] <= lo_[i] || theta[i] >= hi_[i])
      throw BoundaryError("uniform prior Hessian requested on the support boundary");
  }
  return Matrix::Zero(dim(), dim());
}

bool Prior::in_support(const Vector& theta) const {
  if (kind_ == Kind::gaussian) return true;
  return (theta.array() >= lo_.array()).all() && (theta.array() <= hi_.array()).all();
}

Vector Prior::clamp_to_interior(const Vector& theta) const {
  if (kind_ == Kind::gaussian) return theta;
  Vector margin = 1e-9 * spread_;
  return theta.cwiseMax(lo_ + margin).cwiseMin(hi_ - margin);
}

NoiseModel::NoiseModel(Matrix cov) : cov_(std::move(cov)) {
  if (cov_.rows() != cov_.cols()) throw ConfigError("noise cov must be square");
  chol_lower_ = spd_cholesky(cov_, "noise cov");
  logdet_cov_ = logdet_from_chol(chol_lower_);
  prec_ = Eigen::LLT<Matrix>(cov_).solve(Matrix::Identity(dim(), dim()));
}

NoiseModel NoiseModel::diagonal(const Vector& variances) {
  return NoiseModel(Matrix(variances.asDiagonal()));
}

BayesProblem::BayesProblem(ModelPtr model_, Prior prior_, NoiseModel noise_, int n_exp_)
    : model(std::move(model_)), prior(std::move(prior_)), noise(std::move(noise_)), n_exp(n_exp_) {
  if (!model) throw ConfigError("BayesProblem: null model");
  if (prior.dim() != model->param_dim())
    throw ConfigError("BayesProblem: prior dimension does not match model parameters");
  if (noise.dim() != model->output_dim())
    throw ConfigError("BayesProblem: noise dimension does not match model outputs");
  if (n_exp < 1) throw ConfigError("BayesProblem: n_exp must be >= 1");
}

ObservationSet synthesize_data(const BayesProblem& problem, const Vector& xi,
                               const Vector& theta_t, RngStream& rng) {
  Vector g = problem.model->eval(xi, theta_t);
  Matrix y(problem.n_exp, g.size());
  for (int i = 0; i < problem.n_exp; ++i) y.row(i) = (g + problem.noise.sample(rng)).transpose();
  return ObservationSet{std::move(y)};
}

double log_likelihood_given_response(const BayesProblem& problem, const ObservationSet& Y,
                                     const Vector& g) {
  const auto& noise = problem.noise;
  double quad = 0.0;
  for (Eigen::Index i = 0; i < Y.y.rows(); ++i)
    quad += noise.mahalanobis2(Y.y.row(i).transpose() - g);
  double n = static_cast<double>(Y.y.rows());
  return -0.5 * n * (noise.dim() * kLog2Pi + noise.logdet_cov()) - 0.5 * quad;
}

double log_likelihood(const BayesProblem& problem, const ObservationSet& Y, const Vector& xi,
                      const Vector& theta) {
  if (Y.y.cols() != problem.model->output_dim())
    throw ConfigError("log_likelihood: observation width does not match model output");
  return log_likelihood_given_response(problem, Y, problem.model->eval(xi, theta));
}

double log_likelihood_from_residuals(const BayesProblem& problem, const Vector& g_data,
                                     const Matrix& eps, const Vector& g_at) {
  const auto& noise = problem.noise;
  double quad = 0.0;
  for (Eigen::Index i = 0; i < eps.rows(); ++i)
    quad += noise.mahalanobis2(g_data - g_at + eps.row(i).transpose());
  double n = static_cast<double>(eps.rows());
  return -0.5 * n * (noise.dim() * kLog2Pi + noise.logdet_cov()) - 0.5 * quad;
}

double pathwise_log_numerator(const BayesProblem& problem, const Matrix& eps) {
  const auto& noise = problem.noise;
  double quad = 0.0;
  for (Eigen::Index i = 0; i < eps.rows(); ++i)
    quad += noise.mahalanobis2(eps.row(i).transpose());
  double n = static_cast<double>(eps.rows());
  return -0.5 * n * (noise.dim() * kLog2Pi + noise.logdet_cov()) - 0.5 * quad;
}

}  // namespace oed
