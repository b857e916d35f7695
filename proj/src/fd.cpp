#include "oed/model.hpp"

#include <sstream>

namespace oed {

namespace {

[[noreturn]] void throw_nonfinite(const Vector& xi, const Vector& theta) {
  std::ostringstream os;
  os << "non-finite model output at xi = [" << xi.transpose() << "], theta = ["
     << theta.transpose() << "]";
  throw EvalError(os.str());
}

Vector checked_eval(const ForwardModel& model, const Vector& xi, const Vector& theta) {
  Vector g = model.eval(xi, theta);
  if (!g.allFinite()) throw_nonfinite(xi, theta);
  return g;
}

}  // namespace

Matrix jac_theta(const ForwardModel& model, const Vector& xi, const Vector& theta,
                 const FDScheme& scheme) {
  scheme.validate();
  const Eigen::Index d = model.param_dim();
  Matrix J(model.output_dim(), d);
  if (scheme.mode == FDScheme::Mode::forward) {
    Vector g0 = checked_eval(model, xi, theta);
    for (Eigen::Index j = 0; j < d; ++j) {
      double h = scheme.step(theta[j]);
      Vector tp = theta;
      tp[j] += h;
      J.col(j) = (checked_eval(model, xi, tp) - g0) / h;
    }
  } else {
    for (Eigen::Index j = 0; j < d; ++j) {
      double h = scheme.step(theta[j]);
      Vector tp = theta, tm = theta;
      tp[j] += h;
      tm[j] -= h;
      J.col(j) = (checked_eval(model, xi, tp) - checked_eval(model, xi, tm)) / (2.0 * h);
    }
  }
  return J;
}

Matrix jac_xi(const ForwardModel& model, const Vector& xi, const Vector& theta,
              const FDScheme& scheme) {
  scheme.validate();
  const Eigen::Index m = model.design_dim();
  Matrix J(model.output_dim(), m);
  if (scheme.mode == FDScheme::Mode::forward) {
    Vector g0 = checked_eval(model, xi, theta);
    for (Eigen::Index s = 0; s < m; ++s) {
      double h = scheme.step(xi[s]);
      Vector xp = xi;
      xp[s] += h;
      J.col(s) = (checked_eval(model, xp, theta) - g0) / h;
    }
  } else {
    for (Eigen::Index s = 0; s < m; ++s) {
      double h = scheme.step(xi[s]);
      Vector xp = xi, xm = xi;
      xp[s] += h;
      xm[s] -= h;
      J.col(s) = (checked_eval(model, xp, theta) - checked_eval(model, xm, theta)) / (2.0 * h);
    }
  }
  return J;
}

std::vector<Matrix> cross_jac(const ForwardModel& model, const Vector& xi,
                              const Vector& theta, const FDScheme& scheme) {
  scheme.validate();
  const Eigen::Index m = model.design_dim();
  std::vector<Matrix> H;
  H.reserve(m);
  if (scheme.mode == FDScheme::Mode::forward) {
    Matrix J0 = jac_theta(model, xi, theta, scheme);
    for (Eigen::Index s = 0; s < m; ++s) {
      double h = scheme.step(xi[s]);
      Vector xp = xi;
      xp[s] += h;
      H.push_back((jac_theta(model, xp, theta, scheme) - J0) / h);
    }
  } else {
    for (Eigen::Index s = 0; s < m; ++s) {
      double h = scheme.step(xi[s]);
      Vector xp = xi, xm = xi;
      xp[s] += h;
      xm[s] -= h;
      H.push_back((jac_theta(model, xp, theta, scheme) - jac_theta(model, xm, theta, scheme)) /
                  (2.0 * h));
    }
  }
  return H;
}

}  // namespace oed
