#include "oed/models.hpp"

namespace oed {

namespace {

class Example1Quadratic final : public ForwardModel {
 public:
  explicit Example1Quadratic(Eigen::Index n)
      : ForwardModel(n, n, 1, Box::cube(n, -1e6, 1e6)),
        diag_(Vector::LinSpaced(n, 1.0, static_cast<double>(n))) {}

  bool has_analytic_design_gradient() const override { return true; }

  Vector analytic_design_gradient(const Vector& xi, const Vector& theta) const override {
    return -(diag_.array() * (xi + theta).array()).matrix();
  }

 private:
  Vector do_eval(const Vector& xi, const Vector& theta) const override {
    Vector out(1);
    out[0] = -(0.5 * xi.dot(diag_.asDiagonal() * xi) + xi.dot(diag_.asDiagonal() * theta));
    return out;
  }

  Vector diag_;
};

class QuadraticOed final : public ForwardModel {
 public:
  explicit QuadraticOed(Matrix A)
      : ForwardModel(2, 1, 1, Box::cube(2, -2.0, 2.0)), A_(std::move(A)) {
    if (A_.rows() != 2 || A_.cols() != 2)
      throw ConfigError("example2_quadratic_oed: A must be 2x2");
  }

 private:
  Vector do_eval(const Vector& xi, const Vector& theta) const override {
    double th = theta[0];
    double qf = xi.dot(A_ * xi);
    double lf = xi.dot(A_ * Vector::Ones(2));
    Vector out(1);
    out[0] = qf * th - lf * th * th - 8.0 * th - 1.0;
    return out;
  }

  Matrix A_;
};

class TimoshenkoBeam final : public ForwardModel {
 public:
  explicit TimoshenkoBeam(TimoshenkoParams p)
      : ForwardModel(2, 2, 2,
                     Box((Vector(2) << 0.0, -p.height / 2.0).finished(),
                         (Vector(2) << p.length, p.height / 2.0).finished())),
        p_(p) {
    if (p.length <= 0 || p.height <= 0 || p.base <= 0 || p.shear_factor <= 0)
      throw ConfigError("timoshenko: geometry must be positive");
  }

 private:
  Vector do_eval(const Vector& xi, const Vector& theta) const override {
    double x1 = xi[0], x2 = xi[1];
    double E = theta[0], G = theta[1];
    Vector out(2);
    out[0] = x2 * (p_.load * p_.length * x1 - p_.load * x1 * x1) / (2.0 * E * p_.inertia());
    out[1] = (p_.length / 2.0 * p_.load - p_.load * x1) / (p_.shear_factor * G * p_.area());
    return out;
  }

  TimoshenkoParams p_;
};

class LinearGaussian final : public ForwardModel {
 public:
  LinearGaussian(Matrix J, Vector offset, Eigen::Index dim_xi, double halfwidth)
      : ForwardModel(dim_xi, J.cols(), J.rows(), Box::cube(dim_xi, -halfwidth, halfwidth)),
        J_(std::move(J)),
        offset_(std::move(offset)) {
    if (offset_.size() == 0) offset_ = Vector::Zero(J_.rows());
    if (offset_.size() != J_.rows())
      throw ConfigError("linear_gaussian: offset length must match rows of J");
  }

  const Matrix& design_matrix() const { return J_; }

 private:
  Vector do_eval(const Vector&, const Vector& theta) const override {
    return J_ * theta + offset_;
  }

  Matrix J_;
  Vector offset_;
};

}  // namespace

ModelPtr make_example1_quadratic(Eigen::Index n) {
  if (n < 1) throw ConfigError("example1_quadratic: n must be positive");
  return std::make_shared<Example1Quadratic>(n);
}

ModelPtr make_example2_quadratic_oed(Matrix A) {
  return std::make_shared<QuadraticOed>(std::move(A));
}

ModelPtr make_timoshenko(TimoshenkoParams params) {
  return std::make_shared<TimoshenkoBeam>(params);
}

ModelPtr make_linear_gaussian(Matrix J, Vector offset, Eigen::Index dim_xi,
                              double box_halfwidth) {
  return std::make_shared<LinearGaussian>(std::move(J), std::move(offset), dim_xi,
                                          box_halfwidth);
}

ModelPtr make_builtin(const std::string& name) {
  if (name == "example1_quadratic") return make_example1_quadratic();
  if (name == "example2_quadratic_oed") return make_example2_quadratic_oed();
  if (name == "timoshenko") return make_timoshenko();
  if (name == "linear_gaussian") return make_linear_gaussian(Matrix::Identity(1, 1));
  throw ConfigError("unknown builtin model '" + name + "'");
}

}  // namespace oed
