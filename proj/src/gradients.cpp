#include "oed/gradients.hpp"

#include <cmath>

#include "oed/parallel.hpp"

namespace oed {

GradientKind gradient_kind_from_name(const std::string& name) {
  if (name == "sg_mc") return GradientKind::sg_mc;
  if (name == "sg_la") return GradientKind::sg_la;
  if (name == "sg_mcis") return GradientKind::sg_mcis;
  if (name == "analytic") return GradientKind::analytic;
  throw ConfigError("unknown gradient estimator '" + name + "'");
}

std::string to_string(GradientKind kind) {
  switch (kind) {
    case GradientKind::sg_mc: return "sg_mc";
    case GradientKind::sg_la: return "sg_la";
    case GradientKind::sg_mcis: return "sg_mcis";
    case GradientKind::analytic: return "analytic";
  }
  return "?";
}

namespace {

// FD stencil in the design variable. Forward mode keeps the base point at
// slot 0; central mode stores +/- pairs.
struct Stencil {
  std::vector<Vector> points;
  std::vector<double> steps;   // per design coordinate
  bool central = false;

  static Stencil make(const Vector& xi, const FDScheme& scheme) {
    Stencil st;
    st.central = scheme.mode == FDScheme::Mode::central;
    const Eigen::Index m = xi.size();
    for (Eigen::Index s = 0; s < m; ++s) st.steps.push_back(scheme.step(xi[s]));
    if (!st.central) {
      st.points.push_back(xi);
      for (Eigen::Index s = 0; s < m; ++s) {
        Vector xp = xi;
        xp[s] += st.steps[s];
        st.points.push_back(xp);
      }
    } else {
      for (Eigen::Index s = 0; s < m; ++s) {
        Vector xp = xi, xm = xi;
        xp[s] += st.steps[s];
        xm[s] -= st.steps[s];
        st.points.push_back(xp);
        st.points.push_back(xm);
      }
    }
    return st;
  }

  // Gradient from per-point values of the differentiated function.
  Vector gradient(const std::vector<double>& f) const {
    const auto m = steps.size();
    Vector g(m);
    if (!central) {
      for (std::size_t s = 0; s < m; ++s) g[s] = (f[s + 1] - f[0]) / steps[s];
    } else {
      for (std::size_t s = 0; s < m; ++s) g[s] = (f[2 * s] - f[2 * s + 1]) / (2.0 * steps[s]);
    }
    return g;
  }
};

struct BatchAccum {
  std::vector<Vector> grads;
  std::vector<std::uint64_t> costs;
  std::atomic<int> fallbacks{0};

  explicit BatchAccum(int b) : grads(b), costs(b, 0) {}

  GradientEstimate reduce(bool keep_samples) {
    GradientEstimate est;
    est.grad = Vector::Zero(grads.front().size());
    for (const auto& g : grads) est.grad += g;
    est.grad /= static_cast<double>(grads.size());
    for (auto c : costs) est.ncfm += c;
    est.map_fallbacks = fallbacks.load();
    if (keep_samples) est.per_sample = std::move(grads);
    return est;
  }
};

}  // namespace

GradientEstimate sg_mc(const BayesProblem& problem, const Vector& xi,
                       const GradientConfig& config, const RngStream& rng) {
  config.validate();
  const int B = config.batch, M = config.m_inner;
  BatchAccum acc(B);

  parallel_for(B, config.workers, [&](int b) {
    RngStream s = rng.child(rng_tag::gradient_batch).child(b);
    Vector theta = problem.prior.sample(s);
    RngStream noise_rng = s.child(rng_tag::data_noise);
    Matrix eps(problem.n_exp, problem.model->output_dim());
    for (int i = 0; i < problem.n_exp; ++i) eps.row(i) = problem.noise.sample(noise_rng).transpose();
    RngStream inner = s.child(rng_tag::inner_dlmc);
    std::vector<Vector> theta_star(M);
    for (int m = 0; m < M; ++m) theta_star[m] = problem.prior.sample(inner);

    Stencil st = Stencil::make(xi, config.fd_scheme);
    std::uint64_t calls = 0;
    std::vector<double> f(st.points.size());
    // Proposition-1 numerator: depends only on eps, shared across the stencil.
    double lognum = pathwise_log_numerator(problem, eps);
    for (std::size_t p = 0; p < st.points.size(); ++p) {
      Vector g_data = problem.model->eval(st.points[p], theta);
      ++calls;
      Vector ll(M);
      for (int m = 0; m < M; ++m) {
        Vector g_star = problem.model->eval(st.points[p], theta_star[m]);
        ++calls;
        ll[m] = log_likelihood_from_residuals(problem, g_data, eps, g_star);
      }
      f[p] = lognum - log_mean_exp(ll);
    }
    acc.grads[b] = st.gradient(f);
    acc.costs[b] = calls;
  });

  return acc.reduce(config.collect_per_sample);
}

GradientEstimate sg_la(const BayesProblem& problem, const Vector& xi,
                       const GradientConfig& config, const RngStream& rng) {
  config.validate();
  const int B = config.batch;
  const Eigen::Index m = problem.model->design_dim();
  constexpr int kMaxRedraws = 10;
  BatchAccum acc(B);

  parallel_for(B, config.workers, [&](int b) {
    RngStream s = rng.child(rng_tag::gradient_batch).child(b);
    for (int attempt = 0;; ++attempt) {
      Vector theta = problem.prior.sample(s);
      std::uint64_t calls = 0;
      try {
        Matrix J = jac_theta(*problem.model, xi, theta, config.fd_scheme);
        calls += config.fd_scheme.mode == FDScheme::Mode::forward
                     ? problem.model->param_dim() + 1
                     : 2 * problem.model->param_dim();
        LaplaceFit fit = laplace_covariance_from_jacobian(problem, J, theta);

        Vector g(m);
        Matrix noise_prec_J = problem.noise.prec() * J;
        if (config.fd_scheme.mode == FDScheme::Mode::forward) {
          for (Eigen::Index sc = 0; sc < m; ++sc) {
            double h = config.fd_scheme.step(xi[sc]);
            Vector xp = xi;
            xp[sc] += h;
            Matrix Jp = jac_theta(*problem.model, xp, theta, config.fd_scheme);
            calls += problem.model->param_dim() + 1;
            Matrix H = (Jp - J) / h;
            Matrix T = H.transpose() * noise_prec_J;
            Matrix sym = 0.5 * (T + T.transpose());
            g[sc] = problem.n_exp * fit.cov.cwiseProduct(sym).sum();
          }
        } else {
          for (Eigen::Index sc = 0; sc < m; ++sc) {
            double h = config.fd_scheme.step(xi[sc]);
            Vector xp = xi, xm = xi;
            xp[sc] += h;
            xm[sc] -= h;
            Matrix Jp = jac_theta(*problem.model, xp, theta, config.fd_scheme);
            Matrix Jm = jac_theta(*problem.model, xm, theta, config.fd_scheme);
            calls += 4 * problem.model->param_dim();
            Matrix H = (Jp - Jm) / (2.0 * h);
            Matrix T = H.transpose() * noise_prec_J;
            Matrix sym = 0.5 * (T + T.transpose());
            g[sc] = problem.n_exp * fit.cov.cwiseProduct(sym).sum();
          }
        }
        acc.grads[b] = g;
        acc.costs[b] = calls;
        return;
      } catch (const SingularFitError&) {
        if (attempt + 1 >= kMaxRedraws)
          throw SingularFitError("sg_la: repeated singular Laplace fits");
      }
    }
  });

  return acc.reduce(config.collect_per_sample);
}

GradientEstimate sg_mcis(const BayesProblem& problem, const Vector& xi,
                         const GradientConfig& config, const RngStream& rng) {
  config.validate();
  const int B = config.batch, M = config.m_inner;
  BatchAccum acc(B);

  parallel_for(B, config.workers, [&](int b) {
    RngStream s = rng.child(rng_tag::gradient_batch).child(b);
    Vector theta = problem.prior.sample(s);
    RngStream noise_rng = s.child(rng_tag::data_noise);
    Matrix eps(problem.n_exp, problem.model->output_dim());
    for (int i = 0; i < problem.n_exp; ++i) eps.row(i) = problem.noise.sample(noise_rng).transpose();

    std::uint64_t calls = 0;
    Vector g_base = problem.model->eval(xi, theta);
    ++calls;
    ObservationSet Y{eps.rowwise() + g_base.transpose()};

    // Proposal fitted once at the base design and frozen across the stencil.
    MapResult map = map_estimate(problem, Y, xi, config.nm);
    calls += map.cost;
    bool use_la = map.converged;
    LaplaceFit fit;
    if (use_la) {
      try {
        fit = laplace_covariance(problem, xi, map.theta_hat, config.fd_scheme);
        calls += config.fd_scheme.mode == FDScheme::Mode::forward
                     ? problem.model->param_dim() + 1
                     : 2 * problem.model->param_dim();
      } catch (const SingularFitError&) {
        calls += config.fd_scheme.mode == FDScheme::Mode::forward
                     ? problem.model->param_dim() + 1
                     : 2 * problem.model->param_dim();
        use_la = false;
      }
    }
    if (!use_la) acc.fallbacks.fetch_add(1, std::memory_order_relaxed);

    RngStream inner = s.child(rng_tag::inner_dlmcis);
    std::vector<Vector> theta_star(M);
    Vector frozen_lw(M);
    for (int m = 0; m < M; ++m) {
      theta_star[m] = use_la ? fit.sample(inner) : problem.prior.sample(inner);
      frozen_lw[m] =
          use_la ? problem.prior.logpdf(theta_star[m]) - fit.logpdf(theta_star[m]) : 0.0;
    }

    Stencil st = Stencil::make(xi, config.fd_scheme);
    double lognum = pathwise_log_numerator(problem, eps);
    std::vector<double> f(st.points.size());
    for (std::size_t p = 0; p < st.points.size(); ++p) {
      bool is_base = !st.central && p == 0;
      Vector g_data = is_base ? g_base : problem.model->eval(st.points[p], theta);
      if (!is_base) ++calls;
      Vector ll(M);
      for (int m = 0; m < M; ++m) {
        Vector g_star = problem.model->eval(st.points[p], theta_star[m]);
        ++calls;
        ll[m] = log_likelihood_from_residuals(problem, g_data, eps, g_star) + frozen_lw[m];
      }
      f[p] = lognum - log_mean_exp(ll);
    }
    acc.grads[b] = st.gradient(f);
    acc.costs[b] = calls;
  });

  return acc.reduce(config.collect_per_sample);
}

GradientEstimate sg_analytic(const BayesProblem& problem, const Vector& xi,
                             const GradientConfig& config, const RngStream& rng) {
  config.validate();
  if (!problem.model->has_analytic_design_gradient())
    throw ConfigError("analytic gradient requested but the model provides none");
  const int B = config.batch;
  BatchAccum acc(B);
  parallel_for(B, config.workers, [&](int b) {
    RngStream s = rng.child(rng_tag::gradient_batch).child(b);
    Vector theta = problem.prior.sample(s);
    acc.grads[b] = problem.model->analytic_design_gradient(xi, theta);
    acc.costs[b] = 0;
  });
  return acc.reduce(config.collect_per_sample);
}

GradientEstimate estimate_gradient(const BayesProblem& problem, const Vector& xi,
                                   const GradientConfig& config, const RngStream& rng) {
  switch (config.kind) {
    case GradientKind::sg_mc: return sg_mc(problem, xi, config, rng);
    case GradientKind::sg_la: return sg_la(problem, xi, config, rng);
    case GradientKind::sg_mcis: return sg_mcis(problem, xi, config, rng);
    case GradientKind::analytic: return sg_analytic(problem, xi, config, rng);
  }
  throw ConfigError("estimate_gradient: bad kind");
}

GradientEstimate full_gradient(const BayesProblem& problem, const Vector& xi, GradientKind kind,
                               int n, int m, const RngStream& rng, int workers) {
  GradientConfig config;
  config.kind = kind;
  config.batch = n;
  config.m_inner = m;
  config.workers = workers;
  return estimate_gradient(problem, xi, config, rng);
}

Vector logdet_gradient_trace_form(const Matrix& sigma, const std::vector<Matrix>& dsigma) {
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw ConfigError("logdet_gradient_trace_form: sigma not SPD");
  Vector g(dsigma.size());
  for (std::size_t s = 0; s < dsigma.size(); ++s)
    g[s] = -0.5 * llt.solve(dsigma[s]).trace();
  return g;
}

Vector logdet_gradient_eigen_form(const Matrix& sigma, const std::vector<Matrix>& dsigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  if (eig.info() != Eigen::Success)
    throw ConfigError("logdet_gradient_eigen_form: eigendecomposition failed");
  const Vector& evals = eig.eigenvalues();   // sigma_k^2
  const Matrix& V = eig.eigenvectors();
  Vector g = Vector::Zero(dsigma.size());
  for (std::size_t s = 0; s < dsigma.size(); ++s) {
    for (Eigen::Index k = 0; k < evals.size(); ++k) {
      double dev = V.col(k).dot(dsigma[s] * V.col(k));  // d(sigma_k^2)/dxi_s
      // sigma_k^-1 * d sigma_k = d(sigma_k^2) / (2 sigma_k^2)
      g[s] -= dev / (2.0 * evals[k]);
    }
  }
  return g;
}

}  // namespace oed
