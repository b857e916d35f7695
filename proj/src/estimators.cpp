#include "oed/estimators.hpp"

#include <cmath>
#include <thread>

#include "oed/parallel.hpp"

namespace oed {

EstimatorKind estimator_kind_from_name(const std::string& name) {
  if (name == "dlmc") return EstimatorKind::dlmc;
  if (name == "mcla") return EstimatorKind::mcla;
  if (name == "dlmcis") return EstimatorKind::dlmcis;
  throw ConfigError("unknown estimator '" + name + "'");
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::dlmc: return "dlmc";
    case EstimatorKind::mcla: return "mcla";
    case EstimatorKind::dlmcis: return "dlmcis";
  }
  return "?";
}

double log_mean_exp(const Vector& ll) {
  double mx = ll.maxCoeff();
  if (!std::isfinite(mx)) return mx;  // all -inf stays -inf
  return mx + std::log((ll.array() - mx).exp().mean());
}

namespace {

struct OuterDraw {
  Vector theta;
  Matrix eps;      // n_exp x r noise realizations
  Vector g_data;   // g(xi, theta), 1 model call
  ObservationSet Y;
};

// Joint (theta_n, Y_n) draw shared by every estimator kind at equal seeds.
OuterDraw draw_outer(const BayesProblem& problem, const Vector& xi, RngStream& outer_rng,
                     bool with_data) {
  OuterDraw d;
  d.theta = problem.prior.sample(outer_rng);
  if (with_data) {
    RngStream noise_rng = outer_rng.child(rng_tag::data_noise);
    d.eps.resize(problem.n_exp, problem.model->output_dim());
    for (int i = 0; i < problem.n_exp; ++i) d.eps.row(i) = problem.noise.sample(noise_rng).transpose();
    d.g_data = problem.model->eval(xi, d.theta);
    d.Y.y = d.eps.rowwise() + d.g_data.transpose();
  }
  return d;
}

EIGEstimate reduce_summands(const Vector& summands, const std::vector<std::uint64_t>& costs) {
  EIGEstimate est;
  const auto n = summands.size();
  est.value = summands.mean();
  if (n > 1) {
    double ss = (summands.array() - est.value).square().sum() / static_cast<double>(n - 1);
    est.std_error = std::sqrt(ss / static_cast<double>(n));
  }
  for (auto c : costs) est.ncfm += c;
  return est;
}

}  // namespace

EIGEstimate eig_dlmc(const BayesProblem& problem, const Vector& xi, const EstimatorConfig& config,
                     const RngStream& rng) {
  config.validate();
  const int N = config.n_outer, M = config.m_inner;
  Vector summands(N);
  std::vector<std::uint64_t> costs(N);

  parallel_for(N, config.workers, [&](int n) {
    RngStream outer = rng.child(rng_tag::outer_sample).child(n);
    OuterDraw d = draw_outer(problem, xi, outer, true);
    double lognum = pathwise_log_numerator(problem, d.eps);

    RngStream inner = outer.child(rng_tag::inner_dlmc);
    Vector ll(M);
    for (int m = 0; m < M; ++m) {
      Vector theta_star = problem.prior.sample(inner);
      Vector g_star = problem.model->eval(xi, theta_star);
      ll[m] = log_likelihood_from_residuals(problem, d.g_data, d.eps, g_star);
    }
    summands[n] = lognum - log_mean_exp(ll);
    costs[n] = 1 + static_cast<std::uint64_t>(M);
  });

  return reduce_summands(summands, costs);
}

EIGEstimate eig_mcla(const BayesProblem& problem, const Vector& xi, const EstimatorConfig& config,
                     const RngStream& rng) {
  config.validate();
  const int N = config.n_outer;
  const double d = static_cast<double>(problem.model->param_dim());
  constexpr double kLog2Pi = 1.8378770664093454836;
  constexpr int kMaxRedraws = 10;

  Vector summands(N);
  std::vector<std::uint64_t> costs(N);
  std::atomic<int> redraws{0};

  parallel_for(N, config.workers, [&](int n) {
    RngStream outer = rng.child(rng_tag::outer_sample).child(n);
    std::uint64_t calls = 0;
    for (int attempt = 0;; ++attempt) {
      Vector theta = problem.prior.sample(outer);
      try {
        LaplaceFit fit = laplace_covariance(problem, xi, theta, config.fd_scheme);
        calls += problem.model->param_dim() + 1;
        summands[n] = -0.5 * (d * kLog2Pi + fit.logdet_cov) - 0.5 * d - problem.prior.logpdf(theta);
        costs[n] = calls;
        return;
      } catch (const SingularFitError&) {
        calls += problem.model->param_dim() + 1;
        redraws.fetch_add(1, std::memory_order_relaxed);
        if (attempt + 1 >= kMaxRedraws)
          throw SingularFitError("eig_mcla: " + std::to_string(kMaxRedraws) +
                                 " singular fits in a row at one outer slot");
      }
    }
  });

  EIGEstimate est = reduce_summands(summands, costs);
  est.redraws = redraws.load();
  return est;
}

EIGEstimate eig_dlmcis(const BayesProblem& problem, const Vector& xi,
                       const EstimatorConfig& config, const RngStream& rng) {
  config.validate();
  const int N = config.n_outer, M = config.m_inner;
  Vector summands(N);
  std::vector<std::uint64_t> costs(N);
  std::atomic<int> fallbacks{0};

  parallel_for(N, config.workers, [&](int n) {
    RngStream outer = rng.child(rng_tag::outer_sample).child(n);
    OuterDraw d = draw_outer(problem, xi, outer, true);
    double lognum = pathwise_log_numerator(problem, d.eps);
    std::uint64_t calls = 1;

    MapResult map = map_estimate(problem, d.Y, xi, config.nm);
    calls += map.cost;

    bool use_la = map.converged;
    LaplaceFit fit;
    if (use_la) {
      try {
        fit = laplace_covariance(problem, xi, map.theta_hat, config.fd_scheme);
        calls += problem.model->param_dim() + 1;
      } catch (const SingularFitError&) {
        calls += problem.model->param_dim() + 1;
        use_la = false;
      }
    }
    if (!use_la) fallbacks.fetch_add(1, std::memory_order_relaxed);

    RngStream inner = outer.child(rng_tag::inner_dlmcis);
    Vector ll(M);
    for (int m = 0; m < M; ++m) {
      // ell = p * pi / pi_LA, all in log space; prior proposal when the MAP
      // search failed (weights cancel to plain DLMC there).
      Vector theta_star = use_la ? fit.sample(inner) : problem.prior.sample(inner);
      Vector g_star = problem.model->eval(xi, theta_star);
      double lp = log_likelihood_from_residuals(problem, d.g_data, d.eps, g_star);
      double lw = use_la ? problem.prior.logpdf(theta_star) - fit.logpdf(theta_star) : 0.0;
      ll[m] = lp + lw;
    }
    summands[n] = lognum - log_mean_exp(ll);
    costs[n] = calls + static_cast<std::uint64_t>(M);
  });

  EIGEstimate est = reduce_summands(summands, costs);
  est.map_fallbacks = fallbacks.load();
  return est;
}

EIGEstimate estimate_eig(const BayesProblem& problem, const Vector& xi,
                         const EstimatorConfig& config, const RngStream& rng) {
  switch (config.kind) {
    case EstimatorKind::dlmc: return eig_dlmc(problem, xi, config, rng);
    case EstimatorKind::mcla: return eig_mcla(problem, xi, config, rng);
    case EstimatorKind::dlmcis: return eig_dlmcis(problem, xi, config, rng);
  }
  throw ConfigError("estimate_eig: bad estimator kind");
}

}  // namespace oed
