#include "oed/optimizers.hpp"

#include <cmath>

namespace oed {

OptMethod opt_method_from_name(const std::string& name) {
  if (name == "fgd") return OptMethod::fgd;
  if (name == "sgd") return OptMethod::sgd;
  if (name == "asgd") return OptMethod::asgd;
  if (name == "rasgd") return OptMethod::rasgd;
  throw ConfigError("unknown optimizer '" + name + "'");
}

std::string to_string(OptMethod method) {
  switch (method) {
    case OptMethod::fgd: return "fgd";
    case OptMethod::sgd: return "sgd";
    case OptMethod::asgd: return "asgd";
    case OptMethod::rasgd: return "rasgd";
  }
  return "?";
}

void OptimizerConfig::validate() const {
  if (!(alpha0 > 0.0)) throw ConfigError("optimizer: alpha0 must be positive");
  if (q < 0.0 || q > 1.0) throw ConfigError("optimizer: q must lie in [0, 1]");
  if (method == OptMethod::rasgd && q != 0.0)
    throw ConfigError("optimizer: rasgd fixes q = 0");
  if (method == OptMethod::fgd && schedule != StepSchedule::constant)
    throw ConfigError("optimizer: fgd uses a constant step size");
  if (max_iters < 1) throw ConfigError("optimizer: max_iters must be >= 1");
  if (projection_box.dim() == 0) throw ConfigError("optimizer: projection box required");
}

double OptimizerConfig::step_size(int k) const {
  return schedule == StepSchedule::constant ? alpha0 : alpha0 / std::sqrt(static_cast<double>(k + 1));
}

double lambda_next(double lambda, double q) {
  double a = lambda * lambda - q;
  return 0.5 * (-a + std::sqrt(a * a + 4.0 * lambda * lambda));
}

double gamma_next(double lambda_k, double lambda_k1) {
  return lambda_k * (1.0 - lambda_k) / (lambda_k * lambda_k + lambda_k1);
}

bool restart_check(const Vector& grad, const Vector& xi_k, const Vector& xi_prev) {
  return grad.dot(xi_k - xi_prev) < 0.0;
}

Vector step(OptMethod method, MomentumState& state, const Vector& xi_k, const Vector& grad,
            double alpha_k, const Box& box, double q, double* gamma_out) {
  if (method == OptMethod::fgd || method == OptMethod::sgd) {
    if (gamma_out) *gamma_out = 0.0;
    return box.project(xi_k + alpha_k * grad);
  }
  double lam1 = lambda_next(state.lambda, q);
  double gamma = gamma_next(state.lambda, lam1);
  if (gamma_out) *gamma_out = gamma;
  Vector z_new = box.project(xi_k + alpha_k * grad);
  Vector xi_new = box.project(z_new + gamma * (z_new - state.z_prev));
  state.z_prev = z_new;
  state.lambda = lam1;
  return xi_new;
}

Vector sliding_average(const OptimizerTrace& trace, int k) {
  if (k < 2 || k >= static_cast<int>(trace.rows.size()))
    throw ConfigError("sliding_average: need 2 <= k < rows");
  int start = (k + 1) / 2;  // ceil(k/2)
  double wsum = 0.0;
  Vector acc = Vector::Zero(trace.rows[0].xi.size());
  for (int i = start; i <= k; ++i) {
    double w = trace.rows[i].alpha;
    acc += w * trace.rows[i].xi;
    wsum += w;
  }
  return acc / wsum;
}

OptimizerTrace run_optimizer(const BayesProblem& problem, const GradientConfig& grad_config,
                             const OptimizerConfig& opt_config, const Vector& xi0) {
  opt_config.validate();
  grad_config.validate();
  const Box& box = opt_config.projection_box;
  if (!box.contains(xi0)) throw ConfigError("run_optimizer: xi0 outside the projection box");

  OptimizerTrace trace;
  RngStream root(opt_config.seed);

  Vector xi = xi0;
  Vector xi_prev = xi0;
  MomentumState state;
  state.z_prev = xi0;

  TraceRow row0;
  row0.k = 0;
  row0.xi = xi0;
  row0.xi_sliding_avg = xi0;
  trace.rows.push_back(row0);

  for (int k = 0; k < opt_config.max_iters; ++k) {
    RngStream iter_rng = root.child(rng_tag::optimizer_iter).child(static_cast<std::uint64_t>(k));
    GradientEstimate ge;
    try {
      ge = estimate_gradient(problem, xi, grad_config, iter_rng);
    } catch (const Error& e) {
      trace.stop = StopReason::gradient_failure;
      trace.failure_message = e.what();
      break;
    }
    trace.total_ncfm += ge.ncfm;
    trace.gradient_draws += grad_config.batch;
    if (!ge.grad.allFinite()) {
      trace.stop = StopReason::gradient_failure;
      trace.failure_message = "non-finite gradient estimate";
      break;
    }

    bool restarted = false;
    if (opt_config.method == OptMethod::rasgd &&
        (opt_config.force_restart || (k >= 1 && restart_check(ge.grad, xi, xi_prev)))) {
      state.lambda = 1.0;
      state.z_prev = xi;
      ++state.restart_count;
      restarted = true;
    }

    double alpha = opt_config.step_size(k);
    double gamma = 0.0;
    Vector xi_next =
        step(opt_config.method, state, xi, ge.grad, alpha, box, opt_config.q, &gamma);
    xi_prev = xi;
    xi = xi_next;

    TraceRow row;
    row.k = k + 1;
    row.xi = xi;
    row.alpha = alpha;
    row.gamma = gamma;
    row.restarted = restarted;
    row.grad_norm = ge.grad.norm();
    row.cumulative_ncfm = trace.total_ncfm;
    trace.rows.push_back(row);
    int kk = static_cast<int>(trace.rows.size()) - 1;
    trace.rows.back().xi_sliding_avg = kk >= 2 ? sliding_average(trace, kk) : xi;

    trace.iterations = k + 1;
    if (opt_config.target &&
        (xi - *opt_config.target).norm() <= opt_config.tol) {
      trace.stop = StopReason::target_reached;
      break;
    }
    if (opt_config.max_ncfm > 0 && trace.total_ncfm >= opt_config.max_ncfm) {
      trace.stop = StopReason::max_ncfm;
      break;
    }
  }

  trace.restarts = state.restart_count;
  return trace;
}

}  // namespace oed
