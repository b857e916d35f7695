#ifndef OED_OPTIMIZERS_HPP
#define OED_OPTIMIZERS_HPP

#include <optional>
#include <vector>

#include "oed/gradients.hpp"

namespace oed {

enum class OptMethod { fgd, sgd, asgd, rasgd };
enum class StepSchedule { constant, inv_sqrt };

OptMethod opt_method_from_name(const std::string& name);
std::string to_string(OptMethod method);

struct OptimizerConfig {
  OptMethod method = OptMethod::rasgd;
  double alpha0 = 1.0;
  double q = 0.0;                         // momentum tuning (asgd); rasgd fixes 0
  StepSchedule schedule = StepSchedule::inv_sqrt;
  int max_iters = 1000;
  std::uint64_t max_ncfm = 0;             // 0 -> unlimited
  std::uint64_t seed = 0;
  Box projection_box;
  std::optional<Vector> target;           // benchmark mode: stop at ||xi - target|| <= tol
  double tol = 1e-2;
  bool force_restart = false;             // test hook: restart every iteration

  void validate() const;

  /// alpha_k = alpha0 / sqrt(k+1) for inv_sqrt (k counted from 0), else alpha0.
  double step_size(int k) const;
};

/// Nesterov momentum bookkeeping.
struct MomentumState {
  double lambda = 1.0;
  Vector z_prev;
  int restart_count = 0;
};

/// Positive root of lambda_next^2 = (1 - lambda_next) lambda^2 + q lambda_next.
double lambda_next(double lambda, double q);

/// gamma_{k+1} = lambda_k (1 - lambda_k) / (lambda_k^2 + lambda_{k+1}).
double gamma_next(double lambda_k, double lambda_k1);

/// Momentum restart test: the fresh stochastic gradient opposes the last
/// displacement (ascent convention). Reuses the iteration's gradient sample.
bool restart_check(const Vector& grad, const Vector& xi_k, const Vector& xi_prev);

struct TraceRow {
  int k = 0;
  Vector xi;
  Vector xi_sliding_avg;
  double alpha = 0.0;
  double gamma = 0.0;
  bool restarted = false;
  double grad_norm = 0.0;
  std::uint64_t cumulative_ncfm = 0;
};

enum class StopReason { target_reached, max_iters, max_ncfm, gradient_failure };

struct OptimizerTrace {
  std::vector<TraceRow> rows;     // row 0 is the initial point
  StopReason stop = StopReason::max_iters;
  int iterations = 0;
  int restarts = 0;
  std::uint64_t total_ncfm = 0;
  std::uint64_t gradient_draws = 0;  // batch draws consumed (cost unit when ncfm = 0)
  std::string failure_message;

  const Vector& terminal_xi() const { return rows.back().xi; }
};

/// Step-size-weighted average of iterates i in [ceil(k/2), k]; iterate i
/// carries the step size that produced it.
Vector sliding_average(const OptimizerTrace& trace, int k);

/// One optimizer update, shared by every method. For sgd/fgd:
///   xi' = P(xi + alpha G).
/// For asgd/rasgd:
///   z'  = P(xi + alpha G),  xi' = P(z' + gamma (z' - z)),
/// with lambda advanced through lambda_next.
Vector step(OptMethod method, MomentumState& state, const Vector& xi_k, const Vector& grad,
            double alpha_k, const Box& box, double q, double* gamma_out = nullptr);

/// Ascent loop. Benchmark mode stops at ||xi - target|| <= tol; otherwise the
/// budget caps (max_iters / max_ncfm) end the run.
OptimizerTrace run_optimizer(const BayesProblem& problem, const GradientConfig& grad_config,
                             const OptimizerConfig& opt_config, const Vector& xi0);

}  // namespace oed

#endif  // OED_OPTIMIZERS_HPP
