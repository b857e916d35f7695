#ifndef OED_ESTIMATORS_HPP
#define OED_ESTIMATORS_HPP

#include "oed/laplace.hpp"

namespace oed {

enum class EstimatorKind { dlmc, mcla, dlmcis };

EstimatorKind estimator_kind_from_name(const std::string& name);
std::string to_string(EstimatorKind kind);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::mcla;
  int n_outer = 1000;          // N
  int m_inner = 100;           // M; ignored by mcla
  FDScheme fd_scheme = FDScheme::forward();
  NelderMeadConfig nm;         // MAP solver settings (dlmcis)
  int workers = 1;

  void validate() const {
    if (n_outer < 1 || m_inner < 1) throw ConfigError("estimator: sample sizes must be >= 1");
    fd_scheme.validate();
  }
};

/// Expected-information-gain estimate in nats, its Monte Carlo standard error
/// (sd of outer summands / sqrt(N)), and the forward-model call count.
struct EIGEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t ncfm = 0;
  int map_fallbacks = 0;       // dlmcis outer samples that fell back to the prior proposal
  int redraws = 0;             // mcla singular-fit redraws
};

/// Nested Monte Carlo: outer loop over joint (theta_n, Y_n), inner loop
/// marginalizing the evidence over fresh prior samples, log-sum-exp
/// throughout. Cost N(1+M).
EIGEstimate eig_dlmc(const BayesProblem& problem, const Vector& xi, const EstimatorConfig& config,
                     const RngStream& rng);

/// Laplace-approximation estimator: single loop over theta_n with the
/// Gauss-Newton posterior covariance fitted at each sample. Cost N(d+1).
EIGEstimate eig_mcla(const BayesProblem& problem, const Vector& xi, const EstimatorConfig& config,
                     const RngStream& rng);

/// DLMC with the Laplace posterior as the inner importance-sampling proposal;
/// each outer sample pays one MAP search plus one covariance fit.
/// Cost N(1 + C_MAP + d + 1 + M).
EIGEstimate eig_dlmcis(const BayesProblem& problem, const Vector& xi,
                       const EstimatorConfig& config, const RngStream& rng);

EIGEstimate estimate_eig(const BayesProblem& problem, const Vector& xi,
                         const EstimatorConfig& config, const RngStream& rng);

/// log( (1/M) sum exp(ll_m) ), stable; order-invariant up to roundoff.
double log_mean_exp(const Vector& ll);

}  // namespace oed

#endif  // OED_ESTIMATORS_HPP
