#ifndef OED_GRADIENTS_HPP
#define OED_GRADIENTS_HPP

#include <optional>
#include <vector>

#include "oed/estimators.hpp"

namespace oed {

enum class GradientKind { sg_mc, sg_la, sg_mcis, analytic };

GradientKind gradient_kind_from_name(const std::string& name);
std::string to_string(GradientKind kind);

struct GradientConfig {
  GradientKind kind = GradientKind::sg_la;
  int batch = 1;               // B; the paper's estimators are the B = 1 case
  int m_inner = 100;           // M (sg_mc / sg_mcis)
  FDScheme fd_scheme = FDScheme::forward();
  NelderMeadConfig nm;         // MAP solver settings (sg_mcis)
  int workers = 1;
  bool collect_per_sample = false;

  void validate() const {
    if (batch < 1 || m_inner < 1) throw ConfigError("gradient: sizes must be >= 1");
    fd_scheme.validate();
  }
};

/// Ascent direction for the expected information gain, its model-call cost,
/// and optionally the individual batch-member gradients.
struct GradientEstimate {
  Vector grad;
  std::uint64_t ncfm = 0;
  int map_fallbacks = 0;
  std::optional<std::vector<Vector>> per_sample;
};

/// Pathwise single-sample gradient of the nested MC estimator (batch-averaged):
/// (theta, eps, inner prior samples) are frozen across the xi stencil and the
/// data co-vary as Y(xi') = g(xi', theta) + eps, so the numerator likelihood
/// is a design-independent constant and only the evidence term differentiates.
GradientEstimate sg_mc(const BayesProblem& problem, const Vector& xi,
                       const GradientConfig& config, const RngStream& rng);

/// Closed-form gradient of the Laplace-approximation integrand:
///   G_s = n_exp * Sigma : Sym(d_s(dg/dtheta)' Sigma_eps^-1 dg/dtheta),
/// with Sigma the Gauss-Newton posterior covariance at the prior draw.
GradientEstimate sg_la(const BayesProblem& problem, const Vector& xi,
                       const GradientConfig& config, const RngStream& rng);

/// As sg_mc but the inner samples come from the Laplace proposal fitted once
/// at the base design; the proposal (and its density) stays frozen across the
/// stencil so the importance-sampled evidence is differentiated pathwise.
GradientEstimate sg_mcis(const BayesProblem& problem, const Vector& xi,
                         const GradientConfig& config, const RngStream& rng);

/// Model-supplied closed-form gradient at prior draws (the stochastic
/// quadratic benchmark); zero forward-model calls.
GradientEstimate sg_analytic(const BayesProblem& problem, const Vector& xi,
                             const GradientConfig& config, const RngStream& rng);

GradientEstimate estimate_gradient(const BayesProblem& problem, const Vector& xi,
                                   const GradientConfig& config, const RngStream& rng);

/// Batch-averaged gradient with B = N: the full-gradient input for FGD.
GradientEstimate full_gradient(const BayesProblem& problem, const Vector& xi, GradientKind kind,
                               int n, int m, const RngStream& rng, int workers = 1);

/// -1/2 Sigma^-1 : dSigma/dxi_s per design coordinate (the trace form of the
/// log-determinant gradient).
Vector logdet_gradient_trace_form(const Matrix& sigma, const std::vector<Matrix>& dsigma);

/// Same quantity through the eigenvalues: -sum_k sigma_k^-1 d(sigma_k)/dxi_s,
/// with first-order eigenvalue perturbations v_k' dSigma v_k.
Vector logdet_gradient_eigen_form(const Matrix& sigma, const std::vector<Matrix>& dsigma);

}  // namespace oed

#endif  // OED_GRADIENTS_HPP
