#ifndef OED_NELDER_MEAD_HPP
#define OED_NELDER_MEAD_HPP

#include <functional>

#include "oed/types.hpp"

namespace oed {

struct NelderMeadConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double tol = 1e-10;      // stop when f-spread < tol * (1 + |f_best|)
  int max_iters = 0;       // 0 -> 200 * d
};

struct NelderMeadResult {
  Vector x;
  double fval = 0.0;
  int evals = 0;           // objective evaluations consumed
  int iters = 0;
  bool converged = false;
};

/// Downhill simplex minimization. The initial simplex is x0 plus one vertex
/// per coordinate offset by `offsets`.
NelderMeadResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                             const Vector& offsets, const NelderMeadConfig& config = {});

}  // namespace oed

#endif  // OED_NELDER_MEAD_HPP
