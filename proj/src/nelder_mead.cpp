#include "oed/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace oed {

NelderMeadResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                             const Vector& offsets, const NelderMeadConfig& config) {
  const Eigen::Index d = x0.size();
  if (offsets.size() != d) throw ConfigError("nelder_mead: offsets size mismatch");
  const int max_iters = config.max_iters > 0 ? config.max_iters : 200 * static_cast<int>(d);

  NelderMeadResult res;
  std::vector<Vector> xs(d + 1, x0);
  std::vector<double> fs(d + 1);
  for (Eigen::Index j = 0; j < d; ++j) xs[j + 1][j] += offsets[j];
  for (Eigen::Index v = 0; v <= d; ++v) {
    fs[v] = f(xs[v]);
    ++res.evals;
  }
  for (double fv : fs)
    if (!std::isfinite(fv)) throw EvalError("nelder_mead: objective not finite at initial simplex");

  std::vector<int> order(d + 1);
  std::iota(order.begin(), order.end(), 0);

  for (res.iters = 0; res.iters < max_iters; ++res.iters) {
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    int best = order.front(), worst = order.back(), second_worst = order[d - 1];

    if (std::abs(fs[worst] - fs[best]) < config.tol * (1.0 + std::abs(fs[best]))) {
      res.converged = true;
      break;
    }

    Vector centroid = Vector::Zero(d);
    for (Eigen::Index v = 0; v < d; ++v) centroid += xs[order[v]];
    centroid /= static_cast<double>(d);

    Vector xr = centroid + config.reflection * (centroid - xs[worst]);
    double fr = f(xr);
    ++res.evals;

    if (fr < fs[best]) {
      Vector xe = centroid + config.expansion * (xr - centroid);
      double fe = f(xe);
      ++res.evals;
      if (fe < fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
    } else if (fr < fs[second_worst]) {
      xs[worst] = xr;
      fs[worst] = fr;
    } else {
      bool outside = fr < fs[worst];
      Vector xc = centroid + config.contraction * ((outside ? xr : xs[worst]) - centroid);
      double fc = f(xc);
      ++res.evals;
      if (fc < (outside ? fr : fs[worst])) {
        xs[worst] = xc;
        fs[worst] = fc;
      } else {
        for (Eigen::Index v = 1; v <= d; ++v) {
          int i = order[v];
          xs[i] = xs[best] + config.shrink * (xs[i] - xs[best]);
          fs[i] = f(xs[i]);
          ++res.evals;
        }
      }
    }
  }

  int best = *std::min_element(order.begin(), order.end(),
                               [&](int a, int b) { return fs[a] < fs[b]; });
  res.x = xs[best];
  res.fval = fs[best];
  return res;
}

}  // namespace oed
