#include "lbfgs.hpp"

#include <algorithm>

#include "mmcrf/errors.hpp"

namespace mmcrf::detail {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

struct HistoryPair {
  std::vector<double> s;  // w_{k+1} - w_k
  std::vector<double> y;  // g_{k+1} - g_k
  double rho;             // 1 / (y . s)
};

// Two-loop recursion: direction = -H * grad.
std::vector<double> lbfgs_direction(const std::deque<HistoryPair>& history,
                                    const std::vector<double>& grad) {
  std::vector<double> q = grad;
  std::vector<double> alpha(history.size());
  for (std::size_t i = history.size(); i-- > 0;) {
    alpha[i] = history[i].rho * dot(history[i].s, q);
    for (std::size_t j = 0; j < q.size(); ++j) {
      q[j] -= alpha[i] * history[i].y[j];
    }
  }
  if (!history.empty()) {
    const HistoryPair& last = history.back();
    const double gamma = (1.0 / last.rho) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double beta = history[i].rho * dot(history[i].y, q);
    for (std::size_t j = 0; j < q.size(); ++j) {
      q[j] += (alpha[i] - beta) * history[i].s[j];
    }
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

LbfgsResult lbfgs_minimize(const LbfgsObjective& objective,
                           std::vector<double>& w, const LbfgsOptions& options,
                           const LbfgsProgress& progress) {
  const std::size_t n = w.size();
  std::vector<double> grad(n, 0.0);
  double value = objective(w, grad);
  if (!std::isfinite(value)) {
    throw NumericalError("objective is not finite at the starting point");
  }

  std::deque<HistoryPair> history;
  LbfgsResult result;
  result.objective = value;

  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    const double gnorm = norm2(grad);
    if (gnorm < options.gradient_tolerance) {
      result.stop_reason = "gradient";
      return result;
    }

    std::vector<double> direction = lbfgs_direction(history, grad);
    double dir_deriv = dot(direction, grad);
    if (!(dir_deriv < 0.0)) {
      // Not a descent direction; restart from steepest descent.
      history.clear();
      for (std::size_t i = 0; i < n; ++i) direction[i] = -grad[i];
      dir_deriv = -gnorm * gnorm;
    }

    // First iteration has no curvature estimate; normalize the step.
    double step = history.empty() ? std::min(1.0, 1.0 / std::max(gnorm, 1e-12))
                                  : 1.0;
    std::vector<double> w_next(n);
    std::vector<double> grad_next(n, 0.0);
    double value_next = 0.0;
    bool accepted = false;
    for (int trial = 0; trial < options.max_backtracks; ++trial) {
      for (std::size_t i = 0; i < n; ++i) w_next[i] = w[i] + step * direction[i];
      value_next = objective(w_next, grad_next);
      if (std::isfinite(value_next) &&
          value_next <= value + options.sufficient_decrease * step * dir_deriv) {
        accepted = true;
        break;
      }
      step *= options.backtrack_factor;
    }
    if (!accepted) {
      result.stop_reason = "line_search";
      return result;
    }

    HistoryPair pair;
    pair.s.resize(n);
    pair.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pair.s[i] = w_next[i] - w[i];
      pair.y[i] = grad_next[i] - grad[i];
    }
    const double sy = dot(pair.s, pair.y);
    // Skip curvature pairs that would break positive definiteness.
    if (sy > 1e-10 * norm2(pair.s) * norm2(pair.y)) {
      pair.rho = 1.0 / sy;
      history.push_back(std::move(pair));
      if (history.size() > options.history) history.pop_front();
    }

    w.swap(w_next);
    grad.swap(grad_next);
    value = value_next;
    result.iterations = iter;
    result.objective = value;
    if (progress) progress(iter, value, norm2(grad));
  }

  result.stop_reason = "max_iterations";
  return result;
}

}  // namespace mmcrf::detail
