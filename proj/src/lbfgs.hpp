#ifndef MMCRF_SRC_LBFGS_HPP
#define MMCRF_SRC_LBFGS_HPP

#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <vector>

namespace mmcrf::detail {

struct LbfgsOptions {
  std::size_t max_iterations = 200;
  double gradient_tolerance = 1e-4;
  std::size_t history = 10;
  // Armijo backtracking line search.
  double sufficient_decrease = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 60;
};

struct LbfgsResult {
  std::size_t iterations = 0;
  double objective = 0.0;
  std::string stop_reason;  // "gradient" | "max_iterations" | "line_search"
};

// Objective: fills `grad` and returns the function value at `w`.
using LbfgsObjective =
    std::function<double(const std::vector<double>& w, std::vector<double>& grad)>;

using LbfgsProgress =
    std::function<void(std::size_t iteration, double objective, double grad_norm)>;

// Limited-memory BFGS with Armijo backtracking. Accepted iterates have
// strictly non-increasing objective values, and the whole run is
// deterministic for fixed inputs.
LbfgsResult lbfgs_minimize(const LbfgsObjective& objective,
                           std::vector<double>& w, const LbfgsOptions& options,
                           const LbfgsProgress& progress = {});

}  // namespace mmcrf::detail

#endif  // MMCRF_SRC_LBFGS_HPP
