#pragma once

#include <functional>

namespace matchmarket {

/// Adaptive Simpson on [a, b] with absolute tolerance. Handles integrable
/// endpoint behavior by depth-limited bisection.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, int max_depth = 48);

}  // namespace matchmarket
