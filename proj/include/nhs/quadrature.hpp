#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace nhs {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;  // estimated
  int evaluations = 0;
  bool converged = true;
};

/// Thrown by callers that require convergence; carries the achieved error.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double value, double abs_error)
      : std::runtime_error(what), value_(value), abs_error_(abs_error) {}
  double value() const { return value_; }
  double abs_error() const { return abs_error_; }

 private:
  double value_;
  double abs_error_;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. The integrand
/// is never evaluated at the endpoints, so integrable endpoint singularities
/// are tolerated.
QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts = {});

/// Integral over [a, inf) for integrands that eventually decay. `scale` is the
/// length of the first panel; panels double in length until the contribution
/// of a panel is negligible against the tolerance.
QuadResult integrate_to_infinity(const Integrand& f, double a, double scale,
                                 const QuadOptions& opts = {});

/// Throws QuadratureError when `r` did not converge.
const QuadResult& require_converged(const QuadResult& r, const char* context);

}  // namespace nhs
