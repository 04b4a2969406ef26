#pragma once

// Modified Bessel functions of the second kind (orders 0 and 1) and the two
// real branches of the Lambert W function.

namespace nhs {

enum class BranchW { Principal, MinusOne };

/// K0(x) for x > 0. Throws std::domain_error for x <= 0 or non-finite x.
double bessel_k0(double x);

/// K1(x) for x > 0. Same domain as bessel_k0.
double bessel_k1(double x);

/// Computes K0 and K1 together; cheaper than two separate calls.
struct BesselK01 {
  double k0;
  double k1;
};
BesselK01 bessel_k01(double x);

/// Real Lambert W. Principal is defined on [-1/e, inf) and returns w >= -1;
/// MinusOne is defined on [-1/e, 0) and returns w <= -1.
double lambert_w(BranchW branch, double x);

}  // namespace nhs
