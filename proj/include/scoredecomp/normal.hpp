#pragma once

// Standard normal CDF and quantile function.

namespace scoredecomp {

/// Phi(z), accurate to machine precision via erfc.
double normal_cdf(double z);

/// Phi^{-1}(p) for p in (0, 1); rational approximation refined by one
/// Halley step, absolute error well below 1e-9.
double normal_quantile(double p);

}  // namespace scoredecomp
