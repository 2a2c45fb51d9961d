#pragma once

namespace labelagg {

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
/// Modified Lentz continued fraction, evaluated on the side of
/// x = (a + 1) / (a + b + 2) where it converges fastest.
double regularized_incomplete_beta(double a, double b, double x);

/// Survival function of the F distribution, P(F(d1, d2) > f).
double f_distribution_sf(double f, double d1, double d2);

}  // namespace labelagg
