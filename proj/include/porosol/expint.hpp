#ifndef POROSOL_EXPINT_HPP
#define POROSOL_EXPINT_HPP

namespace porosol {

/// Exponential integral E1(x) = int_x^inf exp(-t)/t dt for x > 0.
/// Power series below the crossover, modified-Lentz continued fraction above.
/// Relative accuracy ~1e-14 across the positive axis; throws std::domain_error
/// for x <= 0.
double exp_integral_e1(double x);

/// int E1(alpha u^2) du antiderivative evaluated at u, vanishing at u = 0:
///   F(u) = u E1(alpha u^2) + sqrt(pi/alpha) erf(sqrt(alpha) u).
/// Used for exact integration of the well function along a source segment.
double e1_line_antiderivative(double alpha, double u);

}  // namespace porosol

#endif
