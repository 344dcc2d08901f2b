#include "porosol/expint.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace porosol {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!), converges fast for x <= 1.
double e1_series(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k <= 60; ++k) {
        term *= -x / k;
        const double add = -term / k;
        sum += add;
        if (std::fabs(add) < 1e-18 * std::fabs(sum) + 1e-300) break;
    }
    return -kEulerGamma - std::log(x) + sum;
}

// Continued fraction E1(x) = e^-x / (x + 1/(1 + 1/(x + 2/(1 + 2/(x + ...))))),
// evaluated with the modified Lentz algorithm.
double e1_continued_fraction(double x) {
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 200; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = a * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x);
}

}  // namespace

double exp_integral_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("exp_integral_e1: requires x > 0");
    if (x > 700.0) return 0.0;  // below double underflow of exp(-x)/x
    return x <= 1.0 ? e1_series(x) : e1_continued_fraction(x);
}

double e1_line_antiderivative(double alpha, double u) {
    if (!(alpha > 0.0)) throw std::domain_error("e1_line_antiderivative: requires alpha > 0");
    if (u == 0.0) return 0.0;
    const double su = std::sqrt(alpha) * u;
    const double erf_part = std::sqrt(M_PI / alpha) * std::erf(su);
    const double arg = alpha * u * u;
    // u E1(alpha u^2) -> 0 as u -> 0 (x ln x limit); guard the underflow range.
    if (arg > 700.0) return erf_part;
    return u * exp_integral_e1(arg) + erf_part;
}

}  // namespace porosol
