#include "porosol/kernels.hpp"

#include <array>
#include <cmath>

#include "porosol/expint.hpp"

namespace porosol {

namespace {

struct LocalStress {
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
};

// Plane-strain edge dislocation at the origin, Burgers vector (bx, by),
// evaluated at (x, y); k0 = G / (2 pi (1-nu)) folded in by the caller.
LocalStress edge_dislocation(double bx, double by, double x, double y) {
    const double r2 = x * x + y * y;
    const double r4 = r2 * r2;
    const double d = x * x - y * y;
    LocalStress s;
    s.sxx = (-bx * y * (3.0 * x * x + y * y) + by * x * d) / r4;
    s.syy = (bx * y * d + by * x * (x * x + 3.0 * y * y)) / r4;
    s.sxy = (bx * x * d + by * y * d) / r4;
    return s;
}

StressTriple to_global(const LocalStress& l, const Element& e) {
    StressTriple g;
    const double sx = e.s_x, sy = e.s_y, nx = e.n_x, ny = e.n_y;
    g.sxx = sx * sx * l.sxx + 2.0 * sx * nx * l.sxy + nx * nx * l.syy;
    g.syy = sy * sy * l.sxx + 2.0 * sy * ny * l.sxy + ny * ny * l.syy;
    g.sxy = sx * sy * l.sxx + (sx * ny + sy * nx) * l.sxy + nx * ny * l.syy;
    return g;
}

}  // namespace

ElasticInfluence elastic_dd_kernel(const Element& source, double obs_x, double obs_y,
                                   const PoroelasticMaterial& m) {
    const double rx = obs_x - source.mid_x_m;
    const double ry = obs_y - source.mid_y_m;
    const double xi = rx * source.s_x + ry * source.s_y;
    const double eta = rx * source.n_x + ry * source.n_y;
    const double h = source.half_size_m;

    const double tip_tol = 1e-9 * h;
    const double d_minus = std::hypot(xi + h, eta);
    const double d_plus = std::hypot(xi - h, eta);
    if (d_minus < tip_tol || d_plus < tip_tol) {
        throw SingularPointError("elastic_dd_kernel: observation point at an element tip");
    }

    const double k0 = m.shear_modulus_pa / (2.0 * M_PI * (1.0 - m.drained_poisson));

    // A constant discontinuity over [-h, h] is exactly a dislocation dipole:
    // Burgers +D at the -h tip, -D at the +h tip.
    ElasticInfluence out;
    {
        LocalStress a = edge_dislocation(1.0, 0.0, xi + h, eta);
        LocalStress b = edge_dislocation(-1.0, 0.0, xi - h, eta);
        LocalStress l{k0 * (a.sxx + b.sxx), k0 * (a.syy + b.syy), k0 * (a.sxy + b.sxy)};
        out.per_unit_ds = to_global(l, source);
    }
    {
        LocalStress a = edge_dislocation(0.0, 1.0, xi + h, eta);
        LocalStress b = edge_dislocation(0.0, -1.0, xi - h, eta);
        LocalStress l{k0 * (a.sxx + b.sxx), k0 * (a.syy + b.syy), k0 * (a.sxy + b.sxy)};
        out.per_unit_dn = to_global(l, source);
    }
    return out;
}

double poroelastic_stress_coefficient(const PoroelasticMaterial& m) {
    const double alpha = biot_alpha(m);
    return alpha * (1.0 - 2.0 * m.drained_poisson) / (2.0 * (1.0 - m.drained_poisson));
}

namespace {

// Point-source factor pair at xi2 = r^2/(4 c tau):
//   pressure ~ E1(xi2)
//   sigma_rr ~ -(E1(xi2) + (1-exp(-xi2))/xi2)
//   sigma_tt ~ -(E1(xi2) - (1-exp(-xi2))/xi2)
struct PointFactors {
    double e1 = 0.0;
    double g = 0.0;  // (1-exp(-xi2))/xi2
};

PointFactors point_factors(double xi2) {
    PointFactors f;
    if (xi2 > 700.0) {
        f.e1 = 0.0;
        f.g = 1.0 / xi2;
        return f;
    }
    if (xi2 < 1e-12) {
        // E1 still diverges; caller keeps xi2 away from 0 except via closed forms.
        f.e1 = exp_integral_e1(std::max(xi2, 1e-300));
        f.g = 1.0 - 0.5 * xi2;
        return f;
    }
    f.e1 = exp_integral_e1(xi2);
    f.g = -std::expm1(-xi2) / xi2;
    return f;
}

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kGaussX = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussW = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// Panel breakpoints on [a, b], geometrically graded toward `focus` when the
// integrand varies on the scale `width` (near-singular source integrals).
// A focus beyond the interval still grades toward the nearest endpoint,
// which covers observers just past an element tip.
void graded_breakpoints(double a, double b, double focus, double width,
                        std::vector<double>& out) {
    out.clear();
    out.push_back(a);
    if (width < b - a) {
        const double f = std::clamp(focus, a, b);
        const double d = std::max(width, 1e-7 * (b - a));
        std::vector<double> left, right;
        for (double off = d; f - off > a; off *= 2.0) left.push_back(f - off);
        for (double off = d; f + off < b; off *= 2.0) right.push_back(f + off);
        for (auto it = left.rbegin(); it != left.rend(); ++it) out.push_back(*it);
        if (f > a && f < b) out.push_back(f);
        for (double v : right) out.push_back(v);
    }
    out.push_back(b);
}

}  // namespace

FluidInfluence fluid_source_kernel(const Element& source, double obs_x, double obs_y,
                                   const PoroelasticMaterial& m, double elapsed_s) {
    if (!(elapsed_s > 0.0)) {
        throw std::domain_error("fluid_source_kernel: elapsed must be positive");
    }
    const double c = diffusivity(m);
    const double inv_alpha_diff = 1.0 / (4.0 * c * elapsed_s);  // xi2 = alpha * r^2
    const double amp = 1.0 / (4.0 * M_PI * m.mobility);
    const double eta_c = poroelastic_stress_coefficient(m);

    const double rx = obs_x - source.mid_x_m;
    const double ry = obs_y - source.mid_y_m;
    const double xi = rx * source.s_x + ry * source.s_y;
    const double nrm = rx * source.n_x + ry * source.n_y;
    const double h = source.half_size_m;

    FluidInfluence out;

    if (std::fabs(nrm) < 1e-9 * h) {
        // Observer on the source line: exact antiderivatives. In the element
        // frame the radial direction is the line itself, so sigma_ll = sigma_rr
        // and sigma_nn = sigma_tt with no shear.
        const double a = inv_alpha_diff;
        const double u1 = -h - xi;
        const double u2 = h - xi;
        const double int_e1 = e1_line_antiderivative(a, u2) - e1_line_antiderivative(a, u1);
        // int (1-exp(-a u^2))/(a u^2) du = [sqrt(pi/a) erf(sqrt(a) u) - (1-exp(-a u^2))/(a u)]
        auto g_anti = [a](double u) {
            if (u == 0.0) return 0.0;
            const double au2 = a * u * u;
            const double frac = au2 > 700.0 ? 1.0 / (a * u) : -std::expm1(-au2) / (a * u);
            return std::sqrt(M_PI / a) * std::erf(std::sqrt(a) * u) - frac;
        };
        const double int_g = g_anti(u2) - g_anti(u1);
        out.pressure = amp * int_e1;
        const double s_ll = -eta_c * amp * (int_e1 + int_g);
        const double s_nn = -eta_c * amp * (int_e1 - int_g);
        out.stress = to_global(LocalStress{s_ll, s_nn, 0.0}, source);
        return out;
    }

    // Off-line observer: composite Gauss-Legendre, graded toward the
    // projection of the observer when it falls inside the element.
    static thread_local std::vector<double> bps;
    graded_breakpoints(-h, h, xi, std::fabs(nrm), bps);

    double p_sum = 0.0;
    LocalStress st;  // accumulated in the element frame
    for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
        const double mid = 0.5 * (bps[k] + bps[k + 1]);
        const double half = 0.5 * (bps[k + 1] - bps[k]);
        if (half <= 0.0) continue;
        for (int q = 0; q < 8; ++q) {
            const double s = mid + half * kGaussX[q];
            const double w = half * kGaussW[q];
            const double dx = xi - s;
            const double r2 = dx * dx + nrm * nrm;
            const double xi2 = r2 * inv_alpha_diff;
            const PointFactors f = point_factors(xi2);
            p_sum += w * f.e1;
            const double srr = -(f.e1 + f.g);
            const double stt = -(f.e1 - f.g);
            const double ux2 = dx * dx / r2;
            const double uy2 = nrm * nrm / r2;
            const double uxy = dx * nrm / r2;
            st.sxx += w * (srr * ux2 + stt * uy2);
            st.syy += w * (srr * uy2 + stt * ux2);
            st.sxy += w * (srr - stt) * uxy;
        }
    }
    out.pressure = amp * p_sum;
    st.sxx *= eta_c * amp;
    st.syy *= eta_c * amp;
    st.sxy *= eta_c * amp;
    out.stress = to_global(st, source);
    return out;
}

void resolve_tractions(const StressTriple& sigma, const Element& e, double& sigma_s,
                       double& sigma_n) {
    const double tx = sigma.sxx * e.n_x + sigma.sxy * e.n_y;
    const double ty = sigma.sxy * e.n_x + sigma.syy * e.n_y;
    sigma_s = tx * e.s_x + ty * e.s_y;
    sigma_n = tx * e.n_x + ty * e.n_y;
}

}  // namespace porosol
