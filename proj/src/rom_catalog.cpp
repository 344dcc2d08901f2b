#include "porosol/rom.hpp"

namespace porosol {

namespace {

constexpr double kOneYearS = 365.0 * 24.0 * 3600.0;

// Variable slots: 1 a, 2 b, 3 p_f, 4 G, 5 nu_u, 6 nu, 7 B, 8 log10(kappa).
// Coefficients are the tabulated magnitudes with the equation signs folded
// in. Bivariate polynomials list monomials by total degree, first-variable
// power descending within a degree.

BasisForm form(std::string label, FormKind kind, int v1, int v2, std::vector<double> coeffs,
               std::string provenance = {}) {
    BasisForm b;
    b.label = std::move(label);
    b.kind = kind;
    b.vars = {v1, v2};
    b.coeffs = std::move(coeffs);
    b.provenance = std::move(provenance);
    b.require_well_formed();
    return b;
}

RomSpec rom(std::string name, Quantity q, std::string point, double f0,
            std::vector<BasisForm> components, double accuracy) {
    RomSpec r;
    r.name = std::move(name);
    r.quantity = q;
    r.point_id = std::move(point);
    r.horizon_s = kOneYearS;
    r.f0_pa = f0;
    r.components = std::move(components);
    r.declared_accuracy = accuracy;
    r.require_well_formed();
    return r;
}

std::vector<RomSpec> build_catalog() {
    std::vector<RomSpec> cat;

    // ---- Point 1 ----
    cat.push_back(rom(
        "pore_pressure_P1_1year", Quantity::pore_pressure, "P1", 4.01e7,
        {
            form("f3", FormKind::linear_1d, 3, 0, {0.2348, 2.93e6},
                 "constant term sign follows the equation (+A1); the centered reading "
                 "uses -2.93e6"),
            form("f8", FormKind::sine_sum_2, 8, 0, {8.9e6, 0.43, 2.165, 7.8e5, 1.7, -0.14}),
            form("f38", FormKind::bivariate_poly_3, 3, 8,
                 {-1.161e6, -4.734e5, -6718.0, -1.856e5, 1.995e6, 1.667e5, 1408.0, -1664.0,
                  -5.835e5, -4.631e4}),
        },
        0.90));

    cat.push_back(rom(
        "sigma_min_P1_1year", Quantity::sigma_min, "P1", 5.13e7,
        {
            form("f3", FormKind::linear_1d, 3, 0, {0.1284, 2.248e6},
                 "equation writes p_p; read as the production pressure p_f"),
            form("f5", FormKind::linear_1d, 5, 0, {1.117e7, 5.529e6},
                 "equation sign kept although the narrative describes an inverse trend"),
            form("f6", FormKind::linear_1d, 6, 0, {8.878e6, -2.898e5}),
            form("f7", FormKind::cubic_1d, 7, 0, {1.508e7, -3.305e7, 2.656, -5.05e6},
                 "A2 tabulated without an exponent (2.656)"),
            form("f8", FormKind::sine_sum_3, 8, 0,
                 {1.236e6, 0.9195, 2.074, 6.497e6, 0.1707, -1.042, 1.97e5, 2.26, 7.68}),
            form("f38", FormKind::bivariate_poly_3, 3, 8,
                 {-4.47e5, 1.404e5, -1.442e5, -1.806e5, -9.587e5, 2.08e5, -6396.0, 5117.0,
                  -2.532e5, 1.505e4}),
        },
        0.90));

    cat.push_back(rom(
        "sigma_max_P1_1year", Quantity::sigma_max, "P1", 5.55e7,
        {
            form("f3", FormKind::linear_1d, 3, 0, {1.0, -1.604e6}),
            form("f5", FormKind::linear_1d, 5, 0, {-8.78e6, 4.468e6}),
            form("f6", FormKind::quadratic_1d, 6, 0, {2.933e7, -4.687e6, 9.515e5}),
            form("f7", FormKind::cubic_1d, 7, 0, {1.392e7, -2.93e7, 2.233e7, -4.276e6}),
            form("f8", FormKind::sine_sum_3, 8, 0,
                 {1.433e6, 0.8957, 1.726, 5.315e6, 0.1887, -0.804, 2.289e5, 2.185, 6.766}),
            form("f38", FormKind::bivariate_poly_3, 3, 8,
                 {-3.951e7, 2.278, -4.13e6, 0.0, 0.2681, -7.187e4, 0.0, 0.0, 0.0, 1797.0},
                 "sparse cubic: the equation carries only the 1, p_f, k, p_f*k, k^2, k^3 "
                 "terms"),
        },
        0.90));

    // ---- Point 5 ----
    cat.push_back(rom(
        "pore_pressure_P5_1year", Quantity::pore_pressure, "P5", 3.23e7,
        {
            form("f1", FormKind::quadratic_1d, 1, 0, {-3439.0, -5929.0, 9.585e6}),
            form("f3", FormKind::linear_1d, 3, 0, {0.5258, -9.196e6}),
            form("f8", FormKind::sine_sum_3, 8, 0,
                 {2.939e7, 0.107, -1.871, 2.294e6, 1.085, -0.06293, 4.435e5, 2.071, 2.674}),
            form("f38", FormKind::bivariate_poly_3, 3, 8,
                 {-3.526e6, 1.341e6, -5.341e5, -2.164e5, 2.553e6, 5.576e5, 3049.0, -1.674e4,
                  -7.557e5, 1.106e5}),
        },
        0.90));

    cat.push_back(rom(
        "sigma_min_P5_1year", Quantity::sigma_min, "P5", 4.75e7,
        {
            form("f1", FormKind::fourier_4, 1, 0,
                 {0.1193, 1.95e6, -8.279e5, 4.604e6, 9.287e5, 2.434e6, 8.653e5, 1.009e6,
                  3.608e5, 2.868e5}),
            form("f3", FormKind::linear_1d, 3, 0, {0.2848, -5.914e6}),
            form("f5", FormKind::linear_1d, 5, 0, {-2.227e7, 1.066e7}),
            form("f6", FormKind::linear_1d, 6, 0, {1.8e7, -1.146e6}),
            form("f7", FormKind::quadratic_1d, 7, 0, {-1.58e7, 2.802e7, -8.152e6}),
            form("f8", FormKind::sine_sum_2, 8, 0,
                 {1.38e6, 1.191, 1.187, 7.738e6, 0.298, 0.6055}),
            form("f38", FormKind::bivariate_poly_3, 3, 8,
                 {-9.637e5, 9.514e4, -4.621e5, -2.127e5, 1.347e6, 3.006e5, 1.411e4, 4099.0,
                  -1.667e5, 2.057e5}),
            form("f13", FormKind::bivariate_poly_4, 1, 3,
                 {-1.123e6, -4.399e5, 1.114e6, 5.819e5, 1.24e6, -9.329e5, 9.442e4, -8.217e5,
                  -1.604e4, -1.432e5, -9.507e4, 6.673e5, 8912.0, -152.3, 2.301e5},
                 "typos resolved: '+ -A5' as minus, 'A-7' as -A7, missing operator before "
                 "A11 as plus per the f18 pattern, 'A_14' as +A14"),
            form("f16", FormKind::bivariate_poly_3, 1, 6,
                 {1.06e7, -1.284e6, 9.594e7, 1.082e4, 7.181e6, -1.228e9, 99.63, -9.425e4,
                  -3.635e5, 2.268e9}),
            form("f17", FormKind::bivariate_poly_4, 1, 7,
                 {-1.154e6, -7.664e5, 1.28e6, 3.21e5, 1.673e6, 1.64e5, 2.329e5, -9.159e5,
                  -7.561e4, -1.482e5, -1.409e5, -8.554e5, 4.41e5, -4.697e4, -1.566e5}),
            form("f18", FormKind::bivariate_poly_4, 1, 8,
                 {-3.744e6, -1.954e6, -2.229e6, 1.827e6, 1.111e5, 1.796e6, 4.715e5, 1.76e6,
                  7.387e5, 1.013e5, -2.414e5, 9.83e5, -7.301e5, -8.411e5, -3.61e5}),
        },
        0.90));

    cat.push_back(rom(
        "sigma_max_P5_1year", Quantity::sigma_max, "P5", 5.05e7,
        {
            form("f3", FormKind::linear_1d, 3, 0, {0.339, -8.31e6}),
            form("f5", FormKind::linear_1d, 5, 0, {-3.209e7, 1.293e7}),
            form("f6", FormKind::linear_1d, 6, 0, {2.718e7, -4.38e6}),
            form("f7", FormKind::cubic_1d, 7, 0, {2.28e7, -6.0e7, 5.831e7, -1.648e7}),
            form("f8", FormKind::fourier_2, 8, 0,
                 {0.6016, 1.648e6, -3.453e6, 2.723e6, 1.789e4, -1.512e6}),
            form("f18", FormKind::bivariate_poly_4, 1, 8,
                 {-1.434e6, -1.274e6, 2.579e5, 7.189e5, 2.978e6, 1.117e6, 3.386e4, 6.242e4,
                  7.895e5, -4.039e4, -2.015e5, -4.165e5, 1.227e5, -1.066e6, -3.404e5},
                 "'A{12}' read as +A12"),
        },
        0.90));

    // ---- Point 6 ----
    cat.push_back(rom(
        "pore_pressure_P6_1year", Quantity::pore_pressure, "P6", 2.65e7,
        {
            form("f3", FormKind::linear_1d, 3, 0, {0.824, -1.789e7},
                 "equation labeled f_1 but consumes p_f; named by its variable"),
            form("f8", FormKind::sine_sum_2, 8, 0,
                 {1.44e8, 0.4676, 2.499, 1.352e8, 0.5053, -6.469}),
            form("f38", FormKind::bivariate_poly_3, 3, 8,
                 {-3.644e6, 2.137e6, -1.057e6, -1.295e5, 2.476e6, 7.658e5, 6.063e4, -1060.0,
                  -1.79e6, 3.814e5},
                 "equation body wrote a for the first variable; read as p_f per the f_38 "
                 "label and the dominant-index list"),
            form("f48", FormKind::bivariate_poly_5, 4, 8,
                 {-3.201e6, 8.985e5, 6.924e5, -1.588e6, 2.344e6, 3.294e6, -9.518e5, -1.285e6,
                  -4.197e6, -3.788e4, 8.773e5, 2.672e4, -1.711e5, -1.057e6, -9.727e5, 3.976e5,
                  -2.538e4, 1.006e5, 7.33e5, 1.885e6, -2.617e5}),
        },
        0.90));

    cat.push_back(rom(
        "sigma_min_P6_1year", Quantity::sigma_min, "P6", 5.53e7,
        {
            form("f1", FormKind::octic_1d, 1, 0,
                 {-5806.0, 4.612e4, -1.266e5, 1.355e5, 4994.0, -1.696e5, -2.416e5, -1.984e5,
                  -3.771e4}),
            form("f12", FormKind::bivariate_poly_3, 1, 2,
                 {-3.886e4, 3.676e4, -5.765e4, 3.558e4, -1.259e5, 1.47e4, -2.868e4, 5.699e4,
                  1.4e4, -3266.0}),
        },
        0.65));

    cat.push_back(rom(
        "sigma_max_P6_1year", Quantity::sigma_max, "P6", 5.05e7,
        {
            form("f1", FormKind::quadratic_1d, 1, 0, {-1708.0, 1.016e5, -1.436e6}),
            form("f3", FormKind::linear_1d, 3, 0, {0.335, -8.67e6}),
            form("f5", FormKind::linear_1d, 5, 0, {-3.19e7, 1.2e7}),
            form("f6", FormKind::linear_1d, 6, 0, {2.72e7, -5.1e6}),
            form("f7", FormKind::quadratic_1d, 7, 0, {-2.25e7, 2.565e7, -1.46e7}),
            form("f8", FormKind::sine_sum_3, 8, 0,
                 {2.565e7, 1.271, 3.662, 1.506e7, 1.411, -4.119, 1.153e7, 1.016, 10.12},
                 "coefficients from the table captioned for maximum horizontal stress at "
                 "Point 6; the body text cross-references the minimum-stress table label"),
            form("f18", FormKind::bivariate_poly_3, 1, 8,
                 {-2.528e6, -3.111e5, -3.678e4, -4.567e4, 6.293e5, 3.488e5, 6.563e4, -1.54e5,
                  1.734e5, -4.125e4}),
        },
        0.90));

    return cat;
}

}  // namespace

const std::vector<RomSpec>& rom_catalog() {
    static const std::vector<RomSpec> catalog = build_catalog();
    return catalog;
}

}  // namespace porosol
