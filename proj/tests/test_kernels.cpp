#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "porosol/kernels.hpp"

using namespace porosol;

namespace {

const PoroelasticMaterial kRock{6e9, 0.2, 0.25, 0.62, 1.9e-10};

Element make_element(double mx, double my, double h, double angle) {
    Element e;
    e.mid_x_m = mx;
    e.mid_y_m = my;
    e.half_size_m = h;
    e.s_x = std::cos(angle);
    e.s_y = std::sin(angle);
    e.n_x = -e.s_y;
    e.n_y = e.s_x;
    return e;
}

}  // namespace

TEST_CASE("elastic self-influence matches the dislocation integral") {
    const Element e = make_element(0.0, 0.0, 1.0, 0.0);
    const ElasticInfluence self = elastic_dd_kernel(e, 0.0, 0.0, kRock);
    const double expected = kRock.shear_modulus_pa /
                            (M_PI * (1.0 - kRock.drained_poisson) * e.half_size_m);
    CHECK(self.per_unit_dn.syy == doctest::Approx(expected).epsilon(1e-12));
    const double numeric = oracle::dd_self_influence_numeric(
        kRock.shear_modulus_pa, kRock.drained_poisson, e.half_size_m);
    CHECK(self.per_unit_dn.syy == doctest::Approx(numeric).epsilon(1e-3));
    // shear block mirrors the normal block on the diagonal
    CHECK(self.per_unit_ds.sxy == doctest::Approx(expected).epsilon(1e-12));
    CHECK(self.per_unit_ds.syy == doctest::Approx(0.0));
    CHECK(self.per_unit_dn.sxy == doctest::Approx(0.0));
}

TEST_CASE("sigma_xy influence of a normal discontinuity is odd along the element") {
    const Element e = make_element(0.0, 0.0, 1.0, 0.0);
    for (double xi : {0.4, 1.7, 3.0}) {
        const double eta = 0.8;
        const ElasticInfluence plus = elastic_dd_kernel(e, xi, eta, kRock);
        const ElasticInfluence minus = elastic_dd_kernel(e, -xi, eta, kRock);
        CHECK(plus.per_unit_dn.sxy == doctest::Approx(-minus.per_unit_dn.sxy).epsilon(1e-10));
        CHECK(plus.per_unit_dn.syy == doctest::Approx(minus.per_unit_dn.syy).epsilon(1e-10));
    }
}

TEST_CASE("elastic influence decays like a dipole") {
    const Element e = make_element(0.0, 0.0, 1.0, 0.0);
    const double r0 = 150.0;
    const ElasticInfluence near = elastic_dd_kernel(e, r0, 0.3 * r0, kRock);
    const ElasticInfluence far = elastic_dd_kernel(e, 2 * r0, 0.6 * r0, kRock);
    CHECK(far.per_unit_dn.syy == doctest::Approx(near.per_unit_dn.syy / 4.0).epsilon(0.05));
    CHECK(far.per_unit_ds.sxy == doctest::Approx(near.per_unit_ds.sxy / 4.0).epsilon(0.05));
}

TEST_CASE("elastic kernel is frame covariant") {
    const double angle = 0.7;
    const Element straight = make_element(0.0, 0.0, 1.0, 0.0);
    const Element rotated = make_element(0.0, 0.0, 1.0, angle);
    const double ox = 1.3, oy = 0.9;
    const ElasticInfluence a = elastic_dd_kernel(straight, ox, oy, kRock);
    // rotate observer into the rotated-element configuration
    const double rx = std::cos(angle) * ox - std::sin(angle) * oy;
    const double ry = std::sin(angle) * ox + std::cos(angle) * oy;
    const ElasticInfluence b = elastic_dd_kernel(rotated, rx, ry, kRock);
    // compare the normal traction resolved on a co-rotating plane
    const Element probe_a = make_element(ox, oy, 0.1, 0.0);
    const Element probe_b = make_element(rx, ry, 0.1, angle);
    double sa, na, sb, nb;
    resolve_tractions(a.per_unit_dn, probe_a, sa, na);
    resolve_tractions(b.per_unit_dn, probe_b, sb, nb);
    CHECK(na == doctest::Approx(nb).epsilon(1e-10));
    CHECK(sa == doctest::Approx(sb).epsilon(1e-10));
}

TEST_CASE("tip evaluation raises the singular-point error") {
    const Element e = make_element(0.0, 0.0, 1.0, 0.0);
    CHECK_THROWS_AS(elastic_dd_kernel(e, 1.0, 0.0, kRock), SingularPointError);
    CHECK_THROWS_AS(elastic_dd_kernel(e, -1.0, 0.0, kRock), SingularPointError);
    CHECK_NOTHROW(elastic_dd_kernel(e, 0.999, 0.0, kRock));
}

TEST_CASE("fluid kernel pressure approaches the point-source well function") {
    // A very small element looks like a line source of its own length.
    const double c = diffusivity(kRock);
    const double t = 2.0e4;
    const Element tiny = make_element(0.0, 0.0, 1e-4, 0.0);
    for (double u : {1e-3, 0.03, 0.4, 1.0, 4.0, 10.0}) {
        const double r = std::sqrt(u * 4.0 * c * t);
        const FluidInfluence f = fluid_source_kernel(tiny, r, 0.0, kRock, t);
        const double point = 2.0 * tiny.half_size_m / (4.0 * M_PI * kRock.mobility) *
                             oracle::reference_e1(u);
        CHECK(f.pressure == doctest::Approx(point).epsilon(1e-6));
    }
}

TEST_CASE("fluid kernel limits and identities") {
    const Element e = make_element(0.0, 0.0, 1.0, 0.0);
    const double c = diffusivity(kRock);
    const double eta = poroelastic_stress_coefficient(kRock);

    SUBCASE("short elapsed time leaves a distant point untouched") {
        const double r = 8.0;
        const double t_small = r * r / (4.0 * c) / 800.0;
        const FluidInfluence f = fluid_source_kernel(e, r, 0.0, kRock, t_small);
        const double scale = 1.0 / (4.0 * M_PI * kRock.mobility);
        CHECK(std::fabs(f.pressure) < 1e-12 * scale);
        CHECK_THROWS_AS(fluid_source_kernel(e, r, 0.0, kRock, 0.0), std::domain_error);
    }

    SUBCASE("stress trace equals -2 eta p everywhere") {
        const double t = 5.0e4;
        for (auto [x, y] : {std::pair{0.0, 0.0}, {0.5, 0.0}, {2.0, 1.0}, {0.0, 3.0},
                            {7.0, -2.0}}) {
            const FluidInfluence f = fluid_source_kernel(e, x, y, kRock, t);
            CHECK(f.stress.sxx + f.stress.syy ==
                  doctest::Approx(-2.0 * eta * f.pressure).epsilon(1e-8));
        }
    }

    SUBCASE("induced stress field is divergence free off the element") {
        const double t = 5.0e4;
        const double h = 1e-4;
        const double x0 = 2.4, y0 = 1.7;
        auto sxx = [&](double x, double y) {
            return fluid_source_kernel(e, x, y, kRock, t).stress.sxx;
        };
        auto syy = [&](double x, double y) {
            return fluid_source_kernel(e, x, y, kRock, t).stress.syy;
        };
        auto sxy = [&](double x, double y) {
            return fluid_source_kernel(e, x, y, kRock, t).stress.sxy;
        };
        const double div_x = (sxx(x0 + h, y0) - sxx(x0 - h, y0)) / (2 * h) +
                             (sxy(x0, y0 + h) - sxy(x0, y0 - h)) / (2 * h);
        const double div_y = (sxy(x0 + h, y0) - sxy(x0 - h, y0)) / (2 * h) +
                             (syy(x0, y0 + h) - syy(x0, y0 - h)) / (2 * h);
        const double scale = std::fabs(sxx(x0, y0)) / 0.5;  // stress over ~length scale
        CHECK(std::fabs(div_x) < 2e-4 * scale);
        CHECK(std::fabs(div_y) < 2e-4 * scale);
    }

    SUBCASE("closed-form on-line branch joins the quadrature branch") {
        const double t = 5.0e4;
        for (double xi : {0.0, 0.7, 1.6}) {
            const FluidInfluence on = fluid_source_kernel(e, xi, 0.0, kRock, t);
            const FluidInfluence off = fluid_source_kernel(e, xi, 1e-7, kRock, t);
            CHECK(on.pressure == doctest::Approx(off.pressure).epsilon(1e-5));
            CHECK(on.stress.syy == doctest::Approx(off.stress.syy).epsilon(2e-3));
        }
    }

    SUBCASE("production sign: a sink depressurizes and relaxes compression") {
        const double t = 5.0e4;
        const FluidInfluence f = fluid_source_kernel(e, 1.5, 0.8, kRock, t);
        // per unit positive (injection) D_q
        CHECK(f.pressure > 0.0);
        CHECK(f.stress.sxx < 0.0);
        CHECK(f.stress.syy < 0.0);
    }
}
