#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "porosol/material.hpp"

using namespace porosol;

namespace {

PoroelasticMaterial tennessee_marble() {
    // G=24 GPa, nu=0.25, nu_u=0.31, B=0.51, k=1e-19 m^2 with mu=1e-3 Pa s.
    return PoroelasticMaterial{24e9, 0.25, 0.31, 0.51, 1.0e-16};
}

}  // namespace

TEST_CASE("diffusivity closed form") {
    // Direct evaluation of the closed form for the marble constants.
    CHECK(diffusivity(tennessee_marble()) == doctest::Approx(4.31263391e-6).epsilon(1e-6));

    SUBCASE("diverges as nu_u approaches nu from above") {
        PoroelasticMaterial m = tennessee_marble();
        double prev = 0.0;
        for (double nuu : {0.30, 0.28, 0.26, 0.2501}) {
            m.undrained_poisson = nuu;
            const double c = diffusivity(m);
            CHECK(c > prev);
            prev = c;
        }
        CHECK(prev > 100.0 * diffusivity(tennessee_marble()));
    }

    SUBCASE("homogeneous of degree one in mobility and shear modulus") {
        PoroelasticMaterial m = tennessee_marble();
        const double base = diffusivity(m);
        m.mobility *= 2.0;
        CHECK(diffusivity(m) == 2.0 * base);
        m.mobility /= 2.0;
        m.shear_modulus_pa *= 2.0;
        CHECK(diffusivity(m) == 2.0 * base);
    }

    SUBCASE("rejects degenerate Poisson ordering") {
        PoroelasticMaterial m = tennessee_marble();
        m.undrained_poisson = m.drained_poisson;
        CHECK_THROWS_AS(diffusivity(m), std::domain_error);
        m.undrained_poisson = 0.2;
        CHECK_THROWS_AS(diffusivity(m), std::domain_error);
    }
}

TEST_CASE("biot alpha closed form") {
    PoroelasticMaterial berea{6e9, 0.20, 0.25, 0.62, 1.9e-10};
    CHECK(biot_alpha(berea) == doctest::Approx(0.3225806452).epsilon(1e-9));

    PoroelasticMaterial haynesville{13.8e9, 0.22, 0.46, 0.91, 1.0e-16};
    CHECK(biot_alpha(haynesville) == doctest::Approx(0.9677211243).epsilon(1e-9));

    SUBCASE("zero numerator at nu_u = nu") {
        PoroelasticMaterial m = berea;
        m.undrained_poisson = m.drained_poisson;
        CHECK(biot_alpha(m) == 0.0);
    }

    SUBCASE("domain error at nu = 0.5") {
        PoroelasticMaterial m = berea;
        m.drained_poisson = 0.5;
        CHECK_THROWS_AS(biot_alpha(m), std::domain_error);
    }

    SUBCASE("warns when alpha exceeds one") {
        PoroelasticMaterial m{1e9, 0.10, 0.45, 0.30, 1e-14};
        std::string warning;
        const double alpha = biot_alpha(m, &warning);
        CHECK(alpha > 1.0);
        CHECK(!warning.empty());
        warning.clear();
        biot_alpha(berea, &warning);
        CHECK(warning.empty());
    }
}

TEST_CASE("derived quantities are smooth in every field") {
    // Central differences at two step sizes agree, so the closed forms have
    // no hidden kinks inside the admissible region.
    const PoroelasticMaterial base{12e9, 0.15, 0.29, 0.73, 1.0e-12};
    auto check_smooth = [&](auto evaluate, double PoroelasticMaterial::*field) {
        for (double rel : {1e-5, 1e-6}) {
            PoroelasticMaterial lo = base;
            PoroelasticMaterial hi = base;
            const double h = rel * (base.*field);
            lo.*field -= h;
            hi.*field += h;
            const double d = (evaluate(hi) - evaluate(lo)) / (2.0 * h);
            CHECK(std::isfinite(d));
        }
        PoroelasticMaterial lo5 = base, hi5 = base, lo6 = base, hi6 = base;
        const double h5 = 1e-5 * (base.*field);
        const double h6 = 1e-6 * (base.*field);
        lo5.*field -= h5;
        hi5.*field += h5;
        lo6.*field -= h6;
        hi6.*field += h6;
        const double d5 = (evaluate(hi5) - evaluate(lo5)) / (2.0 * h5);
        const double d6 = (evaluate(hi6) - evaluate(lo6)) / (2.0 * h6);
        CHECK(d5 == doctest::Approx(d6).epsilon(1e-6));
    };
    auto eval_c = [](const PoroelasticMaterial& m) { return diffusivity(m); };
    auto eval_a = [](const PoroelasticMaterial& m) { return biot_alpha(m); };
    check_smooth(eval_c, &PoroelasticMaterial::shear_modulus_pa);
    check_smooth(eval_c, &PoroelasticMaterial::drained_poisson);
    check_smooth(eval_c, &PoroelasticMaterial::undrained_poisson);
    check_smooth(eval_c, &PoroelasticMaterial::skempton_b);
    check_smooth(eval_c, &PoroelasticMaterial::mobility);
    check_smooth(eval_a, &PoroelasticMaterial::drained_poisson);
    check_smooth(eval_a, &PoroelasticMaterial::undrained_poisson);
    check_smooth(eval_a, &PoroelasticMaterial::skempton_b);
}

TEST_CASE("validate reports every violated requirement") {
    const RockPreset* weber = find_rock_preset("Weber Sandstone");
    REQUIRE(weber != nullptr);
    CHECK(validate(weber->material).empty());

    PoroelasticMaterial bad = weber->material;
    bad.undrained_poisson = 0.25;
    bad.drained_poisson = 0.30;
    const auto issues = validate(bad);
    bool found_ordering = false;
    for (const auto& i : issues) {
        if (i.message.find("nu < nu_u") != std::string::npos) found_ordering = true;
    }
    CHECK(found_ordering);

    PoroelasticMaterial over = weber->material;
    over.skempton_b = 1.2;
    const auto issues2 = validate(over);
    REQUIRE(issues2.size() == 1);
    CHECK(issues2[0].field == "skempton_b");
    CHECK_THROWS_AS(require_admissible(over), std::domain_error);
}

TEST_CASE("sampled property ranges stay admissible") {
    // nu in [0.1, 0.29] always sits below nu_u in [0.30, 0.45].
    for (double nu : {0.1, 0.2, 0.29}) {
        for (double nuu : {0.30, 0.38, 0.45}) {
            for (double b : {0.3, 0.9}) {
                for (double g : {1e9, 25e9}) {
                    PoroelasticMaterial m{g, nu, nuu, b, 1e-14};
                    CHECK(validate(m).empty());
                    CHECK(diffusivity(m) > 0.0);
                    CHECK(std::isfinite(biot_alpha(m)));
                }
            }
        }
    }
}

TEST_CASE("rock presets") {
    const auto& presets = rock_presets();
    REQUIRE(presets.size() == 5);
    for (const auto& p : presets) {
        CHECK(validate(p.material).empty());
        CHECK(p.material.mobility == doctest::Approx(p.permeability_m2 / 1e-3));
    }
    CHECK(find_rock_preset("berea sandstone") != nullptr);
    CHECK(find_rock_preset("Berea_Sandstone") != nullptr);
    CHECK(find_rock_preset("granite of nowhere") == nullptr);

    SUBCASE("annotated columns are kept but derived values are recomputed") {
        const RockPreset* marble = find_rock_preset("Tennessee Marble");
        REQUIRE(marble != nullptr);
        CHECK(marble->annotated_diffusivity_m2_s == 1.3e-5);
        CHECK(diffusivity(marble->material) == doctest::Approx(4.31263391e-6).epsilon(1e-6));
        CHECK(marble->annotated_biot_alpha == 0.19);
    }

    SUBCASE("catalog text round-trips") {
        const std::string text = rock_catalog_text(presets);
        const auto parsed = parse_rock_catalog(text);
        REQUIRE(parsed.size() == presets.size());
        for (std::size_t i = 0; i < presets.size(); ++i) {
            CHECK(parsed[i].name == presets[i].name);
            CHECK(parsed[i].material.shear_modulus_pa == presets[i].material.shear_modulus_pa);
            CHECK(parsed[i].material.mobility == presets[i].material.mobility);
            CHECK(parsed[i].annotated_biot_alpha == presets[i].annotated_biot_alpha);
        }
    }
}
