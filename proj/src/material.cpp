#include "porosol/material.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "porosol/config.hpp"

namespace porosol {

double diffusivity(const PoroelasticMaterial& m) {
    if (!(m.undrained_poisson > m.drained_poisson)) {
        throw std::domain_error(
            "diffusivity: requires nu < nu_u (got nu=" + std::to_string(m.drained_poisson) +
            ", nu_u=" + std::to_string(m.undrained_poisson) + ")");
    }
    const double g = m.shear_modulus_pa;
    const double nu = m.drained_poisson;
    const double nuu = m.undrained_poisson;
    const double b = m.skempton_b;
    const double num = 2.0 * m.mobility * b * b * g * (1.0 - nu) * (1.0 + nuu) * (1.0 + nuu);
    const double den = 9.0 * (1.0 - nuu) * (nuu - nu);
    return num / den;
}

double biot_alpha(const PoroelasticMaterial& m, std::string* warning) {
    if (m.drained_poisson >= 0.5) {
        throw std::domain_error("biot_alpha: nu must be below 0.5");
    }
    const double nu = m.drained_poisson;
    const double nuu = m.undrained_poisson;
    const double alpha = 3.0 * (nuu - nu) / (m.skempton_b * (1.0 - 2.0 * nu) * (1.0 + nuu));
    if (warning && alpha > 1.0) {
        std::ostringstream os;
        os << "biot_alpha exceeds 1 (" << alpha << "); constants are outside the micromechanical range";
        *warning = os.str();
    }
    return alpha;
}

DerivedPoroelastic derive(const PoroelasticMaterial& m) {
    return DerivedPoroelastic{diffusivity(m), biot_alpha(m)};
}

std::vector<ValidationIssue> validate(const PoroelasticMaterial& m) {
    std::vector<ValidationIssue> issues;
    auto flag = [&issues](const char* field, const std::string& msg) {
        issues.push_back({field, msg});
    };
    if (!(m.shear_modulus_pa > 0.0)) flag("shear_modulus_pa", "G must be positive");
    if (!(m.mobility > 0.0)) flag("mobility", "kappa must be positive");
    if (!(m.drained_poisson > 0.0)) flag("drained_poisson", "nu must be positive");
    if (!(m.drained_poisson < m.undrained_poisson)) flag("drained_poisson", "nu < nu_u violated");
    if (!(m.undrained_poisson < 0.5)) flag("undrained_poisson", "nu_u < 0.5 violated");
    if (!(m.skempton_b > 0.0)) flag("skempton_b", "B must be positive");
    if (!(m.skempton_b <= 1.0)) flag("skempton_b", "B <= 1 violated");
    return issues;
}

bool is_admissible(const PoroelasticMaterial& m) { return validate(m).empty(); }

void require_admissible(const PoroelasticMaterial& m) {
    const auto issues = validate(m);
    if (issues.empty()) return;
    std::ostringstream os;
    os << "inadmissible poroelastic material:";
    for (const auto& i : issues) os << " [" << i.field << "] " << i.message << ";";
    throw std::domain_error(os.str());
}

namespace {

constexpr double kWaterViscosityPaS = 1.0e-3;

PoroelasticMaterial from_table(double g_pa, double nu, double nuu, double b, double k_m2) {
    return PoroelasticMaterial{g_pa, nu, nuu, b, k_m2 / kWaterViscosityPaS};
}

std::vector<RockPreset> build_presets() {
    std::vector<RockPreset> p;
    p.push_back({"Tennessee Marble", from_table(24e9, 0.25, 0.31, 0.51, 1.0e-19),
                 1.3e-5, 0.19, 1.0e-19, kWaterViscosityPaS});
    p.push_back({"Haynesville Shale", from_table(13.8e9, 0.22, 0.46, 0.91, 1.0e-19),
                 4.5e-6, 0.96, 1.0e-19, kWaterViscosityPaS});
    p.push_back({"Berea Sandstone", from_table(6e9, 0.20, 0.25, 0.62, 1.9e-13),
                 4.5e-6, 0.96, 1.9e-13, kWaterViscosityPaS});
    p.push_back({"Charcoal Granite", from_table(19e9, 0.27, 0.30, 0.55, 1.0e-19),
                 7.0e-6, 0.27, 1.0e-19, kWaterViscosityPaS});
    p.push_back({"Weber Sandstone", from_table(12e9, 0.15, 0.29, 0.73, 1.0e-15),
                 2.1e-2, 0.64, 1.0e-15, kWaterViscosityPaS});
    return p;
}

std::string canonical_name(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == ' ' || c == '_' || c == '-') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace

const std::vector<RockPreset>& rock_presets() {
    static const std::vector<RockPreset> presets = build_presets();
    return presets;
}

const RockPreset* find_rock_preset(std::string_view name) {
    const std::string key = canonical_name(name);
    for (const auto& p : rock_presets()) {
        if (canonical_name(p.name) == key) return &p;
    }
    return nullptr;
}

std::string rock_catalog_text(const std::vector<RockPreset>& presets) {
    std::ostringstream os;
    os << "# porosol rock preset catalog\n";
    os << "# annotated_* columns are source-table values kept for reference;\n";
    os << "# derived quantities are always recomputed from the five constants.\n";
    for (const auto& p : presets) {
        os << "\n[" << p.name << "]\n";
        os << "shear_modulus_pa = " << format_double(p.material.shear_modulus_pa) << "\n";
        os << "drained_poisson = " << format_double(p.material.drained_poisson) << "\n";
        os << "undrained_poisson = " << format_double(p.material.undrained_poisson) << "\n";
        os << "skempton_b = " << format_double(p.material.skempton_b) << "\n";
        os << "mobility = " << format_double(p.material.mobility) << "\n";
        os << "permeability_m2 = " << format_double(p.permeability_m2) << "\n";
        os << "assumed_viscosity_pa_s = " << format_double(p.assumed_viscosity_pa_s) << "\n";
        os << "annotated_diffusivity_m2_s = " << format_double(p.annotated_diffusivity_m2_s) << "\n";
        os << "annotated_biot_alpha = " << format_double(p.annotated_biot_alpha) << "\n";
    }
    return os.str();
}

std::vector<RockPreset> parse_rock_catalog(const std::string& text) {
    const ConfigFile cfg = parse_config(text);
    std::vector<RockPreset> out;
    for (const auto& section : cfg.section_order) {
        if (section.empty()) continue;
        RockPreset p;
        p.name = section;
        p.material.shear_modulus_pa = cfg.get_double(section, "shear_modulus_pa");
        p.material.drained_poisson = cfg.get_double(section, "drained_poisson");
        p.material.undrained_poisson = cfg.get_double(section, "undrained_poisson");
        p.material.skempton_b = cfg.get_double(section, "skempton_b");
        p.material.mobility = cfg.get_double(section, "mobility");
        p.permeability_m2 = cfg.get_double(section, "permeability_m2", 0.0);
        p.assumed_viscosity_pa_s = cfg.get_double(section, "assumed_viscosity_pa_s", 0.0);
        p.annotated_diffusivity_m2_s = cfg.get_double(section, "annotated_diffusivity_m2_s", 0.0);
        p.annotated_biot_alpha = cfg.get_double(section, "annotated_biot_alpha", 0.0);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace porosol
