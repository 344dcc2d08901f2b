#ifndef POROSOL_MATERIAL_HPP
#define POROSOL_MATERIAL_HPP

#include <string>
#include <string_view>
#include <vector>

namespace porosol {

/// Five independent constants of an isotropic poroelastic medium.
/// Mobility is rock permeability over fluid dynamic viscosity, m^2/(Pa s).
struct PoroelasticMaterial {
    double shear_modulus_pa = 0.0;   // G
    double drained_poisson = 0.0;    // nu
    double undrained_poisson = 0.0;  // nu_u
    double skempton_b = 0.0;         // B
    double mobility = 0.0;           // kappa = k / mu
};

/// Coefficients derived from the five independent constants.
struct DerivedPoroelastic {
    double diffusivity_m2_s = 0.0;  // c
    double biot_alpha = 0.0;        // alpha
};

/// Pore-pressure diffusion coefficient
///   c = 2 kappa B^2 G (1-nu)(1+nu_u)^2 / (9 (1-nu_u)(nu_u-nu)).
/// Throws std::domain_error when nu_u <= nu (the denominator degenerates).
double diffusivity(const PoroelasticMaterial& m);

/// Biot effective-stress coefficient
///   alpha = 3 (nu_u - nu) / (B (1-2 nu)(1+nu_u)).
/// Throws std::domain_error on nu = 0.5. If the result exceeds 1 a warning
/// string is written to `warning` (when non-null); the value is still returned.
double biot_alpha(const PoroelasticMaterial& m, std::string* warning = nullptr);

DerivedPoroelastic derive(const PoroelasticMaterial& m);

struct ValidationIssue {
    std::string field;
    std::string message;
};

/// Lists every violated admissibility requirement; empty iff the material is
/// admissible (G > 0, kappa > 0, 0 < nu < nu_u < 0.5, 0 < B <= 1).
std::vector<ValidationIssue> validate(const PoroelasticMaterial& m);

bool is_admissible(const PoroelasticMaterial& m);

/// Throws std::domain_error listing all violations when inadmissible.
void require_admissible(const PoroelasticMaterial& m);

/// Rock preset: five independent constants plus source-table annotations.
/// The annotated diffusivity/alpha columns are retained for reference only;
/// computations always re-derive c and alpha from the constants.
struct RockPreset {
    std::string name;
    PoroelasticMaterial material;
    double annotated_diffusivity_m2_s = 0.0;
    double annotated_biot_alpha = 0.0;
    double permeability_m2 = 0.0;       // source value behind `mobility`
    double assumed_viscosity_pa_s = 0.0;
};

/// Built-in catalog of the five reference rocks (mobility converted from
/// tabulated permeability with water viscosity 1e-3 Pa s).
const std::vector<RockPreset>& rock_presets();

/// nullptr when no preset matches (name match is case-insensitive,
/// spaces/underscores ignored).
const RockPreset* find_rock_preset(std::string_view name);

/// Serialize / parse the preset catalog in the key=value config format,
/// one section per rock.
std::string rock_catalog_text(const std::vector<RockPreset>& presets);
std::vector<RockPreset> parse_rock_catalog(const std::string& text);

}  // namespace porosol

#endif
