#ifndef POROSOL_ROM_HPP
#define POROSOL_ROM_HPP

#include <array>
#include <string>
#include <vector>

#include "porosol/sobol.hpp"

namespace porosol {

/// Closed-form component function shapes used by the reduced-order models.
/// 1-D polynomials store coefficients from the highest power down to the
/// constant. Sine sums are c0 sin(c1 x + c2) + ... ; Fourier forms carry the
/// base frequency in c0, then the constant and cos/sin amplitude pairs per
/// harmonic. Bivariate polynomials store all monomials of total degree <= d
/// ordered by degree, x-power descending within a degree.
enum class FormKind {
    constant,
    linear_1d,
    quadratic_1d,
    cubic_1d,
    octic_1d,
    sine_sum_2,
    sine_sum_3,
    fourier_2,
    fourier_4,
    bivariate_poly_3,
    bivariate_poly_4,
    bivariate_poly_5,
};

int form_arity(FormKind kind);              // 0, 1 or 2 consumed variables
int form_coefficient_count(FormKind kind);
std::string form_kind_name(FormKind kind);
FormKind form_kind_from_name(const std::string& name);

/// One typed component function with signed canonical coefficients.
/// `vars` are 1-based input indices (half-length=1, spacing=2, production
/// pressure=3, shear modulus=4, undrained/drained Poisson=5/6, Skempton=7,
/// log10 mobility=8). `provenance` records transcription notes such as
/// resolved typos or alternative sign readings.
struct BasisForm {
    std::string label;  // "f3", "f38", ...
    FormKind kind = FormKind::constant;
    std::array<int, 2> vars = {0, 0};
    std::vector<double> coeffs;
    std::string provenance;

    void require_well_formed() const;
};

double eval_component(const BasisForm& b, const std::vector<double>& x);

enum class Quantity { pore_pressure, sigma_min, sigma_max };

std::string quantity_name(Quantity q);
Quantity quantity_from_name(const std::string& name);

/// Quantity surrogate at one observation point and horizon:
/// f0 plus the sum of the component functions.
struct RomSpec {
    std::string name;
    Quantity quantity = Quantity::pore_pressure;
    std::string point_id;  // "P1", "P5", "P6"
    double horizon_s = 0.0;
    double f0_pa = 0.0;
    std::vector<BasisForm> components;
    double declared_accuracy = 0.0;

    void require_well_formed() const;
};

/// Inputs outside the sampled box are flagged (evaluation proceeds).
struct RangeWarning {
    bool out_of_box = false;
    std::vector<int> dims;  // 1-based offending dims
};

double eval_rom(const RomSpec& r, const std::vector<double>& x, RangeWarning* warning = nullptr);

/// The sampled input box in SI units (pressures Pa, lengths m, moduli Pa,
/// mobility as log10 of m^2/(Pa s)).
const InputSpace& rom_input_space();

/// Built-in one-year surrogates: {pore pressure, sigma_min, sigma_max} at
/// observation points P1, P5, P6, coefficients transcribed from the source
/// tables with equation signs folded in.
const std::vector<RomSpec>& rom_catalog();

const RomSpec* find_catalog_rom(Quantity q, const std::string& point_id);

/// Versioned plain-text schema; parse(serialize(r)) reproduces r exactly.
std::string serialize_rom(const RomSpec& r);
RomSpec parse_rom(const std::string& text);
void save_rom(const RomSpec& r, const std::string& path);
RomSpec load_rom(const std::string& path);

}  // namespace porosol

#endif
