#include "porosol/rom.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "porosol/config.hpp"

namespace porosol {

int form_arity(FormKind kind) {
    switch (kind) {
        case FormKind::constant:
            return 0;
        case FormKind::linear_1d:
        case FormKind::quadratic_1d:
        case FormKind::cubic_1d:
        case FormKind::octic_1d:
        case FormKind::sine_sum_2:
        case FormKind::sine_sum_3:
        case FormKind::fourier_2:
        case FormKind::fourier_4:
            return 1;
        case FormKind::bivariate_poly_3:
        case FormKind::bivariate_poly_4:
        case FormKind::bivariate_poly_5:
            return 2;
    }
    return 0;
}

int form_coefficient_count(FormKind kind) {
    switch (kind) {
        case FormKind::constant: return 1;
        case FormKind::linear_1d: return 2;
        case FormKind::quadratic_1d: return 3;
        case FormKind::cubic_1d: return 4;
        case FormKind::octic_1d: return 9;
        case FormKind::sine_sum_2: return 6;
        case FormKind::sine_sum_3: return 9;
        case FormKind::fourier_2: return 6;
        case FormKind::fourier_4: return 10;
        case FormKind::bivariate_poly_3: return 10;
        case FormKind::bivariate_poly_4: return 15;
        case FormKind::bivariate_poly_5: return 21;
    }
    return 0;
}

std::string form_kind_name(FormKind kind) {
    switch (kind) {
        case FormKind::constant: return "constant";
        case FormKind::linear_1d: return "linear";
        case FormKind::quadratic_1d: return "quadratic";
        case FormKind::cubic_1d: return "cubic";
        case FormKind::octic_1d: return "octic";
        case FormKind::sine_sum_2: return "sine_sum_2";
        case FormKind::sine_sum_3: return "sine_sum_3";
        case FormKind::fourier_2: return "fourier_2";
        case FormKind::fourier_4: return "fourier_4";
        case FormKind::bivariate_poly_3: return "bivariate_poly_3";
        case FormKind::bivariate_poly_4: return "bivariate_poly_4";
        case FormKind::bivariate_poly_5: return "bivariate_poly_5";
    }
    return "?";
}

FormKind form_kind_from_name(const std::string& name) {
    for (int k = 0; k <= static_cast<int>(FormKind::bivariate_poly_5); ++k) {
        const FormKind kind = static_cast<FormKind>(k);
        if (form_kind_name(kind) == name) return kind;
    }
    throw std::invalid_argument("unknown component form kind: " + name);
}

void BasisForm::require_well_formed() const {
    const int arity = form_arity(kind);
    for (int i = 0; i < arity; ++i) {
        if (vars[i] < 1) {
            throw std::invalid_argument("component " + label + ": needs " +
                                        std::to_string(arity) + " variable indices");
        }
    }
    for (int i = arity; i < 2; ++i) {
        if (vars[i] != 0) {
            throw std::invalid_argument("component " + label + ": too many variable indices");
        }
    }
    if (static_cast<int>(coeffs.size()) != form_coefficient_count(kind)) {
        throw std::invalid_argument("component " + label + ": expected " +
                                    std::to_string(form_coefficient_count(kind)) +
                                    " coefficients, got " + std::to_string(coeffs.size()));
    }
}

namespace {

double eval_poly_1d(const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (double ck : c) acc = acc * u + ck;
    return acc;
}

double eval_bivariate(const std::vector<double>& c, int degree, double u, double v) {
    // Monomial order: degree ascending, u-power descending within a degree.
    double acc = 0.0;
    std::size_t idx = 0;
    for (int d = 0; d <= degree; ++d) {
        for (int i = d; i >= 0; --i) {
            acc += c[idx++] * std::pow(u, i) * std::pow(v, d - i);
        }
    }
    return acc;
}

double eval_fourier(const std::vector<double>& c, int harmonics, double u) {
    const double w = c[0];
    double acc = c[1];
    for (int k = 1; k <= harmonics; ++k) {
        acc += c[2 * k] * std::cos(k * w * u) + c[2 * k + 1] * std::sin(k * w * u);
    }
    return acc;
}

}  // namespace

double eval_component(const BasisForm& b, const std::vector<double>& x) {
    b.require_well_formed();
    auto var = [&x, &b](int slot) {
        const int idx = b.vars[slot] - 1;
        if (idx < 0 || idx >= static_cast<int>(x.size())) {
            throw std::invalid_argument("component " + b.label + ": variable index out of range");
        }
        return x[idx];
    };
    const std::vector<double>& c = b.coeffs;
    switch (b.kind) {
        case FormKind::constant:
            return c[0];
        case FormKind::linear_1d:
        case FormKind::quadratic_1d:
        case FormKind::cubic_1d:
        case FormKind::octic_1d:
            return eval_poly_1d(c, var(0));
        case FormKind::sine_sum_2: {
            const double u = var(0);
            return c[0] * std::sin(c[1] * u + c[2]) + c[3] * std::sin(c[4] * u + c[5]);
        }
        case FormKind::sine_sum_3: {
            const double u = var(0);
            return c[0] * std::sin(c[1] * u + c[2]) + c[3] * std::sin(c[4] * u + c[5]) +
                   c[6] * std::sin(c[7] * u + c[8]);
        }
        case FormKind::fourier_2:
            return eval_fourier(c, 2, var(0));
        case FormKind::fourier_4:
            return eval_fourier(c, 4, var(0));
        case FormKind::bivariate_poly_3:
            return eval_bivariate(c, 3, var(0), var(1));
        case FormKind::bivariate_poly_4:
            return eval_bivariate(c, 4, var(0), var(1));
        case FormKind::bivariate_poly_5:
            return eval_bivariate(c, 5, var(0), var(1));
    }
    throw std::logic_error("eval_component: unhandled kind");
}

std::string quantity_name(Quantity q) {
    switch (q) {
        case Quantity::pore_pressure: return "pore_pressure";
        case Quantity::sigma_min: return "sigma_min";
        case Quantity::sigma_max: return "sigma_max";
    }
    return "?";
}

Quantity quantity_from_name(const std::string& name) {
    if (name == "pore_pressure" || name == "p" || name == "pp") return Quantity::pore_pressure;
    if (name == "sigma_min" || name == "sigma_h" || name == "sh") return Quantity::sigma_min;
    if (name == "sigma_max" || name == "sigma_H" || name == "sH") return Quantity::sigma_max;
    throw std::invalid_argument("unknown quantity: " + name);
}

void RomSpec::require_well_formed() const {
    for (const auto& c : components) c.require_well_formed();
}

double eval_rom(const RomSpec& r, const std::vector<double>& x, RangeWarning* warning) {
    if (warning) {
        *warning = RangeWarning{};
        const InputSpace& box = rom_input_space();
        if (static_cast<int>(x.size()) >= box.size()) {
            for (int i = 0; i < box.size(); ++i) {
                if (x[i] < box.dims[i].lower || x[i] > box.dims[i].upper) {
                    warning->out_of_box = true;
                    warning->dims.push_back(i + 1);
                }
            }
        }
    }
    double acc = r.f0_pa;
    for (const auto& c : r.components) acc += eval_component(c, x);
    return acc;
}

const InputSpace& rom_input_space() {
    static const InputSpace space = [] {
        InputSpace s;
        s.dims = {
            {"half_length_m", 10.0, 60.0, DimScale::linear},
            {"spacing_m", 10.0, 30.0, DimScale::linear},
            {"production_pressure_pa", 1.0e7, 4.0e7, DimScale::linear},
            {"shear_modulus_pa", 1.0e9, 25.0e9, DimScale::linear},
            {"undrained_poisson", 0.30, 0.45, DimScale::linear},
            {"drained_poisson", 0.10, 0.29, DimScale::linear},
            {"skempton_b", 0.30, 0.90, DimScale::linear},
            {"log10_mobility", -17.0, -10.0, DimScale::linear},
        };
        return s;
    }();
    return space;
}

const RomSpec* find_catalog_rom(Quantity q, const std::string& point_id) {
    for (const auto& r : rom_catalog()) {
        if (r.quantity == q && r.point_id == point_id) return &r;
    }
    return nullptr;
}

std::string serialize_rom(const RomSpec& r) {
    std::ostringstream os;
    os << "# porosol-rom v1\n";
    os << "[rom]\n";
    os << "schema_version = 1\n";
    os << "name = " << r.name << "\n";
    os << "quantity = " << quantity_name(r.quantity) << "\n";
    os << "point = " << r.point_id << "\n";
    os << "horizon_s = " << format_double(r.horizon_s) << "\n";
    os << "f0_pa = " << format_double(r.f0_pa) << "\n";
    os << "declared_accuracy = " << format_double(r.declared_accuracy) << "\n";
    int i = 0;
    for (const auto& c : r.components) {
        os << "\n[component " << ++i << "]\n";
        os << "label = " << c.label << "\n";
        os << "kind = " << form_kind_name(c.kind) << "\n";
        os << "vars = " << c.vars[0];
        if (c.vars[1] != 0) os << "," << c.vars[1];
        os << "\n";
        os << "coeffs = ";
        for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
            if (k) os << ",";
            os << format_double(c.coeffs[k]);
        }
        os << "\n";
        if (!c.provenance.empty()) os << "provenance = " << c.provenance << "\n";
    }
    return os.str();
}

RomSpec parse_rom(const std::string& text) {
    const ConfigFile cfg = parse_config(text);
    if (cfg.get_long("rom", "schema_version", -1) != 1) {
        throw std::invalid_argument("rom file: unsupported schema version");
    }
    RomSpec r;
    r.name = cfg.get("rom", "name");
    r.quantity = quantity_from_name(cfg.get("rom", "quantity"));
    r.point_id = cfg.get("rom", "point");
    r.horizon_s = cfg.get_double("rom", "horizon_s");
    r.f0_pa = cfg.get_double("rom", "f0_pa");
    r.declared_accuracy = cfg.get_double("rom", "declared_accuracy", 0.0);
    for (const auto& section : cfg.section_order) {
        if (section.rfind("component", 0) != 0) continue;
        BasisForm c;
        c.label = cfg.get(section, "label");
        c.kind = form_kind_from_name(cfg.get(section, "kind"));
        const auto vars = cfg.get_double_list(section, "vars");
        for (std::size_t i = 0; i < vars.size() && i < 2; ++i) {
            c.vars[i] = static_cast<int>(vars[i]);
        }
        const auto coeffs = cfg.get_double_list(section, "coeffs");
        c.coeffs.assign(coeffs.begin(), coeffs.end());
        c.provenance = cfg.get(section, "provenance", "");
        c.require_well_formed();
        r.components.push_back(std::move(c));
    }
    return r;
}

void save_rom(const RomSpec& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << serialize_rom(r);
    if (!out) throw std::runtime_error("write failure: " + path);
}

RomSpec load_rom(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_rom(ss.str());
}

}  // namespace porosol
