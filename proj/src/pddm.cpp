#include "porosol/pddm.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace porosol {

void FarFieldState::require_valid() const {
    if (!(sigma_max_pa >= sigma_min_pa)) {
        throw std::invalid_argument("far field: sigma_H must be >= sigma_h");
    }
    if (!(pore_pressure_pa < sigma_min_pa)) {
        throw std::invalid_argument("far field: reservoir pressure must be below sigma_h");
    }
}

BoundaryCondition BoundaryCondition::constant_pressure_production(int n_steps, int n_elements,
                                                                  double production_pressure_pa) {
    BoundaryCondition bc;
    bc.n_steps = n_steps;
    bc.n_elements = n_elements;
    const std::size_t total = static_cast<std::size_t>(n_steps) * n_elements;
    bc.shear_pa.assign(total, 0.0);
    bc.normal_pa.assign(total, -production_pressure_pa);
    bc.pressure_pa.assign(total, production_pressure_pa);
    return bc;
}

BoundaryCondition BoundaryCondition::pressure_drawdown(int n_steps,
                                                       const std::vector<Element>& elements,
                                                       double production_pressure_pa,
                                                       const FarFieldState& far_field) {
    BoundaryCondition bc;
    bc.n_steps = n_steps;
    bc.n_elements = static_cast<int>(elements.size());
    const StressTriple far = far_field.stress_tensor();
    std::vector<double> far_s(elements.size()), far_n(elements.size());
    for (std::size_t e = 0; e < elements.size(); ++e) {
        resolve_tractions(far, elements[e], far_s[e], far_n[e]);
    }
    for (int h = 0; h < n_steps; ++h) {
        for (std::size_t e = 0; e < elements.size(); ++e) {
            bc.shear_pa.push_back(far_s[e]);
            bc.normal_pa.push_back(far_n[e]);
            bc.pressure_pa.push_back(production_pressure_pa);
        }
    }
    return bc;
}

namespace {

constexpr double kQuantum = 1e-10;  // cache key resolution, meters / radians

using GeomKey = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;

GeomKey make_key(double xi, double eta, double h, double orient) {
    return {static_cast<std::int64_t>(std::llround(xi / kQuantum)),
            static_cast<std::int64_t>(std::llround(eta / kQuantum)),
            static_cast<std::int64_t>(std::llround(h / kQuantum)),
            static_cast<std::int64_t>(std::llround(orient / kQuantum))};
}

/// Memoized fluid kernel lookup for one elapsed time. Influences are
/// translation invariant, so entries are keyed on the observer position in
/// the source frame plus the source size/orientation.
class FluidKernelTable {
public:
    FluidKernelTable(const std::vector<Element>& elements, const PoroelasticMaterial& m,
                     double elapsed_s)
        : elements_(elements), material_(m), elapsed_s_(elapsed_s) {}

    const FluidInfluence& at_element(int obs, int src) {
        const Element& o = elements_[obs];
        return at_point(o.mid_x_m, o.mid_y_m, src);
    }

    const FluidInfluence& at_point(double x, double y, int src) {
        const Element& s = elements_[src];
        const double rx = x - s.mid_x_m;
        const double ry = y - s.mid_y_m;
        const double xi = rx * s.s_x + ry * s.s_y;
        const double eta = rx * s.n_x + ry * s.n_y;
        const GeomKey key = make_key(xi, eta, s.half_size_m, std::atan2(s.s_y, s.s_x));
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            it = cache_.emplace(key, fluid_source_kernel(s, x, y, material_, elapsed_s_)).first;
        }
        return it->second;
    }

private:
    const std::vector<Element>& elements_;
    const PoroelasticMaterial& material_;
    double elapsed_s_;
    std::map<GeomKey, FluidInfluence> cache_;
};

double undrained_skempton_factor(const PoroelasticMaterial& m) {
    return -m.skempton_b * (1.0 + m.undrained_poisson) / 3.0;
}

}  // namespace

Eigen::MatrixXd assemble_step(const std::vector<Element>& elements, const PoroelasticMaterial& m,
                              double dt_s, int lag, const KernelOptions& opts) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("assemble_step: dt must be positive");
    if (lag < 0) throw std::invalid_argument("assemble_step: lag must be >= 0");
    const int n = static_cast<int>(elements.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3 * n, 3 * n);

    // Fluid slab response: step response at (lag+1) dt minus at lag dt.
    FluidKernelTable newer(elements, m, (lag + 1) * dt_s);
    FluidKernelTable older(elements, m, std::max(lag, 1) * dt_s);
    const bool has_older = lag >= 1;
    const double skempton = undrained_skempton_factor(m);

    for (int obs = 0; obs < n; ++obs) {
        const Element& o = elements[obs];
        for (int src = 0; src < n; ++src) {
            const int cs = 3 * src;
            if (lag == 0) {
                const ElasticInfluence el =
                    elastic_dd_kernel(elements[src], o.mid_x_m, o.mid_y_m, m);
                double ss, sn;
                resolve_tractions(el.per_unit_ds, o, ss, sn);
                a(3 * obs + 0, cs + 0) = ss;
                a(3 * obs + 1, cs + 0) = sn;
                resolve_tractions(el.per_unit_dn, o, ss, sn);
                a(3 * obs + 0, cs + 1) = ss;
                a(3 * obs + 1, cs + 1) = sn;
                if (opts.pressure_coupling) {
                    // Undrained Skempton closure: instantaneous pore pressure
                    // from the in-plane mean stress of the elastic field.
                    a(3 * obs + 2, cs + 0) =
                        skempton * (el.per_unit_ds.sxx + el.per_unit_ds.syy);
                    a(3 * obs + 2, cs + 1) =
                        skempton * (el.per_unit_dn.sxx + el.per_unit_dn.syy);
                }
            }
            FluidInfluence f = newer.at_element(obs, src);
            if (has_older) {
                const FluidInfluence& prev = older.at_element(obs, src);
                f.pressure -= prev.pressure;
                f.stress.sxx -= prev.stress.sxx;
                f.stress.syy -= prev.stress.syy;
                f.stress.sxy -= prev.stress.sxy;
            }
            double ss, sn;
            resolve_tractions(f.stress, o, ss, sn);
            a(3 * obs + 0, cs + 2) = ss;
            a(3 * obs + 1, cs + 2) = sn;
            a(3 * obs + 2, cs + 2) = f.pressure;
        }
    }
    return a;
}

Simulator::Simulator(const FractureSystem& system, const PoroelasticMaterial& material,
                     const FarFieldState& far_field, const KernelOptions& opts)
    : elements_(discretize(system)), material_(material), far_field_(far_field), opts_(opts) {
    require_admissible(material_);
    far_field_.require_valid();
}

DiscontinuityHistory Simulator::march(const BoundaryCondition& bc, double dt_s,
                                      int n_steps) const {
    const int n = static_cast<int>(elements_.size());
    if (bc.n_elements != n) {
        throw std::invalid_argument("march: boundary condition element count mismatch");
    }
    if (bc.n_steps < n_steps) {
        throw std::invalid_argument("march: boundary condition covers fewer steps than requested");
    }
    if (!(dt_s > 0.0) || n_steps < 1) {
        throw std::invalid_argument("march: need dt > 0 and n_steps >= 1");
    }

    const Eigen::MatrixXd k0 = assemble_step(elements_, material_, dt_s, 0, opts_);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(k0);
    if (!lu.isInvertible()) {
        // Point at the element whose equations collapsed.
        Eigen::MatrixXd ker = lu.kernel();
        int worst = 0;
        ker.col(0).cwiseAbs().maxCoeff(&worst);
        throw std::runtime_error("march: singular current-step matrix (element " +
                                 std::to_string(worst / 3) + ")");
    }

    // Fluid history blocks: the slab of age m responds with the difference
    // of the step responses at (m+1) dt and m dt.
    std::vector<Eigen::MatrixXd> slab_blocks;  // index m-1 -> S_(m+1) - S_m, 3N x N
    {
        Eigen::MatrixXd prev;
        for (int m = 1; m <= n_steps; ++m) {
            FluidKernelTable table(elements_, material_, m * dt_s);
            Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3 * n, n);
            for (int obs = 0; obs < n; ++obs) {
                const Element& o = elements_[obs];
                for (int src = 0; src < n; ++src) {
                    const FluidInfluence& f = table.at_element(obs, src);
                    double ss, sn;
                    resolve_tractions(f.stress, o, ss, sn);
                    s(3 * obs + 0, src) = ss;
                    s(3 * obs + 1, src) = sn;
                    s(3 * obs + 2, src) = f.pressure;
                }
            }
            if (m >= 2) slab_blocks.push_back(s - prev);
            prev = std::move(s);
        }
    }

    const StressTriple far = far_field_.stress_tensor();

    DiscontinuityHistory hist;
    hist.dt_s = dt_s;
    hist.n_steps = n_steps;
    hist.n_elements = n;
    hist.shear_m.assign(n_steps, std::vector<double>(n, 0.0));
    hist.normal_m.assign(n_steps, std::vector<double>(n, 0.0));
    hist.flux_m_s.assign(n_steps, std::vector<double>(n, 0.0));

    Eigen::VectorXd rhs(3 * n);
    Eigen::VectorXd dq_prev(n);
    for (int h = 1; h <= n_steps; ++h) {
        for (int e = 0; e < n; ++e) {
            double far_s, far_n;
            resolve_tractions(far, elements_[e], far_s, far_n);
            rhs(3 * e + 0) = bc.shear(h - 1, e) - far_s;
            rhs(3 * e + 1) = bc.normal(h - 1, e) - far_n;
            rhs(3 * e + 2) = bc.pressure(h - 1, e) - far_field_.pore_pressure_pa;
        }
        // Convolution with prior slabs.
        for (int m = 1; m <= h - 1; ++m) {
            for (int e = 0; e < n; ++e) dq_prev(e) = hist.flux_m_s[h - m - 1][e];
            rhs.noalias() -= slab_blocks[m - 1] * dq_prev;
        }
        const Eigen::VectorXd d = lu.solve(rhs);
        if (!d.allFinite()) {
            throw std::runtime_error("march: non-finite solution at step " + std::to_string(h));
        }
        for (int e = 0; e < n; ++e) {
            hist.shear_m[h - 1][e] = d(3 * e + 0);
            hist.normal_m[h - 1][e] = d(3 * e + 1);
            hist.flux_m_s[h - 1][e] = d(3 * e + 2);
        }
    }
    return hist;
}

int Simulator::snap_step(const DiscontinuityHistory& history, double t_s) const {
    if (t_s < -1e-9 * history.dt_s) {
        throw std::invalid_argument("field_at: negative time");
    }
    const int h = static_cast<int>(std::llround(t_s / history.dt_s));
    if (h > history.n_steps) {
        throw std::invalid_argument("field_at: time beyond the marched horizon");
    }
    return h;
}

FieldSample Simulator::field_at(const DiscontinuityHistory& history, double x_m, double y_m,
                                double t_s) const {
    const int n = static_cast<int>(elements_.size());
    for (int e = 0; e < n; ++e) {
        const Element& el = elements_[e];
        const double rx = x_m - el.mid_x_m;
        const double ry = y_m - el.mid_y_m;
        const double xi = rx * el.s_x + ry * el.s_y;
        const double eta = rx * el.n_x + ry * el.n_y;
        if (std::fabs(eta) < 1e-9 * el.half_size_m &&
            std::fabs(xi) < el.half_size_m * (1.0 + 1e-9)) {
            throw SingularPointError("field_at: point lies on element " + std::to_string(e));
        }
    }

    const int h = snap_step(history, t_s);
    FieldSample sample;
    sample.x_m = x_m;
    sample.y_m = y_m;
    sample.t_s = t_s;
    const StressTriple far = far_field_.stress_tensor();
    double sxx = far.sxx, syy = far.syy, sxy = far.sxy;
    double p = far_field_.pore_pressure_pa;

    if (h > 0) {
        double el_sxx = 0.0, el_syy = 0.0, el_sxy = 0.0;
        for (int src = 0; src < n; ++src) {
            const ElasticInfluence el = elastic_dd_kernel(elements_[src], x_m, y_m, material_);
            const double ds = history.shear_m[h - 1][src];
            const double dn = history.normal_m[h - 1][src];
            el_sxx += el.per_unit_ds.sxx * ds + el.per_unit_dn.sxx * dn;
            el_syy += el.per_unit_ds.syy * ds + el.per_unit_dn.syy * dn;
            el_sxy += el.per_unit_ds.sxy * ds + el.per_unit_dn.sxy * dn;
        }
        sxx += el_sxx;
        syy += el_syy;
        sxy += el_sxy;
        if (opts_.pressure_coupling) {
            p += undrained_skempton_factor(material_) * (el_sxx + el_syy);
        }

        // Fluid contribution: every past slab through bracketing step responses.
        for (int m = 0; m <= h - 1; ++m) {
            FluidKernelTable newer(elements_, material_, (m + 1) * history.dt_s);
            FluidKernelTable older(elements_, material_, std::max(m, 1) * history.dt_s);
            for (int src = 0; src < n; ++src) {
                const double dq = history.flux_m_s[h - m - 1][src];
                if (dq == 0.0) continue;
                FluidInfluence f = newer.at_point(x_m, y_m, src);
                if (m >= 1) {
                    const FluidInfluence& prev = older.at_point(x_m, y_m, src);
                    f.pressure -= prev.pressure;
                    f.stress.sxx -= prev.stress.sxx;
                    f.stress.syy -= prev.stress.syy;
                    f.stress.sxy -= prev.stress.sxy;
                }
                p += f.pressure * dq;
                sxx += f.stress.sxx * dq;
                syy += f.stress.syy * dq;
                sxy += f.stress.sxy * dq;
            }
        }
    }

    sample.sigma_xx_pa = sxx;
    sample.sigma_yy_pa = syy;
    sample.sigma_xy_pa = sxy;
    sample.pore_pressure_pa = p;
    if (!std::isfinite(sxx) || !std::isfinite(syy) || !std::isfinite(sxy) || !std::isfinite(p)) {
        throw std::runtime_error("field_at: non-finite field value");
    }
    return sample;
}

std::vector<FieldSample> Simulator::depletion_profile(
    const DiscontinuityHistory& history, const std::vector<std::pair<double, double>>& line,
    double t_s) const {
    std::vector<FieldSample> out;
    out.reserve(line.size());
    for (const auto& [x, y] : line) {
        out.push_back(field_at(history, x, y, t_s));
    }
    return out;
}

}  // namespace porosol
