#ifndef POROSOL_PDDM_HPP
#define POROSOL_PDDM_HPP

#include <Eigen/Dense>
#include <vector>

#include "porosol/fracture.hpp"
#include "porosol/kernels.hpp"
#include "porosol/material.hpp"

namespace porosol {

/// Far-field total state: principal horizontal stresses aligned with the
/// coordinate axes (maximum along +y, minimum along +x, matching the
/// parallel-pair preset whose fracture traces run along y) and reservoir
/// pore pressure. Stored as compressive magnitudes.
struct FarFieldState {
    double sigma_max_pa = 0.0;  // sigma_H, acts along y
    double sigma_min_pa = 0.0;  // sigma_h, acts along x
    double pore_pressure_pa = 0.0;

    /// Throws std::invalid_argument unless sigma_H >= sigma_h and p_r < sigma_h.
    void require_valid() const;

    /// Tension-positive far-field stress tensor.
    StressTriple stress_tensor() const { return {-sigma_min_pa, -sigma_max_pa, 0.0}; }
};

/// Prescribed total values on the fracture surface, per step and element.
/// `shear_pa`/`normal_pa` are tension-positive tractions on the faces,
/// `pressure_pa` is the fluid pressure inside the fracture.
struct BoundaryCondition {
    int n_steps = 0;
    int n_elements = 0;
    std::vector<double> shear_pa;     // [step * n_elements + element]
    std::vector<double> normal_pa;
    std::vector<double> pressure_pa;

    double shear(int step, int e) const { return shear_pa[step * n_elements + e]; }
    double normal(int step, int e) const { return normal_pa[step * n_elements + e]; }
    double pressure(int step, int e) const { return pressure_pa[step * n_elements + e]; }

    /// Constant-pressure production in total-stress loading mode: zero
    /// shear, total normal traction -p_f (faces carried by the fluid alone),
    /// fluid pressure p_f, for every step. The resulting net face load
    /// sigma_h - p_f drives a large elastic closure alongside the drawdown.
    static BoundaryCondition constant_pressure_production(int n_steps, int n_elements,
                                                          double production_pressure_pa);

    /// Constant-pressure production of a propped fracture: the mechanical
    /// face tractions stay at the resolved far-field values (the prop
    /// carries the load change) and only the fluid pressure moves to p_f.
    /// With p_f equal to the reservoir pressure this is the equilibrium
    /// condition and nothing evolves.
    static BoundaryCondition pressure_drawdown(int n_steps, const std::vector<Element>& elements,
                                               double production_pressure_pa,
                                               const FarFieldState& far_field);
};

/// Per-slab solution of the marching scheme. Values are the piecewise-
/// constant discontinuities during each slab; slab h spans
/// ((h-1) dt, h dt]. Opening corresponds to D_n < 0.
struct DiscontinuityHistory {
    double dt_s = 0.0;
    int n_steps = 0;
    int n_elements = 0;
    // [step][element]
    std::vector<std::vector<double>> shear_m;
    std::vector<std::vector<double>> normal_m;
    std::vector<std::vector<double>> flux_m_s;
};

/// Sampled total field at a point: tension-positive stresses,
/// compression-positive pore pressure.
struct FieldSample {
    double x_m = 0.0;
    double y_m = 0.0;
    double t_s = 0.0;
    double pore_pressure_pa = 0.0;
    double sigma_xx_pa = 0.0;
    double sigma_yy_pa = 0.0;
    double sigma_xy_pa = 0.0;
};

struct KernelOptions {
    /// Pore-pressure coupling of D_s/D_n (the P_s, P_n influence functions).
    /// Off by default: pressure is driven by D_q only and the undrained
    /// Skempton closure is not added to the pressure rows.
    bool pressure_coupling = false;
};

/// Coefficient blocks of the discretized integral equations for one time lag.
/// Rows per observing element: [shear; normal; pressure]; columns per source
/// element: [D_s; D_n; D_q], so the matrix is 3N x 3N. Lag 0 is the
/// current-step matrix; lag m >= 1 holds the history influence of a unit
/// discontinuity active during the slab m steps back.
Eigen::MatrixXd assemble_step(const std::vector<Element>& elements, const PoroelasticMaterial& m,
                              double dt_s, int lag, const KernelOptions& opts = {});

/// Plane-strain poroelastic displacement-discontinuity simulator.
/// A Simulator instance is an isolated value: independent instances may run
/// concurrently; the time march itself is sequential by construction.
class Simulator {
public:
    Simulator(const FractureSystem& system, const PoroelasticMaterial& material,
              const FarFieldState& far_field, const KernelOptions& opts = {});

    const std::vector<Element>& elements() const { return elements_; }
    const PoroelasticMaterial& material() const { return material_; }
    const FarFieldState& far_field() const { return far_field_; }

    /// Marches the 3N system over n_steps uniform slabs of length dt.
    /// Each step solves for the slab values of (D_s, D_n, D_q) given the
    /// prescribed boundary condition minus the convolution of previous slabs
    /// with the history blocks. Throws std::runtime_error with the step index
    /// on solver failure or non-finite values.
    DiscontinuityHistory march(const BoundaryCondition& bc, double dt_s, int n_steps) const;

    /// Superposes the far field and every discontinuity contribution up to
    /// time t (snapped to the nearest slab boundary). Throws
    /// SingularPointError when the point lies on an element.
    FieldSample field_at(const DiscontinuityHistory& history, double x_m, double y_m,
                         double t_s) const;

    std::vector<FieldSample> depletion_profile(const DiscontinuityHistory& history,
                                               const std::vector<std::pair<double, double>>& line,
                                               double t_s) const;

private:
    std::vector<Element> elements_;
    PoroelasticMaterial material_;
    FarFieldState far_field_;
    KernelOptions opts_;

    int snap_step(const DiscontinuityHistory& history, double t_s) const;
};

}  // namespace porosol

#endif
