#ifndef POROSOL_KERNELS_HPP
#define POROSOL_KERNELS_HPP

#include <stdexcept>

#include "porosol/fracture.hpp"
#include "porosol/material.hpp"

namespace porosol {

/// Thrown when an observation point coincides with an element tip (elastic
/// kernels) or lies on an element when that is not allowed (field sampling).
struct SingularPointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Global-frame stress components, tension positive.
struct StressTriple {
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
};

/// Drained elastic influence of unit shear / unit normal displacement
/// discontinuities on a constant element. Sign conventions follow the local
/// frame of the source element: D_n < 0 is an opening, counterclockwise face
/// motion gives D_s > 0.
struct ElasticInfluence {
    StressTriple per_unit_ds;
    StressTriple per_unit_dn;
};

/// Closed-form constant-element kernel, valid anywhere except the element
/// tips (throws SingularPointError within `tip_tolerance` of a tip).
/// Observation on the element segment itself is allowed and yields the
/// classical self-influence at the midpoint.
ElasticInfluence elastic_dd_kernel(const Element& source, double obs_x, double obs_y,
                                   const PoroelasticMaterial& m);

/// Pore pressure and stress induced at the observer by a unit flux
/// discontinuity D_q held constant on the source element over [0, elapsed],
/// evaluated at `elapsed`. Pressure is compression positive, stresses tension
/// positive. The pore-pressure part is the 2-D continuous-source well
/// function integrated over the element; the stress part is the matching
/// poroelastic inclusion field. r -> 0 is integrable and handled by closed
/// forms / graded quadrature.
struct FluidInfluence {
    double pressure = 0.0;  // Pa per unit D_q
    StressTriple stress;
};

FluidInfluence fluid_source_kernel(const Element& source, double obs_x, double obs_y,
                                   const PoroelasticMaterial& m, double elapsed_s);

/// Poroelastic stress coefficient eta = alpha (1-2 nu) / (2 (1-nu)).
double poroelastic_stress_coefficient(const PoroelasticMaterial& m);

/// Resolve a global stress tensor into shear/normal tractions on an
/// element's plane: sigma_s = s.(sigma n), sigma_n = n.(sigma n).
void resolve_tractions(const StressTriple& sigma, const Element& e, double& sigma_s,
                       double& sigma_n);

}  // namespace porosol

#endif
