#ifndef POROSOL_FRACTURE_HPP
#define POROSOL_FRACTURE_HPP

#include <vector>

namespace porosol {

/// One straight fracture trace in the horizontal plane.
/// `orientation_rad` is the angle of the fracture line measured from +x.
struct FracturePlan {
    double center_x_m = 0.0;
    double center_y_m = 0.0;
    double half_length_m = 0.0;
    double orientation_rad = 0.0;
};

/// Fracture set plus the discretization control.
///
/// The parallel-pair preset places two equal fractures orthogonal to a well
/// lying along +x: centers at (-b/2, 0) and (+b/2, 0), traces along y.
struct FractureSystem {
    std::vector<FracturePlan> fractures;
    int elements_per_fracture = 30;

    static FractureSystem parallel_pair(double half_length_m, double spacing_m,
                                        int elements_per_fracture);

    /// Center distance of the first two fractures (the spacing b of the
    /// parallel-pair preset).
    double spacing_m() const;
};

/// Constant displacement-discontinuity element with its local (s, n) frame.
struct Element {
    double mid_x_m = 0.0;
    double mid_y_m = 0.0;
    double half_size_m = 0.0;
    double s_x = 1.0, s_y = 0.0;  // tangent unit vector
    double n_x = 0.0, n_y = 1.0;  // normal unit vector (s rotated +90 deg)
    int fracture_index = 0;
};

/// Tiles every fracture into equal-length elements. Throws
/// std::invalid_argument on bad inputs or intersecting fractures.
std::vector<Element> discretize(const FractureSystem& system);

}  // namespace porosol

#endif
