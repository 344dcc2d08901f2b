#include "porosol/fracture.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace porosol {

FractureSystem FractureSystem::parallel_pair(double half_length_m, double spacing_m,
                                             int elements_per_fracture) {
    FractureSystem sys;
    sys.elements_per_fracture = elements_per_fracture;
    const double half_pi = std::acos(-1.0) / 2.0;
    sys.fractures.push_back({-0.5 * spacing_m, 0.0, half_length_m, half_pi});
    sys.fractures.push_back({+0.5 * spacing_m, 0.0, half_length_m, half_pi});
    return sys;
}

double FractureSystem::spacing_m() const {
    if (fractures.size() < 2) return 0.0;
    const auto& a = fractures[0];
    const auto& b = fractures[1];
    return std::hypot(b.center_x_m - a.center_x_m, b.center_y_m - a.center_y_m);
}

namespace {

struct Segment {
    double ax, ay, bx, by;
};

Segment fracture_segment(const FracturePlan& f) {
    const double dx = std::cos(f.orientation_rad);
    const double dy = std::sin(f.orientation_rad);
    return {f.center_x_m - f.half_length_m * dx, f.center_y_m - f.half_length_m * dy,
            f.center_x_m + f.half_length_m * dx, f.center_y_m + f.half_length_m * dy};
}

double cross(double ox, double oy, double ax, double ay, double bx, double by) {
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

bool segments_intersect(const Segment& s, const Segment& t) {
    const double d1 = cross(t.ax, t.ay, t.bx, t.by, s.ax, s.ay);
    const double d2 = cross(t.ax, t.ay, t.bx, t.by, s.bx, s.by);
    const double d3 = cross(s.ax, s.ay, s.bx, s.by, t.ax, t.ay);
    const double d4 = cross(s.ax, s.ay, s.bx, s.by, t.bx, t.by);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    // Collinear overlap: project onto the dominant axis.
    auto on_segment = [](const Segment& seg, double px, double py) {
        return px >= std::min(seg.ax, seg.bx) - 1e-12 && px <= std::max(seg.ax, seg.bx) + 1e-12 &&
               py >= std::min(seg.ay, seg.by) - 1e-12 && py <= std::max(seg.ay, seg.by) + 1e-12;
    };
    if (d1 == 0 && on_segment(t, s.ax, s.ay)) return true;
    if (d2 == 0 && on_segment(t, s.bx, s.by)) return true;
    if (d3 == 0 && on_segment(s, t.ax, t.ay)) return true;
    if (d4 == 0 && on_segment(s, t.bx, t.by)) return true;
    return false;
}

}  // namespace

std::vector<Element> discretize(const FractureSystem& system) {
    if (system.fractures.empty()) {
        throw std::invalid_argument("discretize: no fractures");
    }
    if (system.elements_per_fracture < 4) {
        throw std::invalid_argument("discretize: elements_per_fracture must be >= 4");
    }
    for (std::size_t i = 0; i < system.fractures.size(); ++i) {
        if (!(system.fractures[i].half_length_m > 0.0)) {
            throw std::invalid_argument("discretize: fracture " + std::to_string(i) +
                                        " has non-positive half-length");
        }
    }
    for (std::size_t i = 0; i < system.fractures.size(); ++i) {
        for (std::size_t j = i + 1; j < system.fractures.size(); ++j) {
            if (segments_intersect(fracture_segment(system.fractures[i]),
                                   fracture_segment(system.fractures[j]))) {
                throw std::invalid_argument("discretize: fractures " + std::to_string(i) + " and " +
                                            std::to_string(j) + " overlap");
            }
        }
    }

    std::vector<Element> elements;
    elements.reserve(system.fractures.size() * system.elements_per_fracture);
    for (std::size_t fi = 0; fi < system.fractures.size(); ++fi) {
        const auto& f = system.fractures[fi];
        const int n = system.elements_per_fracture;
        double sx = std::cos(f.orientation_rad);
        double sy = std::sin(f.orientation_rad);
        // snap axis-aligned frames so the presets resolve far-field
        // tractions exactly
        if (std::fabs(sx) < 1e-15) sx = 0.0;
        if (std::fabs(sy) < 1e-15) sy = 0.0;
        const double nrm = std::hypot(sx, sy);
        sx /= nrm;
        sy /= nrm;
        const double h = f.half_length_m / n;
        for (int k = 0; k < n; ++k) {
            // midpoint of the k-th tile of [-a, a] along the trace
            const double u = -f.half_length_m + (2 * k + 1) * h;
            Element e;
            e.mid_x_m = f.center_x_m + u * sx;
            e.mid_y_m = f.center_y_m + u * sy;
            e.half_size_m = h;
            e.s_x = sx;
            e.s_y = sy;
            e.n_x = -sy;
            e.n_y = sx;
            e.fracture_index = static_cast<int>(fi);
            elements.push_back(e);
        }
    }
    return elements;
}

}  // namespace porosol
