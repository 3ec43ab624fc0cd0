#pragma once

#include "wcf/assignments.hpp"
#include "wcf/limit_matrix.hpp"

#include <optional>

namespace wcf {

/// Where the eps-slots go. pad_h_infinite appends a 1/eps slot to H,
/// pad_g_zero appends an eps slot to G, pad_both does both.
enum class Shape { balanced, pad_h_infinite, pad_g_zero, pad_both };

const char* to_string(Shape s);
Shape shape_from_string(const std::string& s);

/// (H, G, w, v, H_pinv, G_pinv, u_h, u_g) in local coordinates of the current rank.
/// frame_h / frame_g embed the local coordinates into the starting space.
struct ExtendedMatrixInstance {
    LimitSymMatrix H, G, H_pinv, G_pinv;
    Vec w, v;
    std::optional<Vec> u_h, u_g;
    Mat frame_h, frame_g;
    bool flipped = false;
    double vector_power = 0.0;
    Shape shape = Shape::balanced;

    int rank() const { return static_cast<int>(w.size()); }
    bool completely_specified() const { return u_h.has_value() && u_g.has_value(); }
    Vec global_h(const Vec& x) const { return frame_h * x; }
    Vec global_g(const Vec& x) const { return frame_g * x; }
};

/// Diagonal instance H = diag(x_h), G = diag(x_g), w = H^b sqrt(p_h), v = G^b sqrt(p_g),
/// with eps-slots per shape and both positive inverses filled.
ExtendedMatrixInstance build_instance(const Assignment& h, const Assignment& g, Shape shape,
                                      double b = 0.0);

/// Normal initialisation: u_h = normal(H, w), u_g = normal(G, v).
ExtendedMatrixInstance normal_init(const ExtendedMatrixInstance& inst);

/// Weingarten iteration; drops one rank on each side and blanks the normals.
ExtendedMatrixInstance weingarten_iterate(const ExtendedMatrixInstance& inst);

/// Wiggle-w initialisation: u_h = cos(t) normal(H, w) + sin(t) t_h with t_h a divergent
/// direction of H, cos(t) = <v|u(G,v)> / <w|u(H,w)>.
ExtendedMatrixInstance wiggle_normal_init_w(const ExtendedMatrixInstance& inst);
/// Mirror of wiggle_normal_init_w with the roles of (H, w) and (G, v) swapped.
ExtendedMatrixInstance wiggle_normal_init_v(const ExtendedMatrixInstance& inst);

/// Wiggle-w iteration: the H side is expanded around the point whose normal is u_h,
/// w' = e(u_h, w); the G side iterates as in weingarten_iterate.
ExtendedMatrixInstance wiggle_iterate_w(const ExtendedMatrixInstance& inst);
ExtendedMatrixInstance wiggle_iterate_v(const ExtendedMatrixInstance& inst);

/// Swaps each matrix with its positive inverse.
ExtendedMatrixInstance flip(const ExtendedMatrixInstance& inst);

/// <w|H|w> - <v|G|v>; +/-infinity when a vector overlaps a divergent direction.
double contact_gap(const ExtendedMatrixInstance& inst);
/// <w|H^2|w> - <v|G^2|v>, same conventions.
double component_gap(const ExtendedMatrixInstance& inst);
/// Magnitudes used to judge the two gaps.
double contact_scale(const ExtendedMatrixInstance& inst);
double component_scale(const ExtendedMatrixInstance& inst);

/// First divergent direction of M orthogonal to x, if any.
std::optional<Vec> wiggle_room(const LimitSymMatrix& M, const Vec& x, double tol = 1e-10);

}  // namespace wcf
