#pragma once

#include <vector>

#include "ncflow/flow.hpp"
#include "ncflow/geometry.hpp"

// Lagrangian marker-point solver for X_t = (λ − κ⁻ⁿ) N_in. It works on the polygon
// directly and shares nothing with the angular solver beyond the configuration type.

namespace ncflow {

inline constexpr int kMinMarkers = 64;

struct MarkerCurve {
  std::vector<Vec2> points;  // counter-clockwise
  double t = 0.0;
};

struct MarkerGeometry {
  std::vector<double> kappa;
  std::vector<Vec2> inward_normal;
};

/// Circumcircle curvature of (X_{i−1}, X_i, X_{i+1}) and the unit normal obtained by
/// rotating X_{i+1} − X_{i−1} a quarter turn counter-clockwise.
/// Throws InvalidSize below kMinMarkers points and DegenerateTriangle for a collinear triple.
MarkerGeometry marker_curvature_normal(const MarkerCurve& curve);

/// Explicit Euler limit cfl · Δs_min² / (2n max ρ^{n+1}).
double marker_stable_dt(const MarkerCurve& curve, const FlowConfig& config);

/// One Euler step followed by redistribution to uniform arc length.
///
/// Length and area are taken along the circumcircle arcs between markers (chord plus
/// circular segment), which makes a regular polygon inscribed in a circle an exact
/// equilibrium. Throws NonconvexDetected when a curvature is not positive and
/// NumericalFailure when the spacing guard [0.2, 5] × mean or finiteness is violated.
MarkerCurve marker_step(const MarkerCurve& curve, const FlowConfig& config, double dt);

/// Steps with marker_stable_dt until t_end, landing exactly on it.
MarkerCurve marker_evolve(MarkerCurve curve, const FlowConfig& config, double t_end);

/// M markers equally spaced in arc length on x²/a² + y²/b² = 1, starting at (a, 0).
MarkerCurve ellipse_markers(double a, double b, int m);
MarkerCurve circle_markers(double r, Vec2 center, int m);

/// Area centroid of a closed polygon.
Vec2 polygon_centroid(const std::vector<Vec2>& points);

/// Symmetric point-to-polygon Hausdorff distance after moving both centroids to the origin.
double compare(const CurvePoints& theta_curve, const MarkerCurve& marker_curve);

}  // namespace ncflow
