#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "ncflow/spectral.hpp"

namespace ncflow {

/// Closure defect allowed on a radius-of-curvature profile, relative to its length.
inline constexpr double kClosureTolerance = 1e-8;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Uniform periodic grid θ_i = 2πi/N over the outward-normal angle.
///
/// Copies share the precomputed trigonometric tables and FFT plans.
class AngularGrid {
 public:
  /// Throws ErrorKind::InvalidSize unless N ≥ 16 and N is even.
  static AngularGrid build(int n);

  int size() const noexcept { return n_; }
  double spacing() const noexcept { return spacing_; }
  double node(int i) const { return shared_->nodes[static_cast<std::size_t>(i)]; }

  std::span<const double> nodes() const { return shared_->nodes; }
  std::span<const double> cos_table() const { return shared_->cos; }
  std::span<const double> sin_table() const { return shared_->sin; }
  const SpectralPlans& spectral() const { return *shared_->plans; }

  friend bool operator==(const AngularGrid& a, const AngularGrid& b) { return a.n_ == b.n_; }

 private:
  struct Shared {
    std::vector<double> nodes, cos, sin;
    std::unique_ptr<SpectralPlans> plans;
  };

  AngularGrid(int n, std::shared_ptr<const Shared> shared);

  int n_;
  double spacing_;
  std::shared_ptr<const Shared> shared_;
};

/// Radius of curvature ρ(θ_i) > 0 of a closed convex curve, known up to translation.
class RadiusProfile {
 public:
  /// Throws NonconvexInput if any ρ_i ≤ 0 (or is not finite) and ClosureViolation if the
  /// first Fourier mode exceeds kClosureTolerance · L.
  RadiusProfile(AngularGrid grid, std::vector<double> rho);

  const AngularGrid& grid() const noexcept { return grid_; }
  std::span<const double> rho() const noexcept { return rho_; }
  double operator[](int i) const { return rho_[static_cast<std::size_t>(i)]; }

 private:
  AngularGrid grid_;
  std::vector<double> rho_;
};

/// Sampled planar curve X(θ_i), positively oriented.
struct CurvePoints {
  AngularGrid grid;
  std::vector<Vec2> points;
  /// ‖X(2π) − X(0)‖ of the integrated curve; zero for an exactly closed profile.
  double closure_gap = 0.0;
};

struct GeometricSummary {
  double length = 0.0;
  double area = 0.0;
  double iso_difference = 0.0;
  double iso_ratio = 1.0;
  double kappa_min = 0.0;
  double kappa_max = 0.0;
};

/// ∮ f^m dθ by the periodic trapezoid rule.
double moment(const AngularGrid& grid, std::span<const double> f, double m);
double moment(const RadiusProfile& profile, double m);

inline double length(const RadiusProfile& profile) { return moment(profile, 1.0); }

/// (∮ρ cosθ dθ, ∮ρ sinθ dθ).
Vec2 closure_defect(const AngularGrid& grid, std::span<const double> rho);
Vec2 closure_defect(const RadiusProfile& profile);

// Isoperimetric difference L² − 4πA from the Fourier modes of ρ:
//   L² − 4πA = 4π² Σ_{|k|≥2} |ρ̂_k|² / (k² − 1),
// evaluated without cancellation so that it stays accurate to round-off near circles.
double iso_difference(const AngularGrid& grid, std::span<const double> rho);
double enclosed_area(const AngularGrid& grid, std::span<const double> rho);
inline double enclosed_area(const RadiusProfile& p) { return enclosed_area(p.grid(), p.rho()); }

GeometricSummary summarize(const RadiusProfile& profile);

/// Integrates dX/dθ = ρ(θ)(−sinθ, cosθ) from X(0) = base. The integral is taken
/// term-by-term on the trigonometric interpolant of ρ, so it is exact for band-limited
/// profiles. Throws ClosureViolation for profiles that do not close.
CurvePoints reconstruct_curve(const RadiusProfile& profile, Vec2 base);

/// Reconstruction translated so that its Steiner point is `steiner`.
CurvePoints reconstruct_with_steiner(const RadiusProfile& profile, Vec2 steiner);

/// Enclosed area of a reconstructed curve: ½∮(x y' − y x') dθ with spectral derivatives.
double area(const CurvePoints& curve);

/// s(θ_i) = ⟨X_i, (cosθ_i, sinθ_i)⟩, relative to the coordinate origin.
std::vector<double> support_function(const CurvePoints& curve);

/// (1/π)∮ s(θ)(cosθ, sinθ) dθ; the centre of a circle, and translation-covariant in general.
Vec2 steiner_point(const CurvePoints& curve);

namespace family {
struct Circle {
  double r = 1.0;
};
struct Ellipse {
  double a = 1.0;
  double b = 1.0;
};
struct Cosine {
  double r0 = 1.0;
  double eps = 0.0;
  int m = 2;
};
/// ρ = Σ_k cos_coeffs[k] cos(kθ) + sin_coeffs[k] sin(kθ); mode 1 must be absent.
struct Fourier {
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};
}  // namespace family

using ProfileFamily = std::variant<family::Circle, family::Ellipse, family::Cosine, family::Fourier>;

/// Samples a closed-form family on the grid. Throws NonconvexInput when ρ ≤ 0 at some node,
/// ClosureViolation when the family carries a first Fourier mode.
RadiusProfile initial_profile(const ProfileFamily& family, const AngularGrid& grid);

}  // namespace ncflow
