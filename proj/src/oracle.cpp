#include "ncflow/oracle.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "ncflow/error.hpp"

namespace ncflow {
namespace {

constexpr double kPi = std::numbers::pi;

std::size_t next(std::size_t i, std::size_t m) { return i + 1 == m ? 0 : i + 1; }
std::size_t prev(std::size_t i, std::size_t m) { return i == 0 ? m - 1 : i - 1; }

// Cyclic tridiagonal solve (Sherman–Morrison on top of the Thomas algorithm) for the
// periodic spline system; `sub`, `diag`, `sup` are the three bands with wrap-around
// entries sub[0] and sup[m-1]. Solves in place for two right-hand sides.
void solve_cyclic(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                  std::vector<double>& rx, std::vector<double>& ry) {
  const std::size_t m = diag.size();
  const double gamma = -diag[0];
  const double alpha = sup[m - 1];
  const double beta = sub[0];
  diag[0] -= gamma;
  diag[m - 1] -= alpha * beta / gamma;

  std::vector<double> u(m, 0.0);
  u[0] = gamma;
  u[m - 1] = alpha;

  std::vector<double> c(m);
  c[0] = sup[0] / diag[0];
  for (std::size_t i = 1; i < m; ++i) {
    const double denom = diag[i] - sub[i] * c[i - 1];
    c[i] = sup[i] / denom;
    diag[i] = denom;
  }
  auto thomas = [&](std::vector<double>& r) {
    r[0] /= diag[0];
    for (std::size_t i = 1; i < m; ++i) r[i] = (r[i] - sub[i] * r[i - 1]) / diag[i];
    for (std::size_t i = m - 1; i-- > 0;) r[i] -= c[i] * r[i + 1];
  };
  thomas(u);
  thomas(rx);
  thomas(ry);
  const double vu = u[0] + beta / gamma * u[m - 1];
  const double fx = (rx[0] + beta / gamma * rx[m - 1]) / (1.0 + vu);
  const double fy = (ry[0] + beta / gamma * ry[m - 1]) / (1.0 + vu);
  for (std::size_t i = 0; i < m; ++i) {
    rx[i] -= fx * u[i];
    ry[i] -= fy * u[i];
  }
}

// Periodic cubic spline through the polygon in cumulative chord length, resampled at
// equal parameter steps starting from the first marker.
std::vector<Vec2> redistribute(const std::vector<Vec2>& pts) {
  const std::size_t m = pts.size();
  std::vector<double> h(m), s(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    h[i] = norm(pts[next(i, m)] - pts[i]);
    s[i + 1] = s[i] + h[i];
  }
  std::vector<double> sub(m), diag(m), sup(m), rx(m), ry(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t ip = prev(i, m), in = next(i, m);
    sub[i] = h[ip];
    diag[i] = 2.0 * (h[ip] + h[i]);
    sup[i] = h[i];
    rx[i] = 6.0 * ((pts[in].x - pts[i].x) / h[i] - (pts[i].x - pts[ip].x) / h[ip]);
    ry[i] = 6.0 * ((pts[in].y - pts[i].y) / h[i] - (pts[i].y - pts[ip].y) / h[ip]);
  }
  solve_cyclic(std::move(sub), std::move(diag), std::move(sup), rx, ry);

  const double total = s[m];
  std::vector<Vec2> out(m);
  std::size_t j = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double tau = total * static_cast<double>(k) / static_cast<double>(m);
    while (j + 1 < m && s[j + 1] <= tau) ++j;
    const std::size_t jn = next(j, m);
    const double hj = h[j];
    const double a = s[j + 1] - tau;
    const double b = tau - s[j];
    auto eval = [&](double yj, double yn, double mj, double mn) {
      return mj * a * a * a / (6.0 * hj) + mn * b * b * b / (6.0 * hj) +
             (yj / hj - mj * hj / 6.0) * a + (yn / hj - mn * hj / 6.0) * b;
    };
    out[k] = {eval(pts[j].x, pts[jn].x, rx[j], rx[jn]), eval(pts[j].y, pts[jn].y, ry[j], ry[jn])};
  }
  return out;
}

struct ArcGeometry {
  double length = 0.0;
  double area = 0.0;
  std::vector<double> ds;  // arc length attributed to each marker
};

// Chords are replaced by circular arcs with the mean curvature of their endpoints.
ArcGeometry arc_geometry(const std::vector<Vec2>& pts, const std::vector<double>& kappa) {
  const std::size_t m = pts.size();
  ArcGeometry g;
  g.ds.assign(m, 0.0);
  double shoelace = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t in = next(i, m);
    shoelace += cross(pts[i], pts[in]);
    const double chord = norm(pts[in] - pts[i]);
    const double k = 0.5 * (kappa[i] + kappa[in]);
    const double phi = 2.0 * std::asin(std::min(1.0, 0.5 * chord * k));
    const double arc = phi / k;
    g.length += arc;
    g.area += (phi - std::sin(phi)) / (2.0 * k * k);
    g.ds[i] += 0.5 * arc;
    g.ds[in] += 0.5 * arc;
  }
  g.area += 0.5 * shoelace;
  return g;
}

void check_markers(const MarkerCurve& curve) {
  if (curve.points.size() < static_cast<std::size_t>(kMinMarkers)) {
    throw Error(ErrorKind::InvalidSize, "marker curve needs at least " +
                                            std::to_string(kMinMarkers) + " points, got " +
                                            std::to_string(curve.points.size()));
  }
}

}  // namespace

MarkerGeometry marker_curvature_normal(const MarkerCurve& curve) {
  check_markers(curve);
  const auto& x = curve.points;
  const std::size_t m = x.size();
  MarkerGeometry g;
  g.kappa.resize(m);
  g.inward_normal.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 a = x[prev(i, m)], b = x[i], c = x[next(i, m)];
    const double ab = norm(b - a), bc = norm(c - b), ca = norm(a - c);
    const double twice_area = cross(b - a, c - b);
    if (std::abs(twice_area) <= 1e-14 * ab * bc) {
      throw Error(ErrorKind::DegenerateTriangle,
                  "collinear markers around index " + std::to_string(i));
    }
    g.kappa[i] = 2.0 * twice_area / (ab * bc * ca);
    const Vec2 t = c - a;
    g.inward_normal[i] = (1.0 / norm(t)) * Vec2{-t.y, t.x};
  }
  return g;
}

double marker_stable_dt(const MarkerCurve& curve, const FlowConfig& config) {
  const auto g = marker_curvature_normal(curve);
  const std::size_t m = curve.points.size();
  double ds_min = INFINITY, rho_max = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    ds_min = std::min(ds_min, norm(curve.points[next(i, m)] - curve.points[i]));
    rho_max = std::max(rho_max, 1.0 / g.kappa[i]);
  }
  return config.cfl_safety * ds_min * ds_min /
         (2.0 * config.n * std::pow(rho_max, config.n + 1.0));
}

MarkerCurve marker_step(const MarkerCurve& curve, const FlowConfig& config, double dt) {
  MarkerGeometry g;
  try {
    g = marker_curvature_normal(curve);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateTriangle) throw;
    throw Error(ErrorKind::NonconvexDetected, std::string("zero curvature: ") + e.what());
  }
  const std::size_t m = curve.points.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (!(g.kappa[i] > 0.0) || !std::isfinite(g.kappa[i])) {
      throw Error(ErrorKind::NonconvexDetected,
                  "marker curvature " + std::to_string(g.kappa[i]) + " at index " +
                      std::to_string(i) + ", t = " + std::to_string(curve.t));
    }
  }

  const double n = config.n;
  std::vector<double> speed(m);
  for (std::size_t i = 0; i < m; ++i) speed[i] = std::pow(g.kappa[i], -n);
  const ArcGeometry arc = arc_geometry(curve.points, g.kappa);
  const double len = arc.length;
  double lambda = 0.0;
  if (config.variant == FlowVariant::Flow1) {
    double integral = 0.0;  // ∮κ⁻ⁿ ds
    for (std::size_t i = 0; i < m; ++i) integral += speed[i] * arc.ds[i];
    lambda = len * integral / (2.0 * len * len - 4.0 * kPi * arc.area);
  } else {
    double integral = 0.0;  // ∮κ¹⁻ⁿ ds
    for (std::size_t i = 0; i < m; ++i) integral += speed[i] * g.kappa[i] * arc.ds[i];
    lambda = (len * len - 2.0 * kPi * arc.area) / (kPi * len * len) * integral;
  }

  std::vector<Vec2> moved(m);
  for (std::size_t i = 0; i < m; ++i) {
    moved[i] = curve.points[i] + (dt * (lambda - speed[i])) * g.inward_normal[i];
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) total += norm(moved[next(i, m)] - moved[i]);
  const double mean = total / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double e = norm(moved[next(i, m)] - moved[i]);
    if (!std::isfinite(e) || e < 0.2 * mean || e > 5.0 * mean) {
      throw Error(ErrorKind::NumericalFailure,
                  "marker spacing " + std::to_string(e) + " outside [0.2, 5] x mean " +
                      std::to_string(mean) + " at t = " + std::to_string(curve.t + dt));
    }
  }
  return {redistribute(moved), curve.t + dt};
}

MarkerCurve marker_evolve(MarkerCurve curve, const FlowConfig& config, double t_end) {
  while (curve.t < t_end) {
    double dt = marker_stable_dt(curve, config);
    const bool last = curve.t + dt >= t_end * (1.0 - 1e-14);
    if (last) dt = t_end - curve.t;
    curve = marker_step(curve, config, dt);
    if (last) curve.t = t_end;
  }
  return curve;
}

MarkerCurve ellipse_markers(double a, double b, int m) {
  if (m < kMinMarkers) {
    throw Error(ErrorKind::InvalidSize, "marker curve needs at least " +
                                            std::to_string(kMinMarkers) + " points");
  }
  using boost::math::quadrature::gauss;
  auto speed = [=](double phi) { return std::hypot(a * std::sin(phi), b * std::cos(phi)); };
  auto arc = [&](double lo, double hi) { return gauss<double, 30>::integrate(speed, lo, hi); };

  // The quarter-ellipse integrals are summed panel by panel for full accuracy.
  constexpr int panels = 64;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) total += arc(2.0 * kPi * k / panels, 2.0 * kPi * (k + 1) / panels);

  MarkerCurve curve;
  curve.points.resize(static_cast<std::size_t>(m));
  double phi = 0.0, s = 0.0;
  for (int k = 0; k < m; ++k) {
    const double target = total * k / m;
    double guess = phi + (target - s) / speed(phi);
    for (int it = 0; it < 50; ++it) {
      const double f = s + arc(phi, guess) - target;
      const double step = f / speed(guess);
      guess -= step;
      if (std::abs(step) < 1e-15) break;
    }
    s += arc(phi, guess);
    phi = guess;
    curve.points[static_cast<std::size_t>(k)] = {a * std::cos(phi), b * std::sin(phi)};
  }
  return curve;
}

MarkerCurve circle_markers(double r, Vec2 center, int m) {
  if (m < kMinMarkers) {
    throw Error(ErrorKind::InvalidSize, "marker curve needs at least " +
                                            std::to_string(kMinMarkers) + " points");
  }
  MarkerCurve curve;
  curve.points.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double phi = 2.0 * kPi * k / m;
    curve.points[static_cast<std::size_t>(k)] = center + Vec2{r * std::cos(phi), r * std::sin(phi)};
  }
  return curve;
}

Vec2 polygon_centroid(const std::vector<Vec2>& points) {
  const std::size_t m = points.size();
  double twice_area = 0.0;
  Vec2 acc;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 p = points[i], q = points[next(i, m)];
    const double w = cross(p, q);
    twice_area += w;
    acc = acc + w * (p + q);
  }
  return (1.0 / (3.0 * twice_area)) * acc;
}

namespace {

double point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (a + t * d));
}

double directed(const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
  double worst = 0.0;
  const std::size_t m = to.size();
  for (const Vec2& p : from) {
    double best = INFINITY;
    for (std::size_t j = 0; j < m; ++j) best = std::min(best, point_segment(p, to[j], to[next(j, m)]));
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<Vec2> centred(const std::vector<Vec2>& pts) {
  const Vec2 c = polygon_centroid(pts);
  std::vector<Vec2> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = pts[i] - c;
  return out;
}

}  // namespace

double compare(const CurvePoints& theta_curve, const MarkerCurve& marker_curve) {
  const auto a = centred(theta_curve.points);
  const auto b = centred(marker_curve.points);
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace ncflow
