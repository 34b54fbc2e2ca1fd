#include "ncflow/geometry.hpp"

#include <algorithm>
#include <complex>
#include <numbers>
#include <string>

#include "ncflow/error.hpp"

namespace ncflow {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

std::vector<cplx> real_modes(const AngularGrid& grid, std::span<const double> f) {
  std::vector<cplx> c(static_cast<std::size_t>(grid.size() / 2 + 1));
  grid.spectral().real_coefficients(f, c);
  return c;
}

void check_size(const AngularGrid& grid, std::size_t n) {
  if (n != static_cast<std::size_t>(grid.size())) {
    throw Error(ErrorKind::InvalidSize, "sample count " + std::to_string(n) +
                                            " does not match grid size " +
                                            std::to_string(grid.size()));
  }
}

}  // namespace

AngularGrid::AngularGrid(int n, std::shared_ptr<const Shared> shared)
    : n_(n), spacing_(2.0 * kPi / n), shared_(std::move(shared)) {}

AngularGrid AngularGrid::build(int n) {
  if (n < 16 || n % 2 != 0) {
    throw Error(ErrorKind::InvalidSize,
                "grid size must be even and at least 16, got " + std::to_string(n));
  }
  auto shared = std::make_shared<Shared>();
  const double h = 2.0 * kPi / n;
  shared->nodes.resize(static_cast<std::size_t>(n));
  shared->cos.resize(static_cast<std::size_t>(n));
  shared->sin.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double theta = h * i;
    shared->nodes[i] = theta;
    shared->cos[i] = std::cos(theta);
    shared->sin[i] = std::sin(theta);
  }
  shared->plans = std::make_unique<SpectralPlans>(n);
  return AngularGrid(n, std::move(shared));
}

RadiusProfile::RadiusProfile(AngularGrid grid, std::vector<double> rho)
    : grid_(std::move(grid)), rho_(std::move(rho)) {
  check_size(grid_, rho_.size());
  for (std::size_t i = 0; i < rho_.size(); ++i) {
    if (!(rho_[i] > 0.0) || !std::isfinite(rho_[i])) {
      throw Error(ErrorKind::NonconvexInput,
                  "radius of curvature must be positive; rho[" + std::to_string(i) +
                      "] = " + std::to_string(rho_[i]));
    }
  }
  const double len = moment(grid_, rho_, 1.0);
  const double defect = norm(closure_defect(grid_, rho_));
  if (defect > kClosureTolerance * len) {
    throw Error(ErrorKind::ClosureViolation,
                "closure defect " + std::to_string(defect) + " exceeds tolerance for L = " +
                    std::to_string(len));
  }
}

double moment(const AngularGrid& grid, std::span<const double> f, double m) {
  check_size(grid, f.size());
  double sum = 0.0;
  if (m == 1.0) {
    for (double v : f) sum += v;
  } else if (m == 0.0) {
    sum = static_cast<double>(f.size());
  } else {
    for (double v : f) sum += std::pow(v, m);
  }
  return sum * grid.spacing();
}

double moment(const RadiusProfile& profile, double m) {
  return moment(profile.grid(), profile.rho(), m);
}

Vec2 closure_defect(const AngularGrid& grid, std::span<const double> rho) {
  check_size(grid, rho.size());
  const auto c = grid.cos_table();
  const auto s = grid.sin_table();
  Vec2 d;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    d.x += rho[i] * c[i];
    d.y += rho[i] * s[i];
  }
  return grid.spacing() * d;
}

Vec2 closure_defect(const RadiusProfile& profile) {
  return closure_defect(profile.grid(), profile.rho());
}

double iso_difference(const AngularGrid& grid, std::span<const double> rho) {
  check_size(grid, rho.size());
  const int n = grid.size();
  const auto c = real_modes(grid, rho);
  double sum = 0.0;
  for (int k = 2; k < n / 2; ++k) sum += 2.0 * std::norm(c[k]) / (double(k) * k - 1.0);
  // The Nyquist mode is a single real cosine of amplitude c_{N/2}.
  const double kn = n / 2;
  sum += 0.5 * std::norm(c[n / 2]) / (kn * kn - 1.0);
  return 4.0 * kPi * kPi * sum;
}

double enclosed_area(const AngularGrid& grid, std::span<const double> rho) {
  const double len = moment(grid, rho, 1.0);
  return (len * len - iso_difference(grid, rho)) / (4.0 * kPi);
}

GeometricSummary summarize(const RadiusProfile& profile) {
  GeometricSummary g;
  g.length = length(profile);
  g.iso_difference = iso_difference(profile.grid(), profile.rho());
  g.area = (g.length * g.length - g.iso_difference) / (4.0 * kPi);
  g.iso_ratio = g.length * g.length / (4.0 * kPi * g.area);
  const auto [lo, hi] = std::minmax_element(profile.rho().begin(), profile.rho().end());
  g.kappa_min = 1.0 / *hi;
  g.kappa_max = 1.0 / *lo;
  return g;
}

CurvePoints reconstruct_curve(const RadiusProfile& profile, Vec2 base) {
  const AngularGrid& grid = profile.grid();
  const int n = grid.size();
  const double len = length(profile);
  const auto rho_hat = real_modes(grid, profile.rho());

  // Signed coefficients of ρ on k ∈ [-N/2, N/2]; the Nyquist cosine is split evenly.
  auto coeff = [&](int k) -> cplx {
    const int a = std::abs(k);
    cplx c = rho_hat[a];
    if (a == n / 2) c *= 0.5;
    return k < 0 ? std::conj(c) : c;
  };

  // X(θ) − X(0) = i∫₀^θ ρ e^{iφ} dφ = Σ_{k≠-1} ρ̂_k (e^{i(k+1)θ} − 1)/(k+1) + iρ̂_{-1}θ.
  std::vector<cplx> d(static_cast<std::size_t>(n), cplx{0.0, 0.0});
  cplx offset{0.0, 0.0};
  for (int k = -n / 2; k <= n / 2; ++k) {
    const int m = k + 1;
    if (m == 0) continue;
    const cplx dm = coeff(k) / double(m);
    d[static_cast<std::size_t>(((m % n) + n) % n)] += dm;
    offset += dm;
  }
  const cplx drift = cplx{0.0, 1.0} * coeff(-1);
  if (2.0 * kPi * std::abs(drift) > kClosureTolerance * len) {
    throw Error(ErrorKind::ClosureViolation, "profile does not describe a closed curve");
  }

  std::vector<cplx> z(static_cast<std::size_t>(n));
  grid.spectral().complex_synthesis(d, z);

  CurvePoints curve{grid, std::vector<Vec2>(static_cast<std::size_t>(n)),
                    2.0 * kPi * std::abs(drift)};
  for (int j = 0; j < n; ++j) {
    const cplx p = z[j] - offset + drift * grid.node(j);
    curve.points[j] = {base.x + p.real(), base.y + p.imag()};
  }
  return curve;
}

CurvePoints reconstruct_with_steiner(const RadiusProfile& profile, Vec2 steiner) {
  const CurvePoints at_origin = reconstruct_curve(profile, {});
  return reconstruct_curve(profile, steiner - steiner_point(at_origin));
}

double area(const CurvePoints& curve) {
  const int n = curve.grid.size();
  std::vector<cplx> z(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) z[j] = {curve.points[j].x, curve.points[j].y};
  std::vector<cplx> zhat(z.size());
  curve.grid.spectral().complex_coefficients(z, zhat);
  for (int j = 0; j < n; ++j) {
    const int m = signed_mode(j, n);
    zhat[j] *= (m == n / 2) ? cplx{0.0, 0.0} : cplx{0.0, double(m)};
  }
  std::vector<cplx> dz(z.size());
  curve.grid.spectral().complex_synthesis(zhat, dz);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += (std::conj(z[j]) * dz[j]).imag();
  const double a = 0.5 * sum * curve.grid.spacing();
  if (!(a > 0.0)) {
    throw Error(ErrorKind::NumericalFailure,
                "non-positive enclosed area " + std::to_string(a) + " (orientation bug)");
  }
  return a;
}

std::vector<double> support_function(const CurvePoints& curve) {
  const auto c = curve.grid.cos_table();
  const auto s = curve.grid.sin_table();
  std::vector<double> h(curve.points.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = curve.points[i].x * c[i] + curve.points[i].y * s[i];
  }
  return h;
}

Vec2 steiner_point(const CurvePoints& curve) {
  const auto h = support_function(curve);
  return (1.0 / kPi) * closure_defect(curve.grid, h);
}

namespace {

std::vector<double> sample(const family::Circle& f, const AngularGrid& grid) {
  return std::vector<double>(static_cast<std::size_t>(grid.size()), f.r);
}

std::vector<double> sample(const family::Ellipse& f, const AngularGrid& grid) {
  if (!(f.a > 0.0) || !(f.b > 0.0)) {
    throw Error(ErrorKind::NonconvexInput, "ellipse semi-axes must be positive");
  }
  std::vector<double> rho(static_cast<std::size_t>(grid.size()));
  const double a2 = f.a * f.a;
  const double b2 = f.b * f.b;
  for (int i = 0; i < grid.size(); ++i) {
    const double c = grid.cos_table()[i];
    const double s = grid.sin_table()[i];
    rho[i] = a2 * b2 / std::pow(a2 * c * c + b2 * s * s, 1.5);
  }
  return rho;
}

std::vector<double> sample(const family::Cosine& f, const AngularGrid& grid) {
  if (f.m == 1) throw Error(ErrorKind::ClosureViolation, "cosine family with m = 1 does not close");
  if (f.m < 2) throw Error(ErrorKind::ValidationError, "cosine family needs m >= 2");
  std::vector<double> rho(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) rho[i] = f.r0 + f.eps * std::cos(f.m * grid.node(i));
  return rho;
}

std::vector<double> sample(const family::Fourier& f, const AngularGrid& grid) {
  if ((f.cos_coeffs.size() > 1 && f.cos_coeffs[1] != 0.0) ||
      (f.sin_coeffs.size() > 1 && f.sin_coeffs[1] != 0.0)) {
    throw Error(ErrorKind::ClosureViolation, "fourier family must not contain mode 1");
  }
  std::vector<double> rho(static_cast<std::size_t>(grid.size()), 0.0);
  for (int i = 0; i < grid.size(); ++i) {
    const double theta = grid.node(i);
    double v = 0.0;
    for (std::size_t k = 0; k < f.cos_coeffs.size(); ++k) {
      v += f.cos_coeffs[k] * std::cos(double(k) * theta);
    }
    for (std::size_t k = 1; k < f.sin_coeffs.size(); ++k) {
      v += f.sin_coeffs[k] * std::sin(double(k) * theta);
    }
    rho[i] = v;
  }
  return rho;
}

}  // namespace

RadiusProfile initial_profile(const ProfileFamily& family, const AngularGrid& grid) {
  auto rho = std::visit([&](const auto& f) { return sample(f, grid); }, family);
  const double lo = *std::min_element(rho.begin(), rho.end());
  if (!(lo > 0.0)) {
    throw Error(ErrorKind::NonconvexInput,
                "initial radius of curvature reaches " + std::to_string(lo) + " <= 0");
  }
  return RadiusProfile(grid, std::move(rho));
}

}  // namespace ncflow
