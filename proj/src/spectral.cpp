#include "ncflow/spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "ncflow/error.hpp"

namespace ncflow {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

fftw_complex* as_fftw(const std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}

}  // namespace

SpectralPlans::SpectralPlans(int n) : n_(n) {
  if (n < 2) throw Error(ErrorKind::InvalidSize, "spectral plans need at least two nodes");
  std::vector<double> real(static_cast<std::size_t>(n));
  std::vector<std::complex<double>> a(static_cast<std::size_t>(n));
  std::vector<std::complex<double>> b(static_cast<std::size_t>(n));
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  r2c_ = fftw_plan_dft_r2c_1d(n, real.data(), as_fftw(a.data()), flags);
  forward_ = fftw_plan_dft_1d(n, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
  backward_ = fftw_plan_dft_1d(n, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
  if (!r2c_ || !forward_ || !backward_) {
    throw Error(ErrorKind::NumericalFailure, "FFTW failed to create a plan");
  }
}

SpectralPlans::~SpectralPlans() {
  std::lock_guard lock(planner_mutex());
  if (r2c_) fftw_destroy_plan(r2c_);
  if (forward_) fftw_destroy_plan(forward_);
  if (backward_) fftw_destroy_plan(backward_);
}

void SpectralPlans::real_coefficients(std::span<const double> f,
                                      std::span<std::complex<double>> out) const {
  fftw_execute_dft_r2c(r2c_, const_cast<double*>(f.data()), as_fftw(out.data()));
  const double scale = 1.0 / n_;
  for (auto& c : out.first(static_cast<std::size_t>(n_ / 2 + 1))) c *= scale;
}

void SpectralPlans::complex_coefficients(std::span<const std::complex<double>> z,
                                         std::span<std::complex<double>> out) const {
  fftw_execute_dft(forward_, as_fftw(z.data()), as_fftw(out.data()));
  const double scale = 1.0 / n_;
  for (auto& c : out.first(static_cast<std::size_t>(n_))) c *= scale;
}

void SpectralPlans::complex_synthesis(std::span<const std::complex<double>> c,
                                      std::span<std::complex<double>> out) const {
  fftw_execute_dft(backward_, as_fftw(c.data()), as_fftw(out.data()));
}

}  // namespace ncflow
