#pragma once

#include <complex>
#include <span>

struct fftw_plan_s;

namespace ncflow {

/// Discrete Fourier transforms on a fixed periodic node count, backed by FFTW.
///
/// Coefficients use the normalisation c_k = (1/N) Σ_j f_j e^{-ikθ_j}, so that
/// f_j = Σ_k c_k e^{ikθ_j}. Plans are created and destroyed under a process-wide
/// lock; executing them is safe from any number of threads.
class SpectralPlans {
 public:
  explicit SpectralPlans(int n);
  ~SpectralPlans();

  SpectralPlans(const SpectralPlans&) = delete;
  SpectralPlans& operator=(const SpectralPlans&) = delete;

  int size() const noexcept { return n_; }

  /// Real input of length N, output k = 0..N/2 (length N/2 + 1).
  void real_coefficients(std::span<const double> f, std::span<std::complex<double>> out) const;

  /// Complex input of length N, output in FFT order (k = 0..N/2, then negative modes).
  void complex_coefficients(std::span<const std::complex<double>> z,
                            std::span<std::complex<double>> out) const;

  /// Inverse of complex_coefficients: z_j = Σ_k c_k e^{ikθ_j}.
  void complex_synthesis(std::span<const std::complex<double>> c,
                         std::span<std::complex<double>> out) const;

 private:
  int n_;
  fftw_plan_s* r2c_ = nullptr;
  fftw_plan_s* forward_ = nullptr;
  fftw_plan_s* backward_ = nullptr;
};

/// Signed mode index of FFT-ordered slot j on N nodes, in [-N/2 + 1, N/2].
constexpr int signed_mode(int j, int n) { return j <= n / 2 ? j : j - n; }

}  // namespace ncflow
