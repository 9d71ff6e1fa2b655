#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lacewalk/enumerate.hpp"
#include "lacewalk/field.hpp"
#include "lacewalk/lace_kernels.hpp"
#include "lacewalk/model.hpp"

namespace lacewalk {

/// sum_x f(x) e^{i k.x}. Throws std::invalid_argument if k has the wrong
/// dimension or some |k_i| > pi.
template <class S>
std::complex<double> fourier(const LatticeField<S>& f, std::span<const double> k);

/// -Laplacian of f^ at k = 0 by central second differences with step h on
/// each axis. Only a cross-check for the moment sum_x |x|^2 f(x).
template <class S>
double fd_negative_laplacian(const LatticeField<S>& f, double h = 1e-4);

/// (D^(k) + 2 kappa D(1) sum_i cos k_i) / (1 + 2 d kappa D(1)).
double e_hat(std::span<const double> k, const StepDistribution& D, double kappa);
/// As above with kappa = 0 for the disabled potential.
double e_hat(std::span<const double> k, const StepDistribution& D, const Potential& U);

struct FgReport {
  int nmax = 0;
  double z = 1.0;
  std::size_t samples = 0;
  /// max over n <= nmax and sampled k of |f_n - sum_{m=1}^n g_m f_{n-m}|
  double max_residual = 0.0;
  /// max over n and k of |Im C_n^(k)| (zero up to rounding for symmetric fields)
  double max_imaginary = 0.0;
  bool holds = false;
};

/// Builds f_1 = g_1 = z E^(k), f_n = (z/c_1)^n C_n^(k) and
/// g_n = (z/c_1)^n Pi_n^(k) for n >= 2, f_0 = 1, and checks
/// f_n = sum_{m=1}^n g_m f_{n-m} to 1e-10 at every sampled k.
template <class S>
FgReport verify_fg_recursion(int nmax, const std::vector<std::vector<double>>& ks, double z,
                             const StepDistribution& D, const Potential& U, const EnumerationOptions& opts = {});

/// Same, from precomputed C_0..C_nmax and kernels (kernels[m-1] = Pi_m).
template <class S>
FgReport fg_residual(const ConnectivitySeries<S>& series, const std::vector<PiKernels<S>>& kernels,
                     const std::vector<std::vector<double>>& ks, double z, const StepDistribution& D,
                     const Potential& U);

struct SeriesEstimates {
  int dim = 1;
  /// mu_root[n-1] = c_n^{1/n}, n = 1..nmax
  std::vector<double> mu_root;
  /// mu_ratio[n-1] = c_{n+1}/c_n, n = 1..nmax-1
  std::vector<double> mu_ratio;
  double c1 = 1.0;
  /// Whether the last c_n^{1/n} lies in [2^{-d}, c_1].
  bool mu_in_bounds = false;

  int truncation_n = 0;
  double mu_used = 0.0;
  double delta0 = 0.0;
  double tau = 0.0;
  double sigma = 0.0;
  double delta = 0.0;
  /// |mu^{-N} sum_x |x|^2 Pi_N(x)| and |(N-1) pi_N / mu^N|
  double last_tau_term = 0.0;
  double last_sigma_term = 0.0;
  bool has_diffusion = false;
};

template <class S>
SeriesEstimates mu_estimators(const ConnectivitySeries<S>& series, int dim);

template <class S>
SeriesEstimates mu_estimators(int nmax, const StepDistribution& D, const Potential& U,
                              const EnumerationOptions& opts = {}) {
  return mu_estimators(enumerate_connectivities<S>(nmax, D, U, opts), D.dim());
}

/// delta = (delta_0 / mu + tau) / (1 + sigma) with
///   delta_0 = sum_x |x|^2 D(x),
///   tau     = sum_{m=1}^N mu^{-m} sum_x |x|^2 Pi_m(x),
///   sigma   = sum_{m=2}^N (m-1) pi_m / mu^m,
/// from kernels[m-1] = Pi_m, m = 1..N. Fills the diffusion fields of `into`.
/// Throws std::invalid_argument if mu <= 0 and std::domain_error if
/// |1 + sigma| < 1e-9.
template <class S>
void diffusion_constant(SeriesEstimates& into, int truncation_n, double mu, const StepDistribution& D,
                        const std::vector<PiKernels<S>>& kernels);

template <class S>
SeriesEstimates diffusion_constant(int truncation_n, double mu, const StepDistribution& D, const Potential& U,
                                   const EnumerationOptions& opts = {}) {
  std::vector<PiKernels<S>> kernels;
  for (int m = 1; m <= truncation_n; ++m) kernels.push_back(pi_kernels<S>(m, D, U, -1, opts));
  SeriesEstimates out;
  out.dim = D.dim();
  diffusion_constant(out, truncation_n, mu, D, kernels);
  return out;
}

}  // namespace lacewalk
