#include "lacewalk/series.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lacewalk {

namespace {

void check_wavevector(std::span<const double> k, int dim) {
  if (static_cast<int>(k.size()) != dim) {
    throw std::invalid_argument("wave vector has " + std::to_string(k.size()) + " components, expected " +
                                std::to_string(dim));
  }
  for (double ki : k) {
    if (!(std::fabs(ki) <= std::numbers::pi + 1e-12)) throw std::invalid_argument("wave vector component outside [-pi, pi]");
  }
}

}  // namespace

template <class S>
std::complex<double> fourier(const LatticeField<S>& f, std::span<const double> k) {
  check_wavevector(k, f.dim());
  CompensatedSum<double> re;
  CompensatedSum<double> im;
  for (const auto& [x, v] : f.entries()) {
    double phase = 0.0;
    for (int i = 0; i < f.dim(); ++i) phase += k[static_cast<std::size_t>(i)] * x[i];
    const double a = ScalarOps<S>::to_double(v);
    if (phase == 0.0) {
      re += a;
    } else {
      re += a * std::cos(phase);
      im += a * std::sin(phase);
    }
  }
  return {re.value(), im.value()};
}

template <class S>
double fd_negative_laplacian(const LatticeField<S>& f, double h) {
  const std::vector<double> zero(static_cast<std::size_t>(f.dim()), 0.0);
  const double f0 = fourier(f, zero).real();
  double sum = 0.0;
  for (int i = 0; i < f.dim(); ++i) {
    auto k = zero;
    k[static_cast<std::size_t>(i)] = h;
    const double plus = fourier(f, k).real();
    k[static_cast<std::size_t>(i)] = -h;
    const double minus = fourier(f, k).real();
    sum += (plus - 2.0 * f0 + minus) / (h * h);
  }
  return -sum;
}

double e_hat(std::span<const double> k, const StepDistribution& D, double kappa) {
  if (kappa < 0) throw std::invalid_argument("kappa must be >= 0");
  const double d_hat = fourier(D.as_field<double>(), k).real();
  const double d1 = D.nearest_neighbor_weight<double>();
  double cosines = 0.0;
  for (double ki : k) cosines += std::cos(ki);
  return (d_hat + 2.0 * kappa * d1 * cosines) / (1.0 + 2.0 * D.dim() * kappa * d1);
}

double e_hat(std::span<const double> k, const StepDistribution& D, const Potential& U) {
  return e_hat(k, D, U.interacting() ? U.kappa_value() : 0.0);
}

template <class S>
FgReport fg_residual(const ConnectivitySeries<S>& series, const std::vector<PiKernels<S>>& kernels,
                     const std::vector<std::vector<double>>& ks, double z, const StepDistribution& D,
                     const Potential& U) {
  const int nmax = series.nmax();
  if (static_cast<int>(kernels.size()) < nmax) throw std::invalid_argument("f/g recursion needs Pi_1..Pi_nmax");
  FgReport r;
  r.nmax = nmax;
  r.z = z;
  r.samples = ks.size();
  const double c1 = nmax >= 1 ? ScalarOps<S>::to_double(series.partition_value(1)) : 1.0;
  const double scale = z / c1;

  for (const auto& k : ks) {
    std::vector<std::complex<double>> f(static_cast<std::size_t>(nmax) + 1);
    std::vector<std::complex<double>> g(static_cast<std::size_t>(nmax) + 1);
    f[0] = 1.0;
    double power = 1.0;
    for (int n = 1; n <= nmax; ++n) {
      power *= scale;
      const auto c_hat = fourier(series[n], k);
      r.max_imaginary = std::max(r.max_imaginary, std::fabs(c_hat.imag()));
      if (n == 1) {
        f[1] = g[1] = z * e_hat(k, D, U);
      } else {
        f[static_cast<std::size_t>(n)] = power * c_hat;
        g[static_cast<std::size_t>(n)] = power * fourier(kernels[static_cast<std::size_t>(n) - 1].total, k);
      }
    }
    for (int n = 1; n <= nmax; ++n) {
      std::complex<double> rhs = 0.0;
      for (int m = 1; m <= n; ++m) rhs += g[static_cast<std::size_t>(m)] * f[static_cast<std::size_t>(n - m)];
      r.max_residual = std::max(r.max_residual, std::abs(f[static_cast<std::size_t>(n)] - rhs));
    }
  }
  r.holds = r.max_residual < 1e-10;
  return r;
}

template <class S>
FgReport verify_fg_recursion(int nmax, const std::vector<std::vector<double>>& ks, double z,
                             const StepDistribution& D, const Potential& U, const EnumerationOptions& opts) {
  const auto series = enumerate_connectivities<S>(nmax, D, U, opts);
  std::vector<PiKernels<S>> kernels;
  for (int m = 1; m <= nmax; ++m) kernels.push_back(pi_kernels<S>(m, D, U, -1, opts));
  return fg_residual(series, kernels, ks, z, D, U);
}

template <class S>
SeriesEstimates mu_estimators(const ConnectivitySeries<S>& series, int dim) {
  SeriesEstimates out;
  out.dim = dim;
  const int nmax = series.nmax();
  std::vector<double> c(static_cast<std::size_t>(nmax) + 1);
  for (int n = 0; n <= nmax; ++n) c[static_cast<std::size_t>(n)] = ScalarOps<S>::to_double(series.partition_value(n));
  for (int n = 1; n <= nmax; ++n) out.mu_root.push_back(std::pow(c[static_cast<std::size_t>(n)], 1.0 / n));
  for (int n = 1; n < nmax; ++n) out.mu_ratio.push_back(c[static_cast<std::size_t>(n) + 1] / c[static_cast<std::size_t>(n)]);
  if (nmax >= 1) {
    out.c1 = c[1];
    const double last = out.mu_root.back();
    out.mu_in_bounds = last >= std::ldexp(1.0, -dim) * (1 - 1e-12) && last <= out.c1 * (1 + 1e-12);
  }
  return out;
}

template <class S>
void diffusion_constant(SeriesEstimates& into, int truncation_n, double mu, const StepDistribution& D,
                        const std::vector<PiKernels<S>>& kernels) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be a positive number");
  if (truncation_n < 0) throw std::invalid_argument("truncation order must be >= 0");
  if (static_cast<int>(kernels.size()) < truncation_n) throw std::invalid_argument("diffusion constant needs Pi_1..Pi_N");

  into.truncation_n = truncation_n;
  into.mu_used = mu;
  into.delta0 = ScalarOps<S>::to_double(D.second_moment<S>());
  CompensatedSum<double> tau;
  CompensatedSum<double> sigma;
  into.last_tau_term = 0.0;
  into.last_sigma_term = 0.0;
  for (int m = 1; m <= truncation_n; ++m) {
    const auto& pi = kernels[static_cast<std::size_t>(m) - 1].total;
    const double weight = std::pow(mu, -m);
    const double t = ScalarOps<S>::to_double(pi.even_moment(2)) * weight;
    tau += t;
    into.last_tau_term = std::fabs(t);
    if (m >= 2) {
      const double s = (m - 1) * ScalarOps<S>::to_double(pi.sum()) * weight;
      sigma += s;
      into.last_sigma_term = std::fabs(s);
    }
  }
  into.tau = tau.value();
  into.sigma = sigma.value();
  if (std::fabs(1.0 + into.sigma) < 1e-9) {
    throw std::domain_error("1 + sigma vanishes: the diffusion constant is undefined at this truncation");
  }
  into.delta = (into.delta0 / mu + into.tau) / (1.0 + into.sigma);
  into.has_diffusion = true;
}

#define LACEWALK_INSTANTIATE(S)                                                                                   \
  template std::complex<double> fourier<S>(const LatticeField<S>&, std::span<const double>);                     \
  template double fd_negative_laplacian<S>(const LatticeField<S>&, double);                                      \
  template FgReport fg_residual<S>(const ConnectivitySeries<S>&, const std::vector<PiKernels<S>>&,                \
                                   const std::vector<std::vector<double>>&, double, const StepDistribution&,      \
                                   const Potential&);                                                             \
  template FgReport verify_fg_recursion<S>(int, const std::vector<std::vector<double>>&, double,                  \
                                           const StepDistribution&, const Potential&, const EnumerationOptions&); \
  template SeriesEstimates mu_estimators<S>(const ConnectivitySeries<S>&, int);                                   \
  template void diffusion_constant<S>(SeriesEstimates&, int, double, const StepDistribution&,                     \
                                      const std::vector<PiKernels<S>>&);

LACEWALK_INSTANTIATE(double)
LACEWALK_INSTANTIATE(Rational)

#undef LACEWALK_INSTANTIATE

}  // namespace lacewalk
