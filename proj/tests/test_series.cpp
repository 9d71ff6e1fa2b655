#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "helpers.hpp"
#include "lacewalk/series.hpp"

using namespace lacewalk;

namespace {

std::complex<double> direct_transform(const std::map<oracle::Pt, oracle::Q>& f, const std::vector<double>& k) {
  std::complex<double> s = 0;
  for (const auto& [x, v] : f) {
    double phase = 0;
    for (std::size_t i = 0; i < x.size(); ++i) phase += k[i] * x[i];
    s += v.get_d() * std::exp(std::complex<double>(0, phase));
  }
  return s;
}

std::vector<std::vector<double>> sample_ks(int dim, int count, unsigned seed) {
  std::vector<std::vector<double>> ks;
  for (int i = 0; i < count; ++i) {
    std::vector<double> k;
    for (int j = 0; j < dim; ++j) {
      seed = seed * 1664525u + 1013904223u;
      k.push_back((seed / 4294967296.0 * 2 - 1) * std::numbers::pi);
    }
    ks.push_back(k);
  }
  return ks;
}

}  // namespace

TEST_CASE("fourier transform") {
  const auto D = testing_util::table_2d();
  const Rational kappa(1, 10);
  const auto c3 = connectivity<double>(3, D, Potential(kappa));
  const auto expect = oracle::connectivity(3, testing_util::steps_of(D), kappa);
  for (const auto& k : sample_ks(2, 6, 3)) {
    const auto a = fourier(c3, k);
    const auto b = direct_transform(expect, k);
    CHECK(std::abs(a - b) < 1e-14);
    CHECK(std::fabs(a.imag()) < 1e-12);
  }
  const std::vector<double> zero{0.0, 0.0};
  CHECK(fourier(c3, zero).real() == doctest::Approx(c3.sum()).epsilon(1e-14));
  CHECK(fourier(LatticeField<double>::delta(2), std::vector<double>{1.0, -2.0}) == std::complex<double>(1.0, 0.0));
  CHECK_THROWS_AS(fourier(c3, std::vector<double>{4.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(fourier(c3, std::vector<double>{0.0}), std::invalid_argument);
}

TEST_CASE("finite-difference laplacian matches the second moment") {
  for (int d = 1; d <= 3; ++d) {
    const auto D = build_step_distribution(Profile::exponential(), 1.5, d, 2.0);
    const double moment = D.second_moment<double>();
    CHECK(fd_negative_laplacian(D.as_field<double>()) == doctest::Approx(moment).epsilon(1e-6));
  }
}

TEST_CASE("E hat") {
  const auto D1 = StepDistribution::uniform_nearest_neighbor(1);
  CHECK(e_hat(std::vector<double>{std::numbers::pi}, D1, 0.1) == doctest::Approx(-1.0).epsilon(1e-15));
  const auto D = build_step_distribution(Profile::gaussian(), 1.0, 2, 2.0);
  CHECK(e_hat(std::vector<double>{0.0, 0.0}, D, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<double> k{0.4, -1.1};
  CHECK(e_hat(k, D, 0.0) == doctest::Approx(fourier(D.as_field<double>(), k).real()).epsilon(1e-15));
  CHECK(e_hat(k, D, Potential::disabled()) == e_hat(k, D, 0.0));
  // E = (D + Pi_1)^ / c_1
  const Potential U = Potential::from_double(0.3);
  const auto s = enumerate_connectivities<double>(1, D, U);
  CHECK(e_hat(k, D, U) == doctest::Approx(fourier(s[1], k).real() / s.partition_value(1)).epsilon(1e-14));
}

TEST_CASE("f/g recursion") {
  const auto D = build_step_distribution(Profile::exponential(), 1.0, 2, 2.0);
  const Potential U = Potential::from_double(0.02);
  for (double z : {1.0, 0.37}) {
    const auto r = verify_fg_recursion<double>(4, sample_ks(2, 5, 11), z, D, U);
    CHECK(r.holds);
    CHECK(r.max_residual < 1e-10);
    CHECK(r.max_imaginary < 1e-12);
  }
  // k = 0, z = 1 at n = 2 reduces to c_2 = (D + Pi_1)^ c_1 + pi_2, divided by c_1^2
  const auto exact = verify_fg_recursion<Rational>(2, {{0.0}}, 1.0, testing_util::table_1d(), Potential(Rational(1, 10)));
  CHECK(exact.holds);
  // a wrong kernel is detected
  const auto series = enumerate_connectivities<double>(3, D, U);
  std::vector<PiKernels<double>> kernels;
  for (int m = 1; m <= 3; ++m) kernels.push_back(pi_kernels<double>(m, D, U, 1));
  CHECK_FALSE(fg_residual(series, kernels, sample_ks(2, 3, 5), 1.0, D, U).holds);
}

TEST_CASE("mu estimators") {
  const auto free_walk = mu_estimators<Rational>(6, testing_util::table_2d(), Potential::disabled());
  for (double m : free_walk.mu_root) CHECK(m == 1.0);
  for (double m : free_walk.mu_ratio) CHECK(m == 1.0);

  const auto line = mu_estimators<Rational>(8, StepDistribution::uniform_nearest_neighbor(1), Potential(0));
  for (int n = 1; n <= 8; ++n) CHECK(line.mu_root[static_cast<std::size_t>(n) - 1] == doctest::Approx(std::pow(2.0, (1.0 - n) / n)));
  for (double r : line.mu_ratio) CHECK(r == 0.5);
  CHECK(line.mu_in_bounds);

  const auto D = build_step_distribution(Profile::exponential(), 2.0, 2, 1.0);
  const auto est = mu_estimators<double>(5, D, Potential::from_double(0.02));
  for (std::size_t n = 1; n < est.mu_root.size(); ++n) {
    CHECK(est.mu_root[n] >= 0.25);
    CHECK(est.mu_root[n] <= est.c1);
  }
}

TEST_CASE("diffusion constant, free walk") {
  const auto D = testing_util::table_2d();
  const auto e = diffusion_constant<Rational>(4, 1.0, D, Potential::disabled());
  CHECK(e.tau == 0.0);
  CHECK(e.sigma == 0.0);
  CHECK(e.delta == e.delta0);
  CHECK(e.delta0 == doctest::Approx(4.0 / 6.0 + 4.0 * 2.0 / 12.0));
  CHECK(diffusion_constant<double>(3, 1.0, StepDistribution::uniform_nearest_neighbor(1), Potential(0)).delta0 == 1.0);
  CHECK_THROWS_AS(diffusion_constant<double>(2, 0.0, D, Potential(0)), std::invalid_argument);
}

TEST_CASE("diffusion constant against hand-assembled sums") {
  const auto D = testing_util::table_1d();
  const Rational kappa(1, 20);
  const auto steps = testing_util::steps_of(D);
  const double mu = 0.8;
  double tau = 0, sigma = 0;
  for (int m = 1; m <= 4; ++m) {
    const auto pi = oracle::pi(m, steps, kappa);
    double second = 0, mass = 0;
    for (const auto& [x, v] : pi) {
      second += x[0] * x[0] * v.get_d();
      mass += v.get_d();
    }
    tau += second / std::pow(mu, m);
    sigma += (m - 1) * mass / std::pow(mu, m);
  }
  const double delta0 = 2 * (0.3 + 4 * 0.2);
  const auto e = diffusion_constant<Rational>(4, mu, D, Potential(kappa));
  CHECK(e.delta0 == doctest::Approx(delta0));
  CHECK(e.tau == doctest::Approx(tau).epsilon(1e-13));
  CHECK(e.sigma == doctest::Approx(sigma).epsilon(1e-13));
  CHECK(e.delta == doctest::Approx((delta0 / mu + tau) / (1 + sigma)).epsilon(1e-13));
  CHECK(e.last_sigma_term > 0);
}

TEST_CASE("msd(n)/n moves toward the truncated delta") {
  const auto D = StepDistribution::uniform_nearest_neighbor(2);
  const Potential U(0);
  const auto s = enumerate_connectivities<double>(6, D, U);
  const auto mu = mu_estimators(s, 2);
  const auto e = diffusion_constant<double>(6, mu.mu_ratio.back(), D, U);
  double gap = std::fabs(s.msd(1) - e.delta);
  for (int n = 2; n <= 6; ++n) {
    const double next = std::fabs(s.msd(n) / n - e.delta);
    CHECK(next <= gap);
    gap = next;
  }
}

TEST_CASE("diffusion constant does not depend on how it is called") {
  const auto D = build_step_distribution(Profile::exponential(), 1.0, 2, 2.0);
  const Potential U = Potential::from_double(0.02);
  const auto a = diffusion_constant<double>(3, 0.9, D, U);
  std::vector<PiKernels<double>> kernels;
  for (int m = 1; m <= 3; ++m) kernels.push_back(pi_kernels<double>(m, D, U, -1, {1'000'000'000, 3}));
  SeriesEstimates b;
  diffusion_constant(b, 3, 0.9, D, kernels);
  CHECK(a.delta == b.delta);
  CHECK(a.tau == b.tau);
  CHECK(a.sigma == b.sigma);
}
