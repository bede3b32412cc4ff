#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "oracles.hpp"
#include "swelab/estimates.hpp"
#include "swelab/rng.hpp"
#include "swelab/spectral.hpp"

using namespace swelab;
using testing_util::random_field;

using oracle::naive_count;

TEST_SUITE("estimates") {
  TEST_CASE("counting: worked cases") {
    CountQuery q;
    q.K = 8;
    q.variant = CountVariant::zero;
    q.l = {3, 1};
    q.mu = -10;
    CHECK(count_lattice(q) == 0);
    q.variant = CountVariant::minus;
    q.mu = q.l.norm() + 2.5;
    CHECK(count_lattice(q) == 0);
    q.K = 4;
    q.l = {4, 0};
    q.mu = 0;
    CHECK(count_lattice(q) == naive_count(q));
    CHECK(count_lattice(q) > 0);
    q.K = 1L << 20;
    CHECK_THROWS_AS(count_lattice(q), std::length_error);
  }

  TEST_CASE("counting: agrees with the naive enumerator on random queries") {
    const CounterStream rs{seed_derive(17, {std::string("queries")})};
    std::uint64_t c = 0;
    for (int i = 0; i < 100; ++i) {
      CountQuery q;
      q.K = 1L << (rs.bits(c++) % 6);
      q.variant = CountVariant(rs.bits(c++) % 4);
      q.l = {int(rs.bits(c++) % 41) - 20, int(rs.bits(c++) % 41) - 20};
      const double th = 2 * std::numbers::pi * rs.uniform(c++);
      q.ux = std::cos(th);
      q.uy = std::sin(th);
      q.sigma = int(rs.bits(c++) % 3) - 1;
      q.mu = (rs.uniform(c++) - 0.3) * 3.0 * double(q.K);
      q.threshold_exponent = 1 + int(rs.bits(c++) % 2);
      CHECK(count_lattice(q) == naive_count(q));
      // sup over mu dominates any fixed mu
      CHECK(count_sup_mu(q).first >= count_lattice(q));
    }
  }

  TEST_CASE("counting: sup over mu is attained") {
    CountQuery q;
    q.K = 8;
    q.l = {5, 2};
    q.variant = CountVariant::plus;
    const auto [best, mu] = count_sup_mu(q);
    q.mu = mu;
    CHECK(count_lattice(q) == best);
    // brute scan over a fine mu grid never beats it
    long scan = 0;
    for (double m = 0; m < 80; m += 0.01) {
      q.mu = m;
      scan = std::max(scan, naive_count(q));
    }
    CHECK(scan <= best);
  }

  TEST_CASE("z covariance") {
    const double pi = std::numbers::pi;
    CHECK(cov_z_closed({1, 0}, {1, 0}, pi, pi).real() == doctest::Approx(pi / 2));
    CHECK(cov_z_closed({1, 0}, {2, 0}, 1, 1) == cplx{});
    CHECK(std::abs(cov_z_closed({1, 1}, {1, 1}, 0, 1.0)) < 1e-16);
    CHECK_THROWS(cov_z_closed({0, 0}, {0, 0}, 1, 1));
  }

  TEST_CASE("null forms and the Leray identity") {
    const auto f = random_field(6, 6, 1);
    const auto g = random_field(6, 6, 2);
    CHECK(q12(f, f, 12).max_abs() < 1e-12 * f.max_abs() * f.max_abs());
    CHECK(max_abs_diff(q12(f, g, 12), -1.0 * q12(g, f, 12)) < 1e-12 * q12(f, g, 12).max_abs());
    const auto e1 = FourierField::single_mode(2, {1, 0});
    const auto e2 = FourierField::single_mode(2, {0, 1});
    const auto q = q12(e1, e2, 2);
    CHECK(std::abs(q[Mode{1, 1}] + 1.0) < 1e-14);
    const auto [p1, p2] = leray(f, g);
    for (std::size_t i = 0; i < p1.size(); ++i) {
      const Mode k = p1.mode(i);
      CHECK(std::abs(double(k.k1) * p1.coeffs()[i] + double(k.k2) * p2.coeffs()[i]) <
            1e-12 * f.max_abs());
    }
    for (std::uint64_t s = 0; s < 5; ++s)
      CHECK(null_identity_residual(random_field(8, 5, 300 + s)) < 1e-10);
  }

  TEST_CASE("cutoff") {
    const Mode m{3, 4};
    CHECK(chi_cutoff(m, 0.0) == 0.0);
    CHECK(chi_cutoff(m, 0x1.0p-7 / 5.0) == 1.0);
    CHECK(chi_cutoff(m, 0x1.0p-6 / 5.0) == 1.0);
    CHECK(chi_cutoff(m, 0x1.0p-5 / 5.0) == 0.0);
    const double x = 0.5;  // t = 1.5 * 2^-8 / |m|
    const double v = chi_cutoff(m, 1.5 * 0x1.0p-8 / 5.0);
    CHECK(v == doctest::Approx(x * x * x * (10 - 15 * x + 6 * x * x)));
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK_THROWS(chi_cutoff({0, 0}, 1.0));
    const auto tq = chi_quadrature(m, 96);
    double area = 0;
    for (std::size_t i = 0; i < tq.t.size(); ++i) area += tq.w[i] * tq.chi[i];
    // plateau + two symmetric quintic ramps
    const double ref = (0x1.0p-6 - 0x1.0p-7) / 5.0 + 0.5 * (0x1.0p-7 - 0x1.0p-8) / 5.0 +
                       0.5 * (0x1.0p-5 - 0x1.0p-6) / 5.0;
    CHECK(area == doctest::Approx(ref).epsilon(1e-12));
  }

  TEST_CASE("closed variance: zero weight and convergence flag") {
    auto tq = chi_quadrature({1, 0}, 96);
    for (auto& c : tq.chi) c = 0.0;
    CHECK(nullform_variance_weighted({1, 0}, 8, tq) == 0.0);
    const auto cv = nullform_variance_closed({1, 0}, 8, 96);
    CHECK(cv.converged);
    CHECK(cv.value > 0.0);
    CHECK_THROWS(nullform_variance_closed({1, 0}, 8, 10));
  }

  TEST_CASE("closed variance against brute-force tensor quadrature") {
    // Direct O(n^2 |modes|) double sum with cov_z_closed.
    const Mode m{1, 1};
    const int N = 4;
    const auto tq = chi_quadrature(m, 66);
    double ref = 0;
    for (int a = -6; a <= 6; ++a)
      for (int b = -6; b <= 6; ++b) {
        const Mode k{a, b};
        const Mode km = k + m;
        if (k.zero() || km.zero()) continue;
        const double w = std::pow(lp_weight(k, N) * lp_weight(km, N), 2) *
                         std::pow(double(a * m.k2 - b * m.k1), 2);
        if (w == 0) continue;
        for (std::size_t i = 0; i < tq.t.size(); ++i)
          for (std::size_t j = 0; j < tq.t.size(); ++j)
            ref += tq.w[i] * tq.chi[i] * tq.w[j] * tq.chi[j] * w *
                   (cov_z_closed(k, k, tq.t[i], tq.t[j]) *
                    std::conj(cov_z_closed(km, km, tq.t[i], tq.t[j])))
                       .real();
      }
    ref *= std::pow(2 * std::numbers::pi, 4);
    CHECK(nullform_variance_weighted(m, N, tq) == doctest::Approx(ref).epsilon(1e-11));
  }

  TEST_CASE("Monte Carlo functional: identity per sample, mean zero, variance") {
    const Mode m{1, 0};
    const auto mc = nullform_mc(m, 4, 2000, 5);
    CHECK(mc.max_identity_defect < 1e-8);
    CHECK(std::abs(mc.mean.real()) < 4 * mc.mean_stderr_re);
    CHECK(std::abs(mc.mean.imag()) < 4 * mc.mean_stderr_im);
    const auto cv = nullform_variance_closed(m, 4, default_quad_points(m, 4));
    CHECK(std::abs(mc.variance - cv.value) < 5 * mc.stderr_);
    const auto mc2 = nullform_mc(m, 4, 4000, 6);
    CHECK(mc.stderr_ / mc2.stderr_ == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));
  }
}
