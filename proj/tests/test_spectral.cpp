#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "oracles.hpp"
#include "swelab/spectral.hpp"

using namespace swelab;
using testing_util::brute_convolution;
using testing_util::random_field;

using oracle::block;
using oracle::bump;

TEST_SUITE("spectral") {
  TEST_CASE("bump values") {
    CHECK(lp_weight({0, 0}, 8) == 1.0);
    CHECK(lp_weight({9, 0}, 8) == 0.0);
    const double w = lp_weight({8, 0}, 8);
    CHECK(w > 0.0);
    CHECK(w < 1.0);
    CHECK(w == doctest::Approx(bump(1.0)).epsilon(1e-15));
    CHECK(w == doctest::Approx(0.5));
    for (double r = 0; r < 1.3; r += 0.01) CHECK(rho(r) == doctest::Approx(bump(r)).epsilon(1e-14));
  }

  TEST_CASE("projection basics") {
    const auto one = FourierField::single_mode(12, {1, 0}, 2.0);
    CHECK(max_abs_diff(lp_project(one, 8, LpKind::leq), one) == 0.0);
    const auto nine = FourierField::single_mode(12, {9, 0}, 2.0);
    CHECK(lp_project(nine, 8, LpKind::leq).max_abs() == 0.0);
  }

  TEST_CASE("partition of unity") {
    const auto f = random_field(40, 40, 11);
    FourierField sum(40);
    for (long K : dyadic_blocks(40)) sum += lp_project(f, K, LpKind::block);
    CHECK(max_abs_diff(sum, f) < 1e-12);
  }

  TEST_CASE("product examples") {
    const auto e1 = FourierField::single_mode(4, {1, 0});
    const auto e2 = FourierField::single_mode(4, {0, 1});
    const auto p = dealiased_product(e1, e2);
    CHECK(std::abs(p[Mode{1, 1}] - 1.0) < 1e-14);
    CHECK(p.max_abs() == doctest::Approx(1.0));
    const auto g = random_field(6, 6, 3);
    const auto c = FourierField::single_mode(6, {0, 0});
    CHECK(max_abs_diff(dealiased_product(c, g), g) < 1e-13);
  }

  TEST_CASE("product against brute-force convolution") {
    for (std::uint64_t s = 0; s < 4; ++s) {
      const bool herm = s % 2 == 1;
      const auto f = random_field(4, 4, 100 + s, herm);
      const auto g = random_field(4, 4, 200 + s, herm);
      const auto ref = brute_convolution(f, g, 8);
      const auto a = dealiased_product(f, g, 8, ProductMethod::fft);
      const auto b = dealiased_product(f, g, 8, ProductMethod::direct);
      CHECK(max_abs_diff(a, ref) < 1e-12 * ref.max_abs());
      CHECK(max_abs_diff(b, ref) < 1e-12 * ref.max_abs());
    }
    // truncated output box
    const auto f = random_field(10, 7, 5);
    const auto g = random_field(10, 9, 6);
    const auto ref = brute_convolution(f, g, 5);
    CHECK(max_abs_diff(dealiased_product(f, g, 5, ProductMethod::fft), ref) <
          1e-12 * ref.max_abs());
  }

  TEST_CASE("grid overflow") {
    FourierField f(3000);
    f[Mode{3000, 0}] = 1.0;
    CHECK_THROWS_AS(dealiased_product(f, f, 6000, ProductMethod::fft), GridOverflow);
  }

  TEST_CASE("paraproducts against dyadic double sum") {
    for (int e : {0, 1, 2}) {
      const auto f = random_field(18, 18, 31 + e);
      const auto g = random_field(18, 18, 41 + e);
      const int R = 18;
      std::array<FourierField, 3> ref{FourierField(R), FourierField(R), FourierField(R)};
      const auto Ks = dyadic_blocks(18);
      for (long K : Ks)
        for (long L : Ks) {
          FourierField pk(f.radius()), pl(g.radius());
          for (std::size_t i = 0; i < f.size(); ++i) {
            pk.coeffs()[i] = f.coeffs()[i] * block(f.mode(i), K);
            pl.coeffs()[i] = g.coeffs()[i] * block(g.mode(i), L);
          }
          const auto prod = brute_convolution(pk, pl, R);
          const double s = std::ldexp(1.0, e);
          const int idx = double(K) < double(L) / s ? 0 : (double(K) > double(L) * s ? 2 : 1);
          ref[idx] += prod;
        }
      const auto lh = paraproduct(f, g, ParaKind::lo_hi, e, R);
      const auto hh = paraproduct(f, g, ParaKind::hi_hi, e, R);
      const auto hl = paraproduct(f, g, ParaKind::hi_lo, e, R);
      const double scale = brute_convolution(f, g, R).max_abs();
      CHECK(max_abs_diff(lh, ref[0]) < 1e-12 * scale);
      CHECK(max_abs_diff(hh, ref[1]) < 1e-12 * scale);
      CHECK(max_abs_diff(hl, ref[2]) < 1e-12 * scale);
      const auto full = dealiased_product(f, g, R);
      CHECK(max_abs_diff(lh + hh + hl, full) < 1e-12 * scale);
    }
  }

  TEST_CASE("large threshold: far-apart modes are purely lo_hi") {
    // |k| = 1 lives in blocks 1 and 2, |l| = 1900 in blocks 2048 and 4096.
    const int R = 1901;
    FourierField f(1), g(R);
    f[Mode{1, 0}] = 1.0;
    g[Mode{1900, 0}] = 1.0;
    const auto lh = paraproduct(f, g, ParaKind::lo_hi, 9, R);
    CHECK(std::abs(lh[Mode{1901, 0}] - 1.0) < 1e-12);
    CHECK(paraproduct(f, g, ParaKind::hi_hi, 9, R).max_abs() < 1e-9);
    CHECK(paraproduct(f, g, ParaKind::hi_lo, 9, R).max_abs() < 1e-9);
  }

  TEST_CASE("norms") {
    const auto c = FourierField::single_mode(3, {0, 0}, {0.0, 3.0});
    CHECK(l2_norm(c) == doctest::Approx(2 * std::numbers::pi * 3));
    FourierField z(5);
    CHECK(sobolev_norm(z, -0.3) == 0.0);
    CHECK(hoelder_norm(z, 0.5) == 0.0);
    CHECK(pair_norm(z, z, 0.25) == 0.0);
    // |n| = 4 sits in blocks 4 and 8 only.
    const Mode n{4, 0};
    const auto f = FourierField::single_mode(8, n);
    const double b4 = block(n, 4), b8 = block(n, 8);
    const double hand = 2 * std::numbers::pi * std::sqrt(b4 * b4 / 4.0 + b8 * b8 / 8.0);
    CHECK(sobolev_norm(f, -0.5) == doctest::Approx(hand).epsilon(1e-13));
  }

  TEST_CASE("Plancherel") {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto f = random_field(20, 20, 70 + s, s == 1);
      CHECK(l2_norm_physical(f) == doctest::Approx(l2_norm(f)).epsilon(1e-10));
    }
  }

  TEST_CASE("Hoelder norm of a single mode") {
    // P_K e_n has sup norm equal to the block weight.
    const Mode n{5, 0};
    const auto f = FourierField::single_mode(8, n);
    double expect = 0.0;
    for (long K : dyadic_blocks(8)) expect = std::max(expect, std::pow(double(K), 0.5) * block(n, K));
    CHECK(hoelder_norm(f, 0.5) == doctest::Approx(expect).epsilon(1e-12));
  }

  TEST_CASE("projection commutes with derivatives") {
    const auto f = random_field(16, 16, 9);
    FourierField d(16);
    for (std::size_t i = 0; i < f.size(); ++i) d.coeffs()[i] = cplx(0, f.mode(i).k1) * f.coeffs()[i];
    const auto pd = lp_project(d, 8, LpKind::block);
    const auto pf = lp_project(f, 8, LpKind::block);
    FourierField dp(16);
    for (std::size_t i = 0; i < f.size(); ++i) dp.coeffs()[i] = cplx(0, f.mode(i).k1) * pf.coeffs()[i];
    CHECK(max_abs_diff(pd, dp) < 1e-14 * dp.max_abs());
  }

  TEST_CASE("LP profile slope") {
    const int R = 300;
    FourierField f(R);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Mode n = f.mode(i);
      if (!n.zero() && n.norm() <= R) f.coeffs()[i] = 1.0 / double(n.norm2());
    }
    const auto p = lp_profile(f, 4, 128);
    CHECK_FALSE(p.degenerate);
    CHECK(p.fitted_slope == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(lp_profile(FourierField::single_mode(8, {3, 0})).degenerate);
    const auto z = lp_profile(FourierField(8));
    CHECK(z.degenerate);
    CHECK(z.entries.empty());
  }
}
