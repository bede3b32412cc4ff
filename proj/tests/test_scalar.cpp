#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "helpers.hpp"
#include "swelab/rng.hpp"
#include "swelab/scalar.hpp"
#include "swelab/stats.hpp"

using namespace swelab;
using testing_util::random_field;

namespace {

double state_diff(const ScalarState& a, const ScalarState& b) {
  return std::max(max_abs_diff(a.phi, b.phi), max_abs_diff(a.dtphi, b.dtphi));
}

ScalarState run_single(const SolverOptions& o, std::uint64_t seed, const FourierField& p0,
                       const FourierField& p1, double T, int base_substeps = 2) {
  CommonNoise noise(seed, o.gauge ? o.N : 0, o.grid_radius, o.dt / base_substeps);
  ScalarSolver s(o, p0, p1);
  const long n = std::lround(T / o.dt);
  for (long i = 0; i < n; ++i) s.step(noise);
  return s.state(o.noise ? z_at(noise, s.time()) : zero_pair(o.grid_radius));
}

}  // namespace

TEST_SUITE("scalar") {
  TEST_CASE("wave propagator") {
    const auto f0 = random_field(6, 6, 1);
    const auto f1 = random_field(6, 6, 2);
    const auto [u, du] = wave_propagator(f0, f1, 0.0);
    CHECK(max_abs_diff(u, f0) == 0.0);
    CHECK(max_abs_diff(du, f1) == 0.0);
    const Mode k{3, 0};
    const auto one = FourierField::single_mode(4, k, {1.0, 2.0});
    const auto [v, dv] = wave_propagator(one, FourierField(4), 0.7);
    CHECK(std::abs(v[k] - std::cos(2.1) * cplx(1, 2)) < 1e-15);
    const auto c1 = FourierField::single_mode(4, {0, 0}, 3.0);
    const auto [w, dw] = wave_propagator(FourierField(4), c1, 0.7);
    CHECK(std::abs(w[Mode{0, 0}] - 2.1) < 1e-15);
  }

  TEST_CASE("z sampler") {
    auto z = make_driver_bank(Channel::Z, 0, 4, 8);
    const auto [a, da] = sample_z(z, 0, 0.0, 4);
    CHECK(a.max_abs() == 0.0);
    CHECK(da.max_abs() == 0.0);
    z.advance(0.5);
    CHECK_THROWS(sample_z(z, 0, 0.4, 4));
    const double pi = std::numbers::pi;
    Welford m, m0;
    for (int s = 0; s < 4000; ++s) {
      auto b = make_driver_bank(Channel::Z, 0, 1, seed_derive(4, {std::int64_t(s)}));
      b.advance(1.0);
      b.advance(pi - 1.0);
      const auto st = sample_z(b, 0, pi, 1);
      m.push(std::norm(st.first[Mode{1, 0}]));
      m0.push(std::norm(st.first[Mode{0, 0}]));
    }
    CHECK(std::abs(m.summary().mean - pi / 2) < 4 * m.summary().stderr_);
    CHECK(std::abs(m0.summary().mean - pi * pi * pi / 3) < 4 * m0.summary().stderr_);
  }

  TEST_CASE("Duhamel quadrature") {
    const int n = 64;
    const double T = 1.3;
    std::vector<double> tg;
    for (int j = 0; j <= n; ++j) tg.push_back(T * j / n);
    const Mode k{2, 1};
    const cplx g{0.5, -1.0};
    std::vector<FourierField> G(n + 1, FourierField::single_mode(3, k, g));
    for (auto& f : G) f[Mode{0, 0}] = 2.0;
    const auto out = duhamel(G, tg);
    const double w = k.norm();
    CHECK(std::abs(out.back()[k] + (1 - std::cos(T * w)) / (w * w) * g) < 1e-7);
    CHECK(std::abs(out.back()[Mode{0, 0}] + T * T / 2 * 2.0) < 1e-12);
    CHECK(out.front().max_abs() == 0.0);
    std::vector<FourierField> Z(n + 1, FourierField(3));
    CHECK(duhamel_final(Z, tg).max_abs() == 0.0);
    // odd interval count uses the 3/8 tail
    std::vector<double> to(tg.begin(), tg.end() - 1);
    std::vector<FourierField> Go(G.begin(), G.end() - 1);
    const double To = to.back();
    CHECK(std::abs(duhamel_final(Go, to)[k] + (1 - std::cos(To * w)) / (w * w) * g) < 1e-7);
    // trapezoid is second order
    auto err = [&](int m) {
      std::vector<double> t2;
      std::vector<FourierField> G2;
      for (int j = 0; j <= m; ++j) {
        t2.push_back(T * j / m);
        G2.push_back(FourierField::single_mode(3, k, std::cos(3.0 * t2.back())));
      }
      // int_0^T sin((T-s)w)/w cos(3s) ds
      const double ex = (std::cos(3 * T) - std::cos(w * T)) / (w * w - 9.0);
      return std::abs(duhamel_final(G2, t2, Quadrature::trapezoid)[k] + ex);
    };
    CHECK(std::log2(err(32) / err(64)) == doctest::Approx(2.0).epsilon(0.05));
    tg[3] += 1e-3;
    CHECK_THROWS(duhamel(G, tg));
  }

  TEST_CASE("free wave is exact") {
    SolverOptions o;
    o.N = 4;
    o.grid_radius = 6;
    o.dt = 1.0 / 32;
    o.gauge = false;
    o.noise = false;
    const auto p0 = random_field(6, 6, 10), p1 = random_field(6, 6, 11);
    const auto s = run_single(o, 1, p0, p1, 1.0);
    const auto [u, du] = wave_propagator(p0, p1, 1.0);
    CHECK(max_abs_diff(s.phi, u) < 1e-12);
    CHECK(max_abs_diff(s.dtphi, du) < 1e-12);
  }

  TEST_CASE("A = 0 and zero data reproduce z") {
    SolverOptions o;
    o.N = 4;
    o.grid_radius = 6;
    o.dt = 1.0 / 16;
    o.gauge = false;
    CommonNoise noise(5, 0, 6, o.dt / 2);
    ScalarSolver s(o, FourierField(6), FourierField(6));
    for (int i = 0; i < 16; ++i) s.step(noise);
    const auto z = z_at(noise, 1.0);
    CHECK(s.state(z).phi.max_abs() > 0.0);
    CHECK(max_abs_diff(s.state(z).phi, z.first) == 0.0);
  }

  TEST_CASE("determinism and second order with gauge") {
    SolverOptions o;
    o.N = 4;
    o.grid_radius = 8;
    o.dt = 1.0 / 32;
    const auto p0 = random_field(8, 3, 20), p1 = random_field(8, 3, 21);
    const auto a = run_single(o, 77, p0, p1, 0.5, 8);
    const auto b = run_single(o, 77, p0, p1, 0.5, 8);
    CHECK(std::memcmp(a.phi.coeffs().data(), b.phi.coeffs().data(),
                      a.phi.size() * sizeof(cplx)) == 0);
    // Richardson: successive differences on a shared base grid.
    o.dt = 1.0 / 64;
    const auto c = run_single(o, 77, p0, p1, 0.5, 8);
    o.dt = 1.0 / 128;
    const auto d = run_single(o, 77, p0, p1, 0.5, 4);
    o.dt = 1.0 / 256;
    const auto e = run_single(o, 77, p0, p1, 0.5, 2);
    const double order = std::log2(state_diff(c, d) / state_diff(d, e));
    MESSAGE("observed order " << order);
    CHECK(order > 1.6);
  }

  TEST_CASE("ensemble shares the noise across truncations") {
    EnsembleOptions eo;
    eo.N_list = {2, 4};
    eo.grid_radius = 8;
    eo.dt = 1.0 / 16;
    eo.T = 0.25;
    eo.snapshot_every = 2;
    int calls = 0;
    run_ensemble(eo, 9, random_field(8, 2, 1), random_field(8, 2, 2),
                 [&](const EnsembleSnapshot& s) {
                   ++calls;
                   if (s.step == 0) return;
                   const auto& small = *s.potentials[0];
                   const auto& big = *s.potentials[1];
                   for (int k1 = -2; k1 <= 2; ++k1)
                     for (int k2 = -2; k2 <= 2; ++k2) {
                       const Mode k{k1, k2};
                       const double r2 = lp_weight(k, 2), r4 = lp_weight(k, 4);
                       if (r2 == 0.0) continue;
                       CHECK(std::abs(small.A[1][k] * r4 - big.A[1][k] * r2) < 1e-14);
                     }
                 });
    CHECK(calls == 3);
  }

  TEST_CASE("smoothing probe") {
    const int R = 12;
    std::vector<double> tg{0.0, 0.1, 0.2};
    std::vector<VectorPotentialState> A(3);
    std::vector<ScalarState> phi(3);
    for (int j = 0; j < 3; ++j) {
      for (int a = 0; a < 3; ++a) {
        A[j].A[a] = FourierField(R, true);
        A[j].dtA[a] = FourierField(R, true);
      }
      A[j].t = tg[j];
      phi[j].phi = random_field(R, 6, 40 + j);
      phi[j].dtphi = random_field(R, 6, 50 + j);
      phi[j].t = tg[j];
    }
    const auto z = smoothing_probe(A, phi, tg, ParaKind::lo_hi);
    CHECK(z.field.max_abs() == 0.0);
    CHECK(z.profile.degenerate);
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a) {
        A[j].A[a] = random_field(R, 5, 60 + 3 * j + a, true);
        A[j].dtA[a] = random_field(R, 5, 90 + 3 * j + a, true);
      }
    FourierField sum(R);
    for (auto kind : {ParaKind::lo_hi, ParaKind::hi_hi, ParaKind::hi_lo})
      sum += smoothing_probe(A, phi, tg, kind).field;
    const auto full = smoothing_full(A, phi, tg);
    CHECK(max_abs_diff(sum, full) < 1e-12 * full.max_abs());
  }
}
