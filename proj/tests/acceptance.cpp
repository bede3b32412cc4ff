// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Usage: acceptance [--out DIR] [criterion numbers...]   (default: all)

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "swelab/estimates.hpp"
#include "swelab/harness.hpp"
#include "swelab/parallel.hpp"
#include "swelab/rng.hpp"
#include "swelab/scalar.hpp"
#include "swelab/spectral.hpp"

using namespace swelab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool passed = false;
  std::vector<std::string> details;
  void note(bool ok, const std::string& what) {
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

fs::path g_out;
int g_workers = 1;

// One harness run per experiment, shared between criteria.
std::map<std::string, harness::ExperimentReport> g_reports;

const harness::ExperimentReport& experiment(const std::string& name) {
  auto it = g_reports.find(name);
  if (it != g_reports.end()) return it->second;
  harness::RunConfig cfg(name);
  return g_reports[name] = harness::run(cfg, g_out / name, true, g_workers);
}

Verdict from_checks(const std::string& exp, const std::vector<std::string>& names) {
  const auto& rep = experiment(exp);
  Verdict v;
  v.passed = true;
  for (const auto& want : names) {
    auto c = std::find_if(rep.checks.begin(), rep.checks.end(),
                          [&](const harness::CheckResult& r) { return r.name == want; });
    if (c == rep.checks.end()) {
      v.passed = false;
      v.note(false, want + ": check missing from the " + exp + " report");
      continue;
    }
    v.passed = v.passed && c->passed;
    v.note(c->passed, c->name + ": " + c->detail);
  }
  return v;
}

// ---- integrator order -----------------------------------------------------

ScalarState integrate(SolverOptions o, std::uint64_t seed, const FieldPair& data, double T,
                      int base_substeps) {
  CommonNoise noise(seed, o.gauge ? o.N : 0, o.grid_radius, o.dt / base_substeps);
  ScalarSolver s(o, data.first, data.second);
  const long n = std::lround(T / o.dt);
  for (long i = 0; i < n; ++i) s.step(noise);
  return s.state(o.noise ? z_at(noise, s.time()) : zero_pair(o.grid_radius));
}

double energy_gap(const FourierField& a, const FourierField& da, const FourierField& b,
                  const FourierField& db) {
  return pair_norm(a - b, da - db, 0.0);
}

Verdict integrator_order() {
  Verdict v;
  const double dts[3] = {1.0 / 128, 1.0 / 256, 1.0 / 512};
  const int subs[3] = {8, 4, 2};  // shared base grid 1/1024
  const int N = 16, R = 9 * N / 8 + 5;
  const double T = 1.0;

  // A == 0, no forcing: compare against the exact propagator.
  {
    SolverOptions o;
    o.N = N;
    o.grid_radius = R;
    o.gauge = false;
    o.noise = false;
    const auto data = random_initial_data(R, 8, 1.0, 0.25, 501);
    const auto [u, du] = wave_propagator(data.first, data.second, T);
    const double scale = pair_norm(u, du, 0.0);
    double err[3];
    for (int i = 0; i < 3; ++i) {
      o.dt = dts[i];
      const auto s = integrate(o, 0, data, T, subs[i]);
      err[i] = energy_gap(s.phi, s.dtphi, u, du);
    }
    const double worst = std::max({err[0], err[1], err[2]});
    std::string msg = "free wave errors " + num(err[0]) + ", " + num(err[1]) + ", " + num(err[2]);
    if (worst <= 1e-12 * scale) {
      v.note(true, msg + ": exact to roundoff at every step size, no finite order to fit");
    } else {
      const double ord = std::log2(err[0] / err[2]) / 2.0;
      v.note(ord >= 1.7, msg + ", observed order " + num(ord) + " (need >= 1.7)");
    }
  }

  // Full equation: self-convergence on a common noise path.
  std::vector<double> orders(4);
  parallel_for(orders.size(), g_workers, [&](std::size_t s) {
    SolverOptions o;
    o.N = N;
    o.grid_radius = R;
    const auto data = random_initial_data(R, 4, 1.0, 0.25, 600 + s);
    ScalarState st[3];
    for (int i = 0; i < 3; ++i) {
      o.dt = dts[i];
      st[i] = integrate(o, 700 + s, data, T, subs[i]);
    }
    const double d1 = energy_gap(st[0].phi, st[0].dtphi, st[1].phi, st[1].dtphi);
    const double d2 = energy_gap(st[1].phi, st[1].dtphi, st[2].phi, st[2].dtphi);
    orders[s] = std::log2(d1 / d2);
  });
  auto sorted = orders;
  std::sort(sorted.begin(), sorted.end());
  const double med = 0.5 * (sorted[1] + sorted[2]);
  std::string list;
  for (double o : orders) list += (list.empty() ? "" : ", ") + num(o);
  v.note(med >= 1.7, "Richardson orders over 4 paths: " + list + "; median " + num(med) + " (need >= 1.7)");

  v.passed = true;
  for (const auto& d : v.details) v.passed = v.passed && d.rfind("ok", 0) == 0;
  return v;
}

// ---- counting -------------------------------------------------------------

Verdict counting() {
  Verdict v = from_checks("counting", {"ratio_finite", "top_octave_slope"});
  const CounterStream rs{seed_derive(20240611, {std::string("acceptance"), std::string("counting")})};
  std::uint64_t c = 0;
  int agree = 0;
  std::string first_miss;
  for (int i = 0; i < 100; ++i) {
    CountQuery q;
    q.K = 1L << (rs.bits(c++) % 8);
    q.variant = CountVariant(rs.bits(c++) % 4);
    q.l = {int(rs.bits(c++) % 257) - 128, int(rs.bits(c++) % 257) - 128};
    const double th = 2 * std::numbers::pi * rs.uniform(c++);
    q.ux = std::cos(th);
    q.uy = std::sin(th);
    q.sigma = int(rs.bits(c++) % 3) - 1;
    q.mu = (rs.uniform(c++) - 0.3) * 3.0 * double(q.K);
    q.threshold_exponent = 1 + int(rs.bits(c++) % 2);
    const long a = count_lattice(q), b = oracle::naive_count(q);
    if (a == b) ++agree;
    else if (first_miss.empty())
      first_miss = "; first mismatch K=" + std::to_string(q.K) + " " + std::to_string(a) + " vs " + std::to_string(b);
  }
  v.note(agree == 100, "enumerator vs oracle: " + std::to_string(agree) + "/100 queries identical" + first_miss);
  v.passed = v.passed && agree == 100;
  return v;
}

// ---- paraproducts and LP partition ------------------------------------------

Verdict paraproduct_partition() {
  using testing_util::random_field;
  double worst_para = 0, worst_sum = 0, worst_part = 0, worst_proj = 0;
  for (int p = 0; p < 50; ++p) {
    const int R = 6 + p % 11;
    const int e = p % 3;
    const bool herm = p % 2 == 1;
    const int band_f = 1 + int(splitmix64(p) % std::uint64_t(R));
    const int band_g = 1 + int(splitmix64(p + 1000) % std::uint64_t(R));
    const auto f = random_field(R, band_f, 9000 + p, herm);
    const auto g = random_field(R, band_g, 9500 + p, herm);

    std::vector<long> Ks{1};
    while (0.875 * double(Ks.back()) < double(R) * std::numbers::sqrt2) Ks.push_back(2 * Ks.back());

    // Per-mode block weights, then every mode pair split by block relation.
    const std::size_t n = f.size();
    std::vector<std::vector<std::pair<long, double>>> wf(n), wg(n);
    for (std::size_t i = 0; i < n; ++i)
      for (long K : Ks) {
        if (double w = oracle::block(f.mode(i), K); w != 0) wf[i].push_back({K, w});
        if (double w = oracle::block(g.mode(i), K); w != 0) wg[i].push_back({K, w});
      }
    std::array<FourierField, 3> ref{FourierField(R), FourierField(R), FourierField(R)};
    const double s = std::ldexp(1.0, e);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Mode m = f.mode(i) + g.mode(j);
        if (!ref[0].in_box(m)) continue;
        const cplx c = f.coeffs()[i] * g.coeffs()[j];
        for (const auto& [K, a] : wf[i])
          for (const auto& [L, b] : wg[j]) {
            const int idx = double(K) < double(L) / s ? 0 : (double(K) > double(L) * s ? 2 : 1);
            ref[idx][m] += c * (a * b);
          }
      }
    const auto full = testing_util::brute_convolution(f, g, R);
    const double scale = std::max(full.max_abs(), 1e-300);
    const ParaKind kinds[3] = {ParaKind::lo_hi, ParaKind::hi_hi, ParaKind::hi_lo};
    FourierField sum(R);
    for (int k = 0; k < 3; ++k) {
      const auto pk = paraproduct(f, g, kinds[k], e, R);
      worst_para = std::max(worst_para, max_abs_diff(pk, ref[k]) / scale);
      sum += pk;
    }
    worst_sum = std::max(worst_sum, max_abs_diff(sum, full) / scale);

    FourierField part(R);
    for (long K : dyadic_blocks(R)) {
      const auto b = lp_project(f, K, LpKind::block);
      part += b;
      FourierField expect(R), expect_leq(R);
      for (std::size_t i = 0; i < n; ++i) {
        expect.coeffs()[i] = f.coeffs()[i] * oracle::block(f.mode(i), K);
        expect_leq.coeffs()[i] = f.coeffs()[i] * oracle::bump(f.mode(i).norm() / double(K));
      }
      worst_proj = std::max({worst_proj, max_abs_diff(b, expect) / f.max_abs(),
                             max_abs_diff(lp_project(f, K, LpKind::leq), expect_leq) / f.max_abs()});
    }
    worst_part = std::max(worst_part, max_abs_diff(part, f) / f.max_abs());
  }
  Verdict v;
  v.note(worst_para <= 1e-12, "each paraproduct vs mode-pair oracle, worst relative " + num(worst_para));
  v.note(worst_sum <= 1e-12, "lo_hi + hi_hi + hi_lo vs direct product, worst relative " + num(worst_sum));
  v.note(worst_proj <= 1e-12, "block and low-pass projections vs oracle weights, worst relative " + num(worst_proj));
  v.note(worst_part <= 1e-12, "sum of blocks vs field, worst relative " + num(worst_part));
  v.passed = worst_para <= 1e-12 && worst_sum <= 1e-12 && worst_proj <= 1e-12 && worst_part <= 1e-12;
  return v;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  g_out = fs::path(SWELAB_ACCEPTANCE_OUT);
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) g_out = argv[++i];
    else wanted.insert(std::stoi(a));
  }
  g_workers = default_workers();

  const std::vector<Criterion> all{
      {1, "Lorenz constraint", [] { return from_checks("covariance", {"lorenz_constraint"}); }},
      {2, "vector-potential covariances", [] { return from_checks("covariance", {"potential_covariances"}); }},
      {3, "z covariances", [] { return from_checks("covariance", {"z_covariances"}); }},
      {4, "renormalization",
       [] {
         return from_checks("renorm", {"resonant_resummation", "mc_mean_tracks_closed",
                                       "renormalized_norm_bounded", "unsubtracted_mean_follows_S"});
       }},
      {5, "truncation convergence",
       [] { return from_checks("converge", {"median_strictly_decreasing", "decay_factor"}); }},
      {6, "integrator order", integrator_order},
      {7, "null-form divergence",
       [] {
         return from_checks("nullform", {"increments_positive", "log_fit", "top3_slope_stable", "mc_variance",
                                         "mc_mean_zero", "gradient_slope"});
       }},
      {8, "null-form identity", [] { return from_checks("nullform", {"null_identity"}); }},
      {9, "counting bounds", counting},
      {10, "smoothing probe", [] { return from_checks("smoothing", {"hi_hi_gain", "hi_lo_gain"}); }},
      {11, "paraproduct trichotomy and LP partition", paraproduct_partition},
  };

  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.passed = false;
      v.details.push_back(std::string("FAIL exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %2d: %s (%.1f s)\n", v.passed ? "PASS" : "FAIL", c.id, c.title, secs);
    for (const auto& d : v.details) std::printf("      %s\n", d.c_str());
    std::fflush(stdout);
    ++ran;
    failed += !v.passed;
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed ? 1 : 0;
}
