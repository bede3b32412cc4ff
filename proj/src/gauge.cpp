#include "swelab/gauge.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "fft.hpp"
#include "swelab/spectral.hpp"

namespace swelab {

namespace {

constexpr cplx I{0.0, 1.0};

void check_time(const ModeDriverBank& b, double t) {
  if (std::abs(b.time() - t) > 1e-9 * std::max(1.0, std::abs(t)))
    throw std::invalid_argument("bank-time mismatch");
}

int support_extent(int N, int R) { return N > 0 ? std::min(R, (9 * N) / 8) : R; }

double weight(Mode k, int N) { return N > 0 ? lp_weight(k, N) : 1.0; }

}  // namespace

VectorPotentialState sample_A(const ModeDriverBank& w1, const ModeDriverBank& w2, int N, double t,
                              int R) {
  check_time(w1, t);
  check_time(w2, t);
  VectorPotentialState s;
  s.t = t;
  s.N = N;
  for (int a = 0; a < 3; ++a) {
    s.A[a] = FourierField(R, true);
    s.dtA[a] = FourierField(R, true);
  }
  const int E = support_extent(N, R);
  const ModeDriverBank* banks[2] = {&w1, &w2};
  for (int k1 = -E; k1 <= E; ++k1)
    for (int k2 = -E; k2 <= E; ++k2) {
      const Mode k{k1, k2};
      const double w = weight(k, N);
      if (w == 0.0) continue;
      if (k.zero()) {
        for (int a = 0; a < 2; ++a) {
          const DriverState d = banks[a]->state(k);
          s.A[a + 1][k] = -w * (t * d.i1 - d.it);
          s.dtA[a + 1][k] = -w * d.i1;
        }
        continue;
      }
      const double om = k.norm();
      const double c = std::cos(t * om), sn = std::sin(t * om);
      const double ka[2] = {double(k1), double(k2)};
      cplx a0 = 0.0, da0 = 0.0;
      for (int a = 0; a < 2; ++a) {
        const DriverState d = banks[a]->state(k);
        const cplx bracket = sn * d.ic - c * d.is;
        s.A[a + 1][k] = -w / om * bracket;
        s.dtA[a + 1][k] = -w * (c * d.ic + sn * d.is);
        a0 += ka[a] * (c * d.ic + sn * d.is - d.i1);
        da0 += ka[a] * bracket;
      }
      s.A[0][k] = -w * I * a0 / (om * om);
      s.dtA[0][k] = w * I * da0 / om;
    }
  return s;
}

double lorenz_residual(const VectorPotentialState& s) {
  double scale = 0.0;
  for (int a = 0; a < 3; ++a) scale = std::max({scale, s.A[a].max_abs(), s.dtA[a].max_abs()});
  double r = 0.0;
  const FourierField& f = s.dtA[0];
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Mode k = f.mode(i);
    const cplx v = f.coeffs()[i] + I * (double(k.k1) * s.A[1].coeffs()[i] +
                                        double(k.k2) * s.A[2].coeffs()[i]);
    r = std::max(r, std::abs(v));
  }
  return r / std::max(1.0, scale);
}

double cov_A_closed(CovComponent c, Mode k, Mode l, double t, double tp, int a, int b) {
  if (t < 0 || tp < 0) throw std::invalid_argument("negative time");
  const double lo = std::min(t, tp), hi = std::max(t, tp);
  if (c == CovComponent::spatial) {
    if (a != b) return 0.0;
    if (k.zero() && l.zero()) return lo * lo * (0.5 * hi - lo / 6.0);
    if (!(k + l).zero()) return 0.0;
    const double w = k.norm();
    return (lo * std::cos((t - tp) * w) +
            (std::sin((hi - lo) * w) - std::sin((t + tp) * w)) / (2.0 * w)) /
           (2.0 * w * w);
  }
  if (k.zero() || !(k + l).zero()) return 0.0;
  const double w = k.norm();
  const double mix = std::sin((t + tp) * w) - 4.0 * std::sin(t * w) - 4.0 * std::sin(tp * w) +
                     3.0 * std::sin((hi - lo) * w);
  return (lo * (1.0 + 0.5 * std::cos((t - tp) * w)) + mix / (4.0 * w)) / (w * w);
}

double spectral_sum_S(int N) {
  static std::mutex mu;
  static std::map<int, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
  }
  const int E = (9 * N) / 8 + 1;
  double s = 0.0;
  for (int k1 = -E; k1 <= E; ++k1)
    for (int k2 = -E; k2 <= E; ++k2) {
      const Mode k{k1, k2};
      if (k.zero()) continue;
      const double r = lp_weight(k, N);
      s += r * r / double(k.norm2());
    }
  std::lock_guard<std::mutex> lock(mu);
  cache[N] = s;
  return s;
}

double mass_squared(int N, double t) { return 2.5 * spectral_sum_S(N) * std::abs(t); }

double resonant_quadratic_closed(int N, double t) {
  const int E = (9 * N) / 8 + 1;
  double osc = 0.0;
  for (int k1 = -E; k1 <= E; ++k1)
    for (int k2 = -E; k2 <= E; ++k2) {
      const Mode k{k1, k2};
      if (k.zero()) continue;
      const double r = lp_weight(k, N);
      if (r == 0.0) continue;
      const double w = k.norm();
      osc += r * r * (-0.25 * std::sin(2 * t * w) - 2.0 * std::sin(t * w)) / (w * w * w);
    }
  return mass_squared(N, t) + osc + 2.0 * t * t * t / 3.0;
}

FourierField renormalized_quadratic(const VectorPotentialState& s, double t, int out_radius) {
  const int rout = out_radius >= 0 ? out_radius : s.A[0].radius();
  int ra = -1;
  for (const auto& f : s.A) ra = std::max(ra, f.support_radius());
  FourierField q(rout, true);
  if (ra >= 0) {
    const int M = fft::product_grid(ra, ra, rout);
    const std::size_t n = std::size_t(M) * M;
    fft::RBuffer acc(n), x(n);
    fft::CBuffer half(fft::half_len(M));
    std::fill(acc.data(), acc.data() + n, 0.0);
    for (const auto& f : s.A) {
      fft::to_physical_real(f.resized(ra), M, x.data(), half.data());
      for (std::size_t i = 0; i < n; ++i) acc[i] += x[i] * x[i];
    }
    fft::from_physical_real(acc.data(), M, q, half.data());
  }
  q[{0, 0}] -= mass_squared(s.N, t);
  return q;
}

FourierField current_J0(const ModeDriverBank& w1, const ModeDriverBank& w2, double t, int R,
                        int N) {
  check_time(w1, t);
  check_time(w2, t);
  FourierField j(R, true);
  const int E = support_extent(N, R);
  for (int k1 = -E; k1 <= E; ++k1)
    for (int k2 = -E; k2 <= E; ++k2) {
      const Mode k{k1, k2};
      const double w = weight(k, N);
      if (w == 0.0) continue;
      j[k] = -I * w * (double(k1) * w1.state(k).i1 + double(k2) * w2.state(k).i1);
    }
  return j;
}

std::array<std::array<FourierField, 3>, 3> curvature(const VectorPotentialState& s) {
  const int R = s.A[0].radius();
  std::array<std::array<FourierField, 3>, 3> F;
  for (auto& row : F)
    for (auto& f : row) f = FourierField(R, true);
  for (std::size_t i = 0; i < s.A[0].size(); ++i) {
    const Mode k = s.A[0].mode(i);
    const cplx d[3] = {0.0, I * double(k.k1), I * double(k.k2)};
    for (int a = 1; a < 3; ++a) {
      // d_0 A_a - d_a A_0, A_0 = -A^0
      const cplx v = s.dtA[a].coeffs()[i] + d[a] * s.A[0].coeffs()[i];
      F[0][a].coeffs()[i] = v;
      F[a][0].coeffs()[i] = -v;
    }
    const cplx v12 = d[1] * s.A[2].coeffs()[i] - d[2] * s.A[1].coeffs()[i];
    F[1][2].coeffs()[i] = v12;
    F[2][1].coeffs()[i] = -v12;
  }
  return F;
}

}  // namespace swelab
