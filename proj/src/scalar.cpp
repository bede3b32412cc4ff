#include <cmath>
#include <stdexcept>

#include "swelab/rng.hpp"
#include "swelab/scalar.hpp"

namespace swelab {

namespace {

void check_time(const ModeDriverBank& b, double t) {
  if (std::abs(b.time() - t) > 1e-9 * std::max(1.0, std::abs(t)))
    throw std::invalid_argument("bank-time mismatch");
}

}  // namespace

FieldPair wave_propagator(const FourierField& f0, const FourierField& f1, double t) {
  if (f0.radius() != f1.radius()) throw std::invalid_argument("data radius mismatch");
  FourierField u(f0.radius(), f0.hermitian() && f1.hermitian());
  FourierField du(f0.radius(), u.hermitian());
  for (std::size_t i = 0; i < f0.size(); ++i) {
    const double w = f0.mode(i).norm();
    const cplx a = f0.coeffs()[i], b = f1.coeffs()[i];
    if (w == 0.0) {
      u.coeffs()[i] = a + t * b;
      du.coeffs()[i] = b;
      continue;
    }
    const double c = std::cos(t * w), s = std::sin(t * w);
    u.coeffs()[i] = c * a + (s / w) * b;
    du.coeffs()[i] = -w * s * a + c * b;
  }
  return {std::move(u), std::move(du)};
}

FieldPair random_initial_data(int R, int band, double norm, double nu, std::uint64_t seed) {
  if (band < 0 || band > R) throw std::invalid_argument("data band must lie inside the grid");
  if (!(norm >= 0)) throw std::invalid_argument("data norm must be non-negative");
  FourierField f0(R), f1(R);
  const CounterStream rs{seed};
  std::uint64_t j = 0;
  for (int a = -band; a <= band; ++a)
    for (int b = -band; b <= band; ++b) {
      const auto [x0, y0] = rs.normal_pair(j++);
      const auto [x1, y1] = rs.normal_pair(j++);
      f0[Mode{a, b}] = {x0, y0};
      f1[Mode{a, b}] = {x1, y1};
    }
  const double s = pair_norm(f0, f1, nu);
  if (s > 0) {
    f0 *= norm / s;
    f1 *= norm / s;
  }
  return {std::move(f0), std::move(f1)};
}

FieldPair sample_z(const ModeDriverBank& bank, int N, double t, int R) {
  check_time(bank, t);
  FourierField z(R), dz(R);
  const int E = std::min(R, bank.extent());
  std::vector<double> trig(std::size_t(4) * E * E + 2);
  std::vector<char> ready(std::size_t(2) * E * E + 1, 0);
  for (int k1 = -E; k1 <= E; ++k1)
    for (int k2 = -E; k2 <= E; ++k2) {
      const Mode k{k1, k2};
      const double w = N > 0 ? lp_weight(k, N) : 1.0;
      if (w == 0.0 || !bank.contains(k)) continue;
      const DriverState d = bank.state(k);
      if (k.zero()) {
        z[k] = -w * (t * d.i1 - d.it);
        dz[k] = -w * d.i1;
        continue;
      }
      const long n2 = k.norm2();
      const double om = std::sqrt(double(n2));
      if (!ready[std::size_t(n2)]) {
        trig[2 * std::size_t(n2)] = std::cos(t * om);
        trig[2 * std::size_t(n2) + 1] = std::sin(t * om);
        ready[std::size_t(n2)] = 1;
      }
      const double c = trig[2 * std::size_t(n2)], s = trig[2 * std::size_t(n2) + 1];
      z[k] = -w / om * (s * d.ic - c * d.is);
      dz[k] = -w * (c * d.ic + s * d.is);
    }
  return {std::move(z), std::move(dz)};
}

namespace {

std::vector<double> quadrature_weights(std::size_t n, double h, Quadrature q) {
  // weights for int over grid points 0..n (n intervals)
  std::vector<double> w(n + 1, 0.0);
  if (n == 0) return w;
  if (q == Quadrature::trapezoid || n == 1) {
    for (std::size_t j = 0; j <= n; ++j) w[j] = h;
    w[0] = w[n] = h / 2;
    return w;
  }
  // Composite Simpson on an even number of intervals, Simpson 3/8 on the last
  // three when n is odd.
  const std::size_t even = (n % 2 == 0) ? n : n - 3;
  for (std::size_t j = 0; j + 2 <= even; j += 2) {
    w[j] += h / 3;
    w[j + 1] += 4 * h / 3;
    w[j + 2] += h / 3;
  }
  if (even != n) {
    const double a = 3 * h / 8;
    w[even] += a;
    w[even + 1] += 3 * a;
    w[even + 2] += 3 * a;
    w[even + 3] += a;
  }
  return w;
}

void check_uniform(const std::vector<double>& tg) {
  if (tg.size() < 1) throw std::invalid_argument("empty time grid");
  if (tg.size() == 1) return;
  const double h = tg[1] - tg[0];
  if (!(h > 0)) throw std::invalid_argument("non-uniform time grid");
  for (std::size_t j = 1; j < tg.size(); ++j)
    if (std::abs((tg[j] - tg[j - 1]) - h) > 1e-9 * h) throw std::invalid_argument("non-uniform time grid");
}

FourierField duhamel_at(const std::vector<FourierField>& G, const std::vector<double>& tg,
                        std::size_t n, Quadrature q) {
  const int R = G[0].radius();
  FourierField out(R);
  if (n == 0) return out;
  const double h = tg[1] - tg[0];
  const auto w = quadrature_weights(n, h, q);
  bool herm = true;
  for (std::size_t j = 0; j <= n; ++j) herm = herm && G[j].hermitian();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double om = out.mode(i).norm();
    cplx s = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      const cplx g = G[j].coeffs()[i];
      if (g == cplx{}) continue;
      const double tau = tg[n] - tg[j];
      const double ker = om == 0.0 ? tau : std::sin(tau * om) / om;
      s += w[j] * ker * g;
    }
    out.coeffs()[i] = -s;
  }
  out.set_hermitian(herm);
  return out;
}

}  // namespace

std::vector<FourierField> duhamel(const std::vector<FourierField>& G,
                                  const std::vector<double>& tg, Quadrature q) {
  if (G.size() != tg.size()) throw std::invalid_argument("trajectory/grid length mismatch");
  check_uniform(tg);
  std::vector<FourierField> out;
  out.reserve(G.size());
  for (std::size_t n = 0; n < G.size(); ++n) out.push_back(duhamel_at(G, tg, n, q));
  return out;
}

FourierField duhamel_final(const std::vector<FourierField>& G, const std::vector<double>& tg,
                           Quadrature q) {
  if (G.size() != tg.size() || G.empty()) throw std::invalid_argument("trajectory/grid length mismatch");
  check_uniform(tg);
  return duhamel_at(G, tg, G.size() - 1, q);
}

}  // namespace swelab
