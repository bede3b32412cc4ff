#include "swelab/noise.hpp"

#include <climits>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <tuple>
#include <mutex>
#include <shared_mutex>
#include <ostream>
#include <stdexcept>

#include "swelab/rng.hpp"

namespace swelab {

namespace {

constexpr long kNone = LONG_MIN;
constexpr int kDeg = 40;
using Poly = std::array<double, kDeg + 1>;

Poly mul(const Poly& a, const Poly& b) {
  Poly c{};
  for (int i = 0; i <= kDeg; ++i)
    if (a[i] != 0.0)
      for (int j = 0; i + j <= kDeg; ++j) c[i + j] += a[i] * b[j];
  return c;
}

// int_0^1 p(a v) dv
double integrate(const Poly& p, double a) {
  double s = 0.0, an = 1.0;
  for (int j = 0; j <= kDeg; ++j) {
    s += p[j] * an / (j + 1);
    an *= a;
  }
  return s;
}

struct Series {
  Poly one{}, cm1{}, sn{};
  Series() {
    one[0] = 1.0;
    double fact = 1.0;
    for (int n = 1; n <= kDeg; ++n) {
      fact *= n;
      const double sign = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
      if (n % 2 == 0) cm1[n] = sign / fact;
      else sn[n] = sign / fact;
    }
  }
};

const Series& series() {
  static const Series s;
  return s;
}

// Semidefinite Cholesky: columns with a vanishing pivot are zeroed.
void cholesky(const double* g, double* l, int n) {
  for (int i = 0; i < n * n; ++i) l[i] = 0.0;
  for (int j = 0; j < n; ++j) {
    double d = g[j * n + j];
    for (int k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    const double scale = std::abs(g[j * n + j]);
    if (d < -1e-10 * scale) throw std::runtime_error("Cholesky failure: local Gram not PSD");
    if (d <= 1e-300 || d <= 1e-15 * scale) continue;
    const double p = std::sqrt(d);
    l[j * n + j] = p;
    for (int i = j + 1; i < n; ++i) {
      double s = g[i * n + j];
      for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / p;
    }
  }
}

// Process-wide memo of immutable Gram tables keyed on (dt bits, extent,
// truncation): Monte Carlo samples replay the same step schedule, so each
// Gram is factorised once.
std::shared_ptr<const std::vector<LocalGram>> gram_table(double dt, int E, int truncation) {
  static std::shared_mutex mu;
  static std::map<std::tuple<std::uint64_t, int, int>, std::shared_ptr<const std::vector<LocalGram>>>
      cache;
  std::uint64_t bits;
  std::memcpy(&bits, &dt, sizeof bits);
  const auto key = std::make_tuple(bits, E, truncation);
  {
    std::shared_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto table = std::make_shared<std::vector<LocalGram>>(std::size_t(2L * E * E + 1));
  std::vector<char> done(table->size(), 0);
  for (int k1 = 0; k1 <= E; ++k1)
    for (int k2 = 0; k2 <= E; ++k2) {
      const long n2 = long(k1) * k1 + long(k2) * k2;
      if (done[std::size_t(n2)]) continue;
      if (truncation > 0 && 64 * n2 >= 81L * truncation * truncation) continue;
      (*table)[std::size_t(n2)] = local_gram(std::sqrt(double(n2)), dt);
      done[std::size_t(n2)] = 1;
    }
  std::unique_lock lock(mu);
  if (cache.size() > 4096) cache.clear();
  cache.emplace(key, table);
  return table;
}

}  // namespace

const char* channel_name(Channel c) {
  switch (c) {
    case Channel::W1: return "W1";
    case Channel::W2: return "W2";
    case Channel::Z: return "Z";
  }
  return "?";
}

LocalGram local_gram(double omega, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("non-positive time step");
  LocalGram lg;
  auto& g = lg.gram;
  if (omega == 0.0) {
    lg.dim = 2;
    const double v[4] = {dt, dt * dt / 2, dt * dt / 2, dt * dt * dt / 3};
    std::memcpy(g.data(), v, sizeof v);
    cholesky(g.data(), lg.chol.data(), 2);
    return lg;
  }
  const double a = omega * dt;
  double g12, g13, g22, g23, g33;
  if (a < 1.0) {
    const auto& s = series();
    g12 = integrate(s.cm1, a);
    g13 = integrate(s.sn, a);
    g22 = integrate(mul(s.cm1, s.cm1), a);
    g23 = integrate(mul(s.cm1, s.sn), a);
    g33 = integrate(mul(s.sn, s.sn), a);
  } else {
    const double sa = std::sin(a), s2 = std::sin(2 * a);
    const double omc = 2.0 * std::sin(a / 2) * std::sin(a / 2);
    g12 = sa / a - 1.0;
    g13 = omc / a;
    g22 = 1.5 + s2 / (4 * a) - 2.0 * sa / a;
    g23 = sa * sa / (2 * a) - omc / a;
    g33 = 0.5 - s2 / (4 * a);
  }
  const double v[9] = {1.0, g12, g13, g12, g22, g23, g13, g23, g33};
  for (int i = 0; i < 9; ++i) g[i] = v[i] * dt;
  cholesky(g.data(), lg.chol.data(), 3);
  return lg;
}

ModeDriverBank::ModeDriverBank(Channel channel, int truncation, int grid_radius,
                               std::uint64_t seed)
    : channel_(channel), truncation_(truncation) {
  if (grid_radius < 0 || truncation < 0) throw std::invalid_argument("bad bank extent");
  key_ = seed_derive(seed, {std::string("channel"), std::int64_t(channel)});
  extent_ = grid_radius;
  if (truncation > 0) extent_ = std::min(grid_radius, (9 * truncation) / 8);
  const int E = extent_;
  const long side = 2L * E + 1;
  lookup_.assign(std::size_t(side * side), kNone);
  auto inside = [&](Mode k) {
    return truncation == 0 || 64 * k.norm2() < 81L * truncation * truncation;
  };
  for (int k1 = -E; k1 <= E; ++k1)
    for (int k2 = -E; k2 <= E; ++k2) {
      const Mode k{k1, k2};
      if (!inside(k)) continue;
      const bool rep = !conjugate_paired() || k2 > 0 || (k2 == 0 && k1 >= 0);
      if (!rep) continue;
      lookup_[std::size_t((k1 + E) * side + (k2 + E))] = long(modes_.size());
      if (conjugate_paired() && !k.zero())
        lookup_[std::size_t((-k1 + E) * side + (-k2 + E))] = -long(modes_.size()) - 1;
      modes_.push_back(k);
      mode_keys_.push_back(mix_key(key_, k1, k2));
    }
  states_.assign(modes_.size(), DriverState{});
}

long ModeDriverBank::slot(Mode k) const {
  if (std::abs(k.k1) > extent_ || std::abs(k.k2) > extent_) return kNone;
  const long side = 2L * extent_ + 1;
  return lookup_[std::size_t((k.k1 + extent_) * side + (k.k2 + extent_))];
}

bool ModeDriverBank::contains(Mode k) const { return slot(k) != kNone; }

DriverState ModeDriverBank::state(Mode k) const {
  const long s = slot(k);
  if (s == kNone) return {};
  if (s >= 0) return states_[std::size_t(s)];
  const DriverState& d = states_[std::size_t(-s - 1)];
  return {std::conj(d.i1), std::conj(d.ic), std::conj(d.is), std::conj(d.it)};
}

const LocalGram& ModeDriverBank::gram_for(long n2, double dt) {
  if (dt != cached_dt_ || !grams_) {
    grams_ = gram_table(dt, extent_, truncation_);
    cached_dt_ = dt;
  }
  return (*grams_)[std::size_t(n2)];
}

void ModeDriverBank::advance(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("advance: non-positive time step");
  const double t = time_;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const std::size_t n2max = std::size_t(2L * extent_ * extent_ + 1);
  std::vector<double> cs(n2max * 2, 0.0);
  std::vector<char> cs_ready(n2max, 0);
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const Mode k = modes_[m];
    const long n2 = k.norm2();
    const LocalGram& lg = gram_for(n2, dt);
    const CounterStream rs{mode_keys_[m]};
    const std::uint64_t base = steps_ * 4;
    DriverState& st = states_[m];
    const auto& L = lg.chol;
    if (lg.dim == 2) {
      // Zero mode: basis (1, u).
      cplx xi[2];
      if (conjugate_paired()) {
        const auto [a, b] = rs.normal_pair(base);
        xi[0] = a;
        xi[1] = b;
      } else {
        for (int i = 0; i < 2; ++i) {
          const auto [a, b] = rs.normal_pair(base + std::uint64_t(i));
          xi[i] = cplx(a, b) * inv_sqrt2;
        }
      }
      const cplx j1 = L[0] * xi[0];
      const cplx ju = L[2] * xi[0] + L[3] * xi[1];
      st.i1 += j1;
      st.ic += j1;
      st.it += t * j1 + ju;
      continue;
    }
    cplx xi[3];
    for (int i = 0; i < 3; ++i) {
      const auto [a, b] = rs.normal_pair(base + std::uint64_t(i));
      xi[i] = cplx(a, b) * inv_sqrt2;
    }
    const cplx x0 = L[0] * xi[0];
    const cplx x1 = L[3] * xi[0] + L[4] * xi[1];
    const cplx x2 = L[6] * xi[0] + L[7] * xi[1] + L[8] * xi[2];
    const cplx jc = x0 + x1;
    const cplx js = x2;
    if (!cs_ready[std::size_t(n2)]) {
      const double w = std::sqrt(double(n2));
      cs[2 * std::size_t(n2)] = std::cos(t * w);
      cs[2 * std::size_t(n2) + 1] = std::sin(t * w);
      cs_ready[std::size_t(n2)] = 1;
    }
    const double c = cs[2 * std::size_t(n2)];
    const double s = cs[2 * std::size_t(n2) + 1];
    st.i1 += x0;
    st.ic += c * jc - s * js;
    st.is += s * jc + c * js;
  }
  time_ += dt;
  ++steps_;
}

void ModeDriverBank::write_dump(std::ostream& os) const {
  auto put = [&](const void* p, std::size_t n) {
    // Byte-wise little-endian emission.
    const auto* b = static_cast<const unsigned char*>(p);
    unsigned char tmp[8];
    const std::uint16_t probe = 1;
    const bool little = *reinterpret_cast<const unsigned char*>(&probe) == 1;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = little ? b[i] : b[n - 1 - i];
    os.write(reinterpret_cast<const char*>(tmp), std::streamsize(n));
  };
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const std::int32_t k1 = modes_[m].k1, k2 = modes_[m].k2;
    put(&k1, 4);
    put(&k2, 4);
    put(&time_, 8);
    const DriverState& s = states_[m];
    for (const cplx& v : {s.i1, s.ic, s.is, s.it}) {
      const double re = v.real(), im = v.imag();
      put(&re, 8);
      put(&im, 8);
    }
  }
}

ModeDriverBank make_driver_bank(Channel channel, int truncation, int grid_radius,
                                std::uint64_t seed) {
  return ModeDriverBank(channel, truncation, grid_radius, seed);
}

}  // namespace swelab
