#include "swelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "fft.hpp"

namespace swelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxTransform = 8192;
constexpr double kDirectBudget = 4.0e5;

std::size_t nonzeros(const FourierField& f) {
  std::size_t n = 0;
  for (const auto& c : f.coeffs()) n += (c != cplx{});
  return n;
}

FourierField direct_product(const FourierField& f, const FourierField& g, int rout) {
  FourierField out(rout, f.hermitian() && g.hermitian());
  std::vector<std::pair<Mode, cplx>> gs;
  for (std::size_t j = 0; j < g.size(); ++j)
    if (g.coeffs()[j] != cplx{}) gs.emplace_back(g.mode(j), g.coeffs()[j]);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const cplx a = f.coeffs()[i];
    if (a == cplx{}) continue;
    const Mode k = f.mode(i);
    for (const auto& [l, b] : gs) {
      const Mode m = k + l;
      if (out.in_box(m)) out[m] += a * b;
    }
  }
  return out;
}

int checked_grid(int ra, int rb, int rout) {
  const int M = fft::product_grid(ra, rb, rout);
  if (M > kMaxTransform) throw GridOverflow("operand radius exceeds padding capacity");
  return M;
}

FourierField fft_product(const FourierField& f, const FourierField& g, int ra, int rb, int rout) {
  const int M = checked_grid(ra, rb, rout);
  const FourierField fa = f.radius() > ra ? f.resized(ra) : f;
  const FourierField gb = g.radius() > rb ? g.resized(rb) : g;
  const std::size_t n = std::size_t(M) * M;
  FourierField out(rout);
  if (f.hermitian() && g.hermitian()) {
    fft::RBuffer x(n), y(n);
    fft::CBuffer half(fft::half_len(M));
    fft::to_physical_real(fa, M, x.data(), half.data());
    fft::to_physical_real(gb, M, y.data(), half.data());
    for (std::size_t i = 0; i < n; ++i) x[i] *= y[i];
    fft::from_physical_real(x.data(), M, out, half.data());
    return out;
  }
  fft::CBuffer x(n), y(n);
  fft::to_physical(fa, M, x.data());
  fft::to_physical(gb, M, y.data());
  for (std::size_t i = 0; i < n; ++i) x[i] *= y[i];
  fft::from_physical(x.data(), M, out);
  return out;
}

// |n|^2-indexed cache for radial multipliers.
class RadialTable {
 public:
  RadialTable(int radius, std::function<double(double)> fn)
      : fn_(std::move(fn)), vals_(std::size_t(2) * radius * radius + 1, -1.0) {}
  double operator()(long n2) {
    double& v = vals_[std::size_t(n2)];
    if (v < 0.0) v = fn_(std::sqrt(double(n2)));
    return v;
  }

 private:
  std::function<double(double)> fn_;
  std::vector<double> vals_;
};

double block_weight_r(double r, double K) {
  if (K <= 1.0) return rho(r);
  return rho(r / K) - rho(2.0 * r / K);
}

}  // namespace

double smoothstep5(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double rho(double xi) {
  const double a = std::abs(xi);
  if (a <= 0.875) return 1.0;
  if (a >= 1.125) return 0.0;
  return 1.0 - smoothstep5((a - 0.875) * 4.0);
}

double lp_weight(Mode n, double N) { return rho(n.norm() / N); }

double block_weight(Mode n, double N) { return block_weight_r(n.norm(), N); }

bool is_dyadic(long N) { return N >= 1 && (N & (N - 1)) == 0; }

FourierField lp_project(const FourierField& f, long N, LpKind kind) {
  if (!is_dyadic(N)) throw std::invalid_argument("LP scale must be a power of two");
  FourierField out(f.radius(), f.hermitian());
  RadialTable w(f.radius(), [&](double r) {
    return kind == LpKind::leq ? rho(r / double(N)) : block_weight_r(r, double(N));
  });
  for (std::size_t i = 0; i < f.size(); ++i) {
    const cplx c = f.coeffs()[i];
    if (c != cplx{}) out.coeffs()[i] = c * w(f.mode(i).norm2());
  }
  return out;
}

std::vector<long> dyadic_blocks(int radius) {
  const double rmax = std::sqrt(2.0) * radius;
  std::vector<long> ks{1};
  while (0.875 * double(ks.back()) < rmax) ks.push_back(ks.back() * 2);
  return ks;
}

FourierField dealiased_product(const FourierField& f, const FourierField& g, int out_radius,
                               ProductMethod method) {
  const int rout = out_radius >= 0 ? out_radius : std::max(f.radius(), g.radius());
  const int ra = f.support_radius();
  const int rb = g.support_radius();
  if (ra < 0 || rb < 0) return FourierField(rout, f.hermitian() && g.hermitian());
  if (method == ProductMethod::automatic) {
    method = double(nonzeros(f)) * double(nonzeros(g)) <= kDirectBudget ? ProductMethod::direct
                                                                         : ProductMethod::fft;
  }
  if (method == ProductMethod::direct) return direct_product(f, g, rout);
  return fft_product(f, g, ra, rb, rout);
}

Relation dyadic_relation(long K, long L, int e) {
  const double s = std::ldexp(1.0, e);
  if (double(K) < double(L) / s) return Relation::much_less;
  if (double(K) > double(L) * s) return Relation::much_greater;
  return Relation::comparable;
}

FourierField paraproduct(const FourierField& f, const FourierField& g, ParaKind kind, int e,
                         int out_radius) {
  if (e < 0) throw std::invalid_argument("threshold exponent must be >= 0");
  const int rout = out_radius >= 0 ? out_radius : std::max(f.radius(), g.radius());
  const bool herm = f.hermitian() && g.hermitian();
  const int ra = f.support_radius();
  const int rb = g.support_radius();
  FourierField out(rout, herm);
  if (ra < 0 || rb < 0) return out;
  const auto blocks = dyadic_blocks(std::max(ra, rb));
  if (double(nonzeros(f)) * double(nonzeros(g)) <= kDirectBudget) {
    // Sparse operands: weight each pair (k, l) by its share of related block pairs.
    auto weights = [&](Mode k) {
      std::vector<double> w;
      for (long K : blocks) w.push_back(block_weight(k, double(K)));
      return w;
    };
    std::vector<std::pair<Mode, std::vector<double>>> gl;
    std::vector<cplx> gv;
    for (std::size_t j = 0; j < g.size(); ++j)
      if (g.coeffs()[j] != cplx{}) {
        gl.emplace_back(g.mode(j), weights(g.mode(j)));
        gv.push_back(g.coeffs()[j]);
      }
    const Relation want = kind == ParaKind::lo_hi   ? Relation::much_less
                          : kind == ParaKind::hi_lo ? Relation::much_greater
                                                    : Relation::comparable;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const cplx a = f.coeffs()[i];
      if (a == cplx{}) continue;
      const auto wf = weights(f.mode(i));
      for (std::size_t j = 0; j < gl.size(); ++j) {
        const Mode m = f.mode(i) + gl[j].first;
        if (!out.in_box(m)) continue;
        double w = 0.0;
        for (std::size_t p = 0; p < blocks.size(); ++p) {
          if (wf[p] == 0.0) continue;
          for (std::size_t q = 0; q < blocks.size(); ++q)
            if (gl[j].second[q] != 0.0 && dyadic_relation(blocks[p], blocks[q], e) == want)
              w += wf[p] * gl[j].second[q];
        }
        out[m] += w * a * gv[j];
      }
    }
    return out;
  }
  const int M = checked_grid(ra, rb, rout);
  const std::size_t n = std::size_t(M) * M;
  const FourierField fa = f.resized(ra);
  const FourierField gb = g.resized(rb);

  fft::CBuffer acc(n), x(n), y(n);
  std::fill(acc.data(), acc.data() + n, cplx{});
  bool any = false;
  auto physical = [&](const FourierField& h, auto weight, cplx* buf) {
    FourierField w(h.radius());
    RadialTable tab(h.radius(), weight);
    for (std::size_t i = 0; i < h.size(); ++i) {
      const cplx c = h.coeffs()[i];
      if (c != cplx{}) w.coeffs()[i] = c * tab(h.mode(i).norm2());
    }
    fft::to_physical(w, M, buf);
  };
  auto leq = [](double X) { return [X](double r) { return rho(r / X); }; };
  auto blk = [](double K) { return [K](double r) { return block_weight_r(r, K); }; };
  const double down = std::ldexp(1.0, -(e + 1));  // K << L iff K <= L 2^-(e+1) for dyadics
  const double up = std::ldexp(1.0, e);

  for (long S : blocks) {
    const double lo = double(S) * down;
    switch (kind) {
      case ParaKind::lo_hi:
        if (lo < 1.0) continue;
        physical(fa, leq(lo), x.data());
        physical(gb, blk(double(S)), y.data());
        break;
      case ParaKind::hi_lo:
        if (lo < 1.0) continue;
        physical(fa, blk(double(S)), x.data());
        physical(gb, leq(lo), y.data());
        break;
      case ParaKind::hi_hi: {
        physical(fa, blk(double(S)), x.data());
        const double hi = double(S) * up;
        if (lo < 1.0) {
          physical(gb, leq(hi), y.data());
        } else {
          physical(gb, [hi, lo](double r) { return rho(r / hi) - rho(r / lo); }, y.data());
        }
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) acc[i] += x[i] * y[i];
    any = true;
  }
  if (any) fft::from_physical(acc.data(), M, out);
  out.set_hermitian(herm);
  return out;
}

double l2_norm(const FourierField& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs()) s += std::norm(c);
  return kTwoPi * std::sqrt(s);
}

double l2_norm_physical(const FourierField& f) {
  const int M = fft::nice_size(2 * f.radius() + 1);
  fft::CBuffer x(std::size_t(M) * M);
  fft::to_physical(f, M, x.data());
  double s = 0.0;
  for (std::size_t i = 0; i < std::size_t(M) * M; ++i) s += std::norm(x[i]);
  return kTwoPi * std::sqrt(s / (double(M) * M));
}

double sobolev_norm(const FourierField& f, double nu) {
  const auto blocks = dyadic_blocks(f.radius());
  RadialTable mult(f.radius(), [&](double r) {
    double w = 0.0;
    for (long K : blocks) {
      const double b = block_weight_r(r, double(K));
      if (b != 0.0) w += std::pow(double(K), 2.0 * nu) * b * b;
    }
    return w;
  });
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::norm(f.coeffs()[i]);
    if (a != 0.0) s += a * mult(f.mode(i).norm2());
  }
  return kTwoPi * std::sqrt(s);
}

double pair_norm(const FourierField& f, const FourierField& dtf, double nu) {
  return sobolev_norm(f, nu) + sobolev_norm(dtf, nu - 1.0);
}

double hoelder_norm(const FourierField& f, double nu) {
  if (f.support_radius() < 0) return 0.0;
  const int M = fft::nice_size(std::max(4 * f.radius() + 1, 8));
  fft::CBuffer x(std::size_t(M) * M);
  double best = 0.0;
  for (long K : dyadic_blocks(f.radius())) {
    fft::to_physical(lp_project(f, K, LpKind::block), M, x.data());
    double sup = 0.0;
    for (std::size_t i = 0; i < std::size_t(M) * M; ++i) sup = std::max(sup, std::abs(x[i]));
    best = std::max(best, std::pow(double(K), nu) * sup);
  }
  return best;
}

LPBlockProfile lp_profile(const FourierField& f) { return lp_profile(f, 1, 1L << 40); }

LPBlockProfile lp_profile(const FourierField& f, long k_min, long k_max) {
  LPBlockProfile p;
  if (f.support_radius() < 0) return p;
  const auto blocks = dyadic_blocks(f.radius());
  std::vector<double> sums(blocks.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::norm(f.coeffs()[i]);
    if (a == 0.0) continue;
    const double r = f.mode(i).norm();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const double w = block_weight_r(r, double(blocks[b]));
      sums[b] += a * w * w;
    }
  }
  std::vector<double> xs, ys;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const double nrm = kTwoPi * std::sqrt(sums[b]);
    p.entries.emplace_back(blocks[b], nrm);
    if (nrm > 1e-14 && blocks[b] >= k_min && blocks[b] <= k_max) {
      xs.push_back(std::log(double(blocks[b])));
      ys.push_back(std::log(nrm));
    }
  }
  if (xs.size() >= 3) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= double(xs.size());
    my /= double(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    p.fitted_slope = sxy / sxx;
    p.degenerate = false;
  }
  return p;
}

}  // namespace swelab
