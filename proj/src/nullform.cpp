#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "swelab/estimates.hpp"
#include "swelab/noise.hpp"
#include "swelab/parallel.hpp"
#include "swelab/rng.hpp"
#include "swelab/spectral.hpp"

namespace swelab {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

FourierField derivative(const FourierField& f, int j) {
  FourierField d(f.radius(), f.hermitian());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Mode k = f.mode(i);
    d.coeffs()[i] = I * double(j == 1 ? k.k1 : k.k2) * f.coeffs()[i];
  }
  return d;
}

}  // namespace

cplx cov_z_closed(Mode k, Mode l, double t, double s) {
  if (k.zero() || l.zero()) throw std::invalid_argument("cov_z_closed: zero mode");
  if (t < 0 || s < 0) throw std::invalid_argument("negative time");
  if (!(k == l)) return 0.0;
  const double w = k.norm();
  const double lo = std::min(t, s);
  return lo * std::cos((t - s) * w) / (2 * w * w) +
         (std::sin(std::abs(t - s) * w) - std::sin((t + s) * w)) / (4 * w * w * w);
}

FourierField q12(const FourierField& f, const FourierField& g, int out_radius) {
  const int rout = out_radius >= 0 ? out_radius : std::max(f.radius(), g.radius());
  FourierField a = dealiased_product(derivative(f, 1), derivative(g, 2), rout);
  a -= dealiased_product(derivative(f, 2), derivative(g, 1), rout);
  return a;
}

std::pair<FourierField, FourierField> leray(const FourierField& v1, const FourierField& v2) {
  if (v1.radius() != v2.radius()) throw std::invalid_argument("leray: radius mismatch");
  FourierField p1 = v1, p2 = v2;
  for (std::size_t i = 0; i < v1.size(); ++i) {
    const Mode k = v1.mode(i);
    if (k.zero()) continue;
    const double n2 = double(k.norm2());
    const cplx div = double(k.k1) * v1.coeffs()[i] + double(k.k2) * v2.coeffs()[i];
    p1.coeffs()[i] -= double(k.k1) * div / n2;
    p2.coeffs()[i] -= double(k.k2) * div / n2;
  }
  return {p1, p2};
}

FourierField im_part(const FourierField& w) {
  FourierField out(w.radius(), true);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Mode k = w.mode(i);
    out.coeffs()[i] = (w.coeffs()[i] - std::conj(w[-k])) / (2.0 * I);
  }
  return out;
}

double null_identity_residual(const FourierField& phi) {
  const int r = std::max(phi.support_radius(), 0);
  const int R = 2 * r;
  const FourierField p = phi.resized(r);
  const FourierField pbar = p.conj_field();
  std::array<FourierField, 2> B;
  for (int j = 0; j < 2; ++j) B[j] = im_part(dealiased_product(p, derivative(pbar, j + 1), R));
  const auto [l1, l2] = leray(B[0], B[1]);
  const FourierField iq = im_part(q12(p, pbar, R));
  // RHS_j = mean(B_j) - Lap^{-1} d_k Im Q_jk, with Q_21 = -Q_12.
  double res = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < iq.size(); ++i) {
    const Mode k = iq.mode(i);
    cplx rhs1 = 0.0, rhs2 = 0.0;
    if (k.zero()) {
      rhs1 = B[0].coeffs()[i];
      rhs2 = B[1].coeffs()[i];
    } else {
      const double n2 = double(k.norm2());
      rhs1 = (I * double(k.k2) * iq.coeffs()[i]) / n2;
      rhs2 = -(I * double(k.k1) * iq.coeffs()[i]) / n2;
    }
    res = std::max({res, std::abs(l1.coeffs()[i] - rhs1), std::abs(l2.coeffs()[i] - rhs2)});
    scale = std::max({scale, std::abs(l1.coeffs()[i]), std::abs(l2.coeffs()[i])});
  }
  return res / std::max(1.0, scale);
}

double chi_cutoff(Mode m, double t) {
  if (m.zero()) throw std::invalid_argument("chi_cutoff: m must be nonzero");
  const double s = t * m.norm();
  const double a0 = 0x1.0p-8, a1 = 0x1.0p-7, a2 = 0x1.0p-6, a3 = 0x1.0p-5;
  if (s <= a0 || s >= a3) return 0.0;
  if (s < a1) return smoothstep5((s - a0) / (a1 - a0));
  if (s <= a2) return 1.0;
  return 1.0 - smoothstep5((s - a2) / (a3 - a2));
}

int default_quad_points(Mode m, int N) {
  return int(std::ceil(8.0 * (2.0 * N / m.norm()) * 0x1.0p-5)) + 64;
}

TimeQuadrature chi_quadrature(Mode m, int points) {
  if (points < 3) throw std::invalid_argument("too few quadrature points");
  const double r = m.norm();
  const double edges[4] = {0x1.0p-8 / r, 0x1.0p-7 / r, 0x1.0p-6 / r, 0x1.0p-5 / r};
  const int per = (points + 2) / 3;
  gsl_integration_glfixed_table* tab = gsl_integration_glfixed_table_alloc(std::size_t(per));
  if (!tab) throw std::runtime_error("GSL Gauss-Legendre table allocation failed");
  TimeQuadrature q;
  for (int p = 0; p < 3; ++p)
    for (int i = 0; i < per; ++i) {
      double x = 0, w = 0;
      gsl_integration_glfixed_point(edges[p], edges[p + 1], std::size_t(i), &x, &w, tab);
      q.t.push_back(x);
      q.w.push_back(w);
    }
  gsl_integration_glfixed_table_free(tab);
  std::vector<std::size_t> idx(q.t.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return q.t[a] < q.t[b]; });
  TimeQuadrature s;
  for (auto i : idx) {
    s.t.push_back(q.t[i]);
    s.w.push_back(q.w[i]);
    s.chi.push_back(chi_cutoff(m, q.t[i]));
  }
  return s;
}

double nullform_variance_weighted(Mode m, int N, const TimeQuadrature& tq) {
  // Group modes by (|k|^2, |k+m|^2); weight rho^2 rho^2 (k x m)^2.
  std::map<std::pair<long, long>, double> groups;
  const int E = (9 * N) / 8 + 1;
  for (int a = -E; a <= E; ++a)
    for (int b = -E; b <= E; ++b) {
      const Mode k{a, b};
      const Mode km = k + m;
      if (k.zero() || km.zero()) continue;
      const double r1 = lp_weight(k, N), r2 = lp_weight(km, N);
      if (r1 == 0.0 || r2 == 0.0) continue;
      const double cross = double(a) * m.k2 - double(b) * m.k1;
      if (cross == 0.0) continue;
      groups[{k.norm2(), km.norm2()}] += r1 * r1 * r2 * r2 * cross * cross;
    }
  const std::size_t n = tq.t.size();
  std::vector<double> wc(n);
  for (std::size_t i = 0; i < n; ++i) wc[i] = tq.w[i] * tq.chi[i];

  // For s <= t: C(w; t, s) = cos(tw) alpha(s) + sin(tw) beta(s) with
  // alpha = s cos(sw)/(2w^2) - sin(sw)/(2w^3), beta = s sin(sw)/(2w^2).
  struct Trig {
    std::vector<double> c, s, al, be;
  };
  std::map<long, Trig> cache;
  auto trig = [&](long n2) -> const Trig& {
    auto it = cache.find(n2);
    if (it != cache.end()) return it->second;
    Trig tr;
    const double w = std::sqrt(double(n2));
    for (std::size_t i = 0; i < n; ++i) {
      const double t = tq.t[i];
      const double c = std::cos(t * w), s = std::sin(t * w);
      tr.c.push_back(c);
      tr.s.push_back(s);
      tr.al.push_back(t * c / (2 * w * w) - s / (2 * w * w * w));
      tr.be.push_back(t * s / (2 * w * w));
    }
    return cache.emplace(n2, std::move(tr)).first->second;
  };

  double total = 0.0;
  for (const auto& [key, weight] : groups) {
    const Trig& A = trig(key.first);
    const Trig& B = trig(key.second);
    // Sum_i Sum_j wc_i wc_j C_A(t_i, t_j) C_B(t_i, t_j) = 2 * strict lower + diagonal.
    double acc[4] = {0, 0, 0, 0};  // running sums over j < i of wc_j * (al/be products)
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u[4] = {A.c[i] * B.c[i], A.c[i] * B.s[i], A.s[i] * B.c[i], A.s[i] * B.s[i]};
      const double v[4] = {A.al[i] * B.al[i], A.al[i] * B.be[i], A.be[i] * B.al[i],
                           A.be[i] * B.be[i]};
      double lower = 0.0, diag = 0.0;
      for (int p = 0; p < 4; ++p) {
        lower += u[p] * acc[p];
        diag += u[p] * v[p];
      }
      sum += wc[i] * (2.0 * lower + wc[i] * diag);
      for (int p = 0; p < 4; ++p) acc[p] += wc[i] * v[p];
    }
    total += weight * sum;
  }
  return std::pow(kTwoPi, 4) * total;
}

ClosedVariance nullform_variance_closed(Mode m, int N, int quad_pts) {
  if (quad_pts < 64) throw std::invalid_argument("quad_pts must be >= 64");
  ClosedVariance cv;
  cv.value = nullform_variance_weighted(m, N, chi_quadrature(m, quad_pts));
  cv.refined = nullform_variance_weighted(m, N, chi_quadrature(m, 2 * quad_pts));
  cv.converged = std::abs(cv.value - cv.refined) <= 1e-3 * std::abs(cv.refined);
  return cv;
}

NullformMc nullform_mc(Mode m, int N, long samples, std::uint64_t seed, int quad_pts,
                       int workers) {
  if (samples < 3) throw std::invalid_argument("need at least 3 samples");
  if (quad_pts < 0) quad_pts = default_quad_points(m, N);
  const TimeQuadrature tq = chi_quadrature(m, quad_pts);
  // Pair list: (k, k+m) with both in supp rho_{<=N}.
  struct Pair {
    std::size_t ik, ikm;  // box indices of k and k + m
    double cross, rr, g1, g2;
  };
  std::vector<Pair> pairs;
  const int E = (9 * N) / 8 + 1 + sup_norm(m);
  const FourierField box(E);
  for (int a = -E; a <= E; ++a)
    for (int b = -E; b <= E; ++b) {
      const Mode k{a, b};
      const Mode km = k + m;
      const double rr = lp_weight(k, N) * lp_weight(km, N);
      if (rr == 0.0) continue;
      pairs.push_back({box.index(k), box.index(km), double(a) * m.k2 - double(b) * m.k1, rr,
                       double(2 * a + m.k1), double(2 * b + m.k2)});
    }
  const double c0 = kTwoPi * kTwoPi;
  const std::size_t ns = std::size_t(samples);
  std::vector<cplx> F(ns), G1(ns), G2(ns);
  parallel_for(ns, workers, [&](std::size_t s) {
    ModeDriverBank bank(Channel::Z, N, E,
                        seed_derive(seed, {std::string("nullform"), std::int64_t(s)}));
    std::vector<cplx> z(box.size());
    std::vector<double> trig(2 * box.size());
    std::vector<char> ready(box.size());
    cplx f = 0.0, x1 = 0.0, x2 = 0.0;
    double t = 0.0;
    for (std::size_t i = 0; i < tq.t.size(); ++i) {
      bank.advance(tq.t[i] - t);
      t = tq.t[i];
      // z_hat from the driver states; trig shared per |k|^2
      std::fill(ready.begin(), ready.end(), 0);
      const auto& modes = bank.stored_modes();
      const auto& states = bank.stored_states();
      for (std::size_t j = 0; j < modes.size(); ++j) {
        const Mode k = modes[j];
        const DriverState& d = states[j];
        if (k.zero()) {
          z[box.index(k)] = -(t * d.i1 - d.it);
          continue;
        }
        const auto n2 = std::size_t(k.norm2());
        if (!ready[n2]) {
          const double w = std::sqrt(double(n2));
          trig[2 * n2] = std::sin(t * w) / w;
          trig[2 * n2 + 1] = std::cos(t * w) / w;
          ready[n2] = 1;
        }
        z[box.index(k)] = -(trig[2 * n2] * d.ic - trig[2 * n2 + 1] * d.is);
      }
      cplx sq = 0.0, s1 = 0.0, s2 = 0.0;
      for (const auto& p : pairs) {
        const cplx prod = p.rr * z[p.ik] * std::conj(z[p.ikm]);
        sq += p.cross * prod;
        s1 += p.g1 * prod;
        s2 += p.g2 * prod;
      }
      const double wc = tq.w[i] * tq.chi[i];
      f += wc * sq;
      x1 += wc * s1;
      x2 += wc * s2;
    }
    F[s] = -I * c0 * f;
    // int e^{imx} Im(z d_j zbar) dx = -(2pi)^2/2 sum zhat_k conj zhat_{k+m} (2k+m)_j
    const cplx X1 = -0.5 * c0 * x1, X2 = -0.5 * c0 * x2;
    // pairing with the divergence-free field (-d_2 psi, d_1 psi), psi = chi e^{imx}
    G1[s] = -I * double(m.k2) * X1;
    G2[s] = I * double(m.k1) * X2;
  });

  NullformMc out;
  out.samples = samples;
  auto split = [&](const std::vector<cplx>& v, std::vector<double>& re, std::vector<double>& im) {
    re.clear();
    im.clear();
    for (const auto& c : v) {
      re.push_back(c.real());
      im.push_back(c.imag());
    }
  };
  std::vector<double> re, im;
  split(F, re, im);
  const McSummary mr = mc_reduce(re), mi = mc_reduce(im);
  out.mean = {mr.mean, mi.mean};
  out.mean_stderr_re = mr.stderr_;
  out.mean_stderr_im = mi.stderr_;
  const JackknifeResult jf = jackknife_complex_variance(re, im);
  out.variance = jf.estimate;
  out.stderr_ = jf.stderr_;
  for (int j = 0; j < 2; ++j) {
    split(j == 0 ? G1 : G2, re, im);
    const JackknifeResult jg = jackknife_complex_variance(re, im);
    out.grad_variance[j] = jg.estimate;
    out.grad_stderr[j] = jg.stderr_;
  }
  double defect = 0.0;
  for (std::size_t s = 0; s < F.size(); ++s)
    defect = std::max(defect, std::abs(G1[s] + G2[s] + F[s]) / std::max(std::abs(F[s]), 1e-300));
  out.max_identity_defect = defect;
  return out;
}

VarianceEstimate nullform_variance_mc(Mode m, int N, long samples, std::uint64_t seed,
                                      int workers) {
  const NullformMc r = nullform_mc(m, N, samples, seed, -1, workers);
  return {r.mean.real(), r.mean.imag(), r.variance, r.stderr_};
}

double gradient_functional_variance(Mode m, int N, int j, long samples, std::uint64_t seed,
                                    int workers) {
  if (j != 1 && j != 2) throw std::invalid_argument("j must be 1 or 2");
  return nullform_mc(m, N, samples, seed, -1, workers).grad_variance[j - 1];
}

}  // namespace swelab
