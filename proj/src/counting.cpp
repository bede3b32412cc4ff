#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "swelab/estimates.hpp"
#include "swelab/parallel.hpp"
#include "swelab/rng.hpp"

namespace swelab {

namespace {

template <class F>
void for_annulus(long K, int e, const CountBudget& budget, F&& f) {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  if (e < 0 || e > 12) throw std::invalid_argument("threshold exponent out of range");
  const long r = K << e;
  if ((2 * r + 1) * (2 * r + 1) > budget.max_points)
    throw std::length_error("annulus too large for configured budget");
  const long lo = K * K, hi = (K * K) << (4 * e);  // compare |k|^2 4^e against K^2 and K^2 16^e
  const long scale = 1L << (2 * e);
  for (long a = -r; a <= r; ++a)
    for (long b = -r; b <= r; ++b) {
      const long n2 = a * a + b * b;
      if (n2 * scale < lo || n2 * scale > hi) continue;
      f(Mode{int(a), int(b)});
    }
}

double value_of(const CountQuery& q, Mode k) {
  const double nk = k.norm();
  switch (q.variant) {
    case CountVariant::minus: return (k + q.l).norm() - nk;
    case CountVariant::plus: return (k + q.l).norm() + nk;
    case CountVariant::zero: return (k + q.l).norm();
    case CountVariant::linear: return q.ux * k.k1 + q.uy * k.k2 + q.sigma * nk;
  }
  return 0.0;
}

std::pair<long, double> window_max(std::vector<double>& v) {
  if (v.empty()) return {0, 0.0};
  std::sort(v.begin(), v.end());
  long best = 0;
  double mu = v[0] + 1.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (j < i) j = i;
    while (j + 1 < v.size() && v[j + 1] - v[i] <= 2.0) ++j;
    const long c = long(j - i + 1);
    if (c > best) {
      best = c;
      mu = 0.5 * (v[i] + v[j]);
    }
  }
  return {best, mu};
}

long dyadic_scale(double r) {
  long L = 1;
  while (double(2 * L) <= r) L *= 2;
  return L;
}

}  // namespace

const char* variant_name(CountVariant v) {
  switch (v) {
    case CountVariant::minus: return "minus";
    case CountVariant::plus: return "plus";
    case CountVariant::zero: return "zero";
    case CountVariant::linear: return "linear";
  }
  return "?";
}

long count_lattice(const CountQuery& q, const CountBudget& budget) {
  long c = 0;
  for_annulus(q.K, q.threshold_exponent, budget, [&](Mode k) {
    if (std::abs(value_of(q, k) - q.mu) <= 1.0) ++c;
  });
  return c;
}

std::pair<long, double> count_sup_mu(const CountQuery& q, const CountBudget& budget) {
  std::vector<double> v;
  for_annulus(q.K, q.threshold_exponent, budget, [&](Mode k) { v.push_back(value_of(q, k)); });
  return window_max(v);
}

double count_bound(CountVariant v, long K, long L) {
  const double k2 = double(K) * double(K);
  switch (v) {
    case CountVariant::minus: return std::pow(double(std::min(K, L)), -0.5) * k2;
    case CountVariant::plus:
    case CountVariant::linear: return std::pow(double(K), -0.5) * k2;
    case CountVariant::zero: return k2 / double(K);
  }
  return 0.0;
}

CountingScan counting_constant_scan(long K_max, const std::vector<CountVariant>& variants,
                                    int l_samples, std::uint64_t seed, int e,
                                    const CountBudget& budget, int workers) {
  if (K_max < 1) throw std::invalid_argument("K_max must be >= 1");
  std::vector<long> Ks;
  for (long K = 1; K <= K_max; K *= 2) Ks.push_back(K);
  const CounterStream rs{seed_derive(seed, {std::string("counting")})};

  struct Cell {
    CountQuery q;
    long L = 0;
  };
  std::vector<Cell> cells;
  std::uint64_t ctr = 0;
  for (CountVariant v : variants) {
    if (v == CountVariant::linear) {
      std::vector<std::pair<double, double>> us{{1.0, 0.0},
                                                {std::sqrt(0.5), std::sqrt(0.5)},
                                                {0.8, 0.6}};
      for (int s = 0; s < l_samples; ++s) {
        const double th = 2 * std::numbers::pi * rs.uniform(ctr++);
        us.emplace_back(std::cos(th), std::sin(th));
      }
      for (long K : Ks)
        for (int sigma : {-1, 0, 1})
          for (const auto& [ux, uy] : us) {
            Cell c;
            c.q.K = K;
            c.q.variant = v;
            c.q.ux = ux;
            c.q.uy = uy;
            c.q.sigma = sigma;
            c.q.threshold_exponent = e;
            cells.push_back(c);
          }
      continue;
    }
    for (long K : Ks)
      for (long L : Ks) {
        std::vector<Mode> ls{{int(L), 0}};
        const int d = int(std::lround(double(L) * 1.1 / std::sqrt(2.0)));
        if (L >= 2) ls.push_back({d, d});
        for (int s = 0; s < l_samples; ++s) {
          const double th = 2 * std::numbers::pi * rs.uniform(ctr++);
          const double r = double(L) * (1.0 + rs.uniform(ctr++));
          Mode l{int(std::lround(r * std::cos(th))), int(std::lround(r * std::sin(th)))};
          if (l.zero() || dyadic_scale(l.norm()) != L) l = {int(L), 0};
          ls.push_back(l);
        }
        for (Mode l : ls) {
          Cell c;
          c.q.K = K;
          c.q.l = l;
          c.q.variant = v;
          c.q.threshold_exponent = e;
          c.L = L;
          cells.push_back(c);
        }
      }
  }

  CountingScan scan;
  scan.rows.resize(cells.size());
  parallel_for(cells.size(), workers, [&](std::size_t i) {
    const Cell& c = cells[i];
    const auto [count, mu] = count_sup_mu(c.q, budget);
    CountingRow r;
    r.variant = c.q.variant;
    r.K = c.q.K;
    r.L = c.L;
    r.l = c.q.l;
    r.ux = c.q.ux;
    r.uy = c.q.uy;
    r.sigma = c.q.sigma;
    r.mu = mu;
    r.count = count;
    r.bound = count_bound(c.q.variant, c.q.K, std::max(c.L, 1L));
    r.ratio = double(count) / r.bound;
    scan.rows[i] = r;
  });

  for (CountVariant v : variants) {
    CountingTrend tr;
    tr.variant = v;
    std::map<long, double> best;
    for (const auto& r : scan.rows)
      if (r.variant == v) best[r.K] = std::max(best[r.K], r.ratio);
    for (const auto& [K, m] : best) {
      tr.max_ratio_by_K.emplace_back(K, m);
      tr.max_ratio = std::max(tr.max_ratio, m);
    }
    const std::size_t n = tr.max_ratio_by_K.size();
    if (n >= 3) {
      std::vector<double> x, y;
      for (std::size_t i = n - 3; i < n; ++i) {
        x.push_back(std::log(double(tr.max_ratio_by_K[i].first)));
        y.push_back(std::log(tr.max_ratio_by_K[i].second));
      }
      tr.top_slope = linear_fit(x, y).slope;
    }
    scan.trends.push_back(tr);
  }
  return scan;
}

}  // namespace swelab
