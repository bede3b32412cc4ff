#include "swelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swelab {

void Welford::push(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / double(n_);
  m2_ += d * (x - mean_);
}

double Welford::variance() const { return n_ > 1 ? m2_ / double(n_ - 1) : 0.0; }

McSummary Welford::summary() const {
  if (n_ < 2) throw std::invalid_argument("insufficient samples");
  McSummary s;
  s.n = n_;
  s.mean = mean_;
  s.variance = variance();
  s.stderr_ = std::sqrt(s.variance / double(n_));
  s.ci_lo = s.mean - 1.96 * s.stderr_;
  s.ci_hi = s.mean + 1.96 * s.stderr_;
  return s;
}

McSummary mc_reduce(const std::vector<double>& samples) {
  Welford w;
  for (double x : samples) w.push(x);
  return w.summary();
}

LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit needs >= 2 points");
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

LineFit log_fit(const std::vector<double>& N, const std::vector<double>& value) {
  if (N.size() < 3) throw std::invalid_argument("log_fit needs >= 3 points");
  std::vector<double> x;
  for (double n : N) x.push_back(std::log(n));
  return linear_fit(x, value);
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

JackknifeResult jackknife_complex_variance(const std::vector<double>& re,
                                           const std::vector<double>& im) {
  const std::size_t n = re.size();
  if (n < 3 || im.size() != n) throw std::invalid_argument("jackknife needs >= 3 samples");
  double sr = 0, si = 0, sq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sr += re[i];
    si += im[i];
    sq += re[i] * re[i] + im[i] * im[i];
  }
  auto var_of = [](double r, double i, double q, double m) {
    // unbiased E|x - mean|^2
    return (q - (r * r + i * i) / m) / (m - 1);
  };
  JackknifeResult out;
  out.estimate = var_of(sr, si, sq, double(n));
  double mean_loo = 0.0;
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    loo[i] = var_of(sr - re[i], si - im[i], sq - re[i] * re[i] - im[i] * im[i], double(n - 1));
    mean_loo += loo[i];
  }
  mean_loo /= double(n);
  double acc = 0.0;
  for (double v : loo) acc += (v - mean_loo) * (v - mean_loo);
  out.stderr_ = std::sqrt(acc * double(n - 1) / double(n));
  return out;
}

}  // namespace swelab
