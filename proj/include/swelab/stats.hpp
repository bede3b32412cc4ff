#pragma once

#include <cstddef>
#include <vector>

namespace swelab {

struct McSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // Bessel-corrected: sum (x - mean)^2 / (n - 1)
  double stderr_ = 0.0;   // sqrt(variance / n)
  double ci_lo = 0.0, ci_hi = 0.0;  // mean -/+ 1.96 stderr
};

// One-pass Welford moments in index order.
McSummary mc_reduce(const std::vector<double>& samples);

class Welford {
 public:
  void push(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // Bessel-corrected
  McSummary summary() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);
// value ~ c ln N + b
LineFit log_fit(const std::vector<double>& N, const std::vector<double>& value);

double median(std::vector<double> v);

// Variance of |F|^2-type estimators: mean of w with delete-one jackknife error.
struct JackknifeResult {
  double estimate = 0.0;
  double stderr_ = 0.0;
};
// Jackknife for the sample variance E|x - mean|^2 of complex samples given as
// (re, im) pairs.
JackknifeResult jackknife_complex_variance(const std::vector<double>& re,
                                           const std::vector<double>& im);

}  // namespace swelab
