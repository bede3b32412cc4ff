#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "swelab/field.hpp"
#include "swelab/stats.hpp"

namespace swelab {

// ---- lattice counting -----------------------------------------------------

enum class CountVariant { minus, plus, zero, linear };
const char* variant_name(CountVariant v);

struct CountQuery {
  long K = 1;
  Mode l{};
  double mu = 0.0;
  CountVariant variant = CountVariant::minus;
  double ux = 1.0, uy = 0.0;  // unit normal (linear variant)
  int sigma = 0;              // -1, 0, 1 (linear variant)
  int threshold_exponent = 2; // |k| ~ K iff K 2^-e <= |k| <= K 2^e
};

struct CountBudget {
  long max_points = 20'000'000;  // lattice points enumerated per query
};

long count_lattice(const CountQuery& q, const CountBudget& budget = {});
// Exact sup over mu (mu field ignored); returns (count, maximising mu).
std::pair<long, double> count_sup_mu(const CountQuery& q, const CountBudget& budget = {});
// Right-hand side of the counting bound without constants.
double count_bound(CountVariant v, long K, long L);

struct CountingRow {
  CountVariant variant;
  long K = 0, L = 0;
  Mode l{};
  double ux = 0, uy = 0;
  int sigma = 0;
  double mu = 0;
  long count = 0;
  double bound = 0;
  double ratio = 0;
};

struct CountingTrend {
  CountVariant variant;
  std::vector<std::pair<long, double>> max_ratio_by_K;
  double max_ratio = 0;
  double top_slope = 0;  // slope of log max ratio vs log K over the top three K
};

struct CountingScan {
  std::vector<CountingRow> rows;
  std::vector<CountingTrend> trends;
};

CountingScan counting_constant_scan(long K_max, const std::vector<CountVariant>& variants,
                                    int l_samples, std::uint64_t seed, int threshold_exponent = 2,
                                    const CountBudget& budget = {}, int workers = 1);

// ---- z covariance, null forms ---------------------------------------------

cplx cov_z_closed(Mode k, Mode l, double t, double s);

FourierField q12(const FourierField& f, const FourierField& g, int out_radius = -1);
std::pair<FourierField, FourierField> leray(const FourierField& v1, const FourierField& v2);
// Coefficients of Im(w(x)).
FourierField im_part(const FourierField& w);
double null_identity_residual(const FourierField& phi);

double chi_cutoff(Mode m, double t);

struct TimeQuadrature {
  std::vector<double> t, w, chi;  // sorted nodes, weights, chi(t)
};
// Composite Gauss-Legendre on the three pieces of supp chi.
TimeQuadrature chi_quadrature(Mode m, int points);
int default_quad_points(Mode m, int N);

struct ClosedVariance {
  double value = 0.0;
  double refined = 0.0;   // same with doubled nodes
  bool converged = true;  // |value - refined| <= 1e-3 |refined|
};
ClosedVariance nullform_variance_closed(Mode m, int N, int quad_pts);
// Variance with an explicit time weight (chi replaced by zero gives 0).
double nullform_variance_weighted(Mode m, int N, const TimeQuadrature& tq);

struct NullformMc {
  long samples = 0;
  cplx mean{};
  double mean_stderr_re = 0, mean_stderr_im = 0;
  double variance = 0, stderr_ = 0;  // jackknife
  // Gradient functionals j = 1, 2 over the same paths.
  double grad_variance[2] = {0, 0};
  double grad_stderr[2] = {0, 0};
  double max_identity_defect = 0;  // |G_1 + G_2 + F| / max(|F|, tiny), per sample
};

NullformMc nullform_mc(Mode m, int N, long samples, std::uint64_t seed, int quad_pts = -1,
                       int workers = 1);

struct VarianceEstimate {
  double mean_re = 0, mean_im = 0, variance = 0, stderr_ = 0;
};
VarianceEstimate nullform_variance_mc(Mode m, int N, long samples, std::uint64_t seed,
                                      int workers = 1);
double gradient_functional_variance(Mode m, int N, int j, long samples, std::uint64_t seed,
                                    int workers = 1);

}  // namespace swelab
