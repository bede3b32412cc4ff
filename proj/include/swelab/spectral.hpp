#pragma once

#include <utility>
#include <vector>

#include "swelab/field.hpp"

namespace swelab {

// Quintic smoothstep bump: 1 on |xi| <= 7/8, 0 on |xi| >= 9/8,
// rho(xi) = 1 - S(4(|xi| - 7/8)) with S(x) = 6x^5 - 15x^4 + 10x^3.
double rho(double xi);
double smoothstep5(double x);

// rho_{<=N}(n) = rho(|n|/N).
double lp_weight(Mode n, double N);
// rho_1 for N == 1, rho_{<=N} - rho_{<=N/2} otherwise.
double block_weight(Mode n, double N);
bool is_dyadic(long N);

enum class LpKind { block, leq };
FourierField lp_project(const FourierField& f, long N, LpKind kind);

// Dyadic scales 1, 2, ..., K_top with rho_{<=K_top} == 1 on the whole box.
std::vector<long> dyadic_blocks(int radius);

enum class ProductMethod { automatic, fft, direct };

// Exact (alias-free) product on |m|_inf <= out_radius; out_radius < 0 means
// max of the operand radii.
FourierField dealiased_product(const FourierField& f, const FourierField& g,
                               int out_radius = -1,
                               ProductMethod method = ProductMethod::automatic);

// Dyadic comparison with threshold exponent e: K << L iff K < 2^-e L.
enum class Relation { much_less, comparable, much_greater };
Relation dyadic_relation(long K, long L, int threshold_exponent);

enum class ParaKind { lo_hi, hi_hi, hi_lo };
FourierField paraproduct(const FourierField& f, const FourierField& g, ParaKind kind,
                         int threshold_exponent = 2, int out_radius = -1);

double l2_norm(const FourierField& f);
double sobolev_norm(const FourierField& f, double nu);
double hoelder_norm(const FourierField& f, double nu);
double pair_norm(const FourierField& f, const FourierField& dtf, double nu);
// Physical-grid (2 pi)^2 * mean |f|^2, for Plancherel checks.
double l2_norm_physical(const FourierField& f);

struct LPBlockProfile {
  std::vector<std::pair<long, double>> entries;  // (K, ||P_K f||_L2)
  double fitted_slope = 0.0;
  bool degenerate = true;
};

LPBlockProfile lp_profile(const FourierField& f);
// Slope restricted to K in [k_min, k_max].
LPBlockProfile lp_profile(const FourierField& f, long k_min, long k_max);

}  // namespace swelab
