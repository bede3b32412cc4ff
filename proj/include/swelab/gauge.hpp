#pragma once

#include <array>

#include "swelab/field.hpp"
#include "swelab/noise.hpp"

namespace swelab {

struct VectorPotentialState {
  std::array<FourierField, 3> A;    // A^0, A^1, A^2
  std::array<FourierField, 3> dtA;  // time derivatives
  double t = 0.0;
  int N = 0;
};

// Reconstructs A^alpha_{<=N}(t) and its time derivative on the box of radius
// grid_radius from the two spatial-current banks.
VectorPotentialState sample_A(const ModeDriverBank& w1, const ModeDriverBank& w2, int N, double t,
                              int grid_radius);

// max_k |dtA^0 + i k_a A^a| / max(1, field scale)
double lorenz_residual(const VectorPotentialState& s);

enum class CovComponent { time, spatial };
// Closed-form E[A(t,k) A(t',l)] of the untruncated potential. For the
// spatial component a, b in {1, 2}.
double cov_A_closed(CovComponent c, Mode k, Mode l, double t, double tp, int a = 1, int b = 1);

// S_N = sum_{n != 0} rho_{<=N}(n)^2 / |n|^2
double spectral_sum_S(int N);
double mass_squared(int N, double t);
// Spatial-mean expectation of (A^0)^2 + (A^1)^2 + (A^2)^2 before subtraction.
double resonant_quadratic_closed(int N, double t);
// (A^0)^2 + (A^1)^2 + (A^2)^2 - m^2_{<=N}(t), products exact on the output box
// (default: the state's box).
FourierField renormalized_quadratic(const VectorPotentialState& s, double t, int out_radius = -1);

// J^0(t, k) = -i k_a W^a_t(k), derived from the current banks.
FourierField current_J0(const ModeDriverBank& w1, const ModeDriverBank& w2, double t,
                        int grid_radius, int N = 0);

// F_{alpha beta} = d_alpha A_beta - d_beta A_alpha with A_0 = -A^0.
// Indexed [alpha][beta]; the diagonal is zero.
std::array<std::array<FourierField, 3>, 3> curvature(const VectorPotentialState& s);

}  // namespace swelab
