#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "swelab/field.hpp"
#include "swelab/gauge.hpp"
#include "swelab/noise.hpp"
#include "swelab/spectral.hpp"

namespace swelab {

using FieldPair = std::pair<FourierField, FourierField>;

// W(t)(f0, f1) = cos(t|D|) f0 + sin(t|D|)/|D| f1 and its time derivative.
FieldPair wave_propagator(const FourierField& f0, const FourierField& f1, double t);

// Gaussian coefficients on |k|_inf <= band, rescaled so that
// pair_norm(phi0, phi1, nu) == norm.
FieldPair random_initial_data(int grid_radius, int band, double norm, double nu, std::uint64_t seed);

// z(t) = Duh[zeta] from the Z bank, optionally weighted by rho_{<=N}.
FieldPair sample_z(const ModeDriverBank& z, int N, double t, int grid_radius);

enum class Quadrature { trapezoid, simpson };
// Duh[G](t_n) = -int_0^{t_n} sin((t_n - s)|D|)/|D| G(s) ds for every grid time.
std::vector<FourierField> duhamel(const std::vector<FourierField>& G,
                                  const std::vector<double>& t_grid,
                                  Quadrature q = Quadrature::simpson);
// Same kernel evaluated only at the last grid time.
FourierField duhamel_final(const std::vector<FourierField>& G, const std::vector<double>& t_grid,
                           Quadrature q = Quadrature::simpson);

struct ScalarState {
  FourierField phi;
  FourierField dtphi;
  double t = 0.0;
  int N = 0;
};

// Shared driver banks advanced on a fixed base grid; every solver attached to
// one instance sees the same noise realisation.
class CommonNoise {
 public:
  // N_max sizes the current banks (0: no gauge noise).
  CommonNoise(std::uint64_t seed, int N_max, int grid_radius, double base_dt);

  void advance_to(double t);
  double time() const { return z_.time(); }
  double base_dt() const { return base_dt_; }
  int grid_radius() const { return grid_radius_; }
  bool has_gauge() const { return w1_ != nullptr; }
  const ModeDriverBank& z() const { return z_; }
  const ModeDriverBank& w1() const { return *w1_; }
  const ModeDriverBank& w2() const { return *w2_; }

 private:
  double base_dt_;
  int grid_radius_;
  std::uint64_t index_ = 0;
  ModeDriverBank z_;
  std::unique_ptr<ModeDriverBank> w1_, w2_;
};

struct SolverOptions {
  int N = 8;
  int grid_radius = 16;
  double dt = 1.0 / 256;
  bool gauge = true;        // A from the current banks; false means A == 0
  bool renormalize = true;  // subtract m^2; ignored without gauge
  bool noise = true;        // false: zeta == 0
};

// Trigonometric integrator for phi = z + psi. z is taken exactly from the Z
// bank; psi solves psi'' + |k|^2 psi = 2i d_t f0 - G with f0 = (A^0 phi)^ and
// G = 2 k_a (A^a phi)^ + (Q_ren phi)^. The d_t f0 term is integrated by parts
// inside the Duhamel kernel, so only f0 itself is sampled.
class ScalarSolver {
 public:
  ScalarSolver(const SolverOptions& opt, FourierField phi0, FourierField phi1);
  ~ScalarSolver();
  ScalarSolver(ScalarSolver&&) noexcept;
  ScalarSolver& operator=(ScalarSolver&&) noexcept;

  const SolverOptions& options() const;
  double time() const;
  // Two-stage step: noise must be at t + dt/2 for stage_mid and at t + dt for
  // stage_end. z_mid/z_end are the shared z samples at those times.
  void stage_mid(const CommonNoise& noise, const FieldPair& z_mid);
  void stage_end(const CommonNoise& noise, const FieldPair& z_end);
  // Convenience single-solver step (advances the noise itself).
  void step(CommonNoise& noise);

  ScalarState state(const FieldPair& z_now) const;
  // Worst Lorenz residual and max ||A||_inf * dt seen so far.
  double max_lorenz_residual() const;
  double max_cfl() const;
  // Potential used at the most recent stage.
  const VectorPotentialState& last_potential() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> p_;
};

FieldPair zero_pair(int R);
FieldPair z_at(const CommonNoise& noise, double t);

// Runs several truncations in lockstep on one noise realisation.
struct EnsembleOptions {
  std::vector<int> N_list;
  int grid_radius = 16;
  double dt = 1.0 / 256;
  double T = 1.0;
  int base_substeps = 2;  // noise base grid = dt / base_substeps
  bool gauge = true;
  bool renormalize = true;
  bool noise = true;
  int snapshot_every = 1;
};

struct EnsembleSnapshot {
  int step = 0;
  double t = 0.0;
  std::vector<ScalarState> states;                    // one per N, same order as N_list
  std::vector<const VectorPotentialState*> potentials;  // A at time t per N
  std::vector<double> max_lorenz, max_cfl;              // running maxima per N
};

// Calls on_snapshot at t = 0, every snapshot_every steps and at T.
void run_ensemble(const EnsembleOptions& opt, std::uint64_t noise_seed, const FourierField& phi0,
                  const FourierField& phi1,
                  const std::function<void(const EnsembleSnapshot&)>& on_snapshot);

// Smoothing probe: Duh[d_alpha(A^alpha <> phi)](T) for one paraproduct kind
// given trajectories on a common uniform grid.
struct ProbeResult {
  ParaKind kind = ParaKind::lo_hi;
  LPBlockProfile profile;
  double exponent = 0.0;  // -slope of log ||P_K u|| against log K
  FourierField field;
};

ProbeResult smoothing_probe(const std::vector<VectorPotentialState>& A,
                            const std::vector<ScalarState>& phi, const std::vector<double>& t_grid,
                            ParaKind kind, int threshold_exponent = 2, long k_min = 1,
                            long k_max = 1L << 40);
// Same with the full product in place of a paraproduct.
FourierField smoothing_full(const std::vector<VectorPotentialState>& A,
                            const std::vector<ScalarState>& phi,
                            const std::vector<double>& t_grid);

}  // namespace swelab
