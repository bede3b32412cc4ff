#include <cmath>
#include <stdexcept>

#include "fft.hpp"
#include "swelab/scalar.hpp"

namespace swelab {

CommonNoise::CommonNoise(std::uint64_t seed, int N_max, int grid_radius, double base_dt)
    : base_dt_(base_dt), grid_radius_(grid_radius), z_(Channel::Z, 0, grid_radius, seed) {
  if (!(base_dt > 0)) throw std::invalid_argument("base step must be positive");
  if (N_max > 0) {
    w1_ = std::make_unique<ModeDriverBank>(Channel::W1, N_max, grid_radius, seed);
    w2_ = std::make_unique<ModeDriverBank>(Channel::W2, N_max, grid_radius, seed);
  }
}

void CommonNoise::advance_to(double t) {
  const double x = t / base_dt_;
  const auto target = static_cast<std::uint64_t>(std::llround(x));
  if (std::abs(x - double(target)) > 1e-7) throw std::invalid_argument("time off the noise base grid");
  if (target < index_) throw std::invalid_argument("noise cannot move backwards");
  while (index_ < target) {
    z_.advance(base_dt_);
    if (w1_) {
      w1_->advance(base_dt_);
      w2_->advance(base_dt_);
    }
    ++index_;
  }
}

FieldPair zero_pair(int R) { return {FourierField(R), FourierField(R)}; }

FieldPair z_at(const CommonNoise& noise, double t) {
  return sample_z(noise.z(), 0, t, noise.grid_radius());
}

namespace {

struct StepCoeffs {
  std::vector<double> c, s, q;  // cos, sin/w, (1-cos)/w^2 per |k|^2
  void build(int R, double h) {
    const std::size_t n = std::size_t(2) * R * R + 1;
    c.resize(n);
    s.resize(n);
    q.resize(n);
    for (std::size_t n2 = 0; n2 < n; ++n2) {
      const double w = std::sqrt(double(n2));
      if (n2 == 0) {
        c[0] = 1.0;
        s[0] = h;
        q[0] = h * h / 2;
        continue;
      }
      const double sh = std::sin(w * h / 2);
      c[n2] = std::cos(w * h);
      s[n2] = std::sin(w * h) / w;
      q[n2] = 2.0 * sh * sh / (w * w);
    }
  }
};

}  // namespace

struct ScalarSolver::Impl {
  SolverOptions opt;
  int R = 0, RA = 0, M = 0;
  std::uint64_t steps = 0;
  FourierField psi, dpsi;
  FourierField f0_0, G0, f0_prev_mid;
  bool have_prev_mid = false;
  FourierField psi_mid, f0_mid, G_mid;
  StepCoeffs full, half;
  VectorPotentialState pot;
  double lorenz_max = 0.0, cfl_max = 0.0;
  fft::CBuffer phys, work;
  fft::RBuffer a0, a1, a2, q;
  fft::CBuffer halfbuf;

  double t() const { return double(steps) * opt.dt; }

  void load_potential(const CommonNoise& noise, double tau) {
    if (!noise.has_gauge() || (noise.w1().truncation() != 0 && noise.w1().truncation() < opt.N))
      throw std::invalid_argument("current banks do not cover the truncation");
    pot = sample_A(noise.w1(), noise.w2(), opt.N, tau, RA);
    lorenz_max = std::max(lorenz_max, lorenz_residual(pot));
    const std::size_t n = std::size_t(M) * M;
    fft::to_physical_real(pot.A[0], M, a0.data(), halfbuf.data());
    fft::to_physical_real(pot.A[1], M, a1.data(), halfbuf.data());
    fft::to_physical_real(pot.A[2], M, a2.data(), halfbuf.data());
    const double m2 = opt.renormalize ? mass_squared(opt.N, tau) : 0.0;
    double amax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      q[i] = a0[i] * a0[i] + a1[i] * a1[i] + a2[i] * a2[i] - m2;
      amax = std::max({amax, std::abs(a0[i]), std::abs(a1[i]), std::abs(a2[i])});
    }
    cfl_max = std::max(cfl_max, amax * opt.dt);
  }

  // f0 = (A^0 phi)^, G = 2 k_a (A^a phi)^ + (Q phi)^ with phi = z + psi_hat.
  void forcing(const FourierField& z, const FourierField& p, FourierField& f0, FourierField& G) {
    f0 = FourierField(R);
    G = FourierField(R);
    if (!opt.gauge) return;
    const std::size_t n = std::size_t(M) * M;
    FourierField phi = p;
    phi += z;
    fft::to_physical(phi, M, phys.data());
    FourierField tmp(R);
    auto product = [&](const double* a, FourierField& out) {
      for (std::size_t i = 0; i < n; ++i) work[i] = a[i] * phys[i];
      fft::from_physical(work.data(), M, out);
    };
    product(a0.data(), f0);
    product(q.data(), G);
    product(a1.data(), tmp);
    for (std::size_t i = 0; i < G.size(); ++i) G.coeffs()[i] += 2.0 * double(G.mode(i).k1) * tmp.coeffs()[i];
    product(a2.data(), tmp);
    for (std::size_t i = 0; i < G.size(); ++i) G.coeffs()[i] += 2.0 * double(G.mode(i).k2) * tmp.coeffs()[i];
  }
};

ScalarSolver::ScalarSolver(const SolverOptions& opt, FourierField phi0, FourierField phi1)
    : p_(std::make_unique<Impl>()) {
  if (!(opt.dt > 0)) throw std::invalid_argument("time step must be positive");
  if (opt.N < 1) throw std::invalid_argument("truncation must be >= 1");
  auto& s = *p_;
  s.opt = opt;
  s.R = opt.grid_radius;
  if (phi0.radius() != s.R || phi1.radius() != s.R) throw std::invalid_argument("data radius must equal grid radius");
  s.RA = std::min(s.R, (9 * opt.N) / 8);
  // Q = sum (A^a)^2 has radius 2 RA; Q phi must be exact on the box R.
  s.M = fft::nice_size(2 * s.RA + 2 * s.R + 1);
  s.psi = std::move(phi0);
  s.dpsi = std::move(phi1);
  s.psi.set_hermitian(false);
  s.dpsi.set_hermitian(false);
  s.f0_0 = FourierField(s.R);
  s.G0 = FourierField(s.R);
  s.full.build(s.R, opt.dt);
  s.half.build(s.R, opt.dt / 2);
  for (int a = 0; a < 3; ++a) {
    s.pot.A[a] = FourierField(s.RA, true);
    s.pot.dtA[a] = FourierField(s.RA, true);
  }
  s.pot.N = opt.N;
  if (opt.gauge) {
    const std::size_t n = std::size_t(s.M) * s.M;
    s.phys = fft::CBuffer(n);
    s.work = fft::CBuffer(n);
    s.a0 = fft::RBuffer(n);
    s.a1 = fft::RBuffer(n);
    s.a2 = fft::RBuffer(n);
    s.q = fft::RBuffer(n);
    s.halfbuf = fft::CBuffer(fft::half_len(s.M));
  }
}

ScalarSolver::~ScalarSolver() = default;
ScalarSolver::ScalarSolver(ScalarSolver&&) noexcept = default;
ScalarSolver& ScalarSolver::operator=(ScalarSolver&&) noexcept = default;

const SolverOptions& ScalarSolver::options() const { return p_->opt; }
double ScalarSolver::time() const { return p_->t(); }
double ScalarSolver::max_lorenz_residual() const { return p_->lorenz_max; }
double ScalarSolver::max_cfl() const { return p_->cfl_max; }
const VectorPotentialState& ScalarSolver::last_potential() const { return p_->pot; }

void ScalarSolver::stage_mid(const CommonNoise& noise, const FieldPair& z_mid) {
  auto& s = *p_;
  const double tm = s.t() + s.opt.dt / 2;
  if (s.opt.gauge) s.load_potential(noise, tm);
  // Predictor: f0 extrapolated linearly from the previous midpoint, G frozen.
  s.psi_mid = FourierField(s.R);
  const cplx two_i{0.0, 2.0};
  for (std::size_t i = 0; i < s.psi.size(); ++i) {
    const long n2 = s.psi.mode(i).norm2();
    const double c = s.half.c[n2], sn = s.half.s[n2], q = s.half.q[n2];
    const cplx df0 =
        s.have_prev_mid ? 0.5 * (s.f0_0.coeffs()[i] - s.f0_prev_mid.coeffs()[i]) : cplx{};
    s.psi_mid.coeffs()[i] = c * s.psi.coeffs()[i] + sn * s.dpsi.coeffs()[i] + two_i * sn * df0 -
                            q * s.G0.coeffs()[i];
  }
  s.forcing(z_mid.first, s.psi_mid, s.f0_mid, s.G_mid);
}

void ScalarSolver::stage_end(const CommonNoise& noise, const FieldPair& z_end) {
  auto& s = *p_;
  const double te = s.t() + s.opt.dt;
  if (s.opt.gauge) s.load_potential(noise, te);
  const cplx two_i{0.0, 2.0};
  FourierField psi_new(s.R);
  for (std::size_t i = 0; i < s.psi.size(); ++i) {
    const long n2 = s.psi.mode(i).norm2();
    const double c = s.full.c[n2], sn = s.full.s[n2], q = s.full.q[n2];
    psi_new.coeffs()[i] = c * s.psi.coeffs()[i] + sn * s.dpsi.coeffs()[i] +
                          two_i * sn * (s.f0_mid.coeffs()[i] - s.f0_0.coeffs()[i]) -
                          q * s.G_mid.coeffs()[i];
  }
  FourierField f0_end, G_end;
  s.forcing(z_end.first, psi_new, f0_end, G_end);
  for (std::size_t i = 0; i < s.psi.size(); ++i) {
    const long n2 = s.psi.mode(i).norm2();
    const double c = s.full.c[n2], sn = s.full.s[n2], q = s.full.q[n2];
    const double w2 = double(n2);
    s.dpsi.coeffs()[i] = -w2 * sn * s.psi.coeffs()[i] + c * s.dpsi.coeffs()[i] +
                         two_i * (f0_end.coeffs()[i] - c * s.f0_0.coeffs()[i] -
                                  w2 * q * s.f0_mid.coeffs()[i]) -
                         sn * s.G_mid.coeffs()[i];
  }
  s.psi = std::move(psi_new);
  s.f0_prev_mid = std::move(s.f0_mid);
  s.have_prev_mid = true;
  s.f0_0 = std::move(f0_end);
  s.G0 = std::move(G_end);
  ++s.steps;
}

void ScalarSolver::step(CommonNoise& noise) {
  const double h = p_->opt.dt;
  const double t = time();
  const int R = p_->R;
  noise.advance_to(t + h / 2);
  stage_mid(noise, p_->opt.noise ? z_at(noise, t + h / 2) : zero_pair(R));
  noise.advance_to(t + h);
  stage_end(noise, p_->opt.noise ? z_at(noise, t + h) : zero_pair(R));
}

ScalarState ScalarSolver::state(const FieldPair& z_now) const {
  ScalarState st;
  st.phi = p_->psi;
  st.phi += z_now.first;
  st.dtphi = p_->dpsi;
  st.dtphi += z_now.second;
  st.t = time();
  st.N = p_->opt.N;
  return st;
}

void run_ensemble(const EnsembleOptions& opt, std::uint64_t seed, const FourierField& phi0,
                  const FourierField& phi1,
                  const std::function<void(const EnsembleSnapshot&)>& on_snapshot) {
  if (opt.N_list.empty()) throw std::invalid_argument("empty truncation list");
  if (!(opt.dt > 0) || !(opt.T > 0)) throw std::invalid_argument("dt and T must be positive");
  if (opt.base_substeps < 1) throw std::invalid_argument("base_substeps must be >= 1");
  const double x = opt.T / opt.dt;
  const long nsteps = std::lround(x);
  if (std::abs(x - double(nsteps)) > 1e-9 * x) throw std::invalid_argument("T must be a multiple of dt");
  int nmax = 0;
  for (int N : opt.N_list) nmax = std::max(nmax, N);
  const int R = opt.grid_radius;
  CommonNoise noise(seed, opt.gauge ? nmax : 0, R, opt.dt / opt.base_substeps);
  std::vector<ScalarSolver> solvers;
  for (int N : opt.N_list) {
    SolverOptions so;
    so.N = N;
    so.grid_radius = R;
    so.dt = opt.dt;
    so.gauge = opt.gauge;
    so.renormalize = opt.renormalize;
    so.noise = opt.noise;
    solvers.emplace_back(so, phi0, phi1);
  }
  auto snapshot = [&](int step, const FieldPair& z) {
    EnsembleSnapshot snap;
    snap.step = step;
    snap.t = step * opt.dt;
    for (const auto& s : solvers) {
      snap.states.push_back(s.state(z));
      snap.potentials.push_back(&s.last_potential());
      snap.max_lorenz.push_back(s.max_lorenz_residual());
      snap.max_cfl.push_back(s.max_cfl());
    }
    on_snapshot(snap);
  };
  snapshot(0, zero_pair(R));
  for (long n = 0; n < nsteps; ++n) {
    const double t = double(n) * opt.dt;
    noise.advance_to(t + opt.dt / 2);
    const FieldPair zm = opt.noise ? z_at(noise, t + opt.dt / 2) : zero_pair(R);
    for (auto& s : solvers) s.stage_mid(noise, zm);
    noise.advance_to(t + opt.dt);
    const FieldPair ze = opt.noise ? z_at(noise, t + opt.dt) : zero_pair(R);
    for (auto& s : solvers) s.stage_end(noise, ze);
    const int step = int(n + 1);
    if (step % std::max(1, opt.snapshot_every) == 0 || step == nsteps) snapshot(step, ze);
  }
}

}  // namespace swelab
