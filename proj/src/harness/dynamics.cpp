#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "context.hpp"
#include "swelab/parallel.hpp"
#include "swelab/scalar.hpp"
#include "swelab/stats.hpp"

namespace swelab::harness {

namespace {

std::vector<int> as_ints(const std::vector<long>& v) { return {v.begin(), v.end()}; }

FieldPair initial_data(const Context& ctx, const std::string& exp, long sample) {
  const int R = int(ctx.cfg.get_int("grid.grid_radius"));
  if (ctx.cfg.raw("data.kind") == "zero") return zero_pair(R);
  return random_initial_data(R, int(ctx.cfg.get_int("data.band")), ctx.cfg.get_double("data.norm"),
                     ctx.cfg.get_double("data.nu"), ctx.derive({exp, std::string("data"), sample}));
}

EnsembleOptions ensemble_options(const RunConfig& cfg) {
  EnsembleOptions o;
  o.N_list = as_ints(cfg.get_int_list("grid.N_list"));
  o.grid_radius = int(cfg.get_int("grid.grid_radius"));
  o.dt = cfg.get_double("grid.dt");
  o.T = cfg.get_double("grid.T");
  o.base_substeps = int(cfg.get_int("grid.base_substeps"));
  return o;
}

void cfl_warnings(Context& ctx, const std::vector<int>& Ns, const std::vector<double>& cfl) {
  for (std::size_t i = 0; i < Ns.size(); ++i)
    if (cfl[i] > 0.5)
      ctx.warn("CFL advisory: max ||A||_inf * dt = " + fmt(cfl[i]) + " > 0.5 at N = " +
               std::to_string(Ns[i]) + " (accuracy, not stability)");
}

json seed_list(const Context& ctx, const std::string& exp, const std::string& what, long n) {
  json a = json::array();
  for (long s = 0; s < n; ++s) a.push_back(ctx.derive({exp, what, s}));
  return a;
}

}  // namespace

void run_simulate(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  ctx.exercises = "truncated covariant wave equation driven by sampled Lorenz-gauge potentials";
  EnsembleOptions o = ensemble_options(cfg);
  o.snapshot_every = int(cfg.get_int("simulate.snapshot_every"));
  o.gauge = cfg.get_bool("simulate.gauge");
  o.renormalize = cfg.get_bool("simulate.renormalize");
  o.noise = cfg.get_bool("simulate.noise");
  const long S = cfg.get_int("run.samples");
  const int dump = int(cfg.get_int("simulate.dump_radius"));
  ctx.seeds["noise"] = seed_list(ctx, "simulate", "noise", S);
  if (cfg.raw("data.kind") == "random") ctx.seeds["data"] = seed_list(ctx, "simulate", "data", S);

  struct SampleOut {
    std::vector<std::vector<std::string>> rows;
    json norms = json::array();
    std::vector<double> cfl;
    double lorenz = 0.0;
    bool finite = true;
  };
  const std::size_t ns = static_cast<std::size_t>(S);
  std::vector<SampleOut> outs(ns);
  parallel_for(std::size_t(S), ctx.workers, [&](std::size_t si) {
    const long s = long(si);
    SampleOut& so = outs[si];
    so.cfl.assign(o.N_list.size(), 0.0);
    const auto [p0, p1] = initial_data(ctx, "simulate", s);
    run_ensemble(o, ctx.derive({std::string("simulate"), std::string("noise"), s}), p0, p1,
                 [&](const EnsembleSnapshot& snap) {
                   for (std::size_t i = 0; i < snap.states.size(); ++i) {
                     const ScalarState& st = snap.states[i];
                     for (int a = -dump; a <= dump; ++a)
                       for (int b = -dump; b <= dump; ++b) {
                         const cplx f = st.phi[Mode{a, b}], g = st.dtphi[Mode{a, b}];
                         so.rows.push_back({std::to_string(s), std::to_string(st.N),
                                            std::to_string(snap.step), fmt(snap.t),
                                            std::to_string(a), std::to_string(b), fmt(f.real()),
                                            fmt(f.imag()), fmt(g.real()), fmt(g.imag())});
                       }
                     const double l2 = l2_norm(st.phi);
                     const double e = pair_norm(st.phi, st.dtphi, 0.25);
                     so.finite = so.finite && std::isfinite(l2) && std::isfinite(e);
                     so.lorenz = std::max(so.lorenz, snap.max_lorenz[i]);
                     so.cfl[i] = std::max(so.cfl[i], snap.max_cfl[i]);
                     so.norms.push_back({{"sample", s},
                                         {"N", st.N},
                                         {"step", snap.step},
                                         {"t", snap.t},
                                         {"l2_phi", l2},
                                         {"pair_norm_quarter", e},
                                         {"lorenz_residual_max", snap.max_lorenz[i]},
                                         {"cfl_max", snap.max_cfl[i]}});
                   }
                 });
  });

  CsvTable snap("snapshots.csv", {"sample", "N", "step", "t[time]", "kx[mode]", "ky[mode]",
                                  "re_phi_hat[1]", "im_phi_hat[1]", "re_dtphi_hat[1/time]",
                                  "im_dtphi_hat[1/time]"});
  json norms = json::array();
  double lorenz = 0.0;
  bool finite = true;
  std::vector<double> cfl(o.N_list.size(), 0.0);
  for (auto& so : outs) {
    for (auto& r : so.rows) snap.row(r);
    for (auto& n : so.norms) norms.push_back(n);
    lorenz = std::max(lorenz, so.lorenz);
    finite = finite && so.finite;
    for (std::size_t i = 0; i < cfl.size(); ++i) cfl[i] = std::max(cfl[i], so.cfl[i]);
  }
  ctx.write(snap);
  ctx.write_json("snapshot_norms.json", {{"norm_convention", "pair_norm(phi, dtphi, 1/4) and (2pi)^2-weighted L2"},
                                         {"snapshots", norms}});
  cfl_warnings(ctx, o.N_list, cfl);

  if (cfg.get_bool("simulate.driver_dump")) {
    int nmax = 0;
    for (int N : o.N_list) nmax = std::max(nmax, N);
    CommonNoise noise(ctx.derive({std::string("simulate"), std::string("noise"), std::int64_t(0)}),
                      o.gauge ? nmax : 0, o.grid_radius, o.dt / o.base_substeps);
    noise.advance_to(o.T);
    auto dump_bank = [&](const ModeDriverBank& b, const std::string& name) {
      std::ofstream os(ctx.out / name, std::ios::binary);
      if (!os) throw std::runtime_error("cannot open " + name);
      b.write_dump(os);
      ctx.tables.push_back({name, "binary", {}, b.stored_modes().size()});
    };
    dump_bank(noise.z(), "drivers_Z.bin");
    if (noise.has_gauge()) {
      dump_bank(noise.w1(), "drivers_W1.bin");
      dump_bank(noise.w2(), "drivers_W2.bin");
    }
  }

  ctx.summary = {{"samples", S},
                 {"snapshots", norms.size()},
                 {"max_lorenz_residual", lorenz},
                 {"max_cfl", *std::max_element(cfl.begin(), cfl.end())},
                 {"all_norms_finite", finite}};
  ctx.add_check("finite_norms", finite, finite ? "every snapshot norm is finite" : "non-finite norm found");
  ctx.add_check("lorenz_residual", lorenz < 1e-10, "max residual " + fmt(lorenz) + " (threshold 1e-10)");
}

void run_converge(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  ctx.exercises = "pathwise Cauchy convergence of truncated solutions in N under common noise";
  const std::vector<int> Ns = as_ints(cfg.get_int_list("grid.N_list"));
  std::vector<int> all = Ns;
  for (int N : Ns) all.push_back(2 * N);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  EnsembleOptions o = ensemble_options(cfg);
  o.N_list = all;
  o.snapshot_every = 1;
  const double delta = cfg.get_double("converge.delta");
  const long S = cfg.get_int("run.samples");
  ctx.seeds["noise"] = seed_list(ctx, "converge", "noise", S);
  if (cfg.raw("data.kind") == "random") ctx.seeds["data"] = seed_list(ctx, "converge", "data", S);

  auto pos = [&](int N) { return std::size_t(std::find(all.begin(), all.end(), N) - all.begin()); };
  struct SampleOut {
    std::vector<double> D, cfl;
    double lorenz = 0.0;
  };
  const std::size_t ns = static_cast<std::size_t>(S);
  std::vector<SampleOut> outs(ns);
  parallel_for(std::size_t(S), ctx.workers, [&](std::size_t si) {
    const long s = long(si);
    SampleOut& so = outs[si];
    so.D.assign(Ns.size(), 0.0);
    const auto [p0, p1] = initial_data(ctx, "converge", s);
    run_ensemble(o, ctx.derive({std::string("converge"), std::string("noise"), s}), p0, p1,
                 [&](const EnsembleSnapshot& snap) {
                   for (std::size_t i = 0; i < Ns.size(); ++i) {
                     const ScalarState& a = snap.states[pos(Ns[i])];
                     const ScalarState& b = snap.states[pos(2 * Ns[i])];
                     so.D[i] = std::max(so.D[i], pair_norm(b.phi - a.phi, b.dtphi - a.dtphi, -delta));
                   }
                   so.cfl = snap.max_cfl;
                   for (double l : snap.max_lorenz) so.lorenz = std::max(so.lorenz, l);
                 });
  });

  std::vector<double> med(Ns.size());
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    std::vector<double> v;
    for (const auto& so : outs) v.push_back(so.D[i]);
    med[i] = median(v);
  }
  const std::string unit = "[H^-" + fmt(delta) + " x H^-" + fmt(1 + delta) + "]";
  CsvTable t("converge.csv", {"N", "sample", "D_N" + unit, "median_D_N" + unit});
  for (std::size_t i = 0; i < Ns.size(); ++i)
    for (long s = 0; s < S; ++s)
      t.row({std::to_string(Ns[i]), std::to_string(s), fmt(outs[std::size_t(s)].D[i]), fmt(med[i])});
  ctx.write(t);

  std::vector<double> cfl(all.size(), 0.0);
  double lorenz = 0.0;
  for (const auto& so : outs) {
    for (std::size_t i = 0; i < cfl.size() && i < so.cfl.size(); ++i) cfl[i] = std::max(cfl[i], so.cfl[i]);
    lorenz = std::max(lorenz, so.lorenz);
  }
  cfl_warnings(ctx, all, cfl);

  bool decreasing = true;
  for (std::size_t i = 1; i < med.size(); ++i) decreasing = decreasing && med[i] < med[i - 1];
  const double ratio = med.back() / med.front();
  json meds = json::array();
  for (std::size_t i = 0; i < Ns.size(); ++i) meds.push_back({{"N", Ns[i]}, {"median_D_N", med[i]}});
  ctx.summary = {{"delta", delta},         {"samples", S},
                 {"medians", meds},        {"strictly_decreasing", decreasing},
                 {"last_over_first", ratio}, {"max_lorenz_residual", lorenz}};
  std::string detail = "medians";
  for (std::size_t i = 0; i < Ns.size(); ++i) detail += " N=" + std::to_string(Ns[i]) + ":" + fmt(med[i]);
  ctx.add_check("median_strictly_decreasing", decreasing, detail);
  ctx.add_check("decay_factor", ratio <= 0.5,
                "D_" + std::to_string(Ns.back()) + "/D_" + std::to_string(Ns.front()) + " = " + fmt(ratio) +
                    " (threshold 0.5)");
}

void run_smoothing(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  ctx.exercises = "regularity gain of the high-high and high-low paraproduct interactions";
  const std::vector<long> Nl = cfg.get_int_list("grid.N_list");
  EnsembleOptions o = ensemble_options(cfg);
  o.N_list = {int(Nl.back())};
  o.snapshot_every = int(cfg.get_int("smoothing.snapshot_every"));
  const int e = int(cfg.get_int("grid.threshold_exponent"));
  const long kmin = cfg.get_int("smoothing.fit_kmin"), kmax = cfg.get_int("smoothing.fit_kmax");
  const long S = cfg.get_int("run.samples");
  ctx.seeds["noise"] = seed_list(ctx, "smoothing", "noise", S);
  if (cfg.raw("data.kind") == "random") ctx.seeds["data"] = seed_list(ctx, "smoothing", "data", S);
  const ParaKind kinds[3] = {ParaKind::lo_hi, ParaKind::hi_hi, ParaKind::hi_lo};
  const char* names[3] = {"lo_hi", "hi_hi", "hi_lo"};

  const std::size_t ns = static_cast<std::size_t>(S);
  std::vector<std::array<ProbeResult, 3>> res(ns);
  parallel_for(std::size_t(S), ctx.workers, [&](std::size_t si) {
    const long s = long(si);
    const auto [p0, p1] = initial_data(ctx, "smoothing", s);
    std::vector<VectorPotentialState> A;
    std::vector<ScalarState> phi;
    std::vector<double> tg;
    run_ensemble(o, ctx.derive({std::string("smoothing"), std::string("noise"), s}), p0, p1,
                 [&](const EnsembleSnapshot& snap) {
                   A.push_back(*snap.potentials[0]);
                   A.back().t = snap.t;
                   phi.push_back(snap.states[0]);
                   tg.push_back(snap.t);
                 });
    for (int k = 0; k < 3; ++k) {
      res[si][k] = smoothing_probe(A, phi, tg, kinds[k], e, kmin, kmax);
      res[si][k].field = FourierField();
    }
  });

  CsvTable t("smoothing.csv", {"sample", "kind", "exponent[1]", "fitted_slope[1]"});
  CsvTable prof("smoothing_profile.csv", {"sample", "kind", "K[mode]", "block_l2[1]"});
  double med[3];
  for (int k = 0; k < 3; ++k) {
    std::vector<double> ex;
    for (long s = 0; s < S; ++s) {
      const ProbeResult& r = res[std::size_t(s)][k];
      ex.push_back(r.exponent);
      t.row({std::to_string(s), names[k], fmt(r.exponent), fmt(r.profile.fitted_slope)});
      for (const auto& [K, v] : r.profile.entries) prof.row({std::to_string(s), names[k], std::to_string(K), fmt(v)});
    }
    med[k] = median(ex);
  }
  ctx.write(t);
  ctx.write(prof);
  ctx.summary = {{"N", Nl.back()},
                 {"fit_window", {kmin, kmax}},
                 {"median_exponent", {{"lo_hi", med[0]}, {"hi_hi", med[1]}, {"hi_lo", med[2]}}},
                 {"gain_hi_hi", med[1] - med[0]},
                 {"gain_hi_lo", med[2] - med[0]}};
  ctx.add_check("hi_hi_gain", med[1] >= med[0] + 0.15,
                "median exponent hi_hi " + fmt(med[1]) + " vs lo_hi " + fmt(med[0]) + " + 0.15");
  ctx.add_check("hi_lo_gain", med[2] >= med[0] + 0.15,
                "median exponent hi_lo " + fmt(med[2]) + " vs lo_hi " + fmt(med[0]) + " + 0.15");
}

}  // namespace swelab::harness
