#include <algorithm>
#include <cmath>

#include "context.hpp"
#include "swelab/estimates.hpp"
#include "swelab/gauge.hpp"
#include "swelab/parallel.hpp"
#include "swelab/scalar.hpp"
#include "swelab/stats.hpp"

namespace swelab::harness {

namespace {

// Lattice point of the given length, off-axis when one exists.
Mode mode_of_modulus(long r) {
  for (long a = 1; a < r; ++a) {
    const long b2 = r * r - a * a;
    const long b = std::lround(std::sqrt(double(b2)));
    if (b * b == b2 && b > 0) return {int(a), int(b)};
  }
  return {int(r), 0};
}

double zscore(double diff, double se) {
  if (se > 0) return diff / se;
  return std::abs(diff) < 1e-14 ? 0.0 : INFINITY;
}

}  // namespace

void run_covariance(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  ctx.exercises = "Lorenz constraint and space-time covariances of the vector potential and of z";
  const long R = cfg.get_int("grid.grid_radius");

  // Lorenz constraint on the truncated potentials.
  const auto Ns = cfg.get_int_list("grid.N_list");
  std::vector<double> lt = cfg.get_double_list("covariance.lorenz_times");
  std::sort(lt.begin(), lt.end());
  const long L = cfg.get_int("covariance.lorenz_samples");
  std::vector<std::vector<double>> resid(static_cast<std::size_t>(L));
  parallel_for(std::size_t(L), ctx.workers, [&](std::size_t s) {
    const std::uint64_t seed = ctx.derive({std::string("covariance"), std::string("lorenz"), std::int64_t(s)});
    ModeDriverBank w1(Channel::W1, int(Ns.back()), int(R), seed), w2(Channel::W2, int(Ns.back()), int(R), seed);
    double prev = 0.0;
    for (double t : lt) {
      w1.advance(t - prev);
      w2.advance(t - prev);
      prev = t;
      for (long N : Ns) resid[s].push_back(lorenz_residual(sample_A(w1, w2, int(N), t, int(R))));
    }
  });
  CsvTable lor("lorenz.csv", {"sample", "N", "t[time]", "residual[1]"});
  double lmax = 0.0;
  for (long s = 0; s < L; ++s) {
    std::size_t i = 0;
    for (double t : lt)
      for (long N : Ns) {
        const double r = resid[std::size_t(s)][i++];
        lmax = std::max(lmax, r);
        lor.row({std::to_string(s), std::to_string(N), fmt(t), fmt(r)});
      }
  }
  ctx.write(lor);

  // Covariance cells.
  std::vector<Mode> modes;
  int rmax = 0;
  for (long r : cfg.get_int_list("covariance.moduli")) {
    modes.push_back(mode_of_modulus(r));
    rmax = std::max(rmax, sup_norm(modes.back()));
  }
  std::vector<double> times = cfg.get_double_list("covariance.times");
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  const std::size_t nt = times.size(), nm = modes.size();

  struct Cell {
    std::string field, component;
    int a = 0, b = 0;  // potential components (0 = time)
    std::size_t mode = 0, ti = 0, tj = 0;
    bool conj_pair = true;  // E[X(t,k) X(t',-k)] (A) or E[z(t,k) conj z(t',k)] (z)
    double closed = 0.0;
  };
  std::vector<Cell> cells;
  const std::pair<int, int> comps[4] = {{0, 0}, {1, 1}, {2, 2}, {1, 2}};
  for (std::size_t m = 0; m < nm; ++m)
    for (std::size_t i = 0; i < nt; ++i)
      for (std::size_t j = i; j < nt; ++j) {
        for (bool cp : {true, false}) {
          for (auto [a, b] : comps) {
            Cell c{"A", a == 0 ? "time" : "spatial", a, b, m, i, j, cp, 0.0};
            const Mode k = modes[m];
            const Mode l = cp ? -k : k;
            c.closed = a == 0 ? cov_A_closed(CovComponent::time, k, l, times[i], times[j])
                              : cov_A_closed(CovComponent::spatial, k, l, times[i], times[j], a, b);
            cells.push_back(c);
          }
          Cell z{"z", "scalar", 0, 0, m, i, j, cp, 0.0};
          if (cp) z.closed = cov_z_closed(modes[m], modes[m], times[i], times[j]).real();
          cells.push_back(z);
        }
      }

  const long S = cfg.get_int("run.samples");
  // Per sample: A^alpha(t_i, +-k) and z(t_i, +-k).
  std::vector<std::vector<double>> vals(cells.size(), std::vector<double>(std::size_t(S)));
  parallel_for(std::size_t(S), ctx.workers, [&](std::size_t s) {
    const std::uint64_t seed = ctx.derive({std::string("covariance"), std::string("cells"), std::int64_t(s)});
    ModeDriverBank w1(Channel::W1, 0, rmax, seed), w2(Channel::W2, 0, rmax, seed), zb(Channel::Z, 0, rmax, seed);
    std::vector<std::array<std::array<cplx, 2>, 3>> A(nt * nm);  // [t*nm+m][alpha][+k,-k]
    std::vector<std::array<cplx, 2>> Z(nt * nm);
    double prev = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      const double t = times[i];
      for (ModeDriverBank* b : {&w1, &w2, &zb}) b->advance(t - prev);
      prev = t;
      const auto st = sample_A(w1, w2, 0, t, rmax);
      const auto zf = sample_z(zb, 0, t, rmax).first;
      for (std::size_t m = 0; m < nm; ++m) {
        for (int al = 0; al < 3; ++al) A[i * nm + m][al] = {st.A[al][modes[m]], st.A[al][-modes[m]]};
        Z[i * nm + m] = {zf[modes[m]], zf[-modes[m]]};
      }
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const Cell& ce = cells[c];
      const std::size_t ii = ce.ti * nm + ce.mode, jj = ce.tj * nm + ce.mode;
      cplx v;
      if (ce.field == "A")
        v = A[ii][ce.a][0] * A[jj][ce.b][ce.conj_pair ? 1 : 0];
      else
        v = ce.conj_pair ? Z[ii][0] * std::conj(Z[jj][0]) : Z[ii][0] * Z[jj][1];
      vals[c][s] = v.real();
    }
  });

  CsvTable t("covariance.csv", {"field", "component", "a", "b", "k1[mode]", "k2[mode]", "pairing",
                                "t[time]", "tp[time]", "mc[1]", "stderr[1]", "closed[1]",
                                "z_score[1]", "within_4_stderr"});
  std::size_t inA = 0, totA = 0, inZ = 0, totZ = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Cell& ce = cells[c];
    const McSummary mc = mc_reduce(vals[c]);
    const double z = zscore(mc.mean - ce.closed, mc.stderr_);
    const bool ok = std::abs(z) <= 4.0;
    (ce.field == "A" ? inA : inZ) += ok;
    (ce.field == "A" ? totA : totZ) += 1;
    const std::string pairing = ce.field == "A" ? (ce.conj_pair ? "k,-k" : "k,k")
                                                : (ce.conj_pair ? "k,conj k" : "k,-k");
    t.row({ce.field, ce.component, std::to_string(ce.a), std::to_string(ce.b),
           std::to_string(modes[ce.mode].k1), std::to_string(modes[ce.mode].k2), pairing,
           fmt(times[ce.ti]), fmt(times[ce.tj]), fmt(mc.mean), fmt(mc.stderr_), fmt(ce.closed),
           fmt(z), ok ? "1" : "0"});
  }
  ctx.write(t);
  ctx.seeds["scheme"] = "seed_derive(root, [covariance, lorenz|cells, sample])";
  const double fa = double(inA) / double(totA), fz = double(inZ) / double(totZ);
  ctx.summary = {{"lorenz_max_residual", lmax},
                 {"lorenz_samples", L},
                 {"samples", S},
                 {"A_cells", totA},
                 {"A_fraction_within_4_stderr", fa},
                 {"z_cells", totZ},
                 {"z_fraction_within_4_stderr", fz}};
  ctx.add_check("lorenz_constraint", lmax < 1e-10, "max residual " + fmt(lmax) + " (threshold 1e-10)");
  ctx.add_check("potential_covariances", fa >= 0.95,
                std::to_string(inA) + "/" + std::to_string(totA) + " cells within 4 stderr (need 95%)");
  ctx.add_check("z_covariances", fz >= 0.95,
                std::to_string(inZ) + "/" + std::to_string(totZ) + " cells within 4 stderr (need 95%)");
}

void run_renorm(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  ctx.exercises = "renormalized mass and the renormalized quadratic term of the potential";

  // Closed form against the covariance resummation.
  CsvTable tc("renorm_closed.csv", {"N", "t[time]", "resonant_closed[1]", "resummed[1]", "rel_diff[1]"});
  double worst = 0.0;
  for (long N : cfg.get_int_list("renorm.closed_N_list"))
    for (double t : cfg.get_double_list("renorm.closed_times")) {
      const double a = resonant_quadratic_closed(int(N), t);
      double b = 2.0 * cov_A_closed(CovComponent::spatial, {0, 0}, {0, 0}, t, t);
      const int E = int(9 * N / 8) + 1;
      for (int k1 = -E; k1 <= E; ++k1)
        for (int k2 = -E; k2 <= E; ++k2) {
          const Mode k{k1, k2};
          if (k.zero()) continue;
          const double r = lp_weight(k, double(N));
          if (r == 0.0) continue;
          b += r * r *
               (cov_A_closed(CovComponent::time, k, -k, t, t) +
                cov_A_closed(CovComponent::spatial, k, -k, t, t, 1, 1) +
                cov_A_closed(CovComponent::spatial, k, -k, t, t, 2, 2));
        }
      const double rel = std::abs(a - b) / std::abs(b);
      worst = std::max(worst, rel);
      tc.row({std::to_string(N), fmt(t), fmt(a), fmt(b), fmt(rel)});
    }
  ctx.write(tc);

  // Monte Carlo spatial mean of the unsubtracted quadratic.
  const double t = cfg.get_double("renorm.t");
  const long M = cfg.get_int("renorm.mean_samples");
  CsvTable tm("renorm_mean.csv", {"N", "t[time]", "samples", "mc_mean[1]", "stderr[1]", "closed[1]", "z_score[1]"});
  double zworst = 0.0;
  for (long N : cfg.get_int_list("renorm.mean_N_list")) {
    const int RA = int(9 * N / 8);
    std::vector<double> v(static_cast<std::size_t>(M));
    parallel_for(std::size_t(M), ctx.workers, [&](std::size_t s) {
      const std::uint64_t seed = ctx.derive({std::string("renorm"), std::string("mean"), N, std::int64_t(s)});
      ModeDriverBank w1(Channel::W1, int(N), RA, seed), w2(Channel::W2, int(N), RA, seed);
      w1.advance(t);
      w2.advance(t);
      const auto st = sample_A(w1, w2, int(N), t, RA);
      double q = 0.0;
      for (const auto& f : st.A)
        for (const cplx& c : f.coeffs()) q += std::norm(c);
      v[s] = q;
    });
    const McSummary mc = mc_reduce(v);
    const double closed = resonant_quadratic_closed(int(N), t);
    const double z = zscore(mc.mean - closed, mc.stderr_);
    zworst = std::max(zworst, std::abs(z));
    tm.row({std::to_string(N), fmt(t), std::to_string(M), fmt(mc.mean), fmt(mc.stderr_), fmt(closed), fmt(z)});
  }
  ctx.write(tm);

  // Renormalized field norms and the unsubtracted zero mode.
  const long S = cfg.get_int("run.samples");
  const int lo = int(cfg.get_int("renorm.norm_N_lo")), hi = int(cfg.get_int("renorm.norm_N_hi"));
  const double nu = cfg.get_double("renorm.norm_nu");
  std::vector<std::array<double, 4>> r(static_cast<std::size_t>(S));  // norm lo, norm hi, zero lo, zero hi
  parallel_for(std::size_t(S), ctx.workers, [&](std::size_t s) {
    const std::uint64_t seed = ctx.derive({std::string("renorm"), std::string("norm"), std::int64_t(s)});
    const int RA = (9 * hi) / 8;
    ModeDriverBank w1(Channel::W1, hi, RA, seed), w2(Channel::W2, hi, RA, seed);
    w1.advance(t);
    w2.advance(t);
    int j = 0;
    for (int N : {lo, hi}) {
      const int ra = (9 * N) / 8;
      const auto st = sample_A(w1, w2, N, t, ra);
      const FourierField q = renormalized_quadratic(st, t, 2 * ra);
      r[s][j] = sobolev_norm(q, nu);
      r[s][2 + j] = q[Mode{0, 0}].real() + mass_squared(N, t);
      ++j;
    }
  });
  CsvTable tn("renorm_norms.csv", {"sample", "N", "t[time]", "norm_Q_ren[H^" + fmt(nu) + "]", "zero_mode_unsubtracted[1]"});
  std::vector<double> nlo, nhi, zlo, zhi;
  for (long s = 0; s < S; ++s) {
    const auto& x = r[std::size_t(s)];
    tn.row({std::to_string(s), std::to_string(lo), fmt(t), fmt(x[0]), fmt(x[2])});
    tn.row({std::to_string(s), std::to_string(hi), fmt(t), fmt(x[1]), fmt(x[3])});
    nlo.push_back(x[0]);
    nhi.push_back(x[1]);
    zlo.push_back(x[2]);
    zhi.push_back(x[3]);
  }
  ctx.write(tn);
  const double growth = median(nhi) / median(nlo);
  const double mlo = mc_reduce(zlo).mean, mhi = mc_reduce(zhi).mean;
  const double sratio = spectral_sum_S(hi) / spectral_sum_S(lo);
  const double mratio = mhi / mlo;
  const double rel = std::abs(mratio / sratio - 1.0);
  // Growth of the mean against the growth of the counterterm alone.
  const double increment = (mhi - mlo) / (mass_squared(hi, t) - mass_squared(lo, t));

  ctx.seeds["scheme"] = "seed_derive(root, [renorm, mean, N, sample]) and [renorm, norm, sample]";
  ctx.summary = {{"closed_worst_rel_diff", worst},
                 {"mean_worst_abs_z", zworst},
                 {"median_norm_lo", median(nlo)},
                 {"median_norm_hi", median(nhi)},
                 {"median_norm_growth", growth},
                 {"zero_mode_mean_lo", mlo},
                 {"zero_mode_mean_hi", mhi},
                 {"zero_mode_mean_ratio", mratio},
                 {"S_ratio", sratio},
                 {"mean_ratio_over_S_ratio_minus_1", rel},
                 {"mean_increment_over_mass_increment", increment}};
  ctx.add_check("resonant_resummation", worst <= 1e-10, "worst relative difference " + fmt(worst));
  ctx.add_check("mc_mean_tracks_closed", zworst <= 4.0, "worst |z| " + fmt(zworst) + " (threshold 4)");
  ctx.add_check("renormalized_norm_bounded", growth < 1.5,
                "median norm ratio N=" + std::to_string(hi) + "/" + std::to_string(lo) + " = " + fmt(growth) +
                    " (threshold 1.5)");
  ctx.add_check("unsubtracted_mean_follows_S", rel <= 0.1,
                "mean ratio " + fmt(mratio) + " vs S ratio " + fmt(sratio) + ", relative gap " + fmt(rel) +
                    " (threshold 0.1); increment ratio to counterterm " + fmt(increment));
}

void run_nullform(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  ctx.exercises = "divergence of the probabilistic null-form variance and the Leray null-form identity";
  const Mode m{int(cfg.get_int("nullform.m1")), int(cfg.get_int("nullform.m2"))};
  const auto Ns = cfg.get_int_list("grid.N_list");
  const long mcN = cfg.get_int("nullform.mc_N");
  const long S = cfg.get_int("run.samples");

  std::vector<long> closedNs = Ns;
  if (std::find(Ns.begin(), Ns.end(), mcN) == Ns.end()) closedNs.push_back(mcN);
  std::vector<ClosedVariance> cv(closedNs.size());
  std::vector<int> qp(closedNs.size());
  parallel_for(closedNs.size(), ctx.workers, [&](std::size_t i) {
    qp[i] = default_quad_points(m, int(closedNs[i]));
    cv[i] = nullform_variance_closed(m, int(closedNs[i]), qp[i]);
  });
  auto closed_at = [&](long N) {
    return cv[std::size_t(std::find(closedNs.begin(), closedNs.end(), N) - closedNs.begin())].value;
  };

  const std::uint64_t mc_seed = ctx.derive({std::string("nullform"), std::string("mc"), mcN});
  const NullformMc mc = nullform_mc(m, int(mcN), S, mc_seed, -1, ctx.workers);

  // Gradient functionals over the same kind of paths.
  const auto gNs = cfg.get_int_list("nullform.grad_N_list");
  const long gS = cfg.get_int("nullform.grad_samples");
  std::vector<NullformMc> g(gNs.size());
  for (std::size_t i = 0; i < gNs.size(); ++i)
    g[i] = gNs[i] == mcN ? mc
                         : nullform_mc(m, int(gNs[i]), gS, ctx.derive({std::string("nullform"), std::string("grad"), gNs[i]}),
                                       -1, ctx.workers);

  CsvTable ts("nullform_scan.csv", {"N", "var_closed[1]", "var_mc[1]", "stderr[1]", "samples", "quad_points", "converged"});
  std::vector<double> xN, yV;
  for (std::size_t i = 0; i < closedNs.size(); ++i) {
    const bool in_scan = i < Ns.size();
    if (in_scan) {
      xN.push_back(double(closedNs[i]));
      yV.push_back(cv[i].value);
    }
    const bool has_mc = closedNs[i] == mcN;
    ts.row({std::to_string(closedNs[i]), fmt(cv[i].value), has_mc ? fmt(mc.variance) : "",
            has_mc ? fmt(mc.stderr_) : "", has_mc ? std::to_string(S) : "0", std::to_string(qp[i]),
            cv[i].converged ? "1" : "0"});
  }
  ctx.write(ts);

  CsvTable tg("nullform_gradient.csv", {"N", "j", "var_mc[1]", "stderr[1]", "samples"});
  std::vector<double> gx;
  std::vector<double> gy[2];
  for (std::size_t i = 0; i < gNs.size(); ++i) {
    gx.push_back(std::log(double(gNs[i])));
    for (int j = 0; j < 2; ++j) {
      gy[j].push_back(g[i].grad_variance[j]);
      tg.row({std::to_string(gNs[i]), std::to_string(j + 1), fmt(g[i].grad_variance[j]),
              fmt(g[i].grad_stderr[j]), std::to_string(g[i].samples)});
    }
  }
  ctx.write(tg);

  // Null-form identity on random band-limited fields.
  const long nf = cfg.get_int("nullform.identity_fields");
  const int band = int(cfg.get_int("nullform.identity_band"));
  CsvTable ti("nullform_identity.csv", {"field", "residual[1]"});
  double idmax = 0.0;
  for (long i = 0; i < nf; ++i) {
    const auto f = random_initial_data(band, band, 1.0, 0.0, ctx.derive({std::string("nullform"), std::string("identity"), i})).first;
    const double r = null_identity_residual(f);
    idmax = std::max(idmax, r);
    ti.row({std::to_string(i), fmt(r)});
  }
  ctx.write(ti);

  bool incr = true;
  json increments = json::array();
  for (std::size_t i = 1; i < yV.size(); ++i) {
    increments.push_back(yV[i] - yV[i - 1]);
    incr = incr && yV[i] > yV[i - 1];
  }
  const LineFit all = log_fit(xN, yV);
  const std::size_t n = xN.size();
  const LineFit top = log_fit({xN[n - 3], xN[n - 2], xN[n - 1]}, {yV[n - 3], yV[n - 2], yV[n - 1]});
  const double top_rel = std::abs(top.slope - all.slope) / std::abs(all.slope);
  double gslope[2];
  for (int j = 0; j < 2; ++j) gslope[j] = linear_fit(gx, gy[j]).slope;
  const double closed_mc = closed_at(mcN);
  const double zv = (mc.variance - closed_mc) / mc.stderr_;
  const double zre = mc.mean.real() / mc.mean_stderr_re, zim = mc.mean.imag() / mc.mean_stderr_im;
  bool conv = true;
  for (const auto& c : cv) conv = conv && c.converged;

  json fit{{"m", {m.k1, m.k2}},
           {"N", xN},
           {"var_closed", yV},
           {"quadrature_converged", conv},
           {"increments", increments},
           {"increments_positive", incr},
           {"log_fit", {{"slope", all.slope}, {"intercept", all.intercept}, {"r2", all.r2}}},
           {"top3_log_fit", {{"slope", top.slope}, {"intercept", top.intercept}, {"r2", top.r2}}},
           {"top3_relative_slope_gap", top_rel},
           {"mc", {{"N", mcN},
                   {"samples", S},
                   {"variance", mc.variance},
                   {"stderr", mc.stderr_},
                   {"closed", closed_mc},
                   {"z_variance", zv},
                   {"mean_re", mc.mean.real()},
                   {"mean_im", mc.mean.imag()},
                   {"z_mean_re", zre},
                   {"z_mean_im", zim},
                   {"max_identity_defect", mc.max_identity_defect}}},
           {"gradient_log_slopes", {gslope[0], gslope[1]}},
           {"identity_max_residual", idmax}};
  ctx.write_json("nullform_fit.json", fit);
  ctx.seeds["mc"] = mc_seed;
  ctx.seeds["scheme"] = "per-sample seeds seed_derive(seed, [nullform, sample]) below the listed keys";
  ctx.summary = fit;

  ctx.add_check("increments_positive", incr, "successive increments of the closed variance");
  ctx.add_check("log_fit", all.slope > 0 && all.r2 >= 0.98,
                "slope " + fmt(all.slope) + ", R^2 " + fmt(all.r2) + " (need slope > 0 and R^2 >= 0.98)");
  ctx.add_check("top3_slope_stable", top_rel <= 0.2,
                "top-3 slope " + fmt(top.slope) + " vs all " + fmt(all.slope) + ", gap " + fmt(top_rel) +
                    " (threshold 0.2)");
  ctx.add_check("mc_variance", std::abs(zv) <= 5.0,
                "MC " + fmt(mc.variance) + " +- " + fmt(mc.stderr_) + " vs closed " + fmt(closed_mc) +
                    ", z = " + fmt(zv) + " (threshold 5)");
  ctx.add_check("mc_mean_zero", std::abs(zre) <= 4.0 && std::abs(zim) <= 4.0,
                "z(re) = " + fmt(zre) + ", z(im) = " + fmt(zim) + " (threshold 4)");
  ctx.add_check("gradient_slope", gslope[0] > 0 || gslope[1] > 0,
                "log slopes " + fmt(gslope[0]) + ", " + fmt(gslope[1]));
  if (nf > 0)
    ctx.add_check("null_identity", idmax < 1e-10, "max residual " + fmt(idmax) + " over " + std::to_string(nf) + " fields");
}

void run_counting(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  ctx.exercises = "lattice point counting bound on annuli intersected with level-set strips";
  std::vector<CountVariant> vs;
  for (const auto& v : cfg.get_string_list("counting.variants"))
    vs.push_back(v == "minus" ? CountVariant::minus
                 : v == "plus" ? CountVariant::plus
                 : v == "zero" ? CountVariant::zero
                               : CountVariant::linear);
  CountBudget budget;
  budget.max_points = cfg.get_int("counting.max_points");
  const std::uint64_t seed = ctx.derive({std::string("counting")});
  CountingScan scan;
  try {
    scan = counting_constant_scan(cfg.get_int("counting.K_max"), vs, int(cfg.get_int("counting.l_samples")), seed,
                                  int(cfg.get_int("grid.threshold_exponent")), budget, ctx.workers);
  } catch (const std::length_error& e) {
    throw std::runtime_error(std::string("budget exceeded: ") + e.what() + " (raise counting.max_points)");
  }
  CsvTable t("counting.csv", {"variant", "K[mode]", "L[mode]", "l1[mode]", "l2[mode]", "ux[1]", "uy[1]", "sigma",
                              "mu[mode]", "count", "bound[1]", "ratio[1]"});
  for (const auto& r : scan.rows)
    t.row({variant_name(r.variant), std::to_string(r.K), std::to_string(r.L), std::to_string(r.l.k1),
           std::to_string(r.l.k2), fmt(r.ux), fmt(r.uy), std::to_string(r.sigma), fmt(r.mu),
           std::to_string(r.count), fmt(r.bound), fmt(r.ratio)});
  ctx.write(t);
  CsvTable tt("counting_trends.csv", {"variant", "K[mode]", "max_ratio[1]"});
  json trends = json::array();
  bool finite = true, flat = true;
  std::string detail;
  for (const auto& tr : scan.trends) {
    for (const auto& [K, v] : tr.max_ratio_by_K) tt.row({variant_name(tr.variant), std::to_string(K), fmt(v)});
    trends.push_back({{"variant", variant_name(tr.variant)}, {"max_ratio", tr.max_ratio}, {"top_octave_log_slope", tr.top_slope}});
    finite = finite && std::isfinite(tr.max_ratio);
    flat = flat && tr.top_slope <= 0.1;
    detail += std::string(detail.empty() ? "" : ", ") + variant_name(tr.variant) + ": max " + fmt(tr.max_ratio) +
              " slope " + fmt(tr.top_slope);
  }
  ctx.write(tt);
  ctx.seeds["scan"] = seed;
  ctx.summary = {{"rows", scan.rows.size()}, {"trends", trends}};
  ctx.add_check("ratio_finite", finite, detail);
  ctx.add_check("top_octave_slope", flat, detail + " (threshold 0.1)");
}

}  // namespace swelab::harness
