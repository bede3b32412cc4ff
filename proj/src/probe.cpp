#include <cmath>
#include <stdexcept>

#include "swelab/scalar.hpp"

namespace swelab {

namespace {

constexpr cplx I{0.0, 1.0};

void check_inputs(const std::vector<VectorPotentialState>& A, const std::vector<ScalarState>& phi,
                  const std::vector<double>& tg) {
  if (A.size() != phi.size() || A.size() != tg.size() || tg.empty())
    throw std::invalid_argument("probe trajectories must share the time grid");
  for (std::size_t j = 0; j < tg.size(); ++j)
    if (std::abs(A[j].t - tg[j]) > 1e-9 || std::abs(phi[j].t - tg[j]) > 1e-9)
      throw std::invalid_argument("probe trajectory time mismatch");
}

template <class Product>
FourierField integrand(const VectorPotentialState& A, const ScalarState& s, Product&& prod) {
  // d_t(A^0 phi) by the product rule, then d_a(A^a phi).
  FourierField g = prod(A.dtA[0], s.phi);
  g += prod(A.A[0], s.dtphi);
  const FourierField g1 = prod(A.A[1], s.phi);
  const FourierField g2 = prod(A.A[2], s.phi);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Mode k = g.mode(i);
    g.coeffs()[i] += I * (double(k.k1) * g1.coeffs()[i] + double(k.k2) * g2.coeffs()[i]);
  }
  return g;
}

}  // namespace

ProbeResult smoothing_probe(const std::vector<VectorPotentialState>& A,
                            const std::vector<ScalarState>& phi, const std::vector<double>& tg,
                            ParaKind kind, int e, long k_min, long k_max) {
  check_inputs(A, phi, tg);
  const int R = phi[0].phi.radius();
  std::vector<FourierField> G;
  G.reserve(tg.size());
  for (std::size_t j = 0; j < tg.size(); ++j)
    G.push_back(integrand(A[j], phi[j], [&](const FourierField& a, const FourierField& b) {
      return paraproduct(a, b, kind, e, R);
    }));
  ProbeResult r;
  r.kind = kind;
  r.field = duhamel_final(G, tg);
  r.profile = lp_profile(r.field, k_min, k_max);
  r.exponent = r.profile.degenerate ? 0.0 : -r.profile.fitted_slope;
  return r;
}

FourierField smoothing_full(const std::vector<VectorPotentialState>& A,
                            const std::vector<ScalarState>& phi, const std::vector<double>& tg) {
  check_inputs(A, phi, tg);
  const int R = phi[0].phi.radius();
  std::vector<FourierField> G;
  G.reserve(tg.size());
  for (std::size_t j = 0; j < tg.size(); ++j)
    G.push_back(integrand(A[j], phi[j], [&](const FourierField& a, const FourierField& b) {
      return dealiased_product(a, b, R, ProductMethod::fft);
    }));
  return duhamel_final(G, tg);
}

}  // namespace swelab
