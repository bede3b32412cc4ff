#include "swelab/field.hpp"

#include <algorithm>

namespace swelab {

FourierField::FourierField(int radius, bool hermitian)
    : radius_(radius), hermitian_(hermitian) {
  if (radius < 0) throw std::invalid_argument("negative grid radius");
  coeffs_.assign(std::size_t(side()) * std::size_t(side()), cplx{});
}

FourierField FourierField::single_mode(int radius, Mode k, cplx amplitude) {
  FourierField f(radius);
  if (!f.in_box(k)) throw GridOverflow("mode outside grid box");
  f[k] = amplitude;
  return f;
}

static void require_same_box(const FourierField& a, const FourierField& b) {
  if (a.radius() != b.radius()) throw std::invalid_argument("field radius mismatch");
}

FourierField& FourierField::operator+=(const FourierField& o) {
  require_same_box(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  hermitian_ = hermitian_ && o.hermitian_;
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& o) {
  require_same_box(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  hermitian_ = hermitian_ && o.hermitian_;
  return *this;
}

FourierField& FourierField::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  if (s.imag() != 0.0) hermitian_ = false;
  return *this;
}

FourierField FourierField::resized(int radius) const {
  FourierField out(radius, hermitian_);
  const int r = std::min(radius, radius_);
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b) out[{a, b}] = (*this)[{a, b}];
  return out;
}

double FourierField::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

int FourierField::support_radius() const {
  int r = -1;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != cplx{}) r = std::max(r, sup_norm(mode(i)));
  return r;
}

double FourierField::hermitian_defect() const {
  double d = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Mode k = mode(i);
    d = std::max(d, std::abs((*this)[-k] - std::conj(coeffs_[i])));
  }
  const double s = max_abs();
  return s > 0 ? d / s : 0.0;
}

FourierField FourierField::conj_field() const {
  FourierField out(radius_, hermitian_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[-mode(i)] = std::conj(coeffs_[i]);
  return out;
}

double max_abs_diff(const FourierField& a, const FourierField& b) {
  const int r = std::max(a.radius(), b.radius());
  double d = 0.0;
  for (int k1 = -r; k1 <= r; ++k1)
    for (int k2 = -r; k2 <= r; ++k2) d = std::max(d, std::abs(a.get({k1, k2}) - b.get({k1, k2})));
  return d;
}

}  // namespace swelab
