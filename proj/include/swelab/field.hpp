#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace swelab {

using cplx = std::complex<double>;

struct Mode {
  int k1 = 0;
  int k2 = 0;

  constexpr Mode operator-() const { return {-k1, -k2}; }
  constexpr Mode operator+(Mode o) const { return {k1 + o.k1, k2 + o.k2}; }
  constexpr Mode operator-(Mode o) const { return {k1 - o.k1, k2 - o.k2}; }
  constexpr bool operator==(const Mode&) const = default;
  constexpr long norm2() const { return long(k1) * k1 + long(k2) * k2; }
  double norm() const { return std::sqrt(double(norm2())); }
  constexpr bool zero() const { return k1 == 0 && k2 == 0; }
};

inline int sup_norm(Mode k) { return std::max(std::abs(k.k1), std::abs(k.k2)); }

class GridOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fourier coefficients on the box |k|_inf <= radius. Field convention
// f(x) = sum_k fhat(k) exp(i k.x) on [0, 2pi)^2.
class FourierField {
 public:
  FourierField() = default;
  explicit FourierField(int radius, bool hermitian = false);

  static FourierField single_mode(int radius, Mode k, cplx amplitude = 1.0);

  int radius() const { return radius_; }
  int side() const { return 2 * radius_ + 1; }
  bool hermitian() const { return hermitian_; }
  void set_hermitian(bool h) { hermitian_ = h; }
  std::size_t size() const { return coeffs_.size(); }

  bool in_box(Mode k) const { return std::abs(k.k1) <= radius_ && std::abs(k.k2) <= radius_; }
  std::size_t index(Mode k) const {
    return std::size_t(k.k1 + radius_) * std::size_t(side()) + std::size_t(k.k2 + radius_);
  }
  Mode mode(std::size_t idx) const {
    const int s = side();
    return {int(idx / s) - radius_, int(idx % s) - radius_};
  }

  cplx& operator[](Mode k) { return coeffs_[index(k)]; }
  const cplx& operator[](Mode k) const { return coeffs_[index(k)]; }
  // Zero outside the box.
  cplx get(Mode k) const { return in_box(k) ? coeffs_[index(k)] : cplx{}; }

  std::vector<cplx>& coeffs() { return coeffs_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }

  FourierField& operator+=(const FourierField& o);
  FourierField& operator-=(const FourierField& o);
  FourierField& operator*=(cplx s);
  friend FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
  friend FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
  friend FourierField operator*(cplx s, FourierField a) { return a *= s; }

  // Zero-pads or truncates to a new box.
  FourierField resized(int radius) const;
  double max_abs() const;
  // Largest |k|_inf carrying a nonzero coefficient, -1 for the zero field.
  int support_radius() const;
  // Max of |f(-k) - conj f(k)| relative to max_abs.
  double hermitian_defect() const;
  FourierField conj_field() const;  // coefficients of conj(f(x))

 private:
  int radius_ = 0;
  bool hermitian_ = false;
  std::vector<cplx> coeffs_ = std::vector<cplx>(1);
};

double max_abs_diff(const FourierField& a, const FourierField& b);

}  // namespace swelab
