#pragma once

#include <cstdint>

#include "swelab/field.hpp"
#include "swelab/rng.hpp"

namespace testing_util {

using swelab::cplx;
using swelab::FourierField;
using swelab::Mode;

// Gaussian coefficients on |k|_inf <= band inside a box of radius R.
inline FourierField random_field(int R, int band, std::uint64_t seed, bool hermitian = false) {
  FourierField f(R, hermitian);
  const swelab::CounterStream rs{swelab::splitmix64(seed)};
  std::uint64_t j = 0;
  for (int a = -band; a <= band; ++a)
    for (int b = -band; b <= band; ++b) {
      const auto [x, y] = rs.normal_pair(j++);
      f[Mode{a, b}] = {x, y};
    }
  if (hermitian) {
    for (int a = -band; a <= band; ++a)
      for (int b = -band; b <= band; ++b) {
        const Mode k{a, b};
        if (a > 0 || (a == 0 && b > 0)) f[-k] = std::conj(f[k]);
      }
    f[Mode{0, 0}] = f[Mode{0, 0}].real();
  }
  return f;
}

// Textbook double loop, no shortcuts.
inline FourierField brute_convolution(const FourierField& f, const FourierField& g, int rout) {
  FourierField out(rout);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Mode m = f.mode(i) + g.mode(j);
      if (out.in_box(m)) out[m] += f.coeffs()[i] * g.coeffs()[j];
    }
  return out;
}

}  // namespace testing_util
