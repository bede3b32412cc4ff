#pragma once

#include <fftw3.h>

#include <cstddef>
#include <utility>

#include "swelab/field.hpp"

namespace swelab::fft {

// fftw_malloc-backed array; alignment matches what the cached plans expect.
template <class T>
class Buffer {
 public:
  Buffer() = default;
  explicit Buffer(std::size_t n) : n_(n), p_(static_cast<T*>(fftw_malloc(sizeof(T) * (n ? n : 1)))) {
    if (!p_) throw std::bad_alloc();
  }
  ~Buffer() { fftw_free(p_); }
  Buffer(Buffer&& o) noexcept : n_(std::exchange(o.n_, 0)), p_(std::exchange(o.p_, nullptr)) {}
  Buffer& operator=(Buffer&& o) noexcept {
    std::swap(n_, o.n_);
    std::swap(p_, o.p_);
    return *this;
  }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;

  T* data() { return p_; }
  const T* data() const { return p_; }
  T& operator[](std::size_t i) { return p_[i]; }
  const T& operator[](std::size_t i) const { return p_[i]; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  T* p_ = nullptr;
};

using CBuffer = Buffer<cplx>;
using RBuffer = Buffer<double>;

// Smallest 2^a 3^b 5^c 7^d >= n.
int nice_size(int n);
// Grid size for which the product of fields with support radii ra, rb is
// alias-free on output modes |m|_inf <= rout.
int product_grid(int ra, int rb, int rout);

inline std::size_t half_len(int M) { return std::size_t(M) * std::size_t(M / 2 + 1); }

// Complex transforms, in place on an M*M row-major array.
void to_physical(const FourierField& f, int M, cplx* grid);
// Destroys grid. Writes every coefficient of out's box.
void from_physical(cplx* grid, int M, FourierField& out);

// Real transforms. half has half_len(M) entries and is scratch.
void to_physical_real(const FourierField& f, int M, double* grid, cplx* half);
void from_physical_real(double* grid, int M, FourierField& out, cplx* half);

// Pre-scaled variants used by the solver: scatter into an existing spectrum.
void execute_backward(int M, cplx* grid);
void execute_forward(int M, cplx* grid);

}  // namespace swelab::fft
