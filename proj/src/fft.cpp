#include "fft.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace swelab::fft {

namespace {

enum class Kind { c_fwd, c_bwd, r2c, c2r };

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan get_plan(int M, Kind kind) {
  static std::map<std::pair<int, Kind>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find({M, kind});
  if (it != cache.end()) return it->second;
  fftw_plan p = nullptr;
  // FFTW_ESTIMATE keeps plans (and hence round-off) identical between runs.
  switch (kind) {
    case Kind::c_fwd:
    case Kind::c_bwd: {
      CBuffer a(std::size_t(M) * M);
      auto* fa = reinterpret_cast<fftw_complex*>(a.data());
      p = fftw_plan_dft_2d(M, M, fa, fa, kind == Kind::c_fwd ? FFTW_FORWARD : FFTW_BACKWARD,
                           FFTW_ESTIMATE);
      break;
    }
    case Kind::r2c: {
      RBuffer r(std::size_t(M) * M);
      CBuffer h(half_len(M));
      p = fftw_plan_dft_r2c_2d(M, M, r.data(), reinterpret_cast<fftw_complex*>(h.data()),
                               FFTW_ESTIMATE);
      break;
    }
    case Kind::c2r: {
      RBuffer r(std::size_t(M) * M);
      CBuffer h(half_len(M));
      p = fftw_plan_dft_c2r_2d(M, M, reinterpret_cast<fftw_complex*>(h.data()), r.data(),
                               FFTW_ESTIMATE);
      break;
    }
  }
  if (!p) throw std::runtime_error("FFTW planning failed");
  cache.emplace(std::make_pair(M, kind), p);
  return p;
}

inline int wrap(int k, int M) { return k < 0 ? k + M : k; }

}  // namespace

int nice_size(int n) {
  if (n <= 1) return 1;
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

int product_grid(int ra, int rb, int rout) {
  ra = std::max(ra, 0);
  rb = std::max(rb, 0);
  // Output images k+l-M must avoid [-rout, rout]: M > ra + rb + rout.
  return nice_size(std::max(ra + rb + rout + 1, 2 * rout + 1));
}

void execute_backward(int M, cplx* grid) {
  auto* g = reinterpret_cast<fftw_complex*>(grid);
  fftw_execute_dft(get_plan(M, Kind::c_bwd), g, g);
}

void execute_forward(int M, cplx* grid) {
  auto* g = reinterpret_cast<fftw_complex*>(grid);
  fftw_execute_dft(get_plan(M, Kind::c_fwd), g, g);
}

void to_physical(const FourierField& f, int M, cplx* grid) {
  const int R = f.radius();
  if (2 * R + 1 > M) throw GridOverflow("field radius exceeds transform size");
  std::fill(grid, grid + std::size_t(M) * M, cplx{});
  for (int a = -R; a <= R; ++a) {
    cplx* row = grid + std::size_t(wrap(a, M)) * M;
    for (int b = -R; b <= R; ++b) row[wrap(b, M)] = f[{a, b}];
  }
  execute_backward(M, grid);
}

void from_physical(cplx* grid, int M, FourierField& out) {
  const int R = out.radius();
  if (2 * R + 1 > M) throw GridOverflow("output radius exceeds transform size");
  execute_forward(M, grid);
  const double scale = 1.0 / (double(M) * M);
  for (int a = -R; a <= R; ++a) {
    const cplx* row = grid + std::size_t(wrap(a, M)) * M;
    for (int b = -R; b <= R; ++b) out[{a, b}] = row[wrap(b, M)] * scale;
  }
}

void to_physical_real(const FourierField& f, int M, double* grid, cplx* half) {
  const int R = f.radius();
  if (2 * R + 1 > M) throw GridOverflow("field radius exceeds transform size");
  const int H = M / 2 + 1;
  std::fill(half, half + half_len(M), cplx{});
  for (int a = -R; a <= R; ++a) {
    cplx* row = half + std::size_t(wrap(a, M)) * H;
    for (int b = 0; b <= R; ++b) row[b] = f[{a, b}];
  }
  fftw_execute_dft_c2r(get_plan(M, Kind::c2r), reinterpret_cast<fftw_complex*>(half), grid);
}

void from_physical_real(double* grid, int M, FourierField& out, cplx* half) {
  const int R = out.radius();
  if (2 * R + 1 > M) throw GridOverflow("output radius exceeds transform size");
  const int H = M / 2 + 1;
  fftw_execute_dft_r2c(get_plan(M, Kind::r2c), grid, reinterpret_cast<fftw_complex*>(half));
  const double scale = 1.0 / (double(M) * M);
  for (int a = -R; a <= R; ++a) {
    const cplx* row = half + std::size_t(wrap(a, M)) * H;
    for (int b = (a > 0 ? 0 : 1); b <= R; ++b) {
      const cplx v = row[b] * scale;
      out[{a, b}] = v;
      out[{-a, -b}] = std::conj(v);
    }
  }
  out[{0, 0}] = half[0].real() * scale;
  out.set_hermitian(true);
}

}  // namespace swelab::fft
