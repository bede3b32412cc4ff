#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "swelab/field.hpp"

namespace swelab {

enum class Channel : int { W1 = 1, W2 = 2, Z = 3 };
const char* channel_name(Channel c);

// Filtered Ito integrals of one complex Brownian motion B(k), normalised by
// E|B_t|^2 = t: i1 = int dB, ic = int cos(s|k|) dB, is = int sin(s|k|) dB,
// it = int s dB (tracked for k = 0 only).
struct DriverState {
  cplx i1, ic, is, it;
};

// Joint covariance of (int f_i dB) over [0, dt] for f = (1, cos(u w) - 1, sin(u w)),
// or (1, u) when w == 0. Gram and lower Cholesky factor are row-major dim x dim.
struct LocalGram {
  std::array<double, 9> gram{};
  std::array<double, 9> chol{};
  int dim = 3;
};
LocalGram local_gram(double omega, double dt);

class ModeDriverBank {
 public:
  // truncation > 0 keeps modes with rho_{<=N}(k) > 0 inside the box, 0 keeps
  // the whole box of the given radius.
  ModeDriverBank(Channel channel, int truncation, int grid_radius, std::uint64_t seed);

  Channel channel() const { return channel_; }
  bool conjugate_paired() const { return channel_ != Channel::Z; }
  int truncation() const { return truncation_; }
  int extent() const { return extent_; }
  double time() const { return time_; }
  std::uint64_t steps() const { return steps_; }
  std::uint64_t stream_key() const { return key_; }

  void advance(double dt);

  bool contains(Mode k) const;
  // For conjugate-paired banks the mirrored mode returns the conjugate state.
  DriverState state(Mode k) const;

  const std::vector<Mode>& stored_modes() const { return modes_; }
  const std::vector<DriverState>& stored_states() const { return states_; }

  // Records: int32 k1, int32 k2, float64 t, then re/im of i1, ic, is, it
  // (all little-endian), one per stored mode.
  void write_dump(std::ostream& os) const;

 private:
  long slot(Mode k) const;
  const LocalGram& gram_for(long n2, double dt);

  Channel channel_;
  int truncation_;
  int extent_;
  std::uint64_t key_;
  double time_ = 0.0;
  std::uint64_t steps_ = 0;
  std::vector<Mode> modes_;
  std::vector<std::uint64_t> mode_keys_;
  std::vector<DriverState> states_;
  std::vector<long> lookup_;  // box index -> stored slot, -(slot+1) for mirrored, or kNone

  double cached_dt_ = -1.0;
  std::shared_ptr<const std::vector<LocalGram>> grams_;  // indexed by |k|^2
};

ModeDriverBank make_driver_bank(Channel channel, int truncation, int grid_radius,
                                std::uint64_t seed);

}  // namespace swelab
