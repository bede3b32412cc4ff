#include "swelab/rng.hpp"

#include <sodium.h>

#include <array>
#include <stdexcept>

namespace swelab {

namespace {

void put_u64(std::vector<unsigned char>& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

}  // namespace

std::uint64_t seed_derive(std::uint64_t root, const std::vector<SeedLabel>& labels) {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw std::runtime_error("libsodium initialisation failed");
  std::vector<unsigned char> msg{'s', 'w', 'e', 'l', 'a', 'b', 0};
  put_u64(msg, root);
  put_u64(msg, labels.size());
  for (const auto& l : labels) {
    if (const auto* i = std::get_if<std::int64_t>(&l)) {
      msg.push_back('i');
      put_u64(msg, static_cast<std::uint64_t>(*i));
    } else {
      const auto& s = std::get<std::string>(l);
      msg.push_back('s');
      put_u64(msg, s.size());
      msg.insert(msg.end(), s.begin(), s.end());
    }
  }
  std::array<unsigned char, crypto_generichash_BYTES_MIN> out{};
  crypto_generichash(out.data(), out.size(), msg.data(), msg.size(), nullptr, 0);
  std::uint64_t key = 0;
  for (int i = 0; i < 8; ++i) key |= std::uint64_t(out[i]) << (8 * i);
  return key;
}

}  // namespace swelab
