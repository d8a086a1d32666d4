#pragma once

#include <cstdint>
#include <random>

namespace wdens {

namespace detail {
// splitmix64 finalizer; used to mix ids into derived stream keys.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Splittable seeded randomness: every (replicate, path, purpose) gets an
/// independent substream derived from the master seed, so simulations are
/// bit-reproducible regardless of execution order or thread count.
class RngFactory {
public:
  explicit RngFactory(std::uint64_t seed) : key_(detail::mix64(seed)) {}

  /// Derive a child factory for a sub-domain (replicate index, class label, ...).
  RngFactory child(std::uint64_t id) const {
    return RngFactory(FromKey{}, detail::mix64(key_ ^ detail::mix64(id + 1)));
  }

  /// Leaf generator for item `id` within this factory's domain.
  std::mt19937_64 stream(std::uint64_t id = 0) const {
    return std::mt19937_64(detail::mix64(key_ ^ detail::mix64(~id)));
  }

  std::uint64_t key() const { return key_; }

private:
  struct FromKey {};
  RngFactory(FromKey, std::uint64_t key) : key_(key) {}
  std::uint64_t key_;
};

}  // namespace wdens
