#pragma once
// Counter-based splittable generator.
//
// Stream key = mix(master seed, replica index, module tag); the n-th output of
// a stream is splitmix64_finalize(key + n * golden_gamma).  Any language with
// 64-bit unsigned arithmetic reproduces the streams bit for bit.

#include <cmath>
#include <cstdint>
#include <string_view>

namespace hpq {

constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// FNV-1a, so string tags map to fixed 64-bit values.
constexpr std::uint64_t tag_hash(std::string_view tag) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

constexpr std::uint64_t stream_key(std::uint64_t master, std::uint64_t replica,
                                   std::uint64_t tag) {
  std::uint64_t k = splitmix_finalize(master + golden_gamma);
  k = splitmix_finalize(k ^ (replica + 0x632BE59BD9B4E019ULL));
  return splitmix_finalize(k ^ tag);
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) : key_(key) {}
  Rng(std::uint64_t master, std::uint64_t replica, std::string_view tag)
      : key_(stream_key(master, replica, tag_hash(tag))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return splitmix_finalize(key_ + (++counter_) * golden_gamma); }

  // 53-bit uniform on [0,1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  // Uniform on (0,1], safe for logarithms.
  double uniform_positive() { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n); multiply-shift, bias below 2^-64 * n.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
  }

  double exponential() { return -std::log(uniform_positive()); }

  // Independent child stream, e.g. one per tree.
  Rng split(std::uint64_t index) const {
    return Rng(splitmix_finalize(key_ ^ splitmix_finalize(index + 0xD1B54A32D192ED03ULL)));
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hpq
