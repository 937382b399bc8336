#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace juliart {

/// 64-bit FNV-1a of the tag bytes. The empty tag maps to the FNV offset
/// basis 0xcbf29ce484222325.
std::uint64_t hash_variation(std::string_view tag);

/// The -v tag of a render together with the seed derived from it.
struct VariationSeed {
  std::string tag;
  std::uint64_t value = 0;

  explicit VariationSeed(std::string_view variation = {})
      : tag(variation), value(hash_variation(variation)) {}
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Extends a hierarchical path key by one index.
constexpr std::uint64_t path_combine(std::uint64_t key, std::uint64_t index) {
  return mix64(key ^ mix64(index ^ 0xd1b54a32d192ed03ULL));
}

/// Counter-based uniform stream: draw k is mix64(key + k * golden), i.e. the
/// SplitMix64 sequence started at `key`. Copyable; copies replay the same draws.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key = 0) : key_(key) {}

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(key_ + (counter_ - 1) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi); rand(lo, lo) is exactly lo.
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stream for a node of the evaluation tree: the seed folded with each path
/// index in turn.
RandomStream derive_stream(const VariationSeed& seed, std::span<const std::uint64_t> path);

}  // namespace juliart
