#include "juliart/random.hpp"

namespace juliart {

std::uint64_t hash_variation(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char byte : tag) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RandomStream derive_stream(const VariationSeed& seed, std::span<const std::uint64_t> path) {
  std::uint64_t key = seed.value;
  for (std::uint64_t index : path) key = path_combine(key, index);
  return RandomStream(key);
}

}  // namespace juliart
