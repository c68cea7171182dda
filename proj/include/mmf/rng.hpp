#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mmf {

// splitmix64 finalizer; used to derive independent RNG streams from a
// (seed, stream, substream) triple so parallel and serial runs agree.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t s1 = 0,
                                std::uint64_t s2 = 0, std::uint64_t s3 = 0) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ s1);
  h = mix64(h ^ s2);
  h = mix64(h ^ s3);
  return std::mt19937_64(h);
}

// Uniform ordered sample of `count` distinct values from [0, n), partial
// Fisher-Yates. Order of the draw is preserved.
inline std::vector<int> sample_without_replacement(int n, int count,
                                                   std::mt19937_64& rng) {
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  std::vector<int> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<int> dist(i, n - 1);
    const int j = dist(rng);
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  return out;
}

}  // namespace mmf
