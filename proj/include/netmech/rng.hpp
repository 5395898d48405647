#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace netmech {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix_seed(mix_seed(master) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t stream) {
  return Rng(derive_seed(master, stream));
}

// 53-bit uniform in [0, 1); identical across standard libraries.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline int bernoulli(Rng& rng, double p) { return uniform01(rng) < p ? 1 : 0; }

// Worker count: NETMECH_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, n) across worker_count() threads. Work items must be independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace netmech
