#pragma once

#include <mmce/types.hpp>

#include <cstdint>
#include <random>

namespace mmce {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; decorrelates nearby integers.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive an independent stream seed from a base seed and a salt.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    return mix64(base ^ mix64(salt));
}

/// Circularly-symmetric complex Gaussian, E|x|^2 = 1.
inline Complex complex_gaussian(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0 / std::sqrt(2.0));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

/// Unit-modulus sample e^{j phi}, phi uniform on [0, 2pi).
inline Complex random_phase(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
    return std::polar(1.0, u(rng));
}

}  // namespace mmce
