#pragma once

#include <cstdint>
#include <random>

#include "qc/matrix.hpp"

namespace qc {

class Ket;

/// Deterministic random source. Uniform and normal variates are generated
/// from the raw mt19937_64 stream by hand (std::uniform_real_distribution and
/// std::normal_distribution are not pinned down by the standard), so a seed
/// reproduces the same stream on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
    double normal();

    /// Complex standard normal (real and imaginary parts N(0, 1/2)).
    Complex complex_normal();

private:
    std::mt19937_64 gen_;
};

/// Stable per-index seed derivation (splitmix64 finalizer), so trial i of a
/// seeded run can be generated independently of trials 0..i-1.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Unitary matrix from Gram-Schmidt orthonormalization of a random complex
/// Gaussian matrix; columns processed in index order.
Matrix random_unitary(int dim, Rng& rng);

std::vector<Ket> random_orthonormal_basis(int dim, Rng& rng);

Ket random_ket(int dim, Rng& rng);

}  // namespace qc
