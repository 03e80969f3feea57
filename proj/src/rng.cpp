#include "qc/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qc/hilbert.hpp"

namespace qc {

double Rng::normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
    const double s = std::numbers::sqrt2;
    return {normal() / s, normal() / s};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer over the combined value
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Matrix random_unitary(int dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("random_unitary: dimension must be positive");
    Matrix g(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();

    // Modified Gram-Schmidt, columns in index order. A fresh Gaussian column
    // replaces any that degenerates (probability zero, but keeps the loop
    // total).
    Matrix u(dim, dim);
    for (int j = 0; j < dim; ++j) {
        Vector v = g.col(j);
        for (int attempt = 0;; ++attempt) {
            for (int k = 0; k < j; ++k) v -= u.col(k).dot(v) * u.col(k);
            double n = v.norm();
            if (n > 1e-12) {
                u.col(j) = v / n;
                break;
            }
            if (attempt > 8) throw std::runtime_error("random_unitary: orthonormalization failed");
            for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
        }
    }
    return u;
}

std::vector<Ket> random_orthonormal_basis(int dim, Rng& rng) {
    Matrix u = random_unitary(dim, rng);
    std::vector<Ket> basis;
    basis.reserve(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) basis.emplace_back(Vector(u.col(j)));
    return basis;
}

Ket random_ket(int dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("random_ket: dimension must be positive");
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
    return Ket(std::move(v));
}

}  // namespace qc
