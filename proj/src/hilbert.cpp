#include "qc/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qc {

namespace {

bool integer_valued(const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const Complex& c = v(i);
        if (c.real() != std::floor(c.real()) || c.imag() != std::floor(c.imag())) return false;
    }
    return true;
}

}  // namespace

Ket::Ket(Vector coords) : coords_(std::move(coords)) {
    if (coords_.size() < 1) throw std::invalid_argument("Ket: dimension must be at least 1");
    if (!coords_.allFinite()) throw std::invalid_argument("Ket: components must be finite");
    exact_ = integer_valued(coords_);
}

Ket::Ket(std::initializer_list<Complex> coords)
    : Ket(Eigen::Map<const Vector>(coords.begin(), static_cast<Eigen::Index>(coords.size()))) {}

Ket standard_basis_ket(int dim, int index) {
    if (dim < 1 || index < 0 || index >= dim)
        throw std::invalid_argument("standard_basis_ket: index out of range");
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return Ket(std::move(v));
}

Complex inner_product(const Ket& x, const Ket& y) {
    if (x.dim() != y.dim())
        throw std::invalid_argument("inner_product: dimension mismatch (" +
                                    std::to_string(x.dim()) + " vs " + std::to_string(y.dim()) +
                                    ")");
    // sum_i x_i conj(y_i); Eigen's dot conjugates its left argument.
    return y.coords().dot(x.coords());
}

double norm(const Ket& x) { return x.coords().norm(); }

bool is_orthonormal_basis(std::span<const Ket> vectors, Tolerance tol) {
    require_valid(tol);
    if (vectors.empty()) return false;
    const int d = vectors[0].dim();
    for (const Ket& v : vectors)
        if (v.dim() != d) throw std::invalid_argument("is_orthonormal_basis: mixed dimensions");
    if (static_cast<int>(vectors.size()) != d) return false;

    const bool exact = std::all_of(vectors.begin(), vectors.end(),
                                   [](const Ket& v) { return v.exact(); });
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i; j < vectors.size(); ++j) {
            const Complex p = inner_product(vectors[i], vectors[j]);
            const Complex want = (i == j) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            if (exact) {
                if (p != want) return false;
            } else if (std::abs(p - want) > tol.eps) {
                return false;
            }
        }
    }
    return true;
}

std::vector<Complex> coordinates(const Ket& x, std::span<const Ket> basis, Tolerance tol) {
    if (!is_orthonormal_basis(basis, tol))
        throw std::invalid_argument("coordinates: basis is not orthonormal");
    if (x.dim() != basis[0].dim())
        throw std::invalid_argument("coordinates: vector/basis dimension mismatch");
    std::vector<Complex> lambdas;
    lambdas.reserve(basis.size());
    for (const Ket& b : basis) lambdas.push_back(inner_product(x, b));
    return lambdas;
}

std::vector<Ket> extend_to_orthonormal_basis(std::span<const Ket> vectors, int dim,
                                             Tolerance tol) {
    require_valid(tol);
    if (dim < 1) throw std::invalid_argument("extend_to_orthonormal_basis: dimension must be >= 1");
    for (const Ket& v : vectors)
        if (v.dim() != dim)
            throw std::invalid_argument("extend_to_orthonormal_basis: input dimension mismatch");
    if (static_cast<int>(vectors.size()) > dim)
        throw std::invalid_argument("extend_to_orthonormal_basis: more inputs than dimension");

    std::vector<Vector> accepted;
    accepted.reserve(static_cast<std::size_t>(dim));

    auto residual = [&accepted](Vector v) {
        for (const Vector& a : accepted) v -= a.dot(v) * a;
        return v;
    };

    // Largest-residual pivoting, ties to the lowest index.
    auto consume_pool = [&](std::vector<Vector>& pool, bool require_all) {
        std::vector<bool> used(pool.size(), false);
        for (std::size_t step = 0; step < pool.size(); ++step) {
            double best = -1.0;
            std::size_t best_i = pool.size();
            std::vector<Vector> residuals(pool.size());
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (used[i]) continue;
                residuals[i] = residual(pool[i]);
                double n = residuals[i].norm();
                if (n > best + 1e-15) {
                    best = n;
                    best_i = i;
                }
            }
            if (best_i == pool.size()) break;
            if (best <= tol.eps * (1.0 + pool[best_i].norm())) {
                if (require_all)
                    throw std::invalid_argument(
                        "extend_to_orthonormal_basis: input vectors are linearly dependent");
                used[best_i] = true;
                --step;  // candidate dropped, no vector accepted this round
                continue;
            }
            used[best_i] = true;
            accepted.push_back(residuals[best_i] / best);
            if (static_cast<int>(accepted.size()) == dim) break;
        }
    };

    std::vector<Vector> inputs;
    inputs.reserve(vectors.size());
    for (const Ket& v : vectors) inputs.push_back(v.coords());
    consume_pool(inputs, true);

    std::vector<Vector> completion;
    completion.reserve(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        Vector e = Vector::Zero(dim);
        e(i) = 1.0;
        completion.push_back(std::move(e));
    }
    consume_pool(completion, false);

    if (static_cast<int>(accepted.size()) != dim)
        throw std::runtime_error("extend_to_orthonormal_basis: completion failed");

    std::vector<Ket> basis;
    basis.reserve(accepted.size());
    for (Vector& v : accepted) basis.emplace_back(std::move(v));
    return basis;
}

}  // namespace qc
