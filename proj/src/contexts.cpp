#include "qc/contexts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qc {

namespace {

// Canonical sort key: rank, then the index and rounded entries of the first
// nonzero column. Projector matrices are phase-free, so the key depends only
// on the algebra element itself.
std::vector<std::int64_t> projector_key(const Projector& p) {
    const Matrix& m = p.matrix();
    const int d = p.dim();
    std::vector<std::int64_t> key;
    key.reserve(2 + 2 * static_cast<std::size_t>(d));
    key.push_back(p.rank());
    int col = 0;
    while (col < d && m.col(col).norm() <= 1e-8) ++col;
    key.push_back(col);
    if (col < d) {
        for (int i = 0; i < d; ++i) {
            key.push_back(std::llround(m(i, col).real() * 1e6));
            key.push_back(std::llround(m(i, col).imag() * 1e6));
        }
    }
    return key;
}

void canonical_sort(std::vector<Projector>& projectors) {
    std::stable_sort(projectors.begin(), projectors.end(),
                     [](const Projector& a, const Projector& b) {
                         return projector_key(a) < projector_key(b);
                     });
}

Context finalize(int dim, std::vector<Projector> projectors) {
    canonical_sort(projectors);
    const bool maximal = static_cast<int>(projectors.size()) == dim;
    return Context{dim, std::move(projectors), maximal};
}

}  // namespace

Context context_from_operators(std::span<const HermitianOperator> ops, Tolerance tol) {
    require_valid(tol);
    if (ops.empty()) throw std::invalid_argument("context_from_operators: no generators");
    const int d = ops[0].dim();
    for (const auto& op : ops)
        if (op.dim() != d) throw std::invalid_argument("context_from_operators: mixed dimensions");

    for (std::size_t i = 0; i < ops.size(); ++i) {
        for (std::size_t j = i + 1; j < ops.size(); ++j) {
            if (!commutes(ops[i], ops[j], tol)) {
                const Matrix c = ops[i].matrix() * ops[j].matrix() -
                                 ops[j].matrix() * ops[i].matrix();
                throw std::invalid_argument(
                    "context_from_operators: operators " + std::to_string(i) + " and " +
                    std::to_string(j) + " do not commute (commutator norm " +
                    std::to_string(max_abs(c)) + ")");
            }
        }
    }

    // Joint refinement: decompose the first operator, then split each
    // eigenspace by the restriction of the next operator, and so on.
    std::vector<Projector> current;
    for (auto& pr : spectral_decompose(ops[0], tol).projectors) current.push_back(std::move(pr));
    for (std::size_t k = 1; k < ops.size(); ++k) {
        std::vector<Projector> refined;
        for (const Projector& q : current) {
            if (q.rank() == 1) {
                refined.push_back(q);
                continue;
            }
            const std::vector<Ket> range = projector_range_basis(q);
            Matrix v(d, q.rank());
            for (int c = 0; c < q.rank(); ++c) v.col(c) = range[static_cast<std::size_t>(c)].coords();
            Matrix restricted = v.adjoint() * ops[k].matrix() * v;
            restricted = (restricted + restricted.adjoint()) / 2.0;
            const SpectralDecomposition sub =
                spectral_decompose(HermitianOperator(std::move(restricted), Tolerance{1e-10}), tol);
            for (const Projector& s : sub.projectors) {
                Matrix lifted = v * s.matrix() * v.adjoint();
                refined.emplace_back(HermitianOperator(std::move(lifted), Tolerance{1e-10}),
                                     s.rank());
            }
        }
        current = std::move(refined);
    }

    Context ctx = finalize(d, std::move(current));

    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (!expand_in_context(ctx, ops[i], tol)) {
            throw std::runtime_error("context_from_operators: generator " + std::to_string(i) +
                                     " is not reconstructible from the joint projectors");
        }
    }
    return ctx;
}

Context context_from_basis(std::span<const Ket> basis, Tolerance tol) {
    if (!is_orthonormal_basis(basis, tol))
        throw std::invalid_argument("context_from_basis: input is not an orthonormal basis");
    std::vector<Projector> projectors;
    projectors.reserve(basis.size());
    for (const Ket& b : basis) projectors.push_back(rank1_projector(b));
    return finalize(basis[0].dim(), std::move(projectors));
}

bool contexts_equal(const Context& a, const Context& b, Tolerance tol) {
    require_valid(tol);
    if (a.dim != b.dim) throw std::invalid_argument("contexts_equal: dimension mismatch");
    if (a.projectors.size() != b.projectors.size()) return false;
    std::vector<bool> used(b.projectors.size(), false);
    for (const Projector& p : a.projectors) {
        bool matched = false;
        for (std::size_t j = 0; j < b.projectors.size(); ++j) {
            if (used[j] || b.projectors[j].rank() != p.rank()) continue;
            if (max_abs(Matrix(p.matrix() - b.projectors[j].matrix())) <= tol.eps) {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

bool contexts_commute(const Context& a, const Context& b, Tolerance tol) {
    if (a.dim != b.dim) throw std::invalid_argument("contexts_commute: dimension mismatch");
    for (const Projector& p : a.projectors)
        for (const Projector& q : b.projectors)
            if (!commutes(p.op(), q.op(), tol)) return false;
    return true;
}

CommuteCheckVerdict commute_check(const Context& a, const Context& b, Tolerance tol) {
    if (!a.maximal || !b.maximal) {
        throw std::invalid_argument(
            "commute_check: requires maximal contexts; distinct non-maximal contexts can "
            "legitimately commute, so the claim only covers the maximal case");
    }
    CommuteCheckVerdict v;
    v.equal = contexts_equal(a, b, tol);
    v.commute = contexts_commute(a, b, tol);
    v.commute_implies_equal = !v.commute || v.equal;
    return v;
}

std::optional<std::vector<double>> expand_in_context(const Context& ctx,
                                                     const HermitianOperator& a, Tolerance tol) {
    require_valid(tol);
    if (ctx.dim != a.dim()) throw std::invalid_argument("expand_in_context: dimension mismatch");
    std::vector<double> coeffs;
    coeffs.reserve(ctx.projectors.size());
    Matrix rebuilt = Matrix::Zero(ctx.dim, ctx.dim);
    for (const Projector& p : ctx.projectors) {
        const double c = (p.matrix() * a.matrix()).trace().real() / p.rank();
        coeffs.push_back(c);
        rebuilt += c * p.matrix();
    }
    const double residual = max_abs(Matrix(a.matrix() - rebuilt));
    if (residual > tol.eps * (1.0 + max_abs(a.matrix()))) return std::nullopt;
    return coeffs;
}

}  // namespace qc
