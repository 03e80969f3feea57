#include "qc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qc {

HermitianOperator::HermitianOperator(Matrix m, Tolerance tol) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 1)
        throw std::invalid_argument("HermitianOperator: matrix must be square and nonempty");
    if (!all_finite(mat_)) throw std::invalid_argument("HermitianOperator: entries must be finite");
    if (!is_self_adjoint(mat_, tol))
        throw std::invalid_argument("HermitianOperator: matrix is not self-adjoint");
    exact_ = integer_entries(mat_);
}

Projector::Projector(HermitianOperator op, int rank, Tolerance tol)
    : op_(std::move(op)), rank_(rank) {
    require_valid(tol);
    if (rank_ < 1 || rank_ > op_.dim()) throw std::invalid_argument("Projector: rank out of range");
    const Matrix& p = op_.matrix();
    const double idem = max_abs(Matrix(p * p - p));
    const double tr = std::abs(p.trace().real() - static_cast<double>(rank_)) +
                      std::abs(p.trace().imag());
    const double eps = std::max(tol.eps, 1e-10);
    if (idem > eps || tr > eps)
        throw std::invalid_argument("Projector: not idempotent of the stated rank");
}

bool is_self_adjoint(const Matrix& m, Tolerance tol) {
    require_valid(tol);
    if (m.rows() != m.cols()) throw std::invalid_argument("is_self_adjoint: matrix must be square");
    return max_abs(Matrix(m - m.adjoint())) <= tol.eps;
}

std::vector<double> raw_eigenvalues(const HermitianOperator& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("raw_eigenvalues: eigensolver did not converge");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

SpectralDecomposition spectral_decompose(const HermitianOperator& a, Tolerance tol) {
    require_valid(tol);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error(
            "spectral_decompose: eigensolver did not converge (input asymmetry " +
            std::to_string(max_abs(Matrix(a.matrix() - a.matrix().adjoint()))) + ")");
    }
    const auto& ev = solver.eigenvalues();
    const Matrix& vecs = solver.eigenvectors();
    const int d = a.dim();
    const double scale = std::max(std::abs(ev(0)), std::abs(ev(d - 1)));
    const double merge_gap = tol.eps * (1.0 + scale);

    SpectralDecomposition out;
    int start = 0;
    while (start < d) {
        int end = start + 1;
        while (end < d && ev(end) - ev(end - 1) <= merge_gap) ++end;
        const int mult = end - start;
        const Matrix block = vecs.middleCols(start, mult);
        Matrix p = block * block.adjoint();
        double value = 0.0;
        for (int i = start; i < end; ++i) value += ev(i);
        value /= mult;
        out.eigenvalues.push_back(value);
        out.projectors.emplace_back(HermitianOperator(std::move(p), Tolerance{1e-10}), mult);
        start = end;
    }
    return out;
}

Projector rank1_projector(const Ket& x) {
    const double n2 = x.coords().squaredNorm();
    if (n2 == 0.0) throw std::invalid_argument("rank1_projector: zero vector");
    Matrix p = (x.coords() * x.coords().adjoint()) / n2;
    return {HermitianOperator(std::move(p), Tolerance{1e-10}), 1};
}

bool commutes(const HermitianOperator& a, const HermitianOperator& b, Tolerance tol) {
    require_valid(tol);
    if (a.dim() != b.dim()) throw std::invalid_argument("commutes: dimension mismatch");
    const Matrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    if (a.exact() && b.exact()) return max_abs(c) == 0.0;
    return max_abs(c) <= tol.eps * (1.0 + max_abs(a.matrix()) * max_abs(b.matrix()));
}

HermitianOperator apply_function(const HermitianOperator& a,
                                 const std::function<double(double)>& f, Tolerance tol) {
    const SpectralDecomposition sd = spectral_decompose(a, tol);
    Matrix out = Matrix::Zero(a.dim(), a.dim());
    for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i) {
        const double fv = f(sd.eigenvalues[i]);
        if (!std::isfinite(fv))
            throw std::invalid_argument("apply_function: f produced a non-finite value");
        out += fv * sd.projectors[i].matrix();
    }
    return HermitianOperator(std::move(out), Tolerance{1e-10});
}

std::vector<Ket> projector_range_basis(const Projector& p) {
    const int d = p.dim();
    const Matrix& m = p.matrix();
    std::vector<Vector> accepted;
    accepted.reserve(static_cast<std::size_t>(p.rank()));
    for (int i = 0; i < d && static_cast<int>(accepted.size()) < p.rank(); ++i) {
        Vector v = m.col(i);  // P e_i
        for (const Vector& a : accepted) v -= a.dot(v) * a;
        const double n = v.norm();
        if (n <= 1e-8) continue;
        v /= n;
        // Phase fix: first sizable component made real positive.
        for (int k = 0; k < d; ++k) {
            if (std::abs(v(k)) > 1e-8) {
                v *= std::conj(v(k)) / std::abs(v(k));
                break;
            }
        }
        accepted.push_back(std::move(v));
    }
    if (static_cast<int>(accepted.size()) != p.rank())
        throw std::runtime_error("projector_range_basis: could not span the stated rank");
    std::vector<Ket> basis;
    basis.reserve(accepted.size());
    for (Vector& v : accepted) basis.emplace_back(std::move(v));
    return basis;
}

}  // namespace qc
