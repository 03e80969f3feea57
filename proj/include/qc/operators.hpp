#pragma once

#include <functional>
#include <vector>

#include "qc/hilbert.hpp"

namespace qc {

/// Self-adjoint operator on a d-dimensional space. The constructor rejects
/// matrices whose asymmetry max |M_ij - conj(M_ji)| exceeds tol.
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix m, Tolerance tol = Tolerance{1e-12});

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& matrix() const { return mat_; }
    bool exact() const { return exact_; }

private:
    Matrix mat_;
    bool exact_ = false;
};

/// Orthogonal projector with its rank. P*P == P and trace(P) == rank.
class Projector {
public:
    Projector(HermitianOperator op, int rank, Tolerance tol = {});

    int dim() const { return op_.dim(); }
    int rank() const { return rank_; }
    const HermitianOperator& op() const { return op_; }
    const Matrix& matrix() const { return op_.matrix(); }

private:
    HermitianOperator op_;
    int rank_;
};

/// Resolution A = sum_i a_i P_i with strictly increasing eigenvalues a_i and
/// mutually orthogonal projectors P_i summing to the identity.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<Projector> projectors;
};

bool is_self_adjoint(const Matrix& m, Tolerance tol = {});

/// Eigenvalues within tol.eps * (1 + ||A||) of each other are merged into a
/// single spectral projector, so degenerate spectra come out with the right
/// multiplicities instead of splitting into spurious rank-1 pieces.
SpectralDecomposition spectral_decompose(const HermitianOperator& a, Tolerance tol = {});

/// |x><x| / <x|x>. Invariant under scaling and global phase of x.
Projector rank1_projector(const Ket& x);

/// Commutator test, max-entry of AB - BA against tol.eps * (1 + ||A|| ||B||).
/// Exact (compared against zero) when both operators have integer entries.
bool commutes(const HermitianOperator& a, const HermitianOperator& b, Tolerance tol = {});

/// f(A) = sum_i f(a_i) P_i over the spectral decomposition.
HermitianOperator apply_function(const HermitianOperator& a,
                                 const std::function<double(double)>& f, Tolerance tol = {});

/// Sorted eigenvalues without degeneracy clustering; multiset comparisons
/// (e.g. unitary-invariance checks) want the raw spectrum.
std::vector<double> raw_eigenvalues(const HermitianOperator& a);

/// Deterministic orthonormal basis of range(P): Gram-Schmidt over the
/// projected standard basis vectors P e_1, P e_2, ... in index order, each
/// result phase-fixed so its first sizable component is real positive.
/// Depends only on the projector, not on how it was produced.
std::vector<Ket> projector_range_basis(const Projector& p);

}  // namespace qc
