#pragma once

//
// Complex inner-product linear algebra core.
//
// Convention: inner products are linear in the FIRST argument and
// conjugate-linear in the second,
//
//     inner_product(x, y) = sum_i x_i * conj(y_i).
//
// This is the opposite of the common physics convention; everything in this
// library (coordinates, projectors, orthogonality) is written against it.
//

#include <initializer_list>
#include <span>
#include <vector>

#include "qc/matrix.hpp"
#include "qc/tolerance.hpp"

namespace qc {

/// Vector in a finite-dimensional complex Hilbert space. Immutable value;
/// components are validated finite on construction. `exact()` marks vectors
/// whose components all have integer real and imaginary parts — comparisons
/// on such data are done exactly instead of within tolerance.
class Ket {
public:
    explicit Ket(Vector coords);
    Ket(std::initializer_list<Complex> coords);

    int dim() const { return static_cast<int>(coords_.size()); }
    const Vector& coords() const { return coords_; }
    Complex operator[](int i) const { return coords_(i); }
    bool exact() const { return exact_; }

private:
    Vector coords_;
    bool exact_ = false;
};

/// Standard basis vector e_i (zero-based index) in dimension d.
Ket standard_basis_ket(int dim, int index);

Complex inner_product(const Ket& x, const Ket& y);

double norm(const Ket& x);

/// True iff `vectors` is a complete orthonormal basis: exactly d vectors of
/// dimension d, pairwise inner products zero and norms one (exact when every
/// vector carries the exact flag, within tol otherwise).
bool is_orthonormal_basis(std::span<const Ket> vectors, Tolerance tol = {});

/// Coordinates of x in an orthonormal basis: lambda_i = inner_product(x, x_i).
/// Reconstruction sum_i lambda_i x_i recovers x.
std::vector<Complex> coordinates(const Ket& x, std::span<const Ket> basis, Tolerance tol = {});

/// Completes linearly independent `vectors` to a full orthonormal basis of
/// dimension `dim`. The first vectors.size() outputs span the input subspace.
/// Deterministic: Gram-Schmidt with largest-residual pivoting (ties to the
/// lowest index), inputs first, then the standard basis vectors.
std::vector<Ket> extend_to_orthonormal_basis(std::span<const Ket> vectors, int dim,
                                             Tolerance tol = {});

}  // namespace qc
