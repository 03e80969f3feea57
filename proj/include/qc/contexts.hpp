#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qc/operators.hpp"

namespace qc {

/// Commutative subalgebra in canonical form: the ordered list of its minimal
/// spectral projectors (mutually orthogonal, summing to the identity).
/// Maximal when every projector has rank 1, i.e. there are dim of them.
///
/// Canonical projector order: ascending by (rank, rounded first nonzero
/// column of the projector matrix), which makes equal algebras compare equal
/// regardless of basis phases or input ordering.
struct Context {
    int dim = 0;
    std::vector<Projector> projectors;
    bool maximal = false;
};

struct CommuteCheckVerdict {
    bool equal = false;
    bool commute = false;
    bool commute_implies_equal = false;
};

/// Context generated by pairwise commuting self-adjoint operators: the joint
/// spectral projectors, obtained by decomposing the first operator and
/// refining each eigenspace with the rest. Throws (naming the pair and the
/// commutator norm) when two inputs do not commute.
Context context_from_operators(std::span<const HermitianOperator> ops, Tolerance tol = {});

/// Maximal context of rank-1 projectors onto the vectors of an orthonormal
/// basis.
Context context_from_basis(std::span<const Ket> basis, Tolerance tol = {});

/// Phase-blind equality of the projector multisets.
bool contexts_equal(const Context& a, const Context& b, Tolerance tol = {});

/// True iff every projector of a commutes with every projector of b.
bool contexts_commute(const Context& a, const Context& b, Tolerance tol = {});

/// For two maximal contexts, reports equality, commutation, and whether
/// commutation implies equality (it always must: the only context commuting
/// with a maximal context is that context itself). Non-maximal inputs are
/// rejected — distinct non-maximal contexts can genuinely commute, so the
/// claim only covers the maximal case.
CommuteCheckVerdict commute_check(const Context& a, const Context& b, Tolerance tol = {});

/// Coefficients c_i with A == sum_i c_i P_i over the context's projectors,
/// or nullopt when A is not a member of the algebra (residual above
/// tol.eps * (1 + ||A||)).
std::optional<std::vector<double>> expand_in_context(const Context& ctx,
                                                     const HermitianOperator& a,
                                                     Tolerance tol = {});

}  // namespace qc
