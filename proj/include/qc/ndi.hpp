#pragma once

#include <cstdint>
#include <memory>

#include "qc/rng.hpp"
#include "qc/valuations.hpp"

namespace qc {

/// Unitary coordinate transformation ("rotation" in the complex sense: the
/// norm-preserving orbit of a vector is the unitary orbit). Construction
/// validates the unitarity residual ||U'U - I||_inf.
class Rotation {
public:
    explicit Rotation(Matrix u, Tolerance tol = Tolerance{1e-10});

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& matrix() const { return mat_; }
    Ket apply(const Ket& x) const;

private:
    Matrix mat_;
};

/// One vector, two rotations: u_defined carries x onto a context eigenvector
/// z (the valuation stays defined), u_undefined carries it onto a
/// superposition y of two context eigenvectors (the valuation is not defined
/// there). All three vectors share the norm of x.
struct NdiWitness {
    std::shared_ptr<const Context> context;
    LocalValuation valuation;
    Ket x;
    Ket z;
    Rotation u_defined;
    Ket y;
    Rotation u_undefined;
};

struct VinpVerdict {
    bool norm_invariant = false;      // ||Ux|| == ||x||
    bool spectrum_invariant = false;  // eigenvalue multiset of UAU' == that of A
};

struct VidpReport {
    std::uint64_t seed = 0;
    int trials = 0;
    int trial_defined = 0;          // random rotations landing where v is defined
    double defined_fraction = 0.0;  // over the random trials only
    bool witness_defined = false;             // appended defined-rotation verdict
    bool witness_undefined_defined = true;    // appended undefined-rotation verdict
    int defined_instances = 0;      // over trials + the two appended witnesses
    int undefined_instances = 0;
};

/// Unitary sending x to (||x||/||y||) y, built from at most two elementary
/// rank-one unitaries (a Householder reflection plus a phase on the target
/// ray), with an identity shortcut when x already equals the target.
Rotation rotation_between(const Ket& x, const Ket& y);

/// True iff |y><y| coincides (phase-blind, within tolerance) with one of the
/// projectors of v's context, i.e. the valuation assigns y's ray a value.
bool valuation_defined_on(const LocalValuation& v, const Ket& y, Tolerance tol = {});

/// Constructive witness for a maximal context, valuation, and nonzero x in
/// dim >= 2: z is the first context eigenvector rescaled to ||x||, y the
/// normalized sum of the first two, both reached from x by rotation_between.
NdiWitness ndi_witness(const LocalValuation& v, const Ket& x, Tolerance tol = {});

/// Nomological invariance under a rotation: norm of x within 1e-10 and the
/// eigenvalue multiset of A within 1e-8. Throws on non-unitary input.
VinpVerdict check_vinp(const Ket& x, const HermitianOperator& a, const Rotation& u);

/// Applies `trials` seeded random rotations to x and reports how often the
/// valuation stays defined; the two ndi_witness rotations are appended so the
/// report always exhibits one defined and one undefined instance. Per-trial
/// seeds derive from (seed, trial index); identical seeds give identical
/// reports.
VidpReport check_vidp(const LocalValuation& v, const Ket& x, int trials, std::uint64_t seed,
                      Tolerance tol = {});

/// Rotation from Gram-Schmidt orthonormalization of a seeded random complex
/// Gaussian matrix.
Rotation random_rotation(int dim, Rng& rng);

}  // namespace qc
