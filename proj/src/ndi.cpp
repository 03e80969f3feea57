#include "qc/ndi.hpp"

#include <cmath>
#include <stdexcept>

namespace qc {

Rotation::Rotation(Matrix u, Tolerance tol) : mat_(std::move(u)) {
    require_valid(tol);
    if (mat_.rows() != mat_.cols() || mat_.rows() < 1)
        throw std::invalid_argument("Rotation: matrix must be square and nonempty");
    if (!all_finite(mat_)) throw std::invalid_argument("Rotation: entries must be finite");
    const double residual =
        max_abs(Matrix(mat_.adjoint() * mat_ - Matrix::Identity(mat_.rows(), mat_.cols())));
    if (residual > tol.eps)
        throw std::invalid_argument("Rotation: matrix is not unitary (residual " +
                                    std::to_string(residual) + ")");
}

Ket Rotation::apply(const Ket& x) const {
    if (x.dim() != dim()) throw std::invalid_argument("Rotation::apply: dimension mismatch");
    return Ket(Vector(mat_ * x.coords()));
}

Rotation rotation_between(const Ket& x, const Ket& y) {
    if (x.dim() != y.dim()) throw std::invalid_argument("rotation_between: dimension mismatch");
    const double nx = norm(x);
    const double ny = norm(y);
    if (nx == 0.0 || ny == 0.0) throw std::invalid_argument("rotation_between: zero input vector");

    const int d = x.dim();
    const Vector& xs = x.coords();
    const Vector target = (nx / ny) * y.coords();  // same norm as x

    if ((xs - target).norm() <= 1e-12 * nx) return Rotation(Matrix::Identity(d, d));

    // Align the phase so <x|u> is real nonnegative, reflect x onto u, then
    // put the phase back with a rank-one phase unitary on the target ray.
    const Complex c = target.dot(xs);  // sum_i x_i conj(target_i)
    const double theta = (c == Complex{0.0, 0.0}) ? 0.0 : std::arg(c);
    const Complex phase = std::polar(1.0, theta);
    const Vector u = phase * target;

    Matrix m = Matrix::Identity(d, d);
    const Vector w = xs - u;
    const double wn2 = w.squaredNorm();
    if (wn2 > 1e-24 * nx * nx) m -= (2.0 / wn2) * (w * w.adjoint());
    const Complex back = std::polar(1.0, -theta);
    if (std::abs(Complex{1.0, 0.0} - back) > 1e-15) {
        const Vector t_hat = target / nx;
        m = (Matrix::Identity(d, d) - (Complex{1.0, 0.0} - back) * (t_hat * t_hat.adjoint())) * m;
    }
    return Rotation(std::move(m));
}

bool valuation_defined_on(const LocalValuation& v, const Ket& y, Tolerance tol) {
    require_valid(tol);
    if (!v.context) throw std::invalid_argument("valuation_defined_on: missing context");
    if (norm(y) == 0.0) throw std::invalid_argument("valuation_defined_on: zero vector");
    if (y.dim() != v.context->dim)
        throw std::invalid_argument("valuation_defined_on: dimension mismatch");
    const Projector p = rank1_projector(y);
    for (const Projector& q : v.context->projectors) {
        if (q.rank() != 1) continue;
        if (max_abs(Matrix(p.matrix() - q.matrix())) <= tol.eps) return true;
    }
    return false;
}

NdiWitness ndi_witness(const LocalValuation& v, const Ket& x, Tolerance tol) {
    if (!v.context) throw std::invalid_argument("ndi_witness: missing context");
    const Context& ctx = *v.context;
    if (ctx.dim < 2)
        throw std::invalid_argument("ndi_witness: dimension 1 has no direction where the "
                                    "valuation is undefined");
    if (!ctx.maximal) throw std::invalid_argument("ndi_witness: context must be maximal");
    if (x.dim() != ctx.dim) throw std::invalid_argument("ndi_witness: dimension mismatch");
    const double nx = norm(x);
    if (nx == 0.0) throw std::invalid_argument("ndi_witness: zero vector");

    const Ket e0 = projector_range_basis(ctx.projectors[0])[0];
    const Ket e1 = projector_range_basis(ctx.projectors[1])[0];

    Ket z{Vector(nx * e0.coords())};
    Vector sum = e0.coords() + e1.coords();
    Ket y{Vector((nx / sum.norm()) * sum)};

    Rotation u_defined = rotation_between(x, z);
    Rotation u_undefined = rotation_between(x, y);

    // The construction is only returned once its claims actually hold.
    const double res_defined = (u_defined.matrix() * x.coords() - z.coords()).norm();
    const double res_undefined = (u_undefined.matrix() * x.coords() - y.coords()).norm();
    if (res_defined > 1e-9 || res_undefined > 1e-9)
        throw std::runtime_error("ndi_witness: rotation residual out of bounds");
    if (std::abs(norm(z) - nx) > 1e-10 || std::abs(norm(y) - nx) > 1e-10)
        throw std::runtime_error("ndi_witness: target norms drifted");
    if (!valuation_defined_on(v, z, tol) || valuation_defined_on(v, y, tol))
        throw std::runtime_error("ndi_witness: definedness verdicts failed");

    return NdiWitness{v.context, v, x, std::move(z), std::move(u_defined), std::move(y),
                      std::move(u_undefined)};
}

VinpVerdict check_vinp(const Ket& x, const HermitianOperator& a, const Rotation& u) {
    if (x.dim() != a.dim() || x.dim() != u.dim())
        throw std::invalid_argument("check_vinp: dimension mismatch");
    const Matrix& um = u.matrix();
    if (max_abs(Matrix(um.adjoint() * um - Matrix::Identity(u.dim(), u.dim()))) > 1e-8)
        throw std::invalid_argument("check_vinp: non-unitary transformation");

    VinpVerdict verdict;
    verdict.norm_invariant = std::abs((um * x.coords()).norm() - norm(x)) <= 1e-10;

    const HermitianOperator conjugated(Matrix(um * a.matrix() * um.adjoint()), Tolerance{1e-10});
    const std::vector<double> before = raw_eigenvalues(a);
    const std::vector<double> after = raw_eigenvalues(conjugated);
    verdict.spectrum_invariant = true;
    for (std::size_t i = 0; i < before.size(); ++i) {
        if (std::abs(before[i] - after[i]) > 1e-8) {
            verdict.spectrum_invariant = false;
            break;
        }
    }
    return verdict;
}

VidpReport check_vidp(const LocalValuation& v, const Ket& x, int trials, std::uint64_t seed,
                      Tolerance tol) {
    if (trials < 0) throw std::invalid_argument("check_vidp: negative trial count");
    const NdiWitness witness = ndi_witness(v, x, tol);
    const int d = x.dim();

    VidpReport report;
    report.seed = seed;
    report.trials = trials;
    for (int i = 0; i < trials; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const Rotation u = random_rotation(d, rng);
        if (valuation_defined_on(v, u.apply(x), tol)) ++report.trial_defined;
    }
    report.defined_fraction =
        trials == 0 ? 0.0 : static_cast<double>(report.trial_defined) / trials;
    report.witness_defined = valuation_defined_on(v, witness.u_defined.apply(x), tol);
    report.witness_undefined_defined = valuation_defined_on(v, witness.u_undefined.apply(x), tol);
    report.defined_instances = report.trial_defined + (report.witness_defined ? 1 : 0) +
                               (report.witness_undefined_defined ? 1 : 0);
    report.undefined_instances = (trials - report.trial_defined) +
                                 (report.witness_defined ? 0 : 1) +
                                 (report.witness_undefined_defined ? 0 : 1);
    return report;
}

Rotation random_rotation(int dim, Rng& rng) { return Rotation(random_unitary(dim, rng)); }

}  // namespace qc
