#include <doctest.h>

#include <cmath>

#include "qc/operators.hpp"
#include "qc/rng.hpp"

using namespace qc;

namespace {

const Complex I{0.0, 1.0};

Matrix diag3(double a, double b, double c) {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}

HermitianOperator random_hermitian(int d, Rng& rng) {
    Matrix g(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) g(i, j) = rng.complex_normal();
    return HermitianOperator(Matrix((g + g.adjoint()) / 2.0));
}

void check_decomposition_invariants(const HermitianOperator& a, const SpectralDecomposition& sd) {
    const int d = a.dim();
    Matrix sum = Matrix::Zero(d, d);
    Matrix rebuilt = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < sd.projectors.size(); ++i) {
        const Matrix& p = sd.projectors[i].matrix();
        CHECK(max_abs(Matrix(p * p - p)) <= 1e-10);
        for (std::size_t j = i + 1; j < sd.projectors.size(); ++j)
            CHECK(max_abs(Matrix(p * sd.projectors[j].matrix())) <= 1e-10);
        sum += p;
        rebuilt += sd.eigenvalues[i] * p;
    }
    CHECK(max_abs(Matrix(sum - Matrix::Identity(d, d))) <= 1e-10);
    CHECK(max_abs(Matrix(rebuilt - a.matrix())) <= 1e-10);
    for (std::size_t i = 1; i < sd.eigenvalues.size(); ++i)
        CHECK(sd.eigenvalues[i] > sd.eigenvalues[i - 1]);
}

}  // namespace

TEST_CASE("is_self_adjoint") {
    Matrix d2 = Matrix::Zero(2, 2);
    d2(0, 0) = 1;
    d2(1, 1) = -1;
    CHECK(is_self_adjoint(d2));

    Matrix nilpotent = Matrix::Zero(2, 2);
    nilpotent(0, 1) = 1;
    CHECK_FALSE(is_self_adjoint(nilpotent));

    Matrix pauli_y(2, 2);
    pauli_y << Complex{0, 0}, -I, I, Complex{0, 0};
    CHECK(is_self_adjoint(pauli_y));
}

TEST_CASE("hermitian operator construction") {
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = 1;
    CHECK_THROWS_AS(HermitianOperator{bad}, std::invalid_argument);
    CHECK(HermitianOperator(diag3(1, 2, 3)).exact());
    CHECK_FALSE(HermitianOperator(diag3(0.5, 2, 3)).exact());
}

TEST_CASE("spectral decomposition of simple operators") {
    SUBCASE("identity has a single unit eigenvalue") {
        const auto sd = spectral_decompose(HermitianOperator(Matrix::Identity(3, 3)));
        REQUIRE(sd.eigenvalues.size() == 1);
        CHECK(sd.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(sd.projectors[0].rank() == 3);
        CHECK(max_abs(Matrix(sd.projectors[0].matrix() - Matrix::Identity(3, 3))) <= 1e-12);
    }
    SUBCASE("degenerate eigenvalues are grouped") {
        const auto sd = spectral_decompose(HermitianOperator(diag3(3, 3, 5)));
        REQUIRE(sd.eigenvalues.size() == 2);
        CHECK(sd.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(sd.eigenvalues[1] == doctest::Approx(5.0).epsilon(1e-14));
        CHECK(sd.projectors[0].rank() == 2);
        CHECK(max_abs(Matrix(sd.projectors[0].matrix() - diag3(1, 1, 0))) <= 1e-12);
        CHECK(max_abs(Matrix(sd.projectors[1].matrix() - diag3(0, 0, 1))) <= 1e-12);
    }
    SUBCASE("pauli x") {
        Matrix sx = Matrix::Zero(2, 2);
        sx(0, 1) = 1;
        sx(1, 0) = 1;
        const HermitianOperator a{std::move(sx)};
        const auto sd = spectral_decompose(a);
        REQUIRE(sd.eigenvalues.size() == 2);
        CHECK(sd.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(sd.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
        Matrix minus(2, 2), plus(2, 2);
        minus << 0.5, -0.5, -0.5, 0.5;
        plus << 0.5, 0.5, 0.5, 0.5;
        CHECK(max_abs(Matrix(sd.projectors[0].matrix() - minus)) <= 1e-12);
        CHECK(max_abs(Matrix(sd.projectors[1].matrix() - plus)) <= 1e-12);
        const Matrix rebuilt = sd.eigenvalues[0] * sd.projectors[0].matrix() +
                               sd.eigenvalues[1] * sd.projectors[1].matrix();
        CHECK(max_abs(Matrix(rebuilt - a.matrix())) <= 1e-12);
        check_decomposition_invariants(a, sd);
    }
}

TEST_CASE("spectral decomposition invariants on random operators") {
    for (int t = 0; t < 60; ++t) {
        Rng rng(derive_seed(41, t));
        const int d = 2 + static_cast<int>(rng.next_u64() % 7);
        const HermitianOperator a = random_hermitian(d, rng);
        check_decomposition_invariants(a, spectral_decompose(a));
    }
}

TEST_CASE("rank-1 projectors") {
    CHECK(max_abs(Matrix(rank1_projector(standard_basis_ket(2, 0)).matrix() -
                         (Matrix(2, 2) << 1, 0, 0, 0).finished())) == 0.0);
    Matrix half_ones(2, 2);
    half_ones << 0.5, 0.5, 0.5, 0.5;
    CHECK(max_abs(Matrix(rank1_projector(Ket{1, 1}).matrix() - half_ones)) <= 1e-15);

    SUBCASE("global phase is irrelevant") {
        Rng rng(7);
        const Ket x = random_ket(4, rng);
        const Matrix p = rank1_projector(x).matrix();
        for (int k = 1; k <= 8; ++k) {
            const Complex phase = std::polar(1.0, 0.7853981633974483 * k);
            const Ket shifted{Vector(phase * x.coords())};
            CHECK(max_abs(Matrix(rank1_projector(shifted).matrix() - p)) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(rank1_projector(Ket{0, 0}), std::invalid_argument);
}

TEST_CASE("commutation") {
    const HermitianOperator sz{diag3(1, -1, 0).topLeftCorner(2, 2)};
    Matrix sx = Matrix::Zero(2, 2);
    sx(0, 1) = 1;
    sx(1, 0) = 1;
    const HermitianOperator x{std::move(sx)};
    CHECK(commutes(sz, sz));
    CHECK_FALSE(commutes(sz, x));
    CHECK(commutes(x, HermitianOperator(Matrix::Identity(2, 2))));
    CHECK_THROWS_AS(commutes(sz, HermitianOperator(Matrix::Identity(3, 3))),
                    std::invalid_argument);
}

TEST_CASE("apply_function") {
    Matrix sz(2, 2);
    sz << 1, 0, 0, -1;
    const HermitianOperator a{std::move(sz)};
    SUBCASE("square of an involution is the identity") {
        const auto sq = apply_function(a, [](double t) { return t * t; });
        CHECK(max_abs(Matrix(sq.matrix() - Matrix::Identity(2, 2))) <= 1e-12);
    }
    SUBCASE("indicator of an eigenvalue picks out the spectral projector") {
        const auto sd = spectral_decompose(a);
        for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i) {
            const double target = sd.eigenvalues[i];
            const auto p = apply_function(
                a, [target](double t) { return std::abs(t - target) < 0.5 ? 1.0 : 0.0; });
            CHECK(max_abs(Matrix(p.matrix() - sd.projectors[i].matrix())) <= 1e-12);
        }
    }
    SUBCASE("affine functions act affinely") {
        for (int t = 0; t < 30; ++t) {
            Rng rng(derive_seed(47, t));
            const int d = 2 + static_cast<int>(rng.next_u64() % 7);
            const HermitianOperator h = random_hermitian(d, rng);
            const auto f = apply_function(h, [](double v) { return 2.0 * v + 1.0; });
            const Matrix expect = 2.0 * h.matrix() + Matrix::Identity(d, d);
            CHECK(max_abs(Matrix(f.matrix() - expect)) <= 1e-10);
        }
    }
    SUBCASE("composition is functorial for polynomials") {
        auto g = [](double v) { return v * v - 1.0; };
        auto f = [](double v) { return 3.0 * v + 2.0; };
        for (int t = 0; t < 20; ++t) {
            Rng rng(derive_seed(48, t));
            const HermitianOperator h = random_hermitian(4, rng);
            const auto composed = apply_function(h, [&](double v) { return f(g(v)); });
            const auto staged = apply_function(apply_function(h, g), f);
            CHECK(max_abs(Matrix(composed.matrix() - staged.matrix())) <= 1e-9);
        }
    }
}

TEST_CASE("unitary conjugation preserves the eigenvalue multiset") {
    for (int t = 0; t < 30; ++t) {
        Rng rng(derive_seed(53, t));
        const int d = 2 + static_cast<int>(rng.next_u64() % 7);
        const HermitianOperator a = random_hermitian(d, rng);
        const Matrix u = random_unitary(d, rng);
        const HermitianOperator b{Matrix(u * a.matrix() * u.adjoint()), Tolerance{1e-10}};
        const auto ev_a = raw_eigenvalues(a);
        const auto ev_b = raw_eigenvalues(b);
        for (std::size_t i = 0; i < ev_a.size(); ++i)
            CHECK(std::abs(ev_a[i] - ev_b[i]) <= 1e-8);
    }
}

TEST_CASE("projector_range_basis is deterministic and spans the range") {
    for (int t = 0; t < 20; ++t) {
        Rng rng(derive_seed(59, t));
        const int d = 3 + static_cast<int>(rng.next_u64() % 4);
        const HermitianOperator a = random_hermitian(d, rng);
        for (const Projector& p : spectral_decompose(a).projectors) {
            const auto basis = projector_range_basis(p);
            REQUIRE(static_cast<int>(basis.size()) == p.rank());
            Matrix rebuilt = Matrix::Zero(d, d);
            for (const Ket& b : basis) rebuilt += b.coords() * b.coords().adjoint();
            CHECK(max_abs(Matrix(rebuilt - p.matrix())) <= 1e-9);
            const auto again = projector_range_basis(p);
            for (std::size_t i = 0; i < basis.size(); ++i)
                CHECK((basis[i].coords() - again[i].coords()).norm() == 0.0);
        }
    }
}
