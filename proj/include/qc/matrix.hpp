#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qc {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Entrywise max modulus (the matrix max-norm used for all residual checks).
inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const Vector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline bool all_finite(const Matrix& m) {
    return m.allFinite();
}

/// True when every entry has integer real and imaginary parts. Integer-valued
/// data keeps plain double arithmetic exact (well below 2^53 at the matrix
/// sizes used here), which is what the exact comparison paths rely on.
inline bool integer_entries(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const Complex& c = m(i, j);
            if (c.real() != std::floor(c.real()) || c.imag() != std::floor(c.imag())) return false;
        }
    }
    return true;
}

}  // namespace qc
