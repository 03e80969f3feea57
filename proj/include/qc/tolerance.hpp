#pragma once

#include <stdexcept>

namespace qc {

/// Comparison tolerance for the floating-point regime. Exact inputs
/// (integer-valued coordinates) are compared exactly and never consult it.
struct Tolerance {
    double eps = 1e-9;
};

inline void require_valid(const Tolerance& tol) {
    if (!(tol.eps >= 0.0)) throw std::invalid_argument("Tolerance: eps must be nonnegative");
}

}  // namespace qc
