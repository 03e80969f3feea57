#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qc/valuations.hpp"

namespace qc {

/// Exact value a + b*sqrt(2) with integer a, b. Closed under products
/// ((a,b)(c,d) = (ac + 2bd, ad + bc)), so dot products of rays with integer
/// or integer-multiple-of-sqrt(2) coordinates stay exact and orthogonality is
/// the vanishing of both parts.
struct Surd {
    std::int64_t unit = 0;
    std::int64_t root2 = 0;

    friend Surd operator+(Surd a, Surd b) { return {a.unit + b.unit, a.root2 + b.root2}; }
    friend Surd operator-(Surd a, Surd b) { return {a.unit - b.unit, a.root2 - b.root2}; }
    friend Surd operator*(Surd a, Surd b) {
        return {a.unit * b.unit + 2 * a.root2 * b.root2, a.unit * b.root2 + a.root2 * b.unit};
    }
    friend bool operator==(Surd a, Surd b) = default;
    bool is_zero() const { return unit == 0 && root2 == 0; }
    double value() const;
};

/// Exact complex ray coordinate.
struct ExactCoord {
    Surd re, im;
};

/// Finite family of rays (one-dimensional subspaces), stored unnormalized so
/// integer coordinates survive exactly. Rays with integer/surd coordinates
/// additionally carry exact coordinates used for tolerance-free orthogonality
/// decisions. No zero rays; parallel inputs are merged with a warning.
struct RaySet {
    int dimension = 0;
    std::vector<Ket> rays;
    std::vector<std::vector<ExactCoord>> exact;  // per ray; empty when not exact
    std::vector<std::string> labels;             // empty, or one per ray
    std::string source;
    std::vector<std::string> warnings;

    bool ray_exact(int i) const { return !exact[static_cast<std::size_t>(i)].empty(); }
};

enum class RaySetFormat { Structured, Plain };

/// Structured format: a JSON object {"dimension": d, "rays": [...], optional
/// "labels": [...]} where each ray is a list of numbers or [re, im] pairs.
/// Plain format: whitespace-separated real coordinates, one ray per line,
/// dimension inferred from the first line. Coordinates written as integers
/// are kept exact.
RaySet load_rayset(std::string_view text, RaySetFormat format);

/// Canonical serialization (field order: dimension, labels, rays; numbers
/// shortest-round-trip). save(load(save(x))) == save(x) byte for byte. Plain
/// format refuses ray sets it cannot represent (complex coordinates, labels).
std::string save_rayset(const RaySet& rs, RaySetFormat format);

/// Embedded standard Kochen-Specker data: "cabello18" (18 rays, 9 bases,
/// dimension 4, coordinates in {0,1,-1}) and "peres33" (33 rays, dimension 3,
/// coordinates in {0,+-1,+-sqrt(2)}).
RaySet builtin_rayset(std::string_view name);

/// Edge (i,j) iff inner_product(ray_i, ray_j) == 0: exact when both rays
/// carry exact coordinates, within tol * ||ray_i|| ||ray_j|| otherwise.
struct OrthogonalityGraph {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;  // i < j, lexicographically sorted
};

OrthogonalityGraph orthogonality_graph(const RaySet& rs, Tolerance tol = {});

using BasisFamily = std::vector<std::vector<int>>;

/// All cliques of size exactly d, in lexicographic vertex order.
BasisFamily enumerate_bases(const OrthogonalityGraph& g, int d);

/// Assembles the one-hot coloring problem: bases from enumerate_bases, pair
/// constraints from the orthogonality edges when the style asks for them.
GlobalValuationProblem problem_from_rayset(const RaySet& rs,
                                           ConstraintStyle style = ConstraintStyle::BasesPlusPairs,
                                           Tolerance tol = {});

}  // namespace qc
