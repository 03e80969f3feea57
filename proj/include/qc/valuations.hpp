#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qc/contexts.hpp"

namespace qc {

/// VrOnly: projector values only constrained to lie in the projector's
/// spectrum intersected with {0,1}. Func: additionally one-hot — applying
/// functional composition to a generator of the context forces exactly one
/// projector to value 1.
enum class ValuationMode { VrOnly, Func };

/// {0,1}-assignment on the projectors of one context.
struct LocalValuation {
    std::shared_ptr<const Context> context;
    std::vector<int> values;  // one per projector
    ValuationMode mode = ValuationMode::Func;
};

/// Validating constructor: length must match the projector count, values must
/// be 0/1 (1 forced where the projector is the identity), Func mode must be
/// one-hot.
LocalValuation make_local_valuation(std::shared_ptr<const Context> ctx, std::vector<int> values,
                                    ValuationMode mode);

/// All local valuations of a context. VrOnly lists every admissible {0,1}
/// assignment (2^n of them when every projector has rank < dim; a projector
/// equal to the identity has spectrum {1} and admits only value 1). Func
/// lists the n one-hot assignments and requires a maximal context.
std::vector<LocalValuation> enumerate_local_valuations(std::shared_ptr<const Context> ctx,
                                                       ValuationMode mode);

/// v(A) = sum_i c_i v(P_i) where A = sum_i c_i P_i in v's context.
/// Throws when A is outside the context algebra.
double valuation_value(const LocalValuation& v, const HermitianOperator& a, Tolerance tol = {});

/// Value Rule: in Func mode checks v(A) lies in the spectrum of A; in VrOnly
/// mode checks the projector values lie in spectrum-within-{0,1}.
bool check_value_rule(const LocalValuation& v, const HermitianOperator& a, Tolerance tol = {});

/// Functional composition: value of f(A) under v equals f(value of A).
bool check_func(const LocalValuation& v, const HermitianOperator& a,
                const std::function<double(double)>& f, Tolerance tol = {});

/// Compatibility Condition: the two valuations agree on every projector the
/// two contexts share (vacuously true when they share none).
bool check_compatibility(const LocalValuation& vi, const LocalValuation& vj, Tolerance tol = {});

enum class ConstraintStyle { BasesOnly, BasesPlusPairs };

/// One-hot coloring problem over a finite ray family: each complete basis
/// must contain exactly one ray valued 1; in BasesPlusPairs style no
/// orthogonal pair may carry two 1s.
struct GlobalValuationProblem {
    int ray_count = 0;
    int dimension = 0;
    std::vector<std::vector<int>> bases;           // index tuples of size == dimension
    std::vector<std::pair<int, int>> pairs;        // orthogonal ray pairs
    ConstraintStyle style = ConstraintStyle::BasesPlusPairs;
    std::string source;
};

enum class SearchStatus { Sat, Unsat };

struct SearchResult {
    SearchStatus status = SearchStatus::Unsat;
    std::optional<std::vector<int>> witness;  // ray index -> {0,1}
    std::uint64_t nodes_explored = 0;
    std::optional<std::string> proof_note;
};

/// Deterministic backtracking with unit propagation. Branch variable: highest
/// constraint degree, ties to the lowest index; value 1 tried before 0. SAT
/// returns the first witness in that branch order; UNSAT means the search
/// tree was exhausted.
SearchResult search_global_valuation(const GlobalValuationProblem& p);

/// Independent witness checker: walks every constraint directly and shares no
/// code with the solver's propagation. Throws on incomplete assignments.
bool verify_witness(const GlobalValuationProblem& p, const std::vector<int>& assignment);

/// Parity certificate of unsatisfiability, when the structure admits one: an
/// odd number of bases, each ray occurring in an even number of them, cannot
/// be one-hot colored (the basis count would equal an even sum).
std::optional<std::string> parity_unsat_note(const GlobalValuationProblem& p);

/// CNF export: "p cnf <vars> <clauses>", variable i+1 per ray i; each basis
/// as an at-least-one clause plus pairwise at-most-one clauses; orthogonality
/// pairs as binary negative clauses. Duplicate binary clauses are emitted
/// once.
std::string to_dimacs(const GlobalValuationProblem& p);

}  // namespace qc
