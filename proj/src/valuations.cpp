#include "qc/valuations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qc {

namespace {

void require_context(const LocalValuation& v) {
    if (!v.context) throw std::invalid_argument("LocalValuation: missing context");
    if (v.values.size() != v.context->projectors.size())
        throw std::invalid_argument("LocalValuation: value count does not match projector count");
}

bool values_admissible(const LocalValuation& v) {
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const int x = v.values[i];
        if (x != 0 && x != 1) return false;
        // A projector equal to the identity has spectrum {1}.
        if (x == 0 && v.context->projectors[i].rank() == v.context->dim) return false;
    }
    return true;
}

}  // namespace

LocalValuation make_local_valuation(std::shared_ptr<const Context> ctx, std::vector<int> values,
                                    ValuationMode mode) {
    LocalValuation v{std::move(ctx), std::move(values), mode};
    require_context(v);
    if (!values_admissible(v))
        throw std::invalid_argument("make_local_valuation: values must lie in the projector's "
                                    "spectrum intersected with {0,1}");
    if (mode == ValuationMode::Func) {
        const int ones = std::accumulate(v.values.begin(), v.values.end(), 0);
        if (ones != 1)
            throw std::invalid_argument("make_local_valuation: Func mode requires a one-hot "
                                        "assignment");
    }
    return v;
}

std::vector<LocalValuation> enumerate_local_valuations(std::shared_ptr<const Context> ctx,
                                                       ValuationMode mode) {
    if (!ctx) throw std::invalid_argument("enumerate_local_valuations: missing context");
    const std::size_t n = ctx->projectors.size();
    std::vector<LocalValuation> out;

    if (mode == ValuationMode::Func) {
        if (!ctx->maximal)
            throw std::invalid_argument(
                "enumerate_local_valuations: Func mode requires a maximal context");
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<int> values(n, 0);
            values[i] = 1;
            out.push_back(LocalValuation{ctx, std::move(values), mode});
        }
        return out;
    }

    if (n > 20)
        throw std::invalid_argument("enumerate_local_valuations: too many projectors to "
                                    "enumerate 2^n assignments");
    // Lexicographic over value tuples, first projector most significant.
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<int> values(n);
        for (std::size_t i = 0; i < n; ++i)
            values[i] = static_cast<int>((mask >> (n - 1 - i)) & 1u);
        LocalValuation v{ctx, std::move(values), mode};
        if (values_admissible(v)) out.push_back(std::move(v));
    }
    return out;
}

double valuation_value(const LocalValuation& v, const HermitianOperator& a, Tolerance tol) {
    require_context(v);
    const auto coeffs = expand_in_context(*v.context, a, tol);
    if (!coeffs)
        throw std::invalid_argument("valuation_value: operator lies outside the context algebra");
    double value = 0.0;
    for (std::size_t i = 0; i < coeffs->size(); ++i) value += (*coeffs)[i] * v.values[i];
    return value;
}

bool check_value_rule(const LocalValuation& v, const HermitianOperator& a, Tolerance tol) {
    require_context(v);
    if (!expand_in_context(*v.context, a, tol))
        throw std::invalid_argument("check_value_rule: operator lies outside the context algebra");
    if (!values_admissible(v)) return false;
    if (v.mode == ValuationMode::VrOnly) return true;

    const double value = valuation_value(v, a, tol);
    const std::vector<double> spectrum = raw_eigenvalues(a);
    const double scale = 1.0 + max_abs(a.matrix());
    return std::any_of(spectrum.begin(), spectrum.end(), [&](double s) {
        return std::abs(s - value) <= tol.eps * scale;
    });
}

bool check_func(const LocalValuation& v, const HermitianOperator& a,
                const std::function<double(double)>& f, Tolerance tol) {
    require_context(v);
    const HermitianOperator fa = apply_function(a, f, tol);
    const double lhs = valuation_value(v, fa, tol);  // v(f(A))
    const double rhs = f(valuation_value(v, a, tol));  // f(v(A))
    return std::abs(lhs - rhs) <= tol.eps * (1.0 + std::abs(lhs) + std::abs(rhs));
}

bool check_compatibility(const LocalValuation& vi, const LocalValuation& vj, Tolerance tol) {
    require_context(vi);
    require_context(vj);
    if (vi.context->dim != vj.context->dim)
        throw std::invalid_argument("check_compatibility: contexts have different dimensions");
    for (std::size_t i = 0; i < vi.context->projectors.size(); ++i) {
        const Projector& p = vi.context->projectors[i];
        for (std::size_t j = 0; j < vj.context->projectors.size(); ++j) {
            const Projector& q = vj.context->projectors[j];
            if (p.rank() != q.rank()) continue;
            if (max_abs(Matrix(p.matrix() - q.matrix())) <= tol.eps) {
                if (vi.values[i] != vj.values[j]) return false;
                break;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Global valuation search
// ---------------------------------------------------------------------------

namespace {

void validate_problem(const GlobalValuationProblem& p) {
    if (p.ray_count < 0) throw std::invalid_argument("malformed constraints: negative ray count");
    if (!p.bases.empty() && p.dimension < 1)
        throw std::invalid_argument("malformed constraints: bases present without a dimension");
    for (const auto& basis : p.bases) {
        if (static_cast<int>(basis.size()) != p.dimension)
            throw std::invalid_argument("malformed constraints: basis tuple size differs from "
                                        "the dimension");
        std::set<int> seen;
        for (int r : basis) {
            if (r < 0 || r >= p.ray_count)
                throw std::invalid_argument("malformed constraints: ray index out of range");
            if (!seen.insert(r).second)
                throw std::invalid_argument("malformed constraints: repeated ray in a basis");
        }
    }
    for (const auto& [i, j] : p.pairs) {
        if (i < 0 || i >= p.ray_count || j < 0 || j >= p.ray_count || i == j)
            throw std::invalid_argument("malformed constraints: bad orthogonality pair");
    }
}

class Search {
public:
    explicit Search(const GlobalValuationProblem& p) : p_(p) {
        const bool use_pairs = p.style == ConstraintStyle::BasesPlusPairs;
        val_.assign(static_cast<std::size_t>(p.ray_count), -1);
        var_bases_.resize(static_cast<std::size_t>(p.ray_count));
        var_pairs_.resize(static_cast<std::size_t>(p.ray_count));
        basis_ones_.assign(p.bases.size(), 0);
        basis_zeros_.assign(p.bases.size(), 0);
        for (std::size_t b = 0; b < p.bases.size(); ++b)
            for (int r : p.bases[b]) var_bases_[static_cast<std::size_t>(r)].push_back(static_cast<int>(b));
        if (use_pairs) {
            for (const auto& [i, j] : p.pairs) {
                var_pairs_[static_cast<std::size_t>(i)].push_back(j);
                var_pairs_[static_cast<std::size_t>(j)].push_back(i);
            }
        }
        // Static branch order: highest constraint degree first, ties by index.
        order_.resize(static_cast<std::size_t>(p.ray_count));
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [this](int a, int b) {
            const std::size_t ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
            const std::size_t da = var_bases_[ua].size() + var_pairs_[ua].size();
            const std::size_t db = var_bases_[ub].size() + var_pairs_[ub].size();
            if (da != db) return da > db;
            return a < b;
        });
    }

    SearchResult run() {
        SearchResult result;
        bool consistent = true;
        // Bases of size 1 force their ray before any branching.
        for (const auto& basis : p_.bases) {
            if (basis.size() == 1 && !(assign(basis[0], 1) && propagate())) {
                consistent = false;
                break;
            }
        }
        if (consistent && dfs()) {
            result.status = SearchStatus::Sat;
            result.witness = std::vector<int>(val_.begin(), val_.end());
        } else {
            result.status = SearchStatus::Unsat;
            result.proof_note = "backtracking search exhausted";
            if (auto parity = parity_unsat_note(p_)) result.proof_note = *parity;
        }
        result.nodes_explored = nodes_;
        return result;
    }

private:
    // Applies the assignment and its counter updates in full even on
    // conflict, so undo_to can reverse the trail uniformly.
    bool assign(int v, int x) {
        const std::size_t uv = static_cast<std::size_t>(v);
        if (val_[uv] != -1) return val_[uv] == x;
        val_[uv] = static_cast<std::int8_t>(x);
        trail_.push_back(v);
        bool ok = true;
        for (int b : var_bases_[uv]) {
            const std::size_t ub = static_cast<std::size_t>(b);
            if (x == 1) {
                if (++basis_ones_[ub] > 1) ok = false;
            } else {
                ++basis_zeros_[ub];
            }
        }
        return ok;
    }

    bool propagate() {
        while (qhead_ < trail_.size()) {
            const int v = trail_[qhead_++];
            const std::size_t uv = static_cast<std::size_t>(v);
            if (val_[uv] == 1) {
                for (int u : var_pairs_[uv])
                    if (!assign(u, 0)) return false;
                for (int b : var_bases_[uv])
                    for (int u : p_.bases[static_cast<std::size_t>(b)])
                        if (u != v && !assign(u, 0)) return false;
            } else {
                for (int b : var_bases_[uv]) {
                    const std::size_t ub = static_cast<std::size_t>(b);
                    if (basis_ones_[ub] > 0) continue;
                    const int size = static_cast<int>(p_.bases[ub].size());
                    const int unassigned = size - basis_zeros_[ub];
                    if (unassigned == 0) return false;  // every ray zero
                    if (unassigned == 1) {
                        for (int u : p_.bases[ub]) {
                            if (val_[static_cast<std::size_t>(u)] == -1) {
                                if (!assign(u, 1)) return false;
                                break;
                            }
                        }
                    }
                }
            }
        }
        return true;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            const std::size_t uv = static_cast<std::size_t>(trail_.back());
            trail_.pop_back();
            for (int b : var_bases_[uv]) {
                const std::size_t ub = static_cast<std::size_t>(b);
                if (val_[uv] == 1)
                    --basis_ones_[ub];
                else
                    --basis_zeros_[ub];
            }
            val_[uv] = -1;
        }
        qhead_ = mark;
    }

    bool dfs() {
        int branch = -1;
        for (int v : order_) {
            if (val_[static_cast<std::size_t>(v)] == -1) {
                branch = v;
                break;
            }
        }
        if (branch == -1) return true;
        for (int x : {1, 0}) {
            ++nodes_;
            const std::size_t mark = trail_.size();
            if (assign(branch, x) && propagate() && dfs()) return true;
            undo_to(mark);
        }
        return false;
    }

    const GlobalValuationProblem& p_;
    std::vector<std::int8_t> val_;
    std::vector<std::vector<int>> var_bases_;
    std::vector<std::vector<int>> var_pairs_;
    std::vector<int> basis_ones_;
    std::vector<int> basis_zeros_;
    std::vector<int> order_;
    std::vector<int> trail_;
    std::size_t qhead_ = 0;
    std::uint64_t nodes_ = 0;
};

}  // namespace

SearchResult search_global_valuation(const GlobalValuationProblem& p) {
    validate_problem(p);
    return Search(p).run();
}

bool verify_witness(const GlobalValuationProblem& p, const std::vector<int>& assignment) {
    validate_problem(p);
    if (assignment.size() != static_cast<std::size_t>(p.ray_count))
        throw std::invalid_argument("verify_witness: incomplete assignment");
    for (int x : assignment)
        if (x != 0 && x != 1)
            throw std::invalid_argument("verify_witness: assignment values must be 0 or 1");

    for (const auto& basis : p.bases) {
        int ones = 0;
        for (int r : basis) ones += assignment[static_cast<std::size_t>(r)];
        if (ones != 1) return false;
    }
    if (p.style == ConstraintStyle::BasesPlusPairs) {
        for (const auto& [i, j] : p.pairs) {
            if (assignment[static_cast<std::size_t>(i)] == 1 &&
                assignment[static_cast<std::size_t>(j)] == 1)
                return false;
        }
    }
    return true;
}

std::optional<std::string> parity_unsat_note(const GlobalValuationProblem& p) {
    if (p.bases.empty() || p.bases.size() % 2 == 0) return std::nullopt;
    std::vector<int> incidence(static_cast<std::size_t>(p.ray_count), 0);
    for (const auto& basis : p.bases)
        for (int r : basis) ++incidence[static_cast<std::size_t>(r)];
    if (std::any_of(incidence.begin(), incidence.end(), [](int c) { return c % 2 != 0; }))
        return std::nullopt;
    std::ostringstream note;
    note << "parity certificate: " << p.bases.size()
         << " bases (odd) with every ray in an even number of bases; the one-hot sum over "
            "bases would be odd and even at once";
    return note.str();
}

std::string to_dimacs(const GlobalValuationProblem& p) {
    validate_problem(p);
    std::vector<std::string> clauses;
    std::set<std::pair<int, int>> binary_seen;

    auto add_at_most_one = [&](int i, int j) {
        const auto key = std::minmax(i, j);
        if (!binary_seen.insert(key).second) return;
        clauses.push_back("-" + std::to_string(key.first + 1) + " -" +
                          std::to_string(key.second + 1) + " 0");
    };

    for (const auto& basis : p.bases) {
        std::string alo;
        for (int r : basis) alo += std::to_string(r + 1) + " ";
        clauses.push_back(alo + "0");
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = i + 1; j < basis.size(); ++j) add_at_most_one(basis[i], basis[j]);
    }
    if (p.style == ConstraintStyle::BasesPlusPairs) {
        for (const auto& [i, j] : p.pairs) add_at_most_one(i, j);
    }

    std::ostringstream out;
    out << "p cnf " << p.ray_count << " " << clauses.size() << "\n";
    for (const std::string& c : clauses) out << c << "\n";
    return out.str();
}

}  // namespace qc
