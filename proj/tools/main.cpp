// Command-line front end: verification workflows over ray sets, bases, and
// seeded random instances, with human-readable output or a stable-field-order
// JSON report (--json). Exit codes: 0 = SAT / all checks pass, 1 = UNSAT or a
// failed verdict, 2 = usage or input error.
//
// JSON reports deliberately omit wall-clock timings so that two runs with
// identical inputs produce byte-identical output; timings appear in the
// human-readable form only.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qc/ndi.hpp"
#include "qc/raysets.hpp"
#include "qc/rng.hpp"
#include "qc/valuations.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string fnv1a_digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct LoadedRaySet {
    qc::RaySet rays;
    std::string digest;
    std::string name;
};

LoadedRaySet load_rayset_arg(const std::string& arg, const std::string& format) {
    LoadedRaySet out;
    out.name = arg;
    if (arg == "cabello18" || arg == "peres33") {
        out.rays = qc::builtin_rayset(arg);
        out.digest = fnv1a_digest(arg);
        return out;
    }
    const std::string text = read_file(arg);
    out.digest = fnv1a_digest(text);
    qc::RaySetFormat fmt;
    if (format == "structured") {
        fmt = qc::RaySetFormat::Structured;
    } else if (format == "plain") {
        fmt = qc::RaySetFormat::Plain;
    } else {
        const auto first = text.find_first_not_of(" \t\r\n");
        fmt = (first != std::string::npos && text[first] == '{') ? qc::RaySetFormat::Structured
                                                                 : qc::RaySetFormat::Plain;
    }
    out.rays = qc::load_rayset(text, fmt);
    return out;
}

std::vector<qc::Ket> load_basis_file(const std::string& path, std::string* digest) {
    const LoadedRaySet loaded = load_rayset_arg(path, "auto");
    if (digest) *digest = loaded.digest;
    if (!loaded.rays.warnings.empty())
        throw std::invalid_argument(path + ": " + loaded.rays.warnings.front());
    if (!qc::is_orthonormal_basis(loaded.rays.rays))
        throw std::invalid_argument(path + ": vectors do not form an orthonormal basis");
    return loaded.rays.rays;
}

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int run_ks_check(const std::string& rayset_arg, const std::string& style_arg,
                 const std::string& format, const std::string& cnf_path, bool as_json) {
    const auto start = Clock::now();
    const LoadedRaySet loaded = load_rayset_arg(rayset_arg, format);
    const qc::ConstraintStyle style = style_arg == "bases-only"
                                          ? qc::ConstraintStyle::BasesOnly
                                          : qc::ConstraintStyle::BasesPlusPairs;
    const qc::GlobalValuationProblem problem = qc::problem_from_rayset(loaded.rays, style);
    const qc::SearchResult result = qc::search_global_valuation(problem);
    if (result.status == qc::SearchStatus::Sat &&
        !qc::verify_witness(problem, *result.witness))
        throw std::runtime_error("internal error: witness failed independent verification");

    if (!cnf_path.empty()) {
        std::ofstream out(cnf_path, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot write file: " + cnf_path);
        out << qc::to_dimacs(problem);
    }

    const bool sat = result.status == qc::SearchStatus::Sat;
    if (as_json) {
        ordered_json report;
        report["command"] = "ks-check";
        report["inputs"] = {{"rayset", loaded.name},
                            {"style", style_arg},
                            {"digest", loaded.digest}};
        report["warnings"] = loaded.rays.warnings;
        report["verdicts"] = {{"status", sat ? "SAT" : "UNSAT"}};
        ordered_json solver;
        solver["rays"] = problem.ray_count;
        solver["bases"] = problem.bases.size();
        solver["pairs"] = problem.pairs.size();
        solver["nodes_explored"] = result.nodes_explored;
        solver["proof_note"] = result.proof_note ? ordered_json(*result.proof_note)
                                                 : ordered_json(nullptr);
        solver["witness"] = result.witness ? ordered_json(*result.witness)
                                           : ordered_json(nullptr);
        if (!cnf_path.empty()) solver["cnf_path"] = cnf_path;
        report["solver"] = std::move(solver);
        std::cout << report.dump() << "\n";
    } else {
        std::cout << "ks-check: " << loaded.name << "\n";
        for (const auto& w : loaded.rays.warnings) std::cout << "warning: " << w << "\n";
        std::cout << "rays: " << problem.ray_count << "  bases: " << problem.bases.size()
                  << "  pairs: " << problem.pairs.size() << "  style: " << style_arg << "\n";
        std::cout << "status: " << (sat ? "SAT" : "UNSAT") << "\n";
        if (sat) {
            std::cout << "witness (rays valued 1):";
            for (std::size_t i = 0; i < result.witness->size(); ++i)
                if ((*result.witness)[i] == 1) std::cout << " " << i;
            std::cout << "\n";
        }
        std::cout << "nodes explored: " << result.nodes_explored << "\n";
        if (result.proof_note) std::cout << "note: " << *result.proof_note << "\n";
        if (!cnf_path.empty()) std::cout << "cnf written: " << cnf_path << "\n";
        std::cout << "elapsed: " << elapsed_ms(start) << " ms\n";
    }
    return sat ? 0 : 1;
}

int run_ndi_demo(int dim, std::uint64_t seed, int trials, bool as_json) {
    const auto start = Clock::now();
    if (dim < 2) throw std::invalid_argument("ndi-demo requires --dim >= 2");
    if (trials < 0) throw std::invalid_argument("ndi-demo requires --trials >= 0");

    qc::Rng rng(seed);
    const std::vector<qc::Ket> basis = qc::random_orthonormal_basis(dim, rng);
    auto ctx = std::make_shared<const qc::Context>(qc::context_from_basis(basis));
    std::vector<int> values(static_cast<std::size_t>(dim), 0);
    const int hot = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(dim));
    values[static_cast<std::size_t>(hot)] = 1;
    const qc::LocalValuation valuation =
        qc::make_local_valuation(ctx, values, qc::ValuationMode::Func);
    const qc::Ket x = qc::random_ket(dim, rng);

    const qc::NdiWitness witness = qc::ndi_witness(valuation, x);
    const qc::VidpReport vidp = qc::check_vidp(valuation, x, trials, seed);

    qc::Matrix generator = qc::Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        generator +=
            static_cast<double>(i + 1) * ctx->projectors[static_cast<std::size_t>(i)].matrix();
    const qc::VinpVerdict vinp =
        qc::check_vinp(x, qc::HermitianOperator(std::move(generator), qc::Tolerance{1e-10}),
                       witness.u_undefined);

    const auto unitarity = [dim](const qc::Rotation& u) {
        return qc::max_abs(qc::Matrix(u.matrix().adjoint() * u.matrix() -
                                      qc::Matrix::Identity(dim, dim)));
    };
    const double res_defined =
        (witness.u_defined.matrix() * x.coords() - witness.z.coords()).norm();
    const double res_undefined =
        (witness.u_undefined.matrix() * x.coords() - witness.y.coords()).norm();
    const double uni_defined = unitarity(witness.u_defined);
    const double uni_undefined = unitarity(witness.u_undefined);
    const double norm_drift = std::max(std::abs(qc::norm(witness.z) - qc::norm(x)),
                                       std::abs(qc::norm(witness.y) - qc::norm(x)));
    const bool defined_on_z = qc::valuation_defined_on(valuation, witness.z);
    const bool defined_on_y = qc::valuation_defined_on(valuation, witness.y);

    const bool all_ok = res_defined <= 1e-9 && res_undefined <= 1e-9 && uni_defined <= 1e-10 &&
                        uni_undefined <= 1e-10 && norm_drift <= 1e-10 && defined_on_z &&
                        !defined_on_y && vinp.norm_invariant && vinp.spectrum_invariant &&
                        vidp.witness_defined && !vidp.witness_undefined_defined;

    if (as_json) {
        ordered_json report;
        report["command"] = "ndi-demo";
        report["inputs"] = {{"dim", dim}, {"seed", seed}, {"trials", trials}};
        report["verdicts"] = {{"defined_on_z", defined_on_z},
                              {"defined_on_y", defined_on_y},
                              {"vinp_norm_invariant", vinp.norm_invariant},
                              {"vinp_spectrum_invariant", vinp.spectrum_invariant},
                              {"all_invariants", all_ok}};
        report["witness"] = {{"valuation_one_at", hot},
                             {"residual_defined", res_defined},
                             {"residual_undefined", res_undefined},
                             {"unitarity_defined", uni_defined},
                             {"unitarity_undefined", uni_undefined},
                             {"norm_drift", norm_drift}};
        report["vidp"] = {{"trials", vidp.trials},
                          {"trial_defined", vidp.trial_defined},
                          {"defined_fraction", vidp.defined_fraction},
                          {"witness_defined", vidp.witness_defined},
                          {"witness_undefined_defined", vidp.witness_undefined_defined},
                          {"defined_instances", vidp.defined_instances},
                          {"undefined_instances", vidp.undefined_instances}};
        std::cout << report.dump() << "\n";
    } else {
        std::cout << "ndi-demo: dim=" << dim << " seed=" << seed << " trials=" << trials << "\n";
        std::cout << "context: random maximal context, valuation one-hot at projector " << hot
                  << "\n";
        std::cout << "defined rotation:   residual " << res_defined << ", unitarity "
                  << uni_defined << ", valuation defined: " << (defined_on_z ? "yes" : "no")
                  << "\n";
        std::cout << "undefined rotation: residual " << res_undefined << ", unitarity "
                  << uni_undefined << ", valuation defined: " << (defined_on_y ? "yes" : "no")
                  << "\n";
        std::cout << "norm drift: " << norm_drift << "\n";
        std::cout << "vinp: norm_invariant=" << (vinp.norm_invariant ? "true" : "false")
                  << " spectrum_invariant=" << (vinp.spectrum_invariant ? "true" : "false")
                  << "\n";
        std::cout << "vidp: " << vidp.trial_defined << "/" << vidp.trials
                  << " random rotations defined (fraction " << vidp.defined_fraction
                  << "); with witnesses appended: " << vidp.defined_instances << " defined, "
                  << vidp.undefined_instances << " undefined\n";
        std::cout << "all invariants: " << (all_ok ? "verified" : "FAILED") << "\n";
        std::cout << "elapsed: " << elapsed_ms(start) << " ms\n";
    }
    return all_ok ? 0 : 1;
}

int run_commute_check(const std::string& path_a, const std::string& path_b, bool as_json) {
    std::string digest_a, digest_b;
    const std::vector<qc::Ket> basis_a = load_basis_file(path_a, &digest_a);
    const std::vector<qc::Ket> basis_b = load_basis_file(path_b, &digest_b);
    if (basis_a.at(0).dim() != basis_b.at(0).dim())
        throw std::invalid_argument("bases have different dimensions");
    const qc::Context ctx_a = qc::context_from_basis(basis_a);
    const qc::Context ctx_b = qc::context_from_basis(basis_b);
    const qc::CommuteCheckVerdict verdict = qc::commute_check(ctx_a, ctx_b);

    if (as_json) {
        ordered_json report;
        report["command"] = "commute-check";
        report["inputs"] = {{"basis_a", path_a},
                            {"digest_a", digest_a},
                            {"basis_b", path_b},
                            {"digest_b", digest_b}};
        report["verdicts"] = {{"equal", verdict.equal},
                              {"commute", verdict.commute},
                              {"commute_implies_equal", verdict.commute_implies_equal}};
        std::cout << report.dump() << "\n";
    } else {
        std::cout << "commute-check: " << path_a << " vs " << path_b << "\n";
        std::cout << "equal: " << (verdict.equal ? "true" : "false") << "\n";
        std::cout << "commute: " << (verdict.commute ? "true" : "false") << "\n";
        std::cout << "commute_implies_equal: "
                  << (verdict.commute_implies_equal ? "true" : "false") << "\n";
    }
    return verdict.commute_implies_equal ? 0 : 1;
}

int run_valuations(const std::string& path, const std::string& mode_arg, bool as_json) {
    std::string digest;
    const std::vector<qc::Ket> basis = load_basis_file(path, &digest);
    auto ctx = std::make_shared<const qc::Context>(qc::context_from_basis(basis));
    const qc::ValuationMode mode =
        mode_arg == "vr" ? qc::ValuationMode::VrOnly : qc::ValuationMode::Func;
    const std::vector<qc::LocalValuation> valuations =
        qc::enumerate_local_valuations(ctx, mode);

    if (as_json) {
        ordered_json report;
        report["command"] = "valuations";
        report["inputs"] = {{"basis", path}, {"digest", digest}, {"mode", mode_arg}};
        report["verdicts"] = {{"count", valuations.size()}};
        ordered_json rows = ordered_json::array();
        for (const auto& v : valuations) rows.push_back(v.values);
        report["valuations"] = std::move(rows);
        std::cout << report.dump() << "\n";
    } else {
        std::cout << "valuations: " << path << " mode=" << mode_arg << "\n";
        std::cout << "count: " << valuations.size() << "\n";
        for (std::size_t i = 0; i < valuations.size(); ++i) {
            std::cout << "v" << i << ":";
            for (int value : valuations[i].values) std::cout << " " << value;
            std::cout << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-dimensional quantum contextuality verifier"};
    app.require_subcommand(1);

    std::string rayset_arg, style_arg = "bases-plus-pairs", format_arg = "auto", cnf_path;
    bool json_ks = false;
    CLI::App* ks = app.add_subcommand(
        "ks-check", "Search for a global {0,1} valuation over a ray set");
    ks->add_option("rayset", rayset_arg,
                   "Ray set file, or a builtin name (cabello18, peres33)")
        ->required();
    ks->add_option("--style", style_arg, "Constraint style")
        ->check(CLI::IsMember({"bases-only", "bases-plus-pairs"}));
    ks->add_option("--format", format_arg, "Input format for files")
        ->check(CLI::IsMember({"auto", "structured", "plain"}));
    ks->add_option("--export-cnf", cnf_path, "Write the problem in DIMACS CNF form");
    ks->add_flag("--json", json_ks, "Emit a JSON report");

    int dim = 3, trials = 100;
    std::uint64_t seed = 0;
    bool json_ndi = false;
    CLI::App* ndi = app.add_subcommand(
        "ndi-demo", "Exhibit rotations that preserve and destroy a valuation");
    ndi->add_option("--dim", dim, "Hilbert space dimension (>= 2)");
    ndi->add_option("--seed", seed, "Random seed")->required();
    ndi->add_option("--trials", trials, "Random rotations to sample");
    ndi->add_flag("--json", json_ndi, "Emit a JSON report");

    std::string basis_a, basis_b;
    bool json_commute = false;
    CLI::App* commute = app.add_subcommand(
        "commute-check", "Check two maximal contexts for commutation and equality");
    commute->add_option("basis_a", basis_a, "Orthonormal basis file")->required();
    commute->add_option("basis_b", basis_b, "Orthonormal basis file")->required();
    commute->add_flag("--json", json_commute, "Emit a JSON report");

    std::string val_basis, mode_arg;
    bool json_val = false;
    CLI::App* vals = app.add_subcommand(
        "valuations", "List the local valuations of a basis context");
    vals->add_option("basis", val_basis, "Orthonormal basis file")->required();
    vals->add_option("--mode", mode_arg, "Valuation semantics")
        ->check(CLI::IsMember({"vr", "func"}))
        ->required();
    vals->add_flag("--json", json_val, "Emit a JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (ks->parsed()) return run_ks_check(rayset_arg, style_arg, format_arg, cnf_path, json_ks);
        if (ndi->parsed()) return run_ndi_demo(dim, seed, trials, json_ndi);
        if (commute->parsed()) return run_commute_check(basis_a, basis_b, json_commute);
        if (vals->parsed()) return run_valuations(val_basis, mode_arg, json_val);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
