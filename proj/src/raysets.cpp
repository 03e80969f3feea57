#include "qc/raysets.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qc {

namespace {

using ordered_json = nlohmann::ordered_json;

// Coordinates above this magnitude fall back to the floating regime; below
// it, every exact product in the orthogonality and parallelism tests fits
// comfortably in the integer types used.
constexpr std::int64_t kExactCap = 1'000'000;

ExactCoord ec_conj(const ExactCoord& c) { return {c.re, {-c.im.unit, -c.im.root2}}; }

ExactCoord ec_mul(const ExactCoord& a, const ExactCoord& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ExactCoord ec_add(const ExactCoord& a, const ExactCoord& b) {
    return {a.re + b.re, a.im + b.im};
}

bool ec_zero(const ExactCoord& c) { return c.re.is_zero() && c.im.is_zero(); }

/// sum_i x_i conj(y_i), exact.
ExactCoord exact_inner(const std::vector<ExactCoord>& x, const std::vector<ExactCoord>& y) {
    ExactCoord acc{};
    for (std::size_t i = 0; i < x.size(); ++i) acc = ec_add(acc, ec_mul(x[i], ec_conj(y[i])));
    return acc;
}

Surd exact_norm2(const std::vector<ExactCoord>& x) { return exact_inner(x, x).re; }

// Widened a + b*sqrt(2) for products of inner products.
struct WideSurd {
    __int128 unit = 0;
    __int128 root2 = 0;
    friend WideSurd operator+(WideSurd a, WideSurd b) {
        return {a.unit + b.unit, a.root2 + b.root2};
    }
    friend bool operator==(WideSurd a, WideSurd b) = default;
};

WideSurd wide_mul(Surd a, Surd b) {
    return {static_cast<__int128>(a.unit) * b.unit + 2 * static_cast<__int128>(a.root2) * b.root2,
            static_cast<__int128>(a.unit) * b.root2 + static_cast<__int128>(a.root2) * b.unit};
}

/// Cauchy-Schwarz equality |<x|y>|^2 == <x|x><y|y>, exact.
bool exact_parallel(const std::vector<ExactCoord>& x, const std::vector<ExactCoord>& y) {
    const ExactCoord ip = exact_inner(x, y);
    const WideSurd lhs = wide_mul(ip.re, ip.re) + wide_mul(ip.im, ip.im);
    const WideSurd rhs = wide_mul(exact_norm2(x), exact_norm2(y));
    return lhs == rhs;
}

struct PendingRay {
    std::vector<ExactCoord> exact;  // empty when not exact
    Vector coords;
    std::string label;
    std::string origin;  // "line 3" or "ray 2", for messages
};

bool rays_parallel(const PendingRay& a, const PendingRay& b, double eps) {
    if (!a.exact.empty() && !b.exact.empty()) return exact_parallel(a.exact, b.exact);
    const double ip = std::abs(b.coords.dot(a.coords));
    return ip >= (1.0 - eps) * a.coords.norm() * b.coords.norm();
}

bool ray_is_zero(const PendingRay& r) {
    if (!r.exact.empty()) {
        for (const ExactCoord& c : r.exact)
            if (!ec_zero(c)) return false;
        return true;
    }
    return r.coords.norm() == 0.0;
}

RaySet assemble(int dimension, std::vector<PendingRay> pending, bool have_labels,
                std::string source) {
    RaySet rs;
    rs.dimension = dimension;
    rs.source = std::move(source);
    for (std::size_t i = 0; i < pending.size(); ++i) {
        PendingRay& ray = pending[i];
        if (ray_is_zero(ray))
            throw std::invalid_argument("load_rayset: " + ray.origin + ": zero ray");
        bool merged = false;
        for (std::size_t k = 0; k < rs.rays.size(); ++k) {
            PendingRay kept{rs.exact[k], rs.rays[k].coords(), "", ""};
            if (rays_parallel(kept, ray, 1e-9)) {
                rs.warnings.push_back(ray.origin + " is parallel to kept ray " +
                                      std::to_string(k) + "; merged");
                merged = true;
                break;
            }
        }
        if (merged) continue;
        rs.rays.emplace_back(std::move(ray.coords));
        rs.exact.push_back(std::move(ray.exact));
        if (have_labels) rs.labels.push_back(std::move(ray.label));
    }
    return rs;
}

struct ParsedNumber {
    bool is_int = false;
    std::int64_t ivalue = 0;
    double value = 0.0;
};

ParsedNumber parse_number(std::string_view token, const std::string& origin) {
    ParsedNumber out;
    std::string_view body = token;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    if (body.empty())
        throw std::invalid_argument("load_rayset: " + origin + ": malformed number '" +
                                    std::string(token) + "'");
    const char* first = body.data();
    const char* last = body.data() + body.size();
    std::int64_t iv = 0;
    auto ir = std::from_chars(first, last, iv);
    if (ir.ec == std::errc{} && ir.ptr == last) {
        out.value = static_cast<double>(iv);
        if (std::llabs(iv) <= kExactCap) {
            out.is_int = true;
            out.ivalue = iv;
        }
        return out;
    }
    double dv = 0.0;
    auto dr = std::from_chars(first, last, dv);
    if (dr.ec != std::errc{} || dr.ptr != last || !std::isfinite(dv))
        throw std::invalid_argument("load_rayset: " + origin + ": malformed number '" +
                                    std::string(token) + "'");
    out.value = dv;
    return out;
}

RaySet load_plain(std::string_view text) {
    std::vector<PendingRay> pending;
    int dimension = -1;
    std::istringstream lines{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        std::istringstream words(line);
        std::vector<std::string> tokens;
        for (std::string w; words >> w;) tokens.push_back(std::move(w));
        if (tokens.empty()) continue;
        const std::string origin = "line " + std::to_string(line_no);
        if (dimension == -1) dimension = static_cast<int>(tokens.size());
        if (static_cast<int>(tokens.size()) != dimension)
            throw std::invalid_argument("load_rayset: " + origin + ": expected " +
                                        std::to_string(dimension) + " coordinates, got " +
                                        std::to_string(tokens.size()));
        PendingRay ray;
        ray.origin = origin;
        ray.coords = Vector::Zero(dimension);
        std::vector<ExactCoord> exact(static_cast<std::size_t>(dimension));
        bool all_exact = true;
        for (int i = 0; i < dimension; ++i) {
            const ParsedNumber n = parse_number(tokens[static_cast<std::size_t>(i)], origin);
            ray.coords(i) = Complex(n.value, 0.0);
            if (n.is_int)
                exact[static_cast<std::size_t>(i)] = ExactCoord{{n.ivalue, 0}, {0, 0}};
            else
                all_exact = false;
        }
        if (all_exact) ray.exact = std::move(exact);
        pending.push_back(std::move(ray));
    }
    if (dimension == -1) throw std::invalid_argument("load_rayset: empty plain input");
    return assemble(dimension, std::move(pending), false, "plain");
}

struct JsonCoord {
    Complex value;
    bool exact = false;
    ExactCoord exact_value;
};

JsonCoord json_coord(const ordered_json& j, const std::string& origin) {
    auto scalar = [&](const ordered_json& num) -> std::pair<double, std::optional<std::int64_t>> {
        if (num.is_number_unsigned()) {
            const std::uint64_t uv = num.get<std::uint64_t>();
            if (uv <= static_cast<std::uint64_t>(kExactCap))
                return {static_cast<double>(uv), static_cast<std::int64_t>(uv)};
            return {num.get<double>(), std::nullopt};
        }
        if (num.is_number_integer()) {
            const std::int64_t iv = num.get<std::int64_t>();
            if (std::llabs(iv) <= kExactCap) return {static_cast<double>(iv), iv};
            return {static_cast<double>(iv), std::nullopt};
        }
        if (num.is_number()) return {num.get<double>(), std::nullopt};
        throw std::invalid_argument("load_rayset: " + origin + ": malformed number");
    };
    JsonCoord out;
    if (j.is_array()) {
        if (j.size() != 2)
            throw std::invalid_argument("load_rayset: " + origin +
                                        ": complex coordinate must be a [re, im] pair");
        const auto re = scalar(j[0]);
        const auto im = scalar(j[1]);
        out.value = Complex(re.first, im.first);
        if (re.second && im.second) {
            out.exact = true;
            out.exact_value = ExactCoord{{*re.second, 0}, {*im.second, 0}};
        }
        return out;
    }
    const auto re = scalar(j);
    out.value = Complex(re.first, 0.0);
    if (re.second) {
        out.exact = true;
        out.exact_value = ExactCoord{{*re.second, 0}, {0, 0}};
    }
    return out;
}

RaySet load_structured(std::string_view text) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("load_rayset: structured parse error: ") +
                                    e.what());
    }
    if (!root.is_object() || !root.contains("dimension") || !root.contains("rays"))
        throw std::invalid_argument(
            "load_rayset: structured input needs \"dimension\" and \"rays\" fields");
    if (!root["dimension"].is_number_integer() || root["dimension"].get<std::int64_t>() < 1)
        throw std::invalid_argument("load_rayset: dimension must be a positive integer");
    const int dimension = root["dimension"].get<int>();
    if (!root["rays"].is_array())
        throw std::invalid_argument("load_rayset: \"rays\" must be an array");

    std::vector<std::string> labels;
    const bool have_labels = root.contains("labels");
    if (have_labels) {
        if (!root["labels"].is_array() || root["labels"].size() != root["rays"].size())
            throw std::invalid_argument(
                "load_rayset: \"labels\" must list one string per ray");
        for (const auto& l : root["labels"]) {
            if (!l.is_string()) throw std::invalid_argument("load_rayset: labels must be strings");
            labels.push_back(l.get<std::string>());
        }
    }

    std::vector<PendingRay> pending;
    int index = 0;
    for (const auto& jray : root["rays"]) {
        const std::string origin = "ray " + std::to_string(index);
        if (!jray.is_array() || static_cast<int>(jray.size()) != dimension)
            throw std::invalid_argument("load_rayset: " + origin + ": expected " +
                                        std::to_string(dimension) + " coordinates");
        PendingRay ray;
        ray.origin = origin;
        ray.coords = Vector::Zero(dimension);
        std::vector<ExactCoord> exact(static_cast<std::size_t>(dimension));
        bool all_exact = true;
        for (int i = 0; i < dimension; ++i) {
            const JsonCoord c = json_coord(jray[static_cast<std::size_t>(i)], origin);
            ray.coords(i) = c.value;
            if (c.exact)
                exact[static_cast<std::size_t>(i)] = c.exact_value;
            else
                all_exact = false;
        }
        if (all_exact) ray.exact = std::move(exact);
        if (have_labels) ray.label = labels[static_cast<std::size_t>(index)];
        pending.push_back(std::move(ray));
        ++index;
    }
    return assemble(dimension, std::move(pending), have_labels, "structured");
}

ordered_json number_to_json(double v) {
    if (std::floor(v) == v && std::abs(v) <= 9.0e15) {
        return ordered_json(static_cast<std::int64_t>(v));
    }
    return ordered_json(v);
}

std::string number_to_text(double v) { return number_to_json(v).dump(); }

}  // namespace

double Surd::value() const {
    return static_cast<double>(unit) + static_cast<double>(root2) * std::numbers::sqrt2;
}

RaySet load_rayset(std::string_view text, RaySetFormat format) {
    return format == RaySetFormat::Plain ? load_plain(text) : load_structured(text);
}

std::string save_rayset(const RaySet& rs, RaySetFormat format) {
    if (format == RaySetFormat::Plain) {
        if (!rs.labels.empty())
            throw std::invalid_argument("save_rayset: plain format cannot represent labels");
        std::ostringstream out;
        for (const Ket& ray : rs.rays) {
            for (int i = 0; i < ray.dim(); ++i) {
                if (ray[i].imag() != 0.0)
                    throw std::invalid_argument(
                        "save_rayset: plain format cannot represent complex coordinates");
                if (i > 0) out << ' ';
                out << number_to_text(ray[i].real());
            }
            out << '\n';
        }
        return out.str();
    }

    ordered_json root;
    root["dimension"] = rs.dimension;
    if (!rs.labels.empty()) root["labels"] = rs.labels;
    ordered_json rays = ordered_json::array();
    for (const Ket& ray : rs.rays) {
        ordered_json jray = ordered_json::array();
        for (int i = 0; i < ray.dim(); ++i) {
            const Complex c = ray[i];
            if (c.imag() == 0.0) {
                jray.push_back(number_to_json(c.real()));
            } else {
                jray.push_back(ordered_json::array(
                    {number_to_json(c.real()), number_to_json(c.imag())}));
            }
        }
        rays.push_back(std::move(jray));
    }
    root["rays"] = std::move(rays);
    return root.dump() + "\n";
}

RaySet builtin_rayset(std::string_view name) {
    if (name == "cabello18") {
        // 18 rays in dimension 4, coordinates in {0, 1, -1}; their
        // orthogonality graph carries exactly nine complete bases and every
        // ray sits in exactly two of them.
        static constexpr std::array<std::array<int, 4>, 18> rays{{
            {0, 0, 0, 1}, {0, 0, 1, 0}, {1, 1, 0, 0},   {1, -1, 0, 0},
            {0, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, -1, 0},  {1, -1, 1, -1},
            {1, -1, -1, 1}, {0, 0, 1, 1}, {1, 1, 1, 1}, {0, 1, 0, -1},
            {1, 0, 0, 1}, {1, 0, 0, -1}, {0, 1, -1, 0}, {1, 1, -1, 1},
            {1, 1, 1, -1}, {-1, 1, 1, 1},
        }};
        std::vector<PendingRay> pending;
        int index = 0;
        for (const auto& r : rays) {
            PendingRay ray;
            ray.origin = "ray " + std::to_string(index++);
            ray.coords = Vector::Zero(4);
            std::string label = "(";
            for (int i = 0; i < 4; ++i) {
                ray.coords(i) = Complex(r[static_cast<std::size_t>(i)], 0.0);
                ray.exact.push_back(ExactCoord{{r[static_cast<std::size_t>(i)], 0}, {0, 0}});
                label += std::to_string(r[static_cast<std::size_t>(i)]);
                label += (i + 1 < 4) ? "," : ")";
            }
            ray.label = std::move(label);
            pending.push_back(std::move(ray));
        }
        return assemble(4, std::move(pending), true, "builtin:cabello18");
    }

    if (name == "peres33") {
        // 33 rays in dimension 3 with coordinates in {0, +-1, +-sqrt(2)}:
        // the classes (0,0,1), (0,1,+-1), permutations of (0,1,+-sqrt2) and
        // (+-1,+-1,sqrt2) under coordinate placement, rays identified up to
        // sign.
        std::vector<std::array<Surd, 3>> rows;
        const Surd zero{0, 0}, one{1, 0}, rt2{0, 1};
        auto sgn = [&](const Surd& s, int sign) { return sign >= 0 ? s : Surd{-s.unit, -s.root2}; };

        rows.push_back({one, zero, zero});
        rows.push_back({zero, one, zero});
        rows.push_back({zero, zero, one});
        for (int zero_pos = 2; zero_pos >= 0; --zero_pos) {
            for (int sign : {+1, -1}) {
                std::array<Surd, 3> row{};
                int slot = 0;
                for (int i = 0; i < 3; ++i) {
                    if (i == zero_pos) {
                        row[static_cast<std::size_t>(i)] = zero;
                    } else {
                        row[static_cast<std::size_t>(i)] = slot == 0 ? one : sgn(one, sign);
                        ++slot;
                    }
                }
                rows.push_back(row);
            }
        }
        for (int zero_pos = 0; zero_pos < 3; ++zero_pos) {
            for (bool rt2_last : {true, false}) {
                for (int sign : {+1, -1}) {
                    std::array<Surd, 3> row{};
                    int slot = 0;
                    for (int i = 0; i < 3; ++i) {
                        if (i == zero_pos) {
                            row[static_cast<std::size_t>(i)] = zero;
                        } else {
                            const bool second = slot == 1;
                            const Surd base = (second == rt2_last) ? rt2 : one;
                            row[static_cast<std::size_t>(i)] = second ? sgn(base, sign) : base;
                            ++slot;
                        }
                    }
                    rows.push_back(row);
                }
            }
        }
        for (int rt2_pos = 0; rt2_pos < 3; ++rt2_pos) {
            for (int s1 : {+1, -1}) {
                for (int s2 : {+1, -1}) {
                    std::array<Surd, 3> row{};
                    int slot = 0;
                    for (int i = 0; i < 3; ++i) {
                        if (i == rt2_pos) {
                            row[static_cast<std::size_t>(i)] = rt2;
                        } else {
                            row[static_cast<std::size_t>(i)] = sgn(one, slot == 0 ? s1 : s2);
                            ++slot;
                        }
                    }
                    rows.push_back(row);
                }
            }
        }

        auto coord_label = [](const Surd& s) -> std::string {
            if (s.root2 == 0) return std::to_string(s.unit);
            std::string sign = s.root2 < 0 ? "-" : "";
            return sign + "r2";
        };
        std::vector<PendingRay> pending;
        int index = 0;
        for (const auto& row : rows) {
            PendingRay ray;
            ray.origin = "ray " + std::to_string(index++);
            ray.coords = Vector::Zero(3);
            std::string label = "(";
            for (int i = 0; i < 3; ++i) {
                const Surd& s = row[static_cast<std::size_t>(i)];
                ray.coords(i) = Complex(s.value(), 0.0);
                ray.exact.push_back(ExactCoord{s, {0, 0}});
                label += coord_label(s);
                label += (i + 1 < 3) ? "," : ")";
            }
            ray.label = std::move(label);
            pending.push_back(std::move(ray));
        }
        return assemble(3, std::move(pending), true, "builtin:peres33");
    }

    throw std::invalid_argument("builtin_rayset: unknown name '" + std::string(name) +
                                "' (known: cabello18, peres33)");
}

OrthogonalityGraph orthogonality_graph(const RaySet& rs, Tolerance tol) {
    require_valid(tol);
    OrthogonalityGraph g;
    g.vertices = static_cast<int>(rs.rays.size());
    for (int i = 0; i < g.vertices; ++i) {
        for (int j = i + 1; j < g.vertices; ++j) {
            bool orthogonal;
            if (rs.ray_exact(i) && rs.ray_exact(j)) {
                orthogonal = ec_zero(exact_inner(rs.exact[static_cast<std::size_t>(i)],
                                                 rs.exact[static_cast<std::size_t>(j)]));
            } else {
                const Ket& x = rs.rays[static_cast<std::size_t>(i)];
                const Ket& y = rs.rays[static_cast<std::size_t>(j)];
                orthogonal = std::abs(inner_product(x, y)) <= tol.eps * norm(x) * norm(y);
            }
            if (orthogonal) g.edges.emplace_back(i, j);
        }
    }
    return g;
}

BasisFamily enumerate_bases(const OrthogonalityGraph& g, int d) {
    if (d < 1) throw std::invalid_argument("enumerate_bases: dimension must be positive");
    const std::size_t n = static_cast<std::size_t>(g.vertices);
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto& [i, j] : g.edges) {
        adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
        adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
    }

    BasisFamily bases;
    std::vector<int> clique;
    std::vector<int> candidates(n);
    for (std::size_t i = 0; i < n; ++i) candidates[i] = static_cast<int>(i);

    auto extend = [&](auto&& self, const std::vector<int>& cands) -> void {
        if (static_cast<int>(clique.size()) == d) {
            bases.push_back(clique);
            return;
        }
        const int needed = d - static_cast<int>(clique.size());
        for (std::size_t idx = 0; idx < cands.size(); ++idx) {
            if (static_cast<int>(cands.size() - idx) < needed) break;
            const int v = cands[idx];
            std::vector<int> next;
            next.reserve(cands.size() - idx);
            for (std::size_t k = idx + 1; k < cands.size(); ++k)
                if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(cands[k])])
                    next.push_back(cands[k]);
            clique.push_back(v);
            self(self, next);
            clique.pop_back();
        }
    };
    extend(extend, candidates);
    return bases;
}

GlobalValuationProblem problem_from_rayset(const RaySet& rs, ConstraintStyle style,
                                           Tolerance tol) {
    const OrthogonalityGraph g = orthogonality_graph(rs, tol);
    GlobalValuationProblem p;
    p.ray_count = g.vertices;
    p.dimension = rs.dimension;
    p.bases = enumerate_bases(g, rs.dimension);
    p.style = style;
    p.source = rs.source;
    if (style == ConstraintStyle::BasesPlusPairs) p.pairs = g.edges;
    return p;
}

}  // namespace qc
