#pragma once

// Constructive root selection on finite graph sequences: candidate-root
// orderings by rooted Stone pairing, single-formula rooting with a
// convergence verdict, the inclusion-maximal index set I and separating
// exponent vectors for finite formula collections, and the finite-prefix
// consistency check across growing collections.
//
// The limit quantities of the underlying statements are estimated from the
// tail of the given finite sequence (default: the last 30% of indices).
// Verdict rule, applied to the l-inf deltas of consecutive value vectors:
// converging when the last `window` deltas all stay below theta;
// oscillating when at least two deltas inside the tail window exceed
// 3*theta; inconclusive otherwise.

#include <foconv/eval.hpp>
#include <foconv/formula.hpp>
#include <foconv/graph.hpp>
#include <foconv/rational.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace foconv {

// ---------------------------------------------------------------------------
// Orderings

enum class TieBreak { AscendingId, DescendingId };

struct RootOrdering {
    std::vector<Vertex> vertices;    // xi(G) sorted by value desc, ties by id
    std::vector<Rational> values;    // value[i] = <phi, (G, vertices[i])>
    TieBreak tie_break = TieBreak::AscendingId;
};

inline RootOrdering order_roots(const Graph& g, const Formula& xi, const Formula& phi,
                                TieBreak tie_break = TieBreak::AscendingId,
                                const EvalLimits& limits = {}) {
    if (phi.arity() < 1)
        throw std::invalid_argument("order_roots: phi must have at least one free variable");
    std::vector<Vertex> candidates = definable_vertices(g, xi, limits);
    if (candidates.empty()) throw std::runtime_error("order_roots: xi(G) is empty");
    std::vector<std::pair<Vertex, Rational>> entries;
    entries.reserve(candidates.size());
    for (Vertex u : candidates)
        entries.emplace_back(u, stone_pairing(RootedGraph(g, u), phi, limits).value);
    std::stable_sort(entries.begin(), entries.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return tie_break == TieBreak::AscendingId ? a.first < b.first : a.first > b.first;
    });
    RootOrdering out;
    out.tie_break = tie_break;
    for (auto& [v, q] : entries) {
        out.vertices.push_back(v);
        out.values.push_back(std::move(q));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Convergence reports

struct ConvergenceParams {
    int window = 3;
    double theta = 0.05;
    double tail_fraction = 0.3;
};

enum class Verdict { Converging, Oscillating, Inconclusive };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Converging: return "converging";
        case Verdict::Oscillating: return "oscillating";
        default: return "inconclusive";
    }
}

struct ConvergenceReport {
    std::vector<std::string> columns;
    std::vector<std::vector<Rational>> values;   // one row per sequence index
    std::vector<Rational> deltas;                // l-inf over the common prefix of consecutive rows
    ConvergenceParams params;
    Verdict verdict = Verdict::Inconclusive;
    bool cardinality_constant = true;
};

inline std::size_t tail_start(std::size_t count, double tail_fraction) {
    if (count == 0) return 0;
    auto tail = static_cast<std::size_t>(std::max(1.0, std::ceil(tail_fraction * count)));
    return count - std::min(tail, count);
}

inline ConvergenceReport make_convergence_report(std::vector<std::string> columns,
                                                 std::vector<std::vector<Rational>> values,
                                                 const ConvergenceParams& params,
                                                 bool cardinality_constant = true) {
    ConvergenceReport out;
    out.columns = std::move(columns);
    out.values = std::move(values);
    out.params = params;
    out.cardinality_constant = cardinality_constant;
    for (std::size_t i = 0; i + 1 < out.values.size(); ++i) {
        const auto& a = out.values[i];
        const auto& b = out.values[i + 1];
        std::size_t common = std::min(a.size(), b.size());
        Rational delta = 0;
        for (std::size_t j = 0; j < common; ++j) {
            Rational d = a[j] > b[j] ? a[j] - b[j] : b[j] - a[j];
            if (d > delta) delta = d;
        }
        out.deltas.push_back(delta);
    }
    Rational theta = rational_from_double(params.theta);
    if (!out.deltas.empty()) {
        auto window = static_cast<std::size_t>(std::max(1, params.window));
        std::size_t effective = std::min(window, out.deltas.size());
        bool settled = true;
        for (std::size_t i = out.deltas.size() - effective; i < out.deltas.size(); ++i)
            if (out.deltas[i] >= theta) settled = false;
        if (settled) {
            out.verdict = Verdict::Converging;
        } else {
            std::size_t start = tail_start(out.deltas.size(), params.tail_fraction);
            start = std::min(start, out.deltas.size() - std::min(out.deltas.size(), window));
            int spikes = 0;
            for (std::size_t i = start; i < out.deltas.size(); ++i)
                if (out.deltas[i] > 3 * theta) ++spikes;
            out.verdict = spikes >= 2 ? Verdict::Oscillating : Verdict::Inconclusive;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Single formula (ordering index i)

struct RootSingleResult {
    std::vector<Vertex> roots;   // one per sequence index
    ConvergenceReport report;
    int index = 1;               // the ordering position that was selected
    int stabilized_sentence = 0; // p = 0 only: 1, 2, or 0 when neither holds on the tail
};

// For arity >= 1, r_n is the index-th vertex of order_roots(G_n) and the
// report tracks the full sorted value vectors. For sentences the two
// dichotomy sentences (forall y)(xi(y) -> phi^-(y)) and its negated twin
// are tracked instead and roots are the least xi-vertices.
//
// require_constant_cardinality enforces the constant-|xi(G_n)| normalization
// and rejects sequences violating it; disabling it compares consecutive
// value vectors on their common prefix (used for sequences whose candidate
// sets grow, such as the random bipartite counterexample).
inline RootSingleResult root_single(const GraphSequence& seq, const Formula& xi,
                                    const Formula& phi, int index,
                                    const ConvergenceParams& params = {},
                                    bool require_constant_cardinality = true,
                                    const EvalLimits& limits = {}) {
    if (seq.graphs.empty()) throw std::invalid_argument("root_single: empty sequence");
    CardinalityProfile profile = is_algebraic_on_sequence(seq, xi, 0, limits);
    for (std::size_t n = 0; n < profile.profile.size(); ++n)
        if (profile.profile[n] == 0)
            throw std::runtime_error("root_single: xi(G_" + std::to_string(n + 1) + ") is empty");
    if (require_constant_cardinality && !profile.constant)
        throw std::runtime_error("root_single: |xi(G_n)| is not constant across the sequence");

    RootSingleResult out;
    out.index = index;

    if (phi.arity() == 0) {
        DerootedFormula der = deroot(phi);
        FreshNameSupply supply;
        supply.reserve(der.root_var);
        const std::string& xi_var = xi.free_vars().front();
        Formula xi_at_y =
            detail::substitute(xi, {{xi_var, Term::variable(der.root_var)}}, nullptr, supply);
        Formula all_satisfy = Formula::forall(der.root_var, Formula::implies(xi_at_y, der.formula));
        Formula none_satisfy =
            Formula::forall(der.root_var, Formula::implies(xi_at_y, Formula::negate(der.formula)));
        std::vector<std::vector<Rational>> rows;
        for (const auto& g : seq.graphs) {
            rows.push_back({stone_pairing(g, all_satisfy, limits).value,
                            stone_pairing(g, none_satisfy, limits).value});
            out.roots.push_back(definable_vertices(g, xi, limits).front());
        }
        out.report = make_convergence_report({"forall_xi_phi", "forall_xi_not_phi"},
                                             std::move(rows), params, profile.constant);
        std::size_t start = tail_start(out.report.values.size(), params.tail_fraction);
        bool s1 = true, s2 = true;
        for (std::size_t i = start; i < out.report.values.size(); ++i) {
            if (out.report.values[i][0] != 1) s1 = false;
            if (out.report.values[i][1] != 1) s2 = false;
        }
        out.stabilized_sentence = s1 ? 1 : (s2 ? 2 : 0);
        return out;
    }

    std::vector<std::vector<Rational>> rows;
    std::size_t max_t = 0;
    for (std::size_t n = 0; n < seq.graphs.size(); ++n) {
        RootOrdering ordering = order_roots(seq.graphs[n], xi, phi, TieBreak::AscendingId, limits);
        if (index < 1 || static_cast<std::size_t>(index) > ordering.vertices.size())
            throw std::invalid_argument("root_single: ordering index " + std::to_string(index) +
                                        " out of range at sequence position " + std::to_string(n + 1));
        out.roots.push_back(ordering.vertices[index - 1]);
        max_t = std::max(max_t, ordering.values.size());
        rows.push_back(std::move(ordering.values));
    }
    std::vector<std::string> columns;
    for (std::size_t i = 1; i <= max_t; ++i) columns.push_back("pos" + std::to_string(i));
    out.report = make_convergence_report(std::move(columns), std::move(rows), params, profile.constant);
    return out;
}

// ---------------------------------------------------------------------------
// Finite collections: index set I, separating exponents, psi

struct ChooseIResult {
    std::vector<int> indices;                        // 1-based formula indices, ascending
    Vertex chosen_vertex = 0;                        // witness in the last graph
    std::vector<std::optional<Vertex>> witnesses;    // per graph: least joint witness, if any
};

// Inclusion-maximal I {i : <phi_i,(G_last,v)> > tau0} over v in xi(G_last),
// ties broken by size then by vertex id. The last graph serves as the
// finite proxy for the limit.
inline ChooseIResult choose_I(const GraphSequence& seq, const Formula& xi,
                              const std::vector<Formula>& phis, const Rational& tau0 = Rational(0),
                              const EvalLimits& limits = {}) {
    if (seq.graphs.empty()) throw std::invalid_argument("choose_I: empty sequence");
    if (phis.empty()) throw std::invalid_argument("choose_I: empty formula list");
    for (const auto& phi : phis)
        if (phi.arity() == 0)
            throw std::invalid_argument("choose_I: sentences are excluded (any rooting works)");

    const Graph& last = seq.graphs.back();
    std::vector<Vertex> candidates = definable_vertices(last, xi, limits);
    if (candidates.empty()) throw std::runtime_error("choose_I: xi(G_last) is empty");

    auto index_set = [&](const Graph& g, Vertex v) {
        std::vector<int> set;
        for (std::size_t i = 0; i < phis.size(); ++i)
            if (stone_pairing(RootedGraph(g, v), phis[i], limits).value > tau0)
                set.push_back(static_cast<int>(i) + 1);
        return set;
    };

    std::vector<std::vector<int>> sets;
    sets.reserve(candidates.size());
    for (Vertex v : candidates) sets.push_back(index_set(last, v));

    auto subset_of = [](const std::vector<int>& a, const std::vector<int>& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    std::size_t best = 0;
    bool found = false;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < sets.size(); ++j)
            if (j != i && sets[i] != sets[j] && subset_of(sets[i], sets[j])) dominated = true;
        if (dominated) continue;
        if (!found || sets[i].size() > sets[best].size()) {
            best = i;
            found = true;
        }
    }

    ChooseIResult out;
    out.indices = sets[best];
    out.chosen_vertex = candidates[best];
    for (const auto& g : seq.graphs) {
        std::optional<Vertex> witness;
        for (Vertex v : definable_vertices(g, xi, limits)) {
            bool all_positive = true;
            for (int i : out.indices)
                if (!(stone_pairing(RootedGraph(g, v), phis[i - 1], limits).value > tau0)) {
                    all_positive = false;
                    break;
                }
            if (all_positive) {
                witness = v;
                break;
            }
        }
        out.witnesses.push_back(witness);
    }
    return out;
}

// First exponent vector (by max-norm, then lexicographic) whose products
// over the cartesian product of the value sets are pairwise separated by
// more than tau. Exact rational comparisons.
inline std::vector<int> find_exponents(const std::vector<std::vector<Rational>>& a_sets,
                                       const Rational& tau = Rational(0), int budget = 10000) {
    if (a_sets.empty()) throw std::invalid_argument("find_exponents: empty input");
    std::uint64_t product_count = 1;
    for (const auto& set : a_sets) {
        if (set.empty()) throw std::invalid_argument("find_exponents: empty value set");
        for (const auto& v : set)
            if (!(v > 0) || v > 1)
                throw std::invalid_argument("find_exponents: values must lie in (0,1]");
        product_count *= set.size();
        if (product_count > 100000) throw std::invalid_argument("find_exponents: value sets too large");
    }
    std::size_t k = a_sets.size();

    auto separated = [&](const std::vector<int>& e) {
        std::vector<Rational> products;
        products.reserve(product_count);
        std::vector<std::size_t> pick(k, 0);
        while (true) {
            Rational prod = 1;
            for (std::size_t i = 0; i < k; ++i)
                prod *= rational_pow(a_sets[i][pick[i]], static_cast<unsigned>(e[i]));
            products.push_back(std::move(prod));
            std::size_t pos = k;
            while (pos > 0 && ++pick[pos - 1] == a_sets[pos - 1].size()) pick[--pos] = 0;
            if (pos == 0) break;
        }
        std::sort(products.begin(), products.end());
        for (std::size_t i = 0; i + 1 < products.size(); ++i)
            if (products[i + 1] - products[i] <= tau) return false;
        return true;
    };

    int tried = 0;
    for (int max_norm = 1;; ++max_norm) {
        // vectors in [1..max_norm]^k containing max_norm at least once, in
        // lexicographic order
        std::vector<int> e(k, 1);
        while (true) {
            bool has_max = std::find(e.begin(), e.end(), max_norm) != e.end();
            if (has_max) {
                if (++tried > budget)
                    throw std::runtime_error("find_exponents: budget exhausted (tau too large or "
                                             "values too close)");
                if (separated(e)) return e;
            }
            std::size_t pos = k;
            while (pos > 0 && ++e[pos - 1] > max_norm) e[--pos] = 1;
            if (pos == 0) break;
        }
    }
}

struct RootMultiResult {
    std::vector<Vertex> roots;
    std::vector<int> I;                              // 1-based, ascending
    std::vector<int> exponents;                      // aligned with I
    std::optional<Formula> psi;
    std::optional<RootSingleResult> psi_rooting;
    std::vector<ConvergenceReport> formula_reports;  // one per input formula
    std::vector<bool> expected_zero;                 // j not in I
};

// Computes I and the per-formula value sets from the sequence tail, builds
// the separating power conjunction psi and roots the sequence by its top
// ordering position; reports every formula's value sequence at the chosen
// roots. With I empty the roots are the least xi-vertices.
inline RootMultiResult root_multi(const GraphSequence& seq, const Formula& xi,
                                  const std::vector<Formula>& phis,
                                  const ConvergenceParams& params = {},
                                  const Rational& tau0 = Rational(0),
                                  const Rational& tau = Rational(0), int budget = 10000,
                                  const EvalLimits& limits = {}) {
    RootMultiResult out;
    ChooseIResult chosen = choose_I(seq, xi, phis, tau0, limits);
    out.I = chosen.indices;

    if (out.I.empty()) {
        for (const auto& g : seq.graphs) {
            auto candidates = definable_vertices(g, xi, limits);
            if (candidates.empty()) throw std::runtime_error("root_multi: xi(G_n) is empty");
            out.roots.push_back(candidates.front());
        }
    } else {
        std::size_t start = tail_start(seq.graphs.size(), params.tail_fraction);
        std::vector<std::vector<Rational>> a_sets;
        for (int i : out.I) {
            std::vector<Rational> values;
            for (std::size_t n = start; n < seq.graphs.size(); ++n) {
                const Graph& g = seq.graphs[n];
                for (Vertex v : definable_vertices(g, xi, limits)) {
                    Rational q = stone_pairing(RootedGraph(g, v), phis[i - 1], limits).value;
                    if (q > 0 && q <= 1) values.push_back(std::move(q));
                }
            }
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
            a_sets.push_back(std::move(values));
        }
        out.exponents = find_exponents(a_sets, tau, budget);
        std::vector<Formula> selected;
        for (int i : out.I) selected.push_back(phis[i - 1]);
        out.psi = build_power_conj(selected, out.exponents);
        out.psi_rooting = root_single(seq, xi, *out.psi, 1, params, true, limits);
        out.roots = out.psi_rooting->roots;
    }

    for (std::size_t j = 0; j < phis.size(); ++j) {
        std::vector<std::vector<Rational>> rows;
        for (std::size_t n = 0; n < seq.graphs.size(); ++n)
            rows.push_back({stone_pairing(RootedGraph(seq.graphs[n], out.roots[n]), phis[j], limits).value});
        out.formula_reports.push_back(make_convergence_report(
            {"phi" + std::to_string(j + 1)}, std::move(rows), params));
        out.expected_zero.push_back(std::find(out.I.begin(), out.I.end(),
                                              static_cast<int>(j) + 1) == out.I.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite-prefix extension (the finite shadow of the diagonalization)

struct ExtendPrefixResult {
    std::vector<RootMultiResult> prefixes;           // prefix j = 1..t
    std::vector<std::vector<Rational>> tail_means;   // tail_means[j-1][f-1], f <= j
    Rational max_discrepancy = 0;
    Rational tolerance = 0;
    bool consistent = true;
};

// Runs root_multi on each prefix phi_1..phi_j and reports whether each
// formula's tail-mean value agrees across the prefixes that contain it.
// The infinite tree and the Koenig-path diagonalization are not modeled;
// disagreement is reported, not resolved.
inline ExtendPrefixResult extend_prefix(const GraphSequence& seq, const Formula& xi,
                                        const std::vector<Formula>& phis, int t,
                                        const ConvergenceParams& params = {},
                                        const Rational& tolerance = Rational(1, 20),
                                        const Rational& tau0 = Rational(0),
                                        const Rational& tau = Rational(0), int budget = 10000,
                                        const EvalLimits& limits = {}) {
    if (t < 1 || static_cast<std::size_t>(t) > phis.size())
        throw std::invalid_argument("extend_prefix: prefix length out of range");
    ExtendPrefixResult out;
    out.tolerance = tolerance;
    for (int j = 1; j <= t; ++j) {
        std::vector<Formula> prefix(phis.begin(), phis.begin() + j);
        out.prefixes.push_back(root_multi(seq, xi, prefix, params, tau0, tau, budget, limits));
        const RootMultiResult& result = out.prefixes.back();
        std::size_t start = tail_start(seq.graphs.size(), params.tail_fraction);
        std::vector<Rational> means;
        for (int f = 0; f < j; ++f) {
            Rational sum = 0;
            std::size_t count = 0;
            for (std::size_t n = start; n < seq.graphs.size(); ++n) {
                sum += result.formula_reports[f].values[n][0];
                ++count;
            }
            means.push_back(sum / Rational(static_cast<long>(count)));
        }
        out.tail_means.push_back(std::move(means));
    }
    for (std::size_t f = 0; f < static_cast<std::size_t>(t); ++f) {
        for (std::size_t j1 = f; j1 < out.tail_means.size(); ++j1) {
            for (std::size_t j2 = j1 + 1; j2 < out.tail_means.size(); ++j2) {
                Rational a = out.tail_means[j1][f];
                Rational b = out.tail_means[j2][f];
                Rational d = a > b ? a - b : b - a;
                if (d > out.max_discrepancy) out.max_discrepancy = d;
            }
        }
    }
    out.consistent = out.max_discrepancy <= out.tolerance;
    return out;
}

// ---------------------------------------------------------------------------
// Report serialization (JSON and CSV)

inline nlohmann::ordered_json report_to_json(const ConvergenceReport& report) {
    nlohmann::ordered_json j;
    j["columns"] = report.columns;
    auto rows = nlohmann::ordered_json::array();
    auto rows_decimal = nlohmann::ordered_json::array();
    for (const auto& row : report.values) {
        auto cells = nlohmann::ordered_json::array();
        auto decimals = nlohmann::ordered_json::array();
        for (const auto& q : row) {
            cells.push_back(rational_to_string(q));
            decimals.push_back(double_to_string(rational_to_double(q)));
        }
        rows.push_back(std::move(cells));
        rows_decimal.push_back(std::move(decimals));
    }
    j["values"] = std::move(rows);
    j["values_decimal"] = std::move(rows_decimal);
    auto deltas = nlohmann::ordered_json::array();
    for (const auto& d : report.deltas) deltas.push_back(double_to_string(rational_to_double(d)));
    j["deltas"] = std::move(deltas);
    j["verdict"] = to_string(report.verdict);
    j["cardinality_constant"] = report.cardinality_constant;
    j["params"] = {{"window", report.params.window},
                   {"theta", report.params.theta},
                   {"tail_fraction", report.params.tail_fraction}};
    return j;
}

// one row per sequence index, one column per tracked position/formula
inline std::string report_to_csv(const ConvergenceReport& report,
                                 const std::vector<Vertex>* roots = nullptr) {
    std::ostringstream out;
    out << "index";
    if (roots) out << ",root";
    for (const auto& c : report.columns) out << "," << c;
    out << ",delta\n";
    for (std::size_t i = 0; i < report.values.size(); ++i) {
        out << (i + 1);
        if (roots) out << "," << ((*roots)[i] + 1);
        for (std::size_t c = 0; c < report.columns.size(); ++c) {
            out << ",";
            if (c < report.values[i].size())
                out << double_to_string(rational_to_double(report.values[i][c]));
        }
        out << ",";
        if (i > 0) out << double_to_string(rational_to_double(report.deltas[i - 1]));
        out << "\n";
    }
    return out.str();
}

inline nlohmann::ordered_json root_single_to_json(const RootSingleResult& result) {
    nlohmann::ordered_json j;
    j["index"] = result.index;
    auto roots = nlohmann::ordered_json::array();
    for (Vertex r : result.roots) roots.push_back(r + 1);
    j["roots"] = std::move(roots);
    if (result.stabilized_sentence != 0) j["stabilized_sentence"] = result.stabilized_sentence;
    j["report"] = report_to_json(result.report);
    return j;
}

inline nlohmann::ordered_json root_multi_to_json(const RootMultiResult& result) {
    nlohmann::ordered_json j;
    j["I"] = result.I;
    j["exponents"] = result.exponents;
    if (result.psi) j["psi"] = result.psi->to_string();
    auto roots = nlohmann::ordered_json::array();
    for (Vertex r : result.roots) roots.push_back(r + 1);
    j["roots"] = std::move(roots);
    auto reports = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < result.formula_reports.size(); ++i) {
        nlohmann::ordered_json entry;
        entry["formula"] = static_cast<int>(i) + 1;
        entry["expected_zero"] = static_cast<bool>(result.expected_zero[i]);
        entry["report"] = report_to_json(result.formula_reports[i]);
        reports.push_back(std::move(entry));
    }
    j["formula_reports"] = std::move(reports);
    if (result.psi_rooting) j["psi_report"] = report_to_json(result.psi_rooting->report);
    return j;
}

// one row per sequence index, one column per formula (values at the chosen roots)
inline std::string root_multi_to_csv(const RootMultiResult& result) {
    std::ostringstream out;
    out << "index,root";
    for (std::size_t f = 0; f < result.formula_reports.size(); ++f) out << ",phi" << (f + 1);
    out << "\n";
    for (std::size_t i = 0; i < result.roots.size(); ++i) {
        out << (i + 1) << "," << (result.roots[i] + 1);
        for (const auto& report : result.formula_reports)
            out << "," << double_to_string(rational_to_double(report.values[i][0]));
        out << "\n";
    }
    return out.str();
}

inline nlohmann::ordered_json extend_prefix_to_json(const ExtendPrefixResult& result) {
    nlohmann::ordered_json j;
    auto prefixes = nlohmann::ordered_json::array();
    for (std::size_t p = 0; p < result.prefixes.size(); ++p) {
        nlohmann::ordered_json entry;
        entry["prefix"] = static_cast<int>(p) + 1;
        entry["result"] = root_multi_to_json(result.prefixes[p]);
        auto means = nlohmann::ordered_json::array();
        for (const auto& m : result.tail_means[p]) means.push_back(rational_to_string(m));
        entry["tail_means"] = std::move(means);
        prefixes.push_back(std::move(entry));
    }
    j["prefixes"] = std::move(prefixes);
    j["max_discrepancy"] = rational_to_string(result.max_discrepancy);
    j["tolerance"] = rational_to_string(result.tolerance);
    j["consistent"] = result.consistent;
    return j;
}

}  // namespace foconv
