#pragma once

// End-to-end experiment drivers: the random-bipartite oscillation pipeline
// (interlaced G_n(p), G_n(q) with candidate roots in one part), extension-
// property scans, the eval-vs-lattice cross oracle, and gadget unlabelling
// with canonical part-defining formulas.

#include <foconv/eval.hpp>
#include <foconv/formula.hpp>
#include <foconv/graph.hpp>
#include <foconv/lattice.hpp>
#include <foconv/rooting.hpp>

#include <bit>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace foconv {

// ---------------------------------------------------------------------------
// Oscillation pipeline (interlaced random bipartite graphs)

struct CounterexampleParams {
    int n_lo = 4;
    int n_hi = 12;
    double p = 0.2;
    double q = 0.8;
    std::uint64_t seed = 0;
    std::string root_part = "B";          // part the candidate roots come from
    std::optional<double> epsilon;        // default (q - p) / 3
};

struct OscillationRow {
    int index = 0;          // 1-based position in the interlaced sequence
    int n = 0;              // size parameter of the underlying G_n
    char parity = 'p';      // which distribution this graph was drawn from
    int part_a = 0;
    int part_b = 0;
    Vertex root = 0;
    Rational stone;         // <x ~ root, (H, root)> over the whole vertex set
    Rational proportion;    // deg(root) / |opposite part|
};

struct OscillationReport {
    CounterexampleParams params;
    double epsilon = 0.0;
    GraphSequence sequence;
    std::vector<OscillationRow> rows;
    // per sequence index
    std::vector<Rational> min_proportion, max_proportion, mean_proportion;
    std::vector<Rational> min_stone, max_stone;
    std::vector<double> max_deviation;     // max |proportion - parity probability|
    // per consecutive index pair: min |prop - prop'| over cross root pairs
    std::vector<Rational> gaps;
    bool oscillation_detected = false;     // every gap >= epsilon
    bool degenerate = false;               // epsilon <= 0: nothing to detect
};

// Seed for the graph with size parameter n drawn with edge probability
// prob, derived so that swapping (p,q) reproduces the identical samples.
inline std::uint64_t counterexample_graph_seed(std::uint64_t seed, int n, double prob) {
    std::uint64_t mixed = detail::splitmix64(seed);
    mixed ^= detail::splitmix64(static_cast<std::uint64_t>(n) + 0x51ed2701);
    mixed ^= detail::splitmix64(std::bit_cast<std::uint64_t>(prob));
    return detail::splitmix64(mixed);
}

inline OscillationReport run_counterexample(const CounterexampleParams& params,
                                            const EvalLimits& limits = {}) {
    if (!(params.p > 0 && params.p < 1 && params.q > 0 && params.q < 1))
        throw std::invalid_argument("counterexample: p and q must lie in (0,1)");
    if (params.n_lo < 1 || params.n_hi < params.n_lo)
        throw std::invalid_argument("counterexample: bad n range");
    if (params.root_part != "A" && params.root_part != "B")
        throw std::invalid_argument("counterexample: root part must be A or B");

    OscillationReport out;
    out.params = params;
    out.epsilon = params.epsilon.value_or((params.q - params.p) / 3.0);
    out.degenerate = !(out.epsilon > 0);

    GraphSequence seq_p, seq_q;
    for (int n = params.n_lo; n <= params.n_hi; ++n) {
        seq_p.graphs.push_back(gen_bipartite_random(n, params.p, counterexample_graph_seed(params.seed, n, params.p)));
        seq_q.graphs.push_back(gen_bipartite_random(n, params.q, counterexample_graph_seed(params.seed, n, params.q)));
    }
    std::ostringstream prov;
    prov << "counterexample p=" << params.p << " q=" << params.q << " n=" << params.n_lo << ".."
         << params.n_hi << " seed=" << params.seed;
    out.sequence = interlace(seq_p, seq_q);
    out.sequence.provenance = prov.str();

    Formula phi = parse_formula("x ~ root");
    const std::string opposite = params.root_part == "B" ? "A" : "B";
    std::vector<std::vector<Rational>> proportions_per_index;
    for (std::size_t idx = 0; idx < out.sequence.graphs.size(); ++idx) {
        const Graph& h = out.sequence.graphs[idx];
        bool from_p = idx % 2 == 0;
        int n = params.n_lo + static_cast<int>(idx / 2);
        const auto& roots = h.label_vertices(params.root_part);
        const auto& other = h.label_vertices(opposite);
        double parity_prob = from_p ? params.p : params.q;

        Rational min_prop, max_prop, sum_prop, min_st, max_st;
        bool first = true;
        double max_dev = 0.0;
        std::vector<Rational> props;
        for (Vertex r : roots) {
            OscillationRow row;
            row.index = static_cast<int>(idx) + 1;
            row.n = n;
            row.parity = from_p ? 'p' : 'q';
            row.part_a = static_cast<int>(h.label_vertices("A").size());
            row.part_b = static_cast<int>(h.label_vertices("B").size());
            row.root = r;
            row.stone = stone_pairing(RootedGraph(h, r), phi, limits).value;
            row.proportion = Rational(h.degree(r), static_cast<int>(other.size()));
            max_dev = std::max(max_dev, std::abs(rational_to_double(row.proportion) - parity_prob));
            if (first || row.proportion < min_prop) min_prop = row.proportion;
            if (first || row.proportion > max_prop) max_prop = row.proportion;
            if (first || row.stone < min_st) min_st = row.stone;
            if (first || row.stone > max_st) max_st = row.stone;
            sum_prop += row.proportion;
            first = false;
            props.push_back(row.proportion);
            out.rows.push_back(std::move(row));
        }
        out.min_proportion.push_back(min_prop);
        out.max_proportion.push_back(max_prop);
        out.mean_proportion.push_back(sum_prop / Rational(static_cast<long>(roots.size())));
        out.min_stone.push_back(min_st);
        out.max_stone.push_back(max_st);
        out.max_deviation.push_back(max_dev);
        proportions_per_index.push_back(std::move(props));
    }

    Rational eps = rational_from_double(out.epsilon);
    out.oscillation_detected = !out.degenerate && out.sequence.graphs.size() > 1;
    for (std::size_t idx = 0; idx + 1 < out.sequence.graphs.size(); ++idx) {
        Rational gap;
        bool first = true;
        for (const auto& a : proportions_per_index[idx]) {
            for (const auto& b : proportions_per_index[idx + 1]) {
                Rational d = a > b ? a - b : b - a;
                if (first || d < gap) gap = d;
                first = false;
            }
        }
        out.gaps.push_back(gap);
        if (gap < eps) out.oscillation_detected = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Extension-property scan

struct ExtensionReport {
    int k_max = 1;
    std::vector<std::vector<ExtensionCheck>> checks;   // checks[index][k-1]
};

inline ExtensionReport run_extension_scan(const GraphSequence& seq, int k_max) {
    if (k_max < 1) throw std::invalid_argument("extension scan: k_max must be >= 1");
    ExtensionReport out;
    out.k_max = k_max;
    for (const auto& g : seq.graphs) {
        std::vector<ExtensionCheck> per_graph;
        for (int k = 1; k <= k_max; ++k) per_graph.push_back(check_bipartite_extension(g, k));
        out.checks.push_back(std::move(per_graph));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cross-module oracle: <psi_{k,l}, G> against forward_F(pushforward)

struct LatticeOracleRow {
    int k = 0;
    int l = 0;
    Rational eval_value;       // <psi_{k,l}, G>
    Rational lattice_value;    // forward_F(mu, l, k)
    bool equal = false;
};

struct LatticeOracleResult {
    std::vector<LatticeOracleRow> rows;
    bool exact_match = true;
    LevelMultisets reconstructed;
    LevelMultisets direct;
    std::vector<double> level_displacement;
    bool roundtrip_ok = true;
    double tolerance = 1e-6;
};

// Computes Pr[F_l^k] both ways (first-order evaluation of psi_{k,l} and the
// lattice forward computation on the pushforward measure) and demands exact
// rational equality; then reconstructs the level multisets from the F-table
// and compares them against the directly computed filter multisets.
inline LatticeOracleResult run_lattice_oracle(const Graph& g, const Formula& xi,
                                              const Formula& phi, int k_max, int l_max,
                                              double tol = 1e-6, const EvalLimits& limits = {}) {
    if (k_max < 1 || l_max < 1) throw std::invalid_argument("lattice oracle: need k_max, l_max >= 1");
    SubsetMeasure mu = pushforward(g, xi, phi, limits);
    DerootedFormula der = deroot(phi);

    LatticeOracleResult out;
    out.tolerance = tol;
    for (int k = 1; k <= k_max; ++k) {
        for (int l = 1; l <= std::min(l_max, mu.m()); ++l) {
            LatticeOracleRow row;
            row.k = k;
            row.l = l;
            Formula psi = build_psi(der, xi, k, l);
            row.eval_value = stone_pairing(g, psi, limits).value;
            row.lattice_value = forward_F(mu, l, k);
            row.equal = row.eval_value == row.lattice_value;
            if (!row.equal) out.exact_match = false;
            out.rows.push_back(std::move(row));
        }
    }

    FTable table = forward_table(mu);
    out.reconstructed = reconstruct(table, tol);
    out.direct = level_multisets_direct(mu);
    out.level_displacement.assign(mu.m() + 1, 0.0);
    for (int l = 0; l <= mu.m(); ++l) {
        for (std::size_t i = 0; i < out.direct.levels[l].size(); ++i)
            out.level_displacement[l] = std::max(
                out.level_displacement[l],
                std::abs(out.direct.levels[l][i] - out.reconstructed.levels[l][i]));
        if (out.level_displacement[l] > tol) out.roundtrip_ok = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gadget unlabelling

struct UnlabelResult {
    GraphSequence sequence;     // gadget-attached plain graphs
    std::string xi_a;           // defines the original A part in the plain graph
    std::string xi_b;           // defines the original B part
};

// After attach_gadgets, original B vertices are exactly the vertices lying
// in a triangle with a third neighbor (triangle-gadget vertices keep degree
// 2 and bipartite edges create no triangles); original A vertices are
// exactly those on a 5-cycle with a third neighbor.
inline UnlabelResult unlabel_with_gadgets(const GraphSequence& seq) {
    UnlabelResult out;
    for (const auto& g : seq.graphs) out.sequence.graphs.push_back(attach_gadgets(g));
    out.sequence.provenance = "unlabel(" + seq.provenance + ")";
    out.xi_b =
        "exists u. (x ~ u & (exists v. (x ~ v & u ~ v & (exists w. (x ~ w & w != u & w != v)))))";
    out.xi_a =
        "exists a. (x ~ a & (exists b. (a ~ b & b != x & (exists c. (b ~ c & c != x & c != a & "
        "(exists d. (c ~ d & d ~ x & d != a & d != b & (exists w. (x ~ w & w != a & w != d)))))))))";
    return out;
}

// ---------------------------------------------------------------------------
// Report serialization

// one row per (sequence index, root)
inline std::string oscillation_to_csv(const OscillationReport& report) {
    std::ostringstream out;
    out << "index,n,parity,part_a,part_b,root,stone,stone_decimal,proportion,proportion_decimal\n";
    for (const auto& row : report.rows) {
        out << row.index << "," << row.n << "," << row.parity << "," << row.part_a << ","
            << row.part_b << "," << (row.root + 1) << "," << rational_to_string(row.stone) << ","
            << double_to_string(rational_to_double(row.stone)) << ","
            << rational_to_string(row.proportion) << ","
            << double_to_string(rational_to_double(row.proportion)) << "\n";
    }
    return out.str();
}

inline nlohmann::ordered_json oscillation_summary_json(const OscillationReport& report) {
    nlohmann::ordered_json j;
    j["p"] = report.params.p;
    j["q"] = report.params.q;
    j["n_lo"] = report.params.n_lo;
    j["n_hi"] = report.params.n_hi;
    j["seed"] = report.params.seed;
    j["root_part"] = report.params.root_part;
    j["epsilon"] = report.epsilon;
    auto per_index = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < report.min_proportion.size(); ++i) {
        nlohmann::ordered_json entry;
        entry["index"] = static_cast<int>(i) + 1;
        entry["parity"] = std::string(1, i % 2 == 0 ? 'p' : 'q');
        entry["min_proportion"] = rational_to_string(report.min_proportion[i]);
        entry["max_proportion"] = rational_to_string(report.max_proportion[i]);
        entry["mean_proportion"] = rational_to_string(report.mean_proportion[i]);
        entry["min_stone"] = rational_to_string(report.min_stone[i]);
        entry["max_stone"] = rational_to_string(report.max_stone[i]);
        entry["max_deviation"] = double_to_string(report.max_deviation[i]);
        per_index.push_back(std::move(entry));
    }
    j["per_index"] = std::move(per_index);
    auto gaps = nlohmann::ordered_json::array();
    for (const auto& g : report.gaps) gaps.push_back(double_to_string(rational_to_double(g)));
    j["gaps"] = std::move(gaps);
    j["oscillation_detected"] = report.oscillation_detected;
    j["degenerate"] = report.degenerate;
    return j;
}

inline nlohmann::ordered_json extension_check_json(const ExtensionCheck& check) {
    nlohmann::ordered_json j;
    j["satisfied"] = check.satisfied;
    if (check.witness) {
        nlohmann::ordered_json w;
        w["searched_part"] = check.witness->parts_swapped ? "A" : "B";
        auto plus_one = [](const std::vector<Vertex>& vs) {
            auto arr = nlohmann::ordered_json::array();
            for (Vertex v : vs) arr.push_back(v + 1);
            return arr;
        };
        w["X"] = plus_one(check.witness->x);
        w["Y"] = plus_one(check.witness->y);
        w["Z"] = plus_one(check.witness->z);
        j["witness"] = std::move(w);
    }
    return j;
}

inline nlohmann::ordered_json extension_report_json(const ExtensionReport& report) {
    nlohmann::ordered_json j;
    j["k_max"] = report.k_max;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
        nlohmann::ordered_json entry;
        entry["index"] = static_cast<int>(i) + 1;
        auto per_k = nlohmann::ordered_json::array();
        for (int k = 1; k <= report.k_max; ++k)
            per_k.push_back(extension_check_json(report.checks[i][k - 1]));
        entry["checks"] = std::move(per_k);
        rows.push_back(std::move(entry));
    }
    j["graphs"] = std::move(rows);
    return j;
}

inline nlohmann::ordered_json lattice_oracle_json(const LatticeOracleResult& result) {
    nlohmann::ordered_json j;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : result.rows) {
        nlohmann::ordered_json entry;
        entry["k"] = row.k;
        entry["l"] = row.l;
        entry["eval"] = rational_to_string(row.eval_value);
        entry["lattice"] = rational_to_string(row.lattice_value);
        entry["equal"] = row.equal;
        rows.push_back(std::move(entry));
    }
    j["cells"] = std::move(rows);
    j["exact_match"] = result.exact_match;
    j["reconstructed"] = result.reconstructed.to_json();
    j["direct"] = result.direct.to_json();
    auto disp = nlohmann::ordered_json::array();
    for (double d : result.level_displacement) disp.push_back(double_to_string(d));
    j["level_displacement"] = std::move(disp);
    j["roundtrip_ok"] = result.roundtrip_ok;
    j["tolerance"] = result.tolerance;
    return j;
}

}  // namespace foconv
