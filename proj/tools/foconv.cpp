// foconv - first-order structural convergence experiments on finite graphs.
//
// Single binary, subcommand style. Exit codes: 0 success, 1 domain error
// (structured message on stderr), 2 usage error. All randomized runs take
// an explicit --seed; identical invocations produce byte-identical output.

#include <foconv/foconv.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace foconv;
using nlohmann::ordered_json;

struct OutputTarget {
    std::string path;   // empty = stdout

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write file: " + path);
        out << text;
    }

    void write_json(const ordered_json& j) const { write(j.dump(2) + "\n"); }
};

std::pair<int, int> parse_range(const std::string& text) {
    auto sep = text.find("..");
    if (sep == std::string::npos) {
        int v = std::stoi(text);
        return {v, v};
    }
    return {std::stoi(text.substr(0, sep)), std::stoi(text.substr(sep + 2))};
}

Formula parse_formula_arg(const std::string& text, const std::string& flag) {
    try {
        return parse_formula(text);
    } catch (const ParseError& e) {
        throw std::runtime_error(flag + ": " + e.what());
    }
}

ordered_json stone_json(const Formula& phi, const StoneValue& sv) {
    ordered_json j;
    j["formula"] = phi.to_string();
    j["arity"] = sv.arity;
    j["uses_root"] = phi.uses_root();
    j["count"] = sv.count.str();
    j["total"] = sv.total.str();
    j["value"] = rational_to_string(sv.value);
    j["value_decimal"] = double_to_string(rational_to_double(sv.value));
    return j;
}

struct Common {
    OutputTarget out;
    EvalLimits limits;
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--out", common.out.path, "write the report to this file instead of stdout");
    cmd->add_option("--max-table", common.limits.max_table_entries,
                    "enumeration cap on truth-table entries");
}

int run(CLI::App& app, int argc, char** argv) {
    Common common;

    // ---- stone ----
    auto* stone = app.add_subcommand("stone", "exact Stone pairing <phi, G> of a formula");
    std::string stone_graph, stone_formula;
    std::optional<int> stone_root;
    stone->add_option("--graph", stone_graph, "graph file")->required();
    stone->add_option("--formula", stone_formula, "formula text")->required();
    stone->add_option("--root", stone_root, "root vertex (1-based), overrides the file root");
    add_common(stone, common);
    stone->callback([&] {
        LoadedGraph lg = load_graph(stone_graph);
        Formula phi = parse_formula_arg(stone_formula, "--formula");
        std::optional<Vertex> root = lg.root;
        if (stone_root) root = *stone_root - 1;
        StoneValue sv = root ? stone_pairing(RootedGraph(lg.graph, *root), phi, common.limits)
                             : stone_pairing(lg.graph, phi, common.limits);
        common.out.write_json(stone_json(phi, sv));
    });

    // ---- definable ----
    auto* definable = app.add_subcommand("definable", "solution set of a root-free formula");
    std::string def_graph, def_formula;
    definable->add_option("--graph", def_graph, "graph file")->required();
    definable->add_option("--formula", def_formula, "formula text")->required();
    add_common(definable, common);
    definable->callback([&] {
        LoadedGraph lg = load_graph(def_graph);
        Formula phi = parse_formula_arg(def_formula, "--formula");
        DefinableSet set = definable_set(lg.graph, phi, common.limits);
        ordered_json j;
        j["formula"] = phi.to_string();
        j["arity"] = set.arity;
        j["count"] = set.tuples.size();
        if (set.arity == 1) {
            auto verts = ordered_json::array();
            for (const auto& tuple : set.tuples) verts.push_back(tuple.front() + 1);
            j["vertices"] = std::move(verts);
        } else {
            auto tuples = ordered_json::array();
            for (const auto& tuple : set.tuples) {
                auto arr = ordered_json::array();
                for (Vertex v : tuple) arr.push_back(v + 1);
                tuples.push_back(std::move(arr));
            }
            j["tuples"] = std::move(tuples);
        }
        common.out.write_json(j);
    });

    // ---- pushforward ----
    auto* push = app.add_subcommand(
        "pushforward", "measure on subsets of xi(G) induced by phi over random tuples");
    std::string push_graph, push_xi, push_phi;
    push->add_option("--graph", push_graph, "graph file")->required();
    push->add_option("--xi", push_xi, "arity-1 candidate formula")->required();
    push->add_option("--phi", push_phi, "rooted formula")->required();
    add_common(push, common);
    push->callback([&] {
        LoadedGraph lg = load_graph(push_graph);
        SubsetMeasure mu = pushforward(lg.graph, parse_formula_arg(push_xi, "--xi"),
                                       parse_formula_arg(push_phi, "--phi"), common.limits);
        // like every other vertex id, ground elements are reported 1-based
        ordered_json j;
        auto ground = ordered_json::array();
        for (int v : mu.ground()) ground.push_back(v + 1);
        j["ground"] = std::move(ground);
        auto weights = ordered_json::array();
        for (std::uint32_t mask = 0; mask < mu.mask_count(); ++mask) {
            if (mu.weight(mask) == 0) continue;
            ordered_json entry;
            auto set = ordered_json::array();
            for (int v : mu.elements_of(mask)) set.push_back(v + 1);
            entry["set"] = std::move(set);
            entry["p"] = rational_to_string(mu.weight(mask));
            weights.push_back(std::move(entry));
        }
        j["weights"] = std::move(weights);
        common.out.write_json(j);
    });

    // ---- lattice-forward ----
    auto* lforward = app.add_subcommand(
        "lattice-forward", "Pr[|intersection of k draws| >= l] for a subset measure");
    std::string lf_measure;
    std::optional<int> lf_l, lf_k;
    bool lf_brute = false;
    lforward->add_option("--measure", lf_measure, "measure file")->required();
    lforward->add_option("--l", lf_l, "intersection size threshold");
    lforward->add_option("--k", lf_k, "number of independent draws");
    lforward->add_flag("--brute-force", lf_brute, "use the direct 2^{mk} enumeration oracle");
    add_common(lforward, common);
    lforward->callback([&] {
        SubsetMeasure mu = measure_from_json(read_json_file(lf_measure));
        if (lf_l.has_value() != lf_k.has_value())
            throw std::runtime_error("lattice-forward: --l and --k must be given together");
        if (lf_l) {
            Rational value =
                lf_brute ? forward_F_bruteforce(mu, *lf_l, *lf_k) : forward_F(mu, *lf_l, *lf_k);
            ordered_json j;
            j["l"] = *lf_l;
            j["k"] = *lf_k;
            j["value"] = rational_to_string(value);
            j["value_decimal"] = double_to_string(rational_to_double(value));
            common.out.write_json(j);
        } else {
            common.out.write_json(forward_table(mu).to_json());
        }
    });

    // ---- lattice-reconstruct ----
    auto* lrec = app.add_subcommand("lattice-reconstruct",
                                    "level multisets A_l recovered from an F-table");
    std::string lr_table;
    double lr_tol = 1e-6;
    std::optional<double> lr_perturb;
    int lr_trials = 20;
    std::uint64_t lr_seed = 1;
    lrec->add_option("--ftable", lr_table, "F-table file")->required();
    lrec->add_option("--tol", lr_tol, "root-recovery tolerance");
    lrec->add_option("--perturb", lr_perturb, "also report displacement under this perturbation");
    lrec->add_option("--trials", lr_trials, "perturbation trials");
    lrec->add_option("--seed", lr_seed, "perturbation seed");
    add_common(lrec, common);
    lrec->callback([&] {
        FTable table = FTable::from_json(read_json_file(lr_table));
        LevelMultisets lm = reconstruct(table, lr_tol);
        ordered_json j = lm.to_json();
        if (lr_perturb) {
            PerturbationReport pr =
                perturbation_report(table, *lr_perturb, lr_trials, lr_seed, lr_tol);
            ordered_json p;
            p["delta"] = pr.delta;
            p["trials"] = pr.trials;
            p["seed"] = pr.seed;
            auto disp = ordered_json::array();
            for (double d : pr.max_displacement) disp.push_back(double_to_string(d));
            p["max_displacement"] = std::move(disp);
            auto amp = ordered_json::array();
            for (double a : pr.amplification) amp.push_back(double_to_string(a));
            p["amplification"] = std::move(amp);
            p["failed_trials"] = pr.failed_trials;
            j["perturbation"] = std::move(p);
        }
        common.out.write_json(j);
    });

    // ---- root-single ----
    auto* rsingle = app.add_subcommand("root-single",
                                       "root a sequence by the i-th candidate of the phi-ordering");
    std::string rs_seq, rs_xi, rs_phi, rs_format = "json";
    int rs_index = 1;
    ConvergenceParams rs_params;
    bool rs_allow_varying = false;
    rsingle->add_option("--seq", rs_seq, "sequence file or directory")->required();
    rsingle->add_option("--xi", rs_xi, "arity-1 candidate formula")->required();
    rsingle->add_option("--phi", rs_phi, "formula in the rooted language")->required();
    rsingle->add_option("--index", rs_index, "ordering position (1-based)");
    rsingle->add_option("--theta", rs_params.theta, "convergence threshold");
    rsingle->add_option("--window", rs_params.window, "settled-delta window");
    rsingle->add_option("--tail-fraction", rs_params.tail_fraction, "tail used as limit proxy");
    rsingle->add_flag("--allow-varying-xi", rs_allow_varying,
                      "accept sequences whose candidate-set size varies");
    rsingle->add_option("--format", rs_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    add_common(rsingle, common);
    rsingle->callback([&] {
        GraphSequence seq = load_sequence(rs_seq);
        RootSingleResult result =
            root_single(seq, parse_formula_arg(rs_xi, "--xi"), parse_formula_arg(rs_phi, "--phi"),
                        rs_index, rs_params, !rs_allow_varying, common.limits);
        if (rs_format == "csv")
            common.out.write(report_to_csv(result.report, &result.roots));
        else
            common.out.write_json(root_single_to_json(result));
    });

    // ---- root-multi ----
    auto* rmulti =
        app.add_subcommand("root-multi", "root a sequence for a finite collection of formulas");
    std::string rm_seq, rm_xi, rm_format = "json";
    std::vector<std::string> rm_formulas;
    ConvergenceParams rm_params;
    std::string rm_tau0 = "0", rm_tau = "0";
    int rm_budget = 10000;
    rmulti->add_option("--seq", rm_seq, "sequence file or directory")->required();
    rmulti->add_option("--xi", rm_xi, "arity-1 candidate formula")->required();
    rmulti->add_option("--formula", rm_formulas, "rooted formula (repeatable)")->required();
    rmulti->add_option("--tau0", rm_tau0, "positivity threshold (rational)");
    rmulti->add_option("--tau", rm_tau, "product separation tolerance (rational)");
    rmulti->add_option("--budget", rm_budget, "exponent search budget");
    rmulti->add_option("--theta", rm_params.theta, "convergence threshold");
    rmulti->add_option("--window", rm_params.window, "settled-delta window");
    rmulti->add_option("--tail-fraction", rm_params.tail_fraction, "tail used as limit proxy");
    rmulti->add_option("--format", rm_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    add_common(rmulti, common);
    rmulti->callback([&] {
        GraphSequence seq = load_sequence(rm_seq);
        std::vector<Formula> phis;
        for (const auto& text : rm_formulas) phis.push_back(parse_formula_arg(text, "--formula"));
        RootMultiResult result =
            root_multi(seq, parse_formula_arg(rm_xi, "--xi"), phis, rm_params,
                       rational_from_string(rm_tau0), rational_from_string(rm_tau), rm_budget,
                       common.limits);
        if (rm_format == "csv")
            common.out.write(root_multi_to_csv(result));
        else
            common.out.write_json(root_multi_to_json(result));
    });

    // ---- extend-prefix ----
    auto* eprefix = app.add_subcommand(
        "extend-prefix", "root every prefix of a formula list and check consistency");
    std::string ep_seq, ep_xi;
    std::vector<std::string> ep_formulas;
    int ep_t = 1;
    std::string ep_tol = "1/20";
    ConvergenceParams ep_params;
    eprefix->add_option("--seq", ep_seq, "sequence file or directory")->required();
    eprefix->add_option("--xi", ep_xi, "arity-1 candidate formula")->required();
    eprefix->add_option("--formula", ep_formulas, "rooted formula (repeatable)")->required();
    eprefix->add_option("--prefix", ep_t, "number of prefixes to root")->required();
    eprefix->add_option("--tol", ep_tol, "tail-mean consistency tolerance (rational)");
    eprefix->add_option("--theta", ep_params.theta, "convergence threshold");
    eprefix->add_option("--tail-fraction", ep_params.tail_fraction, "tail used as limit proxy");
    add_common(eprefix, common);
    eprefix->callback([&] {
        GraphSequence seq = load_sequence(ep_seq);
        std::vector<Formula> phis;
        for (const auto& text : ep_formulas) phis.push_back(parse_formula_arg(text, "--formula"));
        ExtendPrefixResult result =
            extend_prefix(seq, parse_formula_arg(ep_xi, "--xi"), phis, ep_t, ep_params,
                          rational_from_string(ep_tol), Rational(0), Rational(0), 10000,
                          common.limits);
        common.out.write_json(extend_prefix_to_json(result));
    });

    // ---- gen-bipartite ----
    auto* gen =
        app.add_subcommand("gen-bipartite", "random bipartite graph with parts n^2 and n");
    int gen_n = 2;
    double gen_p = 0.5;
    std::uint64_t gen_seed = 0;
    gen->add_option("--n", gen_n, "size parameter (parts n^2 and n)")->required();
    gen->add_option("--p", gen_p, "edge probability")->required();
    gen->add_option("--seed", gen_seed, "RNG seed")->required();
    add_common(gen, common);
    gen->callback([&] {
        Graph g = gen_bipartite_random(gen_n, gen_p, gen_seed);
        common.out.write(graph_to_json(g).dump(2) + "\n");
    });

    // ---- interlace ----
    auto* inter = app.add_subcommand("interlace", "alternate two graph sequences");
    std::string in_seq1, in_seq2;
    inter->add_option("--seq1", in_seq1, "first sequence (odd positions)")->required();
    inter->add_option("--seq2", in_seq2, "second sequence (even positions)")->required();
    add_common(inter, common);
    inter->callback([&] {
        GraphSequence h = interlace(load_sequence(in_seq1), load_sequence(in_seq2));
        common.out.write(sequence_to_json(h).dump(2) + "\n");
    });

    // ---- check-extension ----
    auto* ext = app.add_subcommand("check-extension",
                                   "bipartite k-extension property with failing witness");
    std::string ext_graph;
    int ext_k = 1;
    ext->add_option("--graph", ext_graph, "bipartite-marked graph file")->required();
    ext->add_option("--k", ext_k, "extension level")->required();
    add_common(ext, common);
    ext->callback([&] {
        LoadedGraph lg = load_graph(ext_graph);
        ExtensionCheck check = check_bipartite_extension(lg.graph, ext_k);
        ordered_json j = extension_check_json(check);
        j["k"] = ext_k;
        common.out.write_json(j);
    });

    // ---- counterexample ----
    auto* cex = app.add_subcommand("counterexample",
                                   "interlaced random bipartite pipeline with per-root values");
    CounterexampleParams cex_params;
    std::string cex_range = "4..12", cex_csv;
    std::optional<double> cex_eps;
    cex->add_option("--p", cex_params.p, "odd-index edge probability")->required();
    cex->add_option("--q", cex_params.q, "even-index edge probability")->required();
    cex->add_option("--n", cex_range, "size range lo..hi");
    cex->add_option("--seed", cex_params.seed, "RNG seed")->required();
    cex->add_option("--part", cex_params.root_part, "candidate-root part (A or B)")
        ->check(CLI::IsMember({"A", "B"}));
    cex->add_option("--epsilon", cex_eps, "gap threshold, default (q-p)/3");
    cex->add_option("--csv", cex_csv, "also write the per-(index,root) rows to this CSV file");
    add_common(cex, common);
    cex->callback([&] {
        auto [lo, hi] = parse_range(cex_range);
        cex_params.n_lo = lo;
        cex_params.n_hi = hi;
        cex_params.epsilon = cex_eps;
        OscillationReport report = run_counterexample(cex_params, common.limits);
        if (!cex_csv.empty()) OutputTarget{cex_csv}.write(oscillation_to_csv(report));
        common.out.write_json(oscillation_summary_json(report));
    });

    // ---- lattice-oracle ----
    auto* oracle = app.add_subcommand(
        "lattice-oracle", "cross-check <psi_{k,l}, G> against the lattice forward map");
    std::string or_graph, or_xi, or_phi;
    int or_kmax = 2, or_lmax = 2;
    double or_tol = 1e-6;
    oracle->add_option("--graph", or_graph, "graph file")->required();
    oracle->add_option("--xi", or_xi, "arity-1 candidate formula")->required();
    oracle->add_option("--phi", or_phi, "rooted formula")->required();
    oracle->add_option("--kmax", or_kmax, "max draws k");
    oracle->add_option("--lmax", or_lmax, "max intersection size l");
    oracle->add_option("--tol", or_tol, "round-trip tolerance");
    add_common(oracle, common);
    oracle->callback([&] {
        LoadedGraph lg = load_graph(or_graph);
        LatticeOracleResult result =
            run_lattice_oracle(lg.graph, parse_formula_arg(or_xi, "--xi"),
                               parse_formula_arg(or_phi, "--phi"), or_kmax, or_lmax, or_tol,
                               common.limits);
        common.out.write_json(lattice_oracle_json(result));
    });

    // ---- unlabel ----
    auto* unlabel =
        app.add_subcommand("unlabel", "replace part labels by triangle/pentagon gadgets");
    std::string ul_seq, ul_graphs_out;
    unlabel->add_option("--seq", ul_seq, "bipartite-marked sequence")->required();
    unlabel->add_option("--graphs-out", ul_graphs_out, "write the plain sequence to this file");
    add_common(unlabel, common);
    unlabel->callback([&] {
        UnlabelResult result = unlabel_with_gadgets(load_sequence(ul_seq));
        ordered_json j;
        j["xi_a"] = result.xi_a;
        j["xi_b"] = result.xi_b;
        if (!ul_graphs_out.empty()) {
            save_sequence(result.sequence, ul_graphs_out);
            j["graphs"] = ul_graphs_out;
        } else {
            j["graphs"] = sequence_to_json(result.sequence);
        }
        common.out.write_json(j);
    });

    app.require_subcommand(1);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"foconv - first-order structural convergence experiments on finite graphs"};
    app.set_config("--config", "", "read options from a config file");
    try {
        return run(app, argc, argv);
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
