#pragma once

// Tarski semantics for formulas on finite (rooted) graphs. Two routes:
// satisfies() is plain structural recursion over one assignment; the
// counting operations (solution_count, stone_pairing, definable_set,
// pushforward) run a bottom-up table engine that materializes, per
// subformula, the truth table over assignments of its live variables, so
// the cost is O(n^w) with w the widest subformula rather than a full
// recursive evaluation per tuple. All probabilities are exact rationals.

#include <foconv/formula.hpp>
#include <foconv/graph.hpp>
#include <foconv/lattice.hpp>
#include <foconv/rational.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace foconv {

struct EvalLimits {
    std::uint64_t max_table_entries = std::uint64_t{1} << 26;
};

using Assignment = std::map<std::string, Vertex>;

// ---------------------------------------------------------------------------
// Recursive reference semantics

namespace detail {

inline bool satisfies_rec(const Graph& g, std::optional<Vertex> root, const FormulaNode& n,
                          Assignment& env) {
    auto term_vertex = [&](const Term& t) -> Vertex {
        if (t.is_root()) {
            if (!root) throw std::invalid_argument("formula uses the root constant on an unrooted graph");
            return *root;
        }
        auto it = env.find(t.name);
        if (it == env.end())
            throw std::invalid_argument("no assignment for free variable '" + t.name + "'");
        return it->second;
    };
    switch (n.kind) {
        case NodeKind::Edge: {
            Vertex u = term_vertex(n.lhs), v = term_vertex(n.rhs);
            return u != v && g.adjacent(u, v);
        }
        case NodeKind::Equal:
            return term_vertex(n.lhs) == term_vertex(n.rhs);
        case NodeKind::Label:
            return g.is_labeled(n.symbol, term_vertex(n.lhs));
        case NodeKind::Not:
            return !satisfies_rec(g, root, *n.left, env);
        case NodeKind::And:
            return satisfies_rec(g, root, *n.left, env) && satisfies_rec(g, root, *n.right, env);
        case NodeKind::Or:
            return satisfies_rec(g, root, *n.left, env) || satisfies_rec(g, root, *n.right, env);
        case NodeKind::Implies:
            return !satisfies_rec(g, root, *n.left, env) || satisfies_rec(g, root, *n.right, env);
        case NodeKind::Iff:
            return satisfies_rec(g, root, *n.left, env) == satisfies_rec(g, root, *n.right, env);
        case NodeKind::Exists:
        case NodeKind::Forall: {
            auto it = env.find(n.symbol);
            std::optional<Vertex> saved;
            if (it != env.end()) saved = it->second;
            bool universal = n.kind == NodeKind::Forall;
            bool result = universal;
            for (Vertex v = 0; v < g.n(); ++v) {
                env[n.symbol] = v;
                bool inner = satisfies_rec(g, root, *n.left, env);
                if (universal ? !inner : inner) {
                    result = !universal;
                    break;
                }
            }
            if (saved) env[n.symbol] = *saved;
            else env.erase(n.symbol);
            return result;
        }
    }
    throw std::logic_error("satisfies: unreachable");
}

}  // namespace detail

inline bool satisfies(const Graph& g, const Formula& phi, const Assignment& assignment) {
    if (phi.uses_root())
        throw std::invalid_argument("formula uses the root constant on an unrooted graph");
    for (const auto& v : phi.free_vars()) {
        auto it = assignment.find(v);
        if (it == assignment.end())
            throw std::invalid_argument("no assignment for free variable '" + v + "'");
        g.check_vertex(it->second);
    }
    Assignment env = assignment;
    return detail::satisfies_rec(g, {}, phi.node(), env);
}

inline bool satisfies(const RootedGraph& g, const Formula& phi, const Assignment& assignment) {
    for (const auto& v : phi.free_vars()) {
        auto it = assignment.find(v);
        if (it == assignment.end())
            throw std::invalid_argument("no assignment for free variable '" + v + "'");
        g.graph.check_vertex(it->second);
    }
    Assignment env = assignment;
    return detail::satisfies_rec(g.graph, g.root, phi.node(), env);
}

// ---------------------------------------------------------------------------
// Table engine

namespace detail {

struct Table {
    std::vector<std::string> vars;
    std::vector<char> bits;   // n^vars.size() entries, row-major, vars[0] most significant
};

inline std::uint64_t table_size_checked(int n, std::size_t width, const EvalLimits& limits) {
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < width; ++i) {
        if (n != 0 && size > limits.max_table_entries / static_cast<std::uint64_t>(n))
            throw std::runtime_error("enumeration cap exceeded: table of width " +
                                     std::to_string(width) + " over " + std::to_string(n) +
                                     " vertices");
        size *= static_cast<std::uint64_t>(n);
    }
    if (size > limits.max_table_entries)
        throw std::runtime_error("enumeration cap exceeded");
    return size;
}

// broadcast src to a superset variable list
inline Table broadcast(const Table& src, std::vector<std::string> tvars, int n,
                       const EvalLimits& limits) {
    if (src.vars == tvars) return src;
    Table out;
    out.vars = std::move(tvars);
    std::uint64_t total = table_size_checked(n, out.vars.size(), limits);
    out.bits.assign(total, 0);
    // weight of each target digit in the source index (0 when absent)
    std::vector<std::uint64_t> weight(out.vars.size(), 0);
    for (std::size_t q = 0; q < src.vars.size(); ++q) {
        std::uint64_t stride = 1;
        for (std::size_t r = q + 1; r < src.vars.size(); ++r) stride *= static_cast<std::uint64_t>(n);
        auto it = std::find(out.vars.begin(), out.vars.end(), src.vars[q]);
        if (it == out.vars.end()) throw std::logic_error("broadcast: source var missing from target");
        weight[it - out.vars.begin()] = stride;
    }
    std::vector<std::uint64_t> digits(out.vars.size(), 0);
    std::uint64_t src_idx = 0;
    for (std::uint64_t out_idx = 0; out_idx < total; ++out_idx) {
        out.bits[out_idx] = src.bits[src_idx];
        for (std::size_t t = out.vars.size(); t-- > 0;) {
            ++digits[t];
            src_idx += weight[t];
            if (digits[t] < static_cast<std::uint64_t>(n)) break;
            digits[t] = 0;
            src_idx -= weight[t] * static_cast<std::uint64_t>(n);
        }
    }
    return out;
}

inline std::vector<std::string> merge_vars(const std::vector<std::string>& a,
                                           const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    for (const auto& v : b)
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    return out;
}

struct TableContext {
    const Graph& g;
    std::optional<Vertex> root;
    EvalLimits limits;

    Vertex root_vertex() const {
        if (!root) throw std::invalid_argument("formula uses the root constant on an unrooted graph");
        return *root;
    }
};

inline Table build_table(const TableContext& ctx, const FormulaNode& node) {
    const int n = ctx.g.n();
    auto atom_table = [&](const Term& a, const Term& b, auto&& pred) {
        Table t;
        if (a.is_root() && b.is_root()) {
            Vertex r = ctx.root_vertex();
            t.bits.assign(1, pred(r, r) ? 1 : 0);
        } else if (a.is_root() || b.is_root()) {
            const Term& var = a.is_root() ? b : a;
            Vertex r = ctx.root_vertex();
            t.vars = {var.name};
            t.bits.resize(n);
            for (Vertex v = 0; v < n; ++v)
                t.bits[v] = (a.is_root() ? pred(r, v) : pred(v, r)) ? 1 : 0;
        } else if (a.name == b.name) {
            t.vars = {a.name};
            t.bits.resize(n);
            for (Vertex v = 0; v < n; ++v) t.bits[v] = pred(v, v) ? 1 : 0;
        } else {
            t.vars = {a.name, b.name};
            table_size_checked(n, 2, ctx.limits);
            t.bits.resize(static_cast<std::size_t>(n) * n);
            for (Vertex u = 0; u < n; ++u)
                for (Vertex v = 0; v < n; ++v)
                    t.bits[static_cast<std::size_t>(u) * n + v] = pred(u, v) ? 1 : 0;
        }
        return t;
    };

    switch (node.kind) {
        case NodeKind::Edge:
            return atom_table(node.lhs, node.rhs,
                              [&](Vertex u, Vertex v) { return u != v && ctx.g.adjacent(u, v); });
        case NodeKind::Equal:
            return atom_table(node.lhs, node.rhs, [](Vertex u, Vertex v) { return u == v; });
        case NodeKind::Label: {
            if (!ctx.g.has_label(node.symbol))
                throw std::invalid_argument("unknown label symbol: '" + node.symbol + "'");
            Table t;
            if (node.lhs.is_root()) {
                t.bits.assign(1, ctx.g.is_labeled(node.symbol, ctx.root_vertex()) ? 1 : 0);
            } else {
                t.vars = {node.lhs.name};
                t.bits.resize(n);
                for (Vertex v = 0; v < n; ++v)
                    t.bits[v] = ctx.g.is_labeled(node.symbol, v) ? 1 : 0;
            }
            return t;
        }
        case NodeKind::Not: {
            Table t = build_table(ctx, *node.left);
            for (auto& b : t.bits) b = !b;
            return t;
        }
        case NodeKind::And:
        case NodeKind::Or:
        case NodeKind::Implies:
        case NodeKind::Iff: {
            Table lhs = build_table(ctx, *node.left);
            Table rhs = build_table(ctx, *node.right);
            std::vector<std::string> tvars = merge_vars(lhs.vars, rhs.vars);
            Table a = broadcast(lhs, tvars, n, ctx.limits);
            Table b = broadcast(rhs, tvars, n, ctx.limits);
            for (std::size_t i = 0; i < a.bits.size(); ++i) {
                switch (node.kind) {
                    case NodeKind::And: a.bits[i] = a.bits[i] && b.bits[i]; break;
                    case NodeKind::Or: a.bits[i] = a.bits[i] || b.bits[i]; break;
                    case NodeKind::Implies: a.bits[i] = !a.bits[i] || b.bits[i]; break;
                    default: a.bits[i] = a.bits[i] == b.bits[i]; break;
                }
            }
            return a;
        }
        case NodeKind::Exists:
        case NodeKind::Forall: {
            Table t = build_table(ctx, *node.left);
            auto it = std::find(t.vars.begin(), t.vars.end(), node.symbol);
            if (it == t.vars.end()) return t;   // vacuous quantifier on a nonempty graph
            bool universal = node.kind == NodeKind::Forall;
            std::size_t axis = static_cast<std::size_t>(it - t.vars.begin());
            std::uint64_t suffix = 1;
            for (std::size_t r = axis + 1; r < t.vars.size(); ++r) suffix *= static_cast<std::uint64_t>(n);
            std::uint64_t prefix = t.bits.size() / (suffix * static_cast<std::uint64_t>(n));
            Table out;
            out.vars = t.vars;
            out.vars.erase(out.vars.begin() + axis);
            out.bits.assign(prefix * suffix, universal ? 1 : 0);
            for (std::uint64_t p = 0; p < prefix; ++p) {
                for (Vertex v = 0; v < n; ++v) {
                    std::uint64_t in_base = (p * n + static_cast<std::uint64_t>(v)) * suffix;
                    std::uint64_t out_base = p * suffix;
                    for (std::uint64_t s = 0; s < suffix; ++s) {
                        if (universal)
                            out.bits[out_base + s] = out.bits[out_base + s] && t.bits[in_base + s];
                        else
                            out.bits[out_base + s] = out.bits[out_base + s] || t.bits[in_base + s];
                    }
                }
            }
            return out;
        }
    }
    throw std::logic_error("build_table: unreachable");
}

// sentence on the empty graph: quantifiers range over nothing
inline bool eval_sentence_empty(const FormulaNode& n) {
    switch (n.kind) {
        case NodeKind::Not: return !eval_sentence_empty(*n.left);
        case NodeKind::And: return eval_sentence_empty(*n.left) && eval_sentence_empty(*n.right);
        case NodeKind::Or: return eval_sentence_empty(*n.left) || eval_sentence_empty(*n.right);
        case NodeKind::Implies: return !eval_sentence_empty(*n.left) || eval_sentence_empty(*n.right);
        case NodeKind::Iff: return eval_sentence_empty(*n.left) == eval_sentence_empty(*n.right);
        case NodeKind::Exists: return false;
        case NodeKind::Forall: return true;
        default:
            throw std::logic_error("atom outside any quantifier in a root-free sentence");
    }
}

inline std::uint64_t count_bits(const Table& t) {
    std::uint64_t count = 0;
    for (char b : t.bits) count += b != 0;
    return count;
}

inline BigInt solution_count_impl(const Graph& g, std::optional<Vertex> root, const Formula& phi,
                                  const std::vector<std::string>& signature,
                                  const EvalLimits& limits) {
    for (const auto& v : phi.free_vars())
        if (std::find(signature.begin(), signature.end(), v) == signature.end())
            throw std::invalid_argument("signature is missing free variable '" + v + "'");
    if (phi.uses_root() && !root)
        throw std::invalid_argument("formula uses the root constant on an unrooted graph");
    if (g.n() == 0) {
        if (!signature.empty()) return 0;
        return eval_sentence_empty(phi.node()) ? 1 : 0;
    }
    TableContext ctx{g, root, limits};
    Table t = build_table(ctx, phi.node());
    BigInt count = count_bits(t);
    // vacuous signature positions multiply the count by n each
    std::size_t extra = signature.size() - t.vars.size();
    return count * int_pow(BigInt(g.n()), static_cast<unsigned>(extra));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Counting operations

struct StoneValue {
    BigInt count;    // |phi(G)|
    BigInt total;    // n^p
    Rational value;  // count / total
    int arity = 0;
};

inline BigInt solution_count(const Graph& g, const Formula& phi, const EvalLimits& limits = {}) {
    return detail::solution_count_impl(g, std::nullopt, phi, phi.free_vars(), limits);
}

inline BigInt solution_count(const RootedGraph& g, const Formula& phi, const EvalLimits& limits = {}) {
    return detail::solution_count_impl(g.graph, g.root, phi, phi.free_vars(), limits);
}

namespace detail {

inline StoneValue stone_pairing_impl(const Graph& g, std::optional<Vertex> root,
                                     const Formula& phi,
                                     const std::vector<std::string>& signature,
                                     const EvalLimits& limits) {
    StoneValue out;
    out.arity = static_cast<int>(signature.size());
    if (g.n() == 0 && !signature.empty())
        throw std::invalid_argument("stone pairing of a non-sentence on the empty graph");
    out.count = solution_count_impl(g, root, phi, signature, limits);
    out.total = int_pow(BigInt(g.n()), static_cast<unsigned>(signature.size()));
    out.value = Rational(out.count, out.total);
    return out;
}

}  // namespace detail

inline StoneValue stone_pairing(const Graph& g, const Formula& phi, const EvalLimits& limits = {}) {
    return detail::stone_pairing_impl(g, {}, phi, phi.free_vars(), limits);
}

inline StoneValue stone_pairing(const RootedGraph& g, const Formula& phi,
                                const EvalLimits& limits = {}) {
    return detail::stone_pairing_impl(g.graph, g.root, phi, phi.free_vars(), limits);
}

struct DefinableSet {
    int arity = 0;
    std::vector<std::vector<Vertex>> tuples;   // lexicographic in variable order
};

inline DefinableSet definable_set(const Graph& g, const Formula& phi, const EvalLimits& limits = {}) {
    if (phi.uses_root())
        throw std::invalid_argument("definable_set: formula uses the root constant on an unrooted graph");
    DefinableSet out;
    out.arity = phi.arity();
    if (g.n() == 0) return out;
    detail::TableContext ctx{g, {}, limits};
    detail::Table t = detail::build_table(ctx, phi.node());
    std::size_t width = t.vars.size();
    for (std::uint64_t idx = 0; idx < t.bits.size(); ++idx) {
        if (!t.bits[idx]) continue;
        std::vector<Vertex> tuple(width);
        std::uint64_t rest = idx;
        for (std::size_t q = width; q-- > 0;) {
            tuple[q] = static_cast<Vertex>(rest % g.n());
            rest /= g.n();
        }
        out.tuples.push_back(std::move(tuple));
    }
    return out;
}

// the arity-1 case used for candidate-root sets xi(G)
inline std::vector<Vertex> definable_vertices(const Graph& g, const Formula& xi,
                                              const EvalLimits& limits = {}) {
    if (xi.arity() != 1) throw std::invalid_argument("definable_vertices: formula must have arity 1");
    DefinableSet set = definable_set(g, xi, limits);
    std::vector<Vertex> out;
    out.reserve(set.tuples.size());
    for (const auto& tuple : set.tuples) out.push_back(tuple.front());
    return out;
}

// ---------------------------------------------------------------------------
// Pushforward of the uniform measure on V^p through the candidate-set map
// v |-> { u in xi(G) : G |= phi^-(v, u) }.

inline SubsetMeasure pushforward(const Graph& g, const Formula& xi, const Formula& phi,
                                 const EvalLimits& limits = {}) {
    if (phi.arity() == 0)
        throw std::invalid_argument("pushforward: phi must have at least one free variable");
    std::vector<Vertex> ground = definable_vertices(g, xi, limits);
    if (ground.empty()) throw std::runtime_error("pushforward: xi(G) is empty (no candidate roots)");
    if (static_cast<int>(ground.size()) > kMaxGroundSize)
        throw std::runtime_error("pushforward: xi(G) larger than the ground-set cap");

    DerootedFormula der = deroot(phi);
    detail::TableContext ctx{g, {}, limits};
    detail::Table natural = detail::build_table(ctx, der.formula.node());
    detail::Table full = detail::broadcast(natural, der.signature, g.n(), limits);

    int n = g.n();
    std::size_t t = ground.size();
    std::uint64_t tuples = full.bits.size() / static_cast<std::uint64_t>(n);
    std::vector<BigInt> counts(std::size_t{1} << t, BigInt(0));
    for (std::uint64_t v = 0; v < tuples; ++v) {
        std::uint64_t base = v * static_cast<std::uint64_t>(n);
        std::uint32_t mask = 0;
        for (std::size_t pos = 0; pos < t; ++pos)
            if (full.bits[base + static_cast<std::uint64_t>(ground[pos])])
                mask |= std::uint32_t{1} << pos;
        counts[mask] += 1;
    }
    BigInt total = int_pow(BigInt(n), static_cast<unsigned>(phi.arity()));
    std::vector<Rational> weights(counts.size());
    for (std::size_t mask = 0; mask < counts.size(); ++mask)
        weights[mask] = Rational(counts[mask], total);
    return SubsetMeasure(std::vector<int>(ground.begin(), ground.end()), std::move(weights));
}

// ---------------------------------------------------------------------------
// Cardinality profile of xi across a sequence

struct CardinalityProfile {
    bool constant = false;
    std::size_t cardinality = 0;           // meaningful when constant
    std::vector<std::size_t> profile;      // |xi(G_n)| per index
    bool within_bound = true;              // only when a bound was given
};

// True iff |xi(G_n)| is constant across the sequence. A positive bound adds
// a sanity cap on the cardinality.
inline CardinalityProfile is_algebraic_on_sequence(const GraphSequence& seq, const Formula& xi,
                                                   std::size_t bound = 0,
                                                   const EvalLimits& limits = {}) {
    if (xi.arity() != 1)
        throw std::invalid_argument("is_algebraic_on_sequence: xi must have arity 1");
    CardinalityProfile out;
    for (const auto& g : seq.graphs)
        out.profile.push_back(definable_vertices(g, xi, limits).size());
    out.constant = !out.profile.empty();
    for (std::size_t c : out.profile) {
        if (c != out.profile.front()) out.constant = false;
        if (bound > 0 && c > bound) out.within_bound = false;
    }
    if (out.constant) out.cardinality = out.profile.front();
    return out;
}

}  // namespace foconv
