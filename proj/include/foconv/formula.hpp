#pragma once

// First-order formulas over the language of graphs extended by unary
// labels and an optional root constant: immutable AST, concrete-syntax
// parser and printer, and the formula transformations used by the
// root-selection procedures (derooting, the existential block psi_{k,l},
// and disjoint power conjunctions).
//
// Grammar (EBNF):
//   formula := quant | iff
//   quant   := ("forall"|"exists") ident "." formula
//   iff     := impl ("<->" impl)*          ; left-associative
//   impl    := disj ("->" disj)*           ; right-associative
//   disj    := conj ("|" conj)*            ; left-associative
//   conj    := neg ("&" neg)*              ; left-associative
//   neg     := "!" neg | atom
//   atom    := "(" formula ")" | term "~" term | term "=" term
//            | term "!=" term | ident "(" term ")"
//   term    := "root" | ident
//   ident   := [a-zA-Z_][a-zA-Z0-9_]*
//
// "t1 != t2" desugars to !(t1 = t2).

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace foconv {

// ---------------------------------------------------------------------------
// Terms

enum class TermKind { Variable, Root };

struct Term {
    TermKind kind = TermKind::Variable;
    std::string name;   // nonempty for variables, empty for the root constant

    static bool valid_identifier(std::string_view s) {
        if (s.empty()) return false;
        if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
        for (char c : s)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
        return s != "root" && s != "forall" && s != "exists";
    }

    static Term variable(std::string n) {
        if (!valid_identifier(n))
            throw std::invalid_argument("invalid variable name: '" + n + "'");
        return Term{TermKind::Variable, std::move(n)};
    }

    static Term root() { return Term{TermKind::Root, {}}; }

    bool is_root() const { return kind == TermKind::Root; }

    std::string to_string() const { return is_root() ? "root" : name; }

    friend bool operator==(const Term& a, const Term& b) {
        return a.kind == b.kind && (a.kind == TermKind::Root || a.name == b.name);
    }
};

// ---------------------------------------------------------------------------
// AST

enum class NodeKind { Edge, Equal, Label, Not, And, Or, Implies, Iff, Exists, Forall };

struct FormulaNode;
using NodePtr = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
    NodeKind kind;
    Term lhs, rhs;                 // Edge/Equal operands; Label operand in lhs
    std::string symbol;            // label symbol, or the quantified variable
    NodePtr left, right;           // children (only left for Not and quantifiers)

    // caches filled at construction
    std::vector<std::string> free_vars;     // first-occurrence order
    std::set<std::string> quantified;       // variables bound anywhere below
    bool uses_root = false;
};

class Formula {
public:
    Formula() = default;   // empty handle; every factory yields a valid formula

    // -- atom factories ------------------------------------------------------
    static Formula edge(Term a, Term b) { return atom(NodeKind::Edge, std::move(a), std::move(b)); }
    static Formula equal(Term a, Term b) { return atom(NodeKind::Equal, std::move(a), std::move(b)); }

    static Formula label(std::string symbol, Term t) {
        if (!Term::valid_identifier(symbol))
            throw std::invalid_argument("invalid label symbol: '" + symbol + "'");
        auto n = std::make_shared<FormulaNode>();
        n->kind = NodeKind::Label;
        n->symbol = std::move(symbol);
        n->lhs = std::move(t);
        if (!n->lhs.is_root()) n->free_vars.push_back(n->lhs.name);
        n->uses_root = n->lhs.is_root();
        return Formula(std::move(n));
    }

    // -- connectives ---------------------------------------------------------
    static Formula negate(Formula f) {
        auto n = std::make_shared<FormulaNode>();
        n->kind = NodeKind::Not;
        n->left = f.node_;
        n->free_vars = f.node_->free_vars;
        n->quantified = f.node_->quantified;
        n->uses_root = f.node_->uses_root;
        return Formula(std::move(n));
    }

    static Formula conj(Formula a, Formula b) { return binary(NodeKind::And, std::move(a), std::move(b)); }
    static Formula disj(Formula a, Formula b) { return binary(NodeKind::Or, std::move(a), std::move(b)); }
    static Formula implies(Formula a, Formula b) { return binary(NodeKind::Implies, std::move(a), std::move(b)); }
    static Formula iff(Formula a, Formula b) { return binary(NodeKind::Iff, std::move(a), std::move(b)); }

    static Formula exists(std::string var, Formula body) { return quant(NodeKind::Exists, std::move(var), std::move(body)); }
    static Formula forall(std::string var, Formula body) { return quant(NodeKind::Forall, std::move(var), std::move(body)); }

    static Formula not_equal(Term a, Term b) { return negate(equal(std::move(a), std::move(b))); }

    // left-associative fold of a nonempty conjunct list
    static Formula conj_all(const std::vector<Formula>& fs) {
        if (fs.empty()) throw std::invalid_argument("conj_all: empty conjunction");
        Formula acc = fs.front();
        for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
        return acc;
    }

    // -- inspection ----------------------------------------------------------
    const FormulaNode& node() const { return *node_; }
    NodeKind kind() const { return node_->kind; }
    Formula left() const { return Formula(node_->left); }
    Formula right() const { return Formula(node_->right); }
    bool valid() const { return node_ != nullptr; }

    const std::vector<std::string>& free_vars() const { return node_->free_vars; }
    int arity() const { return static_cast<int>(node_->free_vars.size()); }
    bool is_sentence() const { return node_->free_vars.empty(); }
    bool uses_root() const { return node_->uses_root; }
    const std::set<std::string>& quantified_vars() const { return node_->quantified; }

    std::string to_string() const { return print(*node_, 0); }

    friend bool operator==(const Formula& a, const Formula& b) {
        return structurally_equal(*a.node_, *b.node_);
    }
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

private:
    explicit Formula(NodePtr n) : node_(std::move(n)) {}

    static Formula atom(NodeKind kind, Term a, Term b) {
        auto n = std::make_shared<FormulaNode>();
        n->kind = kind;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        for (const Term* t : {&n->lhs, &n->rhs}) {
            if (t->is_root()) {
                n->uses_root = true;
            } else if (std::find(n->free_vars.begin(), n->free_vars.end(), t->name) == n->free_vars.end()) {
                n->free_vars.push_back(t->name);
            }
        }
        return Formula(std::move(n));
    }

    static Formula binary(NodeKind kind, Formula a, Formula b) {
        auto n = std::make_shared<FormulaNode>();
        n->kind = kind;
        n->left = a.node_;
        n->right = b.node_;
        n->free_vars = a.node_->free_vars;
        for (const auto& v : b.node_->free_vars)
            if (std::find(n->free_vars.begin(), n->free_vars.end(), v) == n->free_vars.end())
                n->free_vars.push_back(v);
        n->quantified = a.node_->quantified;
        n->quantified.insert(b.node_->quantified.begin(), b.node_->quantified.end());
        n->uses_root = a.node_->uses_root || b.node_->uses_root;
        return Formula(std::move(n));
    }

    static Formula quant(NodeKind kind, std::string var, Formula body) {
        if (!Term::valid_identifier(var))
            throw std::invalid_argument("invalid variable name: '" + var + "'");
        if (body.node_->quantified.count(var))
            throw std::invalid_argument("variable '" + var + "' is quantified twice on a path");
        auto n = std::make_shared<FormulaNode>();
        n->kind = kind;
        n->symbol = var;
        n->left = body.node_;
        for (const auto& v : body.node_->free_vars)
            if (v != var) n->free_vars.push_back(v);
        n->quantified = body.node_->quantified;
        n->quantified.insert(var);
        n->uses_root = body.node_->uses_root;
        return Formula(std::move(n));
    }

    static bool structurally_equal(const FormulaNode& a, const FormulaNode& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case NodeKind::Edge:
            case NodeKind::Equal:
                return a.lhs == b.lhs && a.rhs == b.rhs;
            case NodeKind::Label:
                return a.symbol == b.symbol && a.lhs == b.lhs;
            case NodeKind::Not:
                return structurally_equal(*a.left, *b.left);
            case NodeKind::Exists:
            case NodeKind::Forall:
                return a.symbol == b.symbol && structurally_equal(*a.left, *b.left);
            default:
                return structurally_equal(*a.left, *b.left) && structurally_equal(*a.right, *b.right);
        }
    }

    // precedence: quantifier 0 < iff 1 < impl 2 < or 3 < and 4 < not 5 < atom 6
    static int precedence(NodeKind k) {
        switch (k) {
            case NodeKind::Exists:
            case NodeKind::Forall: return 0;
            case NodeKind::Iff: return 1;
            case NodeKind::Implies: return 2;
            case NodeKind::Or: return 3;
            case NodeKind::And: return 4;
            case NodeKind::Not: return 5;
            default: return 6;
        }
    }

    static std::string print(const FormulaNode& n, int min_prec) {
        // "!(a = b)" prints through its sugar form
        if (n.kind == NodeKind::Not && n.left->kind == NodeKind::Equal)
            return n.left->lhs.to_string() + " != " + n.left->rhs.to_string();
        int prec = precedence(n.kind);
        std::string out;
        switch (n.kind) {
            case NodeKind::Edge:
                out = n.lhs.to_string() + " ~ " + n.rhs.to_string();
                break;
            case NodeKind::Equal:
                out = n.lhs.to_string() + " = " + n.rhs.to_string();
                break;
            case NodeKind::Label:
                out = n.symbol + "(" + n.lhs.to_string() + ")";
                break;
            case NodeKind::Not:
                out = "!" + print(*n.left, 5);
                break;
            case NodeKind::And:
                out = print(*n.left, 4) + " & " + print(*n.right, 5);
                break;
            case NodeKind::Or:
                out = print(*n.left, 3) + " | " + print(*n.right, 4);
                break;
            case NodeKind::Implies:
                out = print(*n.left, 3) + " -> " + print(*n.right, 2);
                break;
            case NodeKind::Iff:
                out = print(*n.left, 1) + " <-> " + print(*n.right, 2);
                break;
            case NodeKind::Exists:
                out = "exists " + n.symbol + ". " + print(*n.left, 0);
                break;
            case NodeKind::Forall:
                out = "forall " + n.symbol + ". " + print(*n.left, 0);
                break;
        }
        if (prec < min_prec) out = "(" + out + ")";
        return out;
    }

    NodePtr node_;
};

// ---------------------------------------------------------------------------
// Parser

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

namespace detail {

enum class TokKind { Ident, Root, Forall, Exists, LParen, RParen, Dot, Tilde, Eq, Neq, And, Or, Implies, Iff, Not, End };

struct Token {
    TokKind kind;
    std::string text;
    std::size_t pos;
};

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto peek = [&](std::size_t off = 0) -> char {
        return i + off < src.size() ? src[i + off] : '\0';
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            std::string word(src.substr(i, j - i));
            TokKind k = TokKind::Ident;
            if (word == "root") k = TokKind::Root;
            else if (word == "forall") k = TokKind::Forall;
            else if (word == "exists") k = TokKind::Exists;
            out.push_back({k, std::move(word), start});
            i = j;
            continue;
        }
        switch (c) {
            case '(': out.push_back({TokKind::LParen, "(", start}); ++i; break;
            case ')': out.push_back({TokKind::RParen, ")", start}); ++i; break;
            case '.': out.push_back({TokKind::Dot, ".", start}); ++i; break;
            case '~': out.push_back({TokKind::Tilde, "~", start}); ++i; break;
            case '=': out.push_back({TokKind::Eq, "=", start}); ++i; break;
            case '&': out.push_back({TokKind::And, "&", start}); ++i; break;
            case '|': out.push_back({TokKind::Or, "|", start}); ++i; break;
            case '!':
                if (peek(1) == '=') { out.push_back({TokKind::Neq, "!=", start}); i += 2; }
                else { out.push_back({TokKind::Not, "!", start}); ++i; }
                break;
            case '-':
                if (peek(1) == '>') { out.push_back({TokKind::Implies, "->", start}); i += 2; }
                else throw ParseError("unexpected character '-'", start);
                break;
            case '<':
                if (peek(1) == '-' && peek(2) == '>') { out.push_back({TokKind::Iff, "<->", start}); i += 3; }
                else throw ParseError("unexpected character '<'", start);
                break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }
    out.push_back({TokKind::End, "", src.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

    Formula parse() {
        Formula f = formula();
        expect(TokKind::End, "unexpected trailing input");
        return f;
    }

private:
    const Token& cur() const { return tokens_[pos_]; }
    void advance() { if (cur().kind != TokKind::End) ++pos_; }
    bool accept(TokKind k) {
        if (cur().kind == k) { advance(); return true; }
        return false;
    }
    void expect(TokKind k, const std::string& what) {
        if (!accept(k)) throw ParseError(what, cur().pos);
    }

    Formula formula() {
        if (cur().kind == TokKind::Forall || cur().kind == TokKind::Exists) {
            bool universal = cur().kind == TokKind::Forall;
            std::size_t at = cur().pos;
            advance();
            if (cur().kind != TokKind::Ident)
                throw ParseError("expected variable after quantifier", cur().pos);
            std::string var = cur().text;
            advance();
            expect(TokKind::Dot, "expected '.' after quantified variable");
            Formula body = formula();
            try {
                return universal ? Formula::forall(var, body) : Formula::exists(var, body);
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what(), at);
            }
        }
        return iff();
    }

    Formula iff() {
        Formula f = impl();
        while (accept(TokKind::Iff)) f = Formula::iff(f, impl());
        return f;
    }

    Formula impl() {
        std::vector<Formula> parts{disj()};
        while (accept(TokKind::Implies)) parts.push_back(disj());
        Formula f = parts.back();
        for (std::size_t i = parts.size() - 1; i-- > 0;) f = Formula::implies(parts[i], f);
        return f;
    }

    Formula disj() {
        Formula f = conj();
        while (accept(TokKind::Or)) f = Formula::disj(f, conj());
        return f;
    }

    Formula conj() {
        Formula f = neg();
        while (accept(TokKind::And)) f = Formula::conj(f, neg());
        return f;
    }

    Formula neg() {
        if (accept(TokKind::Not)) return Formula::negate(neg());
        return atom();
    }

    Formula atom() {
        if (accept(TokKind::LParen)) {
            Formula f = formula();
            expect(TokKind::RParen, "expected ')'");
            return f;
        }
        if (cur().kind == TokKind::Ident && tokens_[pos_ + 1].kind == TokKind::LParen) {
            std::string symbol = cur().text;
            advance();
            advance();   // '('
            Term t = term();
            expect(TokKind::RParen, "expected ')' after label argument");
            return Formula::label(symbol, t);
        }
        Term a = term();
        switch (cur().kind) {
            case TokKind::Tilde: advance(); return Formula::edge(a, term());
            case TokKind::Eq:    advance(); return Formula::equal(a, term());
            case TokKind::Neq:   advance(); return Formula::not_equal(a, term());
            default:
                throw ParseError("expected '~', '=' or '!=' after term", cur().pos);
        }
    }

    Term term() {
        if (accept(TokKind::Root)) return Term::root();
        if (cur().kind == TokKind::Ident) {
            Term t = Term::variable(cur().text);
            advance();
            return t;
        }
        throw ParseError("expected a term", cur().pos);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) {
    return detail::Parser(text).parse();
}

// ---------------------------------------------------------------------------
// Fresh names and capture-avoiding substitution

class FreshNameSupply {
public:
    FreshNameSupply() = default;

    void reserve(const std::string& name) { used_.insert(name); }
    bool is_used(const std::string& name) const { return used_.count(name) > 0; }

    // reserves all variable names occurring in f (free and bound)
    void reserve_all(const Formula& f) {
        for (const auto& v : f.free_vars()) used_.insert(v);
        for (const auto& v : f.quantified_vars()) used_.insert(v);
    }

    // first unused of base, base_1, base_2, ...; the returned name is reserved
    std::string fresh(const std::string& base) {
        if (!is_used(base)) {
            used_.insert(base);
            return base;
        }
        for (int i = 1;; ++i) {
            std::string candidate = base + "_" + std::to_string(i);
            if (!is_used(candidate)) {
                used_.insert(candidate);
                return candidate;
            }
        }
    }

private:
    std::set<std::string> used_;
};

namespace detail {

// Substitutes free variables (and optionally the root constant) by terms.
// Bound variables that collide with names reserved in the supply are
// alpha-renamed, so substitution never captures.
inline Formula substitute(const Formula& f,
                          std::map<std::string, Term> free_map,
                          const Term* root_replacement,
                          FreshNameSupply& supply) {
    const FormulaNode& n = f.node();
    auto subst_term = [&](const Term& t) -> Term {
        if (t.is_root()) return root_replacement ? *root_replacement : t;
        if (auto it = free_map.find(t.name); it != free_map.end()) return it->second;
        return t;
    };
    switch (n.kind) {
        case NodeKind::Edge:  return Formula::edge(subst_term(n.lhs), subst_term(n.rhs));
        case NodeKind::Equal: return Formula::equal(subst_term(n.lhs), subst_term(n.rhs));
        case NodeKind::Label: return Formula::label(n.symbol, subst_term(n.lhs));
        case NodeKind::Not:   return Formula::negate(substitute(f.left(), free_map, root_replacement, supply));
        case NodeKind::And:
            return Formula::conj(substitute(f.left(), free_map, root_replacement, supply),
                                 substitute(f.right(), free_map, root_replacement, supply));
        case NodeKind::Or:
            return Formula::disj(substitute(f.left(), free_map, root_replacement, supply),
                                 substitute(f.right(), free_map, root_replacement, supply));
        case NodeKind::Implies:
            return Formula::implies(substitute(f.left(), free_map, root_replacement, supply),
                                    substitute(f.right(), free_map, root_replacement, supply));
        case NodeKind::Iff:
            return Formula::iff(substitute(f.left(), free_map, root_replacement, supply),
                                substitute(f.right(), free_map, root_replacement, supply));
        case NodeKind::Exists:
        case NodeKind::Forall: {
            std::string var = n.symbol;
            free_map.erase(var);   // inner occurrences are bound
            if (supply.is_used(var)) {
                std::string renamed = supply.fresh(var);
                free_map[var] = Term::variable(renamed);
                var = renamed;
            }
            Formula body = substitute(f.left(), free_map, root_replacement, supply);
            return n.kind == NodeKind::Exists ? Formula::exists(var, body)
                                              : Formula::forall(var, body);
        }
    }
    throw std::logic_error("substitute: unreachable");
}

}  // namespace detail

// Renames every free variable to a fresh name drawn from the supply
// (bound variables are renamed only on collision). Semantics is preserved
// up to alpha-equivalence and the renaming of the free tuple.
inline Formula rename_fresh(const Formula& f, FreshNameSupply& supply) {
    std::map<std::string, Term> free_map;
    for (const auto& v : f.free_vars()) free_map[v] = Term::variable(supply.fresh(v));
    return detail::substitute(f, std::move(free_map), nullptr, supply);
}

// ---------------------------------------------------------------------------
// Derooting (phi -> phi^-)

// The root slot is always appended as the LAST signature position, whether
// or not the root constant occurred; the underlying formula's natural
// free-variable list may omit the slot (vacuous) or order it differently.
struct DerootedFormula {
    Formula formula;                      // root-free
    std::string root_var;                 // the fresh variable standing for the root
    std::vector<std::string> signature;   // original free vars, then root_var
    int original_arity = 0;               // p = |free vars of the input|
};

inline DerootedFormula deroot(const Formula& phi) {
    FreshNameSupply naming;
    naming.reserve_all(phi);
    std::string y = naming.fresh("y");
    Term replacement = Term::variable(y);
    // only the new slot name must be avoided by bound variables
    FreshNameSupply supply;
    supply.reserve(y);
    Formula body = detail::substitute(phi, {}, &replacement, supply);
    DerootedFormula out;
    out.formula = std::move(body);
    out.root_var = y;
    out.signature = phi.free_vars();
    out.signature.push_back(y);
    out.original_arity = phi.arity();
    return out;
}

// ---------------------------------------------------------------------------
// psi_{k,l}: exists y_1..y_l ( AND_i xi(y_i) AND_{i<j} y_i != y_j
//                              AND_{i<=k, j<=l} phi^-(xbar_i, y_j) )

inline Formula build_psi(const DerootedFormula& phi_minus, const Formula& xi, int k, int l) {
    if (k < 1) throw std::invalid_argument("build_psi: k must be positive");
    if (l < 1) throw std::invalid_argument("build_psi: l must be positive");
    if (xi.arity() != 1) throw std::invalid_argument("build_psi: xi must have arity 1");
    if (phi_minus.signature.size() != static_cast<std::size_t>(phi_minus.original_arity) + 1)
        throw std::invalid_argument("build_psi: malformed derooted formula signature");
    int p = phi_minus.original_arity;

    FreshNameSupply supply;
    std::vector<std::string> xs(static_cast<std::size_t>(k) * p);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = "x" + std::to_string(i + 1);
        supply.reserve(xs[i]);
    }
    std::vector<std::string> ys(l);
    for (int j = 0; j < l; ++j) {
        ys[j] = "y" + std::to_string(j + 1);
        supply.reserve(ys[j]);
    }

    const std::string& xi_var = xi.free_vars().front();
    std::vector<Formula> conjuncts;
    for (int j = 0; j < l; ++j)
        conjuncts.push_back(detail::substitute(xi, {{xi_var, Term::variable(ys[j])}}, nullptr, supply));
    for (int i = 0; i < l; ++i)
        for (int j = i + 1; j < l; ++j)
            conjuncts.push_back(Formula::not_equal(Term::variable(ys[i]), Term::variable(ys[j])));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < l; ++j) {
            std::map<std::string, Term> m;
            for (int a = 0; a < p; ++a)
                m[phi_minus.signature[a]] = Term::variable(xs[static_cast<std::size_t>(i) * p + a]);
            m[phi_minus.root_var] = Term::variable(ys[j]);
            conjuncts.push_back(detail::substitute(phi_minus.formula, std::move(m), nullptr, supply));
        }
    }

    Formula body = Formula::conj_all(conjuncts);
    for (int j = l; j-- > 0;) body = Formula::exists(ys[j], body);
    assert(body.free_vars() == xs);
    return body;
}

// ---------------------------------------------------------------------------
// Disjoint power conjunction: AND_i AND_{j=1}^{e_i} phi_i(xbar_{i,j})

inline Formula build_power_conj(const std::vector<Formula>& phis, const std::vector<int>& exponents) {
    if (phis.empty()) throw std::invalid_argument("build_power_conj: empty formula list");
    if (phis.size() != exponents.size())
        throw std::invalid_argument("build_power_conj: formula/exponent count mismatch");
    std::size_t total_vars = 0;
    for (std::size_t i = 0; i < phis.size(); ++i) {
        if (exponents[i] < 1) throw std::invalid_argument("build_power_conj: exponents must be positive");
        if (!phis[i].uses_root() && phis[i].arity() == 0)
            throw std::invalid_argument("build_power_conj: root-free sentence has no tuple to rename");
        total_vars += static_cast<std::size_t>(exponents[i]) * phis[i].arity();
    }

    FreshNameSupply supply;
    std::vector<std::string> xs(total_vars);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = "x" + std::to_string(i + 1);
        supply.reserve(xs[i]);
    }

    std::vector<Formula> conjuncts;
    std::size_t next = 0;
    for (std::size_t i = 0; i < phis.size(); ++i) {
        for (int j = 0; j < exponents[i]; ++j) {
            std::map<std::string, Term> m;
            for (const auto& v : phis[i].free_vars()) m[v] = Term::variable(xs[next++]);
            conjuncts.push_back(detail::substitute(phis[i], std::move(m), nullptr, supply));
        }
    }
    Formula out = Formula::conj_all(conjuncts);
    assert(out.free_vars() == xs);
    return out;
}

}  // namespace foconv
