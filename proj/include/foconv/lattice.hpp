#pragma once

// Probability measures on finite boolean lattices. Forward direction:
// filter measures mu(X^) and the event probabilities Pr[|S_1 cap .. cap
// S_k| >= l] for independent mu-draws, computed exactly by a superset zeta
// transform and Moebius inversion (a 2^{mk} brute-force oracle is kept for
// cross-checking). Backward direction: reconstruction of the level
// multisets A_l from those probabilities by downward induction, gathering
// inclusion-exclusion with cover counts C(j,l,r) and recovering each level
// from its power sums via Newton's identities. Everything is exact
// rational arithmetic except the final polynomial root extraction.

#include <foconv/rational.hpp>

#include <nlohmann/json.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace foconv {

inline constexpr int kMaxGroundSize = 20;

// ---------------------------------------------------------------------------
// SubsetMeasure

class SubsetMeasure {
public:
    // ground: element ids in strictly increasing order (bit i of a mask
    // refers to ground[i]); weights: one rational per mask, nonnegative,
    // summing to exactly 1.
    SubsetMeasure(std::vector<int> ground, std::vector<Rational> weights)
        : ground_(std::move(ground)), weights_(std::move(weights)) {
        int m = static_cast<int>(ground_.size());
        if (m > kMaxGroundSize)
            throw std::invalid_argument("subset measure: ground set larger than " +
                                        std::to_string(kMaxGroundSize));
        for (int i = 1; i < m; ++i)
            if (ground_[i - 1] >= ground_[i])
                throw std::invalid_argument("subset measure: ground ids must be strictly increasing");
        if (weights_.size() != (std::size_t{1} << m))
            throw std::invalid_argument("subset measure: expected 2^m weights");
        Rational total = 0;
        for (const auto& w : weights_) {
            if (w < 0) throw std::invalid_argument("subset measure: negative weight");
            total += w;
        }
        if (total != 1) throw std::invalid_argument("subset measure: weights must sum to 1");
    }

    int m() const { return static_cast<int>(ground_.size()); }
    std::uint32_t mask_count() const { return std::uint32_t{1} << m(); }
    const std::vector<int>& ground() const { return ground_; }
    const std::vector<Rational>& weights() const { return weights_; }
    const Rational& weight(std::uint32_t mask) const { return weights_[mask]; }

    std::uint32_t mask_of(const std::vector<int>& elements) const {
        std::uint32_t mask = 0;
        for (int e : elements) {
            auto it = std::lower_bound(ground_.begin(), ground_.end(), e);
            if (it == ground_.end() || *it != e)
                throw std::invalid_argument("subset measure: element " + std::to_string(e) +
                                            " not in ground set");
            mask |= std::uint32_t{1} << (it - ground_.begin());
        }
        return mask;
    }

    std::vector<int> elements_of(std::uint32_t mask) const {
        std::vector<int> out;
        for (int i = 0; i < m(); ++i)
            if (mask >> i & 1u) out.push_back(ground_[i]);
        return out;
    }

private:
    std::vector<int> ground_;
    std::vector<Rational> weights_;
};

// mu(X^) = sum of weights over supersets of X, by direct summation.
inline Rational filter_measure(const SubsetMeasure& mu, std::uint32_t mask) {
    if (mask >= mu.mask_count()) throw std::invalid_argument("filter_measure: subset outside ground set");
    Rational total = 0;
    std::uint32_t full = mu.mask_count() - 1;
    std::uint32_t free = full & ~mask;
    // iterate supersets of mask: mask | (submask of free)
    std::uint32_t sub = free;
    while (true) {
        total += mu.weight(mask | sub);
        if (sub == 0) break;
        sub = (sub - 1) & free;
    }
    return total;
}

struct FilterTable {
    int m = 0;
    std::vector<Rational> up;   // up[mask] = mu(mask^)
};

// All filter measures at once via the superset zeta transform.
inline FilterTable filter_table(const SubsetMeasure& mu) {
    FilterTable ft{mu.m(), mu.weights()};
    std::uint32_t count = mu.mask_count();
    for (int d = 0; d < ft.m; ++d)
        for (std::uint32_t s = 0; s < count; ++s)
            if (!(s >> d & 1u)) ft.up[s] += ft.up[s | (std::uint32_t{1} << d)];
    return ft;
}

namespace detail {

// in place: g[Z] <- sum over supersets W of Z of (-1)^{|W\Z|} g[W]
inline void superset_mobius(std::vector<Rational>& g, int m) {
    std::uint32_t count = std::uint32_t{1} << m;
    for (int d = 0; d < m; ++d)
        for (std::uint32_t s = 0; s < count; ++s)
            if (!(s >> d & 1u)) g[s] -= g[s | (std::uint32_t{1} << d)];
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Forward event probabilities

// Pr over k independent mu-draws that their intersection has >= l elements.
inline Rational forward_F(const SubsetMeasure& mu, int l, int k) {
    if (l < 0 || l > mu.m()) throw std::invalid_argument("forward_F: l out of range");
    if (k < 1) throw std::invalid_argument("forward_F: k must be >= 1");
    if (l == 0) return 1;
    FilterTable ft = filter_table(mu);
    std::vector<Rational> powk(ft.up.size());
    for (std::size_t s = 0; s < powk.size(); ++s)
        powk[s] = rational_pow(ft.up[s], static_cast<unsigned>(k));
    detail::superset_mobius(powk, mu.m());   // now Pr[intersection == Z]
    Rational total = 0;
    for (std::uint32_t z = 0; z < mu.mask_count(); ++z)
        if (std::popcount(z) >= l) total += powk[z];
    return total;
}

// Direct O(2^{mk}) enumeration over all k-tuples of subsets.
inline Rational forward_F_bruteforce(const SubsetMeasure& mu, int l, int k) {
    if (l < 0 || l > mu.m()) throw std::invalid_argument("forward_F_bruteforce: l out of range");
    if (k < 1) throw std::invalid_argument("forward_F_bruteforce: k must be >= 1");
    if (mu.m() * k > 24) throw std::invalid_argument("forward_F_bruteforce: 2^{mk} too large");
    std::uint32_t count = mu.mask_count();
    std::vector<std::uint32_t> draw(k, 0);
    Rational total = 0;
    while (true) {
        std::uint32_t inter = count - 1;
        Rational prob = 1;
        for (int i = 0; i < k; ++i) {
            inter &= draw[i];
            prob *= mu.weight(draw[i]);
        }
        if (std::popcount(inter) >= l) total += prob;
        int pos = k - 1;
        while (pos >= 0 && ++draw[pos] == count) draw[pos--] = 0;
        if (pos < 0) break;
    }
    return total;
}

// P[l][k-1] = Pr[F_l^k] for l in [m]_0 and k in [binom(m,l)].
struct FTable {
    int m = 0;
    std::vector<std::vector<Rational>> P;

    std::size_t level_size(int l) const { return P[l].size(); }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["m"] = m;
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : P) {
            auto cells = nlohmann::ordered_json::array();
            for (const auto& q : row) cells.push_back(rational_to_string(q));
            rows.push_back(std::move(cells));
        }
        j["P"] = std::move(rows);
        return j;
    }

    static FTable from_json(const nlohmann::json& j) {
        FTable out;
        out.m = j.at("m").get<int>();
        for (const auto& row : j.at("P")) {
            std::vector<Rational> cells;
            for (const auto& cell : row) {
                if (cell.is_string()) cells.push_back(rational_from_string(cell.get<std::string>()));
                else if (cell.is_number_integer()) cells.push_back(Rational(cell.get<long long>()));
                else cells.push_back(rational_from_double(cell.get<double>()));
            }
            out.P.push_back(std::move(cells));
        }
        if (out.P.size() != static_cast<std::size_t>(out.m) + 1)
            throw std::invalid_argument("ftable json: expected m+1 rows");
        return out;
    }
};

// Full table with exactly the cells reconstruction needs.
inline FTable forward_table(const SubsetMeasure& mu) {
    int m = mu.m();
    FTable out;
    out.m = m;
    out.P.assign(m + 1, {});
    unsigned kmax = 1;
    for (int l = 0; l <= m; ++l)
        kmax = std::max(kmax, static_cast<unsigned>(binomial_u64(m, l)));

    FilterTable ft = filter_table(mu);
    std::vector<Rational> powk(ft.up.size(), Rational(1));
    out.P[0].assign(1, Rational(1));
    for (unsigned k = 1; k <= kmax; ++k) {
        for (std::size_t s = 0; s < powk.size(); ++s) powk[s] *= ft.up[s];
        std::vector<Rational> dist = powk;
        detail::superset_mobius(dist, m);
        // bucket intersection sizes, then cumulative tails
        std::vector<Rational> bucket(m + 1, Rational(0));
        for (std::uint32_t z = 0; z < mu.mask_count(); ++z) bucket[std::popcount(z)] += dist[z];
        Rational tail = 0;
        std::vector<Rational> tails(m + 1);
        for (int c = m; c >= 0; --c) {
            tail += bucket[c];
            tails[c] = tail;
        }
        for (int l = 1; l <= m; ++l)
            if (k <= binomial_u64(m, l)) out.P[l].push_back(tails[l]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cover counts

// Number of ways to cover [r] by j distinct subsets of size l, via
// inclusion-exclusion over the union's support.
inline BigInt cover_count(int j, int l, int r) {
    if (r < 1 || l < 1 || l > r) throw std::invalid_argument("cover_count: need 1 <= l <= r");
    BigInt families = binomial(BigInt(r), static_cast<unsigned>(l));
    if (j < 1 || BigInt(j) > families)
        throw std::invalid_argument("cover_count: need 1 <= j <= binom(r,l)");
    BigInt total = 0;
    for (int s = l; s <= r; ++s) {
        BigInt subsets = binomial(BigInt(s), static_cast<unsigned>(l));
        BigInt term = binomial(BigInt(r), static_cast<unsigned>(s)) *
                      binomial(subsets, static_cast<unsigned>(j));
        if ((r - s) % 2 == 0) total += term;
        else total -= term;
    }
    return total;
}

// D(l,r) = sum_j (-1)^{j-1} C(j,l,r)
inline BigInt d_coefficient(int l, int r) {
    if (r < 1 || l < 1 || l > r) throw std::invalid_argument("d_coefficient: need 1 <= l <= r");
    BigInt total = 0;
    BigInt families = binomial(BigInt(r), static_cast<unsigned>(l));
    for (BigInt j = 1; j <= families; ++j) {
        BigInt c = cover_count(j.convert_to<int>(), l, r);
        if ((j - 1) % 2 == 0) total += c;
        else total -= c;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Newton's identities and root recovery

// e_1..e_n from power sums z_1..z_n: k*e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} z_i
inline std::vector<Rational> power_sums_to_elementary(const std::vector<Rational>& z) {
    std::size_t n = z.size();
    if (n == 0) throw std::invalid_argument("power_sums_to_elementary: empty input");
    std::vector<Rational> e(n + 1);
    e[0] = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        Rational acc = 0;
        for (std::size_t i = 1; i <= k; ++i) {
            Rational term = e[k - i] * z[i - 1];
            if (i % 2 == 1) acc += term;
            else acc -= term;
        }
        e[k] = acc / Rational(static_cast<long>(k));
    }
    return std::vector<Rational>(e.begin() + 1, e.end());
}

// z_1..z_K of the degree-t monic polynomial with elementary symmetric
// coefficients e_1..e_t; exact, valid for K beyond t:
// z_k = (-1)^{k-1} k e_k [k<=t] + sum_{j=1}^{min(k-1,t)} (-1)^{j-1} e_j z_{k-j}
inline std::vector<Rational> elementary_to_power_sums(const std::vector<Rational>& e, int K) {
    std::size_t t = e.size();
    std::vector<Rational> z(static_cast<std::size_t>(K) + 1);
    for (std::size_t k = 1; k <= static_cast<std::size_t>(K); ++k) {
        Rational acc = 0;
        if (k <= t) {
            acc = Rational(static_cast<long>(k)) * e[k - 1];
            if (k % 2 == 0) acc = -acc;
        }
        for (std::size_t j = 1; j < k && j <= t; ++j) {
            Rational term = e[j - 1] * z[k - j];
            if (j % 2 == 1) acc += term;
            else acc -= term;
        }
        z[k] = acc;
    }
    return std::vector<Rational>(z.begin() + 1, z.end());
}

namespace detail {

// dense univariate polynomials over the rationals, coefficients low-to-high
using Poly = std::vector<Rational>;

inline void poly_trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int poly_degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Poly poly_derivative(const Poly& p) {
    Poly out;
    for (std::size_t i = 1; i < p.size(); ++i)
        out.push_back(p[i] * Rational(static_cast<long>(i)));
    poly_trim(out);
    return out;
}

inline Poly poly_monic(Poly p) {
    poly_trim(p);
    if (p.empty()) return p;
    Rational lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

// exact division remainder over a field
inline Poly poly_mod(Poly a, const Poly& b) {
    poly_trim(a);
    while (poly_degree(a) >= poly_degree(b)) {
        Rational factor = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= factor * b[i];
        a.pop_back();
        poly_trim(a);
        if (a.empty()) break;
    }
    return a;
}

inline Poly poly_div_exact(Poly a, const Poly& b) {
    poly_trim(a);
    Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    while (poly_degree(a) >= poly_degree(b)) {
        Rational factor = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        q[shift] = factor;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= factor * b[i];
        a.pop_back();
        poly_trim(a);
        if (a.empty()) break;
    }
    poly_trim(q);
    return q;
}

inline Poly poly_gcd(Poly a, Poly b) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b);
        a = std::move(b);
        b = poly_monic(std::move(r));
    }
    return poly_monic(std::move(a));
}

inline Poly poly_sub(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    poly_trim(a);
    return a;
}

// Yun's square-free decomposition of a monic polynomial:
// returns (h_i, i) with p = prod h_i^i, each h_i monic square-free.
inline std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p) {
    std::vector<std::pair<Poly, int>> out;
    Poly dp = poly_derivative(p);
    Poly u = poly_gcd(p, dp);
    if (poly_degree(u) <= 0) {
        out.emplace_back(poly_monic(p), 1);
        return out;
    }
    Poly v = poly_div_exact(p, u);
    Poly w = poly_div_exact(dp, u);
    int i = 1;
    while (poly_degree(v) > 0) {
        Poly h = poly_gcd(v, poly_sub(w, poly_derivative(v)));
        if (poly_degree(h) > 0) out.emplace_back(h, i);
        w = poly_div_exact(poly_sub(w, poly_derivative(v)), h);
        v = poly_div_exact(v, h);
        ++i;
    }
    return out;
}

using HighFloat = boost::multiprecision::cpp_bin_float_50;
using HighComplex = boost::multiprecision::cpp_complex_50;

// Numeric roots of an exact square-free polynomial. Double-precision
// companion-matrix eigenvalues seed an Aberth-Ehrlich iteration carried out
// in 50-digit arithmetic on the exact coefficients; monomial-basis
// conditioning eats ~10^deg, which double precision cannot absorb beyond
// degree ~7 while the wide format keeps dozens of digits to spare.
inline std::vector<std::complex<double>> squarefree_roots(const Poly& monic) {
    int deg = poly_degree(monic);
    if (deg == 1) return {std::complex<double>(rational_to_double(-monic[0]))};

    std::vector<double> c(deg);
    for (int i = 0; i < deg; ++i) c[i] = rational_to_double(monic[i]);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);

    std::vector<HighComplex> coeffs(deg + 1);
    for (int i = 0; i < deg; ++i)
        coeffs[i] = HighFloat(numerator(monic[i])) / HighFloat(denominator(monic[i]));
    coeffs[deg] = 1;
    auto eval_poly = [&](const HighComplex& x, HighComplex& deriv) {
        HighComplex value = coeffs[deg], d = 0;
        for (int i = deg - 1; i >= 0; --i) {
            d = d * x + value;
            value = value * x + coeffs[i];
        }
        deriv = d;
        return value;
    };

    std::vector<HighComplex> z(deg);
    for (int i = 0; i < deg; ++i) {
        std::complex<double> start = solver.eigenvalues()(i);
        // tiny index-dependent shift keeps coincident double estimates apart
        z[i] = HighComplex(HighFloat(start.real()) + HighFloat(1 + i) * HighFloat(1e-20),
                           HighFloat(start.imag()));
    }
    const HighFloat eps("1e-40");
    for (int iter = 0; iter < 100; ++iter) {
        bool moved = false;
        for (int i = 0; i < deg; ++i) {
            HighComplex deriv;
            HighComplex value = eval_poly(z[i], deriv);
            if (value == HighComplex(0)) continue;
            if (deriv == HighComplex(0)) {
                z[i] += HighComplex(eps, eps);
                moved = true;
                continue;
            }
            HighComplex newton = value / deriv;
            HighComplex repulsion = 0;
            for (int j = 0; j < deg; ++j) {
                if (j == i) continue;
                HighComplex diff = z[i] - z[j];
                if (diff == HighComplex(0)) diff = HighComplex(eps, 0);
                repulsion += HighComplex(1) / diff;
            }
            HighComplex step = newton / (HighComplex(1) - newton * repulsion);
            z[i] -= step;
            if (abs(step) > eps * std::max(HighFloat(1), abs(z[i]))) moved = true;
        }
        if (!moved) break;
    }

    std::vector<std::complex<double>> out;
    out.reserve(deg);
    for (const auto& root : z)
        out.emplace_back(root.real().convert_to<double>(), root.imag().convert_to<double>());
    return out;
}

}  // namespace detail

// Roots of x^t - e1 x^{t-1} + ... + (-1)^t e_t, repeated roots included.
// The polynomial is split into exact square-free factors first (Yun's
// algorithm over the rationals), so only simple roots reach the numeric
// eigenvalue step. Near-real roots are accepted when |imag| <= tol *
// max(1, |real|); real parts within tol of [0,1] are clamped to the
// interval, values genuinely outside are returned as-is.
inline std::vector<double> elementary_to_roots(const std::vector<Rational>& e, double tol = 1e-6) {
    int t = static_cast<int>(e.size());
    if (t == 0) return {};
    detail::Poly poly(t + 1);
    poly[t] = 1;
    for (int j = 1; j <= t; ++j) poly[t - j] = (j % 2 == 1) ? -e[j - 1] : e[j - 1];

    std::vector<double> roots;
    for (const auto& [factor, multiplicity] : detail::squarefree_decomposition(poly)) {
        for (auto lambda : detail::squarefree_roots(factor)) {
            double scale = std::max(1.0, std::abs(lambda.real()));
            if (std::abs(lambda.imag()) > tol * scale)
                throw std::runtime_error("root recovery: residual imaginary part " +
                                         double_to_string(std::abs(lambda.imag())) +
                                         " above tolerance (inconsistent power sums)");
            double x = lambda.real();
            if (x < 0.0 && x >= -tol) x = 0.0;
            if (x > 1.0 && x <= 1.0 + tol) x = 1.0;
            for (int copy = 0; copy < multiplicity; ++copy) roots.push_back(x);
        }
    }
    if (static_cast<int>(roots.size()) != t)
        throw std::runtime_error("root recovery: factor degrees do not add up");
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

// Multiset {a_1..a_n} from its power sums z_k = sum a_i^k, sorted descending.
inline std::vector<double> newton_power_sums_to_roots(const std::vector<double>& z,
                                                      double tol = 1e-6) {
    std::vector<Rational> exact;
    exact.reserve(z.size());
    for (double v : z) exact.push_back(rational_from_double(v));
    return elementary_to_roots(power_sums_to_elementary(exact), tol);
}

// ---------------------------------------------------------------------------
// Reconstruction (downward induction over levels)

struct LevelMultisets {
    int m = 0;
    std::vector<std::vector<double>> levels;   // levels[l] sorted descending

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["m"] = m;
        auto rows = nlohmann::ordered_json::array();
        for (const auto& level : levels) {
            auto cells = nlohmann::ordered_json::array();
            for (double v : level) cells.push_back(double_to_string(v));
            rows.push_back(std::move(cells));
        }
        j["A"] = std::move(rows);
        return j;
    }

    static LevelMultisets from_json(const nlohmann::json& j) {
        LevelMultisets out;
        out.m = j.at("m").get<int>();
        for (const auto& row : j.at("A")) {
            std::vector<double> level;
            for (const auto& cell : row)
                level.push_back(cell.is_string() ? std::stod(cell.get<std::string>())
                                                 : cell.get<double>());
            out.levels.push_back(std::move(level));
        }
        return out;
    }
};

// A_l = { mu(X^) : |X| = l } computed directly from the measure.
inline LevelMultisets level_multisets_direct(const SubsetMeasure& mu) {
    FilterTable ft = filter_table(mu);
    LevelMultisets out;
    out.m = mu.m();
    out.levels.assign(mu.m() + 1, {});
    for (std::uint32_t mask = 0; mask < mu.mask_count(); ++mask)
        out.levels[std::popcount(mask)].push_back(rational_to_double(ft.up[mask]));
    for (auto& level : out.levels) std::sort(level.begin(), level.end(), std::greater<>());
    return out;
}

// Recovers every A_l from the F-table: A_m = {P[m][1]}; below that, the
// l-th level power sums are isolated by subtracting the already-known
// higher-level contributions weighted by D(l,r), and the level is recovered
// through Newton's identities. Exact rationals throughout; floating point
// enters only at root extraction. Power sums of recovered levels are
// extended exactly from their elementary symmetric polynomials, so root
// errors do not propagate across levels.
inline LevelMultisets reconstruct(const FTable& table, double tol = 1e-6) {
    int m = table.m;
    if (m < 1) throw std::invalid_argument("reconstruct: need m >= 1");
    if (table.P.size() != static_cast<std::size_t>(m) + 1)
        throw std::invalid_argument("reconstruct: ftable has wrong number of levels");
    unsigned kmax = 1;
    for (int l = 0; l <= m; ++l)
        kmax = std::max(kmax, static_cast<unsigned>(binomial_u64(m, l)));
    for (int l = 1; l <= m; ++l)
        if (table.P[l].size() < binomial_u64(m, l))
            throw std::invalid_argument("reconstruct: level " + std::to_string(l) +
                                        " needs k up to binom(m,l)");

    LevelMultisets out;
    out.m = m;
    out.levels.assign(m + 1, {});
    // powsums[r][k-1] = sum over A_r of a^k, exact
    std::vector<std::vector<Rational>> powsums(m + 1);

    const Rational& top = table.P[m][0];
    out.levels[m] = {rational_to_double(top)};
    powsums[m].resize(kmax);
    Rational acc = 1;
    for (unsigned k = 1; k <= kmax; ++k) {
        acc *= top;
        powsums[m][k - 1] = acc;
    }

    for (int l = m - 1; l >= 1; --l) {
        auto t = binomial_u64(m, l);
        std::vector<Rational> s(t);
        for (unsigned k = 1; k <= t; ++k) {
            Rational value = table.P[l][k - 1];
            for (int r = l + 1; r <= m; ++r)
                value -= Rational(d_coefficient(l, r)) * powsums[r][k - 1];
            s[k - 1] = value;
        }
        std::vector<Rational> e = power_sums_to_elementary(s);
        try {
            out.levels[l] = elementary_to_roots(e, tol);
        } catch (const std::runtime_error& err) {
            throw std::runtime_error("reconstruct: level " + std::to_string(l) + ": " + err.what());
        }
        powsums[l] = elementary_to_power_sums(e, static_cast<int>(kmax));
    }
    out.levels[0] = {1.0};
    return out;
}

// ---------------------------------------------------------------------------
// Continuity diagnostic

struct PerturbationReport {
    double delta = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> max_displacement;   // per level, optimal-matching l-inf
    std::vector<double> amplification;      // displacement / delta (0 when delta == 0)
    int failed_trials = 0;                  // perturbed reconstructions that raised
};

inline PerturbationReport perturbation_report(const FTable& table, double delta,
                                              int trials = 20, std::uint64_t seed = 1,
                                              double tol = 1e-6) {
    LevelMultisets base = reconstruct(table, tol);
    PerturbationReport out;
    out.delta = delta;
    out.trials = trials;
    out.seed = seed;
    out.max_displacement.assign(table.m + 1, 0.0);
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        FTable noisy = table;
        for (int l = 1; l <= table.m; ++l)
            for (auto& cell : noisy.P[l]) {
                double shift = (2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0) * delta;
                cell += rational_from_double(shift);
            }
        try {
            LevelMultisets got = reconstruct(noisy, std::max(tol, 1e3 * delta));
            for (int l = 0; l <= table.m; ++l)
                for (std::size_t i = 0; i < base.levels[l].size(); ++i)
                    out.max_displacement[l] = std::max(
                        out.max_displacement[l],
                        std::abs(base.levels[l][i] - got.levels[l][i]));
        } catch (const std::runtime_error&) {
            ++out.failed_trials;
        }
    }
    out.amplification.resize(out.max_displacement.size());
    for (std::size_t l = 0; l < out.max_displacement.size(); ++l)
        out.amplification[l] = delta > 0 ? out.max_displacement[l] / delta : 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// SubsetMeasure JSON
// { "ground": [ids...], "weights": [{"set":[ids...],"p":"num/den"},...] }

inline nlohmann::ordered_json measure_to_json(const SubsetMeasure& mu) {
    nlohmann::ordered_json j;
    j["ground"] = mu.ground();
    auto arr = nlohmann::ordered_json::array();
    for (std::uint32_t mask = 0; mask < mu.mask_count(); ++mask) {
        if (mu.weight(mask) == 0) continue;
        nlohmann::ordered_json entry;
        entry["set"] = mu.elements_of(mask);
        entry["p"] = rational_to_string(mu.weight(mask));
        arr.push_back(std::move(entry));
    }
    j["weights"] = std::move(arr);
    return j;
}

inline SubsetMeasure measure_from_json(const nlohmann::json& j) {
    std::vector<int> ground = j.at("ground").get<std::vector<int>>();
    if (ground.size() > kMaxGroundSize)
        throw std::invalid_argument("measure json: ground set too large");
    std::vector<Rational> weights(std::size_t{1} << ground.size(), Rational(0));
    // build via a scratch measure-free mask computation
    auto mask_of = [&](const std::vector<int>& elements) {
        std::uint32_t mask = 0;
        for (int e : elements) {
            auto it = std::lower_bound(ground.begin(), ground.end(), e);
            if (it == ground.end() || *it != e)
                throw std::invalid_argument("measure json: element not in ground set");
            mask |= std::uint32_t{1} << (it - ground.begin());
        }
        return mask;
    };
    for (const auto& entry : j.at("weights")) {
        std::uint32_t mask = mask_of(entry.at("set").get<std::vector<int>>());
        const auto& p = entry.at("p");
        weights[mask] = p.is_string() ? rational_from_string(p.get<std::string>())
                                      : rational_from_double(p.get<double>());
    }
    return SubsetMeasure(std::move(ground), std::move(weights));
}

}  // namespace foconv
