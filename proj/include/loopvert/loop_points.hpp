#pragma once

#include <loopvert/nil_laurent.hpp>
#include <loopvert/polynomial.hpp>

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopvert {

/// Affine chart X = V(f_1..f_e) in variables x_1..x_d, y_1..y_e, with the
/// fiber variables y solved for along the projection to the x-coordinates.
/// The e x e Jacobian in the y-variables must be invertible wherever lifting
/// is requested; that is checked at runtime.
struct EtalePresentation {
    int d = 0;
    int e = 0;
    std::vector<QPolynomial> equations;  // each in d + e variables

    EtalePresentation() = default;
    EtalePresentation(int d_, int e_, std::vector<QPolynomial> eqs)
        : d(d_), e(e_), equations(std::move(eqs)) {
        for (const auto &f : equations)
            if (f.nvars() != d + e) throw std::invalid_argument("equation arity mismatch");
        if (static_cast<int>(equations.size()) != e)
            throw std::invalid_argument("need exactly one equation per fiber variable");
    }

    int nvars() const { return d + e; }
};

inline NilLaurent embed_rational(const RingDescriptor &desc, int prec, const Rational &c) {
    return NilLaurent::constant(desc, prec, RingElem::constant(desc, c));
}

/// Evaluates a polynomial on a tuple of series.
inline NilLaurent eval_on_series(const QPolynomial &f, const std::vector<NilLaurent> &vals) {
    if (vals.empty()) throw std::invalid_argument("empty evaluation tuple");
    const RingDescriptor &desc = vals[0].descriptor();
    int prec = vals[0].precision();
    for (const auto &v : vals) prec = std::min(prec, v.precision());
    return f.eval<NilLaurent>(vals, [&](const Rational &c) { return embed_rational(desc, prec, c); });
}

/// Membership test for the loop space of V(equations): every defining
/// polynomial must vanish modulo t^{prec+1} under substitution.
inline bool is_loop_point(const std::vector<NilLaurent> &series,
                          const std::vector<QPolynomial> &equations) {
    for (const auto &f : equations) {
        if (!series.empty() && f.nvars() != static_cast<int>(series.size()))
            throw std::invalid_argument("coordinate arity mismatch");
        if (!eval_on_series(f, series).is_zero()) return false;
    }
    return true;
}

inline bool is_loop_point(const std::vector<NilLaurent> &series, const EtalePresentation &pres) {
    if (static_cast<int>(series.size()) != pres.nvars())
        throw std::invalid_argument("coordinate arity mismatch");
    return is_loop_point(series, pres.equations);
}

namespace detail {

/// Inverse of a small matrix of nil-Laurent series via cofactor expansion.
inline std::vector<std::vector<NilLaurent>> invert_series_matrix(
    const std::vector<std::vector<NilLaurent>> &m) {
    int n = static_cast<int>(m.size());
    auto minor_det = [&](auto &&self, const std::vector<std::vector<NilLaurent>> &a) -> NilLaurent {
        int k = static_cast<int>(a.size());
        if (k == 1) return a[0][0];
        NilLaurent acc = a[0][0] - a[0][0];  // zero at the right precision
        for (int j = 0; j < k; ++j) {
            std::vector<std::vector<NilLaurent>> sub;
            for (int r = 1; r < k; ++r) {
                std::vector<NilLaurent> row;
                for (int c = 0; c < k; ++c)
                    if (c != j) row.push_back(a[r][c]);
                sub.push_back(std::move(row));
            }
            NilLaurent term = a[0][j] * self(self, sub);
            acc = (j % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    };
    NilLaurent det = minor_det(minor_det, m);
    if (!nl_is_invertible(det))
        throw std::domain_error("Jacobian determinant is not invertible (not an etale point)");
    NilLaurent detinv = nl_invert(det);
    std::vector<std::vector<NilLaurent>> inv(n, std::vector<NilLaurent>(n, det));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<std::vector<NilLaurent>> sub;
            for (int r = 0; r < n; ++r) {
                if (r == j) continue;
                std::vector<NilLaurent> row;
                for (int c = 0; c < n; ++c)
                    if (c != i) row.push_back(m[r][c]);
                sub.push_back(std::move(row));
            }
            NilLaurent cof = n == 1 ? NilLaurent::one(det.descriptor(), det.precision())
                                    : minor_det(minor_det, sub);
            inv[i][j] = ((i + j) % 2 == 0) ? detinv * cof : -(detinv * cof);
        }
    return inv;
}

}  // namespace detail

/// Unique solution of the etale equations along the nilpotent ideal: Newton
/// iteration y <- y - J(x,y)^{-1} f(x,y), run to the fixed
/// ceil(log2(radical bound)) + 1 step count, then verified exactly.
/// The seed must solve the equations after passing to the reduced ring.
inline std::vector<NilLaurent> hensel_lift(const EtalePresentation &pres,
                                           const std::vector<NilLaurent> &base,
                                           const std::vector<NilLaurent> &seed) {
    if (static_cast<int>(base.size()) != pres.d || static_cast<int>(seed.size()) != pres.e)
        throw std::invalid_argument("base/seed arity mismatch");
    const RingDescriptor &desc = base.empty() ? seed[0].descriptor() : base[0].descriptor();

    auto all_coords = [&](const std::vector<NilLaurent> &y) {
        std::vector<NilLaurent> v = base;
        v.insert(v.end(), y.begin(), y.end());
        return v;
    };

    for (const auto &f : pres.equations) {
        NilLaurent r = nl_reduce_red(eval_on_series(f, all_coords(seed)));
        if (!r.is_zero())
            throw std::invalid_argument("seed does not solve the equations modulo nilpotents");
    }

    int steps = 1;
    while ((1 << steps) < desc.radical_bound()) ++steps;
    steps += 1;

    std::vector<NilLaurent> y = seed;
    for (int it = 0; it < steps; ++it) {
        auto coords = all_coords(y);
        std::vector<NilLaurent> fval;
        for (const auto &f : pres.equations) fval.push_back(eval_on_series(f, coords));
        bool done = true;
        for (const auto &v : fval) done = done && v.is_zero();
        if (done) break;
        std::vector<std::vector<NilLaurent>> jac(pres.e, std::vector<NilLaurent>(pres.e, fval[0]));
        for (int i = 0; i < pres.e; ++i)
            for (int j = 0; j < pres.e; ++j)
                jac[i][j] = eval_on_series(pres.equations[i].derivative(pres.d + j), coords);
        auto jinv = detail::invert_series_matrix(jac);
        for (int j = 0; j < pres.e; ++j) {
            NilLaurent delta = fval[0] - fval[0];
            for (int i = 0; i < pres.e; ++i) delta = delta + jinv[j][i] * fval[i];
            y[j] = y[j] - delta;
        }
    }

    for (const auto &f : pres.equations)
        if (!eval_on_series(f, all_coords(y)).is_zero())
            throw std::domain_error("Newton iteration did not reach an exact solution");
    return y;
}

/// Point of X over the coefficient ring obtained by taking 0-th t-coefficients
/// of the base coordinates and lifting the fiber coordinates to match.
/// Returns the d + e coordinates as ring elements.
inline std::vector<RingElem> theta_projection(const EtalePresentation &pres,
                                              const std::vector<NilLaurent> &point) {
    if (static_cast<int>(point.size()) != pres.nvars())
        throw std::invalid_argument("coordinate arity mismatch");
    const RingDescriptor &desc = point[0].descriptor();

    std::vector<NilLaurent> base0, seed0;
    for (int i = 0; i < pres.d; ++i)
        base0.push_back(NilLaurent::constant(desc, 0, point[i].coeff(0)));
    for (int j = 0; j < pres.e; ++j)
        seed0.push_back(NilLaurent::constant(desc, 0, point[pres.d + j].coeff(0)));

    std::vector<RingElem> out;
    for (const auto &s : base0) out.push_back(s.coeff(0));
    if (pres.e > 0) {
        auto lifted = hensel_lift(pres, base0, seed0);
        for (const auto &s : lifted) out.push_back(s.coeff(0));
    }
    return out;
}

/// Finitely supported profile (epsilon_{-1}, epsilon_{-2}, ...) of extra
/// nilpotency orders, with the pointwise partial order.
struct EpsilonProfile {
    std::map<int, int> entries;  // j < 0 -> epsilon_j >= 1 (zeros not stored)

    EpsilonProfile() = default;
    explicit EpsilonProfile(std::map<int, int> e) : entries(std::move(e)) {
        for (auto &[j, v] : entries) {
            if (j >= 0) throw std::invalid_argument("profile indices must be negative");
            if (v <= 0) throw std::invalid_argument("profile entries must be positive");
        }
    }

    int at(int j) const {
        auto it = entries.find(j);
        return it == entries.end() ? 0 : it->second;
    }

    /// Depth: largest |j| with a nonzero entry.
    int support_depth() const {
        int n = 0;
        for (const auto &[j, v] : entries) n = std::max(n, -j);
        return n;
    }

    bool leq(const EpsilonProfile &o) const {
        for (const auto &[j, v] : entries)
            if (v > o.at(j)) return false;
        return true;
    }

    bool operator==(const EpsilonProfile &o) const { return entries == o.entries; }
};

/// Membership in the epsilon-truncation: each negative coefficient c_j of each
/// base coordinate must satisfy c_j^{1+epsilon_j} = 0.
inline bool epsilon_membership(const std::vector<NilLaurent> &base_coords,
                               const EpsilonProfile &eps) {
    for (const auto &x : base_coords) {
        for (const auto &[j, c] : x.coeffs()) {
            if (j >= 0) continue;
            if (!c.pow(1 + eps.at(j)).is_zero()) return false;
        }
    }
    return true;
}

/// Finitely presented coordinate ring of a truncated loop space chart:
/// polynomial generators a^{(i)}_l for -depth <= l <= n, where a generator
/// with l < 0 carries the nilpotency relation (a^{(i)}_l)^{order(l)} = 0.
/// Generators whose order collapses to 1 are identically zero and omitted.
struct TruncationRing {
    int d = 0;
    int n = 0;
    EpsilonProfile eps;

    /// (i, l) -> order; order 0 denotes a free (polynomial) generator.
    std::map<std::pair<int, int>, int> presentation() const {
        std::map<std::pair<int, int>, int> gens;
        for (int i = 0; i < d; ++i) {
            for (int l = 0; l <= n; ++l) gens[{i, l}] = 0;
            for (int l = -eps.support_depth(); l < 0; ++l)
                if (eps.at(l) >= 1) gens[{i, l}] = 1 + eps.at(l);
        }
        return gens;
    }

    bool operator==(const TruncationRing &o) const {
        return d == o.d && n == o.n && presentation() == o.presentation();
    }
};

/// A generator-level ring homomorphism between truncation rings: each source
/// generator maps to the like-named target generator, or to zero when the
/// target kills it.
struct TruncationMap {
    TruncationRing source;
    TruncationRing target;

    /// Image of a source generator: the pair itself, or nullopt for zero.
    std::optional<std::pair<int, int>> image(const std::pair<int, int> &g) const {
        auto tgt = target.presentation();
        auto it = tgt.find(g);
        if (it == tgt.end()) return std::nullopt;
        return g;
    }

    /// The map must respect the relations: the image of a generator of order
    /// k must satisfy x^k = 0 in the target.
    bool respects_relations() const {
        for (const auto &[g, order] : source.presentation()) {
            auto img = image(g);
            if (!img) continue;  // zero satisfies everything
            int target_order = target.presentation().at(*img);
            if (order == 0) continue;          // free generator: nothing to check
            if (target_order == 0) return false;  // nilpotent must map to nilpotent
            if (target_order > order) return false;
        }
        return true;
    }
};

/// The commuting square of ring maps attached to epsilon <= epsilon' and
/// n <= n':  quotients horizontally (more nilpotency on the left), generator
/// inclusions vertically (more modes on top).
struct TruncationSquare {
    TruncationRing eps_n;      // R(eps, n)
    TruncationRing eps_nbig;   // R(eps, n')
    TruncationRing epsb_n;     // R(eps', n)
    TruncationRing epsb_nbig;  // R(eps', n')

    TruncationMap quot_top() const { return {epsb_nbig, eps_nbig}; }
    TruncationMap quot_bottom() const { return {epsb_n, eps_n}; }
    TruncationMap incl_left() const { return {epsb_n, epsb_nbig}; }
    TruncationMap incl_right() const { return {eps_n, eps_nbig}; }

    bool commutes() const {
        for (const auto &[g, order] : epsb_n.presentation()) {
            auto via_top = incl_left().image(g);
            std::optional<std::pair<int, int>> a =
                via_top ? quot_top().image(*via_top) : std::nullopt;
            auto via_bottom = quot_bottom().image(g);
            std::optional<std::pair<int, int>> b =
                via_bottom ? incl_right().image(*via_bottom) : std::nullopt;
            if (a != b) return false;
        }
        return true;
    }

    /// Pushout of  R(eps,n) <- R(eps',n) -> R(eps',n'), computed on
    /// presentations: union of generators with identified names, each order
    /// the minimum of the contributed orders (order 1 collapses the
    /// generator).  The square is Cartesian iff this equals R(eps, n').
    bool is_pushout() const {
        std::map<std::pair<int, int>, int> gens;
        auto add = [&](const std::pair<int, int> &g, int order) {
            auto it = gens.find(g);
            if (it == gens.end()) {
                gens[g] = order;
            } else {
                // order 0 means free; min of nilpotency orders otherwise
                if (it->second == 0)
                    it->second = order;
                else if (order != 0)
                    it->second = std::min(it->second, order);
            }
        };
        for (const auto &[g, order] : epsb_nbig.presentation()) add(g, order);
        for (const auto &[g, order] : eps_n.presentation()) add(g, order);
        // Identification along R(eps', n): a generator killed by the bottom
        // quotient map must die in the pushout as well.
        for (const auto &[g, order] : epsb_n.presentation()) {
            if (!quot_bottom().image(g)) add(g, 1);
        }
        // drop collapsed generators
        for (auto it = gens.begin(); it != gens.end();) {
            if (it->second == 1)
                it = gens.erase(it);
            else
                ++it;
        }
        return gens == eps_nbig.presentation();
    }

    bool verify() const {
        return commutes() && is_pushout() && quot_top().respects_relations() &&
               quot_bottom().respects_relations() && incl_left().respects_relations() &&
               incl_right().respects_relations();
    }
};

/// Builds the structure square for d, eps <= eps', n <= n'.
inline TruncationSquare truncation_ring_maps(int d, const EpsilonProfile &eps,
                                             const EpsilonProfile &epsbig, int n, int nbig) {
    if (!eps.leq(epsbig)) throw std::invalid_argument("profiles must satisfy eps <= eps'");
    if (n > nbig) throw std::invalid_argument("mode bounds must satisfy n <= n'");
    TruncationSquare sq;
    sq.eps_n = {d, n, eps};
    sq.eps_nbig = {d, nbig, eps};
    sq.epsb_n = {d, n, epsbig};
    sq.epsb_nbig = {d, nbig, epsbig};
    return sq;
}

}  // namespace loopvert
