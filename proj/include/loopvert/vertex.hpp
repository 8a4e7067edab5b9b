#pragma once

#include <loopvert/cd_algebra.hpp>

#include <stdexcept>
#include <vector>

namespace loopvert {

/// The four strong generator states are a_{i,-1}1, a*_{i,0}1, b_{i,-1}1 and
/// b*_{i,0}1; their fields are the generating series of the letters.  A letter
/// of kind K, direction i, mode p is the field mode G_(n) of the matching
/// generator with n = p for unstarred kinds and n = p - 1 for starred kinds
/// (starred fields expand with a one-step shift).
inline VacVector generator_state(GenKind kind, int dir) {
    int mode = kind_starred(kind) ? 0 : -1;
    return VacVector::monomial({GenMode{kind, dir, mode}});
}

/// Field mode G_(n) of a generator acting on a state: a single letter action.
inline VacVector generator_mode(GenKind kind, int dir, int n, const VacVector &v) {
    int p = kind_starred(kind) ? n + 1 : n;
    return apply_letter(GenMode{kind, dir, p}, v);
}

/// Operators a_(n) for n in a finite range, represented by the state and the
/// range itself.
struct FieldWindow {
    VacVector state;
    int n_lo = 0;
    int n_hi = 0;
};

/// The translation operator: a derivation over the letters of each monomial,
/// with d(a_{i,n}) = -n a_{i,n-1}, d(a*_{i,n}) = (1-n) a*_{i,n-1} and the same
/// formulas for b, b*.  These are the operator-convention signs forced by
/// [d, a(z)] = d_z a(z) together with the field expansions of the generators;
/// the right-module convention carries the opposite sign.
inline VacVector translate(const VacVector &v) {
    VacVector out;
    for (const auto &[m, c] : v.terms()) {
        for (size_t k = 0; k < m.size(); ++k) {
            const GenMode &g = m[k];
            int factor = kind_starred(g.kind) ? 1 - g.mode : -g.mode;
            if (factor == 0) continue;
            VacMonomial repl = m;
            repl[k] = GenMode{g.kind, g.dir, g.mode - 1};
            out = out + VacVector::monomial(std::move(repl), c * rat(factor));
        }
    }
    return out;
}

/// All n-th products vanish once n reaches wt(a) + wt(b): the result would
/// have negative weight.
inline int nth_product_vanishing_bound(const VacVector &a, const VacVector &b) {
    return a.weight() + b.weight();
}

/// Exact n-th product a_(n) b.  Single letters act through the generator
/// dictionary; longer monomials are peeled one letter at a time with the
/// standard mode expansion of a normally ordered product,
///   (G_(g) w)_(k) c = sum_j (-1)^j C(g,j) [ G_(g-j) (w_(k+j) c)
///                      - (-1)^g eps (w_(g+k-j) (G_(j) c)) ],
/// whose sums terminate by the weight bound.  The Koszul sign eps is fixed by
/// the Clifford-generator test suite.
inline VacVector nth_product(const VacVector &a, int n, const VacVector &b) {
    VacVector out;
    for (const auto &[m, c] : a.terms()) {
        if (m.empty()) {
            // vacuum field is the identity: 1_(n) b = delta_{n,-1} b
            if (n == -1) out = out + c * b;
            continue;
        }
        // peel the first letter
        GenMode g = m[0];
        VacMonomial rest(m.begin() + 1, m.end());
        GenKind kind = g.kind;
        int dir = g.dir;
        int gmode = kind_starred(kind) ? g.mode - 1 : g.mode;  // <= -1 for creators
        int rest_parity = 0;
        for (const auto &h : rest) rest_parity ^= h.odd() ? 1 : 0;
        Rational eps = (g.odd() && rest_parity) ? -1 : 1;
        VacVector w = VacVector::monomial(rest);

        VacVector acc;
        // group 1: G_(gmode-j) (w_(n+j) b), nonzero while n+j < wt(w)+wt(b)
        int bound1 = monomial_weight(rest) + b.weight() - n;
        for (int j = 0; j < bound1; ++j) {
            VacVector inner = nth_product(w, n + j, b);
            if (inner.is_zero()) continue;
            Rational coef = c * binomial(gmode, j) * rat(j % 2 == 0 ? 1 : -1);
            acc = acc + coef * generator_mode(kind, dir, gmode - j, inner);
        }
        // group 2: w_(gmode+n-j) (G_(j) b), nonzero while j < 1 + wt(b)
        int bound2 = 1 + b.weight();
        Rational outer_sign = (gmode % 2 == 0 ? 1 : -1) * eps;
        for (int j = 0; j < bound2; ++j) {
            VacVector inner = generator_mode(kind, dir, j, b);
            if (inner.is_zero()) continue;
            Rational coef = c * binomial(gmode, j) * rat(j % 2 == 0 ? 1 : -1) * outer_sign;
            acc = acc - coef * nth_product(w, gmode + n - j, inner);
        }
        out = out + acc;
    }
    return out;
}

/// The differential: replaces one letter per term, a_{i,n} -> b_{i,n} and
/// b*_{i,n} -> a*_{i,n}, with the Koszul sign of the letters crossed.  An odd
/// derivation with zero square.
inline VacVector msv_differential(const VacVector &v) {
    VacVector out;
    for (const auto &[m, c] : v.terms()) {
        int odd_before = 0;
        for (size_t k = 0; k < m.size(); ++k) {
            const GenMode &g = m[k];
            if (g.kind == GenKind::A || g.kind == GenKind::BStar) {
                VacMonomial repl = m;
                repl[k].kind = g.kind == GenKind::A ? GenKind::B : GenKind::AStar;
                Rational sign = odd_before % 2 == 0 ? 1 : -1;
                out = out + VacVector::monomial(std::move(repl), c * sign);
            }
            if (g.odd()) ++odd_before;
        }
    }
    return out;
}

/// Checks (z-w)^N [a(z), b(w)] = 0 as operators: for every (m, k) in the given
/// ranges and every test state, the alternating binomial sum of double modes
/// must vanish.  Both arguments must have homogeneous parity.
namespace detail {

inline VacVector parity_component(const VacVector &v, int p) {
    VacVector out;
    for (const auto &[m, c] : v.terms()) {
        int q = 0;
        for (const auto &g : m) q ^= g.odd() ? 1 : 0;
        if (q == p) out.add_monomial(m, c);
    }
    return out;
}

}  // namespace detail

inline bool locality_check_homogeneous(const VacVector &a, const VacVector &b, int N,
                                       const std::vector<VacVector> &test_states, int mode_lo,
                                       int mode_hi) {
    if (a.is_zero() || b.is_zero()) return true;
    int pa = a.parity(), pb = b.parity();
    Rational koszul = (pa == 1 && pb == 1) ? -1 : 1;
    for (int m = mode_lo; m <= mode_hi; ++m)
        for (int k = mode_lo; k <= mode_hi; ++k)
            for (const auto &c : test_states) {
                VacVector acc;
                for (int j = 0; j <= N; ++j) {
                    Rational coef = binomial(N, j) * rat(j % 2 == 0 ? 1 : -1);
                    acc = acc + coef * nth_product(a, m + N - j, nth_product(b, k + j, c));
                    acc = acc - coef * koszul * nth_product(b, k + j, nth_product(a, m + N - j, c));
                }
                if (!acc.is_zero()) return false;
            }
    return true;
}

/// Checks (z-w)^N [a(z), b(w)] = 0 on the test states; mixed-parity inputs
/// are split into their homogeneous components first.
inline bool locality_check(const VacVector &a, const VacVector &b, int N,
                           const std::vector<VacVector> &test_states, int mode_lo, int mode_hi) {
    for (int pa = 0; pa <= 1; ++pa)
        for (int pb = 0; pb <= 1; ++pb)
            if (!locality_check_homogeneous(detail::parity_component(a, pa),
                                            detail::parity_component(b, pb), N, test_states,
                                            mode_lo, mode_hi))
                return false;
    return true;
}

/// Coefficient form of the Borcherds identity at (m, n, k):
///   sum_j C(m,j) (a_(n+j) b)_(m+k-j) c
///     = sum_j (-1)^j C(n,j) [ a_(m+n-j) (b_(k+j) c)
///                             - (-1)^n eps b_(n+k-j) (a_(m+j) c) ].
/// All three sums are finite by the weight bounds.
inline bool borcherds_check_homogeneous(const VacVector &a, const VacVector &b,
                                        const VacVector &c, int m, int n, int k) {
    if (a.is_zero() || b.is_zero() || c.is_zero()) return true;
    int pa = a.parity(), pb = b.parity();
    Rational eps = (pa == 1 && pb == 1) ? -1 : 1;

    VacVector lhs;
    int bound_ab = nth_product_vanishing_bound(a, b) - n;
    for (int j = 0; j < bound_ab; ++j) {
        Rational coef = binomial(m, j);
        if (coef == 0) continue;
        VacVector inner = nth_product(a, n + j, b);
        if (inner.is_zero()) continue;
        lhs = lhs + coef * nth_product(inner, m + k - j, c);
    }

    VacVector rhs;
    int bound_bc = nth_product_vanishing_bound(b, c) - k;
    for (int j = 0; j < bound_bc; ++j) {
        Rational coef = binomial(n, j) * rat(j % 2 == 0 ? 1 : -1);
        if (coef == 0) continue;
        VacVector inner = nth_product(b, k + j, c);
        if (inner.is_zero()) continue;
        rhs = rhs + coef * nth_product(a, m + n - j, inner);
    }
    int bound_ac = nth_product_vanishing_bound(a, c) - m;
    Rational nsign = (n % 2 == 0 ? 1 : -1) * eps;
    for (int j = 0; j < bound_ac; ++j) {
        Rational coef = binomial(n, j) * rat(j % 2 == 0 ? 1 : -1) * nsign;
        if (coef == 0) continue;
        VacVector inner = nth_product(a, m + j, c);
        if (inner.is_zero()) continue;
        rhs = rhs - coef * nth_product(b, n + k - j, inner);
    }

    return lhs == rhs;
}

/// Coefficient Borcherds identity; mixed-parity inputs are split into their
/// homogeneous components first.
inline bool borcherds_check(const VacVector &a, const VacVector &b, const VacVector &c, int m,
                            int n, int k) {
    for (int pa = 0; pa <= 1; ++pa)
        for (int pb = 0; pb <= 1; ++pb)
            if (!borcherds_check_homogeneous(detail::parity_component(a, pa),
                                             detail::parity_component(b, pb), c, m, n, k))
                return false;
    return true;
}

}  // namespace loopvert
