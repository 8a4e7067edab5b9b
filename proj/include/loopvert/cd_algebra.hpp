#pragma once

#include <loopvert/rational.hpp>

#include <algorithm>
#include <compare>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace loopvert {

/// Generator kinds of the mode algebra.  The enumeration order a* < b* < a < b
/// is the total order used for canonical words.
enum class GenKind : int { AStar = 0, BStar = 1, A = 2, B = 3 };

inline bool kind_odd(GenKind k) { return k == GenKind::B || k == GenKind::BStar; }
inline bool kind_starred(GenKind k) { return k == GenKind::AStar || k == GenKind::BStar; }

/// One generator letter: kind, direction index (1-based) and integer mode.
struct GenMode {
    GenKind kind;
    int dir;
    int mode;

    bool odd() const { return kind_odd(kind); }

    /// Creation letters are a_{i,n}, b_{i,n} with n < 0 and a*_{i,n}, b*_{i,n}
    /// with n <= 0; the rest annihilate the vacuum.
    bool creator() const { return kind_starred(kind) ? mode <= 0 : mode < 0; }

    /// Grading by the t-degree of the symbol: unstarred letters weigh -mode,
    /// starred letters 1 - mode.  Every creation letter has weight >= 1.
    int weight() const { return kind_starred(kind) ? 1 - mode : -mode; }

    auto operator<=>(const GenMode &) const = default;
};

/// Scalar part of the super-bracket [g, h] (so g h = +-h g + bracket).
/// Nonzero only for dual pairs in the same direction with opposite modes.
inline Rational commutator_table(const GenMode &g, const GenMode &h) {
    if (g.dir != h.dir || g.mode != -h.mode) return 0;
    auto pair = [&](GenKind x, GenKind y) { return g.kind == x && h.kind == y; };
    if (pair(GenKind::AStar, GenKind::A)) return 1;   // [a*_m, a_{-m}] = 1
    if (pair(GenKind::A, GenKind::AStar)) return -1;  // commutator antisymmetry
    if (pair(GenKind::BStar, GenKind::B)) return 1;   // {b*_m, b_{-m}} = 1
    if (pair(GenKind::B, GenKind::BStar)) return 1;   // anticommutator symmetry
    return 0;
}

using CDWord = std::vector<GenMode>;

/// Formal Q-linear combination of words in the generator letters.
class CDElement {
public:
    CDElement() = default;

    static CDElement one() {
        CDElement x;
        x.terms_[CDWord{}] = 1;
        return x;
    }

    static CDElement letter(const GenMode &g) {
        CDElement x;
        x.terms_[CDWord{g}] = 1;
        return x;
    }

    static CDElement word(CDWord w, const Rational &c = 1) {
        CDElement x;
        if (c != 0) x.terms_[std::move(w)] = c;
        return x;
    }

    const std::map<CDWord, Rational> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_word(const CDWord &w, const Rational &c) {
        if (c == 0) return;
        auto it = terms_.find(w);
        if (it == terms_.end()) {
            terms_[w] = c;
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend CDElement operator+(const CDElement &a, const CDElement &b) {
        CDElement r = a;
        for (const auto &[w, c] : b.terms_) r.add_word(w, c);
        return r;
    }

    friend CDElement operator-(const CDElement &a) {
        CDElement r;
        for (const auto &[w, c] : a.terms_) r.terms_[w] = -c;
        return r;
    }

    friend CDElement operator-(const CDElement &a, const CDElement &b) { return a + (-b); }

    friend CDElement operator*(const Rational &s, const CDElement &a) {
        CDElement r;
        if (s == 0) return r;
        for (const auto &[w, c] : a.terms_) r.terms_[w] = s * c;
        return r;
    }

    friend CDElement operator*(const CDElement &a, const CDElement &b) {
        CDElement r;
        for (const auto &[wa, ca] : a.terms_)
            for (const auto &[wb, cb] : b.terms_) {
                CDWord w = wa;
                w.insert(w.end(), wb.begin(), wb.end());
                r.add_word(w, ca * cb);
            }
        return r;
    }

    bool operator==(const CDElement &o) const { return terms_ == o.terms_; }
    bool operator!=(const CDElement &o) const { return !(*this == o); }

private:
    std::map<CDWord, Rational> terms_;
};

namespace detail {

/// Rank for the canonical word order: creation letters before annihilation
/// letters, each block sorted by (kind, dir, mode).
inline std::tuple<int, int, int, int> letter_rank(const GenMode &g) {
    return {g.creator() ? 0 : 1, static_cast<int>(g.kind), g.dir, g.mode};
}

/// Index of a violating adjacent pair, or -1 if the word is canonical.
/// strategy 0 picks the leftmost violation, 1 the rightmost.
inline int find_violation(const CDWord &w, int strategy) {
    int found = -1;
    for (int i = 0; i + 1 < static_cast<int>(w.size()); ++i) {
        bool bad = letter_rank(w[i]) > letter_rank(w[i + 1]) ||
                   (w[i] == w[i + 1] && w[i].odd());
        if (bad) {
            if (strategy == 0) return i;
            found = i;
        }
    }
    return found;
}

}  // namespace detail

/// Rewrites into the canonical form: creation letters left, annihilation
/// letters right, both blocks sorted, using the relations with Koszul signs.
/// The reduction strategy does not affect the result; the default is the
/// leftmost violation.
inline CDElement normal_order(const CDElement &x, int strategy = 0) {
    CDElement result;
    std::map<CDWord, Rational> pending(x.terms().begin(), x.terms().end());
    while (!pending.empty()) {
        auto it = pending.begin();
        CDWord w = it->first;
        Rational c = it->second;
        pending.erase(it);
        if (c == 0) continue;
        int i = detail::find_violation(w, strategy);
        if (i < 0) {
            result.add_word(w, c);
            continue;
        }
        if (w[i] == w[i + 1] && w[i].odd()) continue;  // odd square
        Rational br = commutator_table(w[i], w[i + 1]);
        Rational sign = (w[i].odd() && w[i + 1].odd()) ? -1 : 1;
        CDWord swapped = w;
        std::swap(swapped[i], swapped[i + 1]);
        auto push = [&](CDWord ww, Rational cc) {
            if (cc == 0) return;
            auto jt = pending.find(ww);
            if (jt == pending.end())
                pending[std::move(ww)] = cc;
            else {
                jt->second += cc;
                if (jt->second == 0) pending.erase(jt);
            }
        };
        push(std::move(swapped), c * sign);
        if (br != 0) {
            CDWord contracted;
            contracted.reserve(w.size() - 2);
            for (int k = 0; k < static_cast<int>(w.size()); ++k)
                if (k != i && k != i + 1) contracted.push_back(w[k]);
            push(std::move(contracted), c * br);
        }
    }
    return result;
}

/// Normal monomial: sorted creation letters applied to the vacuum.  Odd
/// letters appear at most once; even letters may repeat.
using VacMonomial = std::vector<GenMode>;

/// Exact linear combination of normal monomials.
class VacVector {
public:
    VacVector() = default;

    static VacVector vacuum() {
        VacVector v;
        v.terms_[VacMonomial{}] = 1;
        return v;
    }

    /// Builds the normal monomial from letters in any order, tracking the
    /// Koszul sign of sorting (each transposition of two odd letters flips
    /// the sign).
    static VacVector monomial(VacMonomial m, const Rational &c = 1) {
        VacVector v;
        if (c == 0) return v;
        for (const auto &g : m)
            if (!g.creator()) throw std::invalid_argument("monomial letters must be creators");
        int sign = 1;
        for (size_t i = 1; i < m.size(); ++i) {  // insertion sort, counting odd swaps
            size_t j = i;
            while (j > 0 && detail::letter_rank(m[j]) < detail::letter_rank(m[j - 1])) {
                if (m[j].odd() && m[j - 1].odd()) sign = -sign;
                std::swap(m[j], m[j - 1]);
                --j;
            }
        }
        for (size_t k = 0; k + 1 < m.size(); ++k)
            if (m[k] == m[k + 1] && m[k].odd()) return v;  // odd square
        v.terms_[std::move(m)] = c * sign;
        return v;
    }

    const std::map<VacMonomial, Rational> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_monomial(const VacMonomial &m, const Rational &c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_[m] = c;
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend VacVector operator+(const VacVector &a, const VacVector &b) {
        VacVector r = a;
        for (const auto &[m, c] : b.terms_) r.add_monomial(m, c);
        return r;
    }

    friend VacVector operator-(const VacVector &a) {
        VacVector r;
        for (const auto &[m, c] : a.terms_) r.terms_[m] = -c;
        return r;
    }

    friend VacVector operator-(const VacVector &a, const VacVector &b) { return a + (-b); }

    friend VacVector operator*(const Rational &s, const VacVector &a) {
        VacVector r;
        if (s == 0) return r;
        for (const auto &[m, c] : a.terms_) r.terms_[m] = s * c;
        return r;
    }

    bool operator==(const VacVector &o) const { return terms_ == o.terms_; }
    bool operator!=(const VacVector &o) const { return !(*this == o); }

    /// Maximal monomial weight (0 for the zero vector and the vacuum line).
    int weight() const {
        int w = 0;
        for (const auto &[m, c] : terms_) {
            int s = 0;
            for (const auto &g : m) s += g.weight();
            w = std::max(w, s);
        }
        return w;
    }

    /// Homogeneous parity when defined: 0 even, 1 odd, -1 mixed/zero.
    int parity() const {
        int p = -1;
        for (const auto &[m, c] : terms_) {
            int q = 0;
            for (const auto &g : m) q ^= g.odd() ? 1 : 0;
            if (p == -1)
                p = q;
            else if (p != q)
                return -1;
        }
        return p;
    }

private:
    std::map<VacMonomial, Rational> terms_;
};

inline int monomial_weight(const VacMonomial &m) {
    int s = 0;
    for (const auto &g : m) s += g.weight();
    return s;
}

/// Action of one letter on one normal monomial.  A creation letter inserts at
/// its sorted position with the Koszul sign of the crossing; an annihilation
/// letter commutes through, picking up one contraction per dual letter, and
/// kills the vacuum at the end.
inline VacVector apply_letter(const GenMode &g, const VacMonomial &m, const Rational &coef) {
    VacVector out;
    if (coef == 0) return out;
    if (g.creator()) {
        size_t pos = 0;
        int crossed_odd = 0;
        while (pos < m.size() && detail::letter_rank(m[pos]) < detail::letter_rank(g)) {
            if (m[pos].odd()) ++crossed_odd;
            ++pos;
        }
        if (g.odd() && pos < m.size() && m[pos] == g) return out;  // odd square
        VacMonomial r;
        r.reserve(m.size() + 1);
        r.insert(r.end(), m.begin(), m.begin() + pos);
        r.push_back(g);
        r.insert(r.end(), m.begin() + pos, m.end());
        Rational sign = (g.odd() && crossed_odd % 2 == 1) ? -1 : 1;
        out.add_monomial(r, coef * sign);
        return out;
    }
    int crossed_odd = 0;
    for (size_t j = 0; j < m.size(); ++j) {
        Rational br = commutator_table(g, m[j]);
        if (br != 0) {
            VacMonomial r;
            r.reserve(m.size() - 1);
            for (size_t k = 0; k < m.size(); ++k)
                if (k != j) r.push_back(m[k]);
            Rational sign = (g.odd() && crossed_odd % 2 == 1) ? -1 : 1;
            out.add_monomial(r, coef * sign * br);
        }
        if (m[j].odd()) ++crossed_odd;
    }
    return out;  // the pass-through term annihilates the vacuum
}

inline VacVector apply_letter(const GenMode &g, const VacVector &v) {
    VacVector out;
    for (const auto &[m, c] : v.terms()) out = out + apply_letter(g, m, c);
    return out;
}

/// Module action of a word: rightmost letter acts first.
inline VacVector apply_word(const CDWord &w, const VacVector &v) {
    VacVector cur = v;
    for (auto it = w.rbegin(); it != w.rend(); ++it) cur = apply_letter(*it, cur);
    return cur;
}

/// Module action of an algebra element on a state.
inline VacVector vac_act(const CDElement &x, const VacVector &v) {
    VacVector out;
    for (const auto &[w, c] : x.terms()) out = out + c * apply_word(w, v);
    return out;
}

/// Restriction to a finite mode window: a_{i,n}, b_{i,n} with -M <= n <= -1
/// and a*_{i,n}, b*_{i,n} with -N <= n <= 0, for directions 1..dims.
/// Growing N embeds vacuum to vacuum; growing M twists the vacuum by the
/// newly admitted odd letters (see vac_window_transition).
struct VacWindow {
    int dims = 1;
    int M = 0;
    int N = 0;

    bool admits(const GenMode &g) const {
        if (g.dir < 1 || g.dir > dims || !g.creator()) return false;
        if (kind_starred(g.kind)) return g.mode >= -N;
        return g.mode >= -M;
    }

    bool contains(const VacMonomial &m) const {
        for (const auto &g : m)
            if (!admits(g)) return false;
        return true;
    }

    bool contains(const VacVector &v) const {
        for (const auto &[m, c] : v.terms())
            if (!contains(m)) return false;
        return true;
    }

    std::vector<GenMode> creators() const {
        std::vector<GenMode> out;
        for (int i = 1; i <= dims; ++i) {
            for (int n = -N; n <= 0; ++n) {
                out.push_back({GenKind::AStar, i, n});
                out.push_back({GenKind::BStar, i, n});
            }
            for (int n = -M; n <= -1; ++n) {
                out.push_back({GenKind::A, i, n});
                out.push_back({GenKind::B, i, n});
            }
        }
        std::sort(out.begin(), out.end(), [](const GenMode &a, const GenMode &b) {
            return detail::letter_rank(a) < detail::letter_rank(b);
        });
        return out;
    }
};

namespace detail {

inline void enumerate_monomials(const std::vector<GenMode> &letters, size_t from, int budget,
                                VacMonomial &cur, std::vector<VacMonomial> &out) {
    out.push_back(cur);
    for (size_t k = from; k < letters.size(); ++k) {
        const GenMode &g = letters[k];
        if (g.weight() > budget) continue;
        if (g.odd() && !cur.empty() && cur.back() == g) continue;
        cur.push_back(g);
        // even letters may repeat: stay at k; odd letters advance
        enumerate_monomials(letters, g.odd() ? k + 1 : k, budget - g.weight(), cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

/// All normal monomials with letters in the window and weight <= cap, in a
/// deterministic order (graded, then lexicographic on the letter ranks).
inline std::vector<VacMonomial> vac_window_basis(const VacWindow &w, int cap) {
    std::vector<VacMonomial> out;
    if (cap < 0) return out;
    auto letters = w.creators();
    VacMonomial cur;
    detail::enumerate_monomials(letters, 0, cap, cur, out);
    std::stable_sort(out.begin(), out.end(), [](const VacMonomial &a, const VacMonomial &b) {
        int wa = monomial_weight(a), wb = monomial_weight(b);
        if (wa != wb) return wa < wb;
        return a < b;
    });
    return out;
}

/// The full (window-free) basis up to a weight cap: brute-force enumeration
/// of normal monomials of the vacuum module.
inline std::vector<VacMonomial> vac_basis(int dims, int cap) {
    // every creator of weight <= cap lies in this window
    VacWindow w{dims, cap, cap};
    return vac_window_basis(w, cap);
}

/// The embedding attached to growing a window: the vacuum maps to the product
/// of the newly admitted odd unstarred letters applied to the bigger vacuum
/// (growing N alone maps vacuum to vacuum), and the map extends to states by
/// acting with the monomial word on the image of the vacuum.  The tail word
/// is ordered mode-major (mode -(M+1) first, directions in order within each
/// mode) so that composite steps agree with one big step on the nose.
inline VacVector vac_window_transition(const VacWindow &from, const VacWindow &to,
                                       const VacVector &v) {
    if (to.dims != from.dims || to.M < from.M || to.N < from.N)
        throw std::invalid_argument("target window must contain the source window");
    if (!from.contains(v)) throw std::invalid_argument("state does not lie in the source window");
    CDWord tail;
    for (int mode = -(from.M + 1); mode >= -to.M; --mode)
        for (int i = 1; i <= from.dims; ++i) tail.push_back(GenMode{GenKind::B, i, mode});
    VacVector tail_state = apply_word(tail, VacVector::vacuum());
    VacVector out;
    for (const auto &[m, c] : v.terms()) out = out + c * apply_word(m, tail_state);
    return out;
}

}  // namespace loopvert
