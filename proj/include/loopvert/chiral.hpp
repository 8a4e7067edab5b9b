#pragma once

#include <loopvert/vertex.hpp>

#include <map>
#include <stdexcept>
#include <vector>

namespace loopvert {

/// Element sum_m v_m(t2) * d^{(m)} delta(t1 - t2) of the two-variable delta
/// module, with v_m a polynomial in t2 (truncated at t2^{prec}) with VacVector
/// coefficients.  d^{(m)} delta is the class of (t1-t2)^{-m-1} modulo series
/// regular on the diagonal, so (t1-t2) acts by lowering m and any t1 in a
/// coefficient can be traded for t2 + (t1-t2).
class DeltaElement {
public:
    DeltaElement() = default;
    explicit DeltaElement(int t2_prec) : prec_(t2_prec) {}

    int t2_precision() const { return prec_; }
    bool is_zero() const { return rows_.empty(); }

    /// m -> (t2 power -> state)
    const std::map<int, std::map<int, VacVector>> &rows() const { return rows_; }

    void add(int m, int t2pow, const VacVector &v) {
        if (m < 0 || v.is_zero()) return;  // regular part dies in the quotient
        if (t2pow < 0) throw std::invalid_argument("negative t2 power");
        if (t2pow > prec_) return;
        auto &row = rows_[m];
        auto it = row.find(t2pow);
        if (it == row.end()) {
            row[t2pow] = v;
        } else {
            it->second = it->second + v;
            if (it->second.is_zero()) row.erase(it);
        }
        if (row.empty()) rows_.erase(m);
    }

    friend DeltaElement operator+(const DeltaElement &x, const DeltaElement &y) {
        DeltaElement r(std::min(x.prec_, y.prec_));
        for (const auto &[m, row] : x.rows_)
            for (const auto &[p, v] : row) r.add(m, p, v);
        for (const auto &[m, row] : y.rows_)
            for (const auto &[p, v] : row) r.add(m, p, v);
        return r;
    }

    friend DeltaElement operator-(const DeltaElement &x) {
        DeltaElement r(x.prec_);
        for (const auto &[m, row] : x.rows_)
            for (const auto &[p, v] : row) r.add(m, p, -v);
        return r;
    }

    friend DeltaElement operator-(const DeltaElement &x, const DeltaElement &y) {
        return x + (-y);
    }

    friend DeltaElement operator*(const Rational &c, const DeltaElement &x) {
        DeltaElement r(x.prec_);
        for (const auto &[m, row] : x.rows_)
            for (const auto &[p, v] : row) r.add(m, p, c * v);
        return r;
    }

    bool operator==(const DeltaElement &o) const { return rows_ == o.rows_; }
    bool operator!=(const DeltaElement &o) const { return !(*this == o); }

private:
    int prec_ = 0;
    std::map<int, std::map<int, VacVector>> rows_;
};

/// One raw summand v * t1^a1 * t2^a2 * d^{(m)} delta(t1-t2).
struct RawDeltaTerm {
    VacVector state;
    int t1_pow = 0;
    int t2_pow = 0;
    int delta_order = 0;
};

/// Canonical form: eliminates t1 via t1^a = sum_j C(a,j) t2^{a-j} (t1-t2)^j
/// and (t1-t2)^j d^{(m)} = d^{(m-j)}, dropping everything regular.
inline DeltaElement delta_canonicalize(const std::vector<RawDeltaTerm> &terms, int t2_prec) {
    DeltaElement out(t2_prec);
    for (const auto &term : terms) {
        if (term.t1_pow < 0 || term.t2_pow < 0)
            throw std::invalid_argument("raw coefficients must be polynomial in t1, t2");
        if (term.delta_order < 0) continue;
        int jmax = std::min(term.t1_pow, term.delta_order);
        for (int j = 0; j <= jmax; ++j) {
            Rational c = binomial(term.t1_pow, j);
            out.add(term.delta_order - j, term.t2_pow + term.t1_pow - j, c * term.state);
        }
    }
    return out;
}

/// Multiplication by (t1 - t2)^k, k >= 0: lowers every delta order by k.
inline DeltaElement delta_lower(const DeltaElement &x, int k) {
    if (k < 0) throw std::invalid_argument("only nonnegative powers of (t1-t2) act");
    DeltaElement r(x.t2_precision());
    for (const auto &[m, row] : x.rows())
        for (const auto &[p, v] : row) r.add(m - k, p, v);
    return r;
}

/// Multiplication by t2 (resp. t1 = t2 + (t1-t2)).
inline DeltaElement delta_mul_t2(const DeltaElement &x) {
    DeltaElement r(x.t2_precision());
    for (const auto &[m, row] : x.rows())
        for (const auto &[p, v] : row) r.add(m, p + 1, v);
    return r;
}

inline DeltaElement delta_mul_t1(const DeltaElement &x) {
    DeltaElement r = delta_mul_t2(x);
    return r + delta_lower(x, 1);
}

/// The total translation: the state-space derivation plus d/dt2 on the
/// polynomial coefficients.  The delta symbol itself is killed by the sum of
/// the two partial derivatives.
inline DeltaElement delta_translate(const DeltaElement &x) {
    DeltaElement r(x.t2_precision());
    for (const auto &[m, row] : x.rows())
        for (const auto &[p, v] : row) {
            r.add(m, p, translate(v));
            if (p >= 1) r.add(m, p - 1, rat(p) * v);
        }
    return r;
}

/// The chiral product of (t1-t2)^n (generator state) boxtimes b, computed by
/// the letter-mode display: sum over m of (letter mode m of the generator
/// applied to b) placed on d^{(m-n)} delta.
inline DeltaElement mu_generator(int n, GenKind kind, int dir, const VacVector &b, int t2_prec) {
    DeltaElement out(t2_prec);
    for (int m = n; m <= b.weight(); ++m) {
        if (m - n < 0) continue;
        out.add(m - n, 0, generator_mode(kind, dir, m, b));
    }
    return out;
}

/// The same product assembled from the vertex structure: the singular part of
/// (t1-t2)^n Y(a, t1-t2) b, placed on delta derivatives.
inline DeltaElement mu_vertex(int n, const VacVector &a, const VacVector &b, int t2_prec) {
    DeltaElement out(t2_prec);
    int bound = nth_product_vanishing_bound(a, b);
    for (int m = n; m < bound; ++m) {
        if (m - n < 0) continue;
        out.add(m - n, 0, nth_product(a, m, b));
    }
    return out;
}

/// Chiral product with a t1-power in the first slot, by the delta-calculus
/// route: expand t1^alpha around the diagonal and push the (t1-t2)-powers
/// into the delta orders.
inline DeltaElement mu_t1pow_raw(int alpha, int n, const VacVector &a, const VacVector &b,
                                 int t2_prec) {
    std::vector<RawDeltaTerm> raw;
    int bound = nth_product_vanishing_bound(a, b);
    // t1^alpha (t1-t2)^n Y(a, t1-t2) b: the (t1-t2)-power n - m - 1 of the
    // mode-m summand is a delta order when m - n >= 0.
    for (int m = n; m < bound; ++m) {
        if (m - n < 0) continue;
        raw.push_back(RawDeltaTerm{nth_product(a, m, b), alpha, 0, m - n});
    }
    return delta_canonicalize(raw, t2_prec);
}

/// The same product by the module dictionary (a t^alpha)(z) = (t + z)^alpha
/// a(z): the z-expansion picks up t2^j coefficients, and the summand at mode
/// k lands on the delta order k + j - alpha - n.
inline DeltaElement mu_t1pow_dictionary(int alpha, int n, const VacVector &a, const VacVector &b,
                                        int t2_prec) {
    DeltaElement out(t2_prec);
    int bound = nth_product_vanishing_bound(a, b);
    for (int j = 0; j <= alpha; ++j) {
        Rational c = binomial(alpha, j);
        for (int k = alpha + n - j; k < bound; ++k) {
            int order = k + j - alpha - n;
            if (order < 0) continue;
            out.add(order, j, c * nth_product(a, k, b));
        }
    }
    return out;
}

/// Desk-scale comparison for generator first slots: the letter-mode display
/// against the vertex route, with the unit normalization built in.
inline bool chiral_vs_vertex(GenKind kind, int dir, int n, const VacVector &b, int t2_prec) {
    VacVector g = generator_state(kind, dir);
    return mu_generator(n, kind, dir, b, t2_prec) == mu_vertex(n, g, b, t2_prec);
}

/// Unit axiom: the product of the vacuum against v, with any diagonal pole
/// order, reproduces the canonical class of (t1-t2)^n v.
inline bool unit_epsilon_check(const VacVector &v, int t2_prec) {
    for (int n = -t2_prec - 1; n <= -1; ++n) {
        DeltaElement got = mu_vertex(n, VacVector::vacuum(), v, t2_prec);
        DeltaElement want(t2_prec);
        want.add(-n - 1, 0, v);
        if (!(got == want)) return false;
    }
    // nonnegative powers of (t1-t2) against the vacuum slot die
    DeltaElement reg = mu_vertex(0, VacVector::vacuum(), v, t2_prec);
    return reg.is_zero();
}

}  // namespace loopvert
