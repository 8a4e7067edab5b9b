#pragma once

#include <loopvert/nil_laurent.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

namespace loopvert {

/// Dense univariate polynomial with RingElem coefficients, used for the
/// degree-<|I| coefficient blocks of multi-point series.
class RPoly {
public:
    RPoly() = default;
    explicit RPoly(RingDescriptor desc) : desc_(std::move(desc)) {}
    RPoly(RingDescriptor desc, std::vector<RingElem> coeffs)
        : desc_(std::move(desc)), c_(std::move(coeffs)) {
        trim();
    }

    static RPoly constant(const RingDescriptor &desc, const RingElem &a) {
        RPoly p(desc);
        if (!a.is_zero()) p.c_ = {a};
        return p;
    }

    /// t - b
    static RPoly linear_root(const RingDescriptor &desc, const RingElem &b) {
        RPoly p(desc);
        p.c_ = {-b, RingElem::one(desc)};
        p.trim();
        return p;
    }

    const RingDescriptor &descriptor() const { return desc_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero

    RingElem coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(c_.size())) return RingElem::zero(desc_);
        return c_[k];
    }

    void set_coeff(int k, const RingElem &a) {
        if (k < 0) throw std::invalid_argument("negative polynomial degree");
        if (k >= static_cast<int>(c_.size())) c_.resize(k + 1, RingElem::zero(desc_));
        c_[k] = a;
        trim();
    }

    bool all_nilpotent() const {
        for (const auto &a : c_)
            if (!a.is_nilpotent()) return false;
        return true;
    }

    friend RPoly operator+(const RPoly &a, const RPoly &b) {
        RPoly r(a.desc_);
        r.c_.resize(std::max(a.c_.size(), b.c_.size()), RingElem::zero(a.desc_));
        for (size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.coeff(k) + b.coeff(k);
        r.trim();
        return r;
    }

    friend RPoly operator-(const RPoly &a) {
        RPoly r = a;
        for (auto &x : r.c_) x = -x;
        return r;
    }

    friend RPoly operator-(const RPoly &a, const RPoly &b) { return a + (-b); }

    friend RPoly operator*(const RPoly &a, const RPoly &b) {
        RPoly r(a.desc_);
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, RingElem::zero(a.desc_));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
        r.trim();
        return r;
    }

    friend RPoly operator*(const RingElem &s, const RPoly &a) {
        RPoly r(a.desc_);
        r.c_ = a.c_;
        for (auto &x : r.c_) x = s * x;
        r.trim();
        return r;
    }

    bool operator==(const RPoly &o) const { return c_ == o.c_; }
    bool operator!=(const RPoly &o) const { return !(*this == o); }

    /// Euclidean division by a monic divisor: *this = q * d + r, deg r < deg d.
    std::pair<RPoly, RPoly> divrem_monic(const RPoly &d) const {
        if (d.is_zero() || !(d.coeff(d.degree()) == RingElem::one(desc_)))
            throw std::invalid_argument("divisor must be monic");
        RPoly q(desc_), r = *this;
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int shift = r.degree() - d.degree();
            RingElem lead = r.coeff(r.degree());
            q.set_coeff(shift, q.coeff(shift) + lead);
            for (int k = 0; k <= d.degree(); ++k)
                r.set_coeff(k + shift, r.coeff(k + shift) - lead * d.coeff(k));
        }
        return {q, r};
    }

    /// Taylor shift: p(t) -> p(t + b).
    RPoly shifted(const RingElem &b) const {
        RPoly r(desc_);
        for (int k = degree(); k >= 0; --k) {
            // Horner: r = r * (t + b) + c_k
            RPoly t_plus_b(desc_);
            t_plus_b.c_ = {b, RingElem::one(desc_)};
            t_plus_b.trim();
            r = r * t_plus_b + RPoly::constant(desc_, coeff(k));
        }
        return r;
    }

    RingElem eval(const RingElem &x) const {
        RingElem r = RingElem::zero(desc_);
        for (int k = degree(); k >= 0; --k) r = r * x + coeff(k);
        return r;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    RingDescriptor desc_;
    std::vector<RingElem> c_;
};

/// Element sum_l a_l(t) * prod_i (t - b_i)^l with deg a_l < |I|, the explicit
/// model of the multi-point series ring.  Coefficients of a_l with l < 0 must
/// be nilpotent.  Levels are known modulo prod_i (t - b_i)^{prec+1}.
class MultiPointSeries {
public:
    MultiPointSeries() = default;
    MultiPointSeries(RingDescriptor desc, std::vector<RingElem> points, int prec)
        : desc_(std::move(desc)), points_(std::move(points)), prec_(prec) {
        if (points_.empty()) throw std::invalid_argument("at least one point required");
        if (prec < 0) throw std::invalid_argument("precision must be >= 0");
    }

    const RingDescriptor &descriptor() const { return desc_; }
    const std::vector<RingElem> &points() const { return points_; }
    int point_count() const { return static_cast<int>(points_.size()); }
    int precision() const { return prec_; }
    const std::map<int, RPoly> &levels() const { return levels_; }
    bool is_zero() const { return levels_.empty(); }

    /// prod_i (t - b_i)
    RPoly point_product() const {
        RPoly p = RPoly::constant(desc_, RingElem::one(desc_));
        for (const auto &b : points_) p = p * RPoly::linear_root(desc_, b);
        return p;
    }

    RPoly level(int l) const {
        auto it = levels_.find(l);
        return it == levels_.end() ? RPoly(desc_) : it->second;
    }

    /// Adds poly * prod(t-b_i)^l, re-dividing by the point product until every
    /// stored block has degree < |I|.
    void accumulate(int l, const RPoly &poly) {
        if (poly.is_zero()) return;
        RPoly p = poly;
        int lev = l;
        RPoly prod = point_product();
        while (true) {
            if (lev > prec_) return;
            if (p.degree() < point_count()) {
                store(lev, level(lev) + p);
                return;
            }
            auto [q, r] = p.divrem_monic(prod);
            store(lev, level(lev) + r);
            p = q;
            lev += 1;
        }
    }

    MultiPointSeries truncated(int prec) const {
        MultiPointSeries r(desc_, points_, prec);
        for (const auto &[l, p] : levels_)
            if (l <= prec) r.levels_[l] = p;
        return r;
    }

    friend MultiPointSeries operator+(const MultiPointSeries &a, const MultiPointSeries &b) {
        check_compatible(a, b);
        MultiPointSeries r(a.desc_, a.points_, std::min(a.prec_, b.prec_));
        for (const auto &[l, p] : a.levels_)
            if (l <= r.prec_) r.store(l, p);
        for (const auto &[l, p] : b.levels_)
            if (l <= r.prec_) r.store(l, r.level(l) + p);
        return r;
    }

    friend MultiPointSeries operator-(const MultiPointSeries &a) {
        MultiPointSeries r(a.desc_, a.points_, a.prec_);
        for (const auto &[l, p] : a.levels_) r.levels_[l] = -p;
        return r;
    }

    friend MultiPointSeries operator-(const MultiPointSeries &a, const MultiPointSeries &b) {
        return a + (-b);
    }

    friend MultiPointSeries operator*(const MultiPointSeries &a, const MultiPointSeries &b) {
        check_compatible(a, b);
        MultiPointSeries r(a.desc_, a.points_, std::min(a.prec_, b.prec_));
        for (const auto &[la, pa] : a.levels_)
            for (const auto &[lb, pb] : b.levels_) {
                if (la + lb > r.prec_) continue;
                r.accumulate(la + lb, pa * pb);
            }
        return r;
    }

    bool operator==(const MultiPointSeries &o) const {
        return points_ == o.points_ && prec_ == o.prec_ && levels_ == o.levels_;
    }
    bool operator!=(const MultiPointSeries &o) const { return !(*this == o); }

private:
    void store(int l, const RPoly &p) {
        if (p.is_zero()) {
            levels_.erase(l);
            return;
        }
        if (l < 0 && !p.all_nilpotent())
            throw std::invalid_argument("negative level of a multi-point series must have nilpotent coefficients");
        levels_[l] = p;
    }

    static void check_compatible(const MultiPointSeries &a, const MultiPointSeries &b) {
        if (a.desc_ != b.desc_) throw std::invalid_argument("ring descriptor mismatch");
        if (a.points_ != b.points_) throw std::invalid_argument("point lists do not match");
    }

    RingDescriptor desc_;
    std::vector<RingElem> points_;
    int prec_ = 0;
    std::map<int, RPoly> levels_;
};

inline MultiPointSeries mp_add(const MultiPointSeries &a, const MultiPointSeries &b) { return a + b; }
inline MultiPointSeries mp_mul(const MultiPointSeries &a, const MultiPointSeries &b) { return a * b; }

namespace detail {

/// Expansion of (u + beta)^l truncated at u^K, for any integer l.  For l >= 0
/// this is the binomial theorem; for l < 0 it is the geometric-type series,
/// which requires beta to be a unit.
inline std::vector<RingElem> binomial_factor_expansion(const RingDescriptor &desc,
                                                       const RingElem &beta, int l, int K) {
    std::vector<RingElem> out(K + 1, RingElem::zero(desc));
    if (l >= 0) {
        std::vector<RingElem> betapow(l + 1, RingElem::one(desc));
        for (int k = 1; k <= l; ++k) betapow[k] = betapow[k - 1] * beta;
        for (int k = 0; k <= std::min(l, K); ++k) out[k] = binomial(l, k) * betapow[l - k];
        return out;
    }
    RingElem binv = beta.invert();
    RingElem b_l = RingElem::one(desc);  // beta^l  (negative power)
    for (int j = 0; j < -l; ++j) b_l = b_l * binv;
    RingElem bk = b_l;
    for (int k = 0; k <= K; ++k) {
        out[k] = binomial(l, k) * bk;
        bk = bk * binv;
    }
    return out;
}

}  // namespace detail

/// Taylor re-expansion of a multi-point series around the point c, as a
/// nil-Laurent series in u = t - c, exactly modulo u^{K+1}.  Every point not
/// equal to c must differ from it by a unit.
inline NilLaurent mp_taylor_at(const MultiPointSeries &a, const RingElem &c, int K) {
    const RingDescriptor &desc = a.descriptor();
    NilLaurent out(desc, K);
    for (const auto &[l, poly] : a.levels()) {
        // a_l(c + u): coefficients of the shifted block
        RPoly shifted = poly.shifted(c);
        // prod over points of (u + (c - b_i))^l, split into the local factor
        // u^{m l} (for points equal to c) and unit factors expanded as series.
        int local_mult = 0;
        std::vector<RingElem> diffs;
        for (const auto &b : a.points()) {
            RingElem diff = c - b;
            if (diff.is_zero()) {
                local_mult += 1;
                continue;
            }
            if (!diff.is_unit())
                throw std::domain_error("point separation is not a unit; series cannot be re-expanded here");
            diffs.push_back(diff);
        }
        int ushift = local_mult * l;
        int need = K - ushift;  // expansion order needed from the unit factors
        if (need < 0) continue;
        std::map<int, RingElem> series;  // exponent -> coeff, the running product
        series[0] = RingElem::one(desc);
        for (const auto &diff : diffs) {
            auto factor = detail::binomial_factor_expansion(desc, diff, l, need);
            std::map<int, RingElem> next;
            for (const auto &[e, coef] : series)
                for (int k = 0; k < static_cast<int>(factor.size()); ++k) {
                    if (e + k > need || factor[k].is_zero()) continue;
                    RingElem v = coef * factor[k];
                    if (v.is_zero()) continue;
                    auto it = next.find(e + k);
                    if (it == next.end())
                        next[e + k] = v;
                    else {
                        it->second = it->second + v;
                        if (it->second.is_zero()) next.erase(it);
                    }
                }
            series = std::move(next);
        }
        for (const auto &[e, coef] : series) {
            for (int k = 0; k <= shifted.degree(); ++k) {
                int expo = e + ushift + k;
                if (expo > K) continue;
                out.add_coeff(expo, coef * shifted.coeff(k));
            }
        }
    }
    return out;
}

/// Factorization map: re-expands the series around each point b_i as a
/// nil-Laurent series in (t - b_i), exactly modulo (t - b_i)^{prec+1}.
/// Requires all pairwise point separations to be units.
inline std::vector<NilLaurent> mp_factorize_kappa(const MultiPointSeries &a) {
    const auto &pts = a.points();
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = 0; j < pts.size(); ++j)
            if (i != j && !(pts[i] - pts[j]).is_unit())
                throw std::domain_error("factorization requires invertible point separation");
    std::vector<NilLaurent> out;
    out.reserve(pts.size());
    for (const auto &b : pts) out.push_back(mp_taylor_at(a, b, a.precision()));
    return out;
}

/// Rewrites a series whose points all coincide as a one-point series in
/// (t - b); a ring isomorphism at each finite level.
inline NilLaurent mp_diagonal_nu(const MultiPointSeries &a) {
    const auto &pts = a.points();
    for (const auto &b : pts)
        if (!(b == pts[0]))
            throw std::invalid_argument("diagonal collapse requires all points equal");
    int p = a.point_count();
    int K = p * (a.precision() + 1) - 1;
    return mp_taylor_at(a, pts[0], K);
}

/// Inverse of mp_diagonal_nu: regroups a one-point expansion in (t - b) as a
/// p-point series at (b, ..., b).
inline MultiPointSeries mp_diagonal_nu_inverse(const NilLaurent &s, const RingElem &b, int p,
                                               int prec) {
    MultiPointSeries out(s.descriptor(), std::vector<RingElem>(p, b), prec);
    RPoly tminusb = RPoly::linear_root(s.descriptor(), b);
    for (const auto &[e, c] : s.coeffs()) {
        int l = e >= 0 ? e / p : -((-e + p - 1) / p);
        int nu = e - p * l;  // 0 <= nu < p
        RPoly block = RPoly::constant(s.descriptor(), c);
        for (int k = 0; k < nu; ++k) block = block * tminusb;
        out.accumulate(l, block);
    }
    return out;
}

/// Partial diagonal collapse: input points grouped into consecutive groups of
/// equal points; output has one point per group.  group_sizes must sum to the
/// point count.
inline MultiPointSeries mp_group_nu(const MultiPointSeries &a, const std::vector<int> &group_sizes) {
    const RingDescriptor &desc = a.descriptor();
    std::vector<RingElem> newpts;
    std::vector<int> mult;
    size_t pos = 0;
    for (int g : group_sizes) {
        if (g <= 0 || pos + g > a.points().size()) throw std::invalid_argument("bad grouping");
        for (int k = 1; k < g; ++k)
            if (!(a.points()[pos + k] == a.points()[pos]))
                throw std::invalid_argument("group points must be equal");
        newpts.push_back(a.points()[pos]);
        mult.push_back(g);
        pos += g;
    }
    if (pos != a.points().size()) throw std::invalid_argument("grouping does not cover the points");

    int maxm = *std::max_element(mult.begin(), mult.end());
    int minm = *std::min_element(mult.begin(), mult.end());
    int out_prec = minm * (a.precision() + 1) - 1;
    MultiPointSeries out(desc, newpts, out_prec);

    RPoly pout = out.point_product();
    for (const auto &[l, block] : a.levels()) {
        if (l >= 0) {
            // prod (t-c_g)^{m_g l} = pout^l * prod (t-c_g)^{(m_g-1) l}
            RPoly extra = RPoly::constant(desc, RingElem::one(desc));
            for (size_t g = 0; g < newpts.size(); ++g) {
                RPoly lin = RPoly::linear_root(desc, newpts[g]);
                for (int k = 0; k < (mult[g] - 1) * l; ++k) extra = extra * lin;
            }
            out.accumulate(l, block * extra);
        } else {
            // prod (t-c_g)^{m_g l} = pout^{maxm*l} * prod (t-c_g)^{(maxm-m_g)(-l)}
            RPoly extra = RPoly::constant(desc, RingElem::one(desc));
            for (size_t g = 0; g < newpts.size(); ++g) {
                RPoly lin = RPoly::linear_root(desc, newpts[g]);
                for (int k = 0; k < (maxm - mult[g]) * (-l); ++k) extra = extra * lin;
            }
            out.accumulate(maxm * l, block * extra);
        }
    }
    return out;
}

/// Grouped factorization: one output component per group of equal points,
/// each re-expanded around its group point; separations across groups must be
/// units.  A group of size m yields an m-point series at (c, ..., c).
inline std::vector<MultiPointSeries> mp_group_kappa(const MultiPointSeries &a,
                                                    const std::vector<int> &group_sizes) {
    std::vector<MultiPointSeries> out;
    size_t pos = 0;
    for (int g : group_sizes) {
        RingElem c = a.points()[pos];
        for (int k = 1; k < g; ++k)
            if (!(a.points()[pos + k] == c)) throw std::invalid_argument("group points must be equal");
        int K = g * (a.precision() + 1) - 1;
        NilLaurent local = mp_taylor_at(a, c, K);
        out.push_back(mp_diagonal_nu_inverse(local, c, g, a.precision()));
        pos += g;
    }
    if (pos != a.points().size()) throw std::invalid_argument("grouping does not cover the points");
    return out;
}

}  // namespace loopvert
