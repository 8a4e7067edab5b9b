#pragma once

#include <loopvert/nil_ring.hpp>

#include <map>
#include <stdexcept>

namespace loopvert {

/// Finite-window Laurent series a(t) = sum a_i t^i over a truncated nilpotent
/// ring, known modulo t^{prec+1}.  Every coefficient in negative degree must
/// be nilpotent; that condition is what keeps the negative support finite and
/// the ring closed under multiplication.
class NilLaurent {
public:
    NilLaurent() = default;
    NilLaurent(RingDescriptor desc, int prec) : desc_(std::move(desc)), prec_(prec) {
        if (prec < 0) throw std::invalid_argument("precision must be >= 0");
    }

    static NilLaurent constant(const RingDescriptor &desc, int prec, const RingElem &c) {
        NilLaurent s(desc, prec);
        s.set_coeff(0, c);
        return s;
    }

    static NilLaurent one(const RingDescriptor &desc, int prec) {
        return constant(desc, prec, RingElem::one(desc));
    }

    static NilLaurent t_power(const RingDescriptor &desc, int prec, int k) {
        NilLaurent s(desc, prec);
        s.set_coeff(k, RingElem::one(desc));
        return s;
    }

    const RingDescriptor &descriptor() const { return desc_; }
    int precision() const { return prec_; }
    const std::map<int, RingElem> &coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    RingElem coeff(int i) const {
        auto it = coeffs_.find(i);
        return it == coeffs_.end() ? RingElem::zero(desc_) : it->second;
    }

    int low_exponent() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }

    /// Stores a coefficient.  Exponents beyond the precision window are
    /// dropped; a non-nilpotent coefficient in negative degree is an error.
    void set_coeff(int i, const RingElem &c) {
        if (c.descriptor() != desc_) throw std::invalid_argument("ring descriptor mismatch");
        if (i > prec_) return;
        if (c.is_zero()) {
            coeffs_.erase(i);
            return;
        }
        if (i < 0 && !c.is_nilpotent())
            throw std::invalid_argument("negative coefficient of a nil-Laurent series must be nilpotent");
        coeffs_[i] = c;
    }

    void add_coeff(int i, const RingElem &c) { set_coeff(i, coeff(i) + c); }

    NilLaurent truncated(int prec) const {
        NilLaurent r(desc_, prec);
        for (const auto &[i, c] : coeffs_)
            if (i <= prec) r.coeffs_[i] = c;
        return r;
    }

    /// Same coefficients reinterpreted at a higher precision; the stored
    /// window is treated as the exact representative.
    NilLaurent with_precision(int prec) const {
        NilLaurent r(desc_, prec);
        for (const auto &[i, c] : coeffs_)
            if (i <= prec) r.coeffs_[i] = c;
        return r;
    }

    friend NilLaurent operator+(const NilLaurent &a, const NilLaurent &b) {
        check_same(a, b);
        NilLaurent r(a.desc_, std::min(a.prec_, b.prec_));
        for (const auto &[i, c] : a.coeffs_)
            if (i <= r.prec_) r.coeffs_[i] = c;
        for (const auto &[i, c] : b.coeffs_)
            if (i <= r.prec_) r.add_coeff(i, c);
        return r;
    }

    friend NilLaurent operator-(const NilLaurent &a) {
        NilLaurent r(a.desc_, a.prec_);
        for (const auto &[i, c] : a.coeffs_) r.coeffs_[i] = -c;
        return r;
    }

    friend NilLaurent operator-(const NilLaurent &a, const NilLaurent &b) { return a + (-b); }

    friend NilLaurent operator*(const NilLaurent &a, const NilLaurent &b) {
        check_same(a, b);
        NilLaurent r(a.desc_, std::min(a.prec_, b.prec_));
        for (const auto &[i, ca] : a.coeffs_) {
            for (const auto &[j, cb] : b.coeffs_) {
                if (i + j > r.prec_) continue;
                r.add_coeff(i + j, ca * cb);
            }
        }
        return r;
    }

    friend NilLaurent operator*(const RingElem &c, const NilLaurent &a) {
        NilLaurent r(a.desc_, a.prec_);
        for (const auto &[i, v] : a.coeffs_) r.set_coeff(i, c * v);
        return r;
    }

    NilLaurent pow(int k) const {
        if (k < 0) throw std::invalid_argument("negative power");
        NilLaurent r = one(desc_, prec_);
        for (int j = 0; j < k; ++j) r = r * *this;
        return r;
    }

    /// Structural equality (same precision and coefficients).
    bool operator==(const NilLaurent &o) const {
        return desc_ == o.desc_ && prec_ == o.prec_ && coeffs_ == o.coeffs_;
    }
    bool operator!=(const NilLaurent &o) const { return !(*this == o); }

private:
    static void check_same(const NilLaurent &a, const NilLaurent &b) {
        if (a.desc_ != b.desc_) throw std::invalid_argument("ring descriptor mismatch");
    }

    RingDescriptor desc_;
    int prec_ = 0;
    std::map<int, RingElem> coeffs_;
};

inline NilLaurent nl_add(const NilLaurent &a, const NilLaurent &b) { return a + b; }
inline NilLaurent nl_mul(const NilLaurent &a, const NilLaurent &b) { return a * b; }

/// Equality modulo t^{min(prec)+1}.
inline bool nl_equal_mod_prec(const NilLaurent &a, const NilLaurent &b) {
    int p = std::min(a.precision(), b.precision());
    return a.truncated(p).coeffs() == b.truncated(p).coeffs();
}

/// The projection to the reduced ring: drops every nilpotent multi-index term
/// of every coefficient.  The image of a nil-Laurent series has no negative
/// exponents.
inline NilLaurent nl_reduce_red(const NilLaurent &a) {
    NilLaurent r(a.descriptor(), a.precision());
    for (const auto &[i, c] : a.coeffs()) {
        if (i < 0) continue;  // nilpotent by the defining condition
        RingElem red = RingElem::constant(a.descriptor(), c.constant_term());
        r.set_coeff(i, red);
    }
    return r;
}

/// Invertibility criterion: a is a unit iff the coefficient a_0 is a unit of
/// the coefficient ring.
inline bool nl_is_invertible(const NilLaurent &a) { return a.coeff(0).is_unit(); }

/// Exact inverse.  First inverts the non-negative part as an ordinary power
/// series (possible since a_0 is a unit), giving a * b0 = 1 + c with every
/// coefficient of c nilpotent; then multiplies by the terminating geometric
/// series sum (-c)^k, which stops once k reaches the radical bound.
///
/// The stored window is treated as the exact representative.  Because the
/// negative (nilpotent) part of a pulls high-degree terms back down, the
/// result is computed with guard precision and returned at prec + depth,
/// where depth is the pole depth of a; then a * nl_invert(a) == 1 holds
/// exactly modulo t^{prec+1}.
inline NilLaurent nl_invert(const NilLaurent &a) {
    if (!nl_is_invertible(a)) throw std::domain_error("nil-Laurent series is not invertible");
    const RingDescriptor &desc = a.descriptor();
    int depth = std::max(0, -a.low_exponent());
    int bound = desc.radical_bound();
    int out_prec = a.precision() + depth;
    int work = a.precision() + depth * (bound + 1);

    NilLaurent ax = a.with_precision(work);

    NilLaurent b0(desc, work);
    RingElem a0inv = ax.coeff(0).invert();
    b0.set_coeff(0, a0inv);
    for (int k = 1; k <= work; ++k) {
        RingElem s = RingElem::zero(desc);
        for (int j = 1; j <= k; ++j) s = s + ax.coeff(j) * b0.coeff(k - j);
        b0.set_coeff(k, -(a0inv * s));
    }

    NilLaurent c = ax * b0 - NilLaurent::one(desc, work);
    NilLaurent acc = NilLaurent::one(desc, work);
    NilLaurent p = NilLaurent::one(desc, work);
    for (int k = 1; k < bound; ++k) {
        p = p * (-c);
        if (p.is_zero()) break;
        acc = acc + p;
    }
    return (b0 * acc).truncated(out_prec);
}

}  // namespace loopvert
