#pragma once

#include <loopvert/rational.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopvert {

/// Shape of a truncated nilpotent polynomial ring
/// R = Q[e1..em] / (e1^d1, ..., em^dm).  The orders d_i are all >= 2.
struct RingDescriptor {
    std::vector<int> orders;

    RingDescriptor() = default;
    explicit RingDescriptor(std::vector<int> ords) : orders(std::move(ords)) {
        for (int d : orders)
            if (d < 2) throw std::invalid_argument("nilpotency order must be >= 2");
    }

    int count() const { return static_cast<int>(orders.size()); }

    /// Any product of this many nilpotent elements of R vanishes.
    int radical_bound() const {
        int b = 1;
        for (int d : orders) b += d - 1;
        return b;
    }

    bool operator==(const RingDescriptor &o) const { return orders == o.orders; }
    bool operator!=(const RingDescriptor &o) const { return !(*this == o); }
};

/// Multi-index of exponents on the nilpotent generators.
using NilIndex = std::vector<int>;

/// Element of R: finite map multi-index -> nonzero rational, kept sorted so
/// equality is structural.
class RingElem {
public:
    RingElem() = default;
    explicit RingElem(RingDescriptor desc) : desc_(std::move(desc)) {}

    static RingElem constant(const RingDescriptor &desc, const Rational &c) {
        RingElem e(desc);
        if (c != 0) e.terms_[NilIndex(desc.count(), 0)] = c;
        return e;
    }

    static RingElem zero(const RingDescriptor &desc) { return RingElem(desc); }
    static RingElem one(const RingDescriptor &desc) { return constant(desc, 1); }

    /// The generator e_{k} (0-based k).
    static RingElem generator(const RingDescriptor &desc, int k) {
        if (k < 0 || k >= desc.count()) throw std::invalid_argument("no such nilpotent generator");
        RingElem e(desc);
        NilIndex ix(desc.count(), 0);
        ix[k] = 1;
        e.terms_[ix] = 1;
        return e;
    }

    static RingElem monomial(const RingDescriptor &desc, const NilIndex &ix, const Rational &c) {
        RingElem e(desc);
        e.add_term(ix, c);
        return e;
    }

    const RingDescriptor &descriptor() const { return desc_; }
    const std::map<NilIndex, Rational> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational constant_term() const {
        if (desc_.count() == 0) {
            return terms_.empty() ? Rational(0) : terms_.begin()->second;
        }
        auto it = terms_.find(NilIndex(desc_.count(), 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    bool is_constant() const {
        if (terms_.empty()) return true;
        return terms_.size() == 1 && terms_.begin()->first == NilIndex(desc_.count(), 0);
    }

    /// Adds c on the multi-index ix, truncating if any exponent exceeds its
    /// order bound.
    void add_term(const NilIndex &ix, const Rational &c) {
        if (static_cast<int>(ix.size()) != desc_.count())
            throw std::invalid_argument("multi-index arity mismatch");
        if (c == 0) return;
        for (int k = 0; k < desc_.count(); ++k) {
            if (ix[k] < 0) throw std::invalid_argument("negative exponent in multi-index");
            if (ix[k] >= desc_.orders[k]) return;  // e_k^{d_k} = 0
        }
        auto it = terms_.find(ix);
        if (it == terms_.end()) {
            terms_[ix] = c;
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend RingElem operator+(const RingElem &a, const RingElem &b) {
        check_same(a, b);
        RingElem r = a;
        for (const auto &[ix, c] : b.terms_) r.add_term(ix, c);
        return r;
    }

    friend RingElem operator-(const RingElem &a) {
        RingElem r(a.desc_);
        for (const auto &[ix, c] : a.terms_) r.terms_[ix] = -c;
        return r;
    }

    friend RingElem operator-(const RingElem &a, const RingElem &b) { return a + (-b); }

    friend RingElem operator*(const RingElem &a, const RingElem &b) {
        check_same(a, b);
        RingElem r(a.desc_);
        for (const auto &[ia, ca] : a.terms_) {
            for (const auto &[ib, cb] : b.terms_) {
                NilIndex ix(ia);
                for (size_t k = 0; k < ix.size(); ++k) ix[k] += ib[k];
                r.add_term(ix, ca * cb);
            }
        }
        return r;
    }

    friend RingElem operator*(const Rational &c, const RingElem &a) {
        RingElem r(a.desc_);
        if (c == 0) return r;
        for (const auto &[ix, v] : a.terms_) r.terms_[ix] = c * v;
        return r;
    }

    RingElem pow(int k) const {
        if (k < 0) throw std::invalid_argument("negative power of ring element");
        RingElem r = one(desc_);
        for (int j = 0; j < k; ++j) r = r * *this;
        return r;
    }

    bool operator==(const RingElem &o) const { return desc_ == o.desc_ && terms_ == o.terms_; }
    bool operator!=(const RingElem &o) const { return !(*this == o); }
    bool operator<(const RingElem &o) const { return terms_ < o.terms_; }

    /// Unit test: an element is invertible iff its constant term is nonzero.
    bool is_unit() const { return constant_term() != 0; }

    bool is_nilpotent() const { return constant_term() == 0; }

    /// Least k with a^k = 0, when the element is nilpotent; absent for units
    /// and for the zero ring only when the element is a unit there.
    std::optional<int> nilpotent_order() const {
        if (constant_term() != 0) return std::nullopt;
        RingElem p = one(desc_);
        for (int k = 1; k <= desc_.radical_bound(); ++k) {
            p = p * *this;
            if (p.is_zero()) return k;
        }
        throw std::logic_error("nilpotency bound exceeded");  // unreachable
    }

    /// Exact inverse of a unit: write a = c + n with c the rational constant
    /// term and n nilpotent, then a^{-1} = c^{-1} sum_k (-n/c)^k, a finite sum.
    RingElem invert() const {
        Rational c = constant_term();
        if (c == 0) throw std::domain_error("ring element is not a unit");
        RingElem n = *this - constant(desc_, c);
        Rational cinv = 1 / c;
        RingElem x = (-cinv) * n;  // -n/c
        RingElem acc = one(desc_);
        RingElem p = one(desc_);
        for (int k = 1; k < desc_.radical_bound(); ++k) {
            p = p * x;
            if (p.is_zero()) break;
            acc = acc + p;
        }
        return cinv * acc;
    }

private:
    static void check_same(const RingElem &a, const RingElem &b) {
        if (a.desc_ != b.desc_) throw std::invalid_argument("ring descriptor mismatch");
    }

    RingDescriptor desc_;
    std::map<NilIndex, Rational> terms_;
};

inline RingElem ring_add(const RingElem &a, const RingElem &b) { return a + b; }
inline RingElem ring_mul(const RingElem &a, const RingElem &b) { return a * b; }
inline RingElem ring_invert(const RingElem &a) { return a.invert(); }
inline std::optional<int> ring_nilpotent_order(const RingElem &a) { return a.nilpotent_order(); }

}  // namespace loopvert
