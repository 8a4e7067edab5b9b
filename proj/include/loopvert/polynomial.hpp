#pragma once

#include <loopvert/rational.hpp>

#include <map>
#include <stdexcept>
#include <vector>

namespace loopvert {

/// Sparse multivariate polynomial over Q.  Exponent vectors all have length
/// nvars; zero coefficients are never stored.
class QPolynomial {
public:
    QPolynomial() = default;
    explicit QPolynomial(int nvars) : nvars_(nvars) {}

    static QPolynomial constant(int nvars, const Rational &c) {
        QPolynomial p(nvars);
        if (c != 0) p.terms_[std::vector<int>(nvars, 0)] = c;
        return p;
    }

    static QPolynomial variable(int nvars, int k) {
        if (k < 0 || k >= nvars) throw std::invalid_argument("variable index out of range");
        QPolynomial p(nvars);
        std::vector<int> e(nvars, 0);
        e[k] = 1;
        p.terms_[e] = 1;
        return p;
    }

    int nvars() const { return nvars_; }
    const std::map<std::vector<int>, Rational> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const std::vector<int> &expo, const Rational &c) {
        if (static_cast<int>(expo.size()) != nvars_)
            throw std::invalid_argument("exponent arity mismatch");
        if (c == 0) return;
        auto it = terms_.find(expo);
        if (it == terms_.end()) {
            terms_[expo] = c;
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend QPolynomial operator+(const QPolynomial &a, const QPolynomial &b) {
        check(a, b);
        QPolynomial r = a;
        for (const auto &[e, c] : b.terms_) r.add_term(e, c);
        return r;
    }

    friend QPolynomial operator-(const QPolynomial &a) {
        QPolynomial r(a.nvars_);
        for (const auto &[e, c] : a.terms_) r.terms_[e] = -c;
        return r;
    }

    friend QPolynomial operator-(const QPolynomial &a, const QPolynomial &b) { return a + (-b); }

    friend QPolynomial operator*(const QPolynomial &a, const QPolynomial &b) {
        check(a, b);
        QPolynomial r(a.nvars_);
        for (const auto &[ea, ca] : a.terms_)
            for (const auto &[eb, cb] : b.terms_) {
                std::vector<int> e = ea;
                for (int k = 0; k < a.nvars_; ++k) e[k] += eb[k];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    friend QPolynomial operator*(const Rational &c, const QPolynomial &a) {
        QPolynomial r(a.nvars_);
        if (c == 0) return r;
        for (const auto &[e, v] : a.terms_) r.terms_[e] = c * v;
        return r;
    }

    bool operator==(const QPolynomial &o) const { return terms_ == o.terms_; }
    bool operator!=(const QPolynomial &o) const { return !(*this == o); }

    QPolynomial derivative(int k) const {
        QPolynomial r(nvars_);
        for (const auto &[e, c] : terms_) {
            if (e[k] == 0) continue;
            std::vector<int> d = e;
            d[k] -= 1;
            r.add_term(d, c * rat(e[k]));
        }
        return r;
    }

    int total_degree() const {
        int deg = -1;
        for (const auto &[e, c] : terms_) {
            int s = 0;
            for (int x : e) s += x;
            deg = std::max(deg, s);
        }
        return deg;
    }

    /// Evaluation in any commutative Q-algebra: T needs +, * and an embedding
    /// of Rational supplied by the caller.
    template <class T, class Embed>
    T eval(const std::vector<T> &values, Embed embed) const {
        if (static_cast<int>(values.size()) != nvars_)
            throw std::invalid_argument("evaluation arity mismatch");
        T acc = embed(Rational(0));
        for (const auto &[e, c] : terms_) {
            T term = embed(c);
            for (int k = 0; k < nvars_; ++k)
                for (int j = 0; j < e[k]; ++j) term = term * values[k];
            acc = acc + term;
        }
        return acc;
    }

private:
    static void check(const QPolynomial &a, const QPolynomial &b) {
        if (a.nvars_ != b.nvars_) throw std::invalid_argument("variable count mismatch");
    }

    int nvars_ = 0;
    std::map<std::vector<int>, Rational> terms_;
};

}  // namespace loopvert
