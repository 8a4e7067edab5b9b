#pragma once

#include <loopvert/cd_algebra.hpp>
#include <loopvert/nil_laurent.hpp>
#include <loopvert/nil_ring.hpp>

#include <random>

namespace loopvert::testutil {

using Rng = std::mt19937_64;

inline Rational random_rational(Rng &rng) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    return rat(num(rng), den(rng));
}

inline Rational random_nonzero_rational(Rng &rng) {
    Rational q = random_rational(rng);
    while (q == 0) q = random_rational(rng);
    return q;
}

inline RingElem random_ring_elem(Rng &rng, const RingDescriptor &desc, int max_terms = 4) {
    RingElem e(desc);
    std::uniform_int_distribution<int> nterms(0, max_terms);
    int n = nterms(rng);
    for (int k = 0; k < n; ++k) {
        NilIndex ix(desc.count(), 0);
        for (int j = 0; j < desc.count(); ++j) {
            std::uniform_int_distribution<int> ex(0, desc.orders[j] - 1);
            ix[j] = ex(rng);
        }
        e.add_term(ix, random_rational(rng));
    }
    return e;
}

inline RingElem random_nilpotent(Rng &rng, const RingDescriptor &desc, int max_terms = 3) {
    RingElem e = random_ring_elem(rng, desc, max_terms);
    return e - RingElem::constant(desc, e.constant_term());
}

inline RingElem random_unit(Rng &rng, const RingDescriptor &desc, int max_terms = 3) {
    return random_nilpotent(rng, desc, max_terms) +
           RingElem::constant(desc, random_nonzero_rational(rng));
}

inline NilLaurent random_nil_laurent(Rng &rng, const RingDescriptor &desc, int prec,
                                     int neg_depth = 2) {
    NilLaurent s(desc, prec);
    for (int i = -neg_depth; i <= prec; ++i) {
        std::uniform_int_distribution<int> keep(0, 2);
        if (keep(rng) == 0) continue;
        if (i < 0)
            s.add_coeff(i, random_nilpotent(rng, desc));
        else
            s.add_coeff(i, random_ring_elem(rng, desc));
    }
    return s;
}

/// Random combination of normal monomials of weight <= cap.
inline VacVector random_vac_state(Rng &rng, int dims, int cap, int nterms = 2) {
    auto basis = vac_basis(dims, cap);
    std::uniform_int_distribution<size_t> pick(0, basis.size() - 1);
    VacVector v;
    for (int k = 0; k < nterms; ++k)
        v = v + VacVector::monomial(basis[pick(rng)], random_nonzero_rational(rng));
    return v;
}

/// Random single normal monomial of weight <= cap (homogeneous parity).
inline VacVector random_vac_monomial(Rng &rng, int dims, int cap) {
    auto basis = vac_basis(dims, cap);
    std::uniform_int_distribution<size_t> pick(0, basis.size() - 1);
    return VacVector::monomial(basis[pick(rng)], random_nonzero_rational(rng));
}

}  // namespace loopvert::testutil
