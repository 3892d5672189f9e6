#pragma once

#include <random>
#include <vector>

#include "p1glue/glue.hpp"

namespace ts {

using namespace p1glue;

inline RingPtr q() { return Ring::rationals(); }
inline RingPtr f5() { return Ring::prime_field(5); }
inline RingPtr f7() { return Ring::prime_field(7); }
inline RingPtr z8() { return Ring::integers_mod(8); }
inline RingPtr z6() { return Ring::integers_mod(6); }
inline RingPtr f2e() { return Ring::dual(Ring::prime_field(2), 2); }

inline RingElement el(const RingPtr& r, long long v) { return RingElement::from_int(r, v); }

inline LaurentPoly poly(const RingPtr& r, int low, std::vector<long long> cs) {
    return LaurentPoly::from_ints(r, low, cs);
}

inline TruncatedSeries win(const RingPtr& r, int val, std::vector<long long> cs, int prec) {
    std::vector<RingElement> es;
    es.reserve(cs.size());
    for (auto c : cs) es.push_back(el(r, c));
    return TruncatedSeries::window(r, val, std::move(es), prec);
}

inline BFraction frac(const RingPtr& r, const LaurentPoly& num, const LaurentPoly& den) {
    return BFraction(num, den);
}

// Inversion-test fixture: (<=6 nilpotent low-degree terms) + unit-leading
// polynomial over a random admissible denominator. Always a unit of B.
inline BFraction random_b_unit(const RingPtr& ring, std::mt19937_64& rng) {
    const int j = static_cast<int>(rng() % 5) - 2;
    LaurentPoly num = LaurentPoly::monomial(random_unit(ring, rng), j);
    const int tail = static_cast<int>(rng() % 7);
    for (int t = 0; t < tail; ++t) {
        const int d = j - 1 - static_cast<int>(rng() % 6);
        num = num + LaurentPoly::monomial(random_nilpotent(ring, rng), d);
    }
    const int above = static_cast<int>(rng() % 6);
    for (int t = 0; t < above; ++t) {
        const int d = j + 1 + static_cast<int>(rng() % 6);
        num = num + LaurentPoly::monomial(random_element(ring, rng), d);
    }
    LaurentPoly den = LaurentPoly::constant(random_unit(ring, rng));
    const int dterms = static_cast<int>(rng() % 3);
    for (int t = 0; t < dterms; ++t)
        den = den + LaurentPoly::monomial(random_element(ring, rng), 1 + static_cast<int>(rng() % 3));
    return BFraction(num, den);
}

// All-nilpotent-coefficient Laurent polynomial (possibly zero).
inline LaurentPoly random_nil_poly(const RingPtr& ring, std::mt19937_64& rng) {
    LaurentPoly p(ring);
    const int terms = static_cast<int>(rng() % 6);
    for (int t = 0; t < terms; ++t)
        p = p + LaurentPoly::monomial(random_nilpotent(ring, rng),
                                      static_cast<int>(rng() % 9) - 4);
    return p;
}

// Small invertible Laurent-polynomial transition with modest degrees, kept
// friendly to the section/cohomology solvers.
inline MatPoly small_transition(const RingPtr& ring, int n, std::mt19937_64& rng) {
    MatPoly m(ring, n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = LaurentPoly::monomial(RingElement::one(ring),
                                           static_cast<int>(rng() % 5) - 2);
    for (int t = 0; t < 3; ++t) {
        if (n == 1) break;
        const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        int j = static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
        if (j >= i) ++j;
        MatPoly e = MatPoly::identity(ring, n);
        e.at(i, j) = LaurentPoly::monomial(random_element(ring, rng),
                                           static_cast<int>(rng() % 3) - 1);
        m = rng() % 2 ? m.mul(e) : e.mul(m);
    }
    return m;
}

// Unimodular over the w = 1/z chart (polynomials in w, constant determinant).
inline MatPoly random_w_unimodular(const RingPtr& ring, int n, std::mt19937_64& rng) {
    MatPoly m(ring, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = LaurentPoly::constant(random_unit(ring, rng));
    for (int t = 0; t < 3; ++t) {
        if (n == 1) break;
        const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        int j = static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
        if (j >= i) ++j;
        MatPoly e = MatPoly::identity(ring, n);
        e.at(i, j) = LaurentPoly::monomial(random_element(ring, rng),
                                           -static_cast<int>(rng() % 3));
        m = rng() % 2 ? m.mul(e) : e.mul(m);
    }
    return m;
}

// Unimodular over the z chart (polynomials in z, constant determinant).
inline MatPoly random_z_unimodular(const RingPtr& ring, int n, std::mt19937_64& rng) {
    MatPoly m(ring, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = LaurentPoly::constant(random_unit(ring, rng));
    for (int t = 0; t < 3; ++t) {
        if (n == 1) break;
        const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        int j = static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
        if (j >= i) ++j;
        MatPoly e = MatPoly::identity(ring, n);
        e.at(i, j) = LaurentPoly::monomial(random_element(ring, rng),
                                           static_cast<int>(rng() % 3));
        m = rng() % 2 ? m.mul(e) : e.mul(m);
    }
    return m;
}

}  // namespace ts
