#include "p1glue/matfact.hpp"

#include <algorithm>

namespace p1glue {

// ---------------------------------------------------------------------------
// conversions and helpers

MatSeries to_series(const MatPoly& m) {
    MatSeries out(m.ring(), m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            out.at(i, j) = TruncatedSeries::exact(m.at(i, j));
    return out;
}

MatFraction to_fractions(const MatPoly& m) {
    MatFraction out(m.ring(), m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) out.at(i, j) = BFraction::from_poly(m.at(i, j));
    return out;
}

MatSeries expand(const MatFraction& m, int prec) {
    MatSeries out(m.ring(), m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) out.at(i, j) = m.at(i, j).expand(prec);
    return out;
}

MatSeries truncated(const MatSeries& m, int prec) {
    MatSeries out(m.ring(), m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) out.at(i, j) = m.at(i, j).truncated(prec);
    return out;
}

bool agrees_on_window(const MatSeries& a, const MatSeries& b) {
    if (a.size() != b.size()) return false;
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j)
            if (!a.at(i, j).agrees_with(b.at(i, j))) return false;
    return true;
}

int degree_reach(const MatPoly& m) {
    int reach = 0;
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            reach = std::max(reach, m.at(i, j).degree_reach());
    return reach;
}

int min_val_floor(const MatSeries& m) {
    int v = 0;
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) v = std::min(v, m.at(i, j).val_floor());
    return v;
}

// ---------------------------------------------------------------------------
// membership in GL_n(R[[z]])

namespace {

Membership yes() {
    Membership m;
    m.kind = Membership::Kind::yes;
    return m;
}

Membership no_at(int degree, int i, int j) {
    Membership m;
    m.kind = Membership::Kind::no;
    m.witness_degree = degree;
    m.entry = {i, j};
    m.reason = "entry (" + std::to_string(i) + "," + std::to_string(j) +
               ") has a nonzero coefficient at degree " + std::to_string(degree);
    return m;
}

Membership no_det(const std::string& what) {
    Membership m;
    m.kind = Membership::Kind::no;
    m.reason = "determinant constant term is " + what;
    return m;
}

Membership undecidable(const std::string& why) {
    Membership m;
    m.kind = Membership::Kind::undecidable;
    m.reason = why;
    return m;
}

}  // namespace

Membership membership_gl_power_series(const MatSeries& m) {
    bool window_gap = false;
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) {
            const auto& e = m.at(i, j);
            if (!e.window_coeffs().empty() && e.val_floor() < 0)
                return no_at(e.val_floor(), i, j);
            if (e.prec() && *e.prec() < 0) window_gap = true;
        }
    const TruncatedSeries d = m.det();
    if (!d.knows(0))
        return undecidable("determinant constant term lies beyond the known window");
    if (d.val_floor() > 0 || (!d.is_exact() && d.window_coeffs().empty()))
        return no_det("zero, not a unit");
    const auto c = classify_element(d.coeff(0));
    if (c.kind != ElementClass::Kind::unit) return no_det("not a unit");
    if (window_gap)
        return undecidable("an entry window cannot exclude negative-degree coefficients");
    return yes();
}

Membership membership_gl_power_series(const MatPoly& m) {
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) {
            const auto& e = m.at(i, j);
            if (auto lo = e.min_degree(); lo && *lo < 0) return no_at(*lo, i, j);
        }
    const auto c = classify_element(m.det().coeff(0));
    if (c.kind != ElementClass::Kind::unit) return no_det("not a unit");
    return yes();
}

Membership membership_gl_power_series(const MatFraction& m) {
    // den is a power-series unit, so num/den lies in R[[z]] iff num does
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) {
            const auto& e = m.at(i, j);
            if (auto lo = e.num().min_degree(); lo && *lo < 0) return no_at(*lo, i, j);
        }
    const BFraction d = m.det();
    const auto inv_den0 = try_invert(d.den().coeff(0));
    const auto c = classify_element(d.num().coeff(0) * *inv_den0);
    if (c.kind != ElementClass::Kind::unit) return no_det("not a unit");
    return yes();
}

// ---------------------------------------------------------------------------
// factorization gamma = g * delta

Factorization factorize(const MatSeries& gamma, int prec) {
    const auto& ring = gamma.ring();
    const int n = gamma.size();

    int t_max = prec;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (auto p = gamma.at(i, j).prec()) t_max = std::min(t_max, *p);

    {
        const auto dcls = classify_series_unit(gamma.det());
        if (dcls.kind == SeriesClass::Kind::not_unit)
            throw NotInvertibleError("det(gamma) is certified not a unit of R((z))");
    }

    const int t_min = std::max(min_val_floor(gamma) + 1, 1);
    std::string last_failure = "empty truncation range";
    for (int trunc = t_min; trunc <= t_max; ++trunc) {
        MatPoly g_t(ring, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                g_t.at(i, j) = gamma.at(i, j).known_poly_below(trunc);

        const LaurentPoly det_g = g_t.det();
        auto det_cls = classify_series_unit(det_g);
        if (det_cls.kind != SeriesClass::Kind::unit) {
            last_failure = "det(g_T) not certified a unit at T=" + std::to_string(trunc);
            continue;
        }
        const BFraction det_inv = invert_in_b(det_g);
        const MatSeries cleared = to_series(g_t.adjugate()).mul(gamma);

        // expand det_inv far enough that the scalar product keeps every
        // entry's achievable precision
        const int val_inv = det_inv.num().is_zero() ? 0 : *det_inv.num().min_degree();
        int expand_prec = 1;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const auto& e = cleared.at(i, j);
                if (e.is_zero()) continue;
                const int want = e.prec() ? *e.prec() - e.val_floor() + val_inv
                                          : prec - e.val_floor();
                expand_prec = std::max(expand_prec, want);
            }
        const TruncatedSeries inv_series = det_inv.expand(expand_prec);
        const MatSeries delta = cleared.scaled(inv_series);

        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j) {
                const auto& e = delta.at(i, j);
                if (!e.window_coeffs().empty() && e.val_floor() < 0) {
                    last_failure = "delta entry (" + std::to_string(i) + "," +
                                   std::to_string(j) + ") has degree " +
                                   std::to_string(e.val_floor()) + " at T=" +
                                   std::to_string(trunc);
                    ok = false;
                }
                if (e.prec() && *e.prec() < 0) {
                    last_failure = "delta window cannot exclude negative degrees at T=" +
                                   std::to_string(trunc);
                    ok = false;
                }
            }
        if (!ok) continue;

        const TruncatedSeries det_delta = delta.det();
        if (!det_delta.knows(0)) {
            last_failure = "det(delta) constant term beyond the window at T=" +
                           std::to_string(trunc);
            continue;
        }
        const auto c0 = classify_element(det_delta.coeff(0));
        if (c0.kind != ElementClass::Kind::unit) {
            last_failure = "det(delta)(0) is not a unit at T=" + std::to_string(trunc);
            continue;
        }

        std::optional<int> achieved;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (auto p = delta.at(i, j).prec())
                    achieved = achieved ? std::min(*achieved, *p) : *p;
        Factorization out{to_fractions(g_t), delta,     trunc,
                          achieved,          std::move(det_cls), *c0.inverse};
        return out;
    }
    throw PrecisionExhaustedError("no truncation order up to " + std::to_string(t_max) +
                                  " certified a factorization; last failure: " + last_failure);
}

// ---------------------------------------------------------------------------
// Cartan type over a field

namespace {

int fraction_valuation(const BFraction& f) { return *f.num().min_degree(); }

// a / pivot with val(a) >= val(pivot); stays over k[z]_(z)
BFraction div_by_pivot(const BFraction& a, const BFraction& pivot) {
    const int v = fraction_valuation(pivot);
    const LaurentPoly pnum = pivot.num().shifted(-v);  // unit constant term
    return BFraction(a.num().shifted(-v) * pivot.den(), a.den() * pnum);
}

}  // namespace

std::vector<int> cartan_type(const MatPoly& m) {
    if (!m.ring()->is_field())
        throw UnsupportedRingError("cartan_type needs a field base, got " + m.ring()->name());
    if (m.det().is_zero()) throw SingularMatrixError();

    const int n = m.size();
    std::vector<std::vector<BFraction>> w;
    for (int i = 0; i < n; ++i) {
        std::vector<BFraction> row;
        for (int j = 0; j < n; ++j) row.push_back(BFraction::from_poly(m.at(i, j)));
        w.push_back(std::move(row));
    }

    std::vector<int> exponents;
    for (int step = 0; step < n; ++step) {
        int bi = -1, bj = -1, bv = 0;
        for (int i = step; i < n; ++i)
            for (int j = step; j < n; ++j) {
                if (w[i][j].is_zero()) continue;
                const int v = fraction_valuation(w[i][j]);
                if (bi < 0 || v < bv) {
                    bi = i;
                    bj = j;
                    bv = v;
                }
            }
        if (bi < 0) throw SingularMatrixError("reduction reached a zero block");
        std::swap(w[step], w[bi]);
        for (int i = step; i < n; ++i) std::swap(w[i][step], w[i][bj]);

        const BFraction pivot = w[step][step];
        exponents.push_back(bv);
        for (int i = step + 1; i < n; ++i) {
            if (w[i][step].is_zero()) continue;
            const BFraction mult = div_by_pivot(w[i][step], pivot);
            for (int j = step; j < n; ++j) w[i][j] = w[i][j] - mult * w[step][j];
        }
        // column clearing only touches the pivot row once the column is clear
        for (int j = step + 1; j < n; ++j) w[step][j] = BFraction::zero(m.ring());
    }
    std::sort(exponents.begin(), exponents.end(), std::greater<int>());
    return exponents;
}

// ---------------------------------------------------------------------------
// coset equality

namespace {

CosetResult from_membership(Membership mem) {
    CosetResult out;
    switch (mem.kind) {
        case Membership::Kind::yes:
            out.kind = CosetResult::Kind::equal;
            break;
        case Membership::Kind::no:
            out.kind = CosetResult::Kind::not_equal;
            break;
        case Membership::Kind::undecidable:
            out.kind = CosetResult::Kind::undecidable;
            break;
    }
    out.detail = std::move(mem);
    return out;
}

}  // namespace

CosetResult coset_equal(const MatPoly& gamma1, const MatPoly& gamma2) {
    if (gamma1.size() != gamma2.size())
        throw ParseError("coset comparison of matrices of different rank");
    const LaurentPoly d1 = gamma1.det();
    if (classify_series_unit(d1).kind != SeriesClass::Kind::unit)
        throw NotInvertibleError("gamma1 is not certified invertible over R((z))");
    if (classify_series_unit(gamma2.det()).kind != SeriesClass::Kind::unit)
        throw NotInvertibleError("gamma2 is not certified invertible over R((z))");
    const MatFraction x =
        to_fractions(gamma1.adjugate().mul(gamma2)).scaled(invert_in_b(d1));
    return from_membership(membership_gl_power_series(x));
}

CosetResult coset_equal(const MatFraction& gamma1, const MatFraction& gamma2) {
    if (gamma1.size() != gamma2.size())
        throw ParseError("coset comparison of matrices of different rank");
    const BFraction d1 = gamma1.det();
    if (classify_series_unit(d1.num()).kind != SeriesClass::Kind::unit)
        throw NotInvertibleError("gamma1 is not certified invertible over R((z))");
    if (classify_series_unit(gamma2.det().num()).kind != SeriesClass::Kind::unit)
        throw NotInvertibleError("gamma2 is not certified invertible over R((z))");
    const MatFraction x = gamma1.adjugate().mul(gamma2).scaled(invert_in_b(d1));
    return from_membership(membership_gl_power_series(x));
}

CosetResult coset_equal(const MatSeries& gamma1, const MatSeries& gamma2, int prec) {
    if (gamma1.size() != gamma2.size())
        throw ParseError("coset comparison of matrices of different rank");
    const TruncatedSeries d1 = gamma1.det();
    const auto c1 = classify_series_unit(d1);
    if (c1.kind == SeriesClass::Kind::not_unit)
        throw NotInvertibleError("gamma1 is certified not invertible over R((z))");
    const auto c2 = classify_series_unit(gamma2.det());
    if (c2.kind == SeriesClass::Kind::not_unit)
        throw NotInvertibleError("gamma2 is certified not invertible over R((z))");
    if (c1.kind == SeriesClass::Kind::undecidable ||
        c2.kind == SeriesClass::Kind::undecidable) {
        CosetResult out;
        out.kind = CosetResult::Kind::undecidable;
        out.detail = undecidable("a determinant window reveals no unit coefficient");
        return out;
    }
    TruncatedSeries inv1(gamma1.ring());
    try {
        inv1 = invert_series(d1, prec);
    } catch (const UndecidableError& e) {
        CosetResult out;
        out.kind = CosetResult::Kind::undecidable;
        out.detail = undecidable(e.what());
        return out;
    }
    const MatSeries x = gamma1.adjugate().mul(gamma2).scaled(inv1);
    return from_membership(membership_gl_power_series(x));
}

// ---------------------------------------------------------------------------
// seeded generators

namespace {

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t k) { return rng() % k; }

LaurentPoly random_poly(const RingPtr& ring, std::mt19937_64& rng, int lo, int hi,
                        int max_terms) {
    LaurentPoly p(ring);
    const int terms = 1 + static_cast<int>(pick(rng, static_cast<std::uint64_t>(max_terms)));
    for (int t = 0; t < terms; ++t) {
        const int d = lo + static_cast<int>(pick(rng, static_cast<std::uint64_t>(hi - lo + 1)));
        p = p + LaurentPoly::monomial(random_element(ring, rng), d);
    }
    return p;
}

MatPoly elementary(const RingPtr& ring, int n, int i, int j, const LaurentPoly& p) {
    MatPoly e = MatPoly::identity(ring, n);
    e.at(i, j) = e.at(i, j) + p;
    return e;
}

MatPoly random_power_series_unit_impl(const RingPtr& ring, int n, std::mt19937_64& rng) {
    MatPoly m(ring, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = LaurentPoly::constant(random_unit(ring, rng));
    const int ops = 3 + static_cast<int>(pick(rng, 4));
    for (int t = 0; t < ops; ++t) {
        if (n > 1 && pick(rng, 3) != 0) {
            const int i = static_cast<int>(pick(rng, static_cast<std::uint64_t>(n)));
            int j = static_cast<int>(pick(rng, static_cast<std::uint64_t>(n - 1)));
            if (j >= i) ++j;
            const MatPoly e = elementary(ring, n, i, j, random_poly(ring, rng, 0, 3, 3));
            m = pick(rng, 2) ? m.mul(e) : e.mul(m);
        } else {
            // unipotent diagonal factor 1 + z * q keeps the constant term a unit
            MatPoly d = MatPoly::identity(ring, n);
            const int i = static_cast<int>(pick(rng, static_cast<std::uint64_t>(n)));
            d.at(i, i) = d.at(i, i) + random_poly(ring, rng, 1, 3, 2);
            m = m.mul(d);
        }
    }
    return m;
}

MatPoly random_b_matrix_impl(const RingPtr& ring, int n, std::mt19937_64& rng) {
    MatPoly m(ring, n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = LaurentPoly::monomial(RingElement::one(ring),
                                           static_cast<int>(pick(rng, 5)) - 2);
    const int ops = 4 + static_cast<int>(pick(rng, 5));
    for (int t = 0; t < ops; ++t) {
        switch (pick(rng, 4)) {
            case 0: {  // z-shift diagonal
                MatPoly d(ring, n);
                for (int i = 0; i < n; ++i)
                    d.at(i, i) = LaurentPoly::monomial(RingElement::one(ring),
                                                       static_cast<int>(pick(rng, 5)) - 2);
                m = pick(rng, 2) ? m.mul(d) : d.mul(m);
                break;
            }
            case 1: {  // unit-constant diagonal
                MatPoly d(ring, n);
                for (int i = 0; i < n; ++i)
                    d.at(i, i) = LaurentPoly::constant(random_unit(ring, rng));
                m = m.mul(d);
                break;
            }
            case 2: {  // unit-plus-nilpotent diagonal, still invertible in B
                MatPoly d(ring, n);
                for (int i = 0; i < n; ++i) {
                    LaurentPoly e = LaurentPoly::constant(random_unit(ring, rng));
                    const auto nil = random_nilpotent(ring, rng);
                    if (!nil.is_zero())
                        e = e + LaurentPoly::monomial(nil, static_cast<int>(pick(rng, 5)) - 2);
                    d.at(i, i) = e;
                }
                m = m.mul(d);
                break;
            }
            default: {  // elementary with a Laurent-polynomial entry
                if (n == 1) break;
                const int i = static_cast<int>(pick(rng, static_cast<std::uint64_t>(n)));
                int j = static_cast<int>(pick(rng, static_cast<std::uint64_t>(n - 1)));
                if (j >= i) ++j;
                const MatPoly e = elementary(ring, n, i, j, random_poly(ring, rng, -2, 2, 3));
                m = pick(rng, 2) ? m.mul(e) : e.mul(m);
                break;
            }
        }
    }
    return m;
}

}  // namespace

MatPoly random_power_series_unit(const RingPtr& ring, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_power_series_unit_impl(ring, n, rng);
}

MatPoly random_b_matrix(const RingPtr& ring, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_b_matrix_impl(ring, n, rng);
}

FactorSample random_product(const RingPtr& ring, int n, int prec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    FactorSample out{MatSeries(ring, n), MatPoly(ring, n), MatPoly(ring, n)};
    out.g0 = random_b_matrix_impl(ring, n, rng);
    out.delta0 = random_power_series_unit_impl(ring, n, rng);
    out.gamma = truncated(to_series(out.g0.mul(out.delta0)), prec);
    return out;
}

}  // namespace p1glue
