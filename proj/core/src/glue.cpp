#include "p1glue/glue.hpp"

#include <algorithm>
#include <cstdlib>

namespace p1glue {

// ---------------------------------------------------------------------------
// triples

TransitionDatum TransitionDatum::certify(MatFraction g) {
    const BFraction det = g.det();
    auto cls = classify_series_unit(det.num());
    if (cls.kind != SeriesClass::Kind::unit)
        throw NotInvertibleError("transition matrix determinant is not a unit of B");
    BFraction det_inv = invert_in_b(det);
    return TransitionDatum(std::move(g), std::move(cls), std::move(det_inv));
}

BundleTriple bundle_from_matrix(const MatFraction& g) {
    return BundleTriple{TransitionDatum::certify(g), std::nullopt};
}

const MatFraction& transition_of_triple(const BundleTriple& t) {
    return t.transition.matrix();
}

BundleTriple formal_from_matrix(const MatSeries& gamma, int prec) {
    Factorization f = factorize(gamma, prec);
    return BundleTriple{TransitionDatum::certify(std::move(f.g)), std::move(f.delta)};
}

// ---------------------------------------------------------------------------
// field linear algebra (dense, exact); u64 fast path for prime fields

namespace {

using U64Rows = std::vector<std::vector<std::uint64_t>>;

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p) {
    // p prime, a != 0
    std::uint64_t r = 1, e = p - 2, base = a % p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, base, p);
        base = mulmod_u64(base, base, p);
        e >>= 1;
    }
    return r;
}

// Reduce rows in place mod p; returns pivot columns.
std::vector<int> rref_u64(U64Rows& rows, int cols, std::uint64_t p) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
        int sel = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(rows[static_cast<std::size_t>(r)], rows[static_cast<std::size_t>(sel)]);
        auto& prow = rows[static_cast<std::size_t>(r)];
        const std::uint64_t inv = invmod_u64(prow[static_cast<std::size_t>(c)], p);
        for (int j = c; j < cols; ++j)
            prow[static_cast<std::size_t>(j)] = mulmod_u64(prow[static_cast<std::size_t>(j)], inv, p);
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r) continue;
            auto& row = rows[static_cast<std::size_t>(i)];
            const std::uint64_t f = row[static_cast<std::size_t>(c)];
            if (f == 0) continue;
            for (int j = c; j < cols; ++j) {
                const auto sub = mulmod_u64(f, prow[static_cast<std::size_t>(j)], p);
                row[static_cast<std::size_t>(j)] =
                    (row[static_cast<std::size_t>(j)] + p - sub) % p;
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

using GenRows = std::vector<std::vector<RingElement>>;

std::vector<int> rref_generic(GenRows& rows, int cols) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
        int sel = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (!rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].is_zero()) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(rows[static_cast<std::size_t>(r)], rows[static_cast<std::size_t>(sel)]);
        auto& prow = rows[static_cast<std::size_t>(r)];
        const RingElement inv = *try_invert(prow[static_cast<std::size_t>(c)]);
        for (int j = c; j < cols; ++j)
            prow[static_cast<std::size_t>(j)] = prow[static_cast<std::size_t>(j)] * inv;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r) continue;
            auto& row = rows[static_cast<std::size_t>(i)];
            const RingElement f = row[static_cast<std::size_t>(c)];
            if (f.is_zero()) continue;
            for (int j = c; j < cols; ++j)
                row[static_cast<std::size_t>(j)] =
                    row[static_cast<std::size_t>(j)] - f * prow[static_cast<std::size_t>(j)];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Kernel basis of A x = 0 from the reduced form: one vector per free column.
// make(k, f, constant): constant entries 0/1 when constant, else minus the
// rref entry at (pivot row k, column f).
template <class Make>
std::vector<std::vector<RingElement>> kernel_from_rref(const std::vector<int>& pivots,
                                                       int cols, Make make) {
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
    for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<std::vector<RingElement>> basis;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) continue;
        std::vector<RingElement> v(static_cast<std::size_t>(cols));
        for (int c = 0; c < cols; ++c) v[static_cast<std::size_t>(c)] = make(0, c, true);
        v[static_cast<std::size_t>(f)] = make(1, f, true);
        for (std::size_t k = 0; k < pivots.size(); ++k)
            v[static_cast<std::size_t>(pivots[k])] = make(static_cast<int>(k), f, false);
        basis.push_back(std::move(v));
    }
    return basis;
}

struct FieldLin {
    RingPtr ring;
    bool fast;              // prime-field u64 path
    std::uint64_t p = 0;

    explicit FieldLin(RingPtr r) : ring(std::move(r)) {
        if (!ring->is_field())
            throw UnsupportedRingError("section and cohomology solvers need a field base, got " +
                                       ring->name());
        fast = ring->kind() == Ring::Kind::prime_field;
        if (fast) p = ring->modulus();
    }

    // rows are consumed
    std::vector<std::vector<RingElement>> kernel(GenRows rows, int cols) const {
        if (fast) {
            U64Rows u;
            u.reserve(rows.size());
            for (auto& row : rows) {
                std::vector<std::uint64_t> ur(static_cast<std::size_t>(cols));
                for (int c = 0; c < cols; ++c)
                    ur[static_cast<std::size_t>(c)] = row[static_cast<std::size_t>(c)].residue();
                u.push_back(std::move(ur));
            }
            const auto pivots = rref_u64(u, cols, p);
            return kernel_from_rref(pivots, cols, [&](int k, int f, bool constant) {
                if (constant)
                    return RingElement::from_residue(ring, static_cast<std::uint64_t>(k));
                const std::uint64_t x = u[static_cast<std::size_t>(k)][static_cast<std::size_t>(f)];
                return RingElement::from_residue(ring, x == 0 ? 0 : p - x);
            });
        }
        auto work = std::move(rows);
        const auto pivots = rref_generic(work, cols);
        return kernel_from_rref(pivots, cols, [&](int k, int f, bool constant) {
            if (constant) return RingElement::from_int(ring, k);
            return -work[static_cast<std::size_t>(k)][static_cast<std::size_t>(f)];
        });
    }

    int rank(GenRows rows, int cols) const {
        if (fast) {
            U64Rows u;
            u.reserve(rows.size());
            for (auto& row : rows) {
                std::vector<std::uint64_t> ur(static_cast<std::size_t>(cols));
                for (int c = 0; c < cols; ++c)
                    ur[static_cast<std::size_t>(c)] = row[static_cast<std::size_t>(c)].residue();
                u.push_back(std::move(ur));
            }
            return static_cast<int>(rref_u64(u, cols, p).size());
        }
        auto work = std::move(rows);
        return static_cast<int>(rref_generic(work, cols).size());
    }
};

// ---------------------------------------------------------------------------
// the two solvers share the cleared Laurent form of the transition

struct LaurentTransition {
    RingPtr ring;
    int n;
    std::vector<LaurentPoly> entries;  // row-major, already twisted by z^-m
    int reach;                         // reach of the untwisted matrix

    const LaurentPoly& at(int i, int j) const {
        return entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                       static_cast<std::size_t>(j)];
    }
};

LaurentTransition clear_transition(const TransitionDatum& g, int twist) {
    LaurentTransition t{g.ring(), g.rank(), {}, 0};
    for (int i = 0; i < t.n; ++i)
        for (int j = 0; j < t.n; ++j) {
            auto lp = g.matrix().at(i, j).to_laurent();
            if (!lp)
                throw UnsupportedTransitionError(
                    "entry (" + std::to_string(i) + "," + std::to_string(j) +
                    ") is not a Laurent polynomial (denominator not a power of z)");
            t.reach = std::max(t.reach, lp->degree_reach());
            t.entries.push_back(lp->shifted(-twist));
        }
    return t;
}

// Constraint rows "coefficient of z^e in row i of G * s vanishes for all
// e >= 1" over the variables s_{c,d}, d in [dlo, dhi].
GenRows positive_part_rows(const LaurentTransition& t, int dlo, int dhi) {
    const int vars = t.n * (dhi - dlo + 1);
    GenRows rows;
    for (int i = 0; i < t.n; ++i) {
        int emax = 0;
        for (int c = 0; c < t.n; ++c)
            if (auto hi = t.at(i, c).max_degree()) emax = std::max(emax, *hi + dhi);
        for (int e = 1; e <= emax; ++e) {
            std::vector<RingElement> row(static_cast<std::size_t>(vars),
                                         RingElement::zero(t.ring));
            bool nonzero = false;
            for (int c = 0; c < t.n; ++c) {
                const auto& gic = t.at(i, c);
                for (int d = dlo; d <= dhi; ++d) {
                    const RingElement coeff = gic.coeff(e - d);
                    if (coeff.is_zero()) continue;
                    row[static_cast<std::size_t>(c * (dhi - dlo + 1) + (d - dlo))] = coeff;
                    nonzero = true;
                }
            }
            if (nonzero) rows.push_back(std::move(row));
        }
    }
    return rows;
}

int sections_dim_at(const FieldLin& lin, const LaurentTransition& t, int dmax) {
    auto rows = positive_part_rows(t, 0, dmax);
    const int vars = t.n * (dmax + 1);
    return vars - lin.rank(std::move(rows), vars);
}

// Degree cap for the s-side of a section: by Cramer, s = adj(G) t / det(G)
// with t carrying only nonpositive z-degrees, so deg s never exceeds
// (n-1)*reach - val(det) <= (2n-1)*reach, plus the twist shift.
int sections_degree_cap(const LaurentTransition& t, int twist) {
    return std::abs(twist) + (2 * t.n - 1) * t.reach + 4;
}

// h^0 evaluated at the degree cap; the dimension is nondecreasing in the
// cutoff, so equality with the value two steps below certifies the plateau.
int stabilized_sections_dim(const FieldLin& lin, const LaurentTransition& t, int twist,
                            int* stable_dmax) {
    const int cap = sections_degree_cap(t, twist);
    const int below = sections_dim_at(lin, t, cap - 2);
    const int at = sections_dim_at(lin, t, cap);
    if (below != at)
        throw CapExceededError("section dimension still grows at the degree cap " +
                               std::to_string(cap));
    if (stable_dmax) *stable_dmax = cap;
    return at;
}

}  // namespace

SectionSpace global_sections(const TransitionDatum& g, int twist) {
    const FieldLin lin(g.ring());
    const LaurentTransition t = clear_transition(g, twist);
    int dmax = 0;
    SectionSpace out;
    out.twist = twist;
    out.dimension = stabilized_sections_dim(lin, t, twist, &dmax);
    if (out.dimension == 0) return out;

    auto basis = lin.kernel(positive_part_rows(t, 0, dmax), t.n * (dmax + 1));
    for (const auto& v : basis) {
        SectionPair pair;
        for (int c = 0; c < t.n; ++c) {
            std::vector<RingElement> cs(v.begin() + c * (dmax + 1),
                                        v.begin() + (c + 1) * (dmax + 1));
            pair.s.push_back(LaurentPoly::from_coeffs(t.ring, 0, cs));
        }
        for (int i = 0; i < t.n; ++i) {
            LaurentPoly ti(t.ring);
            for (int c = 0; c < t.n; ++c) ti = ti + t.at(i, c) * pair.s[static_cast<std::size_t>(c)];
            pair.t.push_back(std::move(ti));
        }
        out.basis.push_back(std::move(pair));
    }
    return out;
}

namespace {

// H^1 window model at half-width W: ambient Laurent vectors with degrees
// in [-W, W] modulo (z-polynomials) + (preimages of w-polynomials). The
// z-polynomial part spans exactly the coordinates with d >= 0, so
// h1 = n*W - rank(negative-degree coordinates of the kernel of the
// positive-part map).
int h1_dim_at(const FieldLin& lin, const LaurentTransition& t, int w) {
    auto kernel = lin.kernel(positive_part_rows(t, -w, w), t.n * (2 * w + 1));
    GenRows neg;
    neg.reserve(kernel.size());
    const int width = 2 * w + 1;
    for (const auto& v : kernel) {
        std::vector<RingElement> proj;
        proj.reserve(static_cast<std::size_t>(t.n * w));
        for (int c = 0; c < t.n; ++c)
            for (int d = 0; d < w; ++d)
                proj.push_back(v[static_cast<std::size_t>(c * width + d)]);
        neg.push_back(std::move(proj));
    }
    return t.n * w - lin.rank(std::move(neg), t.n * w);
}

}  // namespace

int cech_h1(const TransitionDatum& g, int twist) {
    const FieldLin lin(g.ring());
    const LaurentTransition t = clear_transition(g, twist);
    const int cap = sections_degree_cap(t, twist);
    const int below = h1_dim_at(lin, t, cap - 2);
    const int at = h1_dim_at(lin, t, cap);
    if (below != at)
        throw CapExceededError("H^1 dimension still moves at window half-width " +
                               std::to_string(cap));
    return at;
}

std::vector<int> splitting_type(const TransitionDatum& g) {
    const FieldLin lin(g.ring());
    const LaurentTransition base = clear_transition(g, 0);
    const int cap = 2 * base.n * base.reach + 4;

    auto h0 = [&](int m) {
        const LaurentTransition t = clear_transition(g, m);
        return stabilized_sections_dim(lin, t, m, nullptr);
    };

    if (h0(-cap) != 0)
        throw CapExceededError("splitting jumps lie below the sweep cap " +
                               std::to_string(cap));
    int h_prev = 0;
    int delta_prev = 0;
    std::vector<int> type;
    for (int m = -cap + 1; m <= cap; ++m) {
        const int h = h0(m);
        const int delta = h - h_prev;  // #{i : d_i >= -m}
        for (int r = 0; r < delta - delta_prev; ++r) type.push_back(-m);
        if (delta == base.n) {
            std::sort(type.begin(), type.end(), std::greater<int>());
            return type;
        }
        h_prev = h;
        delta_prev = delta;
    }
    throw CapExceededError("h^0 profile sweep exhausted the cap " + std::to_string(cap));
}

}  // namespace p1glue
