#pragma once

#include <map>
#include <optional>
#include <vector>

#include "p1glue/ring.hpp"

namespace p1glue {

/// Exact Laurent polynomial over a Ring, stored as a sparse map
/// degree -> coefficient with no zero entries.
class LaurentPoly {
   public:
    LaurentPoly() = default;  // detached null value; only aggregates use it
    explicit LaurentPoly(RingPtr ring) : ring_(std::move(ring)) {}

    static LaurentPoly zero(const RingPtr& ring) { return LaurentPoly(ring); }
    static LaurentPoly one(const RingPtr& ring);
    static LaurentPoly monomial(const RingElement& c, int degree);
    static LaurentPoly constant(const RingElement& c) { return monomial(c, 0); }
    /// Dense window constructor: coefficient of z^(low+i) is coeffs[i].
    static LaurentPoly from_coeffs(const RingPtr& ring, int low,
                                   const std::vector<RingElement>& coeffs);
    static LaurentPoly from_ints(const RingPtr& ring, int low,
                                 const std::vector<long long>& coeffs);

    const RingPtr& ring() const noexcept { return ring_; }
    const std::map<int, RingElement>& coeffs() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool is_one() const;
    RingElement coeff(int degree) const;
    std::optional<int> min_degree() const;
    std::optional<int> max_degree() const;
    /// Degree span bound: max(maxdeg, -mindeg, 0), 0 for the zero polynomial.
    int degree_reach() const;

    LaurentPoly shifted(int k) const;  // multiply by z^k
    /// Keep only the monomials of degree < bound.
    LaurentPoly truncated_below(int bound) const;
    /// Keep only the monomials of degree >= bound.
    LaurentPoly truncated_from(int bound) const;
    LaurentPoly pow(int e) const;  // e >= 0

    LaurentPoly operator-() const;
    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    LaurentPoly scaled(const RingElement& c) const;

    std::string str() const;

   private:
    void set(int degree, RingElement c);

    RingPtr ring_;
    std::map<int, RingElement> coeffs_;
};

/// Element of R((z)) known on a dense coefficient window with explicit
/// z-adic precision: the value is  sum_{d in [val, prec)} c_d z^d + O(z^prec),
/// with prec = nullopt meaning the value is exactly a Laurent polynomial.
/// All degrees below val are exactly zero (val is a support bound, not
/// necessarily the true valuation).
class TruncatedSeries {
   public:
    explicit TruncatedSeries(RingPtr ring) : ring_(std::move(ring)) {}

    static TruncatedSeries zero(const RingPtr& ring) { return TruncatedSeries(ring); }
    static TruncatedSeries one(const RingPtr& ring) { return exact(LaurentPoly::one(ring)); }
    static TruncatedSeries exact(const LaurentPoly& p);
    static TruncatedSeries window(const RingPtr& ring, int val,
                                  std::vector<RingElement> coeffs, std::optional<int> prec);

    const RingPtr& ring() const noexcept { return ring_; }
    int val_floor() const noexcept { return val_; }
    std::optional<int> prec() const noexcept { return prec_; }
    bool is_exact() const noexcept { return !prec_.has_value(); }
    bool is_zero() const noexcept { return is_exact() && coeffs_.empty(); }
    const std::vector<RingElement>& window_coeffs() const noexcept { return coeffs_; }

    /// True iff the coefficient of z^degree is determined by this value.
    bool knows(int degree) const { return !prec_ || degree < *prec_; }
    /// Coefficient of z^degree; requires knows(degree).
    RingElement coeff(int degree) const;

    TruncatedSeries shifted(int k) const;
    /// Forget everything from new_prec on (new_prec may exceed current
    /// precision only for exact values).
    TruncatedSeries truncated(int new_prec) const;
    /// Exact polynomial made of the known coefficients of degree < bound.
    LaurentPoly known_poly_below(int bound) const;
    /// The whole value as an exact polynomial; nullopt when truncated.
    std::optional<LaurentPoly> to_poly() const;

    TruncatedSeries operator-() const;
    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
    /// Precision propagates by the z-adic ball rule:
    /// add/sub -> min(prec_a, prec_b); mul -> min(prec_a + val_b, prec_b + val_a).
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    /// Data equality (same window, same precision, same coefficients).
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);
    friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) {
        return !(a == b);
    }

    TruncatedSeries scaled(const RingElement& c) const;

    /// Coefficientwise agreement on the overlap of the two guarantees.
    bool agrees_with(const TruncatedSeries& other) const;

    std::string str() const;

   private:
    void normalize();

    RingPtr ring_;
    int val_ = 0;
    std::vector<RingElement> coeffs_;
    std::optional<int> prec_;
};

/// Element of B = union of R[z, z^-1, P^-1] over polynomials P with unit
/// constant term, stored as num/den with den in R[z] and den(0) a unit.
/// Not reduced to lowest terms; value equality is by cross-multiplication.
class BFraction {
   public:
    BFraction(LaurentPoly num, LaurentPoly den);
    static BFraction from_poly(LaurentPoly num);
    static BFraction zero(const RingPtr& ring) { return from_poly(LaurentPoly::zero(ring)); }
    static BFraction one(const RingPtr& ring) { return from_poly(LaurentPoly::one(ring)); }

    const LaurentPoly& num() const noexcept { return num_; }
    const LaurentPoly& den() const noexcept { return den_; }
    const RingPtr& ring() const noexcept { return num_.ring(); }
    bool is_zero() const noexcept { return num_.is_zero(); }

    /// Value equality in B (num_a * den_b = num_b * den_a).
    bool same_value(const BFraction& other) const;
    bool is_one_value() const;

    BFraction operator-() const;
    friend BFraction operator+(const BFraction& a, const BFraction& b);
    friend BFraction operator-(const BFraction& a, const BFraction& b);
    friend BFraction operator*(const BFraction& a, const BFraction& b);
    /// Representation equality (num, den literally equal).
    friend bool operator==(const BFraction& a, const BFraction& b);
    friend bool operator!=(const BFraction& a, const BFraction& b) { return !(a == b); }

    /// num * den^-1 + O(z^prec) by power-series division.
    TruncatedSeries expand(int prec) const;
    /// Exact Laurent polynomial value if den divides num; field base only.
    std::optional<LaurentPoly> to_laurent() const;

    std::string str() const;

   private:
    LaurentPoly num_, den_;
};

/// Certified decomposition f = -N + Q: every coefficient of N is nilpotent,
/// Q carries a unit coefficient at its lowest degree unit_degree. For
/// truncated input Q holds only the known window part (window_only = true).
struct UnitWitness {
    int unit_degree = 0;
    LaurentPoly nil_part;   // N; f = -N + Q
    LaurentPoly unit_part;  // Q
    bool window_only = false;
};

/// Outcome of unit detection for a series/Laurent polynomial. For composite
/// Z/m the decision is made per prime-power CRT component and one witness
/// per component is kept (component_rings parallel to witnesses).
struct SeriesClass {
    enum class Kind { unit, not_unit, undecidable };
    Kind kind = Kind::undecidable;
    std::vector<UnitWitness> witnesses;
    std::vector<RingPtr> component_rings;           // empty on the local path
    std::optional<int> nilpotency_index;            // not_unit, all-nilpotent case
    bool is_unit() const { return kind == Kind::unit; }
};

SeriesClass classify_series_unit(const LaurentPoly& f);
SeriesClass classify_series_unit(const TruncatedSeries& f);

/// Inversion inside B via the telescoping identity
/// (-N + Q)(N^{s-1} + N^{s-2} Q + ... + Q^{s-1}) = Q^s - N^s  with N^s = 0:
/// clears the denominator, splits the numerator by its unit witness, forms
/// M with num * M = Q^s, and returns den * M * z^m / (z^m Q^s) where
/// m = -s * unit_degree makes the new denominator a power-series unit.
/// The contract f * invert_in_b(f) = 1 holds exactly.
BFraction invert_in_b(const BFraction& f);
BFraction invert_in_b(const LaurentPoly& f);

/// Power-series unit inversion: f has no negative coefficients and f(0) is
/// a unit; returns g with f * g = 1 + O(z^min(prec, prec_f)).
TruncatedSeries invert_series_unit(const TruncatedSeries& f, int prec);

/// Laurent-series inversion of a value certified invertible by its window:
/// telescopes away the nilpotent low part, then inverts the remaining
/// power-series unit. Result precision is the best the input window
/// supports, capped at prec; exact input takes the exact route.
TruncatedSeries invert_series(const TruncatedSeries& f, int prec);

}  // namespace p1glue
