#pragma once

#include "p1glue/matfact.hpp"

namespace p1glue {

/// Transition matrix over B describing a rank-n bundle on the projective
/// line glued from the chart near z = 0 (data as fractions in z) and the
/// chart at infinity (polynomials in w = 1/z). Certified invertible at
/// construction: det has a unit witness and an inverse in B.
class TransitionDatum {
   public:
    static TransitionDatum certify(MatFraction g);  // throws NotInvertible

    const MatFraction& matrix() const noexcept { return g_; }
    int rank() const noexcept { return g_.size(); }
    const RingPtr& ring() const noexcept { return g_.ring(); }
    const SeriesClass& det_class() const noexcept { return det_class_; }
    const BFraction& det_inverse() const noexcept { return det_inv_; }

   private:
    TransitionDatum(MatFraction g, SeriesClass det_class, BFraction det_inv)
        : g_(std::move(g)), det_class_(std::move(det_class)), det_inv_(std::move(det_inv)) {}

    MatFraction g_;
    SeriesClass det_class_;
    BFraction det_inv_;
};

/// Bundle in transition-normal form: the two chart trivializations are
/// implicit, the transition matrix is the complete datum. formal_delta is
/// present when the triple came from a Laurent-series matrix through the
/// factorization (it records the change of formal trivialization).
struct BundleTriple {
    TransitionDatum transition;
    std::optional<MatSeries> formal_delta;
};

/// Glue the rank-n bundle with transition g; g must certify invertible.
BundleTriple bundle_from_matrix(const MatFraction& g);

/// Inverse of bundle_from_matrix: returns the stored transition matrix
/// (never g * delta, also for triples carrying a formal_delta).
const MatFraction& transition_of_triple(const BundleTriple& t);

/// Factor gamma = g * delta and glue along g; the triple satisfies
/// expand(g) * delta = gamma on the guaranteed window.
BundleTriple formal_from_matrix(const MatSeries& gamma, int prec);

/// One basis element of H^0(E(m)): s polynomial in z on the chart near 0,
/// t polynomial in w = 1/z on the chart at infinity (stored as a Laurent
/// polynomial in z with degrees <= 0), glued by t = z^-m * g * s.
struct SectionPair {
    std::vector<LaurentPoly> s;
    std::vector<LaurentPoly> t;
};

struct SectionSpace {
    int twist = 0;
    int dimension = 0;
    std::vector<SectionPair> basis;
};

/// H^0(E(m)) over a field base, for transitions whose entries are Laurent
/// polynomials (denominator a power of z after clearing). Solved as the
/// kernel of the positive-degree part of s -> z^-m * g * s with the section
/// degree bound raised until the dimension is stable for two consecutive
/// increments; hard error past the cap |m| + n * reach(g) + 4.
SectionSpace global_sections(const TransitionDatum& g, int twist);

/// dim H^1(E(m)) by the two-chart cover: windowed Laurent vectors modulo
/// the z-polynomial image and the w-polynomial image, stabilized in the
/// window half-width with the same two-step rule and cap.
int cech_h1(const TransitionDatum& g, int twist);

/// Splitting type (d_1 >= ... >= d_n) with E isomorphic to O(d_1) + ... +
/// O(d_n), recovered from the h^0 profile: Delta(m) = h^0(E(m)) -
/// h^0(E(m-1)) counts {i : d_i >= -m}. Scalar convention: transition z^-d
/// is O(d), so sum(d_i) = -val(det g).
std::vector<int> splitting_type(const TransitionDatum& g);

}  // namespace p1glue
