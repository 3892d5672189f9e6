#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "p1glue/laurent.hpp"

namespace p1glue {

/// Square matrix over one of the series/fraction representations. Entry
/// kind is homogeneous; cross-kind products go through the conversion
/// helpers below.
template <class T>
class Matrix {
   public:
    Matrix(RingPtr ring, int n)
        : ring_(std::move(ring)), n_(n),
          entries_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                   T::zero(ring_)) {}

    static Matrix identity(const RingPtr& ring, int n) {
        Matrix m(ring, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = T::one(ring);
        return m;
    }

    const RingPtr& ring() const noexcept { return ring_; }
    int size() const noexcept { return n_; }

    T& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
    const T& at(int i, int j) const {
        return entries_[static_cast<std::size_t>(i) * n_ + j];
    }

    Matrix mul(const Matrix& other) const {
        Matrix out(ring_, n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                T acc = T::zero(ring_);
                for (int k = 0; k < n_; ++k) acc = acc + at(i, k) * other.at(k, j);
                out.at(i, j) = std::move(acc);
            }
        return out;
    }

    Matrix scaled(const T& s) const {
        Matrix out(ring_, n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) out.at(i, j) = at(i, j) * s;
        return out;
    }

    /// Determinant by cofactor expansion along the first row; exact for
    /// polynomial/fraction entries, precision-tracked for truncated ones.
    T det() const {
        if (n_ == 1) return at(0, 0);
        T acc = T::zero(ring_);
        for (int j = 0; j < n_; ++j) {
            T term = at(0, j) * minor_matrix(0, j).det();
            acc = (j % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    }

    /// Adjugate: M * adj(M) = det(M) * I.
    Matrix adjugate() const {
        Matrix out(ring_, n_);
        if (n_ == 1) {
            out.at(0, 0) = T::one(ring_);
            return out;
        }
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                T c = minor_matrix(i, j).det();
                if ((i + j) % 2 != 0) c = -c;
                out.at(j, i) = std::move(c);
            }
        return out;
    }

    Matrix minor_matrix(int row, int col) const {
        Matrix out(ring_, n_ - 1);
        int r = 0;
        for (int i = 0; i < n_; ++i) {
            if (i == row) continue;
            int c = 0;
            for (int j = 0; j < n_; ++j) {
                if (j == col) continue;
                out.at(r, c) = at(i, j);
                ++c;
            }
            ++r;
        }
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.n_ == b.n_ && a.entries_ == b.entries_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

   private:
    RingPtr ring_;
    int n_ = 0;
    std::vector<T> entries_;
};

using MatPoly = Matrix<LaurentPoly>;
using MatSeries = Matrix<TruncatedSeries>;
using MatFraction = Matrix<BFraction>;

MatSeries to_series(const MatPoly& m);
MatFraction to_fractions(const MatPoly& m);
MatSeries expand(const MatFraction& m, int prec);
MatSeries truncated(const MatSeries& m, int prec);
/// Entrywise agreement on the overlap of guarantees.
bool agrees_on_window(const MatSeries& a, const MatSeries& b);
/// Max absolute represented degree over all entries.
int degree_reach(const MatPoly& m);
int min_val_floor(const MatSeries& m);

/// Result of the truncate-and-certify factorization gamma = g * delta with
/// g over B (here with denominator 1: a Laurent-polynomial matrix) and
/// delta a power-series matrix whose determinant has unit constant term.
struct Factorization {
    MatFraction g;
    MatSeries delta;
    int truncation_order = 0;         // the T at which the search succeeded
    std::optional<int> achieved_prec;  // min window precision over delta
    SeriesClass det_g_class;          // unit certificate for det(g)
    RingElement det_delta0_inverse;   // unit certificate for det(delta)(0)
};

/// Searches truncation orders T = max(val_floor+1, 1), ..., prec: g_T keeps
/// the entry coefficients of degree < T; accepted once det(g_T) certifies as
/// a unit and delta = g_T^-1 * gamma lies in GL_n(R[[z]]) on its window.
/// Throws PrecisionExhausted (with the last failing check) when no T works,
/// NotInvertible when det(gamma) is certified non-invertible.
Factorization factorize(const MatSeries& gamma, int prec);

struct Membership {
    enum class Kind { yes, no, undecidable };
    Kind kind = Kind::undecidable;
    std::optional<int> witness_degree;       // negative-degree entry coefficient
    std::optional<std::pair<int, int>> entry;
    std::string reason;
    bool is_yes() const { return kind == Kind::yes; }
};

/// Does the matrix lie in GL_n(R[[z]])? Yes iff no entry has a nonzero
/// coefficient below degree 0 and det(0) is a unit. Truncated windows that
/// cannot see det(0) give undecidable.
Membership membership_gl_power_series(const MatSeries& m);
Membership membership_gl_power_series(const MatPoly& m);
Membership membership_gl_power_series(const MatFraction& m);

/// Sorted (descending) z-exponent vector of the Smith form over k[[z]]:
/// m = u * diag(z^a1, ..., z^an) * v with u, v unimodular over k[z]_(z).
/// Entries must be exact over a field; the exponents sum to val(det m).
std::vector<int> cartan_type(const MatPoly& m);

struct CosetResult {
    enum class Kind { equal, not_equal, undecidable };
    Kind kind = Kind::undecidable;
    Membership detail;
};

/// Same left coset of GL_n(R[[z]]): computes gamma1^-1 * gamma2 and tests
/// membership. Exact inputs decide exactly; truncated ones may be undecidable.
CosetResult coset_equal(const MatPoly& gamma1, const MatPoly& gamma2);
CosetResult coset_equal(const MatFraction& gamma1, const MatFraction& gamma2);
CosetResult coset_equal(const MatSeries& gamma1, const MatSeries& gamma2, int prec);

// Seeded generators for test fixtures and the CLI `random` subcommand.
// Deterministic under (ring, n, seed).
MatPoly random_power_series_unit(const RingPtr& ring, int n, std::uint64_t seed);
MatPoly random_b_matrix(const RingPtr& ring, int n, std::uint64_t seed);

struct FactorSample {
    MatSeries gamma;  // g0 * delta0 truncated to the requested precision
    MatPoly g0;
    MatPoly delta0;
};
FactorSample random_product(const RingPtr& ring, int n, int prec, std::uint64_t seed);

}  // namespace p1glue
