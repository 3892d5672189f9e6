#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "p1glue/errors.hpp"

namespace p1glue {

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

/// Descriptor for the coefficient rings the library computes over:
/// Q, F_p, Z/m (with its prime factorization stored at construction),
/// and dual extensions base[e]/(e^k). Immutable and freely shareable.
class Ring {
   public:
    enum class Kind { rationals, prime_field, integers_mod, dual };

    static RingPtr rationals();
    static RingPtr prime_field(std::uint64_t p);
    static RingPtr integers_mod(std::uint64_t m);
    static RingPtr dual(RingPtr base, int k);  // base[e]/(e^k), k >= 2

    Kind kind() const noexcept { return kind_; }
    bool is_field() const noexcept {
        return kind_ == Kind::rationals || kind_ == Kind::prime_field;
    }
    /// True iff every element is a unit or nilpotent.
    bool local_artinian() const noexcept { return local_artinian_; }
    /// Smallest K with (nilradical)^K = 0; 1 for reduced rings. Gives the
    /// a-priori bound for all nilpotency arguments at the series level.
    int nilradical_exponent() const noexcept { return nilradical_exponent_; }

    std::uint64_t modulus() const;  // prime_field / integers_mod only
    const std::vector<std::pair<std::uint64_t, int>>& factorization() const;
    const RingPtr& base() const;  // dual only
    int dual_k() const;           // dual only

    std::string name() const;

    static bool same(const RingPtr& a, const RingPtr& b);

   private:
    Ring() = default;

    Kind kind_ = Kind::rationals;
    std::uint64_t modulus_ = 0;
    std::vector<std::pair<std::uint64_t, int>> factors_;
    RingPtr base_;
    int dual_k_ = 0;
    int nilradical_exponent_ = 1;
    bool local_artinian_ = true;
};

/// Element of a Ring in canonical form: reduced residue for modular rings,
/// normalized fraction for Q, length-k coefficient vector for dual
/// extensions. Equality of elements is equality of representations.
class RingElement {
   public:
    using DualCoeffs = std::vector<RingElement>;

    RingElement() = default;  // detached null element; only containers use it

    static RingElement zero(const RingPtr& ring);
    static RingElement one(const RingPtr& ring);
    static RingElement from_int(const RingPtr& ring, long long v);
    static RingElement from_rational(const RingPtr& ring, const mpq_class& q);
    static RingElement from_residue(const RingPtr& ring, std::uint64_t r);
    static RingElement from_dual_coeffs(const RingPtr& ring, DualCoeffs coeffs);

    const RingPtr& ring() const noexcept { return ring_; }
    bool is_zero() const;
    bool is_one() const;

    const mpq_class& rational() const;
    std::uint64_t residue() const;
    const DualCoeffs& dual_coeffs() const;

    RingElement pow(int e) const;  // e >= 0
    RingElement operator-() const;

    friend RingElement operator+(const RingElement& a, const RingElement& b);
    friend RingElement operator-(const RingElement& a, const RingElement& b);
    friend RingElement operator*(const RingElement& a, const RingElement& b);
    friend bool operator==(const RingElement& a, const RingElement& b);
    friend bool operator!=(const RingElement& a, const RingElement& b) { return !(a == b); }

    std::string str() const;

   private:
    using Payload = std::variant<std::monostate, mpq_class, std::uint64_t, DualCoeffs>;

    RingElement(RingPtr ring, Payload payload)
        : ring_(std::move(ring)), payload_(std::move(payload)) {}

    RingPtr ring_;
    Payload payload_;
};

struct ElementClass {
    enum class Kind { unit, nilpotent, other };
    Kind kind;
    std::optional<RingElement> inverse;  // unit: a * inverse = 1
    int index = 0;                       // nilpotent: a^index = 0, a^(index-1) != 0
};

/// Unit/nilpotent/other classification with certificate. Other can only
/// occur when the ring is not local_artinian (composite Z/m, and dual
/// extensions over such).
ElementClass classify_element(const RingElement& a);

/// Unit test shorthand; returns the inverse when it exists.
std::optional<RingElement> try_invert(const RingElement& a);

// CRT support for composite Z/m: component rings Z/p^e and the
// coefficientwise split/combine maps.
std::vector<RingPtr> crt_components(const RingPtr& ring);
RingElement crt_project(const RingElement& a, const RingPtr& component);
RingElement crt_combine(const RingPtr& ring, const std::vector<RingElement>& parts);

// Seeded fixture generators (deterministic: raw mt19937_64 draws + modulo,
// no std::uniform_* involved).
RingElement random_element(const RingPtr& ring, std::mt19937_64& rng);
RingElement random_unit(const RingPtr& ring, std::mt19937_64& rng);
RingElement random_nilpotent(const RingPtr& ring, std::mt19937_64& rng);

}  // namespace p1glue
