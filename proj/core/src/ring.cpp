#include "p1glue/ring.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace p1glue {

namespace {

std::vector<std::pair<std::uint64_t, int>> trial_factorize(std::uint64_t m) {
    std::vector<std::pair<std::uint64_t, int>> factors;
    for (std::uint64_t d = 2; d * d <= m; d += (d == 2 ? 1 : 2)) {
        if (m % d == 0) {
            int e = 0;
            while (m % d == 0) {
                m /= d;
                ++e;
            }
            factors.emplace_back(d, e);
        }
    }
    if (m > 1) factors.emplace_back(m, 1);
    return factors;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    std::uint64_t s = a + b;  // a, b < m <= 2^63 by construction limit
    if (s >= m) s -= m;
    return s;
}

// Inverse of a mod m when gcd(a, m) = 1.
std::optional<std::uint64_t> invmod(std::uint64_t a, std::uint64_t m) {
    long long t = 0, new_t = 1;
    long long r = static_cast<long long>(m), new_r = static_cast<long long>(a % m);
    while (new_r != 0) {
        long long q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1) return std::nullopt;
    if (t < 0) t += static_cast<long long>(m);
    return static_cast<std::uint64_t>(t);
}

int valuation_at(std::uint64_t a, std::uint64_t p) {
    int v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

}  // namespace

RingPtr Ring::rationals() {
    auto r = std::shared_ptr<Ring>(new Ring());
    r->kind_ = Kind::rationals;
    return r;
}

RingPtr Ring::prime_field(std::uint64_t p) {
    if (p < 2) throw ParseError("prime field characteristic must be >= 2");
    if (p >= (std::uint64_t{1} << 31)) throw ParseError("modulus too large (desk scale only)");
    auto factors = trial_factorize(p);
    if (factors.size() != 1 || factors[0].second != 1)
        throw ParseError("Fp requires a prime p, got " + std::to_string(p));
    auto r = std::shared_ptr<Ring>(new Ring());
    r->kind_ = Kind::prime_field;
    r->modulus_ = p;
    r->factors_ = std::move(factors);
    return r;
}

RingPtr Ring::integers_mod(std::uint64_t m) {
    if (m < 2) throw ParseError("Z/m requires m >= 2");
    if (m >= (std::uint64_t{1} << 31)) throw ParseError("modulus too large (desk scale only)");
    auto r = std::shared_ptr<Ring>(new Ring());
    r->kind_ = Kind::integers_mod;
    r->modulus_ = m;
    r->factors_ = trial_factorize(m);
    int max_e = 0;
    for (const auto& [p, e] : r->factors_) max_e = std::max(max_e, e);
    r->nilradical_exponent_ = std::max(1, max_e);
    r->local_artinian_ = r->factors_.size() == 1;
    return r;
}

RingPtr Ring::dual(RingPtr base, int k) {
    if (!base) throw ParseError("dual extension requires a base ring");
    if (k < 2) throw ParseError("dual extension requires k >= 2");
    auto r = std::shared_ptr<Ring>(new Ring());
    r->kind_ = Kind::dual;
    r->base_ = std::move(base);
    r->dual_k_ = k;
    // nil(base[e]/(e^k)) = {x : x_0 nilpotent in base}; smallest vanishing
    // power of the ideal is K_base + k - 1.
    r->nilradical_exponent_ = r->base_->nilradical_exponent() + k - 1;
    r->local_artinian_ = r->base_->local_artinian();
    return r;
}

std::uint64_t Ring::modulus() const {
    if (kind_ != Kind::prime_field && kind_ != Kind::integers_mod)
        throw Error("internal", "modulus() on a non-modular ring");
    return modulus_;
}

const std::vector<std::pair<std::uint64_t, int>>& Ring::factorization() const {
    if (kind_ != Kind::prime_field && kind_ != Kind::integers_mod)
        throw Error("internal", "factorization() on a non-modular ring");
    return factors_;
}

const RingPtr& Ring::base() const {
    if (kind_ != Kind::dual) throw Error("internal", "base() on a non-dual ring");
    return base_;
}

int Ring::dual_k() const {
    if (kind_ != Kind::dual) throw Error("internal", "dual_k() on a non-dual ring");
    return dual_k_;
}

std::string Ring::name() const {
    switch (kind_) {
        case Kind::rationals:
            return "Q";
        case Kind::prime_field:
            return "F_" + std::to_string(modulus_);
        case Kind::integers_mod:
            return "Z/" + std::to_string(modulus_);
        case Kind::dual:
            return base_->name() + "[e]/(e^" + std::to_string(dual_k_) + ")";
    }
    return "?";
}

bool Ring::same(const RingPtr& a, const RingPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind_ != b->kind_) return false;
    switch (a->kind_) {
        case Kind::rationals:
            return true;
        case Kind::prime_field:
        case Kind::integers_mod:
            return a->modulus_ == b->modulus_;
        case Kind::dual:
            return a->dual_k_ == b->dual_k_ && same(a->base_, b->base_);
    }
    return false;
}

namespace {

void require_same_ring(const RingElement& a, const RingElement& b) {
    if (!Ring::same(a.ring(), b.ring()))
        throw MixedRingsError("operands live in " + a.ring()->name() + " and " +
                              b.ring()->name());
}

}  // namespace

RingElement RingElement::zero(const RingPtr& ring) { return from_int(ring, 0); }

RingElement RingElement::one(const RingPtr& ring) { return from_int(ring, 1); }

RingElement RingElement::from_int(const RingPtr& ring, long long v) {
    switch (ring->kind()) {
        case Ring::Kind::rationals:
            return RingElement(ring, mpq_class(static_cast<long>(v)));
        case Ring::Kind::prime_field:
        case Ring::Kind::integers_mod: {
            const auto m = ring->modulus();
            long long r = v % static_cast<long long>(m);
            if (r < 0) r += static_cast<long long>(m);
            return RingElement(ring, static_cast<std::uint64_t>(r));
        }
        case Ring::Kind::dual: {
            DualCoeffs c;
            c.reserve(ring->dual_k());
            c.push_back(from_int(ring->base(), v));
            for (int i = 1; i < ring->dual_k(); ++i) c.push_back(zero(ring->base()));
            return RingElement(ring, std::move(c));
        }
    }
    throw Error("internal", "unknown ring kind");
}

RingElement RingElement::from_rational(const RingPtr& ring, const mpq_class& q) {
    if (ring->kind() != Ring::Kind::rationals)
        throw ParseError("rational literal in non-rational ring " + ring->name());
    mpq_class canon = q;
    canon.canonicalize();
    return RingElement(ring, std::move(canon));
}

RingElement RingElement::from_residue(const RingPtr& ring, std::uint64_t r) {
    if (ring->kind() != Ring::Kind::prime_field && ring->kind() != Ring::Kind::integers_mod)
        throw ParseError("residue literal in non-modular ring " + ring->name());
    return RingElement(ring, r % ring->modulus());
}

RingElement RingElement::from_dual_coeffs(const RingPtr& ring, DualCoeffs coeffs) {
    if (ring->kind() != Ring::Kind::dual)
        throw ParseError("dual coefficient vector in non-dual ring " + ring->name());
    const int k = ring->dual_k();
    if (static_cast<int>(coeffs.size()) > k)
        throw ParseError("dual element has more than k coefficients");
    for (const auto& c : coeffs)
        if (!Ring::same(c.ring(), ring->base())) throw MixedRingsError();
    while (static_cast<int>(coeffs.size()) < k) coeffs.push_back(zero(ring->base()));
    return RingElement(ring, std::move(coeffs));
}

bool RingElement::is_zero() const {
    switch (ring_->kind()) {
        case Ring::Kind::rationals:
            return rational() == 0;
        case Ring::Kind::prime_field:
        case Ring::Kind::integers_mod:
            return residue() == 0;
        case Ring::Kind::dual: {
            const auto& c = dual_coeffs();
            return std::all_of(c.begin(), c.end(), [](const auto& x) { return x.is_zero(); });
        }
    }
    return false;
}

bool RingElement::is_one() const { return *this == one(ring_); }

const mpq_class& RingElement::rational() const { return std::get<mpq_class>(payload_); }

std::uint64_t RingElement::residue() const { return std::get<std::uint64_t>(payload_); }

const RingElement::DualCoeffs& RingElement::dual_coeffs() const {
    return std::get<DualCoeffs>(payload_);
}

RingElement operator+(const RingElement& a, const RingElement& b) {
    require_same_ring(a, b);
    const auto& ring = a.ring();
    switch (ring->kind()) {
        case Ring::Kind::rationals:
            return RingElement(ring, mpq_class(a.rational() + b.rational()));
        case Ring::Kind::prime_field:
        case Ring::Kind::integers_mod:
            return RingElement(ring, addmod(a.residue(), b.residue(), ring->modulus()));
        case Ring::Kind::dual: {
            RingElement::DualCoeffs c;
            c.reserve(ring->dual_k());
            for (int i = 0; i < ring->dual_k(); ++i)
                c.push_back(a.dual_coeffs()[i] + b.dual_coeffs()[i]);
            return RingElement(ring, std::move(c));
        }
    }
    throw Error("internal", "unknown ring kind");
}

RingElement operator-(const RingElement& a, const RingElement& b) { return a + (-b); }

RingElement RingElement::operator-() const {
    switch (ring_->kind()) {
        case Ring::Kind::rationals:
            return RingElement(ring_, mpq_class(-rational()));
        case Ring::Kind::prime_field:
        case Ring::Kind::integers_mod: {
            const auto m = ring_->modulus();
            const auto r = residue();
            return RingElement(ring_, r == 0 ? 0 : m - r);
        }
        case Ring::Kind::dual: {
            DualCoeffs c;
            c.reserve(ring_->dual_k());
            for (const auto& x : dual_coeffs()) c.push_back(-x);
            return RingElement(ring_, std::move(c));
        }
    }
    throw Error("internal", "unknown ring kind");
}

RingElement operator*(const RingElement& a, const RingElement& b) {
    require_same_ring(a, b);
    const auto& ring = a.ring();
    switch (ring->kind()) {
        case Ring::Kind::rationals:
            return RingElement(ring, mpq_class(a.rational() * b.rational()));
        case Ring::Kind::prime_field:
        case Ring::Kind::integers_mod:
            return RingElement(ring, mulmod(a.residue(), b.residue(), ring->modulus()));
        case Ring::Kind::dual: {
            // convolution truncated at e^k
            const int k = ring->dual_k();
            const auto& base = ring->base();
            RingElement::DualCoeffs c;
            c.reserve(k);
            for (int d = 0; d < k; ++d) {
                RingElement acc = RingElement::zero(base);
                for (int i = 0; i <= d; ++i)
                    acc = acc + a.dual_coeffs()[i] * b.dual_coeffs()[d - i];
                c.push_back(std::move(acc));
            }
            return RingElement(ring, std::move(c));
        }
    }
    throw Error("internal", "unknown ring kind");
}

bool operator==(const RingElement& a, const RingElement& b) {
    require_same_ring(a, b);
    switch (a.ring()->kind()) {
        case Ring::Kind::rationals:
            return a.rational() == b.rational();
        case Ring::Kind::prime_field:
        case Ring::Kind::integers_mod:
            return a.residue() == b.residue();
        case Ring::Kind::dual:
            return a.dual_coeffs() == b.dual_coeffs();
    }
    return false;
}

RingElement RingElement::pow(int e) const {
    RingElement r = one(ring_);
    RingElement base = *this;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

std::string RingElement::str() const {
    switch (ring_->kind()) {
        case Ring::Kind::rationals:
            return rational().get_str();
        case Ring::Kind::prime_field:
        case Ring::Kind::integers_mod:
            return std::to_string(residue());
        case Ring::Kind::dual: {
            std::ostringstream os;
            os << "[";
            const auto& c = dual_coeffs();
            for (std::size_t i = 0; i < c.size(); ++i)
                os << (i ? "," : "") << c[i].str();
            os << "]";
            return os.str();
        }
    }
    return "?";
}

ElementClass classify_element(const RingElement& a) {
    const auto& ring = a.ring();
    switch (ring->kind()) {
        case Ring::Kind::rationals: {
            if (a.rational() == 0) return {ElementClass::Kind::nilpotent, std::nullopt, 1};
            return {ElementClass::Kind::unit,
                    RingElement::from_rational(ring, 1 / a.rational()), 0};
        }
        case Ring::Kind::prime_field:
        case Ring::Kind::integers_mod: {
            const auto m = ring->modulus();
            const auto r = a.residue();
            if (r == 0) return {ElementClass::Kind::nilpotent, std::nullopt, 1};
            if (auto inv = invmod(r, m))
                return {ElementClass::Kind::unit, RingElement::from_residue(ring, *inv), 0};
            // nilpotent iff every prime of m divides r; index via p-adic
            // valuations, componentwise through the stored factorization
            int index = 1;
            for (const auto& [p, e] : ring->factorization()) {
                if (r % p != 0) return {ElementClass::Kind::other, std::nullopt, 0};
                const int v = std::min(valuation_at(r, p), e);
                index = std::max(index, (e + v - 1) / v);
            }
            return {ElementClass::Kind::nilpotent, std::nullopt, index};
        }
        case Ring::Kind::dual: {
            const auto& base = ring->base();
            const int k = ring->dual_k();
            const auto c0 = classify_element(a.dual_coeffs()[0]);
            if (c0.kind == ElementClass::Kind::other)
                return {ElementClass::Kind::other, std::nullopt, 0};
            if (c0.kind == ElementClass::Kind::nilpotent) {
                // bounded power iteration; nilradical_exponent always suffices
                RingElement p = a;
                for (int i = 1; i <= ring->nilradical_exponent(); ++i) {
                    if (p.is_zero()) return {ElementClass::Kind::nilpotent, std::nullopt, i};
                    p = p * a;
                }
                throw Error("internal", "nilpotency bound violated in " + ring->name());
            }
            // a = a0 + h with h in (e): inverse by the finite geometric sum
            // a0^{-1} * sum_{t<k} (-a0^{-1} h)^t, since h^k = 0.
            RingElement::DualCoeffs hc;
            hc.reserve(k);
            hc.push_back(RingElement::zero(base));
            for (int i = 1; i < k; ++i) hc.push_back(a.dual_coeffs()[i]);
            const RingElement h = RingElement::from_dual_coeffs(ring, std::move(hc));
            const RingElement inv0_lift =
                RingElement::from_dual_coeffs(ring, {*c0.inverse});
            const RingElement t = -(inv0_lift * h);
            RingElement geo = RingElement::one(ring);
            RingElement tp = t;
            for (int i = 1; i < k; ++i) {
                geo = geo + tp;
                tp = tp * t;
            }
            return {ElementClass::Kind::unit, inv0_lift * geo, 0};
        }
    }
    throw Error("internal", "unknown ring kind");
}

std::optional<RingElement> try_invert(const RingElement& a) {
    auto c = classify_element(a);
    if (c.kind == ElementClass::Kind::unit) return c.inverse;
    return std::nullopt;
}

std::vector<RingPtr> crt_components(const RingPtr& ring) {
    if (ring->kind() != Ring::Kind::integers_mod)
        throw UnsupportedRingError("CRT split requires Z/m, got " + ring->name());
    std::vector<RingPtr> parts;
    for (const auto& [p, e] : ring->factorization()) {
        std::uint64_t q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        parts.push_back(e == 1 ? Ring::prime_field(p) : Ring::integers_mod(q));
    }
    return parts;
}

RingElement crt_project(const RingElement& a, const RingPtr& component) {
    return RingElement::from_residue(component, a.residue() % component->modulus());
}

RingElement crt_combine(const RingPtr& ring, const std::vector<RingElement>& parts) {
    const auto m = ring->modulus();
    std::uint64_t x = 0;
    for (const auto& part : parts) {
        const auto q = part.ring()->modulus();
        const std::uint64_t mq = m / q;
        const auto y = invmod(mq % q, q);
        if (!y) throw Error("internal", "CRT basis inversion failed");
        x = addmod(x, mulmod(part.residue(), mulmod(mq, *y, m), m), m);
    }
    return RingElement::from_residue(ring, x);
}

RingElement random_element(const RingPtr& ring, std::mt19937_64& rng) {
    switch (ring->kind()) {
        case Ring::Kind::rationals: {
            const long long num = static_cast<long long>(rng() % 21) - 10;
            const long long den = 1 + static_cast<long long>(rng() % 9);
            mpq_class q(static_cast<long>(num), static_cast<long>(den));
            q.canonicalize();
            return RingElement::from_rational(ring, q);
        }
        case Ring::Kind::prime_field:
        case Ring::Kind::integers_mod:
            return RingElement::from_residue(ring, rng() % ring->modulus());
        case Ring::Kind::dual: {
            RingElement::DualCoeffs c;
            for (int i = 0; i < ring->dual_k(); ++i)
                c.push_back(random_element(ring->base(), rng));
            return RingElement::from_dual_coeffs(ring, std::move(c));
        }
    }
    throw Error("internal", "unknown ring kind");
}

RingElement random_unit(const RingPtr& ring, std::mt19937_64& rng) {
    switch (ring->kind()) {
        case Ring::Kind::rationals: {
            RingElement x = random_element(ring, rng);
            while (x.is_zero()) x = random_element(ring, rng);
            return x;
        }
        case Ring::Kind::prime_field:
        case Ring::Kind::integers_mod: {
            for (;;) {
                auto x = RingElement::from_residue(ring, rng() % ring->modulus());
                if (try_invert(x)) return x;
            }
        }
        case Ring::Kind::dual: {
            RingElement::DualCoeffs c;
            c.push_back(random_unit(ring->base(), rng));
            for (int i = 1; i < ring->dual_k(); ++i)
                c.push_back(random_element(ring->base(), rng));
            return RingElement::from_dual_coeffs(ring, std::move(c));
        }
    }
    throw Error("internal", "unknown ring kind");
}

RingElement random_nilpotent(const RingPtr& ring, std::mt19937_64& rng) {
    switch (ring->kind()) {
        case Ring::Kind::rationals:
            return RingElement::zero(ring);
        case Ring::Kind::prime_field:
            return RingElement::zero(ring);
        case Ring::Kind::integers_mod: {
            std::uint64_t rad = 1;
            for (const auto& [p, e] : ring->factorization()) rad *= p;
            const std::uint64_t cof = ring->modulus() / rad;
            return RingElement::from_residue(ring, mulmod(rad, rng() % std::max<std::uint64_t>(cof, 1), ring->modulus()));
        }
        case Ring::Kind::dual: {
            RingElement::DualCoeffs c;
            c.push_back(random_nilpotent(ring->base(), rng));
            for (int i = 1; i < ring->dual_k(); ++i)
                c.push_back(random_element(ring->base(), rng));
            return RingElement::from_dual_coeffs(ring, std::move(c));
        }
    }
    throw Error("internal", "unknown ring kind");
}

}  // namespace p1glue
