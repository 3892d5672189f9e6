#include <doctest.h>

#include "test_support.hpp"

using namespace p1glue;
using ts::el;

TEST_CASE("ring arithmetic on the worked examples") {
    auto z8 = ts::z8();
    CHECK(el(z8, 3) * el(z8, 3) == el(z8, 1));

    auto f2e = ts::f2e();
    const auto one_plus_e =
        RingElement::from_dual_coeffs(f2e, {el(f2e->base(), 1), el(f2e->base(), 1)});
    CHECK(one_plus_e * one_plus_e == RingElement::one(f2e));

    auto q = ts::q();
    const auto half = RingElement::from_rational(q, mpq_class(1, 2));
    const auto third = RingElement::from_rational(q, mpq_class(1, 3));
    CHECK(half + third == RingElement::from_rational(q, mpq_class(5, 6)));
}

TEST_CASE("mixed rings are rejected") {
    CHECK_THROWS_AS(el(ts::z8(), 1) + el(ts::f5(), 1), MixedRingsError);
}

TEST_CASE("classification on the worked examples") {
    auto z8 = ts::z8();
    const auto two = classify_element(el(z8, 2));
    CHECK(two.kind == ElementClass::Kind::nilpotent);
    CHECK(two.index == 3);

    const auto three = classify_element(el(z8, 3));
    CHECK(three.kind == ElementClass::Kind::unit);
    CHECK(*three.inverse == el(z8, 3));

    const auto mixed = classify_element(el(ts::z6(), 2));
    CHECK(mixed.kind == ElementClass::Kind::other);
}

TEST_CASE("descriptor flags") {
    CHECK(ts::q()->nilradical_exponent() == 1);
    CHECK(ts::f5()->nilradical_exponent() == 1);
    CHECK(ts::z8()->nilradical_exponent() == 3);
    CHECK(ts::z6()->nilradical_exponent() == 1);
    CHECK(ts::f2e()->nilradical_exponent() == 2);
    CHECK(Ring::dual(Ring::integers_mod(4), 2)->nilradical_exponent() == 3);

    CHECK(ts::q()->local_artinian());
    CHECK(ts::f5()->local_artinian());
    CHECK(ts::z8()->local_artinian());
    CHECK(!ts::z6()->local_artinian());
    CHECK(ts::f2e()->local_artinian());
    CHECK(!Ring::dual(ts::z6(), 2)->local_artinian());
}

TEST_CASE("invalid descriptors are rejected") {
    CHECK_THROWS_AS(Ring::prime_field(6), ParseError);
    CHECK_THROWS_AS(Ring::integers_mod(1), ParseError);
    CHECK_THROWS_AS(Ring::dual(ts::f5(), 1), ParseError);
}

namespace {

std::vector<RingPtr> supported_rings() {
    return {ts::q(),  ts::f5(), ts::z8(), ts::z6(), ts::f2e(),
            Ring::dual(Ring::integers_mod(4), 3)};
}

}  // namespace

TEST_CASE("classification certificates hold on random elements") {
    for (const auto& ring : supported_rings()) {
        std::mt19937_64 rng(20240617);
        for (int t = 0; t < 1000; ++t) {
            const auto a = random_element(ring, rng);
            const auto c = classify_element(a);
            switch (c.kind) {
                case ElementClass::Kind::unit:
                    CHECK(a * *c.inverse == RingElement::one(ring));
                    break;
                case ElementClass::Kind::nilpotent:
                    CHECK(a.pow(c.index).is_zero());
                    CHECK(!a.pow(c.index - 1).is_zero());
                    break;
                case ElementClass::Kind::other:
                    CHECK(!ring->local_artinian());
                    break;
            }
        }
    }
}

TEST_CASE("ring axioms hold on random triples") {
    for (const auto& ring : supported_rings()) {
        std::mt19937_64 rng(7);
        for (int t = 0; t < 200; ++t) {
            const auto a = random_element(ring, rng);
            const auto b = random_element(ring, rng);
            const auto c = random_element(ring, rng);
            CHECK((a + b) + c == a + (b + c));
            CHECK(a + b == b + a);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * b == b * a);
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a + (-a) == RingElement::zero(ring));
            CHECK(a * RingElement::one(ring) == a);
        }
    }
}

TEST_CASE("nilpotents power to zero at the descriptor exponent") {
    for (const auto& ring : supported_rings()) {
        std::mt19937_64 rng(99);
        for (int t = 0; t < 300; ++t)
            CHECK(random_nilpotent(ring, rng).pow(ring->nilradical_exponent()).is_zero());
    }
}

TEST_CASE("CRT split and combine are inverse") {
    auto z12 = Ring::integers_mod(12);
    const auto comps = crt_components(z12);
    REQUIRE(comps.size() == 2);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        const auto a = random_element(z12, rng);
        std::vector<RingElement> parts;
        for (const auto& c : comps) parts.push_back(crt_project(a, c));
        CHECK(crt_combine(z12, parts) == a);
    }
}
