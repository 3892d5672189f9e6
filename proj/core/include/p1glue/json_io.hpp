#pragma once

#include <json.hpp>

#include "p1glue/glue.hpp"

namespace p1glue {

using json = nlohmann::json;

// Ring descriptors: {"type":"Q"} | {"type":"Fp","p":5} | {"type":"Zmod","m":8}
// | {"type":"dual","base":{...},"k":2}
json ring_to_json(const RingPtr& ring);
RingPtr ring_from_json(const json& j);

// Elements: integers for modular rings, "a/b" strings (or integers) for Q,
// arrays of base elements in ascending e-degree for dual extensions.
json element_to_json(const RingElement& a);
RingElement element_from_json(const RingPtr& ring, const json& j);

// Series window {"val":-1,"coeffs":[...],"prec":10}; "prec":null is exact.
json series_to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const RingPtr& ring, const json& j);
json poly_to_json(const LaurentPoly& p);
LaurentPoly poly_from_json(const RingPtr& ring, const json& j);

// Fractions {"num":{...},"den":{...}}; parsing also accepts a bare exact
// series object as num/1.
json fraction_to_json(const BFraction& f);
BFraction fraction_from_json(const RingPtr& ring, const json& j);

// Matrices as row-major nested arrays of entry objects.
json mat_to_json(const MatSeries& m);
json mat_to_json(const MatPoly& m);
json mat_to_json(const MatFraction& m);
MatSeries mat_series_from_json(const RingPtr& ring, const json& j);
MatPoly mat_poly_from_json(const RingPtr& ring, const json& j);  // exact entries only
MatFraction mat_fraction_from_json(const RingPtr& ring, const json& j);
/// True when every entry object is exact (fractions or prec-null series).
bool mat_json_is_exact(const json& j);

json witness_to_json(const UnitWitness& w);
json series_class_to_json(const SeriesClass& c);
json membership_to_json(const Membership& m);
json coset_to_json(const CosetResult& r);
json factorization_to_json(const Factorization& f);

// Triples {"n":2,"g":[[...]],"delta":[[...]]|null}.
json triple_to_json(const BundleTriple& t);
BundleTriple triple_from_json(const RingPtr& ring, const json& j);

json sections_to_json(const SectionSpace& s);

}  // namespace p1glue
