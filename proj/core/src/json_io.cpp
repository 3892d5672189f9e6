#include "p1glue/json_io.hpp"

namespace p1glue {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

void expect_object(const json& j, const std::string& what) {
    if (!j.is_object()) bad(what + " must be a JSON object");
}

bool looks_like_fraction(const json& j) { return j.is_object() && j.contains("num"); }

}  // namespace

json ring_to_json(const RingPtr& ring) {
    switch (ring->kind()) {
        case Ring::Kind::rationals:
            return json{{"type", "Q"}};
        case Ring::Kind::prime_field:
            return json{{"type", "Fp"}, {"p", ring->modulus()}};
        case Ring::Kind::integers_mod:
            return json{{"type", "Zmod"}, {"m", ring->modulus()}};
        case Ring::Kind::dual:
            return json{{"type", "dual"},
                        {"base", ring_to_json(ring->base())},
                        {"k", ring->dual_k()}};
    }
    bad("unknown ring kind");
}

RingPtr ring_from_json(const json& j) {
    expect_object(j, "ring descriptor");
    if (!j.contains("type") || !j["type"].is_string()) bad("ring descriptor needs \"type\"");
    const std::string type = j["type"].get<std::string>();
    if (type == "Q") return Ring::rationals();
    if (type == "Fp") {
        if (!j.contains("p")) bad("Fp descriptor needs \"p\"");
        return Ring::prime_field(j["p"].get<std::uint64_t>());
    }
    if (type == "Zmod") {
        if (!j.contains("m")) bad("Zmod descriptor needs \"m\"");
        return Ring::integers_mod(j["m"].get<std::uint64_t>());
    }
    if (type == "dual") {
        if (!j.contains("base") || !j.contains("k")) bad("dual descriptor needs \"base\" and \"k\"");
        return Ring::dual(ring_from_json(j["base"]), j["k"].get<int>());
    }
    bad("unknown ring type \"" + type + "\"");
}

json element_to_json(const RingElement& a) {
    switch (a.ring()->kind()) {
        case Ring::Kind::rationals:
            return a.rational().get_str();
        case Ring::Kind::prime_field:
        case Ring::Kind::integers_mod:
            return a.residue();
        case Ring::Kind::dual: {
            json arr = json::array();
            for (const auto& c : a.dual_coeffs()) arr.push_back(element_to_json(c));
            return arr;
        }
    }
    bad("unknown ring kind");
}

RingElement element_from_json(const RingPtr& ring, const json& j) {
    if (j.is_array()) {
        if (ring->kind() != Ring::Kind::dual)
            bad("array element literal outside a dual extension");
        RingElement::DualCoeffs coeffs;
        for (const auto& c : j) coeffs.push_back(element_from_json(ring->base(), c));
        return RingElement::from_dual_coeffs(ring, std::move(coeffs));
    }
    if (j.is_string()) {
        if (ring->kind() != Ring::Kind::rationals)
            bad("string element literal outside Q");
        try {
            mpq_class q(j.get<std::string>());
            q.canonicalize();
            return RingElement::from_rational(ring, q);
        } catch (const std::invalid_argument&) {
            bad("malformed rational \"" + j.get<std::string>() + "\"");
        }
    }
    if (j.is_number_integer()) return RingElement::from_int(ring, j.get<long long>());
    bad("element literal must be an integer, \"a/b\" string, or array");
}

json series_to_json(const TruncatedSeries& s) {
    json coeffs = json::array();
    for (const auto& c : s.window_coeffs()) coeffs.push_back(element_to_json(c));
    json out{{"val", s.val_floor()}, {"coeffs", std::move(coeffs)}};
    if (s.prec())
        out["prec"] = *s.prec();
    else
        out["prec"] = nullptr;
    return out;
}

TruncatedSeries series_from_json(const RingPtr& ring, const json& j) {
    expect_object(j, "series");
    if (!j.contains("val") || !j.contains("coeffs") || !j.contains("prec"))
        bad("series needs \"val\", \"coeffs\", \"prec\"");
    if (!j["coeffs"].is_array()) bad("series \"coeffs\" must be an array");
    const int val = j["val"].get<int>();
    std::vector<RingElement> coeffs;
    for (const auto& c : j["coeffs"]) coeffs.push_back(element_from_json(ring, c));
    std::optional<int> prec;
    if (!j["prec"].is_null()) prec = j["prec"].get<int>();
    return TruncatedSeries::window(ring, val, std::move(coeffs), prec);
}

json poly_to_json(const LaurentPoly& p) { return series_to_json(TruncatedSeries::exact(p)); }

LaurentPoly poly_from_json(const RingPtr& ring, const json& j) {
    const TruncatedSeries s = series_from_json(ring, j);
    auto p = s.to_poly();
    if (!p) bad("expected an exact series (\"prec\": null)");
    return *p;
}

json fraction_to_json(const BFraction& f) {
    return json{{"num", poly_to_json(f.num())}, {"den", poly_to_json(f.den())}};
}

BFraction fraction_from_json(const RingPtr& ring, const json& j) {
    expect_object(j, "fraction");
    if (looks_like_fraction(j)) {
        if (!j.contains("den")) bad("fraction needs \"num\" and \"den\"");
        return BFraction(poly_from_json(ring, j["num"]), poly_from_json(ring, j["den"]));
    }
    return BFraction::from_poly(poly_from_json(ring, j));
}

namespace {

template <class T, class Parse>
Matrix<T> mat_from_json(const RingPtr& ring, const json& j, Parse parse) {
    if (!j.is_array() || j.empty()) bad("matrix must be a non-empty nested array");
    const int n = static_cast<int>(j.size());
    Matrix<T> m(ring, n);
    for (int i = 0; i < n; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_array() ||
            static_cast<int>(j[static_cast<std::size_t>(i)].size()) != n)
            bad("matrix must be square (row " + std::to_string(i) + ")");
        for (int c = 0; c < n; ++c)
            m.at(i, c) = parse(j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]);
    }
    return m;
}

}  // namespace

json mat_to_json(const MatSeries& m) {
    json rows = json::array();
    for (int i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (int c = 0; c < m.size(); ++c) row.push_back(series_to_json(m.at(i, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json mat_to_json(const MatPoly& m) {
    json rows = json::array();
    for (int i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (int c = 0; c < m.size(); ++c) row.push_back(poly_to_json(m.at(i, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json mat_to_json(const MatFraction& m) {
    json rows = json::array();
    for (int i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (int c = 0; c < m.size(); ++c) row.push_back(fraction_to_json(m.at(i, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

MatSeries mat_series_from_json(const RingPtr& ring, const json& j) {
    return mat_from_json<TruncatedSeries>(
        ring, j, [&](const json& e) { return series_from_json(ring, e); });
}

MatPoly mat_poly_from_json(const RingPtr& ring, const json& j) {
    return mat_from_json<LaurentPoly>(ring, j,
                                      [&](const json& e) { return poly_from_json(ring, e); });
}

MatFraction mat_fraction_from_json(const RingPtr& ring, const json& j) {
    return mat_from_json<BFraction>(
        ring, j, [&](const json& e) { return fraction_from_json(ring, e); });
}

bool mat_json_is_exact(const json& j) {
    if (!j.is_array()) return false;
    for (const auto& row : j) {
        if (!row.is_array()) return false;
        for (const auto& e : row) {
            if (!e.is_object()) return false;
            if (looks_like_fraction(e)) continue;
            if (!e.contains("prec") || !e["prec"].is_null()) return false;
        }
    }
    return true;
}

json witness_to_json(const UnitWitness& w) {
    return json{{"j", w.unit_degree},
                {"N", poly_to_json(w.nil_part)},
                {"Q", poly_to_json(w.unit_part)},
                {"window_only", w.window_only}};
}

json series_class_to_json(const SeriesClass& c) {
    switch (c.kind) {
        case SeriesClass::Kind::unit: {
            if (c.component_rings.empty())
                return json{{"kind", "unit"}, {"witness", witness_to_json(c.witnesses[0])}};
            json comps = json::array();
            for (std::size_t i = 0; i < c.witnesses.size(); ++i)
                comps.push_back(json{{"modulus", c.component_rings[i]->modulus()},
                                     {"witness", witness_to_json(c.witnesses[i])}});
            return json{{"kind", "unit"}, {"components", std::move(comps)}};
        }
        case SeriesClass::Kind::not_unit: {
            json out{{"kind", "not_unit"}};
            if (c.nilpotency_index) out["nilpotency_index"] = *c.nilpotency_index;
            return out;
        }
        case SeriesClass::Kind::undecidable:
            return json{{"kind", "undecidable"}};
    }
    bad("unknown classification kind");
}

json membership_to_json(const Membership& m) {
    json out;
    switch (m.kind) {
        case Membership::Kind::yes:
            out["membership"] = "yes";
            break;
        case Membership::Kind::no:
            out["membership"] = "no";
            break;
        case Membership::Kind::undecidable:
            out["membership"] = "undecidable";
            break;
    }
    if (m.witness_degree) out["witness_degree"] = *m.witness_degree;
    if (m.entry) out["entry"] = json::array({m.entry->first, m.entry->second});
    if (!m.reason.empty()) out["reason"] = m.reason;
    return out;
}

json coset_to_json(const CosetResult& r) {
    json out;
    switch (r.kind) {
        case CosetResult::Kind::equal:
            out["coset"] = "equal";
            break;
        case CosetResult::Kind::not_equal:
            out["coset"] = "not_equal";
            break;
        case CosetResult::Kind::undecidable:
            out["coset"] = "undecidable";
            break;
    }
    out["detail"] = membership_to_json(r.detail);
    return out;
}

json factorization_to_json(const Factorization& f) {
    json out{{"g", mat_to_json(f.g)},
             {"delta", mat_to_json(f.delta)},
             {"truncation_order", f.truncation_order},
             {"certificates",
              json{{"det_g", series_class_to_json(f.det_g_class)},
                   {"det_delta0_inverse", element_to_json(f.det_delta0_inverse)}}}};
    if (f.achieved_prec)
        out["prec"] = *f.achieved_prec;
    else
        out["prec"] = nullptr;
    return out;
}

json triple_to_json(const BundleTriple& t) {
    json out{{"n", t.transition.rank()}, {"g", mat_to_json(t.transition.matrix())}};
    if (t.formal_delta)
        out["delta"] = mat_to_json(*t.formal_delta);
    else
        out["delta"] = nullptr;
    return out;
}

BundleTriple triple_from_json(const RingPtr& ring, const json& j) {
    expect_object(j, "bundle triple");
    if (!j.contains("n") || !j.contains("g")) bad("triple needs \"n\" and \"g\"");
    const MatFraction g = mat_fraction_from_json(ring, j["g"]);
    if (g.size() != j["n"].get<int>()) bad("triple rank does not match its matrix");
    std::optional<MatSeries> delta;
    if (j.contains("delta") && !j["delta"].is_null())
        delta = mat_series_from_json(ring, j["delta"]);
    return BundleTriple{TransitionDatum::certify(g), std::move(delta)};
}

json sections_to_json(const SectionSpace& s) {
    json basis = json::array();
    for (const auto& pair : s.basis) {
        json sj = json::array();
        for (const auto& p : pair.s) sj.push_back(poly_to_json(p));
        json tj = json::array();
        for (const auto& p : pair.t) {
            // polynomial in w = 1/z: list coefficients in ascending w-degree
            json w_coeffs = json::array();
            const int wdeg = p.is_zero() ? 0 : -*p.min_degree();
            for (int k = 0; k <= wdeg; ++k) w_coeffs.push_back(element_to_json(p.coeff(-k)));
            tj.push_back(json{{"w_coeffs", std::move(w_coeffs)}});
        }
        basis.push_back(json{{"s", std::move(sj)}, {"t", std::move(tj)}});
    }
    return json{{"twist", s.twist}, {"dimension", s.dimension}, {"basis", std::move(basis)}};
}

}  // namespace p1glue
