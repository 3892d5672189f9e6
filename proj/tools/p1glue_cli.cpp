// Batch JSON-in/JSON-out front end: one subcommand per library operation,
// deterministic output for scripting and golden-file tests.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "p1glue/json_io.hpp"

namespace {

using p1glue::json;

struct Request {
    std::string ring_json;
    std::string input;
    std::string out_path;
    std::optional<int> prec;
    std::optional<std::uint64_t> seed;
};

json load_input(const std::string& source) {
    if (source.empty()) throw p1glue::ParseError("missing input");
    std::string text;
    if (source.front() == '{' || source.front() == '[') {
        text = source;
    } else {
        std::ifstream in(source);
        if (!in.is_open()) throw p1glue::ParseError("cannot open input file " + source);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw p1glue::ParseError(std::string("malformed JSON input: ") + e.what());
    }
}

p1glue::RingPtr load_ring(const std::string& source) {
    return p1glue::ring_from_json(load_input(source));
}

// Accept a bare matrix (nested array) or an object carrying one under a
// conventional key, so outputs of other subcommands feed back in directly.
const json& matrix_slot(const json& j) {
    if (j.is_array()) return j;
    if (j.is_object())
        for (const char* key : {"matrix", "gamma", "g", "delta"})
            if (j.contains(key) && !j[key].is_null()) return j[key];
    throw p1glue::ParseError("no matrix found in input");
}

const json& scalar_slot(const json& j) {
    if (j.is_object() && !j.contains("coeffs") && !j.contains("num"))
        for (const char* key : {"f", "inverse"})
            if (j.contains(key)) return j[key];
    return j;
}

int require_prec(const Request& req) {
    if (!req.prec) throw p1glue::ParseError("this subcommand requires --prec");
    return *req.prec;
}

void emit(const Request& req, const json& doc) {
    const std::string text = doc.dump(2) + "\n";
    if (req.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(req.out_path, std::ios::binary);
        if (!out.is_open())
            throw p1glue::ParseError("cannot open output file " + req.out_path);
        out << text;
    }
}

int exit_code_for(const std::string& code) {
    if (code == "not_a_unit" || code == "not_invertible" || code == "singular_matrix")
        return 2;
    if (code == "precision_exhausted" || code == "undecidable" || code == "cap_exceeded")
        return 3;
    if (code == "parse_error" || code == "mixed_rings" || code == "unsupported_ring" ||
        code == "unsupported_transition")
        return 4;
    return 1;
}

int run_invert(const Request& req) {
    const auto ring = load_ring(req.ring_json);
    const json in = load_input(req.input);
    const auto f = p1glue::fraction_from_json(ring, scalar_slot(in));
    const auto inv = p1glue::invert_in_b(f);
    emit(req, json{{"inverse", p1glue::fraction_to_json(inv)},
                   {"certificate", p1glue::series_class_to_json(
                                       p1glue::classify_series_unit(f.num()))}});
    return 0;
}

int run_classify(const Request& req) {
    const auto ring = load_ring(req.ring_json);
    const json in = load_input(req.input);
    const auto s = p1glue::series_from_json(ring, scalar_slot(in));
    const auto cls = p1glue::classify_series_unit(s);
    emit(req, p1glue::series_class_to_json(cls));
    return cls.kind == p1glue::SeriesClass::Kind::undecidable ? 3 : 0;
}

int run_factorize(const Request& req) {
    const auto ring = load_ring(req.ring_json);
    const json in = load_input(req.input);
    const auto gamma = p1glue::mat_series_from_json(ring, matrix_slot(in));
    const auto f = p1glue::factorize(gamma, require_prec(req));
    emit(req, p1glue::factorization_to_json(f));
    return 0;
}

int run_membership(const Request& req) {
    const auto ring = load_ring(req.ring_json);
    const json in = load_input(req.input);
    const json& m = matrix_slot(in);
    p1glue::Membership result;
    if (p1glue::mat_json_is_exact(m)) {
        result = p1glue::membership_gl_power_series(p1glue::mat_fraction_from_json(ring, m));
    } else {
        // truncated input: analyze at the requested precision
        const auto gamma = p1glue::mat_series_from_json(ring, m);
        result = p1glue::membership_gl_power_series(p1glue::truncated(gamma, require_prec(req)));
    }
    emit(req, p1glue::membership_to_json(result));
    return result.kind == p1glue::Membership::Kind::undecidable ? 3 : 0;
}

int run_cartan(const Request& req) {
    const auto ring = load_ring(req.ring_json);
    const json in = load_input(req.input);
    const auto m = p1glue::mat_poly_from_json(ring, matrix_slot(in));
    emit(req, json(p1glue::cartan_type(m)));
    return 0;
}

int run_coset(const Request& req) {
    const auto ring = load_ring(req.ring_json);
    const json in = load_input(req.input);
    if (!in.is_object() || !in.contains("gamma1") || !in.contains("gamma2"))
        throw p1glue::ParseError("coset input needs \"gamma1\" and \"gamma2\"");
    p1glue::CosetResult r;
    if (p1glue::mat_json_is_exact(in["gamma1"]) && p1glue::mat_json_is_exact(in["gamma2"])) {
        r = p1glue::coset_equal(p1glue::mat_fraction_from_json(ring, in["gamma1"]),
                                p1glue::mat_fraction_from_json(ring, in["gamma2"]));
    } else {
        r = p1glue::coset_equal(p1glue::mat_series_from_json(ring, in["gamma1"]),
                                p1glue::mat_series_from_json(ring, in["gamma2"]),
                                require_prec(req));
    }
    emit(req, p1glue::coset_to_json(r));
    return r.kind == p1glue::CosetResult::Kind::undecidable ? 3 : 0;
}

int run_glue(const Request& req) {
    const auto ring = load_ring(req.ring_json);
    const json in = load_input(req.input);
    const auto g = p1glue::mat_fraction_from_json(ring, matrix_slot(in));
    emit(req, p1glue::triple_to_json(p1glue::bundle_from_matrix(g)));
    return 0;
}

int run_transition(const Request& req) {
    const auto ring = load_ring(req.ring_json);
    const auto t = p1glue::triple_from_json(ring, load_input(req.input));
    emit(req, p1glue::mat_to_json(p1glue::transition_of_triple(t)));
    return 0;
}

int run_formal(const Request& req) {
    const auto ring = load_ring(req.ring_json);
    const json in = load_input(req.input);
    const auto gamma = p1glue::mat_series_from_json(ring, matrix_slot(in));
    emit(req, p1glue::triple_to_json(p1glue::formal_from_matrix(gamma, require_prec(req))));
    return 0;
}

std::pair<p1glue::TransitionDatum, int> transition_and_twist(const Request& req) {
    const auto ring = load_ring(req.ring_json);
    const json in = load_input(req.input);
    int twist = 0;
    if (in.is_object() && in.contains("m")) twist = in["m"].get<int>();
    const auto g = p1glue::mat_fraction_from_json(ring, matrix_slot(in));
    return {p1glue::TransitionDatum::certify(g), twist};
}

int run_sections(const Request& req) {
    const auto [g, twist] = transition_and_twist(req);
    emit(req, p1glue::sections_to_json(p1glue::global_sections(g, twist)));
    return 0;
}

int run_h1(const Request& req) {
    const auto [g, twist] = transition_and_twist(req);
    emit(req, json{{"twist", twist}, {"h1", p1glue::cech_h1(g, twist)}});
    return 0;
}

int run_splitting(const Request& req) {
    const auto [g, twist] = transition_and_twist(req);
    (void)twist;
    emit(req, json(p1glue::splitting_type(g)));
    return 0;
}

int run_random(const Request& req) {
    const auto ring = load_ring(req.ring_json);
    const json in = load_input(req.input);
    if (!req.seed) throw p1glue::ParseError("random requires --seed");
    if (!in.is_object() || !in.contains("kind") || !in.contains("n"))
        throw p1glue::ParseError("random input needs \"kind\" and \"n\"");
    const std::string kind = in["kind"].get<std::string>();
    const int n = in["n"].get<int>();
    if (n < 1) throw p1glue::ParseError("rank must be >= 1");
    json out{{"kind", kind}, {"n", n}, {"seed", *req.seed}};
    if (kind == "power_series_unit") {
        out["matrix"] = p1glue::mat_to_json(p1glue::random_power_series_unit(ring, n, *req.seed));
    } else if (kind == "b_matrix") {
        out["matrix"] =
            p1glue::mat_to_json(p1glue::to_fractions(p1glue::random_b_matrix(ring, n, *req.seed)));
    } else if (kind == "product") {
        const int prec = require_prec(req);
        const auto sample = p1glue::random_product(ring, n, prec, *req.seed);
        out["prec"] = prec;
        out["gamma"] = p1glue::mat_to_json(sample.gamma);
        out["g0"] = p1glue::mat_to_json(p1glue::to_fractions(sample.g0));
        out["delta0"] = p1glue::mat_to_json(sample.delta0);
    } else {
        throw p1glue::ParseError("unknown random kind \"" + kind + "\"");
    }
    emit(req, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Beauville-Laszlo gluing: Laurent-series matrix factorization "
                 "and vector bundles on the projective line"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* desc;
        int (*run)(const Request&);
        Request req;
    };
    std::vector<Sub> subs = {
        {"invert", "invert a unit of B = R[z, z^-1, P^-1]", run_invert, {}},
        {"classify", "unit/nilpotent classification of a series", run_classify, {}},
        {"factorize", "factor gamma = g * delta with delta in GL_n(R[[z]])", run_factorize, {}},
        {"membership", "test membership in GL_n(R[[z]])", run_membership, {}},
        {"cartan", "Cartan type of an exact Laurent-polynomial matrix", run_cartan, {}},
        {"coset", "left-coset equality modulo GL_n(R[[z]])", run_coset, {}},
        {"glue", "build the bundle triple for a transition matrix", run_glue, {}},
        {"transition", "transition matrix of a bundle triple", run_transition, {}},
        {"formal", "factor-then-glue a Laurent-series matrix", run_formal, {}},
        {"sections", "global sections of E(m) over a field", run_sections, {}},
        {"h1", "dim H^1(E(m)) by the two-chart cover", run_h1, {}},
        {"splitting", "splitting type of the glued bundle", run_splitting, {}},
        {"random", "seeded generator for test fixtures", run_random, {}},
    };

    for (auto& sub : subs) {
        auto* cmd = app.add_subcommand(sub.name, sub.desc);
        cmd->add_option("input", sub.req.input, "input path or inline JSON");
        cmd->add_option("--ring", sub.req.ring_json, "ring descriptor (inline JSON or path)")
            ->required();
        cmd->add_option("--prec", sub.req.prec, "working z-adic precision");
        cmd->add_option("--seed", sub.req.seed, "seed for deterministic randomness");
        cmd->add_option("--out", sub.req.out_path, "output path (default: stdout)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 4;
    }

    for (const auto& sub : subs) {
        if (!app.get_subcommand(sub.name)->parsed()) continue;
        try {
            return sub.run(sub.req);
        } catch (const p1glue::Error& e) {
            json err{{"error", e.code()}, {"message", e.what()}};
            std::cerr << err.dump(2) << "\n";
            return exit_code_for(e.code());
        } catch (const std::exception& e) {
            json err{{"error", "internal"}, {"message", e.what()}};
            std::cerr << err.dump(2) << "\n";
            return 1;
        }
    }
    return 4;
}
