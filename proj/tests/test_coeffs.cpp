#include <random>

#include "doctest.h"
#include "postlr/coeffs.hpp"
#include "postlr/errors.hpp"

using namespace postlr;

namespace {

const PlanarTree o;

CoeffPoly gen(const char* base) { return CoeffPoly(AromaGenerator{base, 0, {}}); }

// Random polynomial of degree <= 3 in g, h, g^(o) with small integer coefficients.
CoeffPoly random_poly(std::mt19937_64& rng) {
    const AromaGenerator pool[] = {{"g", 0, {}}, {"h", 0, {}}, {"g", 0, {o}}};
    CoeffPoly out;
    const int terms = static_cast<int>(rng() % 4);
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        const int deg = static_cast<int>(rng() % 4);
        for (int d = 0; d < deg; ++d) m = m * Monomial(pool[rng() % 3]);
        const long num = static_cast<long>(rng() % 7) - 3;
        const long den = static_cast<long>(rng() % 3) + 1;
        out.add_term(m, rational(num, den));
    }
    return out;
}

}  // namespace

TEST_CASE("ring units") {
    const CoeffPoly f = gen("g") * gen("h") + CoeffPoly(rational(1, 2));
    CHECK(f + CoeffPoly() == f);
    CHECK(f * CoeffPoly(1) == f);
    CHECK((f * CoeffPoly()).is_zero());
    CHECK((f - f).is_zero());
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const CoeffPoly f = random_poly(rng), g = random_poly(rng), h = random_poly(rng);
        CHECK((f + g) * h == f * h + g * h);
        CHECK(f * g == g * f);
        CHECK((f * g) * h == f * (g * h));
        CHECK((f + g) + h == f + (g + h));
    }
}

TEST_CASE("degree additivity on monomials") {
    const AromaGenerator a{"g", 0, {o, parse_tree("[o]")}};
    const AromaGenerator b = trace_aroma();
    CHECK(a.degree() == 3);
    CHECK(b.degree() == 2);
    CHECK((Monomial(a) * Monomial(b, 2)).degree() == 3 + 4);
}

TEST_CASE("free derivation examples") {
    const CoeffPoly g = gen("g"), h = gen("h");
    const CoeffPoly g_o(AromaGenerator{"g", 0, {o}});
    const CoeffPoly h_o(AromaGenerator{"h", 0, {o}});
    CHECK(derive(o, g) == g_o);
    CHECK(derive(o, CoeffPoly(1)).is_zero());
    CHECK(derive(o, g * h) == g_o * h + g * h_o);
    CHECK(format(derive(o, g)) == "g^(o)");
    // Derivations by different trees do not commute.
    const PlanarTree chain = parse_tree("[o]");
    CHECK(derive(o, derive(chain, g)) != derive(chain, derive(o, g)));
    CHECK(derive(o, g, DerivationMode::Zero).is_zero());
}

TEST_CASE("derivation laws on random polynomials") {
    std::mt19937_64 rng(5);
    const PlanarTree taus[] = {o, parse_tree("[o]"), parse_tree("[oo]")};
    for (int i = 0; i < 200; ++i) {
        const CoeffPoly f = random_poly(rng), g = random_poly(rng);
        const PlanarTree& tau = taus[i % 3];
        CHECK(derive(tau, f + g) == derive(tau, f) + derive(tau, g));
        CHECK(derive(tau, f * g) == derive(tau, f) * g + f * derive(tau, g));
        CHECK(derive(tau, CoeffPoly(rational(i, 7))).is_zero());
        const CoeffPoly df = derive(tau, f);
        for (const auto& [m, c] : df.terms()) {
            (void)c;
            CHECK(m.degree() >= tau.vertex_count());
        }
    }
}

TEST_CASE("printing and parsing") {
    const CoeffPoly g = gen("g");
    const CoeffPoly p = CoeffPoly(rational(-3, 2)) + CoeffPoly(AromaGenerator{"g", 0, {o, parse_tree("[o]")}}) -
                        g * g * CoeffPoly(rational(2, 5));
    const std::string s = format(p);
    CHECK(s == "-3/2 - 2/5*g^2 + g^(o,[o])");
    CHECK(parse_poly(s) == p);
    CHECK(format(parse_poly("a2")) == "a2");
    CHECK(parse_poly("a2").terms().begin()->first.degree() == 2);
    CHECK(parse_poly("1/2*g*h - h*g") == CoeffPoly(rational(-1, 2)) * gen("g") * gen("h"));
    CHECK(format(CoeffPoly()) == "0");
    CHECK_THROWS_AS(parse_poly("g +"), ParseError);
    CHECK_THROWS_AS(parse_poly("g^(o"), ParseError);
    CHECK_THROWS_AS(parse_poly("g^(x)"), ParseError);
}
