#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "postlr/trees.hpp"

namespace postlr {

using Rational = mpq_class;

// Canonicalized num/den; den must be nonzero.
Rational rational(long num, long den = 1);
std::string format(const Rational& q);

// Named generator of R with the tree-indexed derivations applied to it, innermost first.
struct AromaGenerator {
    std::string base;
    int base_degree = 0;
    std::vector<PlanarTree> applied;

    AromaGenerator() = default;
    AromaGenerator(std::string b, int d, std::vector<PlanarTree> a = {})
        : base(std::move(b)), base_degree(d), applied(std::move(a)) {}

    // Set by intern(): bytes ordered like (base, applied), and their first 8 bytes big-endian.
    // Interned generators compare through these instead of walking the tree lists.
    std::string order_key;
    std::uint64_t order_prefix = 0;

    int degree() const;
    AromaGenerator derived_by(const PlanarTree& tau) const;

    // Identity is (base, applied); base_degree is a property of the base symbol.
    friend bool operator==(const AromaGenerator& a, const AromaGenerator& b) {
        return a.base == b.base && a.applied == b.applied;
    }
    friend std::strong_ordering operator<=>(const AromaGenerator& a, const AromaGenerator& b);
};

std::string format(const AromaGenerator& g);

// Base symbol -> base degree. Unknown symbols have degree 0.
class GeneratorRegistry {
public:
    GeneratorRegistry();  // preloaded with the trace aroma
    void set_base_degree(const std::string& base, int degree);
    int base_degree(const std::string& base) const;
    AromaGenerator make(const std::string& base) const { return {base, base_degree(base), {}}; }

private:
    std::map<std::string, int> degrees_;
};

// Symbol of the degree-2 aroma sum_i E_i[F[f^i]].
inline constexpr const char* kTraceAroma = "a2";
AromaGenerator trace_aroma();

// Canonical shared copy of a generator. Equal generators (including base degree) intern to
// the same address, which stays valid for the life of the process. Thread-safe.
const AromaGenerator* intern(const AromaGenerator& g);

// Commutative monomial: interned generators with positive exponents, sorted by generator.
class Monomial {
public:
    using Factor = std::pair<const AromaGenerator*, int>;

    Monomial() = default;
    explicit Monomial(const AromaGenerator& g, int exponent = 1);

    const std::vector<Factor>& factors() const noexcept { return factors_; }
    bool is_one() const noexcept { return factors_.empty(); }
    int degree() const noexcept { return degree_; }
    Monomial operator*(const Monomial& other) const;

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors_ == b.factors_; }
    // Degree first, then lexicographic over factors.
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

private:
    Monomial(const AromaGenerator* g, int exponent);

    std::vector<Factor> factors_;
    int degree_ = 0;
};

std::string format(const Monomial& m);

// Element of R: exact rational polynomial in aroma generators.
class CoeffPoly {
public:
    using TermMap = std::map<Monomial, Rational>;

    CoeffPoly() = default;
    CoeffPoly(const Rational& c);  // NOLINT(google-explicit-constructor): constants embed in R
    CoeffPoly(long c) : CoeffPoly(Rational(c)) {}  // NOLINT
    CoeffPoly(int c) : CoeffPoly(Rational(c)) {}  // NOLINT
    explicit CoeffPoly(const AromaGenerator& g);
    CoeffPoly(const Monomial& m, const Rational& c);

    static CoeffPoly parse(std::string_view text, const GeneratorRegistry& registry = GeneratorRegistry());

    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    int max_degree() const;  // -1 for zero
    int min_degree() const;  // -1 for zero

    void add_term(const Monomial& m, const Rational& c);
    // this += q * f without materializing q * f.
    void add_scaled(const CoeffPoly& f, const Rational& q);

    CoeffPoly& operator+=(const CoeffPoly& o);
    CoeffPoly& operator-=(const CoeffPoly& o);
    CoeffPoly& operator*=(const Rational& c);
    friend CoeffPoly operator+(CoeffPoly a, const CoeffPoly& b) { return a += b; }
    friend CoeffPoly operator-(CoeffPoly a, const CoeffPoly& b) { return a -= b; }
    friend CoeffPoly operator-(CoeffPoly a) { return a *= Rational(-1); }
    friend CoeffPoly operator*(const CoeffPoly& a, const CoeffPoly& b);
    friend CoeffPoly operator*(CoeffPoly a, const Rational& c) { return a *= c; }
    friend CoeffPoly operator*(const Rational& c, CoeffPoly a) { return a *= c; }
    friend bool operator==(const CoeffPoly& a, const CoeffPoly& b) { return a.terms_ == b.terms_; }

private:
    TermMap terms_;
};

CoeffPoly poly_add(const CoeffPoly& a, const CoeffPoly& b);
CoeffPoly poly_mul(const CoeffPoly& a, const CoeffPoly& b);

std::string format(const CoeffPoly& p);
CoeffPoly parse_poly(std::string_view text, const GeneratorRegistry& registry = GeneratorRegistry());

// Free derivation indexed by tau: appends tau to each generator, Leibniz on monomials.
CoeffPoly derive(const PlanarTree& tau, const CoeffPoly& f);

// Free: derivations act freely. Zero: every derivation vanishes (rational-scalar mode).
enum class DerivationMode { Free, Zero };

CoeffPoly derive(const PlanarTree& tau, const CoeffPoly& f, DerivationMode mode);

}  // namespace postlr
