#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "postlr/algebroid.hpp"

namespace postlr {

// Outcome of one identity checked over many cases.
struct CheckReport {
    std::string id;
    int max_grade = 0;
    long cases = 0;
    std::optional<std::string> counterexample;  // first failing case by index

    bool passed() const noexcept { return !counterexample.has_value(); }
};

// "axiom=<id> cases=<n> status=pass|fail [witness=...]"
std::string format(const CheckReport& r);

enum class TupleGrade { PerElement, Total };

struct SuiteConfig {
    int max_grade = 3;  // exhaustive basis bound
    TupleGrade tuple_grade = TupleGrade::PerElement;
    int samples = 200;  // random cases on top of the exhaustive ones
    int sample_grade = 4;
    std::uint64_t seed = 7;
    int threads = 1;
};

// Deterministic source of random coefficients and elements. Portable: only raw
// mt19937_64 output is used, never the implementation-defined distributions.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    static Sampler for_case(std::uint64_t seed, const std::string& check_id, std::uint64_t index);

    std::uint64_t below(std::uint64_t n) { return rng_() % n; }
    CoeffPoly coefficient();
    // 1 to max_terms basis forests of grade <= max_grade, each with a random coefficient.
    AlgebroidElement element(int max_grade, int max_terms = 2);
    // Single trees of at most max_vertices vertices with a random coefficient.
    AlgebroidElement primitive(int max_vertices);

private:
    std::mt19937_64 rng_;
};

// A test case: elements plus auxiliary coefficients.
struct Case {
    std::vector<AlgebroidElement> x;
    std::vector<CoeffPoly> f;
};

using CaseCheck = std::function<std::optional<std::string>(const Case&)>;

// Basis for exhaustive cases; by default all forests of the configured grade.
enum class CaseBasis { Forests, Trees, PureForests };

struct CheckSpec {
    std::string id;
    int arity = 1;        // number of elements
    int scalars = 0;      // number of auxiliary coefficients
    CaseBasis basis = CaseBasis::Forests;
    CaseCheck check;
};

// Runs spec.check on every exhaustive basis tuple (with random coefficients) and then on
// config.samples random tuples; cases run on config.threads workers, merged by index.
CheckReport run_check(const CheckSpec& spec, const SuiteConfig& config);
std::vector<CheckReport> run_checks(const std::vector<CheckSpec>& specs, const SuiteConfig& config);

// Sweedler terms of Delta(x) with the coefficient on the first factor.
std::vector<std::array<AlgebroidElement, 2>> sweedler(const AlgebroidElement& x);
// Delta^2 = (Delta (x) id) Delta, coefficient on the first factor.
std::vector<std::array<AlgebroidElement, 3>> sweedler3(const AlgebroidElement& x);

// Describes a mismatch, or nullopt when equal.
std::optional<std::string> expect_equal(const AlgebroidElement& lhs, const AlgebroidElement& rhs);
template <std::size_t N>
std::optional<std::string> expect_equal(const Tensor<N>& lhs, const Tensor<N>& rhs) {
    if (lhs == rhs) return std::nullopt;
    return "lhs={" + format_inline(lhs) + "} rhs={" + format_inline(rhs) + "}";
}
std::optional<std::string> expect_equal(const CoeffPoly& lhs, const CoeffPoly& rhs);

std::string describe(const Case& c);

}  // namespace postlr
