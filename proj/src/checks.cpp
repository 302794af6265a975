#include "postlr/checks.hpp"

#include <atomic>
#include <thread>

#include "postlr/errors.hpp"

namespace postlr {

std::string format(const CheckReport& r) {
    std::string out = "axiom=" + r.id + " cases=" + std::to_string(r.cases) +
                      " status=" + (r.passed() ? "pass" : "fail");
    if (r.counterexample) out += " witness=" + *r.counterexample;
    return out;
}

Sampler Sampler::for_case(std::uint64_t seed, const std::string& check_id, std::uint64_t index) {
    // FNV-1a over the id, mixed with the seed and index.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : check_id) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    h ^= seed * 0x9e3779b97f4a7c15ULL;
    h ^= (index + 1) * 0xbf58476d1ce4e5b9ULL;
    return Sampler(h);
}

CoeffPoly Sampler::coefficient() {
    static const char* const pool[] = {"1",     "-1",      "2",     "g",       "h",     "g*h",
                                       "1/2 + g", "g - h", "g^2",   "-3*h + g*h", "g^(o)", "1/3*h^(o) + g"};
    return parse_poly(pool[below(sizeof(pool) / sizeof(pool[0]))]);
}

AlgebroidElement Sampler::element(int max_grade, int max_terms) {
    const auto basis = enumerate_forests(max_grade, std::max(max_grade, kDefaultEnumerationBound));
    AlgebroidElement out;
    const int terms = 1 + static_cast<int>(below(static_cast<std::uint64_t>(max_terms)));
    for (int i = 0; i < terms; ++i) out.add_term(basis[below(basis.size())], coefficient());
    return out;
}

AlgebroidElement Sampler::primitive(int max_vertices) {
    const int n = 1 + static_cast<int>(below(static_cast<std::uint64_t>(max_vertices)));
    const auto trees = enumerate_trees(n);
    return AlgebroidElement::tree(trees[below(trees.size())], coefficient());
}

namespace {

std::vector<Forest> basis_for(CaseBasis basis, int max_grade) {
    std::vector<Forest> out;
    for (const auto& f : enumerate_forests(max_grade, std::max(max_grade, kDefaultEnumerationBound))) {
        if (basis == CaseBasis::Trees && f.length() != 1) continue;
        out.push_back(f);
    }
    return out;
}

// Index-addressable enumeration of exhaustive tuples.
struct Exhaustive {
    std::vector<std::vector<std::size_t>> tuples;
};

Exhaustive exhaustive_tuples(const std::vector<Forest>& basis, int arity, int max_grade, TupleGrade mode) {
    Exhaustive out;
    std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
    if (basis.empty()) return out;
    for (;;) {
        int total = 0;
        for (auto i : idx) total += basis[i].grade();
        if (mode == TupleGrade::PerElement || total <= max_grade) out.tuples.push_back(idx);
        int k = arity - 1;
        while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == basis.size()) {
            idx[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return out;
}

}  // namespace

CheckReport run_check(const CheckSpec& spec, const SuiteConfig& config) {
    const auto basis = basis_for(spec.basis, config.max_grade);
    const Exhaustive ex = exhaustive_tuples(basis, spec.arity, config.max_grade, config.tuple_grade);
    const std::size_t n_exhaustive = ex.tuples.size();
    const std::size_t n_total = n_exhaustive + static_cast<std::size_t>(std::max(0, config.samples));

    const int sample_grade = config.sample_grade;
    const auto sample_basis = enumerate_forests(sample_grade, std::max(sample_grade, kDefaultEnumerationBound));

    auto build_case = [&](std::size_t index) {
        Sampler s = Sampler::for_case(config.seed, spec.id, index);
        Case c;
        // Per-element grade caps; in total-grade mode a uniform composition with sum <= sample_grade.
        std::vector<int> caps(static_cast<std::size_t>(spec.arity), sample_grade);
        if (config.tuple_grade == TupleGrade::Total && index >= n_exhaustive && spec.arity > 1) {
            const int lo = spec.basis == CaseBasis::Trees ? 1 : 0;
            for (;;) {
                int sum = 0;
                for (auto& g : caps) {
                    g = lo + static_cast<int>(s.below(static_cast<std::uint64_t>(std::max(0, sample_grade - lo)) + 1));
                    sum += g;
                }
                if (sum <= sample_grade) break;
            }
        }
        for (int k = 0; k < spec.arity; ++k) {
            const int cap = caps[static_cast<std::size_t>(k)];
            if (index < n_exhaustive) {
                const Forest& w = basis[ex.tuples[index][static_cast<std::size_t>(k)]];
                const CoeffPoly coef = spec.basis == CaseBasis::PureForests ? CoeffPoly(1) : s.coefficient();
                c.x.push_back(AlgebroidElement::word(w, coef));
            } else if (spec.basis == CaseBasis::Trees) {
                c.x.push_back(s.primitive(std::max(1, cap)));
            } else if (spec.basis == CaseBasis::PureForests) {
                std::size_t n = 0;
                while (n < sample_basis.size() && sample_basis[n].grade() <= cap) ++n;
                c.x.push_back(AlgebroidElement::word(sample_basis[s.below(n)]));
            } else {
                c.x.push_back(s.element(cap));
            }
        }
        for (int k = 0; k < spec.scalars; ++k) c.f.push_back(s.coefficient());
        return c;
    };

    std::vector<std::optional<std::string>> results(n_total);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> first_failure{n_total};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_total) return;
            // Cases past a known failure cannot change the reported witness.
            if (i > first_failure.load()) continue;
            const Case c = build_case(i);
            std::optional<std::string> r;
            try {
                r = spec.check(c);
            } catch (const std::exception& e) {
                r = std::string("exception: ") + e.what();
            }
            if (r) {
                results[i] = *r + " at " + describe(c);
                std::size_t cur = first_failure.load();
                while (i < cur && !first_failure.compare_exchange_weak(cur, i)) {
                }
            }
        }
    };
    const int threads = std::max(1, config.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    CheckReport report;
    report.id = spec.id;
    report.max_grade = config.max_grade;
    report.cases = static_cast<long>(n_total);
    for (std::size_t i = 0; i < n_total; ++i) {
        if (results[i]) {
            report.counterexample = results[i];
            break;
        }
    }
    return report;
}

std::vector<CheckReport> run_checks(const std::vector<CheckSpec>& specs, const SuiteConfig& config) {
    std::vector<CheckReport> out;
    out.reserve(specs.size());
    for (const auto& s : specs) out.push_back(run_check(s, config));
    return out;
}

std::vector<std::array<AlgebroidElement, 2>> sweedler(const AlgebroidElement& x) {
    std::vector<std::array<AlgebroidElement, 2>> out;
    const TensorElement d = coproduct(x);
    for (const auto& [k, c] : d.terms()) {
        out.push_back({AlgebroidElement::word(k[0], c), AlgebroidElement::word(k[1])});
    }
    return out;
}

std::vector<std::array<AlgebroidElement, 3>> sweedler3(const AlgebroidElement& x) {
    std::vector<std::array<AlgebroidElement, 3>> out;
    const Tensor<3> d = coproduct2(x);
    for (const auto& [k, c] : d.terms()) {
        out.push_back({AlgebroidElement::word(k[0], c), AlgebroidElement::word(k[1]), AlgebroidElement::word(k[2])});
    }
    return out;
}

std::optional<std::string> expect_equal(const AlgebroidElement& lhs, const AlgebroidElement& rhs) {
    if (lhs == rhs) return std::nullopt;
    return "lhs={" + format_inline(lhs) + "} rhs={" + format_inline(rhs) + "}";
}

std::optional<std::string> expect_equal(const CoeffPoly& lhs, const CoeffPoly& rhs) {
    if (lhs == rhs) return std::nullopt;
    return "lhs={" + format(lhs) + "} rhs={" + format(rhs) + "}";
}

std::string describe(const Case& c) {
    std::string out;
    const char* names[] = {"x", "y", "z", "w"};
    for (std::size_t i = 0; i < c.x.size(); ++i) {
        if (!out.empty()) out += ' ';
        out += std::string(i < 4 ? names[i] : "e") + "={" + format_inline(c.x[i]) + "}";
    }
    for (std::size_t i = 0; i < c.f.size(); ++i) out += " f" + std::to_string(i) + "={" + format(c.f[i]) + "}";
    return out;
}

}  // namespace postlr
