#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "postlr/coeffs.hpp"
#include "postlr/trees.hpp"

namespace postlr {

// Element of H = R (x) T(V), V spanned by planar trees. Terms keyed by forest in canonical order.
class AlgebroidElement {
public:
    using TermMap = std::map<Forest, CoeffPoly>;

    AlgebroidElement() = default;

    static AlgebroidElement unit() { return word(Forest()); }
    static AlgebroidElement scalar(const CoeffPoly& f) { return word(Forest(), f); }
    static AlgebroidElement word(const Forest& w, const CoeffPoly& c = CoeffPoly(1));
    static AlgebroidElement tree(const PlanarTree& t, const CoeffPoly& c = CoeffPoly(1)) {
        return word(Forest(t), c);
    }
    // Lines "coeff | forest" separated by ';' or newlines; a bare forest has coefficient 1.
    static AlgebroidElement parse(std::string_view text, const GeneratorRegistry& registry = GeneratorRegistry());

    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    // True when every coefficient is a rational constant.
    bool is_pure() const;
    int max_grade() const;  // forest grade + coefficient degree; -1 for zero
    int min_grade() const;
    CoeffPoly coefficient(const Forest& w) const;

    void add_term(const Forest& w, const CoeffPoly& c);
    // Adds q * f to the coefficient of w.
    void add_scaled(const Forest& w, const CoeffPoly& f, const Rational& q);

    AlgebroidElement& operator+=(const AlgebroidElement& o);
    AlgebroidElement& operator-=(const AlgebroidElement& o);
    friend AlgebroidElement operator+(AlgebroidElement a, const AlgebroidElement& b) { return a += b; }
    friend AlgebroidElement operator-(AlgebroidElement a, const AlgebroidElement& b) { return a -= b; }
    friend AlgebroidElement operator-(const AlgebroidElement& a) { return a * CoeffPoly(-1); }
    // Left R-module structure; R is central so this is also right multiplication.
    friend AlgebroidElement operator*(const CoeffPoly& f, const AlgebroidElement& a);
    friend AlgebroidElement operator*(const AlgebroidElement& a, const CoeffPoly& f) { return f * a; }
    friend bool operator==(const AlgebroidElement& a, const AlgebroidElement& b) { return a.terms_ == b.terms_; }

private:
    TermMap terms_;
};

std::string dump(const AlgebroidElement& a);  // "coeff | forest" per line
std::string format_inline(const AlgebroidElement& a);  // single line, terms joined by "; "

// Element of H^{(x)N} over R with one coefficient per pure tensor.
template <std::size_t N>
class Tensor {
public:
    using Key = std::array<Forest, N>;
    using TermMap = std::map<Key, CoeffPoly>;

    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    void add_term(const Key& k, const CoeffPoly& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    Tensor& operator+=(const Tensor& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    Tensor& operator-=(const Tensor& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(const CoeffPoly& f, const Tensor& t) {
        Tensor out;
        for (const auto& [k, c] : t.terms_) out.add_term(k, f * c);
        return out;
    }
    friend bool operator==(const Tensor& a, const Tensor& b) { return a.terms_ == b.terms_; }

private:
    TermMap terms_;
};

using TensorElement = Tensor<2>;

template <std::size_t N>
std::string format_inline(const Tensor<N>& t) {
    if (t.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : t.terms()) {
        if (!first) out += "; ";
        first = false;
        out += format(c) + " |";
        for (std::size_t i = 0; i < N; ++i) out += (i ? " (x) " : " ") + format(k[i]);
    }
    return out;
}

// a (x) b for elements; the coefficient product goes to the single stored coefficient.
TensorElement tensor(const AlgebroidElement& a, const AlgebroidElement& b);

// All 2^n ordered splittings of the letters of w (relative order kept), with repetition.
std::vector<std::pair<Forest, Forest>> deshuffles(const Forest& w);

AlgebroidElement concat_mul(const AlgebroidElement& a, const AlgebroidElement& b);
TensorElement coproduct(const AlgebroidElement& a);
Tensor<3> coproduct2(const AlgebroidElement& a);  // (Delta (x) id) Delta
CoeffPoly counit(const AlgebroidElement& a);
AlgebroidElement antipode_concat(const AlgebroidElement& a);

inline constexpr int kDefaultGradeBound = 24;

// The action post-Hopf algebroid on R (x) T(V). Owns memo tables for the coefficient-free
// kernels; all public operations are const and safe to call concurrently.
class PostHopfAlgebroid {
public:
    explicit PostHopfAlgebroid(DerivationMode mode = DerivationMode::Free, int grade_bound = kDefaultGradeBound);
    ~PostHopfAlgebroid();
    PostHopfAlgebroid(const PostHopfAlgebroid&) = delete;
    PostHopfAlgebroid& operator=(const PostHopfAlgebroid&) = delete;

    DerivationMode mode() const noexcept { return mode_; }
    int grade_bound() const noexcept { return grade_bound_; }

    AlgebroidElement triangle(const AlgebroidElement& a, const AlgebroidElement& b) const;
    CoeffPoly module_action(const AlgebroidElement& x, const CoeffPoly& f) const;
    AlgebroidElement gl_product(const AlgebroidElement& a, const AlgebroidElement& b) const;
    AlgebroidElement theta(const AlgebroidElement& a) const;
    // S_triangle: inverse of the identity for the convolution built from *_triangle, R-linear.
    AlgebroidElement gl_antipode(const AlgebroidElement& a) const;
    CoeffPoly lu_action(const AlgebroidElement& x, const CoeffPoly& f) const;

    // x *_triangle iota(f) = sum (x_2 -> f) x_1: the right R-action of the GL algebroid.
    AlgebroidElement gl_right_scalar(const AlgebroidElement& x, const CoeffPoly& f) const;

    // Coefficient-free kernels on single words.
    AlgebroidElement triangle_words(const Forest& a, const Forest& b) const;
    AlgebroidElement gl_words(const Forest& a, const Forest& b) const;
    AlgebroidElement gl_antipode_word(const Forest& w) const;
    CoeffPoly act_word(const Forest& w, const CoeffPoly& f) const;
    // The K-map recursion applied to whole polynomials, without the product shortcut or memo.
    // Slow; kept as an independent route for checks.
    CoeffPoly act_word_reference(const Forest& w, const CoeffPoly& f) const;
    // S(w) acting on a monomial, memoized.
    CoeffPoly antipode_act(const Forest& w, const Monomial& m) const;

private:
    struct Caches;

    void guard(int grade) const;
    CoeffPoly act_monomial(const Forest& w, const Monomial& m) const;

    DerivationMode mode_;
    int grade_bound_;
    std::unique_ptr<Caches> caches_;
};

}  // namespace postlr
