#pragma once

#include <string>
#include <vector>

#include "postlr/algebroid.hpp"

namespace postlr {

// Formal series sum_k t^k X_k truncated at order N. X_k is grade-k homogeneous, where the grade
// of a term is its forest grade plus the degree of its coefficient monomial. Scaling F by t
// multiplies each grade-k term by t^k, so a series is a graded element cut at grade N.
class TruncatedSeries {
public:
    explicit TruncatedSeries(int order);
    static TruncatedSeries one(int order);
    // Splits x into homogeneous parts; parts above the order are dropped.
    static TruncatedSeries from_element(const AlgebroidElement& x, int order);

    int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const AlgebroidElement& operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
    // Throws DomainError unless x is grade-k homogeneous.
    void set(int k, AlgebroidElement x);
    // The series at t = 1.
    AlgebroidElement total() const;
    // Substitutes t -> s t.
    TruncatedSeries rescaled(const Rational& s) const;

    TruncatedSeries& operator+=(const TruncatedSeries& o);
    TruncatedSeries& operator-=(const TruncatedSeries& o);
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(const Rational& q, const TruncatedSeries& a);
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.coeffs_ == b.coeffs_; }

private:
    std::vector<AlgebroidElement> coeffs_;
};

bool is_homogeneous(const AlgebroidElement& x, int grade);
AlgebroidElement homogeneous_part(const AlgebroidElement& x, int grade);

// "t^k:" header per degree followed by the element dump ("0" for a zero part).
std::string dump(const TruncatedSeries& s);

// Degreewise truncated products. Both operands must have order >= N.
TruncatedSeries gl_mul(const PostHopfAlgebroid& h, const TruncatedSeries& a, const TruncatedSeries& b, int order);
TruncatedSeries concat_mul(const TruncatedSeries& a, const TruncatedSeries& b, int order);

// exp(X) = sum X^n / n!; X must have no degree-0 part (DomainError).
TruncatedSeries exp_gl(const PostHopfAlgebroid& h, const TruncatedSeries& x, int order);
TruncatedSeries exp_concat(const TruncatedSeries& x, int order);
// Inverse of exp_gl by degreewise solve; constant term must be 1 (DomainError).
TruncatedSeries log_gl(const PostHopfAlgebroid& h, const TruncatedSeries& s, int order);
// S2 *▷ S1: pullback series of the composed flow psi2 after psi1. Constant terms must be 1.
TruncatedSeries compose_gl(const PostHopfAlgebroid& h, const TruncatedSeries& s2, const TruncatedSeries& s1);

// t F̂_t = tF + t²/2 F▷F − t³/3 (F▷F)▷F − t³/12 a2 F + t³/6 [F, F▷F]; order >= 3.
TruncatedSeries preprocessed_field(int order);

enum class Method { LieEuler, Aromatic };
// Lie–Euler pullback series exp^·(tG) for G = F or the preprocessed field.
TruncatedSeries method_series(Method m, int order);
// Modified field of the method: log_gl of its pullback series.
TruncatedSeries modified_field(const PostHopfAlgebroid& h, Method m, int order);

}  // namespace postlr
