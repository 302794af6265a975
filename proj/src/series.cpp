#include "postlr/series.hpp"

#include <stdexcept>

#include "postlr/errors.hpp"

namespace postlr {

namespace {

using E = AlgebroidElement;

void require_order(const TruncatedSeries& s, int order) {
    if (order < 0) throw DomainError("negative series order");
    if (s.order() < order) throw DomainError("series order " + std::to_string(s.order()) + " below " + std::to_string(order));
}

// Homogeneity is an invariant of every operation below; a violation is a bug, not bad input.
const TruncatedSeries& checked(const TruncatedSeries& s) {
    for (int k = 0; k <= s.order(); ++k) {
        if (!is_homogeneous(s[k], k)) throw std::logic_error("series lost homogeneity at degree " + std::to_string(k));
    }
    return s;
}

template <class Mul>
TruncatedSeries truncated_product(const TruncatedSeries& a, const TruncatedSeries& b, int order, Mul mul) {
    require_order(a, order);
    require_order(b, order);
    TruncatedSeries out(order);
    for (int k = 0; k <= order; ++k) {
        E part;
        for (int i = 0; i <= k; ++i) {
            if (a[i].is_zero() || b[k - i].is_zero()) continue;
            part += mul(a[i], b[k - i]);
        }
        out.set(k, std::move(part));
    }
    return checked(out);
}

template <class Mul>
TruncatedSeries exponential(const TruncatedSeries& x, int order, Mul mul) {
    require_order(x, order);
    if (!x[0].is_zero()) throw DomainError("exponential needs a series without constant term");
    TruncatedSeries out = TruncatedSeries::one(order);
    TruncatedSeries power = TruncatedSeries::one(order);
    Rational factorial(1);
    // X^n starts at degree n, so n <= order suffices.
    for (int n = 1; n <= order; ++n) {
        power = truncated_product(x, power, order, mul);
        factorial *= n;
        out += Rational(1) / factorial * power;
    }
    return checked(out);
}

}  // namespace

bool is_homogeneous(const E& x, int grade) {
    for (const auto& [w, c] : x.terms()) {
        for (const auto& [m, q] : c.terms()) {
            if (w.grade() + m.degree() != grade) return false;
        }
    }
    return true;
}

E homogeneous_part(const E& x, int grade) {
    E out;
    for (const auto& [w, c] : x.terms()) {
        CoeffPoly part;
        for (const auto& [m, q] : c.terms()) {
            if (w.grade() + m.degree() == grade) part.add_term(m, q);
        }
        out.add_term(w, part);
    }
    return out;
}

TruncatedSeries::TruncatedSeries(int order) {
    if (order < 0) throw DomainError("negative series order");
    coeffs_.resize(static_cast<std::size_t>(order) + 1);
}

TruncatedSeries TruncatedSeries::one(int order) {
    TruncatedSeries s(order);
    s.coeffs_[0] = E::unit();
    return s;
}

TruncatedSeries TruncatedSeries::from_element(const E& x, int order) {
    TruncatedSeries s(order);
    for (int k = 0; k <= order; ++k) s.coeffs_[static_cast<std::size_t>(k)] = homogeneous_part(x, k);
    return s;
}

void TruncatedSeries::set(int k, E x) {
    if (k < 0 || k > order()) throw DomainError("degree outside the series order");
    if (!is_homogeneous(x, k)) throw DomainError("element is not homogeneous of grade " + std::to_string(k));
    coeffs_[static_cast<std::size_t>(k)] = std::move(x);
}

E TruncatedSeries::total() const {
    E out;
    for (const auto& c : coeffs_) out += c;
    return out;
}

TruncatedSeries TruncatedSeries::rescaled(const Rational& s) const {
    TruncatedSeries out(order());
    Rational power(1);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        out.coeffs_[k] = CoeffPoly(power) * coeffs_[k];
        power *= s;
    }
    return out;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
    if (o.order() != order()) throw DomainError("series orders differ");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
    if (o.order() != order()) throw DomainError("series orders differ");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
}

TruncatedSeries operator*(const Rational& q, const TruncatedSeries& a) {
    TruncatedSeries out(a.order());
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out.coeffs_[k] = CoeffPoly(q) * a.coeffs_[k];
    return out;
}

std::string dump(const TruncatedSeries& s) {
    std::string out;
    for (int k = 0; k <= s.order(); ++k) {
        out += "t^" + std::to_string(k) + ":\n";
        out += s[k].is_zero() ? std::string("0\n") : dump(s[k]);
    }
    return out;
}

TruncatedSeries gl_mul(const PostHopfAlgebroid& h, const TruncatedSeries& a, const TruncatedSeries& b, int order) {
    return truncated_product(a, b, order, [&h](const E& x, const E& y) { return h.gl_product(x, y); });
}

TruncatedSeries concat_mul(const TruncatedSeries& a, const TruncatedSeries& b, int order) {
    return truncated_product(a, b, order, [](const E& x, const E& y) { return concat_mul(x, y); });
}

TruncatedSeries exp_gl(const PostHopfAlgebroid& h, const TruncatedSeries& x, int order) {
    return exponential(x, order, [&h](const E& a, const E& b) { return h.gl_product(a, b); });
}

TruncatedSeries exp_concat(const TruncatedSeries& x, int order) {
    return exponential(x, order, [](const E& a, const E& b) { return concat_mul(a, b); });
}

TruncatedSeries log_gl(const PostHopfAlgebroid& h, const TruncatedSeries& s, int order) {
    require_order(s, order);
    if (!(s[0] == E::unit())) throw DomainError("logarithm needs constant term 1");
    // exp(X)_k = X_k + (terms in X_1..X_{k-1}), so X_k = S_k - exp(X_{<k})_k.
    TruncatedSeries x(order);
    for (int k = 1; k <= order; ++k) {
        const TruncatedSeries e = exp_gl(h, x, order);
        x.set(k, s[k] - e[k]);
    }
    return checked(x);
}

TruncatedSeries compose_gl(const PostHopfAlgebroid& h, const TruncatedSeries& s2, const TruncatedSeries& s1) {
    if (!(s2[0] == E::unit()) || !(s1[0] == E::unit())) throw DomainError("composition needs constant terms 1");
    return gl_mul(h, s2, s1, std::min(s2.order(), s1.order()));
}

TruncatedSeries preprocessed_field(int order) {
    if (order < 3) throw DomainError("the preprocessed field needs order >= 3");
    const E field = E::parse(
        "1 | o\n"
        "1/2 | [o]\n"
        "-1/3 | [[o]]\n"
        "-1/12*a2 | o\n"
        "1/6 | o [o]\n"
        "-1/6 | [o] o\n");
    return checked(TruncatedSeries::from_element(field, order));
}

TruncatedSeries method_series(Method m, int order) {
    const TruncatedSeries field =
        m == Method::LieEuler ? TruncatedSeries::from_element(E::parse("o"), order) : preprocessed_field(std::max(order, 3));
    const TruncatedSeries cut = TruncatedSeries::from_element(field.total(), order);
    return exp_concat(cut, order);
}

TruncatedSeries modified_field(const PostHopfAlgebroid& h, Method m, int order) {
    return log_gl(h, method_series(m, order), order);
}

}  // namespace postlr
