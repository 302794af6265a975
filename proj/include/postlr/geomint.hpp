#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "postlr/algebroid.hpp"

namespace postlr {

using Real = long double;
using Mat3 = Eigen::Matrix<Real, 3, 3>;
using Vec3 = Eigen::Matrix<Real, 3, 1>;

// so(3) with basis e_i = hat(unit_i), so [e_i, e_j] = eps_ijk e_k.
Mat3 hat(const Vec3& v);
Vec3 vee(const Mat3& m);
Mat3 expm_so3(const Vec3& v);
// Principal logarithm; the rotation angle must stay below pi (NumericError otherwise).
Vec3 logm_so3(const Mat3& r);
// dexp_xi^{-1}(v), closed form for so(3).
Vec3 dexpinv_so3(const Vec3& xi, const Vec3& v);
// Nearest rotation (polar factor).
Mat3 project_so3(const Mat3& m);

// Left-invariant frame E_i[phi](Q) = d/ds phi(Q expm(s e_i)) on a matrix group.
struct GroupFrame {
    std::string name;
    int dim = 3;
    // c[i][j][k]: [e_i, e_j] = c_ij^k e_k.
    std::array<std::array<std::array<Real, 3>, 3>, 3> c{};
    std::array<Mat3, 3> basis;

    static GroupFrame so3();
    // Largest violation of antisymmetry and of the Jacobi identity.
    Real structure_defect() const;
    // max_j |sum_i c_ij^i|; zero on unimodular groups.
    Real unimodularity_defect() const;
    Vec3 bracket(const Vec3& x, const Vec3& y) const;  // x^i y^j c_ij^k
};

// Polynomial in the nine entries Q_ab of a 3x3 matrix.
class EntryPoly {
public:
    using Exponents = std::array<std::uint8_t, 9>;

    EntryPoly() = default;
    static EntryPoly constant(Real c);
    static EntryPoly entry(int a, int b);  // zero-based row and column

    const std::map<Exponents, Real>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    int degree() const;
    Real operator()(const Mat3& q) const;
    // E_i as a derivation: E_i[Q_ab] = (Q e_i)_ab.
    EntryPoly frame_derivative(const GroupFrame& g, int i) const;

    EntryPoly& operator+=(const EntryPoly& o);
    friend EntryPoly operator+(EntryPoly a, const EntryPoly& b) { return a += b; }
    friend EntryPoly operator-(EntryPoly a, const EntryPoly& b) { return a += (-1.0L) * b; }
    friend EntryPoly operator*(const EntryPoly& a, const EntryPoly& b);
    friend EntryPoly operator*(Real s, const EntryPoly& a);

private:
    void add_term(const Exponents& e, Real c);
    std::map<Exponents, Real> terms_;
};

enum class DerivativeMode { Analytic, FiniteDifference };
std::string derivative_mode_name(DerivativeMode m);

// Smooth function on the group with frame derivatives. Polynomial fields differentiate exactly
// in analytic mode; numeric fields only admit finite differences.
class ScalarField {
public:
    ScalarField() : ScalarField(EntryPoly()) {}
    ScalarField(EntryPoly p);  // NOLINT(google-explicit-constructor)
    static ScalarField numeric(std::function<Real(const Mat3&)> f);

    Real operator()(const Mat3& q) const;
    const EntryPoly* polynomial() const noexcept { return poly_.get(); }
    // ConfigError in analytic mode on a numeric field.
    ScalarField derivative(const GroupFrame& g, int i, DerivativeMode mode) const;

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(Real s, const ScalarField& a);

private:
    std::shared_ptr<const EntryPoly> poly_;
    std::shared_ptr<const std::function<Real(const Mat3&)>> fn_;
};

// X = x^i E_i.
struct FrameVectorField {
    std::array<ScalarField, 3> x;

    Vec3 operator()(const Mat3& q) const;
    friend FrameVectorField operator+(const FrameVectorField& a, const FrameVectorField& b);
    friend FrameVectorField operator*(Real s, const FrameVectorField& a);
    friend FrameVectorField operator*(const ScalarField& s, const FrameVectorField& a);
};

// Built-in coefficient recipes. "divfree" is the default divergence-free field:
// h = Q33, g = (E2[h], -E1[h], 0), f^i = eps_ijk E_j[g_k].
FrameVectorField field_recipe(const GroupFrame& g, const std::string& id);
const std::vector<std::string>& field_recipe_ids();

// X[phi] = x^j E_j[phi].
ScalarField apply_field(const GroupFrame& g, const FrameVectorField& x, const ScalarField& phi, DerivativeMode mode);
// Y ▷ X = Y[x^i] E_i.
FrameVectorField connection(const GroupFrame& g, const FrameVectorField& y, const FrameVectorField& x, DerivativeMode mode);
// [X, Y] = x^i y^j c_ij^k E_k.
FrameVectorField torsion_bracket(const GroupFrame& g, const FrameVectorField& x, const FrameVectorField& y);
// Div X = E_i[x^i].
ScalarField divergence(const GroupFrame& g, const FrameVectorField& x, DerivativeMode mode);

// Evaluation of trees, forests, aromas and algebroid elements for a fixed field F.
// Results are memoized by tree; safe to share across threads.
class Evaluator {
public:
    Evaluator(GroupFrame g, FrameVectorField f, DerivativeMode mode, int grade_bound = 5);

    const GroupFrame& frame() const noexcept { return g_; }
    const FrameVectorField& field() const noexcept { return f_; }
    DerivativeMode mode() const noexcept { return mode_; }

    // eval(o) = F; eval(B+(w))^i = w[f^i].
    FrameVectorField tree(const PlanarTree& t) const;
    // (X_1 ... X_n)[phi] = x_1^{i_1} ... x_n^{i_n} E_{i_1}[... E_{i_n}[phi]], letters read left to
    // right, coefficients frozen. The empty forest is the identity.
    ScalarField forest_op(const Forest& w, const ScalarField& phi) const;
    // a2 = sum_i E_i[F[f^i]].
    ScalarField trace_aroma() const;
    // Numeric meaning of a coefficient; applied trees act as derivations. DomainError on symbols
    // other than the trace aroma.
    ScalarField coefficient(const CoeffPoly& c) const;
    // x[phi] for an element of H.
    ScalarField element_op(const AlgebroidElement& x, const ScalarField& phi) const;
    // Vector field of a Lie element: trees, plus length-2 commutators mapped to the torsion bracket.
    FrameVectorField lie_element(const AlgebroidElement& x) const;

private:
    ScalarField generator(const AromaGenerator& a) const;

    GroupFrame g_;
    FrameVectorField f_;
    DerivativeMode mode_;
    int grade_bound_;
    mutable std::mutex mutex_;
    mutable std::map<PlanarTree, FrameVectorField> trees_;
};

}  // namespace postlr
