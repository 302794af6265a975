#include "postlr/geomint.hpp"

#include <cmath>

#include "postlr/errors.hpp"

namespace postlr {

namespace {

Real eps3(int i, int j, int k) {
    return static_cast<Real>((i - j) * (j - k) * (k - i)) / 2.0L;
}

}  // namespace

Mat3 hat(const Vec3& v) {
    Mat3 m;
    m << 0, -v(2), v(1), v(2), 0, -v(0), -v(1), v(0), 0;
    return m;
}

Vec3 vee(const Mat3& m) { return Vec3(m(2, 1), m(0, 2), m(1, 0)); }

Mat3 expm_so3(const Vec3& v) {
    const Real th2 = v.squaredNorm();
    const Real th = std::sqrt(th2);
    Real a;  // sin(th)/th
    Real b;  // (1 - cos(th))/th^2
    if (th < 1e-4L) {
        a = 1 - th2 / 6 + th2 * th2 / 120;
        b = 0.5L - th2 / 24 + th2 * th2 / 720;
    } else {
        a = std::sin(th) / th;
        b = (1 - std::cos(th)) / th2;
    }
    const Mat3 k = hat(v);
    return Mat3::Identity() + a * k + b * k * k;
}

Vec3 logm_so3(const Mat3& r) {
    const Vec3 w = vee(r - r.transpose()) / 2;  // sin(th) * axis
    const Real c = (r.trace() - 1) / 2;
    const Real s = w.norm();
    if (c < -0.999L) throw NumericError("rotation angle too close to pi for the principal logarithm");
    const Real th = std::atan2(s, c);
    const Real th2 = th * th;
    const Real factor = th < 1e-4L ? 1 + th2 / 6 + 7 * th2 * th2 / 360 : th / std::sin(th);
    return factor * w;
}

Vec3 dexpinv_so3(const Vec3& xi, const Vec3& v) {
    const Real th2 = xi.squaredNorm();
    const Real th = std::sqrt(th2);
    Real alpha;  // (1 - (th/2) cot(th/2)) / th^2
    if (th < 1e-3L) {
        alpha = 1.0L / 12 + th2 / 720 + th2 * th2 / 30240;
    } else {
        alpha = (1 - (th / 2) / std::tan(th / 2)) / th2;
    }
    const Vec3 xv = xi.cross(v);
    return v - xv / 2 + alpha * xi.cross(xv);
}

Mat3 project_so3(const Mat3& m) {
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 u = svd.matrixU();
    const Mat3 v = svd.matrixV();
    if ((u * v.transpose()).determinant() < 0) u.col(2) *= -1;
    return u * v.transpose();
}

GroupFrame GroupFrame::so3() {
    GroupFrame g;
    g.name = "so3";
    g.dim = 3;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) g.c[i][j][k] = eps3(i, j, k);
        }
        g.basis[static_cast<std::size_t>(i)] = hat(Vec3::Unit(i));
    }
    return g;
}

Real GroupFrame::structure_defect() const {
    Real worst = 0;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            for (int k = 0; k < dim; ++k) {
                worst = std::max(worst, std::abs(c[i][j][k] + c[j][i][k]));
                // Jacobi: sum_m c_ij^m c_mk^l + cyclic = 0
                for (int l = 0; l < dim; ++l) {
                    Real s = 0;
                    for (int m = 0; m < dim; ++m) s += c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l];
                    worst = std::max(worst, std::abs(s));
                }
            }
            // The basis must realize the constants.
            Mat3 comm = basis[i] * basis[j] - basis[j] * basis[i];
            for (int k = 0; k < dim; ++k) comm -= c[i][j][k] * basis[k];
            worst = std::max(worst, comm.cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

Real GroupFrame::unimodularity_defect() const {
    Real worst = 0;
    for (int j = 0; j < dim; ++j) {
        Real s = 0;
        for (int i = 0; i < dim; ++i) s += c[i][j][i];
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

Vec3 GroupFrame::bracket(const Vec3& x, const Vec3& y) const {
    Vec3 out = Vec3::Zero();
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            for (int k = 0; k < dim; ++k) out(k) += x(i) * y(j) * c[i][j][k];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------------------------

EntryPoly EntryPoly::constant(Real c) {
    EntryPoly p;
    p.add_term(Exponents{}, c);
    return p;
}

EntryPoly EntryPoly::entry(int a, int b) {
    EntryPoly p;
    Exponents e{};
    e[static_cast<std::size_t>(3 * a + b)] = 1;
    p.add_term(e, 1);
    return p;
}

void EntryPoly::add_term(const Exponents& e, Real c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

int EntryPoly::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (auto x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

Real EntryPoly::operator()(const Mat3& q) const {
    Real out = 0;
    for (const auto& [e, c] : terms_) {
        Real m = c;
        for (std::size_t k = 0; k < 9; ++k) {
            for (int p = 0; p < e[k]; ++p) m *= q(static_cast<int>(k / 3), static_cast<int>(k % 3));
        }
        out += m;
    }
    return out;
}

EntryPoly EntryPoly::frame_derivative(const GroupFrame& g, int i) const {
    // E_i[Q_ab] = sum_c Q_ac (e_i)_cb
    const Mat3& e = g.basis[static_cast<std::size_t>(i)];
    EntryPoly out;
    for (const auto& [ex, c] : terms_) {
        for (std::size_t k = 0; k < 9; ++k) {
            if (ex[k] == 0) continue;
            const int a = static_cast<int>(k / 3);
            const int b = static_cast<int>(k % 3);
            Exponents base = ex;
            --base[k];
            for (int cc = 0; cc < 3; ++cc) {
                const Real w = e(cc, b);
                if (w == 0) continue;
                Exponents term = base;
                ++term[static_cast<std::size_t>(3 * a + cc)];
                out.add_term(term, c * ex[k] * w);
            }
        }
    }
    return out;
}

EntryPoly& EntryPoly::operator+=(const EntryPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

EntryPoly operator*(const EntryPoly& a, const EntryPoly& b) {
    EntryPoly out;
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            EntryPoly::Exponents e;
            for (std::size_t k = 0; k < 9; ++k) e[k] = static_cast<std::uint8_t>(ea[k] + eb[k]);
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

EntryPoly operator*(Real s, const EntryPoly& a) {
    EntryPoly out;
    for (const auto& [e, c] : a.terms_) out.add_term(e, s * c);
    return out;
}

// ---------------------------------------------------------------------------------------------

std::string derivative_mode_name(DerivativeMode m) { return m == DerivativeMode::Analytic ? "analytic" : "fd"; }

ScalarField::ScalarField(EntryPoly p) : poly_(std::make_shared<const EntryPoly>(std::move(p))) {}

ScalarField ScalarField::numeric(std::function<Real(const Mat3&)> f) {
    ScalarField s;
    s.poly_.reset();
    s.fn_ = std::make_shared<const std::function<Real(const Mat3&)>>(std::move(f));
    return s;
}

Real ScalarField::operator()(const Mat3& q) const { return poly_ ? (*poly_)(q) : (*fn_)(q); }

ScalarField ScalarField::derivative(const GroupFrame& g, int i, DerivativeMode mode) const {
    if (mode == DerivativeMode::Analytic) {
        if (!poly_) throw ConfigError("analytic derivative requested for a non-polynomial field");
        return ScalarField(poly_->frame_derivative(g, i));
    }
    // Fourth-order central difference along s -> Q expm(s e_i), one Richardson step (h, 2h).
    const ScalarField self = *this;
    const Vec3 dir = Vec3::Unit(i);
    return numeric([self, dir](const Mat3& q) {
        constexpr Real h = 1e-3L;
        auto at = [&](Real s) { return self(q * expm_so3(s * dir)); };
        auto d4 = [&](Real step) {
            return (8 * (at(step) - at(-step)) - (at(2 * step) - at(-2 * step))) / (12 * step);
        };
        const Real fine = d4(h);
        return (16 * fine - d4(2 * h)) / 15;
    });
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    if (a.poly_ && b.poly_) return ScalarField(*a.poly_ + *b.poly_);
    return ScalarField::numeric([a, b](const Mat3& q) { return a(q) + b(q); });
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    if (a.poly_ && b.poly_) return ScalarField(*a.poly_ * *b.poly_);
    return ScalarField::numeric([a, b](const Mat3& q) { return a(q) * b(q); });
}

ScalarField operator*(Real s, const ScalarField& a) {
    if (a.poly_) return ScalarField(s * *a.poly_);
    return ScalarField::numeric([s, a](const Mat3& q) { return s * a(q); });
}

Vec3 FrameVectorField::operator()(const Mat3& q) const { return Vec3(x[0](q), x[1](q), x[2](q)); }

FrameVectorField operator+(const FrameVectorField& a, const FrameVectorField& b) {
    return {{a.x[0] + b.x[0], a.x[1] + b.x[1], a.x[2] + b.x[2]}};
}

FrameVectorField operator*(Real s, const FrameVectorField& a) { return {{s * a.x[0], s * a.x[1], s * a.x[2]}}; }

FrameVectorField operator*(const ScalarField& s, const FrameVectorField& a) {
    return {{s * a.x[0], s * a.x[1], s * a.x[2]}};
}

ScalarField apply_field(const GroupFrame& g, const FrameVectorField& x, const ScalarField& phi, DerivativeMode mode) {
    ScalarField out;
    for (int j = 0; j < g.dim; ++j) out = out + x.x[static_cast<std::size_t>(j)] * phi.derivative(g, j, mode);
    return out;
}

FrameVectorField connection(const GroupFrame& g, const FrameVectorField& y, const FrameVectorField& x, DerivativeMode mode) {
    FrameVectorField out;
    for (std::size_t i = 0; i < 3; ++i) out.x[i] = apply_field(g, y, x.x[i], mode);
    return out;
}

FrameVectorField torsion_bracket(const GroupFrame& g, const FrameVectorField& x, const FrameVectorField& y) {
    FrameVectorField out;
    for (int i = 0; i < g.dim; ++i) {
        for (int j = 0; j < g.dim; ++j) {
            for (int k = 0; k < g.dim; ++k) {
                const Real c = g.c[i][j][k];
                if (c == 0) continue;
                out.x[static_cast<std::size_t>(k)] =
                    out.x[static_cast<std::size_t>(k)] + c * (x.x[static_cast<std::size_t>(i)] * y.x[static_cast<std::size_t>(j)]);
            }
        }
    }
    return out;
}

ScalarField divergence(const GroupFrame& g, const FrameVectorField& x, DerivativeMode mode) {
    ScalarField out;
    for (int i = 0; i < g.dim; ++i) out = out + x.x[static_cast<std::size_t>(i)].derivative(g, i, mode);
    return out;
}

const std::vector<std::string>& field_recipe_ids() {
    static const std::vector<std::string> ids = {"divfree", "generic", "constant"};
    return ids;
}

FrameVectorField field_recipe(const GroupFrame& g, const std::string& id) {
    auto q = [](int a, int b) { return ScalarField(EntryPoly::entry(a, b)); };
    if (id == "divfree") {
        // Div F = E_k[g_k] after the eps contraction, = [E_1, E_2][h] = E_3[h] = 0.
        const auto mode = DerivativeMode::Analytic;
        const ScalarField h = q(2, 2);
        const std::array<ScalarField, 3> gk = {h.derivative(g, 1, mode), -1.0L * h.derivative(g, 0, mode), ScalarField()};
        FrameVectorField f;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                for (int k = 0; k < 3; ++k) {
                    const Real e = eps3(i, j, k);
                    if (e == 0) continue;
                    f.x[static_cast<std::size_t>(i)] =
                        f.x[static_cast<std::size_t>(i)] + e * gk[static_cast<std::size_t>(k)].derivative(g, j, mode);
                }
            }
        }
        return f;
    }
    if (id == "generic") return {{q(0, 0) + q(1, 2), q(1, 1) * q(0, 2), q(2, 0) + (-1.0L) * q(0, 1)}};
    if (id == "constant") {
        return {{EntryPoly::constant(1), EntryPoly::constant(-2), EntryPoly::constant(0.5L)}};
    }
    throw ConfigError("unknown field recipe: " + id);
}

// ---------------------------------------------------------------------------------------------

Evaluator::Evaluator(GroupFrame g, FrameVectorField f, DerivativeMode mode, int grade_bound)
    : g_(std::move(g)), f_(std::move(f)), mode_(mode), grade_bound_(grade_bound) {}

FrameVectorField Evaluator::tree(const PlanarTree& t) const {
    if (t.vertex_count() > grade_bound_) {
        throw CapacityError("tree grade " + std::to_string(t.vertex_count()) + " exceeds bound " + std::to_string(grade_bound_));
    }
    if (t.is_leaf()) return f_;
    {
        std::lock_guard lock(mutex_);
        if (auto it = trees_.find(t); it != trees_.end()) return it->second;
    }
    const Forest kids(t.children());
    FrameVectorField out;
    for (std::size_t i = 0; i < 3; ++i) out.x[i] = forest_op(kids, f_.x[i]);
    std::lock_guard lock(mutex_);
    trees_.emplace(t, out);
    return out;
}

ScalarField Evaluator::forest_op(const Forest& w, const ScalarField& phi) const {
    const std::size_t n = w.length();
    if (n == 0) return phi;
    std::vector<FrameVectorField> letters;
    for (const auto& t : w.trees()) letters.push_back(tree(t));
    // D[idx] = E_{idx_0}[E_{idx_1}[... phi]], memoized by suffix.
    std::map<std::vector<int>, ScalarField> chains;
    std::function<ScalarField(const std::vector<int>&, std::size_t)> chain = [&](const std::vector<int>& idx, std::size_t from) {
        if (from == idx.size()) return phi;
        const std::vector<int> key(idx.begin() + static_cast<long>(from), idx.end());
        if (auto it = chains.find(key); it != chains.end()) return it->second;
        const ScalarField d = chain(idx, from + 1).derivative(g_, idx[from], mode_);
        chains.emplace(key, d);
        return d;
    };
    ScalarField out;
    std::vector<int> idx(n, 0);
    for (;;) {
        ScalarField term = chain(idx, 0);
        for (std::size_t j = 0; j < n; ++j) term = letters[j].x[static_cast<std::size_t>(idx[j])] * term;
        out = out + term;
        std::size_t k = n;
        while (k > 0 && ++idx[k - 1] == g_.dim) idx[--k] = 0;
        if (k == 0) break;
    }
    return out;
}

ScalarField Evaluator::trace_aroma() const {
    ScalarField out;
    for (int i = 0; i < g_.dim; ++i) {
        out = out + apply_field(g_, f_, f_.x[static_cast<std::size_t>(i)], mode_).derivative(g_, i, mode_);
    }
    return out;
}

ScalarField Evaluator::generator(const AromaGenerator& a) const {
    if (a.base != kTraceAroma) throw DomainError("no numeric meaning for coefficient symbol '" + a.base + "'");
    ScalarField out = trace_aroma();
    for (const auto& t : a.applied) out = apply_field(g_, tree(t), out, mode_);
    return out;
}

ScalarField Evaluator::coefficient(const CoeffPoly& c) const {
    ScalarField out;
    for (const auto& [m, q] : c.terms()) {
        ScalarField term(EntryPoly::constant(static_cast<Real>(q.get_num().get_d()) / static_cast<Real>(q.get_den().get_d())));
        for (const auto& [g, e] : m.factors()) {
            const ScalarField v = generator(*g);
            for (int k = 0; k < e; ++k) term = term * v;
        }
        out = out + term;
    }
    return out;
}

ScalarField Evaluator::element_op(const AlgebroidElement& x, const ScalarField& phi) const {
    ScalarField out;
    for (const auto& [w, c] : x.terms()) out = out + coefficient(c) * forest_op(w, phi);
    return out;
}

FrameVectorField Evaluator::lie_element(const AlgebroidElement& x) const {
    FrameVectorField out;
    for (const auto& [w, c] : x.terms()) {
        if (w.length() == 1) {
            out = out + coefficient(c) * tree(w[0]);
        } else if (w.length() == 2) {
            // c (ab - ba) appears as two terms; take it once from the smaller key.
            const Forest flipped = w.reversed();
            const auto it = x.terms().find(flipped);
            if (w == flipped || it == x.terms().end() || !(it->second == -c)) {
                throw DomainError("not a Lie element: " + format_inline(x));
            }
            if (w < flipped) out = out + coefficient(c) * torsion_bracket(g_, tree(w[0]), tree(w[1]));
        } else {
            throw DomainError("only trees and commutators of two trees map to vector fields");
        }
    }
    return out;
}

}  // namespace postlr
