#include "postlr/integrators.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <optional>
#include <thread>

#include "postlr/errors.hpp"

namespace postlr {

Mat3 lie_euler_step(const FrameVectorField& f, const Mat3& p, Real t) { return p * expm_so3(t * f(p)); }

SeriesField::SeriesField(const Evaluator& ev, const TruncatedSeries& s) {
    for (int k = 0; k <= s.order(); ++k) {
        if (k == 0 && !s[0].is_zero()) throw DomainError("a step field has no degree-0 part");
        parts_.push_back(ev.lie_element(s[k]));
    }
}

Vec3 SeriesField::increment(const Mat3& p, Real t) const {
    Vec3 out = Vec3::Zero();
    Real power = 1;
    for (const auto& part : parts_) {
        out += power * part(p);
        power *= t;
    }
    return out;
}

Stepper lie_euler_stepper(const FrameVectorField& f) {
    return [f](const Mat3& p, Real t) { return lie_euler_step(f, p, t); };
}

Stepper aromatic_stepper(const Evaluator& ev) {
    auto field = std::make_shared<const SeriesField>(ev, preprocessed_field(3));
    return [field](const Mat3& p, Real t) { return field->step(p, t); };
}

// ---------------------------------------------------------------------------------------------

namespace {

// Dormand–Prince 5(4) tableau.
constexpr int kStages = 7;
constexpr Real kA[kStages][kStages] = {
    {0, 0, 0, 0, 0, 0, 0},
    {1.0L / 5, 0, 0, 0, 0, 0, 0},
    {3.0L / 40, 9.0L / 40, 0, 0, 0, 0, 0},
    {44.0L / 45, -56.0L / 15, 32.0L / 9, 0, 0, 0, 0},
    {19372.0L / 6561, -25360.0L / 2187, 64448.0L / 6561, -212.0L / 729, 0, 0, 0},
    {9017.0L / 3168, -355.0L / 33, 46732.0L / 5247, 49.0L / 176, -5103.0L / 18656, 0, 0},
    {35.0L / 384, 0, 500.0L / 1113, 125.0L / 192, -2187.0L / 6784, 11.0L / 84, 0},
};
constexpr Real kB5[kStages] = {35.0L / 384, 0, 500.0L / 1113, 125.0L / 192, -2187.0L / 6784, 11.0L / 84, 0};
constexpr Real kB4[kStages] = {5179.0L / 57600, 0, 7571.0L / 16695, 393.0L / 640, -92097.0L / 339200, 187.0L / 2100, 1.0L / 40};

// One DP step of the chart equation xi' = dexp_{-xi}^{-1}(F(c expm(xi))) from xi = 0.
// Returns the fifth-order xi and the embedded error estimate.
std::pair<Vec3, Real> dp_step(const FrameVectorField& f, const Mat3& c, Real h) {
    std::array<Vec3, kStages> k;
    for (int s = 0; s < kStages; ++s) {
        Vec3 xi = Vec3::Zero();
        for (int j = 0; j < s; ++j) xi += h * kA[s][j] * k[static_cast<std::size_t>(j)];
        k[static_cast<std::size_t>(s)] = dexpinv_so3(-xi, f(c * expm_so3(xi)));
    }
    Vec3 hi = Vec3::Zero();
    Vec3 lo = Vec3::Zero();
    for (int s = 0; s < kStages; ++s) {
        hi += h * kB5[s] * k[static_cast<std::size_t>(s)];
        lo += h * kB4[s] * k[static_cast<std::size_t>(s)];
    }
    return {hi, (hi - lo).cwiseAbs().maxCoeff()};
}

constexpr int kMaxSteps = 1000000;

}  // namespace

Mat3 reference_flow(const FrameVectorField& f, const Mat3& p, Real t, Real tol, std::vector<Real>* mesh) {
    if (tol < 1e-13L) throw DomainError("reference tolerance below 1e-13");
    if (t < 0) throw DomainError("reference flow runs forward in time");
    Mat3 y = p;
    Real done = 0;
    Real h = std::min<Real>(t, 1e-2L);
    int steps = 0;
    while (done < t) {
        if (++steps > kMaxSteps) throw NumericError("reference flow exceeded the step budget");
        // Stretch the step rather than leave a sliver of the interval for a final tiny step.
        const bool last = h * (1 + 1e-6L) >= t - done;
        const Real step = last ? t - done : h;
        const auto [xi, err] = dp_step(f, y, step);
        if (!std::isfinite(err)) throw NumericError("reference flow produced a non-finite state");
        if (err <= tol) {
            y = project_so3(y * expm_so3(xi));
            done = last ? t : done + step;
            if (mesh) mesh->push_back(step);
        }
        const Real scale = err == 0 ? 5 : std::clamp<Real>(0.9L * std::pow(tol / err, 0.2L), 0.2L, 5);
        h = step * scale;
        if (done < t && h < 1e-14L * std::max<Real>(t, 1)) throw NumericError("reference flow step size underflow");
    }
    return y;
}

Mat3 flow_on_mesh(const FrameVectorField& f, const Mat3& p, const std::vector<Real>& mesh) {
    Mat3 y = p;
    for (const Real h : mesh) y = project_so3(y * expm_so3(dp_step(f, y, h).first));
    return y;
}

GroupMap frozen_reference_map(const FrameVectorField& f, const Mat3& p, Real t, Real tol) {
    std::vector<Real> mesh;
    reference_flow(f, p, t, tol, &mesh);
    return [f, mesh = std::move(mesh)](const Mat3& q) { return flow_on_mesh(f, q, mesh); };
}

Real step_volume(const GroupMap& psi, const Mat3& p, Real t) {
    const Real h = std::max<Real>(1e-5L, t * 1e-3L);
    const Mat3 center = psi(p);
    const Mat3 back = center.transpose();
    auto chart = [&](const Vec3& xi) { return logm_so3(back * psi(p * expm_so3(xi))); };
    Mat3 jac;
    for (int j = 0; j < 3; ++j) {
        const Vec3 e = Vec3::Unit(j);
        const Vec3 d = (8 * (chart(h * e) - chart(-h * e)) - (chart(2 * h * e) - chart(-2 * h * e))) / (12 * h);
        jac.col(j) = d;
    }
    const Real det = jac.determinant();
    if (det == 0 || !std::isfinite(det)) throw NumericError("singular step Jacobian");
    return std::log(std::abs(det));
}

Real step_volume(const Stepper& s, const Mat3& p, Real t) {
    return step_volume(GroupMap([&s, t](const Mat3& q) { return s(q, t); }), p, t);
}

SlopeFit slope_estimate(const std::vector<std::pair<Real, Real>>& data) {
    if (data.size() < 4) throw DomainError("slope estimate needs at least 4 points");
    const Real n = static_cast<Real>(data.size());
    Real sx = 0, sy = 0;
    for (const auto& [t, v] : data) {
        if (!(t > 0) || !(v > 0)) throw DomainError("slope estimate needs positive t and values");
        sx += std::log(t);
        sy += std::log(v);
    }
    const Real mx = sx / n, my = sy / n;
    Real sxx = 0, sxy = 0;
    for (const auto& [t, v] : data) {
        sxx += (std::log(t) - mx) * (std::log(t) - mx);
        sxy += (std::log(t) - mx) * (std::log(v) - my);
    }
    if (sxx == 0) throw DomainError("slope estimate needs distinct t values");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    Real ss = 0;
    for (const auto& [t, v] : data) {
        const Real r = std::log(v) - (fit.intercept + fit.slope * std::log(t));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

SeriesOperator::SeriesOperator(const Evaluator& ev, const TruncatedSeries& s, const ScalarField& phi) {
    for (int k = 0; k <= s.order(); ++k) parts_.push_back(ev.element_op(s[k], phi));
}

Real SeriesOperator::operator()(const Mat3& p, Real t) const {
    Real out = 0;
    Real power = 1;
    for (const auto& part : parts_) {
        out += power * part(p);
        power *= t;
    }
    return out;
}

ScalarField default_test_function() {
    auto q = [](int a, int b) { return ScalarField(EntryPoly::entry(a, b)); };
    return q(0, 1) + 0.5L * (q(1, 2) * q(2, 0)) + q(2, 2) * q(2, 2);
}

Mat3 base_point(std::uint64_t seed) {
    // splitmix64, so the point does not depend on the standard library's distributions.
    std::uint64_t state = seed;
    auto next = [&state]() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    auto uniform = [&next]() { return static_cast<Real>(next() >> 11) * 0x1.0p-53L * 2 - 1; };
    Vec3 v;
    do {
        v = Vec3(uniform(), uniform(), uniform());
    } while (v.squaredNorm() > 1 || v.squaredNorm() < 1e-4L);
    return expm_so3(1.5L * v);
}

// ---------------------------------------------------------------------------------------------

std::vector<Real> ExperimentConfig::grid() const {
    if (t_points < 5) throw ConfigError("the t-grid needs at least 5 points");
    if (!(t_min > 0) || !(t_max > t_min)) throw ConfigError("the t-grid needs 0 < t-min < t-max");
    std::vector<Real> out;
    const Real ratio = std::log(t_min / t_max) / static_cast<Real>(t_points - 1);
    for (int i = 0; i < t_points; ++i) out.push_back(t_max * std::exp(ratio * static_cast<Real>(i)));
    out.back() = t_min;
    return out;
}

const std::vector<std::string>& experiment_methods(ExperimentKind kind) {
    static const std::vector<std::string> volume = {"lie-euler", "aromatic", "reference"};
    static const std::vector<std::string> order = {"lie-euler", "aromatic", "gl-exp", "concat-exp"};
    return kind == ExperimentKind::Volume ? volume : order;
}

void ExperimentConfig::validate(ExperimentKind kind) const {
    grid();
    if (group != "so3") throw ConfigError("unsupported group: " + group + " (only so3)");
    const auto& ids = field_recipe_ids();
    if (std::find(ids.begin(), ids.end(), field) == ids.end()) throw ConfigError("unknown field recipe: " + field);
    const auto& methods = experiment_methods(kind);
    if (std::find(methods.begin(), methods.end(), method) == methods.end()) {
        throw ConfigError("unknown method for this experiment: " + method);
    }
    if (order < 1 || order > 4) throw ConfigError("series order must lie in 1..4");
    if (!(horizon > 0)) throw ConfigError("horizon must be positive");
    if (tol < 1e-13L) throw ConfigError("tolerance below 1e-13");
    if (threads < 1) throw ConfigError("threads must be at least 1");
}

namespace {

template <class Fn>
void parallel_for(int n, int threads, Fn fn) {
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next++; i < n; i = next++) fn(i);
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < std::min(threads, n); ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace

ExperimentResult run_experiment(ExperimentKind kind, const ExperimentConfig& config) {
    config.validate(kind);
    const GroupFrame g = GroupFrame::so3();
    const FrameVectorField f = field_recipe(g, config.field);
    const Evaluator ev(g, f, config.derivatives, 6);
    const Mat3 p = base_point(config.seed);
    const std::vector<Real> ts = config.grid();
    const std::string& m = config.method;

    // Everything shared by the workers is built before the parallel section.
    Stepper stepper;
    if (m == "lie-euler") stepper = lie_euler_stepper(f);
    if (m == "aromatic") stepper = aromatic_stepper(ev);
    std::optional<SeriesOperator> series;
    const ScalarField phi = default_test_function();
    if (m == "gl-exp" || m == "concat-exp") {
        const TruncatedSeries x = TruncatedSeries::from_element(AlgebroidElement::parse("o"), config.order);
        if (m == "gl-exp") {
            const PostHopfAlgebroid h;
            series.emplace(ev, exp_gl(h, x, config.order), phi);
        } else {
            series.emplace(ev, exp_concat(x, config.order), phi);
        }
    }

    std::vector<ExperimentRow> rows(ts.size());
    parallel_for(static_cast<int>(ts.size()), config.threads, [&](int i) {
        const Real t = ts[static_cast<std::size_t>(i)];
        ExperimentRow row;
        row.t = t;
        row.log_det = std::numeric_limits<Real>::quiet_NaN();
        if (kind == ExperimentKind::Volume) {
            const Mat3 exact = reference_flow(f, p, t, config.tol);
            if (m == "reference") {
                row.log_det = step_volume(frozen_reference_map(f, p, t, config.tol), p, t);
                row.abs_err = 0;
            } else {
                row.log_det = step_volume(stepper, p, t);
                row.abs_err = (stepper(p, t) - exact).norm();
            }
        } else if (stepper) {
            const long n = std::max<long>(1, std::lround(config.horizon / t));
            const Real h = config.horizon / static_cast<Real>(n);
            Mat3 y = p;
            for (long s = 0; s < n; ++s) y = stepper(y, h);
            row.abs_err = (y - reference_flow(f, p, config.horizon, config.tol)).norm();
        } else {
            const Mat3 target = m == "gl-exp" ? reference_flow(f, p, t, config.tol) : lie_euler_step(f, p, t);
            row.abs_err = std::abs((*series)(p, t) - phi(target));
        }
        rows[static_cast<std::size_t>(i)] = row;
    });

    ExperimentResult out{kind, config, std::move(rows), {}};
    std::vector<std::pair<Real, Real>> data;
    for (const auto& r : out.rows) data.emplace_back(r.t, kind == ExperimentKind::Volume ? std::abs(r.log_det) : r.abs_err);
    out.fit = slope_estimate(data);
    return out;
}

namespace {

std::string number(Real v, const char* fmt) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

}  // namespace

std::string format_csv(const ExperimentResult& r) {
    std::string out = "t,log_det,abs_err,method,field,seed\n";
    for (const auto& row : r.rows) {
        out += number(row.t, "%.6Le") + "," + number(row.log_det, "%.9Le") + "," + number(row.abs_err, "%.9Le") + "," +
               r.config.method + "," + r.config.field + "," + std::to_string(r.config.seed) + "\n";
    }
    out += "# slope=" + number(r.fit.slope, "%.6Lf") + " residual=" + number(r.fit.residual, "%.3Le") + "\n";
    return out;
}

}  // namespace postlr
