#include <cmath>
#include <random>

#include "doctest.h"
#include "postlr/errors.hpp"
#include "postlr/integrators.hpp"

using namespace postlr;

namespace {

constexpr auto kAnalytic = DerivativeMode::Analytic;

FrameVectorField constant_field() { return field_recipe(GroupFrame::so3(), "constant"); }
FrameVectorField divfree() { return field_recipe(GroupFrame::so3(), "divfree"); }

Real dist(const Mat3& a, const Mat3& b) { return (a - b).norm(); }

std::vector<Real> geometric(Real lo, Real hi, int n) {
    std::vector<Real> out;
    for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<Real>(i) / (n - 1)));
    return out;
}

}  // namespace

TEST_CASE("Lie–Euler step examples") {
    const Mat3 p = base_point(4);
    const FrameVectorField f = divfree();
    CHECK(lie_euler_step(f, p, 0) == p);
    // Constant coefficients: the step is the exact one-parameter subgroup.
    const FrameVectorField c = constant_field();
    for (Real t : {0.01L, 0.3L, 1.1L}) {
        CHECK(static_cast<double>(dist(lie_euler_step(c, p, t), reference_flow(c, p, t))) < 1e-12);
    }
}

TEST_CASE("plain Lie–Euler has global order one") {
    const FrameVectorField f = divfree();
    const Mat3 p = base_point(2);
    const Mat3 exact = reference_flow(f, p, 1);
    std::vector<std::pair<Real, Real>> data;
    for (int n : {10, 20, 40, 80, 160}) {
        Mat3 y = p;
        const Real h = 1.0L / n;
        for (int s = 0; s < n; ++s) y = lie_euler_step(f, y, h);
        data.emplace_back(h, dist(y, exact));
    }
    CHECK(static_cast<double>(slope_estimate(data).slope) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("reference flow examples") {
    const FrameVectorField f = divfree();
    const Mat3 p = base_point(3);
    const Real tol = 1e-12L;
    CHECK(reference_flow(f, p, 0) == p);
    const FrameVectorField c = constant_field();
    CHECK(static_cast<double>(dist(reference_flow(c, p, 0.7L), p * expm_so3(0.7L * c(p)))) <= static_cast<double>(tol));
    // Semigroup property and tolerance self-consistency.
    const Mat3 whole = reference_flow(f, p, 0.5L, tol);
    const Mat3 split = reference_flow(f, reference_flow(f, p, 0.2L, tol), 0.3L, tol);
    CHECK(static_cast<double>(dist(whole, split)) <= static_cast<double>(10 * tol));
    CHECK(static_cast<double>(dist(whole, reference_flow(f, p, 0.5L, tol / 2))) <= static_cast<double>(10 * tol));
    CHECK(static_cast<double>((whole.transpose() * whole - Mat3::Identity()).norm()) <= 1e-12);
    CHECK_THROWS_AS(reference_flow(f, p, 0.1L, 1e-14L), DomainError);
    CHECK_THROWS_AS(reference_flow(f, p, -0.1L), DomainError);
}

TEST_CASE("the frozen mesh reproduces the adaptive flow at the base point") {
    const FrameVectorField f = divfree();
    const Mat3 p = base_point(8);
    std::vector<Real> mesh;
    const Mat3 adaptive = reference_flow(f, p, 0.4L, 1e-12L, &mesh);
    CHECK(mesh.size() > 1);
    CHECK(dist(flow_on_mesh(f, p, mesh), adaptive) < 1e-15L);
    CHECK(dist(frozen_reference_map(f, p, 0.4L)(p), adaptive) < 1e-15L);
}

TEST_CASE("step volume examples") {
    const Mat3 p = base_point(5);
    CHECK(std::abs(step_volume(GroupMap([](const Mat3& q) { return q; }), p, 0.1L)) < 1e-15L);
    const FrameVectorField f = divfree();
    for (Real t : {1e-3L, 3e-3L, 1e-2L}) {
        CHECK(static_cast<double>(std::abs(step_volume(frozen_reference_map(f, p, t), p, t))) <= 1e-8);
    }
    // Plain Lie–Euler: |log det| is second order, so halving t divides it by about 4.
    const Stepper le = lie_euler_stepper(f);
    for (Real t : {4e-3L, 1e-2L, 2e-2L}) {
        const Real ratio = step_volume(le, p, t) / step_volume(le, p, t / 2);
        CHECK(static_cast<double>(ratio) == doctest::Approx(4.0).epsilon(0.05));
    }
    // A field with divergence changes volume at first order.
    const FrameVectorField generic = field_recipe(GroupFrame::so3(), "generic");
    const Real t = 1e-3L;
    const Real div = divergence(GroupFrame::so3(), generic, kAnalytic)(p);
    CHECK(static_cast<double>(step_volume(frozen_reference_map(generic, p, t), p, t) / t) == doctest::Approx(static_cast<double>(div)).epsilon(1e-2));
}

TEST_CASE("aromatic step matches the preprocessed field assembled by hand") {
    const GroupFrame g = GroupFrame::so3();
    const FrameVectorField f = divfree();
    const Evaluator ev(g, f, kAnalytic);
    const SeriesField field(ev, preprocessed_field(3));
    const FrameVectorField ff = connection(g, f, f, kAnalytic);
    const FrameVectorField fff = connection(g, ff, f, kAnalytic);
    ScalarField a2;
    for (int i = 0; i < 3; ++i) a2 = a2 + apply_field(g, f, f.x[static_cast<std::size_t>(i)], kAnalytic).derivative(g, i, kAnalytic);
    const FrameVectorField br = torsion_bracket(g, f, ff);
    std::mt19937_64 rng(1);
    for (int k = 0; k < 5; ++k) {
        const Mat3 p = base_point(rng());
        const Real t = 0.05L;
        const Vec3 want = t * f(p) + t * t / 2 * ff(p) - t * t * t / 3 * fff(p) - t * t * t / 12 * a2(p) * f(p) + t * t * t / 6 * br(p);
        CHECK(static_cast<double>((field.increment(p, t) - want).norm()) < 1e-17);
        CHECK(dist(aromatic_stepper(ev)(p, t), p * expm_so3(want)) < 1e-16L);
    }
}

TEST_CASE("slope estimate examples") {
    const auto ts = geometric(1e-3L, 1e-1L, 8);
    std::vector<std::pair<Real, Real>> sq, quartic, noisy;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    for (Real t : ts) {
        sq.emplace_back(t, t * t);
        quartic.emplace_back(t, 3 * t * t * t * t);
        noisy.emplace_back(t, t * t * (1 + noise(rng)));
    }
    CHECK(static_cast<double>(slope_estimate(sq).slope) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(static_cast<double>(slope_estimate(sq).residual) < 1e-12);
    const SlopeFit q = slope_estimate(quartic);
    CHECK(static_cast<double>(q.slope) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(static_cast<double>(std::exp(q.intercept)) == doctest::Approx(3.0));
    CHECK(std::abs(slope_estimate(noisy).slope - 2) <= 0.05L);
    CHECK(slope_estimate(noisy).residual > 0);
    CHECK_THROWS_AS(slope_estimate({{1e-3L, 1}, {1e-2L, 2}, {1e-1L, 3}}), DomainError);
    CHECK_THROWS_AS(slope_estimate({{1e-3L, 1}, {1e-2L, 0}, {1e-1L, 3}, {1, 4}}), DomainError);
    CHECK_THROWS_AS(slope_estimate({{1e-3L, 1}, {1e-2L, -2}, {1e-1L, 3}, {1, 4}}), DomainError);
}

TEST_CASE("series operators approximate the flows they describe") {
    const GroupFrame g = GroupFrame::so3();
    const FrameVectorField f = divfree();
    const Evaluator ev(g, f, kAnalytic);
    const PostHopfAlgebroid h;
    const ScalarField phi = default_test_function();
    const Mat3 p = base_point(6);
    const TruncatedSeries x = TruncatedSeries::from_element(AlgebroidElement::parse("o"), 3);
    const SeriesOperator gl(ev, exp_gl(h, x, 3), phi);
    const SeriesOperator concat(ev, exp_concat(x, 3), phi);
    CHECK(gl(p, 0) == phi(p));
    std::vector<std::pair<Real, Real>> gl_err, concat_err;
    for (Real t : geometric(1e-3L, 1e-1L, 8)) {
        gl_err.emplace_back(t, std::abs(gl(p, t) - phi(reference_flow(f, p, t))));
        concat_err.emplace_back(t, std::abs(concat(p, t) - phi(lie_euler_step(f, p, t))));
    }
    CHECK(std::abs(slope_estimate(gl_err).slope - 4) <= 0.2L);
    CHECK(std::abs(slope_estimate(concat_err).slope - 4) <= 0.2L);
}

TEST_CASE("experiment configuration") {
    ExperimentConfig c;
    const auto grid = c.grid();
    REQUIRE(grid.size() == 8);
    CHECK(grid.front() == c.t_max);
    CHECK(grid.back() == c.t_min);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] < grid[i - 1]);
    c.t_points = 4;
    CHECK_THROWS_AS(c.grid(), ConfigError);
    c = ExperimentConfig{};
    c.group = "se3";
    CHECK_THROWS_AS(c.validate(ExperimentKind::Volume), ConfigError);
    c = ExperimentConfig{};
    c.method = "gl-exp";
    CHECK_THROWS_AS(c.validate(ExperimentKind::Volume), ConfigError);
    CHECK_NOTHROW(c.validate(ExperimentKind::Order));
    c.field = "nope";
    CHECK_THROWS_AS(c.validate(ExperimentKind::Order), ConfigError);
    CHECK(base_point(7) == base_point(7));
    CHECK(base_point(7) != base_point(8));
}

TEST_CASE("experiments are independent of the thread count") {
    for (auto kind : {ExperimentKind::Volume, ExperimentKind::Order}) {
        for (const auto& m : experiment_methods(kind)) {
            ExperimentConfig c;
            c.method = m;
            c.t_points = 5;
            c.horizon = 0.2L;
            const std::string one = format_csv(run_experiment(kind, c));
            c.threads = 8;
            CHECK(format_csv(run_experiment(kind, c)) == one);
        }
    }
}

TEST_CASE("volume experiment CSV") {
    ExperimentConfig c;
    c.method = "lie-euler";
    c.seed = 42;
    const ExperimentResult r = run_experiment(ExperimentKind::Volume, c);
    const std::string csv = format_csv(r);
    CHECK(csv.rfind("t,log_det,abs_err,method,field,seed\n", 0) == 0);
    CHECK(csv.find(",lie-euler,divfree,42\n") != std::string::npos);
    CHECK(csv.find("\n# slope=") != std::string::npos);
    CHECK(std::abs(r.fit.slope - 2) <= 0.25L);
    c.method = "aromatic";
    CHECK(std::abs(run_experiment(ExperimentKind::Volume, c).fit.slope - 4) <= 0.4L);
    c.method = "gl-exp";
    const std::string order_csv = format_csv(run_experiment(ExperimentKind::Order, c));
    CHECK(order_csv.find(",nan,") != std::string::npos);
}

TEST_CASE("reference flow finishes every grid interval without a sliver step") {
    const FrameVectorField f = divfree();
    ExperimentConfig c;
    c.t_points = 5;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (Real t : c.grid()) CHECK_NOTHROW(reference_flow(f, base_point(seed), t));
    }
}
