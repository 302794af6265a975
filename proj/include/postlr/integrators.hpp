#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "postlr/geomint.hpp"
#include "postlr/series.hpp"

namespace postlr {

// One step of size t from a point.
using Stepper = std::function<Mat3(const Mat3& p, Real t)>;
// A fixed map of the group (a stepper with t bound).
using GroupMap = std::function<Mat3(const Mat3& q)>;

// p expm(t f^i(p) e_i).
Mat3 lie_euler_step(const FrameVectorField& f, const Mat3& p, Real t);

// t-dependent field sum_k t^{k-1} X_k built from a truncated series of Lie elements, so that a
// Lie–Euler step of size t moves along sum_k t^k X_k(p).
class SeriesField {
public:
    SeriesField(const Evaluator& ev, const TruncatedSeries& s);
    Vec3 increment(const Mat3& p, Real t) const;  // sum_k t^k X_k(p)
    Mat3 step(const Mat3& p, Real t) const { return p * expm_so3(increment(p, t)); }

private:
    std::vector<FrameVectorField> parts_;  // index k holds X_k
};

Stepper lie_euler_stepper(const FrameVectorField& f);
// Lie–Euler along the preprocessed field, every term evaluated through ev.
Stepper aromatic_stepper(const Evaluator& ev);

// Adaptive Dormand–Prince 5(4) in the exponential chart at the current point, re-centered and
// projected onto SO(3) after every accepted step. NumericError when step control fails.
// The accepted step sizes are appended to mesh when it is given.
Mat3 reference_flow(const FrameVectorField& f, const Mat3& p, Real t, Real tol = 1e-12L,
                    std::vector<Real>* mesh = nullptr);
// The same scheme on a fixed mesh, with no step control.
Mat3 flow_on_mesh(const FrameVectorField& f, const Mat3& p, const std::vector<Real>& mesh);
// Reference flow map for nearby points: the mesh is chosen adaptively at p and then frozen, so the
// map is smooth in its argument and safe to difference.
GroupMap frozen_reference_map(const FrameVectorField& f, const Mat3& p, Real t, Real tol = 1e-12L);

// log|det D(chart o psi o chart^-1)| with the source chart at p and the target chart at psi(p).
// Fourth-order central differences with h = max(1e-5, t 1e-3). NumericError on a singular
// Jacobian.
Real step_volume(const GroupMap& psi, const Mat3& p, Real t);
Real step_volume(const Stepper& s, const Mat3& p, Real t);

struct SlopeFit {
    Real slope = 0;
    Real intercept = 0;
    Real residual = 0;  // root mean square of the log-log residuals
};
// Least squares of log(value) against log(t). DomainError with fewer than 4 pairs or a
// nonpositive t or value.
SlopeFit slope_estimate(const std::vector<std::pair<Real, Real>>& data);

// phi -> sum_k t^k s_k[phi](p) for a fixed series and test function.
class SeriesOperator {
public:
    SeriesOperator(const Evaluator& ev, const TruncatedSeries& s, const ScalarField& phi);
    Real operator()(const Mat3& p, Real t) const;

private:
    std::vector<ScalarField> parts_;
};

// Polynomial test function used by the series-vs-flow comparisons.
ScalarField default_test_function();
// Deterministic rotation derived from a seed; rotation angle at most 1.5.
Mat3 base_point(std::uint64_t seed);

enum class ExperimentKind { Volume, Order };

// Volume methods: lie-euler, aromatic, reference. Order methods: lie-euler and aromatic (global
// error at the fixed horizon), gl-exp (series vs flow) and concat-exp (series vs Lie–Euler step).
struct ExperimentConfig {
    std::string group = "so3";
    std::string field = "divfree";
    std::string method = "aromatic";
    Real t_min = 1e-3L;
    Real t_max = 1e-1L;
    int t_points = 8;
    std::uint64_t seed = 1;
    DerivativeMode derivatives = DerivativeMode::Analytic;
    int order = 3;         // series truncation for gl-exp and concat-exp
    Real horizon = 1;      // final time for global errors
    Real tol = 1e-12L;     // reference integrator tolerance
    int threads = 1;

    // Strictly decreasing geometric grid from t_max to t_min. ConfigError on a bad grid.
    std::vector<Real> grid() const;
    void validate(ExperimentKind kind) const;
};

struct ExperimentRow {
    Real t = 0;
    Real log_det = 0;  // NaN when the method has no step map
    Real abs_err = 0;
};

struct ExperimentResult {
    ExperimentKind kind;
    ExperimentConfig config;
    std::vector<ExperimentRow> rows;
    SlopeFit fit;  // of |log_det| for volume runs, of abs_err for order runs
};

const std::vector<std::string>& experiment_methods(ExperimentKind kind);
// Rows are computed in parallel and merged by grid index, so output is independent of threads.
ExperimentResult run_experiment(ExperimentKind kind, const ExperimentConfig& config);
// Header, one row per grid point, then "# slope=<v> residual=<r>".
std::string format_csv(const ExperimentResult& r);

}  // namespace postlr
