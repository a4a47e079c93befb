#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace entrench::meanfield {

// Attitude frequencies of the well-mixed two-level spectrum, in the order
// (a=-2, a=-1, a=+1, a=+2), conventionally named (L2, L1, R1, R2). States
// live on the probability simplex.
using State = std::array<double, 4>;

constexpr std::size_t kL2 = 0, kL1 = 1, kR1 = 2, kR2 = 3;

// Time derivatives of the four frequencies under amplification probability
// pa. On the simplex the components sum to zero.
State ode_rhs(const State& s, double pa);

struct IntegrateOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double initial_step = 1e-3;
  double max_step = 0.0;  // 0 = unlimited
};

struct IntegrationError : std::runtime_error {
  double time;
  explicit IntegrationError(double t);
};

struct Trajectory {
  std::vector<double> t;
  std::vector<State> y;
};

// Adaptive RK45 (Dormand-Prince) with cubic-Hermite dense output. After each
// accepted step the state is renormalized onto the simplex: the simplex is an
// unstable invariant manifold of the extended flow (the sum deviation grows at
// rate L1+R1), so without projection roundoff destroys long trajectories.
// record_dt > 0 samples the trajectory on a fixed grid via dense output;
// record_dt == 0 records every accepted step.
Trajectory integrate(const State& y0, double pa, double t_end,
                     const IntegrateOptions& options = {}, double record_dt = 0.0);

struct CrossingResult {
  bool reached = false;
  double time = 0.0;  // t_end when not reached (censored)
  State state{};
};

// First time min(L2+L1, R1+R2) <= eps; censored if not reached by t_end.
CrossingResult consensus_time(const State& y0, double pa, double eps = 1e-4,
                              double t_end = 1e6, const IntegrateOptions& options = {});

// ---------------------------------------------------------------------------
// Planar phase-plane sub-models.

struct Vec2 {
  double x = 0.0, y = 0.0;
};
struct Mat2 {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;  // row-major [[a,b],[c,d]]
};

enum class PlanarKind { Centering, Consensus };

// Symmetric reduction L1 = R1 = x, L2 = R2 = y.
Vec2 centering_rhs(Vec2 s, double pa);
Mat2 centering_jacobian(Vec2 s, double pa);

// One-side-extinct reduction L1 = L2 = 0, x = surviving inner frequency,
// y = surviving outer frequency.
Vec2 consensus_rhs(Vec2 s, double pa);
Mat2 consensus_jacobian(Vec2 s, double pa);

Vec2 planar_rhs(PlanarKind kind, Vec2 s, double pa);
Mat2 planar_jacobian(PlanarKind kind, Vec2 s, double pa);

// d/dt of (1/2 - x - y) along the centering flow: -2xy - 2x^2 + x. Vanishes
// identically on x + y = 1/2 and on x = 0, making that line invariant.
double lyapunov_drift(double x, double y);

struct PlanarTrajectory {
  std::vector<double> t;
  std::vector<Vec2> y;
};

PlanarTrajectory integrate_planar(PlanarKind kind, Vec2 y0, double pa, double t_end,
                                  const IntegrateOptions& options = {}, double record_dt = 0.0);

// ---------------------------------------------------------------------------
// Steady-state location and classification.

enum class StabilityClass {
  Saddle,
  StableNode,
  UnstableNode,
  StableFocus,
  UnstableFocus,
  Center,
  Degenerate,  // an eigenvalue indistinguishable from zero
};

std::string_view to_string(StabilityClass cls);

struct SteadyState {
  Vec2 point;
  std::complex<double> eig1, eig2;  // of the analytic Jacobian at the root
  StabilityClass cls = StabilityClass::Degenerate;
  double residual = 0.0;            // max-norm of the vector field at the root
};

struct NewtonOptions {
  int grid = 21;                 // grid x grid seeds over the search box
  double box_lo = -0.1;
  double box_hi = 1.1;
  int max_iterations = 100;
  double residual_tol = 1e-12;   // acceptance threshold for a root
  double dedupe_radius = 1e-6;
  double damping = 0.5;          // step shrink factor on residual increase
};

struct SteadyStateReport {
  std::vector<SteadyState> roots;
  std::vector<Vec2> failed_seeds;  // seeds whose iteration did not converge
};

// Damped Newton from a grid of seeds; roots deduplicated within
// dedupe_radius (keeping the smallest residual) and classified by the
// eigenvalues of the analytic Jacobian.
SteadyStateReport find_steady_states(PlanarKind kind, double pa,
                                     const NewtonOptions& options = {});

// ---------------------------------------------------------------------------
// Stable-manifold probing of the centering model.

struct ManifoldProbe {
  double offset = 0.0;      // signed distance of the start from x + y = 1/2
  double dwell_time = 0.0;  // time spent within `radius` of the coexistence root
  Vec2 endpoint;
};

// Integrates from (1/4, 1/4) displaced perpendicular to the line x+y = 1/2 by
// each offset and reports how long the trajectory lingers near the
// coexistence steady state. Dwell time shrinks as |offset| grows.
std::vector<ManifoldProbe> stable_manifold_probe(double pa, std::span<const double> offsets,
                                                 double radius = 0.05, double t_end = 400.0,
                                                 const IntegrateOptions& options = {});

}  // namespace entrench::meanfield
