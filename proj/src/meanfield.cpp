#include "entrench/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string_view>

namespace entrench::meanfield {

State ode_rhs(const State& s, double pa) {
  const double l2 = s[kL2], l1 = s[kL1], r1 = s[kR1], r2 = s[kR2];
  return {
      l1 * (l2 + pa * l1) - l2 * (1.0 - l2 - pa * l1),
      l2 * (1.0 - l2 - pa * l1) + r1 * (l2 + l1) - l1 * (1.0 - (1.0 - pa) * l1),
      l1 * (r1 + r2) + r2 * (1.0 - r2 - pa * r1) - r1 * (1.0 - (1.0 - pa) * r1),
      r1 * (r2 + pa * r1) - r2 * (1.0 - r2 - pa * r1),
  };
}

IntegrationError::IntegrationError(double t)
    : std::runtime_error("integration step size underflow at t = " + std::to_string(t)),
      time(t) {}

namespace {

template <std::size_t N>
using Arr = std::array<double, N>;

template <std::size_t N>
Arr<N> axpy(const Arr<N>& y, double h, std::initializer_list<std::pair<double, const Arr<N>*>> terms) {
  Arr<N> out = y;
  for (const auto& [c, k] : terms)
    for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
  return out;
}

// One accepted Dormand-Prince segment with everything a cubic Hermite needs.
template <std::size_t N>
struct Segment {
  double t0 = 0, t1 = 0;
  Arr<N> y0{}, y1{}, f0{}, f1{};

  Arr<N> eval(double t) const {
    const double h = t1 - t0;
    const double u = (t - t0) / h;
    const double h00 = (2 * u - 3) * u * u + 1;
    const double h10 = ((u - 2) * u + 1) * u;
    const double h01 = (3 - 2 * u) * u * u;
    const double h11 = (u - 1) * u * u;
    Arr<N> out;
    for (std::size_t i = 0; i < N; ++i)
      out[i] = h00 * y0[i] + h * h10 * f0[i] + h01 * y1[i] + h * h11 * f1[i];
    return out;
  }
};

// Adaptive RK45 driver. `project` may adjust each accepted state (simplex
// renormalization); `on_segment` sees every accepted segment and returns
// false to stop early. Returns the final state reached.
template <std::size_t N, typename Rhs, typename Project, typename OnSegment>
Arr<N> rk45_drive(Rhs rhs, Project project, Arr<N> y, double t_end,
                  const IntegrateOptions& opt, OnSegment on_segment) {
  double t = 0.0;
  double h = std::min(opt.initial_step, t_end > 0 ? t_end : opt.initial_step);
  if (opt.max_step > 0) h = std::min(h, opt.max_step);
  Arr<N> f = rhs(y);

  while (t < t_end) {
    h = std::min(h, t_end - t);
    if (h < 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw IntegrationError(t);

    const Arr<N>& k1 = f;
    const Arr<N> k2 = rhs(axpy<N>(y, h, {{1.0 / 5, &k1}}));
    const Arr<N> k3 = rhs(axpy<N>(y, h, {{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
    const Arr<N> k4 = rhs(axpy<N>(y, h, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
    const Arr<N> k5 = rhs(axpy<N>(
        y, h, {{19372.0 / 6561, &k1}, {-25360.0 / 2187, &k2}, {64448.0 / 6561, &k3}, {-212.0 / 729, &k4}}));
    const Arr<N> k6 = rhs(axpy<N>(y, h,
                                  {{9017.0 / 3168, &k1},
                                   {-355.0 / 33, &k2},
                                   {46732.0 / 5247, &k3},
                                   {49.0 / 176, &k4},
                                   {-5103.0 / 18656, &k5}}));
    const Arr<N> y5 = axpy<N>(y, h,
                              {{35.0 / 384, &k1},
                               {500.0 / 1113, &k3},
                               {125.0 / 192, &k4},
                               {-2187.0 / 6784, &k5},
                               {11.0 / 84, &k6}});
    const Arr<N> k7 = rhs(y5);
    const Arr<N> y4 = axpy<N>(y, h,
                              {{5179.0 / 57600, &k1},
                               {7571.0 / 16695, &k3},
                               {393.0 / 640, &k4},
                               {-92097.0 / 339200, &k5},
                               {187.0 / 2100, &k6},
                               {1.0 / 40, &k7}});

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double e = (y5[i] - y4[i]) / sc;
      err += e * e;
    }
    err = std::sqrt(err / N);

    if (err <= 1.0) {
      Segment<N> seg;
      seg.t0 = t;
      seg.t1 = t + h;
      seg.y0 = y;
      seg.f0 = k1;
      seg.y1 = y5;
      project(seg.y1);
      seg.f1 = rhs(seg.y1);

      t = seg.t1;
      y = seg.y1;
      f = seg.f1;
      if (!on_segment(seg)) return y;
    }

    const double factor =
        err > 0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
    h *= factor;
    if (opt.max_step > 0) h = std::min(h, opt.max_step);
  }
  return y;
}

void renormalize(Arr<4>& y) {
  const double sum = y[0] + y[1] + y[2] + y[3];
  for (double& v : y) v /= sum;
}

double losing_side(const Arr<4>& y) { return std::min(y[0] + y[1], y[2] + y[3]); }

}  // namespace

Trajectory integrate(const State& y0, double pa, double t_end, const IntegrateOptions& options,
                     double record_dt) {
  Trajectory traj;
  traj.t.push_back(0.0);
  traj.y.push_back(y0);
  if (t_end <= 0) return traj;

  const auto rhs = [pa](const State& s) { return ode_rhs(s, pa); };
  double next_record = record_dt;
  const State yf = rk45_drive<4>(rhs, renormalize, y0, t_end, options, [&](const Segment<4>& seg) {
    if (record_dt > 0) {
      while (next_record <= seg.t1) {
        traj.t.push_back(next_record);
        traj.y.push_back(seg.eval(next_record));
        next_record += record_dt;
      }
    } else {
      traj.t.push_back(seg.t1);
      traj.y.push_back(seg.y1);
    }
    return true;
  });
  if (traj.t.back() != t_end) {
    // dense sampling may stop short of the final node; close the trajectory
    traj.t.push_back(t_end);
    traj.y.push_back(yf);
  }
  return traj;
}

CrossingResult consensus_time(const State& y0, double pa, double eps, double t_end,
                              const IntegrateOptions& options) {
  if (eps <= 0) throw std::invalid_argument("consensus threshold must be positive");
  CrossingResult out;
  if (losing_side(y0) <= eps) {
    out.reached = true;
    out.time = 0.0;
    out.state = y0;
    return out;
  }
  const auto rhs = [pa](const State& s) { return ode_rhs(s, pa); };
  const State yf = rk45_drive<4>(rhs, renormalize, y0, t_end, options, [&](const Segment<4>& seg) {
    if (losing_side(seg.y1) > eps) return true;
    double lo = seg.t0, hi = seg.t1;
    for (int i = 0; i < 100 && hi - lo > 0; ++i) {
      const double mid = 0.5 * (lo + hi);
      (losing_side(seg.eval(mid)) <= eps ? hi : lo) = mid;
    }
    out.reached = true;
    out.time = hi;
    out.state = seg.eval(hi);
    return false;
  });
  if (!out.reached) {
    out.time = t_end;
    out.state = yf;
  }
  return out;
}

// ---------------------------------------------------------------------------

Vec2 centering_rhs(Vec2 s, double pa) {
  const double x = s.x, y = s.y;
  return {-y * y - ((pa - 1.0) * x - 1.0) * y + ((2.0 - pa) * x - 1.0) * x,
          y * y + ((pa + 1.0) * x - 1.0) * y + pa * x * x};
}

Mat2 centering_jacobian(Vec2 s, double pa) {
  const double x = s.x, y = s.y;
  return {-(pa - 1.0) * y + 2.0 * (2.0 - pa) * x - 1.0,
          -2.0 * y - (pa - 1.0) * x + 1.0,
          (pa + 1.0) * y + 2.0 * pa * x,
          2.0 * y + (pa + 1.0) * x - 1.0};
}

Vec2 consensus_rhs(Vec2 s, double pa) {
  const double x = s.x, y = s.y;
  return {y * (1.0 - y - pa * x) - x * (1.0 - (1.0 - pa) * x),
          x * (y + pa * x) - y * (1.0 - y - pa * x)};
}

Mat2 consensus_jacobian(Vec2 s, double pa) {
  const double x = s.x, y = s.y;
  return {-pa * y - 1.0 + 2.0 * (1.0 - pa) * x,
          1.0 - 2.0 * y - pa * x,
          y + pa * y + 2.0 * pa * x,
          x - 1.0 + 2.0 * y + pa * x};
}

Vec2 planar_rhs(PlanarKind kind, Vec2 s, double pa) {
  return kind == PlanarKind::Centering ? centering_rhs(s, pa) : consensus_rhs(s, pa);
}

Mat2 planar_jacobian(PlanarKind kind, Vec2 s, double pa) {
  return kind == PlanarKind::Centering ? centering_jacobian(s, pa) : consensus_jacobian(s, pa);
}

double lyapunov_drift(double x, double y) { return -2.0 * x * y - 2.0 * x * x + x; }

PlanarTrajectory integrate_planar(PlanarKind kind, Vec2 y0, double pa, double t_end,
                                  const IntegrateOptions& options, double record_dt) {
  PlanarTrajectory traj;
  traj.t.push_back(0.0);
  traj.y.push_back(y0);
  if (t_end <= 0) return traj;
  const auto rhs = [kind, pa](const Arr<2>& s) {
    const Vec2 d = planar_rhs(kind, {s[0], s[1]}, pa);
    return Arr<2>{d.x, d.y};
  };
  double next_record = record_dt;
  const auto yf = rk45_drive<2>(rhs, [](Arr<2>&) {}, Arr<2>{y0.x, y0.y}, t_end, options,
                                [&](const Segment<2>& seg) {
                                  if (record_dt > 0) {
                                    while (next_record <= seg.t1) {
                                      const auto v = seg.eval(next_record);
                                      traj.t.push_back(next_record);
                                      traj.y.push_back({v[0], v[1]});
                                      next_record += record_dt;
                                    }
                                  } else {
                                    traj.t.push_back(seg.t1);
                                    traj.y.push_back({seg.y1[0], seg.y1[1]});
                                  }
                                  return true;
                                });
  if (traj.t.back() != t_end) {
    traj.t.push_back(t_end);
    traj.y.push_back({yf[0], yf[1]});
  }
  return traj;
}

// ---------------------------------------------------------------------------

std::string_view to_string(StabilityClass cls) {
  switch (cls) {
    case StabilityClass::Saddle:        return "saddle";
    case StabilityClass::StableNode:    return "stable-node";
    case StabilityClass::UnstableNode:  return "unstable-node";
    case StabilityClass::StableFocus:   return "stable-focus";
    case StabilityClass::UnstableFocus: return "unstable-focus";
    case StabilityClass::Center:        return "center";
    case StabilityClass::Degenerate:    return "degenerate";
  }
  return "?";
}

namespace {

double norm_inf(Vec2 v) { return std::max(std::abs(v.x), std::abs(v.y)); }

struct NewtonOutcome {
  bool converged = false;
  Vec2 point;
  double residual = 0.0;
};

// Keeps iterating past the acceptance threshold while the residual still
// improves: degenerate roots (a near-singular Jacobian direction) are only
// approached linearly, and stopping at the first sub-tolerance iterate would
// leave spurious near-root points a micro-distance away.
NewtonOutcome newton_from(PlanarKind kind, double pa, Vec2 seed, const NewtonOptions& opt) {
  Vec2 p = seed;
  double fn = norm_inf(planar_rhs(kind, p, pa));
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    const Vec2 f = planar_rhs(kind, p, pa);
    const Mat2 J = planar_jacobian(kind, p, pa);
    const double det = J.a * J.d - J.b * J.c;
    if (std::abs(det) < 1e-300) break;
    Vec2 d{(-f.x * J.d + f.y * J.b) / det, (-J.a * f.y + J.c * f.x) / det};
    double lambda = 1.0;
    Vec2 cand;
    double fc = fn;
    bool improved = false;
    for (int back = 0; back < 60; ++back) {
      cand = {p.x + lambda * d.x, p.y + lambda * d.y};
      fc = norm_inf(planar_rhs(kind, cand, pa));
      if (fc < fn) {
        improved = true;
        break;
      }
      lambda *= opt.damping;
    }
    if (!improved) break;  // at the residual floor
    p = cand;
    fn = fc;
  }
  return {fn <= opt.residual_tol, p, fn};
}

StabilityClass classify_eigs(const Mat2& J, std::complex<double>& eig1,
                             std::complex<double>& eig2) {
  const double tr = J.a + J.d;
  const double det = J.a * J.d - J.b * J.c;
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0) {
    const double root = std::sqrt(disc);
    eig1 = (tr + root) / 2.0;
    eig2 = (tr - root) / 2.0;
  } else {
    const double im = std::sqrt(-disc) / 2.0;
    eig1 = {tr / 2.0, im};
    eig2 = {tr / 2.0, -im};
  }
  constexpr double zero_tol = 1e-9;
  if (std::abs(det) <= zero_tol) return StabilityClass::Degenerate;
  if (det < 0) return StabilityClass::Saddle;
  if (disc >= 0) return tr < 0 ? StabilityClass::StableNode : StabilityClass::UnstableNode;
  if (tr < -zero_tol) return StabilityClass::StableFocus;
  if (tr > zero_tol) return StabilityClass::UnstableFocus;
  return StabilityClass::Center;
}

}  // namespace

SteadyStateReport find_steady_states(PlanarKind kind, double pa, const NewtonOptions& opt) {
  if (opt.grid < 2 || opt.box_hi <= opt.box_lo || opt.residual_tol <= 0 ||
      opt.dedupe_radius <= 0)
    throw std::invalid_argument("invalid steady-state search options");
  SteadyStateReport report;
  const double span = opt.box_hi - opt.box_lo;
  for (int i = 0; i < opt.grid; ++i) {
    for (int j = 0; j < opt.grid; ++j) {
      const Vec2 seed{opt.box_lo + span * i / (opt.grid - 1),
                      opt.box_lo + span * j / (opt.grid - 1)};
      const NewtonOutcome res = newton_from(kind, pa, seed, opt);
      if (!res.converged) {
        report.failed_seeds.push_back(seed);
        continue;
      }
      bool merged = false;
      for (auto& root : report.roots) {
        const double dx = root.point.x - res.point.x, dy = root.point.y - res.point.y;
        if (std::sqrt(dx * dx + dy * dy) <= opt.dedupe_radius) {
          if (res.residual < root.residual) {
            root.point = res.point;
            root.residual = res.residual;
          }
          merged = true;
          break;
        }
      }
      if (!merged) {
        SteadyState root;
        root.point = res.point;
        root.residual = res.residual;
        report.roots.push_back(root);
      }
    }
  }
  for (auto& root : report.roots)
    root.cls = classify_eigs(planar_jacobian(kind, root.point, pa), root.eig1, root.eig2);
  std::sort(report.roots.begin(), report.roots.end(), [](const auto& a, const auto& b) {
    return a.point.x != b.point.x ? a.point.x < b.point.x : a.point.y < b.point.y;
  });
  return report;
}

std::vector<ManifoldProbe> stable_manifold_probe(double pa, std::span<const double> offsets,
                                                 double radius, double t_end,
                                                 const IntegrateOptions& options) {
  NewtonOptions nopt;
  const NewtonOutcome coex = newton_from(PlanarKind::Centering, pa, {0.5, 0.0}, nopt);
  if (!coex.converged)
    throw std::runtime_error("failed to locate the coexistence steady state");

  std::vector<ManifoldProbe> probes;
  probes.reserve(offsets.size());
  const double diag = 1.0 / std::sqrt(2.0);
  const auto rhs = [pa](const Arr<2>& s) {
    const Vec2 d = centering_rhs({s[0], s[1]}, pa);
    return Arr<2>{d.x, d.y};
  };
  for (const double offset : offsets) {
    const Arr<2> start{0.25 + offset * diag, 0.25 + offset * diag};
    ManifoldProbe probe;
    probe.offset = offset;
    const double sample_dt = 0.01;
    // The planar flow is quadratic and blows up in finite time once a
    // trajectory escapes above the manifold, so stop at the frequency box.
    const auto inside_box = [](const Arr<2>& v) {
      return v[0] > -0.5 && v[0] < 2.0 && v[1] > -0.5 && v[1] < 2.0;
    };
    const Arr<2> yf = rk45_drive<2>(rhs, [](Arr<2>&) {}, start, t_end, options,
                                    [&](const Segment<2>& seg) {
                                      for (double t = seg.t0; t < seg.t1; t += sample_dt) {
                                        const auto v = seg.eval(t);
                                        const double dx = v[0] - coex.point.x;
                                        const double dy = v[1] - coex.point.y;
                                        if (dx * dx + dy * dy <= radius * radius)
                                          probe.dwell_time += std::min(sample_dt, seg.t1 - t);
                                      }
                                      return inside_box(seg.y1);
                                    });
    probe.endpoint = {yf[0], yf[1]};
    probes.push_back(probe);
  }
  return probes;
}

}  // namespace entrench::meanfield
