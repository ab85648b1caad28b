#include "tracker.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

namespace distdeg::detail {

namespace {

// Runs the corrector at fixed s. Requires contraction after the first step.
bool correct(const Homotopy& h, Eigen::VectorXcd& z, double s, const TrackingConfig& cfg,
             Eigen::VectorXcd& hv, Eigen::MatrixXcd& hz) {
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    h.evaluate(z, s, hv, hz, nullptr);
    const Eigen::VectorXcd delta = hz.partialPivLu().solve(hv);
    if (!delta.allFinite()) return false;
    z -= delta;
    const double nd = delta.norm();
    if (nd <= cfg.corrector_tol * (1.0 + z.norm())) return true;
    if (k > 0 && nd > 0.5 * previous) return false;
    previous = nd;
  }
  return false;
}

}  // namespace

TrackOutcome track(const Homotopy& h, const Eigen::VectorXcd& start, const TrackingConfig& cfg) {
  TrackOutcome out;
  out.z = start;
  double ds = cfg.initial_step;
  int successes = 0;

  Eigen::VectorXcd hv(h.dim());
  Eigen::VectorXcd hs(h.dim());
  Eigen::MatrixXcd hz(h.dim(), h.dim());

  while (out.s < 1.0) {
    if (++out.steps > cfg.max_steps) {
      out.status = TrackOutcome::Status::MaxSteps;
      return out;
    }
    ds = std::min(ds, 1.0 - out.s);
    h.evaluate(out.z, out.s, hv, hz, &hs);
    const Eigen::VectorXcd dz = -hz.partialPivLu().solve(hs);

    bool ok = dz.allFinite();
    Eigen::VectorXcd candidate;
    double s_next = out.s + ds;
    if (1.0 - s_next < 1e-15) s_next = 1.0;
    if (ok) {
      candidate = out.z + ds * dz;
      ok = correct(h, candidate, s_next, cfg, hv, hz);
    }

    if (ok) {
      out.z = std::move(candidate);
      out.s = s_next;
      if (out.z.norm() > cfg.divergence_norm) {
        out.status = TrackOutcome::Status::Diverged;
        return out;
      }
      if (++successes >= 5) {
        ds = std::min(2.0 * ds, cfg.max_step);
        successes = 0;
      }
    } else {
      ds *= 0.5;
      successes = 0;
      if (ds < cfg.min_step) {
        out.status = TrackOutcome::Status::StepFailure;
        return out;
      }
    }
  }
  out.status = TrackOutcome::Status::Success;
  return out;
}

}  // namespace distdeg::detail
