#pragma once

#include <Eigen/Core>

#include "distdeg/solver.hpp"

namespace distdeg::detail {

/// H(z, s) with s running from 0 (start system) to 1 (target system).
class Homotopy {
 public:
  virtual ~Homotopy() = default;
  virtual Eigen::Index dim() const = 0;
  virtual void evaluate(const Eigen::VectorXcd& z, double s, Eigen::VectorXcd& h,
                        Eigen::MatrixXcd& hz, Eigen::VectorXcd* hs) const = 0;
};

struct TrackOutcome {
  enum class Status { Success, Diverged, StepFailure, MaxSteps };
  Status status = Status::Success;
  Eigen::VectorXcd z;
  double s = 0.0;
  int steps = 0;
};

/// Euler predictor on the Davidenko equation dz/ds = -H_z^{-1} H_s, at most
/// three Newton corrector steps, step halving on failure and doubling after
/// five consecutive successes.
TrackOutcome track(const Homotopy& h, const Eigen::VectorXcd& start, const TrackingConfig& cfg);

}  // namespace distdeg::detail
