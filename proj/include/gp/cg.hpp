#pragma once

#include "gp/types.hpp"

namespace gp {

struct CgReport {
  Index iterations = 0;
  bool converged = false;
};

// Preconditioned conjugate gradients for a symmetric positive semidefinite
// operator. `project` is applied to the iterate after every update and must
// only move it along the operator's null space. `stop` sees the residual.
template <typename VectorType, typename Apply, typename Precond, typename Project, typename Stop>
CgReport conjugate_gradient(Apply&& apply, Precond&& precond, Project&& project, Stop&& stop, const VectorType& b,
                            VectorType& x, Index max_iter) {
  using Scalar = typename VectorType::Scalar;
  CgReport report;
  project(x);
  VectorType r = b - apply(x);
  VectorType z = precond(r);
  VectorType p = z;
  Scalar rz = r.dot(z);
  for (Index it = 0; it <= max_iter; ++it) {
    report.iterations = it;
    if (stop(r)) {
      // guard against drift of the recursive residual
      r = b - apply(x);
      if (stop(r)) {
        report.converged = true;
        return report;
      }
      z = precond(r);
      p = z;
      rz = r.dot(z);
    }
    if (it == max_iter) break;
    const VectorType ap = apply(p);
    const Scalar curvature = p.dot(ap);
    if (!(curvature > Scalar(0))) break;
    const Scalar alpha = rz / curvature;
    x += alpha * p;
    project(x);
    r -= alpha * ap;
    z = precond(r);
    const Scalar rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  return report;
}

}  // namespace gp
