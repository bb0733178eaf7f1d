#include "cfuse/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfuse/error.hpp"
#include "cfuse/random.hpp"

namespace cfuse {

Matrix pseudoinverse_matrix(const CFusionFrame& f, const Tolerances& tol) {
  const Matrix s = frame_operator(f);
  if (hermitian_extremes(s).min <= tol.psd_tol) {
    throw Error(ErrorKind::NotAFrame, "pseudoinverse needs a frame (A > psd_tol)");
  }
  return analysis_matrix(f) * inverse_hpd(s, tol);
}

PerturbationReport perturbation_check(const CFusionFrame& f, const CFusionFrame& g, const QOperator& q,
                                      const PerturbationParams& p, int trials, std::uint64_t seed,
                                      const Tolerances& tol) {
  if (!(p.lam >= 0.0) || !(p.eps >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "lam and eps must be nonnegative");
  }
  if (trials < 0) throw Error(ErrorKind::InvalidArgument, "trials must be nonnegative");
  if (f.ambient_dim() != g.ambient_dim() || !(f.space() == g.space())) {
    throw Error(ErrorKind::ShapeMismatch, "frames must share measure space and ambient dimension");
  }
  q.check_shape(f, g);

  const FrameBounds fb = frame_bounds(f, tol);
  if (!fb.is_frame()) throw Error(ErrorKind::NotAFrame, "F must be a frame");
  const double kappa = std::sqrt(fb.upper / fb.lower);

  PerturbationReport r;
  r.trials = trials;
  r.hypothesis_margin = 1.0 - (p.lam + p.eps * kappa);
  r.actual_lower = std::max(0.0, hermitian_extremes(frame_operator(g)).min);

  const Matrix tf = synthesis_matrix(f);
  const Matrix tg_q = synthesis_matrix(g) * q.matrix();
  const Matrix diff = tf - tg_q;
  const Eigen::Index n = f.ambient_dim();

  const Matrix tf_dagger = pseudoinverse_matrix(f, tol);
  r.deviation = spectral_norm(Matrix::Identity(n, n) - tg_q * tf_dagger);
  r.pinv_norm = spectral_norm(tf_dagger);
  const double q_norm = spectral_norm(q.matrix());
  if (r.deviation < 1.0 && q_norm > 0.0) {
    // sqrt(B/A) bounds ||T_F^dagger|| = 1/sqrt(A) only when B >= 1, so the
    // first value can overshoot lambda_min(S_G); the second cannot.
    const double root = (1.0 - r.deviation) / (kappa * q_norm);
    r.guaranteed_lower = root * root;
    const double sound = (1.0 - r.deviation) / (r.pinv_norm * q_norm);
    r.sound_lower = sound * sound;
  }

  if (r.hypothesis_margin <= 0.0) {
    r.reason = "hypothesis_violated";
    return r;
  }

  Rng rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < trials; ++i) {
    const Vector c = random_unit_vector(rng, f.coord_dim(), true);
    const double lhs = (diff * c).norm();
    const double rhs = p.lam * (tf * c).norm() + p.eps;
    const double excess = lhs - rhs;
    worst = std::max(worst, excess);
    if (excess > kPerturbationProbeSlack) ++r.probe_violations;
  }
  r.max_probe_excess = trials > 0 ? worst : 0.0;

  if (r.probe_violations > 0) {
    r.reason = "probe_violation";
  } else if (r.deviation > p.lam + p.eps * kappa + kPerturbationProbeSlack) {
    r.reason = "deviation_exceeds_hypothesis";
  } else {
    r.concluded = true;
    r.reason = "ok";
  }
  return r;
}

}  // namespace cfuse
