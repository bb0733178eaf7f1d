#pragma once

#include <cstdint>
#include <string>

#include "cfuse/cfusion.hpp"
#include "cfuse/qdual.hpp"

namespace cfuse {

/// T^* S^{-1}: the right inverse of the synthesis matrix (K x n).
/// Throws NotAFrame.
Matrix pseudoinverse_matrix(const CFusionFrame& f, const Tolerances& tol = {});

/// Perturbation constants. `eps` is the coefficient on the fiber-space norm;
/// `lam` the coefficient on the synthesized vector.
struct PerturbationParams {
  double lam = 0.0;
  double eps = 0.0;
};

/// Slack on each probe of the perturbation inequality.
inline constexpr double kPerturbationProbeSlack = 1e-10;

struct PerturbationReport {
  double hypothesis_margin = 0.0;  // 1 - (lam + eps sqrt(B_F / A_F))
  int trials = 0;
  int probe_violations = 0;
  double max_probe_excess = 0.0;   // max over probes of lhs - rhs (may be negative)
  double deviation = 0.0;          // ||I - T_G Q T_F^dagger||
  double guaranteed_lower = 0.0;
  double actual_lower = 0.0;       // lambda_min(S_G)
  double pinv_norm = 0.0;          // ||T_F^dagger|| = 1 / sqrt(A_F)
  double sound_lower = 0.0;        // guaranteed_lower with ||T_F^dagger|| in place of sqrt(B_F / A_F)
  bool concluded = false;
  std::string reason;              // "ok", "hypothesis_violated", "probe_violation", "deviation_exceeds_hypothesis"
};

/// Checks the perturbation inequality
///   ||(T_F - T_G Q) c|| <= lam ||T_F c|| + eps ||c||
/// on `trials` seeded random unit coordinate vectors and evaluates the lower
/// frame bound it guarantees for (G, w).
PerturbationReport perturbation_check(const CFusionFrame& f, const CFusionFrame& g, const QOperator& q,
                                      const PerturbationParams& p, int trials, std::uint64_t seed,
                                      const Tolerances& tol = {});

}  // namespace cfuse
