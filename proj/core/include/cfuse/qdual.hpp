#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "cfuse/cfusion.hpp"

namespace cfuse {

/// A bounded map L^2(X, F) -> L^2(X, G) as a K_G x K_F matrix in scaled
/// fiber coordinates.
class QOperator {
 public:
  QOperator() = default;
  explicit QOperator(Matrix coords) : matrix_(std::move(coords)) {}

  /// Zero operator shaped for (F -> G).
  static QOperator zero(const CFusionFrame& from, const CFusionFrame& to);

  const Matrix& matrix() const noexcept { return matrix_; }
  Eigen::Index rows() const noexcept { return matrix_.rows(); }
  Eigen::Index cols() const noexcept { return matrix_.cols(); }

  /// Block mapping atom `from_atom` of F to atom `to_atom` of G.
  Matrix block(const CFusionFrame& from, const CFusionFrame& to, std::size_t from_atom, std::size_t to_atom) const;
  void set_block(const CFusionFrame& from, const CFusionFrame& to, std::size_t from_atom, std::size_t to_atom,
                 const Matrix& block);

  /// Throws ShapeMismatch unless this is K_G x K_F.
  void check_shape(const CFusionFrame& from, const CFusionFrame& to) const;

 private:
  Matrix matrix_;
};

/// Slack for the inner-product probe condition.
inline constexpr double kProbeSlack = 1e-8;
inline constexpr int kDefaultProbePairs = 50;
inline constexpr std::uint64_t kDefaultProbeSeed = 20240601;

/// One clause-by-clause evaluation of the five equivalent duality conditions:
///   (1) T_G Q T_F^* = I           (2) T_F Q^* T_G^* = I
///   (3) T_F^* injective, T_G Q surjective, (T_F^* T_G Q)^2 = T_F^* T_G Q
///   (4) the mirror of (3) with F <-> G and Q <-> Q^*
///   (5) <h,k> = <Q T_F^* h, T_G^* k> = <Q^* T_G^* h, T_F^* k> on probe pairs
struct ConditionTable {
  double residual_1 = 0.0;
  double residual_2 = 0.0;
  bool injective_3 = false;
  bool surjective_3 = false;
  double idempotence_residual_3 = 0.0;
  bool injective_4 = false;
  bool surjective_4 = false;
  double idempotence_residual_4 = 0.0;
  double probe_max_error_5 = 0.0;
  int probe_pairs_5 = 0;
  std::array<bool, 5> holds{};
};

struct DualityReport {
  double residual = 0.0;  // ||T_G Q T_F^* - I||
  bool is_dual = false;
  double q_norm = 0.0;
  double norm_floor = 0.0;  // 1 / (n sqrt(B_F B_G))
  ConditionTable conditions;
};

struct ProbeOptions {
  int pairs = kDefaultProbePairs;
  std::uint64_t seed = kDefaultProbeSeed;
  double slack = kProbeSlack;
};

/// Requires F and G to share the measure space and ambient dimension
/// (ShapeMismatch otherwise).
DualityReport verify_duality(const CFusionFrame& f, const CFusionFrame& g, const QOperator& q,
                             const Tolerances& tol = {}, const ProbeOptions& probes = {});

/// T_G Q T_F^*.
Matrix duality_product(const CFusionFrame& f, const CFusionFrame& g, const QOperator& q);

struct CanonicalDual {
  CFusionFrame dual;
  QOperator q;
};

/// Fibers S^{-1}[F(x)], weights v, block-diagonal Q with blocks
/// (basis_i^G)^* S^{-1} basis_i^F. Throws NotAFrame.
CanonicalDual canonical_qdual(const CFusionFrame& f, const Tolerances& tol = {});

struct QSolution {
  std::optional<QOperator> particular;  // minimal Frobenius norm, when consistent
  Eigen::Index unknowns = 0;
  Eigen::Index constraint_rank = 0;
  Eigen::Index nullspace_dim = 0;
  bool unique = false;
  double residual = 0.0;  // duality residual of the least-squares solution
};

/// Solves T_G Q T_F^* = I as n^2 linear equations in the K_G K_F entries of Q.
QSolution solve_q(const CFusionFrame& f, const CFusionFrame& g, const Tolerances& tol = {});

/// Kronecker-form constraint matrix C with C vec(Q) = vec(T_G Q T_F^*)
/// (column-major vec).
Matrix duality_constraint_matrix(const CFusionFrame& f, const CFusionFrame& g);

/// True when the analysis matrix maps C^n onto its whole coordinate space.
bool analysis_surjective(const CFusionFrame& f, const Tolerances& tol = {});
/// True when the analysis matrix is injective (equivalently F is a frame).
bool analysis_injective(const CFusionFrame& f, const Tolerances& tol = {});

/// Both analysis operators surjective: under this hypothesis Q is unique.
bool uniqueness_hypothesis(const CFusionFrame& f, const CFusionFrame& g, const Tolerances& tol = {});

struct DimensionCheck {
  double lower_bound = 0.0;  // A
  double upper_bound = 0.0;  // B
  double lhs = 0.0;          // A n
  double mid = 0.0;          // sum mu v^2 dim F
  double rhs = 0.0;          // B n
  double weight_mass = 0.0;  // sum mu v^2
  bool holds_first = false;  // A n <= mid <= B n
  bool holds_second = false; // A <= weight_mass <= B n
};

/// Evaluated with slack residual_tol on each side.
DimensionCheck dimension_check(const CFusionFrame& f, const Tolerances& tol = {});

struct NormFloor {
  double q_norm = 0.0;
  double floor = 0.0;
  bool holds = false;
};

/// Slack on ||Q|| >= floor.
inline constexpr double kNormFloorSlack = 1e-10;

/// Throws NotADual unless (G, Q) is a verified dual of F.
NormFloor q_norm_floor(const CFusionFrame& f, const CFusionFrame& g, const QOperator& q, const Tolerances& tol = {});

}  // namespace cfuse
