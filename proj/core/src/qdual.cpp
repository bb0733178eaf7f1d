#include "cfuse/qdual.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "cfuse/error.hpp"
#include "cfuse/random.hpp"

namespace cfuse {

namespace {

void require_shared_domain(const CFusionFrame& f, const CFusionFrame& g) {
  if (f.ambient_dim() != g.ambient_dim()) {
    throw Error(ErrorKind::ShapeMismatch, "frames live in different ambient dimensions");
  }
  if (!(f.space() == g.space())) {
    throw Error(ErrorKind::ShapeMismatch, "frames must share the same measure space");
  }
}

// Full column rank n of an (m x n) matrix under the rank policy.
bool full_column_rank(const Matrix& m, double rank_tol) {
  if (m.rows() < m.cols()) return false;
  return numerical_rank(m, rank_tol) == m.cols();
}

bool full_row_rank(const Matrix& m, double rank_tol) {
  if (m.cols() < m.rows()) return false;
  return numerical_rank(m, rank_tol) == m.rows();
}

double idempotence_residual(const Matrix& p) {
  return spectral_norm(p * p - p);
}

bool idempotent(const Matrix& p, double residual, double residual_tol) {
  const double scale = std::max(1.0, spectral_norm(p) * spectral_norm(p));
  return residual <= residual_tol * scale;
}

}  // namespace

QOperator QOperator::zero(const CFusionFrame& from, const CFusionFrame& to) {
  return QOperator(Matrix::Zero(to.coord_dim(), from.coord_dim()));
}

Matrix QOperator::block(const CFusionFrame& from, const CFusionFrame& to, std::size_t from_atom,
                        std::size_t to_atom) const {
  check_shape(from, to);
  return matrix_.block(to.block_offset(to_atom), from.block_offset(from_atom), to.fiber(to_atom).dim(),
                       from.fiber(from_atom).dim());
}

void QOperator::set_block(const CFusionFrame& from, const CFusionFrame& to, std::size_t from_atom,
                          std::size_t to_atom, const Matrix& block) {
  check_shape(from, to);
  if (block.rows() != to.fiber(to_atom).dim() || block.cols() != from.fiber(from_atom).dim()) {
    throw Error(ErrorKind::ShapeMismatch, "Q block must be dim G(to) x dim F(from)");
  }
  matrix_.block(to.block_offset(to_atom), from.block_offset(from_atom), block.rows(), block.cols()) = block;
}

void QOperator::check_shape(const CFusionFrame& from, const CFusionFrame& to) const {
  if (matrix_.rows() != to.coord_dim() || matrix_.cols() != from.coord_dim()) {
    throw Error(ErrorKind::ShapeMismatch, "Q is " + std::to_string(matrix_.rows()) + "x" +
                                              std::to_string(matrix_.cols()) + ", expected " +
                                              std::to_string(to.coord_dim()) + "x" +
                                              std::to_string(from.coord_dim()));
  }
}

Matrix duality_product(const CFusionFrame& f, const CFusionFrame& g, const QOperator& q) {
  require_shared_domain(f, g);
  q.check_shape(f, g);
  return synthesis_matrix(g) * q.matrix() * analysis_matrix(f);
}

DualityReport verify_duality(const CFusionFrame& f, const CFusionFrame& g, const QOperator& q,
                             const Tolerances& tol, const ProbeOptions& probes) {
  require_shared_domain(f, g);
  q.check_shape(f, g);

  const Eigen::Index n = f.ambient_dim();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix tf = synthesis_matrix(f);
  const Matrix tg = synthesis_matrix(g);
  const Matrix tf_star = tf.adjoint();
  const Matrix tg_star = tg.adjoint();
  const Matrix& qm = q.matrix();
  const Matrix q_star = qm.adjoint();

  DualityReport r;
  ConditionTable& c = r.conditions;

  const Matrix product = tg * qm * tf_star;
  c.residual_1 = spectral_norm(product - id);
  c.holds[0] = c.residual_1 <= tol.residual_tol;

  const Matrix mirrored = tf * q_star * tg_star;
  c.residual_2 = spectral_norm(mirrored - id);
  c.holds[1] = c.residual_2 <= tol.residual_tol;

  const Matrix tg_q = tg * qm;
  const Matrix p3 = tf_star * tg_q;
  c.injective_3 = full_column_rank(tf_star, tol.rank_tol);
  c.surjective_3 = full_row_rank(tg_q, tol.rank_tol);
  c.idempotence_residual_3 = idempotence_residual(p3);
  c.holds[2] = c.injective_3 && c.surjective_3 && idempotent(p3, c.idempotence_residual_3, tol.residual_tol);

  const Matrix tf_qs = tf * q_star;
  const Matrix p4 = tg_star * tf_qs;
  c.injective_4 = full_column_rank(tg_star, tol.rank_tol);
  c.surjective_4 = full_row_rank(tf_qs, tol.rank_tol);
  c.idempotence_residual_4 = idempotence_residual(p4);
  c.holds[3] = c.injective_4 && c.surjective_4 && idempotent(p4, c.idempotence_residual_4, tol.residual_tol);

  // <a, b> = b^* a.
  Rng rng(probes.seed);
  double worst = 0.0;
  for (int i = 0; i < probes.pairs; ++i) {
    const Vector h = random_unit_vector(rng, n, true);
    const Vector k = random_unit_vector(rng, n, true);
    const Scalar direct = k.dot(h);
    const Scalar via_f = (tg_star * k).dot(qm * (tf_star * h));
    const Scalar via_g = (tf_star * k).dot(q_star * (tg_star * h));
    worst = std::max({worst, std::abs(direct - via_f), std::abs(direct - via_g)});
  }
  c.probe_pairs_5 = probes.pairs;
  c.probe_max_error_5 = worst;
  c.holds[4] = worst <= probes.slack;

  r.residual = c.residual_1;
  r.is_dual = c.holds[0];
  r.q_norm = spectral_norm(qm);
  const double bf = frame_bounds(f, tol).upper;
  const double bg = frame_bounds(g, tol).upper;
  r.norm_floor = 1.0 / (static_cast<double>(n) * std::sqrt(bf * bg));
  return r;
}

CanonicalDual canonical_qdual(const CFusionFrame& f, const Tolerances& tol) {
  const Matrix s = frame_operator(f);
  if (hermitian_extremes(s).min <= tol.psd_tol) {
    throw Error(ErrorKind::NotAFrame, "canonical dual needs a frame (A > psd_tol)");
  }
  const Matrix s_inv = inverse_hpd(s, tol);

  std::vector<Subspace> fibers;
  fibers.reserve(f.size());
  for (const Subspace& fiber : f.fibers()) fibers.push_back(image_subspace(s_inv, fiber, tol));
  CFusionFrame g(f.space(), std::move(fibers), f.weights());

  QOperator q = QOperator::zero(f, g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    q.set_block(f, g, i, i, g.fiber(i).basis().adjoint() * s_inv * f.fiber(i).basis());
  }
  return {std::move(g), std::move(q)};
}

Matrix duality_constraint_matrix(const CFusionFrame& f, const CFusionFrame& g) {
  require_shared_domain(f, g);
  const Matrix left = synthesis_matrix(f).conjugate();  // (T_F^*)^T
  const Matrix right = synthesis_matrix(g);
  const Eigen::Index n = f.ambient_dim();
  const Eigen::Index kg = g.coord_dim();
  const Eigen::Index kf = f.coord_dim();
  Matrix c(n * n, kg * kf);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < kf; ++j) {
      c.block(i * n, j * kg, n, kg) = left(i, j) * right;
    }
  }
  return c;
}

QSolution solve_q(const CFusionFrame& f, const CFusionFrame& g, const Tolerances& tol) {
  const Matrix c = duality_constraint_matrix(f, g);
  const Eigen::Index n = f.ambient_dim();
  const Matrix id = Matrix::Identity(n, n);
  const Vector b = id.reshaped();

  QSolution sol;
  sol.unknowns = c.cols();

  Eigen::BDCSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? tol.rank_tol * sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  sol.constraint_rank = rank;
  sol.nullspace_dim = sol.unknowns - rank;
  sol.unique = sol.nullspace_dim == 0;

  Vector x = Vector::Zero(c.cols());
  if (rank > 0) {
    const Vector ub = svd.matrixU().leftCols(rank).adjoint() * b;
    x = svd.matrixV().leftCols(rank) * (ub.array() / sv.head(rank).array().cast<Scalar>()).matrix();
  }
  QOperator q(x.reshaped(g.coord_dim(), f.coord_dim()));
  sol.residual = spectral_norm(duality_product(f, g, q) - id);
  if (sol.residual <= tol.residual_tol) sol.particular = std::move(q);
  return sol;
}

bool analysis_surjective(const CFusionFrame& f, const Tolerances& tol) {
  return full_row_rank(analysis_matrix(f), tol.rank_tol);
}

bool analysis_injective(const CFusionFrame& f, const Tolerances& tol) {
  return full_column_rank(analysis_matrix(f), tol.rank_tol);
}

bool uniqueness_hypothesis(const CFusionFrame& f, const CFusionFrame& g, const Tolerances& tol) {
  if (f.ambient_dim() != g.ambient_dim()) {
    throw Error(ErrorKind::ShapeMismatch, "frames live in different ambient dimensions");
  }
  return analysis_surjective(f, tol) && analysis_surjective(g, tol);
}

DimensionCheck dimension_check(const CFusionFrame& f, const Tolerances& tol) {
  const FrameBounds bounds = frame_bounds(f, tol);
  const double n = static_cast<double>(f.ambient_dim());
  DimensionCheck d;
  d.lower_bound = bounds.lower;
  d.upper_bound = bounds.upper;
  d.lhs = bounds.lower * n;
  d.rhs = bounds.upper * n;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f.weights()[i];
    const double w = f.space().mass(i) * v * v;
    d.mid += w * static_cast<double>(f.fiber(i).dim());
    d.weight_mass += w;
  }
  const double slack = tol.residual_tol;
  d.holds_first = d.lhs <= d.mid + slack && d.mid <= d.rhs + slack;
  d.holds_second = d.lower_bound <= d.weight_mass + slack && d.weight_mass <= d.rhs + slack;
  return d;
}

NormFloor q_norm_floor(const CFusionFrame& f, const CFusionFrame& g, const QOperator& q, const Tolerances& tol) {
  const DualityReport report = verify_duality(f, g, q, tol);
  if (!report.is_dual) {
    throw Error(ErrorKind::NotADual, "(G, Q) fails the duality identity; residual " + std::to_string(report.residual));
  }
  NormFloor nf;
  nf.q_norm = report.q_norm;
  nf.floor = report.norm_floor;
  nf.holds = nf.q_norm >= nf.floor - kNormFloorSlack;
  return nf;
}

}  // namespace cfuse
