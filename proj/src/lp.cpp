#include "mves/lp.hpp"

#include "mves/errors.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace mves {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kDegenerateRunBeforeBland = 50;

// Standard-form problem  min cost^T y  s.t.  E y = rhs, y >= 0, where the
// columns of E are the (sign-adjusted) rows of the primal constraint matrix
// followed by one artificial column per row.
class DualSimplex {
 public:
  DualSimplex(const Matrix& a, const Vector& c) : a_(a), rows_(c.size()), m_(a.rows()) {
    sign_.resize(rows_);
    rhs_.resize(rows_);
    for (Eigen::Index k = 0; k < rows_; ++k) {
      sign_[k] = c[k] >= 0.0 ? 1.0 : -1.0;
      rhs_[k] = std::abs(c[k]);
    }
    basis_.resize(rows_);
    for (Eigen::Index k = 0; k < rows_; ++k) basis_[k] = m_ + k;
    col_scale_.resize(m_);
    for (Eigen::Index j = 0; j < m_; ++j) col_scale_[j] = a_.row(j).cwiseAbs().maxCoeff();
  }

  enum class Outcome { optimal, unbounded };

  // Phase 1. Returns the residual infeasibility sum(artificials).
  double phase_one() {
    Vector cost = Vector::Zero(m_ + rows_);
    cost.tail(rows_).setOnes();
    run(cost, /*allow_artificial=*/true);
    double total = 0.0;
    const Vector xb = basic_values();
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] >= m_) total += std::max(xb[i], 0.0);
    }
    return total;
  }

  // Pivots zero-level artificials out of the basis where a structural
  // column can replace them. Rows that stay artificial are redundant.
  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < m_) continue;
      const Matrix binv = basis_inverse();
      const Vector row = binv.row(i);
      const Vector entries = a_ * sign_.cwiseProduct(row);
      Eigen::Index best = -1;
      double best_abs = 1e-9;
      for (Eigen::Index j = 0; j < m_; ++j) {
        if (is_basic(j)) continue;
        const double v = std::abs(entries[j]) / std::max(col_scale_[j], 1e-300);
        if (v > best_abs) {
          best_abs = v;
          best = j;
        }
      }
      if (best >= 0) basis_[i] = best;
    }
  }

  Outcome phase_two(const Vector& b) {
    Vector cost = Vector::Zero(m_ + rows_);
    cost.head(m_) = b;
    return run(cost, /*allow_artificial=*/false);
  }

  // Simplex multipliers of the last run, mapped back to the primal sign.
  Vector primal_point() const { return sign_.cwiseProduct(multipliers_); }

  int iterations() const { return iterations_; }

 private:
  Vector column(Eigen::Index j) const {
    if (j < m_) return sign_.cwiseProduct(a_.row(j).transpose());
    Vector e = Vector::Zero(rows_);
    e[j - m_] = 1.0;
    return e;
  }

  bool is_basic(Eigen::Index j) const {
    for (Eigen::Index b : basis_)
      if (b == j) return true;
    return false;
  }

  Matrix basis_matrix() const {
    Matrix bm(rows_, rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) bm.col(i) = column(basis_[i]);
    return bm;
  }

  Matrix basis_inverse() const {
    Eigen::PartialPivLU<Matrix> lu(basis_matrix());
    return lu.inverse();
  }

  Vector basic_values() const { return basis_inverse() * rhs_; }

  Outcome run(const Vector& cost, bool allow_artificial) {
    const Eigen::Index total = m_ + rows_;
    const int max_iterations = 100 * static_cast<int>(total) + 1000;
    bool bland = false;
    int degenerate_run = 0;
    std::vector<char> basic(static_cast<std::size_t>(total), 0);
    for (;;) {
      if (iterations_ >= max_iterations) {
        throw InternalError("solve_lp: iteration limit reached");
      }
      std::fill(basic.begin(), basic.end(), 0);
      for (Eigen::Index b : basis_) basic[static_cast<std::size_t>(b)] = 1;

      Eigen::PartialPivLU<Matrix> lu(basis_matrix());
      const Vector xb = lu.solve(rhs_);
      Vector cb(rows_);
      for (Eigen::Index i = 0; i < rows_; ++i) cb[i] = cost[basis_[i]];
      multipliers_ = lu.transpose().solve(cb);

      // Reduced costs of the structural columns: cost_j - A_j (sign .* pi).
      const Vector signed_pi = sign_.cwiseProduct(multipliers_);
      const Vector priced = a_ * signed_pi;
      const double pi_scale = signed_pi.cwiseAbs().maxCoeff();

      Eigen::Index entering = -1;
      double best = 0.0;
      auto consider = [&](Eigen::Index j, double reduced, double scale) {
        if (basic[static_cast<std::size_t>(j)]) return false;
        const double tol = 1e-11 * (1.0 + scale);
        if (!(reduced < -tol)) return false;
        if (bland) {
          entering = j;
          return true;
        }
        if (entering < 0 || reduced < best) {
          entering = j;
          best = reduced;
        }
        return false;
      };
      for (Eigen::Index j = 0; j < m_; ++j) {
        const double reduced = cost[j] - priced[j];
        if (consider(j, reduced, std::abs(cost[j]) + pi_scale * col_scale_[j])) break;
      }
      if (allow_artificial && (entering < 0 || !bland)) {
        for (Eigen::Index k = 0; k < rows_; ++k) {
          const Eigen::Index j = m_ + k;
          const double reduced = cost[j] - multipliers_[k];
          if (consider(j, reduced, std::abs(cost[j]) + pi_scale)) break;
        }
      }
      if (entering < 0) return Outcome::optimal;

      const Vector direction = lu.solve(column(entering));
      const double dir_scale = std::max(direction.cwiseAbs().maxCoeff(), 1.0);
      Eigen::Index leaving = -1;
      double ratio = kInf;
      for (Eigen::Index i = 0; i < rows_; ++i) {
        if (direction[i] <= 1e-11 * dir_scale) continue;
        const double r = std::max(xb[i], 0.0) / direction[i];
        if (r < ratio || (r == ratio && basis_[i] < basis_[leaving])) {
          ratio = r;
          leaving = i;
        }
      }
      if (leaving < 0) return Outcome::unbounded;

      if (ratio <= 1e-14) {
        if (++degenerate_run > kDegenerateRunBeforeBland) bland = true;
      } else {
        degenerate_run = 0;
      }
      basis_[leaving] = entering;
      ++iterations_;
    }
  }

  const Matrix& a_;
  Eigen::Index rows_;
  Eigen::Index m_;
  Vector sign_;
  Vector rhs_;
  Vector col_scale_;
  std::vector<Eigen::Index> basis_;
  Vector multipliers_;
  int iterations_ = 0;
};

void append_bounds(const LinearProgram& p, Matrix& a, Vector& b) {
  const Eigen::Index n = p.variable_count();
  std::vector<std::pair<Eigen::Index, double>> rows;  // (variable, +-1 * bound)
  int extra = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::isfinite(p.upper[k])) ++extra;
    if (std::isfinite(p.lower[k])) ++extra;
  }
  a.resize(p.constraints.rows() + extra, n);
  b.resize(p.constraints.rows() + extra);
  a.topRows(p.constraints.rows()) = p.constraints;
  b.head(p.constraints.rows()) = p.rhs;
  Eigen::Index r = p.constraints.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::isfinite(p.upper[k])) {
      a.row(r).setZero();
      a(r, k) = 1.0;
      b[r++] = p.upper[k];
    }
    if (std::isfinite(p.lower[k])) {
      a.row(r).setZero();
      a(r, k) = -1.0;
      b[r++] = -p.lower[k];
    }
  }
}

double feasibility_tolerance(const Vector& c) {
  return 1e-9 * (1.0 + (c.size() ? c.cwiseAbs().maxCoeff() : 0.0));
}

}  // namespace

LinearProgram::LinearProgram(Vector c, Matrix a, Vector b)
    : LinearProgram(c, std::move(a), std::move(b), Vector::Constant(c.size(), -kInf),
                    Vector::Constant(c.size(), kInf)) {}

LinearProgram::LinearProgram(Vector c, Matrix a, Vector b, Vector lo, Vector hi)
    : objective(std::move(c)),
      constraints(std::move(a)),
      rhs(std::move(b)),
      lower(std::move(lo)),
      upper(std::move(hi)) {
  linalg::require_finite(objective, "LinearProgram objective");
  const Eigen::Index n = objective.size();
  if (constraints.cols() != n && constraints.rows() > 0) {
    throw DimensionError("LinearProgram: constraint matrix has " +
                         std::to_string(constraints.cols()) + " columns, expected " +
                         std::to_string(n));
  }
  if (constraints.rows() == 0) constraints.resize(0, n);
  if (constraints.rows() != rhs.size()) {
    throw DimensionError("LinearProgram: constraint rows do not match rhs length");
  }
  if (lower.size() != n || upper.size() != n) {
    throw DimensionError("LinearProgram: bound vectors must have one entry per variable");
  }
  if (constraints.size() > 0 && !constraints.allFinite()) {
    throw ValidationError("LinearProgram: non-finite constraint entry");
  }
  if (rhs.size() > 0 && !rhs.allFinite()) {
    throw ValidationError("LinearProgram: non-finite rhs entry");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::isnan(lower[k]) || std::isnan(upper[k]) || lower[k] == kInf || upper[k] == -kInf) {
      throw ValidationError("LinearProgram: invalid bound");
    }
  }
}

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

LpSolution solve_lp(const LinearProgram& p) {
  Matrix a;
  Vector b;
  append_bounds(p, a, b);
  const Vector& c = p.objective;

  LpSolution out;
  DualSimplex dual(a, c);
  const double residual = dual.phase_one();
  out.iterations = dual.iterations();

  if (residual > feasibility_tolerance(c)) {
    // No y >= 0 with A^T y = c: the primal is unbounded or infeasible. The
    // phase-one multipliers give d with A d <= 0, c^T d > 0.
    Vector ray = dual.primal_point();
    DualSimplex probe(a, Vector::Zero(c.size()));
    probe.phase_one();
    const auto feasible = probe.phase_two(b);
    out.iterations += probe.iterations();
    if (feasible == DualSimplex::Outcome::unbounded) {
      out.status = LpStatus::infeasible;
      return out;
    }
    out.status = LpStatus::unbounded;
    out.ray = std::move(ray);
    out.x = probe.primal_point();
    return out;
  }

  dual.drive_out_artificials();
  const auto outcome = dual.phase_two(b);
  out.iterations = dual.iterations();
  if (outcome == DualSimplex::Outcome::unbounded) {
    out.status = LpStatus::infeasible;
    return out;
  }
  out.status = LpStatus::optimal;
  out.x = dual.primal_point();
  out.objective_value = c.dot(out.x);
  return out;
}

double convex_hull_distance(const Vector& point, const Matrix& generators) {
  if (generators.cols() == 0) throw ArgumentError("convex_hull_distance: no generators");
  if (generators.rows() != point.size()) {
    throw DimensionError("convex_hull_distance: point and generators differ in dimension");
  }
  linalg::require_finite(point, "convex_hull_distance");
  linalg::require_finite(generators, "convex_hull_distance");
  // Variables (w+, w-, t) with w = w+ - w-.
  const Eigen::Index dim = point.size();
  const Eigen::Index k = generators.cols();
  const Eigen::Index n = 2 * dim + 1;
  Matrix a = Matrix::Zero(k + 1, n);
  a.block(0, 0, k, dim) = generators.transpose();
  a.block(0, dim, k, dim) = -generators.transpose();
  a.col(2 * dim).head(k).setConstant(-1.0);
  a.row(k).head(2 * dim).setOnes();
  Vector b = Vector::Zero(k + 1);
  b[k] = 1.0;
  Vector c(n);
  c << point, -point, -1.0;
  Vector lo = Vector::Zero(n);
  lo[2 * dim] = -kInf;
  const Vector hi = Vector::Constant(n, kInf);
  const auto sol = solve_lp(LinearProgram(c, std::move(a), std::move(b), std::move(lo), hi));
  if (sol.status != LpStatus::optimal) {
    throw InternalError("convex_hull_distance: separation LP is always bounded and feasible");
  }
  return std::max(sol.objective_value, 0.0);
}

bool in_convex_hull(const Vector& point, const Matrix& generators, double tol) {
  return convex_hull_distance(point, generators) <= tol;
}

}  // namespace mves
