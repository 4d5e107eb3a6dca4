#include "efsolver/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace efsolver {

namespace {

// Dictionary  x_B = b - T x_N,  z = z0 + c' x_N  (minimization).
// Variables carry integer labels: structural columns first, then one slack
// per row, then the phase-one auxiliary variable.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd a, Eigen::VectorXd b, const SimplexOptions& opt)
      : t_(std::move(a)), b_(std::move(b)), opt_(opt) {
    const auto m = t_.rows();
    const auto n = t_.cols();
    basic_.resize(static_cast<std::size_t>(m));
    nonbasic_.resize(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) nonbasic_[j] = static_cast<int>(j);
    for (Eigen::Index i = 0; i < m; ++i) basic_[i] = static_cast<int>(n + i);
    cost_ = Eigen::VectorXd::Zero(n);
    blocked_.assign(static_cast<std::size_t>(n), false);
  }

  Eigen::Index rows() const { return t_.rows(); }
  Eigen::Index cols() const { return t_.cols(); }
  double objective() const { return z0_; }
  int pivots() const { return pivots_; }

  void pivot(Eigen::Index r, Eigen::Index e) {
    if (++pivots_ > opt_.max_pivots) {
      throw std::runtime_error("simplex pivot limit exceeded");
    }
    const double piv = t_(r, e);
    const Eigen::RowVectorXd row = t_.row(r) / piv;
    const Eigen::VectorXd col = t_.col(e);
    const double br = b_(r) / piv;

    t_.noalias() -= col * row;
    b_ -= col * br;
    t_.row(r) = row;
    b_(r) = br;
    t_.col(e) = -col / piv;
    t_(r, e) = 1.0 / piv;

    const double ce = cost_(e);
    cost_ -= ce * row.transpose();
    cost_(e) = -ce / piv;
    z0_ += ce * br;

    std::swap(basic_[r], nonbasic_[e]);
  }

  // Bland's rule iterations. Returns false when unbounded.
  bool optimize() {
    const double tol = opt_.tolerance;
    while (true) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < cols(); ++j) {
        if (blocked_[j] || cost_(j) >= -tol) continue;
        if (enter < 0 || nonbasic_[j] < nonbasic_[enter]) enter = j;
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a <= tol) continue;
        const double ratio = std::max(b_(i), 0.0) / a;
        const double tie = 1e-12 * (1.0 + std::fabs(best));
        if (leave < 0 || ratio < best - tie) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + tie && basic_[i] < basic_[leave]) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  Eigen::MatrixXd t_;
  Eigen::VectorXd b_;
  Eigen::VectorXd cost_;
  double z0_ = 0.0;
  std::vector<int> basic_;
  std::vector<int> nonbasic_;
  std::vector<bool> blocked_;

 private:
  SimplexOptions opt_;
  int pivots_ = 0;
};

}  // namespace

SimplexResult simplex_solve(const LinearProgram& lp, const SimplexOptions& options) {
  const Eigen::Index n = lp.objective.size();
  const Eigen::Index m_ineq = lp.ineq.rows();
  const Eigen::Index m_eq = lp.eq.rows();
  if ((m_ineq > 0 && lp.ineq.cols() != n) || (m_eq > 0 && lp.eq.cols() != n) ||
      lp.ineq_rhs.size() != m_ineq || lp.eq_rhs.size() != m_eq ||
      (!lp.free.empty() && lp.free.size() != static_cast<std::size_t>(n))) {
    throw std::invalid_argument("inconsistent linear program dimensions");
  }

  // Internal columns: each original variable, plus a negated copy of each
  // free variable.
  std::vector<Eigen::Index> source;
  std::vector<double> sign;
  for (Eigen::Index j = 0; j < n; ++j) {
    source.push_back(j);
    sign.push_back(1.0);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!lp.free.empty() && lp.free[static_cast<std::size_t>(j)]) {
      source.push_back(j);
      sign.push_back(-1.0);
    }
  }
  const auto n_int = static_cast<Eigen::Index>(source.size());
  const Eigen::Index m = m_ineq + 2 * m_eq;

  // Structural columns followed by the auxiliary column.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, n_int + 1);
  Eigen::VectorXd b(m);
  auto fill = [&](Eigen::Index row, const auto& coeffs, double s, double rhs) {
    for (Eigen::Index k = 0; k < n_int; ++k) {
      a(row, k) = s * sign[static_cast<std::size_t>(k)] *
                  coeffs(source[static_cast<std::size_t>(k)]);
    }
    a(row, n_int) = -1.0;
    b(row) = s * rhs;
  };
  for (Eigen::Index i = 0; i < m_ineq; ++i) fill(i, lp.ineq.row(i), 1.0, lp.ineq_rhs(i));
  for (Eigen::Index i = 0; i < m_eq; ++i) {
    fill(m_ineq + 2 * i, lp.eq.row(i), 1.0, lp.eq_rhs(i));
    fill(m_ineq + 2 * i + 1, lp.eq.row(i), -1.0, lp.eq_rhs(i));
  }

  Tableau tab(std::move(a), std::move(b), options);
  const int aux_label = static_cast<int>(n_int + m);
  const Eigen::Index aux_col = n_int;
  // Label of the auxiliary column must sort after everything else.
  tab.nonbasic_[aux_col] = aux_label;
  for (Eigen::Index i = 0; i < m; ++i) tab.basic_[i] = static_cast<int>(n_int + i);

  SimplexResult result;
  const double scale = 1.0 + (m > 0 ? tab.b_.cwiseAbs().maxCoeff() : 0.0);

  // Phase one.
  if (m > 0 && tab.b_.minCoeff() < 0.0) {
    tab.cost_(aux_col) = 1.0;
    Eigen::Index worst = 0;
    for (Eigen::Index i = 1; i < m; ++i) {
      if (tab.b_(i) < tab.b_(worst)) worst = i;
    }
    tab.pivot(worst, aux_col);
    tab.optimize();
    if (tab.objective() > options.tolerance * scale) {
      result.status = SimplexStatus::Infeasible;
      result.pivots = tab.pivots();
      return result;
    }
    // Drive the auxiliary variable out of the basis if it is still basic.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab.basic_[i] != aux_label) continue;
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < tab.cols(); ++j) {
        if (std::fabs(tab.t_(i, j)) > options.tolerance &&
            (col < 0 || tab.nonbasic_[j] < tab.nonbasic_[col])) {
          col = j;
        }
      }
      if (col >= 0) tab.pivot(i, col);
    }
  }
  for (Eigen::Index j = 0; j < tab.cols(); ++j) {
    if (tab.nonbasic_[j] == aux_label) {
      tab.blocked_[j] = true;
      tab.t_.col(j).setZero();
    }
  }

  // Phase two objective in terms of the current nonbasic variables.
  tab.cost_.setZero();
  tab.z0_ = 0.0;
  for (Eigen::Index k = 0; k < n_int; ++k) {
    const double ck = sign[static_cast<std::size_t>(k)] *
                      lp.objective(source[static_cast<std::size_t>(k)]);
    if (ck == 0.0) continue;
    const int label = static_cast<int>(k);
    for (Eigen::Index j = 0; j < tab.cols(); ++j) {
      if (tab.nonbasic_[j] == label) tab.cost_(j) += ck;
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab.basic_[i] != label) continue;
      tab.z0_ += ck * tab.b_(i);
      tab.cost_ -= ck * tab.t_.row(i).transpose();
    }
  }
  for (Eigen::Index j = 0; j < tab.cols(); ++j) {
    if (tab.blocked_[j]) tab.cost_(j) = 0.0;
  }

  if (!tab.optimize()) {
    result.status = SimplexStatus::Unbounded;
    result.pivots = tab.pivots();
    return result;
  }

  Eigen::VectorXd internal = Eigen::VectorXd::Zero(n_int);
  for (Eigen::Index i = 0; i < m; ++i) {
    const int label = tab.basic_[i];
    if (label < n_int) internal(label) = std::max(tab.b_(i), 0.0);
  }
  result.w = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n_int; ++k) {
    result.w(source[static_cast<std::size_t>(k)]) +=
        sign[static_cast<std::size_t>(k)] * internal(k);
  }
  result.objective = lp.objective.dot(result.w);
  result.status = SimplexStatus::Optimal;
  result.pivots = tab.pivots();
  return result;
}

}  // namespace efsolver
