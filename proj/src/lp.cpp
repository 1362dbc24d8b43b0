#include "nmlab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nmlab
{

namespace
{

class Tableau
{
public:
  Tableau(Eigen::Index rows, Eigen::Index cols) : t_(Mat::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  double& at(Eigen::Index r, Eigen::Index c) { return t_(r, c); }
  double rhs(Eigen::Index r) const { return t_(r, t_.cols() - 1); }
  double& rhs(Eigen::Index r) { return t_(r, t_.cols() - 1); }
  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  Eigen::Index obj() const { return t_.rows() - 1; }
  std::vector<Eigen::Index>& basis() { return basis_; }

  void pivot(Eigen::Index r, Eigen::Index c)
  {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i)
    {
      if (i != r && t_(i, c) != 0.0)
      {
        t_.row(i) -= t_(i, c) * t_.row(r);
      }
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  /// Runs primal simplex over the columns flagged in `allowed`.
  LpStatus run(const std::vector<bool>& allowed, double tol, int max_iter)
  {
    for (int iter = 0; iter < max_iter; ++iter)
    {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < cols(); ++j)
      {
        if (allowed[static_cast<std::size_t>(j)] && t_(obj(), j) < -tol)
        {
          enter = j;
          break;
        }
      }
      if (enter < 0)
      {
        return LpStatus::Optimal;
      }
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i)
      {
        if (t_(i, enter) > tol)
        {
          const double ratio = rhs(i) / t_(i, enter);
          if (ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
               basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]))
          {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0)
      {
        return LpStatus::Unbounded;
      }
      pivot(leave, enter);
    }
    return LpStatus::IterationLimit;
  }

private:
  Mat t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, double tol)
{
  const Eigen::Index n = lp.cost.size();
  const Eigen::Index m_ub = lp.a_ub.rows();
  const Eigen::Index m_eq = lp.a_eq.rows();
  const Eigen::Index m = m_ub + m_eq;
  if ((m_ub > 0 && lp.a_ub.cols() != n) || (m_eq > 0 && lp.a_eq.cols() != n) ||
      lp.b_ub.size() != m_ub || lp.b_eq.size() != m_eq)
  {
    throw Error(ErrorCode::DimensionMismatch, "solve_lp: inconsistent program dimensions");
  }

  // Column layout: [x (with negative parts of free vars appended) | slack/surplus | artificials]
  std::vector<Eigen::Index> neg_col(static_cast<std::size_t>(n), -1);
  Eigen::Index nx = n;
  for (Eigen::Index j = 0; j < n; ++j)
  {
    if (!lp.free_vars.empty() && lp.free_vars[static_cast<std::size_t>(j)])
    {
      neg_col[static_cast<std::size_t>(j)] = nx++;
    }
  }
  Mat a(m, nx);
  Vec b(m);
  for (Eigen::Index i = 0; i < m; ++i)
  {
    const bool is_ub = i < m_ub;
    for (Eigen::Index j = 0; j < n; ++j)
    {
      const double v = is_ub ? lp.a_ub(i, j) : lp.a_eq(i - m_ub, j);
      a(i, j) = v;
      if (neg_col[static_cast<std::size_t>(j)] >= 0)
      {
        a(i, neg_col[static_cast<std::size_t>(j)]) = -v;
      }
    }
    b(i) = is_ub ? lp.b_ub(i) : lp.b_eq(i - m_ub);
  }

  const Eigen::Index n_slack = m_ub;
  Eigen::Index n_art = 0;
  std::vector<double> sign(static_cast<std::size_t>(m), 1.0);
  std::vector<bool> needs_art(static_cast<std::size_t>(m), false);
  for (Eigen::Index i = 0; i < m; ++i)
  {
    if (b(i) < 0.0)
    {
      sign[static_cast<std::size_t>(i)] = -1.0;
    }
    const bool is_ub = i < m_ub;
    if (!is_ub || b(i) < 0.0)
    {
      needs_art[static_cast<std::size_t>(i)] = true;
      ++n_art;
    }
  }

  const Eigen::Index total = nx + n_slack + n_art;
  Tableau tab(m, total);
  Eigen::Index art = nx + n_slack;
  std::vector<bool> is_art(static_cast<std::size_t>(total), false);
  for (Eigen::Index i = 0; i < m; ++i)
  {
    const double s = sign[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < nx; ++j)
    {
      tab.at(i, j) = s * a(i, j);
    }
    if (i < m_ub)
    {
      tab.at(i, nx + i) = s;
    }
    tab.rhs(i) = s * b(i);
    if (needs_art[static_cast<std::size_t>(i)])
    {
      tab.at(i, art) = 1.0;
      is_art[static_cast<std::size_t>(art)] = true;
      tab.basis()[static_cast<std::size_t>(i)] = art;
      ++art;
    }
    else
    {
      tab.basis()[static_cast<std::size_t>(i)] = nx + i;
    }
  }

  const int max_iter = static_cast<int>(50 * (m + total + 10));
  const double scale = std::max(1.0, b.size() > 0 ? b.cwiseAbs().maxCoeff() : 0.0);

  if (n_art > 0)
  {
    for (Eigen::Index i = 0; i < m; ++i)
    {
      if (is_art[static_cast<std::size_t>(tab.basis()[static_cast<std::size_t>(i)])])
      {
        for (Eigen::Index j = 0; j <= total; ++j)
        {
          if (!(j < total && is_art[static_cast<std::size_t>(j)]))
          {
            tab.at(tab.obj(), j) -= tab.at(i, j);
          }
        }
      }
    }
    std::vector<bool> allowed(static_cast<std::size_t>(total), true);
    const LpStatus st = tab.run(allowed, tol, max_iter);
    if (st == LpStatus::IterationLimit)
    {
      return {LpStatus::IterationLimit, Vec(), 0.0};
    }
    if (-tab.rhs(tab.obj()) > 1e-11 * scale * static_cast<double>(m + 1))
    {
      return {LpStatus::Infeasible, Vec(), 0.0};
    }
    // Drive remaining artificials out of the basis.
    for (Eigen::Index i = 0; i < m; ++i)
    {
      const Eigen::Index bi = tab.basis()[static_cast<std::size_t>(i)];
      if (bi >= 0 && is_art[static_cast<std::size_t>(bi)])
      {
        Eigen::Index col = -1;
        for (Eigen::Index j = 0; j < nx + n_slack; ++j)
        {
          if (std::abs(tab.at(i, j)) > tol)
          {
            col = j;
            break;
          }
        }
        if (col >= 0)
        {
          tab.pivot(i, col);
        }
        // else: redundant row, the artificial stays basic at zero and is barred below.
      }
    }
  }

  // Phase 2 objective row.
  for (Eigen::Index j = 0; j <= total; ++j)
  {
    tab.at(tab.obj(), j) = 0.0;
  }
  auto cost_of = [&](Eigen::Index col) -> double {
    if (col < n)
    {
      return lp.cost(col);
    }
    for (Eigen::Index j = 0; j < n; ++j)
    {
      if (neg_col[static_cast<std::size_t>(j)] == col)
      {
        return -lp.cost(j);
      }
    }
    return 0.0;
  };
  for (Eigen::Index j = 0; j < total; ++j)
  {
    tab.at(tab.obj(), j) = cost_of(j);
  }
  for (Eigen::Index i = 0; i < m; ++i)
  {
    const Eigen::Index bi = tab.basis()[static_cast<std::size_t>(i)];
    const double cb = cost_of(bi);
    if (cb != 0.0)
    {
      for (Eigen::Index j = 0; j <= total; ++j)
      {
        tab.at(tab.obj(), j) -= cb * tab.at(i, j);
      }
    }
  }
  std::vector<bool> allowed(static_cast<std::size_t>(total), true);
  for (Eigen::Index j = 0; j < total; ++j)
  {
    if (is_art[static_cast<std::size_t>(j)])
    {
      allowed[static_cast<std::size_t>(j)] = false;
    }
  }
  const LpStatus st = tab.run(allowed, tol, max_iter);
  if (st != LpStatus::Optimal)
  {
    return {st, Vec(), 0.0};
  }

  Vec full = Vec::Zero(total);
  for (Eigen::Index i = 0; i < m; ++i)
  {
    full(tab.basis()[static_cast<std::size_t>(i)]) = tab.rhs(i);
  }
  Vec x(n);
  for (Eigen::Index j = 0; j < n; ++j)
  {
    x(j) = full(j);
    if (neg_col[static_cast<std::size_t>(j)] >= 0)
    {
      x(j) -= full(neg_col[static_cast<std::size_t>(j)]);
    }
  }
  return {LpStatus::Optimal, x, lp.cost.dot(x)};
}

NnlsResult nnls(const Mat& g, const Vec& target)
{
  const Eigen::Index k = g.cols();
  Vec x = Vec::Zero(k);
  if (k == 0)
  {
    return {x, target.norm()};
  }
  std::vector<bool> in_p(static_cast<std::size_t>(k), false);
  const double tol = 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff() * std::max(1.0, target.norm()));

  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < k; ++j)
    {
      if (in_p[static_cast<std::size_t>(j)])
      {
        idx.push_back(j);
      }
    }
    Mat gp(g.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c)
    {
      gp.col(static_cast<Eigen::Index>(c)) = g.col(idx[c]);
    }
    const Vec sp = gp.completeOrthogonalDecomposition().solve(target);
    Vec s = Vec::Zero(k);
    for (std::size_t c = 0; c < idx.size(); ++c)
    {
      s(idx[c]) = sp(static_cast<Eigen::Index>(c));
    }
    return s;
  };

  for (int outer = 0; outer < 3 * static_cast<int>(k) + 10; ++outer)
  {
    const Vec w = g.transpose() * (target - g * x);
    Eigen::Index best = -1;
    double wmax = tol;
    for (Eigen::Index j = 0; j < k; ++j)
    {
      if (!in_p[static_cast<std::size_t>(j)] && w(j) > wmax)
      {
        wmax = w(j);
        best = j;
      }
    }
    if (best < 0)
    {
      break;
    }
    in_p[static_cast<std::size_t>(best)] = true;
    for (int inner = 0; inner < 3 * static_cast<int>(k) + 10; ++inner)
    {
      const Vec s = solve_passive();
      bool all_pos = true;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < k; ++j)
      {
        if (in_p[static_cast<std::size_t>(j)] && s(j) <= 0.0)
        {
          all_pos = false;
          const double denom = x(j) - s(j);
          if (denom > 0.0)
          {
            alpha = std::min(alpha, x(j) / denom);
          }
        }
      }
      if (all_pos)
      {
        x = s;
        break;
      }
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < k; ++j)
      {
        if (in_p[static_cast<std::size_t>(j)] && x(j) <= tol)
        {
          in_p[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return {x, (g * x - target).norm()};
}

}  // namespace nmlab
