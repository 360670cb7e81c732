#include "qafactor/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace qaf::lp {

namespace {

constexpr double kEps = 1e-9;

// x_k = base + sign * y[col]  (and - y[col2] when the variable is free)
struct VarMap {
  double base = 0.0;
  double sign = 1.0;
  std::size_t col = 0;
  bool split = false;
  std::size_t col2 = 0;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), a_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a_[i * (n_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, n_); }
  double& obj(std::size_t j) { return at(m_, j); }

  void pivot(std::size_t p, std::size_t q) {
    const double inv = 1.0 / at(p, q);
    for (std::size_t j = 0; j <= n_; ++j) at(p, j) *= inv;
    at(p, q) = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == p) continue;
      const double f = at(i, q);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= f * at(p, j);
      at(i, q) = 0.0;
    }
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

 private:
  std::size_t m_, n_;
  std::vector<double> a_;
};

enum class Outcome { Optimal, Unbounded };

// Bland's rule: lowest-index improving column, lowest-index leaving variable on ties.
Outcome run_simplex(Tableau& t, std::vector<std::size_t>& basis, const std::vector<bool>& barred,
                    int& iterations) {
  for (;;) {
    std::size_t q = t.cols();
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (!barred[j] && t.obj(j) < -kEps) {
        q = j;
        break;
      }
    }
    if (q == t.cols()) return Outcome::Optimal;

    std::size_t p = t.rows();
    double best = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, q);
      if (a <= kEps) continue;
      const double ratio = t.rhs(i) / a;
      if (p == t.rows() || ratio < best - kEps || (std::abs(ratio - best) <= kEps && basis[i] < basis[p])) {
        p = i;
        best = ratio;
      }
    }
    if (p == t.rows()) return Outcome::Unbounded;
    t.pivot(p, q);
    basis[p] = q;
    ++iterations;
  }
}

}  // namespace

Solution solve(const Problem& problem) {
  const std::size_t nx = problem.objective.size();
  if (problem.lower.size() != nx || problem.upper.size() != nx)
    throw std::invalid_argument("lp::solve: bound vectors must match objective length");
  for (const auto& r : problem.rows)
    if (r.coef.size() != nx) throw std::invalid_argument("lp::solve: row length mismatch");

  // Map every variable onto non-negative columns.
  std::vector<VarMap> vars(nx);
  std::size_t ny = 0;
  std::vector<Row> rows = problem.rows;
  std::vector<std::pair<std::size_t, double>> upper_rows;  // (column, bound)
  for (std::size_t k = 0; k < nx; ++k) {
    const double lo = problem.lower[k], hi = problem.upper[k];
    if (lo > hi) return Solution{Status::Infeasible, {}, 0.0, 0};
    if (std::isfinite(lo)) {
      vars[k] = {lo, 1.0, ny++, false, 0};
      if (std::isfinite(hi)) upper_rows.emplace_back(vars[k].col, hi - lo);
    } else if (std::isfinite(hi)) {
      vars[k] = {hi, -1.0, ny++, false, 0};
    } else {
      vars[k] = {0.0, 1.0, ny, true, ny + 1};
      ny += 2;
    }
  }

  struct StdRow {
    std::vector<double> coef;
    Sense sense;
    double rhs;
  };
  std::vector<StdRow> srows;
  srows.reserve(rows.size() + upper_rows.size());
  for (const auto& r : rows) {
    StdRow s{std::vector<double>(ny, 0.0), r.sense, r.rhs};
    for (std::size_t k = 0; k < nx; ++k) {
      const double a = r.coef[k];
      if (a == 0.0) continue;
      s.rhs -= a * vars[k].base;
      s.coef[vars[k].col] += a * vars[k].sign;
      if (vars[k].split) s.coef[vars[k].col2] -= a;
    }
    srows.push_back(std::move(s));
  }
  for (auto [col, bound] : upper_rows) {
    StdRow s{std::vector<double>(ny, 0.0), Sense::LessEq, bound};
    s.coef[col] = 1.0;
    srows.push_back(std::move(s));
  }
  for (auto& s : srows) {
    if (s.rhs < 0.0) {
      for (auto& a : s.coef) a = -a;
      s.rhs = -s.rhs;
      if (s.sense == Sense::LessEq)
        s.sense = Sense::GreaterEq;
      else if (s.sense == Sense::GreaterEq)
        s.sense = Sense::LessEq;
    }
  }

  const std::size_t m = srows.size();
  std::size_t n_slack = 0, n_art = 0;
  for (const auto& s : srows) {
    if (s.sense != Sense::Equal) ++n_slack;
    if (s.sense != Sense::LessEq) ++n_art;
  }
  const std::size_t art0 = ny + n_slack;
  const std::size_t ncols = art0 + n_art;

  Tableau t(m, ncols);
  std::vector<std::size_t> basis(m);
  std::vector<bool> is_art(ncols, false);
  {
    std::size_t slack = ny, art = art0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < ny; ++j) t.at(i, j) = srows[i].coef[j];
      t.rhs(i) = srows[i].rhs;
      if (srows[i].sense == Sense::LessEq) {
        t.at(i, slack) = 1.0;
        basis[i] = slack++;
      } else {
        if (srows[i].sense == Sense::GreaterEq) t.at(i, slack++) = -1.0;
        t.at(i, art) = 1.0;
        is_art[art] = true;
        basis[i] = art++;
      }
    }
  }

  Solution sol;
  std::vector<bool> barred(ncols, false);

  // Phase 1: maximize -sum(artificials).
  if (n_art > 0) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_art[basis[i]]) continue;
      for (std::size_t j = 0; j <= ncols; ++j)
        if (!is_art[j] || j == ncols) t.at(m, j) -= t.at(i, j);
    }
    run_simplex(t, basis, barred, sol.iterations);
    if (t.rhs(m) < -1e-7) {
      sol.status = Status::Infeasible;
      return sol;
    }
    // Drive remaining zero-level artificials out of the basis.
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_art[basis[i]]) continue;
      for (std::size_t j = 0; j < art0; ++j) {
        if (std::abs(t.at(i, j)) > kEps) {
          t.pivot(i, j);
          basis[i] = j;
          break;
        }
      }
    }
    for (std::size_t j = art0; j < ncols; ++j) barred[j] = true;
  }

  // Phase 2 objective row.
  std::vector<double> c(ncols, 0.0);
  double c0 = 0.0;
  for (std::size_t k = 0; k < nx; ++k) {
    c[vars[k].col] += problem.objective[k] * vars[k].sign;
    if (vars[k].split) c[vars[k].col2] -= problem.objective[k];
    c0 += problem.objective[k] * vars[k].base;
  }
  for (std::size_t j = 0; j <= ncols; ++j) t.obj(j) = j < ncols ? -c[j] : 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double cb = c[basis[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= ncols; ++j) t.obj(j) += cb * t.at(i, j);
  }

  if (run_simplex(t, basis, barred, sol.iterations) == Outcome::Unbounded) {
    sol.status = Status::Unbounded;
    return sol;
  }

  std::vector<double> y(ncols, 0.0);
  for (std::size_t i = 0; i < m; ++i) y[basis[i]] = t.rhs(i);
  sol.x.assign(nx, 0.0);
  for (std::size_t k = 0; k < nx; ++k) {
    sol.x[k] = vars[k].base + vars[k].sign * y[vars[k].col];
    if (vars[k].split) sol.x[k] -= y[vars[k].col2];
  }
  sol.objective = t.rhs(m) + c0;
  sol.status = Status::Optimal;
  return sol;
}

}  // namespace qaf::lp
