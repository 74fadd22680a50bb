#pragma once

// Exact rational linear programming.
//
//   minimize    c^T x
//   subject to  A x = a
//               B x <= b
//               l <= x <= u      (u may be absent)
//               x_j integer for j in I
//
// The relaxation is solved with a two-phase dense tableau simplex using Bland's rule, so
// it cannot cycle. Integer variables are handled by depth-first branch-and-bound on the
// most fractional variable. All arithmetic is in GMP rationals; returned points satisfy
// every constraint exactly.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "crnext/errors.hpp"
#include "crnext/numeric.hpp"

namespace crnext {

struct LinearProgram {
  explicit LinearProgram(std::size_t num_vars = 0)
      : objective(num_vars), lower(num_vars, Rational(0)), upper(num_vars) {}

  std::vector<Rational> objective;
  std::vector<std::vector<Rational>> eq_rows;
  std::vector<Rational> eq_rhs;
  std::vector<std::vector<Rational>> ineq_rows;  // rows of B in B x <= b
  std::vector<Rational> ineq_rhs;
  std::vector<Rational> lower;
  std::vector<std::optional<Rational>> upper;
  std::vector<std::size_t> integer_vars;

  std::size_t num_vars() const { return objective.size(); }

  void add_eq(std::vector<Rational> row, Rational rhs) {
    eq_rows.push_back(std::move(row));
    eq_rhs.push_back(std::move(rhs));
  }
  void add_le(std::vector<Rational> row, Rational rhs) {
    ineq_rows.push_back(std::move(row));
    ineq_rhs.push_back(std::move(rhs));
  }
  void add_ge(std::vector<Rational> row, const Rational& rhs) {
    for (auto& x : row) x = -x;
    add_le(std::move(row), -rhs);
  }
};

enum class LpStatus { Infeasible, Unbounded, Optimal };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::Optimal: return "optimal";
  }
  return "?";
}

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Rational value;              // meaningful iff Optimal
  std::vector<Rational> point; // meaningful iff Optimal
};

struct LpOptions {
  std::size_t max_pivots = 200'000;  // per relaxation
  std::size_t max_nodes = 100'000;   // branch-and-bound nodes
};

inline void check_dimensions(const LinearProgram& lp) {
  const std::size_t k = lp.num_vars();
  if (lp.lower.size() != k || lp.upper.size() != k) throw DimensionError("bound vectors must have one entry per variable");
  if (lp.eq_rows.size() != lp.eq_rhs.size()) throw DimensionError("equality rows and right-hand side differ in length");
  if (lp.ineq_rows.size() != lp.ineq_rhs.size())
    throw DimensionError("inequality rows and right-hand side differ in length");
  for (const auto& row : lp.eq_rows)
    if (row.size() != k) throw DimensionError("equality row has wrong width");
  for (const auto& row : lp.ineq_rows)
    if (row.size() != k) throw DimensionError("inequality row has wrong width");
  for (auto j : lp.integer_vars)
    if (j >= k) throw DimensionError("integer variable index out of range");
  for (std::size_t j = 0; j < k; ++j)
    if (lp.upper[j] && *lp.upper[j] < lp.lower[j]) throw DimensionError("lower bound exceeds upper bound");
}

// True iff x satisfies every constraint of lp exactly (integrality included).
inline bool satisfies(const LinearProgram& lp, const std::vector<Rational>& x) {
  if (x.size() != lp.num_vars()) return false;
  auto dot = [&](const std::vector<Rational>& row) {
    Rational s = 0;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (sgn(row[j]) != 0) s += row[j] * x[j];
    return s;
  };
  for (std::size_t i = 0; i < lp.eq_rows.size(); ++i)
    if (dot(lp.eq_rows[i]) != lp.eq_rhs[i]) return false;
  for (std::size_t i = 0; i < lp.ineq_rows.size(); ++i)
    if (dot(lp.ineq_rows[i]) > lp.ineq_rhs[i]) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lp.lower[j]) return false;
    if (lp.upper[j] && x[j] > *lp.upper[j]) return false;
  }
  for (auto j : lp.integer_vars)
    if (x[j].get_den() != 1) return false;
  return true;
}

// Human-readable dump, one constraint per line.
inline std::string to_text(const LinearProgram& lp) {
  std::ostringstream out;
  auto linear = [&](const std::vector<Rational>& row) {
    std::string s;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (sgn(row[j]) == 0) continue;
      if (!s.empty()) s += sgn(row[j]) > 0 ? " + " : " - ";
      else if (sgn(row[j]) < 0) s += "-";
      Rational a = abs(row[j]);
      if (a != 1) s += a.get_str() + " ";
      s += "x" + std::to_string(j + 1);
    }
    return s.empty() ? std::string("0") : s;
  };
  out << "minimize " << linear(lp.objective) << "\nsubject to\n";
  for (std::size_t i = 0; i < lp.eq_rows.size(); ++i)
    out << "  " << linear(lp.eq_rows[i]) << " = " << lp.eq_rhs[i].get_str() << "\n";
  for (std::size_t i = 0; i < lp.ineq_rows.size(); ++i)
    out << "  " << linear(lp.ineq_rows[i]) << " <= " << lp.ineq_rhs[i].get_str() << "\n";
  out << "bounds\n";
  for (std::size_t j = 0; j < lp.num_vars(); ++j)
    out << "  " << lp.lower[j].get_str() << " <= x" << j + 1 << " <= "
        << (lp.upper[j] ? lp.upper[j]->get_str() : std::string("inf")) << "\n";
  if (!lp.integer_vars.empty()) {
    out << "integer";
    for (auto j : lp.integer_vars) out << " x" << j + 1;
    out << "\n";
  }
  return out.str();
}

namespace detail {

class Tableau {
 public:
  // Builds the phase-one tableau for the shifted system x' = x - l >= 0.
  Tableau(const LinearProgram& lp, const std::vector<Rational>& lower,
          const std::vector<std::optional<Rational>>& upper)
      : k_(lp.num_vars()) {
    struct Row {
      std::vector<Rational> coeffs;
      Rational rhs;
      bool has_slack;
    };
    std::vector<Row> rows;
    auto shifted_rhs = [&](const std::vector<Rational>& row, const Rational& rhs) {
      Rational r = rhs;
      for (std::size_t j = 0; j < k_; ++j)
        if (sgn(row[j]) != 0 && sgn(lower[j]) != 0) r -= row[j] * lower[j];
      return r;
    };
    for (std::size_t i = 0; i < lp.eq_rows.size(); ++i)
      rows.push_back({lp.eq_rows[i], shifted_rhs(lp.eq_rows[i], lp.eq_rhs[i]), false});
    for (std::size_t i = 0; i < lp.ineq_rows.size(); ++i)
      rows.push_back({lp.ineq_rows[i], shifted_rhs(lp.ineq_rows[i], lp.ineq_rhs[i]), true});
    for (std::size_t j = 0; j < k_; ++j) {
      if (!upper[j]) continue;
      std::vector<Rational> unit(k_);
      unit[j] = 1;
      rows.push_back({std::move(unit), *upper[j] - lower[j], true});
    }

    const std::size_t num_rows = rows.size();
    std::size_t num_slack = 0;
    for (const auto& r : rows) num_slack += r.has_slack ? 1 : 0;
    std::vector<bool> needs_artificial(num_rows);
    std::size_t num_art = 0;
    for (std::size_t i = 0; i < num_rows; ++i) {
      bool negate = sgn(rows[i].rhs) < 0;
      needs_artificial[i] = !rows[i].has_slack || negate;
      num_art += needs_artificial[i] ? 1 : 0;
    }
    structural_ = k_ + num_slack;
    cols_ = structural_ + num_art;
    width_ = cols_ + 1;
    data_.assign(num_rows * width_, Rational(0));
    basis_.assign(num_rows, 0);
    rows_ = num_rows;

    std::size_t slack = k_, art = structural_;
    for (std::size_t i = 0; i < num_rows; ++i) {
      bool negate = sgn(rows[i].rhs) < 0;
      for (std::size_t j = 0; j < k_; ++j)
        if (sgn(rows[i].coeffs[j]) != 0) at(i, j) = negate ? Rational(-rows[i].coeffs[j]) : rows[i].coeffs[j];
      rhs(i) = negate ? Rational(-rows[i].rhs) : rows[i].rhs;
      if (rows[i].has_slack) {
        at(i, slack) = negate ? -1 : 1;
        if (!needs_artificial[i]) basis_[i] = slack;
        ++slack;
      }
      if (needs_artificial[i]) {
        at(i, art) = 1;
        basis_[i] = art++;
      }
    }
  }

  std::size_t rows() const { return rows_; }

  // Phase one; false iff infeasible.
  bool phase_one(std::size_t max_pivots) {
    std::vector<Rational> cost(cols_, Rational(0));
    for (std::size_t j = structural_; j < cols_; ++j) cost[j] = 1;
    price(cost);
    run(cols_, max_pivots);
    if (sgn(objective_value_) != 0) return false;

    // Drive zero-valued artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < rows_;) {
      if (basis_[i] < structural_) {
        ++i;
        continue;
      }
      std::size_t col = cols_;
      for (std::size_t j = 0; j < structural_; ++j)
        if (sgn(at(i, j)) != 0) {
          col = j;
          break;
        }
      if (col == cols_) {
        remove_row(i);
        continue;
      }
      pivot(i, col);
      ++i;
    }
    return true;
  }

  // Phase two over the original objective (on shifted variables); false iff unbounded.
  bool phase_two(const std::vector<Rational>& objective, std::size_t max_pivots) {
    std::vector<Rational> cost(cols_, Rational(0));
    for (std::size_t j = 0; j < k_; ++j) cost[j] = objective[j];
    price(cost);
    return run(structural_, max_pivots);
  }

  std::vector<Rational> shifted_point() const {
    std::vector<Rational> x(k_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i)
      if (basis_[i] < k_) x[basis_[i]] = data_[i * width_ + cols_];
    return x;
  }

 private:
  Rational& at(std::size_t i, std::size_t j) { return data_[i * width_ + j]; }
  Rational& rhs(std::size_t i) { return data_[i * width_ + cols_]; }

  void remove_row(std::size_t i) {
    auto first = data_.begin() + static_cast<std::ptrdiff_t>(i * width_);
    data_.erase(first, first + static_cast<std::ptrdiff_t>(width_));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
    --rows_;
  }

  // Reduced costs for `cost` given the current basis.
  void price(const std::vector<Rational>& cost) {
    reduced_ = cost;
    reduced_.resize(cols_);
    objective_value_ = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const Rational& cb = cost[basis_[i]];
      if (sgn(cb) == 0) continue;
      const Rational* row = &data_[i * width_];
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn(row[j]) != 0) reduced_[j] -= cb * row[j];
      objective_value_ += cb * row[cols_];
    }
  }

  // Bland's rule over columns [0, eligible). Returns false iff unbounded.
  bool run(std::size_t eligible, std::size_t max_pivots) {
    for (std::size_t iter = 0;; ++iter) {
      std::size_t enter = eligible;
      for (std::size_t j = 0; j < eligible; ++j)
        if (sgn(reduced_[j]) < 0) {
          enter = j;
          break;
        }
      if (enter == eligible) return true;
      if (iter >= max_pivots) throw IterationLimit("simplex pivot limit reached");

      std::size_t leave = rows_;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_; ++i) {
        const Rational& a = data_[i * width_ + enter];
        if (sgn(a) <= 0) continue;
        Rational ratio = data_[i * width_ + cols_] / a;
        if (leave == rows_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    Rational* prow = &data_[r * width_];
    const Rational inv = 1 / prow[c];
    nonzero_.clear();
    for (std::size_t j = 0; j < width_; ++j)
      if (sgn(prow[j]) != 0) {
        prow[j] *= inv;
        nonzero_.push_back(j);
      }
    auto eliminate = [&](Rational* row, Rational& value_slot, bool is_objective) {
      const Rational factor = row[c];
      if (sgn(factor) == 0) return;
      for (auto j : nonzero_) {
        if (j == cols_ && is_objective) continue;
        row[j] -= factor * prow[j];
      }
      if (is_objective) value_slot += factor * prow[cols_];
    };
    Rational unused;
    for (std::size_t i = 0; i < rows_; ++i)
      if (i != r) eliminate(&data_[i * width_], unused, false);
    // Objective row: reduced_[j] -= d_c * prow[j]; value += d_c * rhs_r.
    eliminate(reduced_.data(), objective_value_, true);
    basis_[r] = c;
  }

  std::size_t k_ = 0, structural_ = 0, cols_ = 0, width_ = 0, rows_ = 0;
  std::vector<Rational> data_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> reduced_;
  std::vector<std::size_t> nonzero_;
  Rational objective_value_;
};

inline LpOutcome solve_relaxation(const LinearProgram& lp, const std::vector<Rational>& lower,
                                  const std::vector<std::optional<Rational>>& upper, const LpOptions& opts) {
  for (std::size_t j = 0; j < lp.num_vars(); ++j)
    if (upper[j] && *upper[j] < lower[j]) return {LpStatus::Infeasible, {}, {}};
  Tableau t(lp, lower, upper);
  if (!t.phase_one(opts.max_pivots)) return {LpStatus::Infeasible, {}, {}};
  if (!t.phase_two(lp.objective, opts.max_pivots)) return {LpStatus::Unbounded, {}, {}};
  LpOutcome out{LpStatus::Optimal, 0, t.shifted_point()};
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    out.point[j] += lower[j];
    if (sgn(lp.objective[j]) != 0) out.value += lp.objective[j] * out.point[j];
  }
  return out;
}

inline Integer floor_of(const Rational& q) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f;
}

}  // namespace detail

// mpq_class(a, b) does not reduce; arithmetic on unreduced values is unreliable.
inline LinearProgram canonical(LinearProgram lp) {
  auto fix = [](Rational& x) { x.canonicalize(); };
  for (auto& x : lp.objective) fix(x);
  for (auto& row : lp.eq_rows) for (auto& x : row) fix(x);
  for (auto& row : lp.ineq_rows) for (auto& x : row) fix(x);
  for (auto& x : lp.eq_rhs) fix(x);
  for (auto& x : lp.ineq_rhs) fix(x);
  for (auto& x : lp.lower) fix(x);
  for (auto& x : lp.upper)
    if (x) fix(*x);
  return lp;
}

inline LpOutcome solve(const LinearProgram& input, const LpOptions& opts = {}) {
  check_dimensions(input);
  const LinearProgram lp = canonical(input);
  if (lp.integer_vars.empty()) return detail::solve_relaxation(lp, lp.lower, lp.upper, opts);

  std::optional<LpOutcome> best;
  bool unbounded = false;
  std::size_t nodes = 0;
  const Rational half(1, 2);

  struct Node {
    std::vector<Rational> lower;
    std::vector<std::optional<Rational>> upper;
  };
  std::vector<Node> stack{{lp.lower, lp.upper}};
  while (!stack.empty() && !unbounded) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (++nodes > opts.max_nodes) throw IterationLimit("branch-and-bound node limit reached");
    LpOutcome relax = detail::solve_relaxation(lp, node.lower, node.upper, opts);
    if (relax.status == LpStatus::Infeasible) continue;
    if (relax.status == LpStatus::Unbounded) {
      unbounded = true;
      break;
    }
    if (best && relax.value >= best->value) continue;

    std::optional<std::size_t> branch;
    Rational best_distance;
    for (auto j : lp.integer_vars) {
      const Rational& v = relax.point[j];
      if (v.get_den() == 1) continue;
      Rational frac = v - Rational(detail::floor_of(v));
      Rational distance = abs(frac - half);
      if (!branch || distance < best_distance || (distance == best_distance && j < *branch)) {
        branch = j;
        best_distance = distance;
      }
    }
    if (!branch) {
      best = std::move(relax);
      continue;
    }
    const std::size_t j = *branch;
    Integer down = detail::floor_of(relax.point[j]);
    Node up_node{node.lower, node.upper};
    up_node.lower[j] = Rational(down + 1);
    Node down_node{std::move(node.lower), std::move(node.upper)};
    down_node.upper[j] = Rational(down);
    // Depth-first, down branch explored first.
    stack.push_back(std::move(up_node));
    stack.push_back(std::move(down_node));
  }
  if (unbounded) return {LpStatus::Unbounded, {}, {}};
  if (!best) return {LpStatus::Infeasible, {}, {}};
  return *best;
}

// True iff the constraint system (objective ignored) has a solution.
inline bool feasible(const LinearProgram& lp, const LpOptions& opts = {}) {
  LinearProgram zero = lp;
  std::fill(zero.objective.begin(), zero.objective.end(), Rational(0));
  return solve(zero, opts).status == LpStatus::Optimal;
}

}  // namespace crnext
