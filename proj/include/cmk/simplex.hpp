#ifndef CMK_SIMPLEX_HPP
#define CMK_SIMPLEX_HPP

#include <algorithm>
#include <string>
#include <type_traits>
#include <vector>

#include "cmk/errors.hpp"

namespace cmk {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

enum class RowSense { le, eq, ge };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "?";
}

// General-form small LP: maximize objective . x subject to rows, x >= 0.
template <typename T>
struct DenseLp {
  std::vector<T> objective;
  std::vector<std::vector<T>> rows;
  std::vector<T> rhs;
  std::vector<RowSense> senses;

  size_t num_vars() const { return objective.size(); }
  size_t num_rows() const { return rows.size(); }

  void add_row(std::vector<T> coeffs, RowSense sense, T b) {
    rows.push_back(std::move(coeffs));
    senses.push_back(sense);
    rhs.push_back(std::move(b));
  }
};

template <typename T>
struct VertexResult {
  LpStatus status = LpStatus::optimal;
  std::vector<T> x;        // structural variable values
  T objective{};
  std::vector<T> duals;    // one per input row, in input orientation
  std::vector<int> basis;  // engine column basic in each kept row
};

namespace detail {
template <typename T>
struct lp_tol {
  static T value() { return T(0); }  // exact arithmetic
};
template <>
struct lp_tol<double> {
  static double value() { return 1e-9; }
};
}  // namespace detail

// Two-phase primal simplex on a dense tableau. Dantzig pricing with a
// permanent switch to Bland's rule after a stall, so degenerate cycles
// terminate. Columns can be appended after a solve and optimality restored
// from the current basis, which is what column generation needs.
template <typename T>
class SimplexEngine {
 public:
  explicit SimplexEngine(const DenseLp<T>& lp) : n_struct_(lp.num_vars()) {
    const size_t m = lp.num_rows();
    rows_.reserve(m);
    for (size_t r = 0; r < m; ++r) {
      internal_check(lp.rows[r].size() == n_struct_,
                     "simplex: row " + std::to_string(r) + " has wrong arity");
      Row row;
      row.coeffs = lp.rows[r];
      row.rhs = lp.rhs[r];
      row.sense = lp.senses[r];
      row.flipped = false;
      row.input_index = r;
      if (row.rhs < T(0)) {
        for (T& c : row.coeffs) c = -c;
        row.rhs = -row.rhs;
        row.flipped = true;
        if (row.sense == RowSense::le)
          row.sense = RowSense::ge;
        else if (row.sense == RowSense::ge)
          row.sense = RowSense::le;
      }
      rows_.push_back(std::move(row));
    }

    // column layout: structural | one aux per row | artificials for ge/eq
    size_t col = n_struct_;
    std::vector<int> aux(m), art(m, -1);
    for (size_t r = 0; r < m; ++r) aux[r] = static_cast<int>(col++);
    for (size_t r = 0; r < m; ++r)
      if (rows_[r].sense != RowSense::le) art[r] = static_cast<int>(col++);
    n_total_ = col;
    is_art_.assign(n_total_, 0);
    for (size_t r = 0; r < m; ++r)
      if (art[r] >= 0) is_art_[art[r]] = 1;

    tableau_.assign(m, std::vector<T>(n_total_, T(0)));
    b_.resize(m);
    basis_.resize(m);
    obj_.assign(n_total_, T(0));
    for (size_t j = 0; j < n_struct_; ++j) obj_[j] = lp.objective[j];

    identity_col_.resize(m);
    for (size_t r = 0; r < m; ++r) {
      for (size_t j = 0; j < n_struct_; ++j) tableau_[r][j] = rows_[r].coeffs[j];
      b_[r] = rows_[r].rhs;
      switch (rows_[r].sense) {
        case RowSense::le:
          tableau_[r][aux[r]] = T(1);
          basis_[r] = aux[r];
          identity_col_[r] = aux[r];
          break;
        case RowSense::ge:
          tableau_[r][aux[r]] = T(-1);
          tableau_[r][art[r]] = T(1);
          basis_[r] = art[r];
          identity_col_[r] = art[r];
          break;
        case RowSense::eq:
          tableau_[r][art[r]] = T(1);
          basis_[r] = art[r];
          identity_col_[r] = art[r];
          break;
      }
    }
    has_artificials_ = std::any_of(art.begin(), art.end(), [](int a) { return a >= 0; });
  }

  LpStatus solve(size_t max_pivots = kDefaultPivotCap) {
    const T tol = detail::lp_tol<T>::value();
    if (has_artificials_) {
      std::vector<T> phase1(n_total_, T(0));
      for (size_t j = 0; j < n_total_; ++j)
        if (is_art_[j]) phase1[j] = T(-1);
      LpStatus s = run(phase1, /*allow_artificial=*/true, max_pivots);
      if (s == LpStatus::iteration_limit) return last_status_ = s;
      T infeas = T(0);
      for (size_t r = 0; r < basis_.size(); ++r)
        if (is_art_[basis_[r]]) infeas += b_[r];
      if (infeas > tol) return last_status_ = LpStatus::infeasible;
      purge_artificials();
    }
    return last_status_ = run(obj_, /*allow_artificial=*/false, max_pivots);
  }

  // Append a structural column (coefficients in input-row order) and leave
  // the engine ready for reoptimize(). Returns the engine column index.
  size_t add_column(const std::vector<T>& coeffs, const T& obj_coeff) {
    internal_check(dropped_inputs_ == 0,
                   "simplex: add_column after redundant-row removal");
    internal_check(coeffs.size() == rows_.size(),
                   "simplex: add_column arity mismatch");
    const size_t m = rows_.size();
    // tableau column = B^-1 a; the identity-origin columns hold B^-1
    std::vector<T> col(m, T(0));
    for (size_t r = 0; r < m; ++r) {
      T a = rows_[r].flipped ? -coeffs[r] : coeffs[r];
      if (a == T(0)) continue;
      for (size_t rr = 0; rr < m; ++rr) {
        const T& binv = tableau_[rr][identity_col_[r]];
        if (binv != T(0)) col[rr] += binv * a;
      }
    }
    size_t idx = n_total_++;
    for (size_t r = 0; r < m; ++r) tableau_[r].push_back(col[r]);
    obj_.push_back(obj_coeff);
    is_art_.push_back(0);
    return idx;
  }

  LpStatus reoptimize(size_t max_pivots = kDefaultPivotCap) {
    return last_status_ = run(obj_, /*allow_artificial=*/false, max_pivots);
  }

  T objective_value() const {
    T z(0);
    for (size_t r = 0; r < basis_.size(); ++r) z += obj_[basis_[r]] * b_[r];
    return z;
  }

  T column_value(size_t j) const {
    for (size_t r = 0; r < basis_.size(); ++r)
      if (basis_[r] == static_cast<int>(j)) return b_[r];
    return T(0);
  }

  std::vector<T> structural_values() const {
    std::vector<T> x(n_struct_, T(0));
    for (size_t r = 0; r < basis_.size(); ++r)
      if (static_cast<size_t>(basis_[r]) < n_struct_) x[basis_[r]] = b_[r];
    return x;
  }

  // Value of engine column j in the current basic solution, including
  // columns added later by add_column.
  T solution_value_of(size_t j) const { return column_value(j); }

  // Dual of input row r (0 for rows removed as redundant).
  T dual(size_t input_row) const {
    for (size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].input_index != input_row) continue;
      T z(0);
      for (size_t rr = 0; rr < basis_.size(); ++rr) {
        const T& binv = tableau_[rr][identity_col_[r]];
        if (binv != T(0)) z += obj_[basis_[rr]] * binv;
      }
      return rows_[r].flipped ? -z : z;
    }
    return T(0);
  }

  const std::vector<int>& basis() const { return basis_; }
  size_t num_structural() const { return n_struct_; }
  LpStatus last_status() const { return last_status_; }

  static constexpr size_t kDefaultPivotCap = 2'000'000;

 private:
  struct Row {
    std::vector<T> coeffs;
    T rhs;
    RowSense sense;
    bool flipped;
    size_t input_index;
  };

  static void axpy(std::vector<T>& row, const T& f, const std::vector<T>& prow,
                   size_t count) {
    if constexpr (std::is_floating_point_v<T>) {
      T* out = row.data();
      const T* in = prow.data();
      for (size_t j = 0; j < count; ++j) out[j] -= f * in[j];
    } else {
      // exact scalars are expensive; skipping zeros pays off
      for (size_t j = 0; j < count; ++j)
        if (prow[j] != T(0)) row[j] -= f * prow[j];
    }
  }

  void pivot(size_t pr, size_t pc) {
    std::vector<T>& prow = tableau_[pr];
    T inv = prow[pc];
    if (inv != T(1)) {
      for (T& v : prow) v /= inv;
      b_[pr] /= inv;
    }
    for (size_t r = 0; r < tableau_.size(); ++r) {
      if (r == pr) continue;
      T f = tableau_[r][pc];
      if (f == T(0)) continue;
      axpy(tableau_[r], f, prow, n_total_);
      b_[r] -= f * b_[pr];
      if (b_[r] < T(0) && -b_[r] <= detail::lp_tol<T>::value()) b_[r] = T(0);
    }
    basis_[pr] = static_cast<int>(pc);
  }

  LpStatus run(const std::vector<T>& costs, bool allow_artificial,
               size_t max_pivots) {
    const T tol = detail::lp_tol<T>::value();
    const size_t m = tableau_.size();
    std::vector<T> d(n_total_);  // reduced costs c - z
    for (size_t j = 0; j < n_total_; ++j) d[j] = costs[j];
    for (size_t r = 0; r < m; ++r) {
      const T& cb = costs[basis_[r]];
      if (cb == T(0)) continue;
      const std::vector<T>& row = tableau_[r];
      for (size_t j = 0; j < n_total_; ++j)
        if (row[j] != T(0)) d[j] -= cb * row[j];
    }

    T last_obj = current_obj(costs);
    size_t stall = 0;
    const size_t stall_limit = 2 * (m + n_total_) + 16;
    bool bland = false;

    for (size_t it = 0; it < max_pivots; ++it) {
      int pc = -1;
      if (bland) {
        for (size_t j = 0; j < n_total_; ++j) {
          if (!allow_artificial && is_art_[j]) continue;
          if (d[j] > tol) {
            pc = static_cast<int>(j);
            break;
          }
        }
      } else {
        T best = tol;
        for (size_t j = 0; j < n_total_; ++j) {
          if (!allow_artificial && is_art_[j]) continue;
          if (d[j] > best) {
            best = d[j];
            pc = static_cast<int>(j);
          }
        }
      }
      if (pc < 0) return LpStatus::optimal;

      int pr = -1;
      T best_ratio(0);
      for (size_t r = 0; r < m; ++r) {
        if (!(tableau_[r][pc] > tol)) continue;
        T ratio = b_[r] / tableau_[r][pc];
        if (pr < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[pr])) {
          pr = static_cast<int>(r);
          best_ratio = ratio;
        }
      }
      if (pr < 0) return LpStatus::unbounded;

      pivot(static_cast<size_t>(pr), static_cast<size_t>(pc));
      const T dpc = d[pc];
      if (dpc != T(0)) axpy(d, dpc, tableau_[pr], n_total_);

      T now = current_obj(costs);
      if (now > last_obj + tol) {
        last_obj = now;
        stall = 0;
      } else if (!bland && ++stall > stall_limit) {
        bland = true;
      }
    }
    return LpStatus::iteration_limit;
  }

  T current_obj(const std::vector<T>& costs) const {
    T z(0);
    for (size_t r = 0; r < basis_.size(); ++r) z += costs[basis_[r]] * b_[r];
    return z;
  }

  // Pivot basic artificials out after phase 1, dropping rows that turned out
  // linearly dependent.
  void purge_artificials() {
    const T tol = detail::lp_tol<T>::value();
    for (size_t r = 0; r < tableau_.size();) {
      if (!is_art_[basis_[r]]) {
        ++r;
        continue;
      }
      int pc = -1;
      for (size_t j = 0; j < n_total_; ++j) {
        if (is_art_[j]) continue;
        const T& a = tableau_[r][j];
        if (a > tol || a < -tol) {
          pc = static_cast<int>(j);
          break;
        }
      }
      if (pc >= 0) {
        pivot(r, static_cast<size_t>(pc));
        ++r;
      } else {
        tableau_.erase(tableau_.begin() + r);
        b_.erase(b_.begin() + r);
        basis_.erase(basis_.begin() + r);
        rows_.erase(rows_.begin() + r);
        identity_col_.erase(identity_col_.begin() + r);
        ++dropped_inputs_;
      }
    }
  }

  size_t n_struct_;
  size_t n_total_ = 0;
  std::vector<Row> rows_;
  std::vector<std::vector<T>> tableau_;
  std::vector<T> b_;
  std::vector<int> basis_;
  std::vector<T> obj_;
  std::vector<char> is_art_;
  std::vector<int> identity_col_;
  bool has_artificials_ = false;
  size_t dropped_inputs_ = 0;
  LpStatus last_status_ = LpStatus::optimal;
};

// Solve a dense LP to an optimal basic feasible solution (vertex).
template <typename T>
VertexResult<T> solve_vertex_lp(const DenseLp<T>& lp) {
  SimplexEngine<T> engine(lp);
  VertexResult<T> out;
  out.status = engine.solve();
  if (out.status != LpStatus::optimal) return out;
  out.x = engine.structural_values();
  out.objective = engine.objective_value();
  out.duals.resize(lp.num_rows());
  for (size_t r = 0; r < lp.num_rows(); ++r) out.duals[r] = engine.dual(r);
  out.basis = engine.basis();
  return out;
}

}  // namespace cmk

#endif
