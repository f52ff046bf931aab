#include <doctest.h>

#include <boost/multiprecision/gmp.hpp>

#include "cmk/simplex.hpp"

using namespace cmk;
using Rat = boost::multiprecision::mpq_rational;

TEST_CASE("one-variable box") {
  DenseLp<double> lp;
  lp.objective = {1.0};
  lp.add_row({1.0}, RowSense::le, 1.0);
  VertexResult<double> r = solve_vertex_lp(lp);
  CHECK(r.status == LpStatus::optimal);
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.objective == doctest::Approx(1.0));
}

TEST_CASE("infeasible pair") {
  DenseLp<double> lp;
  lp.objective = {1.0};
  lp.add_row({1.0}, RowSense::le, 0.0);
  lp.add_row({1.0}, RowSense::ge, 1.0);
  CHECK(solve_vertex_lp(lp).status == LpStatus::infeasible);
}

TEST_CASE("unbounded ray") {
  DenseLp<double> lp;
  lp.objective = {1.0, 0.0};
  lp.add_row({-1.0, 1.0}, RowSense::le, 1.0);
  CHECK(solve_vertex_lp(lp).status == LpStatus::unbounded);
}

TEST_CASE("two-variable LP solved by hand") {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6 -> (4, 0), objective 12,
  // duals (3, 0)
  DenseLp<double> lp;
  lp.objective = {3.0, 2.0};
  lp.add_row({1.0, 1.0}, RowSense::le, 4.0);
  lp.add_row({1.0, 3.0}, RowSense::le, 6.0);
  VertexResult<double> r = solve_vertex_lp(lp);
  CHECK(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(12.0));
  CHECK(r.x[0] == doctest::Approx(4.0));
  CHECK(r.x[1] == doctest::Approx(0.0));
  CHECK(r.duals[0] == doctest::Approx(3.0));
  CHECK(r.duals[1] == doctest::Approx(0.0));
}

TEST_CASE("equality rows run through phase 1") {
  DenseLp<double> lp;
  lp.objective = {1.0, 1.0};
  lp.add_row({1.0, 1.0}, RowSense::eq, 2.0);
  lp.add_row({1.0, 0.0}, RowSense::le, 1.5);
  VertexResult<double> r = solve_vertex_lp(lp);
  CHECK(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(2.0));
  CHECK(r.x[0] + r.x[1] == doctest::Approx(2.0));
}

TEST_CASE("solutions are vertices") {
  // nonzero structural count never exceeds the row count
  DenseLp<double> lp;
  lp.objective = {5.0, 4.0, 3.0, 6.0, 1.0};
  lp.add_row({2.0, 3.0, 1.0, 4.0, 1.0}, RowSense::le, 5.0);
  lp.add_row({4.0, 1.0, 2.0, 1.0, 3.0}, RowSense::le, 11.0);
  lp.add_row({3.0, 4.0, 2.0, 2.0, 1.0}, RowSense::le, 8.0);
  VertexResult<double> r = solve_vertex_lp(lp);
  CHECK(r.status == LpStatus::optimal);
  int nonzero = 0;
  for (double x : r.x)
    if (x > 1e-9) ++nonzero;
  CHECK(nonzero <= 3);
  // re-solving the same LP reproduces the same objective and basis
  VertexResult<double> again = solve_vertex_lp(lp);
  CHECK(again.objective == doctest::Approx(r.objective));
  CHECK(again.basis == r.basis);
}

TEST_CASE("negative right-hand sides are normalized") {
  // max -x s.t. -x <= -2  (i.e. x >= 2) -> x = 2
  DenseLp<double> lp;
  lp.objective = {-1.0};
  lp.add_row({-1.0}, RowSense::le, -2.0);
  VertexResult<double> r = solve_vertex_lp(lp);
  CHECK(r.status == LpStatus::optimal);
  CHECK(r.x[0] == doctest::Approx(2.0));
}

TEST_CASE("exact rational solve") {
  // max x + y s.t. 2x + y <= 2, x + 3y <= 3 -> (3/5, 4/5), objective 7/5
  DenseLp<Rat> lp;
  lp.objective = {Rat(1), Rat(1)};
  lp.add_row({Rat(2), Rat(1)}, RowSense::le, Rat(2));
  lp.add_row({Rat(1), Rat(3)}, RowSense::le, Rat(3));
  VertexResult<Rat> r = solve_vertex_lp(lp);
  CHECK(r.status == LpStatus::optimal);
  CHECK(r.x[0] == Rat(3, 5));
  CHECK(r.x[1] == Rat(4, 5));
  CHECK(r.objective == Rat(7, 5));
}

TEST_CASE("column addition restores the optimum incrementally") {
  DenseLp<double> lp;
  lp.objective = {1.0, 2.0};
  lp.add_row({1.0, 1.0}, RowSense::le, 3.0);
  lp.add_row({0.0, 1.0}, RowSense::le, 2.0);
  SimplexEngine<double> engine(lp);
  CHECK(engine.solve() == LpStatus::optimal);
  CHECK(engine.objective_value() == doctest::Approx(5.0));  // x=(1,2)

  // a new column with weight 1 in row 0 and objective 4 dominates
  size_t idx = engine.add_column({1.0, 0.0}, 4.0);
  CHECK(engine.reoptimize() == LpStatus::optimal);

  // cross-check against a fresh solve of the extended LP
  DenseLp<double> full;
  full.objective = {1.0, 2.0, 4.0};
  full.add_row({1.0, 1.0, 1.0}, RowSense::le, 3.0);
  full.add_row({0.0, 1.0, 0.0}, RowSense::le, 2.0);
  VertexResult<double> fresh = solve_vertex_lp(full);
  CHECK(engine.objective_value() == doctest::Approx(fresh.objective));
  CHECK(engine.column_value(idx) == doctest::Approx(fresh.x[2]));
}

TEST_CASE("degenerate LP terminates") {
  // zero right-hand sides force degenerate pivots on x and y
  DenseLp<double> lp;
  lp.objective = {1.0, 1.0, 1.0};
  lp.add_row({1.0, 1.0, 0.0}, RowSense::le, 0.0);
  lp.add_row({1.0, 2.0, 0.0}, RowSense::le, 0.0);
  lp.add_row({0.0, 0.0, 1.0}, RowSense::le, 1.0);
  VertexResult<double> r = solve_vertex_lp(lp);
  CHECK(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(1.0));
  CHECK(r.x[2] == doctest::Approx(1.0));
}
