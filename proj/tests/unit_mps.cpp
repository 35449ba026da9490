#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lineopt/formulation.hpp"
#include "lineopt/lp.hpp"
#include "lineopt/mps.hpp"
#include "lineopt/synthetic.hpp"

using namespace lineopt;

namespace {

// Semantic equality up to row/column naming: same dimensions, bounds,
// integrality, objective, and the same LP relaxation optimum.
void check_equivalent(const MilpModel& a, const MilpModel& b) {
  REQUIRE(a.num_cols() == b.num_cols());
  REQUIRE(a.num_rows() == b.num_rows());
  CHECK(a.maximize == b.maximize);
  for (int j = 0; j < a.num_cols(); ++j) {
    CHECK(a.lower[static_cast<std::size_t>(j)] == doctest::Approx(b.lower[static_cast<std::size_t>(j)]));
    CHECK(a.upper[static_cast<std::size_t>(j)] == doctest::Approx(b.upper[static_cast<std::size_t>(j)]));
    CHECK(a.objective[static_cast<std::size_t>(j)] ==
          doctest::Approx(b.objective[static_cast<std::size_t>(j)]));
    CHECK(a.is_integer[static_cast<std::size_t>(j)] == b.is_integer[static_cast<std::size_t>(j)]);
  }
  const LpOutcome ra = solve_lp_relaxation(a);
  const LpOutcome rb = solve_lp_relaxation(b);
  REQUIRE(ra.status == rb.status);
  if (ra.status == LpStatus::optimal)
    CHECK(ra.objective == doctest::Approx(rb.objective).epsilon(1e-9));
}

}  // namespace

TEST_CASE("a small handwritten model survives the round trip") {
  MilpModel m;
  m.name = "toy";
  m.maximize = true;
  m.add_col(0, 1, 3, true);
  m.add_col(0, 1, 2, true);
  m.add_col(-2.5, kInf, 0.75, false);
  m.add_row({{0, 1.0}, {1, 1.0}}, '<', 1.0, RowTag{RowFamily::other, -1, 0});
  m.add_row({{2, 1.0}, {0, -4.0}}, '>', -3.5, RowTag{RowFamily::other, -1, 1});
  m.add_row({{1, 2.0}, {2, 1.0}}, '=', 0.25, RowTag{RowFamily::other, -1, 2});

  const std::string text = write_mps(m);
  CHECK(text.find("OBJSENSE") != std::string::npos);
  CHECK(text.find("INTORG") != std::string::npos);
  const MilpModel back = read_mps(text);
  check_equivalent(m, back);
  CHECK(back.rows[0].sense == '<');
  CHECK(back.rows[1].sense == '>');
  CHECK(back.rows[2].sense == '=');
}

TEST_CASE("an integrated design model survives the round trip") {
  TransitInstance inst = generate_synthetic(1, SizeClass::tiny);
  BuiltModel built = build_ind(inst);
  const std::string text = write_mps(built.model);
  const MilpModel back = read_mps(text);
  check_equivalent(built.model, back);
}

TEST_CASE("row tags are written as comments") {
  TransitInstance inst = generate_synthetic(1, SizeClass::tiny);
  BuiltModel built = build_ind(inst);
  const std::string text = write_mps(built.model);
  CHECK(text.find("* ROWTAG R0 budget_rapid") != std::string::npos);
  CHECK(text.find("mode_choice") != std::string::npos);
}
