#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lineopt/formulation.hpp"
#include "lineopt/lp.hpp"
#include "lineopt/milp.hpp"
#include "lineopt/synthetic.hpp"
#include "test_support.hpp"

using namespace lineopt;

TEST_CASE("bounded single-variable maximization") {
  LpProblem lp;
  lp.maximize = true;
  lp.add_col(0, 2, 1);
  lp.add_row({{0, 1.0}}, '<', 1.0);
  const LpOutcome r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(1.0));
  CHECK(r.primal[0] == doctest::Approx(1.0));
}

TEST_CASE("two-variable polytope solved to its best vertex") {
  LpProblem lp;
  lp.maximize = true;
  lp.add_col(0, kInf, 1);
  lp.add_col(0, kInf, 1);
  lp.add_row({{0, 1.0}, {1, 1.0}}, '<', 1.0);
  lp.add_row({{0, 1.0}}, '<', 0.4);
  const LpOutcome r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(1.0));
  CHECK(lp_complementarity(lp, r) <= 1e-7);
  CHECK(std::abs(r.objective - lp_dual_objective(lp, r)) <= 1e-6 * (1 + std::abs(r.objective)));
}

TEST_CASE("contradictory rows produce a verified Farkas ray") {
  LpProblem lp;
  lp.add_col(-kInf, kInf, 0);
  lp.add_row({{0, 1.0}}, '>', 1.0);
  lp.add_row({{0, 1.0}}, '<', 0.0);
  const LpOutcome r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::infeasible);
  std::string why;
  CHECK(check_farkas_ray(lp, r.farkas, 1e-7, &why));
  INFO(why);
  // scaled copy of (1, -1) in the documented orientation
  CHECK(r.farkas[0] > 0);
  CHECK(r.farkas[1] < 0);
  CHECK(std::abs(std::abs(r.farkas[0]) - std::abs(r.farkas[1])) <= 1e-9);
}

TEST_CASE("iteration limit is reported, never a wrong answer") {
  LpProblem lp;
  lp.maximize = true;
  for (int j = 0; j < 10; ++j) lp.add_col(0, kInf, 1);
  for (int i = 0; i < 10; ++i) {
    std::vector<std::pair<int, double>> c;
    for (int j = 0; j <= i; ++j) c.emplace_back(j, 1.0 + j);
    lp.add_row(std::move(c), '<', 5.0 + i);
  }
  LpOptions opts;
  opts.max_iterations = 1;
  const LpOutcome r = solve_lp(lp, nullptr, opts);
  CHECK(r.status == LpStatus::iteration_limit);
}

namespace {

// Independent oracle for 2-variable LPs: enumerate all constraint/bound
// intersections and pick the best feasible point.
std::optional<double> enumerate_2d(const LpProblem& lp) {
  std::vector<std::array<double, 3>> lines;  // a x + b y = c
  for (const LpRow& r : lp.rows) {
    double a = 0, b = 0;
    for (auto& [j, v] : r.coef) (j == 0 ? a : b) += v;
    lines.push_back({a, b, r.rhs});
  }
  for (int j = 0; j < 2; ++j) {
    if (std::isfinite(lp.lower[static_cast<std::size_t>(j)]))
      lines.push_back({j == 0 ? 1.0 : 0.0, j == 0 ? 0.0 : 1.0, lp.lower[static_cast<std::size_t>(j)]});
    if (std::isfinite(lp.upper[static_cast<std::size_t>(j)]))
      lines.push_back({j == 0 ? 1.0 : 0.0, j == 0 ? 0.0 : 1.0, lp.upper[static_cast<std::size_t>(j)]});
  }
  std::optional<double> best;
  auto consider = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    const std::vector<double> pt{x, y};
    if (lp_primal_infeasibility(lp, pt) > 1e-7) return;
    const double obj = lp.objective[0] * x + lp.objective[1] * y;
    if (!best || (lp.maximize ? obj > *best : obj < *best)) best = obj;
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const double det = lines[i][0] * lines[j][1] - lines[j][0] * lines[i][1];
      if (std::abs(det) < 1e-9) continue;
      const double x = (lines[i][2] * lines[j][1] - lines[j][2] * lines[i][1]) / det;
      const double y = (lines[i][0] * lines[j][2] - lines[j][0] * lines[i][2]) / det;
      consider(x, y);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("random 2-variable LPs agree with vertex enumeration") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> cd(-4, 4);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    LpProblem lp;
    lp.maximize = (t % 2) == 0;
    for (int j = 0; j < 2; ++j) {
      const double lo = cd(rng);
      lp.add_col(lo, lo + std::abs(cd(rng)) + 0.1, cd(rng));
    }
    const int m = 1 + t % 4;
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, double>> c{{0, cd(rng)}, {1, cd(rng)}};
      lp.add_row(std::move(c), (t + i) % 2 ? '<' : '>', cd(rng));
    }
    const LpOutcome r = solve_lp(lp);
    const auto expect = enumerate_2d(lp);
    if (r.status == LpStatus::optimal) {
      REQUIRE(expect.has_value());
      CHECK(r.objective == doctest::Approx(*expect).epsilon(1e-6));
      ++checked;
    } else if (r.status == LpStatus::infeasible) {
      CHECK_FALSE(expect.has_value());
      CHECK(check_farkas_ray(lp, r.farkas, 1e-7));
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("strong duality and certificates across random bounded LPs") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> cd(-5, 5), bd(-6, 6);
  int optimal = 0, infeasible = 0, bad = 0;
  for (int t = 0; t < 500; ++t) {
    std::uniform_int_distribution<int> nd(1, 30), md(1, 30);
    const int n = nd(rng), m = md(rng);
    LpProblem lp;
    lp.maximize = (t % 2) == 0;
    for (int j = 0; j < n; ++j) {
      const double lo = bd(rng);
      lp.add_col(lo, lo + std::abs(bd(rng)), cd(rng));
    }
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, double>> coef;
      for (int j = 0; j < n; ++j)
        if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.4) coef.emplace_back(j, cd(rng));
      if (coef.empty()) coef.emplace_back(0, 1.0);
      const char sense = "<><"[static_cast<std::size_t>(i % 3)];
      lp.add_row(std::move(coef), sense, 4.0 * bd(rng));
    }
    const LpOutcome r = solve_lp(lp);
    if (r.status == LpStatus::optimal) {
      ++optimal;
      if (lp_primal_infeasibility(lp, r.primal) > 1e-7) ++bad;
      if (std::abs(r.objective - lp_dual_objective(lp, r)) > 1e-6 * (1 + std::abs(r.objective)))
        ++bad;
      if (lp_complementarity(lp, r) > 1e-6) ++bad;
    } else if (r.status == LpStatus::infeasible) {
      ++infeasible;
      if (!check_farkas_ray(lp, r.farkas, 1e-7)) ++bad;
    }
  }
  CHECK(bad == 0);
  CHECK(optimal + infeasible == 500);  // boxes keep every instance bounded
  CHECK(optimal > 100);
  CHECK(infeasible > 100);
}

TEST_CASE("warm starts reach the same optimum") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> cd(-3, 3);
  LpProblem lp;
  lp.maximize = true;
  for (int j = 0; j < 20; ++j) lp.add_col(0, 1 + std::abs(cd(rng)), cd(rng));
  for (int i = 0; i < 15; ++i) {
    std::vector<std::pair<int, double>> c;
    for (int j = 0; j < 20; ++j)
      if (j % 3 == i % 3) c.emplace_back(j, cd(rng));
    lp.add_row(std::move(c), '<', 2 + std::abs(cd(rng)));
  }
  const LpOutcome cold = solve_lp(lp);
  REQUIRE(cold.status == LpStatus::optimal);
  LpProblem shifted = lp;
  shifted.objective[0] += 0.25;
  const LpOutcome warm = solve_lp(shifted, &cold.basis);
  const LpOutcome cold2 = solve_lp(shifted);
  REQUIRE(warm.status == LpStatus::optimal);
  CHECK(warm.objective == doctest::Approx(cold2.objective).epsilon(1e-9));
}

TEST_CASE("relaxation value bounds the integer optimum from above") {
  TransitInstance inst = generate_synthetic(3, SizeClass::tiny);
  BuiltModel built = build_ind(inst);
  const LpOutcome relax = solve_lp_relaxation(built.model);
  REQUIRE(relax.status == LpStatus::optimal);
  // weaker-model comparison lives in the bb tests; here only bound sanity
  double total = 0;
  for (const DemandPair& w : inst.demands) total += static_cast<double>(w.demand);
  CHECK(relax.objective <= total + 1e-6);
  CHECK(relax.objective >= -1e-9);
}

TEST_CASE("a model made contradictory reports infeasible") {
  TransitInstance inst = generate_synthetic(1, SizeClass::tiny);
  BuiltModel built = build_ind(inst);
  // Force the old-line overlap beyond the slow edge budget.
  for (int i = 0; i < built.model.num_rows(); ++i) {
    if (built.model.row_tags[static_cast<std::size_t>(i)].family == RowFamily::design_16)
      built.model.rows[static_cast<std::size_t>(i)].rhs =
          static_cast<double>(inst.params.max_slow_edges + 3);
  }
  const LpOutcome r = solve_lp_relaxation(built.model);
  CHECK(r.status == LpStatus::infeasible);
  CHECK(check_farkas_ray(lp_from_milp(built.model), r.farkas, 1e-7));
}
