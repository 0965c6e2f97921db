#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "lowfit/emv.hpp"
#include "lowfit/oracle.hpp"

using namespace lowfit;

namespace {

// Second enumeration with a different loop order (value-major instead of
// variable-major recursion) and no pruning.
double second_brute_force_emv(const EmvInstance& inst, const Grid& grid) {
  int q = grid.size();
  std::vector<int> a(inst.n, 0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<Vec> pts(inst.n);
    for (int i = 0; i < inst.n; ++i) pts[i] = {grid.values[a[i]]};
    best = std::min(best, emv_objective(inst, pts));
    int pos = 0;  // increment from the front this time
    while (pos < inst.n && ++a[pos] == q) a[pos++] = 0;
    if (pos == inst.n) break;
  }
  return best;
}

}  // namespace

TEST_CASE("brute force on the two-point instance") {
  EmvInstance inst = load_emv({{0, 1}, {1, 0}}, 1);
  Grid g = build_uniform_grid(0.0, 1.0, 1.0);
  DiscreteOpt opt = brute_force_emv(inst, g);
  CHECK(opt.value == doctest::Approx(0.0));
  CHECK(std::abs(opt.argmin[0][0] - opt.argmin[1][0]) == doctest::Approx(1.0));
}

TEST_CASE("brute force on all-zero distances") {
  EmvInstance inst = load_emv({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}, 1);
  Grid g = build_uniform_grid(-1.0, 1.0, 1.0);
  DiscreteOpt opt = brute_force_emv(inst, g);
  CHECK(opt.value == doctest::Approx(0.0));
  CHECK(opt.argmin[0] == opt.argmin[1]);
  CHECK(opt.argmin[1] == opt.argmin[2]);
}

TEST_CASE("brute force agrees with an independently coded enumeration") {
  for (int trial = 0; trial < 6; ++trial) {
    Rng rng(100 + trial);
    EmvInstance inst = gen_random_nonmetric(4, 2.0, rng);
    Grid g = build_uniform_grid(-2.0, 2.0, 1.0);
    DiscreteOpt opt = brute_force_emv(inst, g);
    CHECK(opt.value == doctest::Approx(second_brute_force_emv(inst, g)).epsilon(1e-12));
  }
}

TEST_CASE("brute force respects the state budget") {
  Rng rng(1);
  EmvInstance inst = gen_random_nonmetric(5, 2.0, rng);
  Grid g = build_uniform_grid(-3.0, 3.0, 0.5);
  CHECK_THROWS_WITH_AS(brute_force_emv(inst, g, 1000), doctest::Contains("TooLarge"), Error);
}

TEST_CASE("oracle result is independent of label order") {
  Rng rng(7);
  EmvInstance inst = gen_random_nonmetric(4, 2.0, rng);
  Grid g = build_uniform_grid(-2.0, 2.0, 1.0);
  double base = brute_force_emv(inst, g).value;
  // Permute the variable labels; the optimum value must not move.
  std::vector<int> perm = {2, 0, 3, 1};
  Matrix d2(4, std::vector<double>(4, 0.0));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d2[perm[i]][perm[j]] = inst.d[i][j];
  EmvInstance inst2 = load_emv(d2, 1);
  CHECK(brute_force_emv(inst2, g).value == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("weighted brute force reduces to unweighted on the complete graph") {
  Rng rng(3);
  int n = 4;
  Matrix d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = rng.uniform(1.0, 2.0);
  Matrix w(n, std::vector<double>(n, 1.0));
  for (int i = 0; i < n; ++i) w[i][i] = 0.0;
  WeightedEmvInstance winst = load_wemv(d, w, 1);
  Grid g = build_uniform_grid(-2.0, 2.0, 1.0);
  DiscreteOpt wopt = brute_force_wemv(winst, g);
  DiscreteOpt uopt = brute_force_emv(winst.base, g);
  // E_{ij~[n]} counts the diagonal, E_{ij~w} does not.
  CHECK(wopt.value == doctest::Approx(uopt.value * n * n / (n * n - n)).epsilon(1e-12));
}

TEST_CASE("lra brute force: exact rank-one instances have zero optimum") {
  Vec u = {1.0, -1.0, 0.5}, v = {0.5, 1.0, -0.5};
  Matrix a(3, std::vector<double>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = u[i] * v[j];
  LraInstance inst = load_lra(a, 4);
  Grid sigma = build_uniform_grid(-1.0, 1.0, 0.5);
  DiscreteOpt opt = brute_force_lra(inst, sigma);
  CHECK(opt.value == doctest::Approx(0.0));
}

TEST_CASE("filtered lra brute force dominates the unfiltered optimum") {
  Rng rng(17);
  Matrix a(2, std::vector<double>(2));
  for (auto& row : a)
    for (double& x : row) x = rng.uniform(-1.0, 1.0);
  LraInstance inst = load_lra(a, 4);
  Grid sigma = build_uniform_grid(-1.0, 1.0, 0.5);
  DiscreteOpt full = brute_force_lra(inst, sigma);
  // Norms of the unfiltered argmin.
  double su = 0, sv = 0;
  for (int i = 0; i < 2; ++i) su += std::pow(full.argmin[i][0], 4);
  for (int j = 0; j < 2; ++j) sv += std::pow(full.argmin[2 + j][0], 4);
  DiscreteOpt same = filtered_brute_force_lra(inst, sigma, su, sv);
  CHECK(same.value == doctest::Approx(full.value).epsilon(1e-12));
  // A random cell can only be worse.
  DiscreteOpt other = filtered_brute_force_lra(inst, sigma, su + 0.5, sv);
  CHECK(other.value >= full.value - 1e-12);
}

TEST_CASE("local search: two points always fit exactly") {
  for (int trial = 0; trial < 5; ++trial) {
    Rng rng(40 + trial);
    EmvInstance inst = gen_random_nonmetric(2, 3.0, rng);
    Embedding e = local_search_emv(inst, 2, rng);
    CHECK(e.objective <= 1e-12);
  }
}

TEST_CASE("local search solves noiseless planted instances") {
  for (int trial = 0; trial < 5; ++trial) {
    Rng rng(50 + trial);
    PlantedEmv pl = gen_planted(5, 1, 0.0, rng);
    Embedding e = local_search_emv(pl.inst, 6, rng);
    CHECK(e.objective <= 1e-6 * std::max(pl.inst.mean_sq, 1e-12));
  }
}

TEST_CASE("local search never beats zero and never exceeds the origin value") {
  Rng rng(66);
  EmvInstance inst = gen_random_nonmetric(5, 2.0, rng);
  Embedding e = local_search_emv(inst, 3, rng);
  CHECK(e.objective >= 0.0);
  CHECK(e.objective <= inst.mean_sq + 1e-12);  // restart 0 starts at the origin
}

TEST_CASE("planted instances have zero discrete optimum on their value grid") {
  Rng rng(9);
  PlantedEmv pl = gen_planted(5, 1, 0.0, rng);
  std::vector<double> vals = {0.0};
  for (const auto& p : pl.planted) vals.push_back(p[0]);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  Grid g;
  g.kind = Grid::Kind::Uniform;
  g.values = vals;
  g.epsilon = 1.0;
  CHECK(brute_force_emv(pl.inst, g).value == doctest::Approx(0.0));
}

TEST_CASE("anchored relaxation lower-bounds the anchored discrete optimum") {
  for (int trial = 0; trial < 10; ++trial) {
    Rng rng(800 + trial);
    EmvInstance inst = gen_random_nonmetric(4, 2.0, rng);
    Grid g = build_uniform_grid(-2.0, 2.0, 1.0);
    DiscreteOpt opt = brute_force_emv(inst, g);
    EmvParams params;
    params.degree = 2;
    params.grid_override = g;
    double min_lp = std::numeric_limits<double>::infinity();
    for (int a = 0; a < inst.n; ++a) min_lp = std::min(min_lp, lp_lower_bound(inst, a, params));
    CHECK(min_lp <= opt.value + 1e-7);
  }
}
