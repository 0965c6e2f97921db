#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lowfit/emv.hpp"
#include "lowfit/oracle.hpp"
#include "lowfit/wemv.hpp"

using namespace lowfit;

namespace {

Matrix complete_weights(int n) {
  Matrix w(n, std::vector<double>(n, 1.0));
  for (int i = 0; i < n; ++i) w[i][i] = 0.0;
  return w;
}

// Symmetric circulant weights have equal row sums by construction.
Matrix circulant_weights(int n, Rng& rng) {
  std::vector<double> f(n, 0.0);
  for (int d = 1; d <= n / 2; ++d) {
    f[d] = rng.uniform(0.05, 1.0);
    f[n - d] = f[d];
  }
  Matrix w(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) w[i][j] = f[(j - i + n) % n];
  return w;
}

}  // namespace

TEST_CASE("check_regularity on the complete graph") {
  CHECK(check_regularity(complete_weights(5)) == doctest::Approx(4.0 / 5.0));
}

TEST_CASE("check_regularity flags a perturbed row") {
  Matrix w = complete_weights(4);
  w[2][0] = 0.5;
  w[0][2] = 0.5;
  CHECK_THROWS_WITH_AS(check_regularity(w), doctest::Contains("2"), Error);
}

TEST_CASE("check_regularity on the union of two triangles") {
  Matrix w(6, std::vector<double>(6, 0.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) {
        w[i][j] = 1.0;
        w[i + 3][j + 3] = 1.0;
      }
  CHECK(check_regularity(w) == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("conductance on K4") {
  Matrix w = complete_weights(4);
  CHECK(conductance(w, {0, 1}) == doctest::Approx(4.0 / 6.0));
  CHECK(conductance(w, {2}) == doctest::Approx(1.0));  // no self loops
  CHECK(multiway_conductance_bruteforce(w, 2) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("multiway conductance brute force matches the degree bound on K4") {
  Matrix w = complete_weights(4);
  double delta = check_regularity(w);
  double rho = multiway_conductance_bruteforce(w, 2);
  CHECK(rho >= 1.0 - 1.0 / (delta * 2) - 1e-9);
  CHECK(rho == doctest::Approx(2.0 / 3.0));
  CHECK(1.0 - 1.0 / (delta * 2) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("degree bound on random regular weighted graphs") {
  Rng rng(5);
  for (int trial = 0; trial < 24; ++trial) {
    int n = 5 + rng.uniform_int(3);
    Matrix w = circulant_weights(n, rng);
    double delta = check_regularity(w);
    for (int k : {2, 3}) {
      double rho = multiway_conductance_bruteforce(w, k);
      CHECK(rho >= 1.0 - 1.0 / (delta * k) - 1e-9);
    }
  }
}

TEST_CASE("brute force multiway rejects large graphs") {
  Matrix w = complete_weights(11);
  CHECK_THROWS_AS(multiway_conductance_bruteforce(w, 2), Error);
}

TEST_CASE("zero-distance weighted instance solves to zero") {
  int n = 4;
  Matrix d(n, std::vector<double>(n, 0.0));
  WeightedEmvInstance inst = load_wemv(d, complete_weights(n), 1);
  WemvParams p;
  p.degree = 3;
  p.strategy = SeedStrategy::sampled(1, 0);
  p.repeats = 3;
  p.rng_seed = 5;
  WemvResult res = solve_wemv(inst, p, false);
  CHECK(res.embedding.objective == doctest::Approx(0.0));
}

TEST_CASE("complete weights track the unweighted pipeline") {
  for (int trial = 0; trial < 3; ++trial) {
    Rng rng(900 + trial);
    EmvInstance base = gen_random_nonmetric(4, 2.0, rng);
    WeightedEmvInstance winst = load_wemv(base.d, complete_weights(4), 1);
    Grid g = build_uniform_grid(-3.0, 3.0, 1.0);

    WemvParams wp;
    wp.degree = 4;
    wp.strategy = SeedStrategy::sampled(1, 1);
    wp.repeats = 12;
    wp.rng_seed = 80 + trial;
    wp.grid_override = g;
    WemvResult wres = solve_wemv(winst, wp, false);

    EmvParams ep;
    ep.eps = 0.3;
    ep.degree = 3;
    ep.strategy = SeedStrategy::sampled(1, 0);
    ep.anchors = AnchorPolicy::all();
    ep.repeats = 12;
    ep.rng_seed = 80 + trial;
    ep.grid_override = g;
    EmvResult eres = solve_emv(winst.base, ep);

    double w_of_w = weighted_objective(winst, wres.embedding.points);
    double w_of_e = weighted_objective(winst, eres.embedding.points);
    CHECK(std::abs(w_of_w - w_of_e) <= 0.1 * winst.base.mean_sq + 1e-9);
  }
}

TEST_CASE("two disjoint cliques embed with small weighted error") {
  Rng rng(44);
  WeightedEmvInstance inst = gen_shifted_clusters(6, 2, rng);
  // Cross pairs carry zero weight, so a per-clique layout is consistent and
  // the weighted discrete optimum on a covering lattice is zero.
  Grid g = build_uniform_grid(-3.0, 3.0, 1.0);
  DiscreteOpt opt = brute_force_wemv(inst, g);
  CHECK(opt.value <= 1e-12);

  WemvParams p;
  p.degree = 4;
  p.strategy = SeedStrategy::sampled(1, 1);
  p.repeats = 20;
  p.rng_seed = 3;
  p.grid_override = g;
  WemvResult res = solve_wemv(inst, p, false);
  CHECK(res.embedding.objective <= 0.3 * inst.weighted_mean_sq + 1e-9);
}

TEST_CASE("psd cuts never weaken the relaxation and stay sound") {
  Rng rng(7);
  EmvInstance base = gen_random_nonmetric(4, 2.0, rng);
  WeightedEmvInstance winst = load_wemv(base.d, complete_weights(4), 1);
  Grid g = build_uniform_grid(-2.0, 2.0, 1.0);
  WemvParams p;
  p.degree = 3;
  p.strategy = SeedStrategy::sampled(1, 0);
  p.repeats = 4;
  p.rng_seed = 12;
  p.grid_override = g;
  WemvResult plain = solve_wemv(winst, p, false);
  WemvResult cut = solve_wemv(winst, p, true);
  CHECK(cut.lp_value >= plain.lp_value - 1e-9);
  DiscreteOpt opt = brute_force_wemv(winst, g);
  CHECK(cut.lp_value <= opt.value + 1e-7);
}

TEST_CASE("wemv default grid honors the cap") {
  Rng rng(31);
  EmvInstance base = gen_random_nonmetric(4, 2.0, rng);
  WeightedEmvInstance winst = load_wemv(base.d, complete_weights(4), 1);
  WemvParams p;
  p.degree = 3;
  p.strategy = SeedStrategy::sampled(1, 0);
  p.repeats = 2;
  p.grid_cap = 9;
  p.rng_seed = 2;
  WemvResult res = solve_wemv(winst, p, false);
  CHECK(res.grid.size() <= 10);
  CHECK(res.embedding.objective >= 0.0);
}
