#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "lowfit/emv.hpp"
#include "lowfit/oracle.hpp"

using namespace lowfit;

namespace {

EmvParams desk_params(std::uint64_t seed) {
  EmvParams p;
  p.eps = 0.3;
  p.degree = 3;
  p.strategy = SeedStrategy::sampled(1, 0);
  p.anchors = AnchorPolicy::all();
  p.repeats = 8;
  p.rng_seed = seed;
  return p;
}

}  // namespace

TEST_CASE("two points, unit distance: exact recovery on an on-grid alphabet") {
  EmvInstance inst = load_emv({{0, 1}, {1, 0}}, 1);
  EmvParams p = desk_params(7);
  p.grid_override = build_uniform_grid(-1.0, 1.0, 1.0);
  EmvResult res = solve_emv(inst, p);
  CHECK(res.embedding.objective == doctest::Approx(0.0));
}

TEST_CASE("two points with the geometric paper grid") {
  EmvInstance inst = load_emv({{0, 1}, {1, 0}}, 1);
  EmvParams p = desk_params(11);
  p.eps = 0.3;
  p.repeats = 6;
  EmvResult res = solve_emv(inst, p);  // grid built from eps/delta/mean_sq
  CHECK(res.embedding.objective <= 0.3 * inst.mean_sq + 1e-9);
}

TEST_CASE("all-zero distances collapse to a single point") {
  EmvInstance inst = load_emv({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}, 1);
  EmvParams p = desk_params(3);
  EmvResult res = solve_emv(inst, p);
  CHECK(res.embedding.objective == doctest::Approx(0.0));
  for (const auto& pt : res.embedding.points) CHECK(pt[0] == 0.0);
}

TEST_CASE("planted noiseless instances round to zero") {
  int hits = 0;
  for (int trial = 0; trial < 5; ++trial) {
    Rng rng(60 + trial);
    PlantedEmv pl = gen_planted(5, 1, 0.0, rng);
    // Anchor at the planted point closest to the centroid; alphabet holds
    // the anchored planted coordinates.
    int best_a = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 5; ++a) {
      double c = 0;
      for (int i = 0; i < 5; ++i) c += sq_dist(pl.planted[i], pl.planted[a]);
      if (c < best_cost) {
        best_cost = c;
        best_a = a;
      }
    }
    std::vector<double> vals;
    for (const auto& pt : pl.planted) vals.push_back(pt[0] - pl.planted[best_a][0]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    Grid g;
    g.kind = Grid::Kind::Uniform;
    g.values = vals;
    g.epsilon = 1.0;
    EmvParams p = desk_params(500 + trial);
    p.grid_override = g;
    p.anchors = AnchorPolicy::fixed_list({best_a});
    p.repeats = 12;
    EmvResult res = solve_emv(pl.inst, p);
    if (res.embedding.objective == 0.0) ++hits;
  }
  CHECK(hits >= 4);
}

TEST_CASE("lp lower bound: planted anchored instances reach zero") {
  Rng rng(21);
  PlantedEmv pl = gen_planted(4, 1, 0.0, rng);
  int a = 0;
  std::vector<double> vals;
  for (const auto& pt : pl.planted) vals.push_back(pt[0] - pl.planted[a][0]);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  Grid g;
  g.kind = Grid::Kind::Uniform;
  g.values = vals;
  g.epsilon = 1.0;
  EmvParams p = desk_params(1);
  p.grid_override = g;
  p.degree = 2;
  CHECK(lp_lower_bound(pl.inst, a, p) <= 1e-8);
}

TEST_CASE("lower bound is monotone in the degree") {
  for (int trial = 0; trial < 4; ++trial) {
    Rng rng(300 + trial);
    EmvInstance inst = gen_random_nonmetric(4, 2.0, rng);
    Grid g = build_uniform_grid(-2.0, 2.0, 1.0);
    EmvParams p2 = desk_params(1);
    p2.grid_override = g;
    p2.degree = 2;
    EmvParams p3 = p2;
    p3.degree = 3;
    double b2 = lp_lower_bound(inst, 0, p2);
    double b3 = lp_lower_bound(inst, 0, p3);
    CHECK(b3 >= b2 - 1e-8);
  }
}

TEST_CASE("min-anchor lower bound stays below the discrete optimum") {
  for (int trial = 0; trial < 8; ++trial) {
    Rng rng(400 + trial);
    EmvInstance inst = gen_random_nonmetric(4, 2.0, rng);
    Grid g = build_uniform_grid(-3.0, 3.0, 1.0);
    DiscreteOpt opt = brute_force_emv(inst, g);
    EmvParams p = desk_params(1);
    p.grid_override = g;
    p.degree = 2;
    double min_lp = std::numeric_limits<double>::infinity();
    for (int a = 0; a < inst.n; ++a) min_lp = std::min(min_lp, lp_lower_bound(inst, a, p));
    CHECK(min_lp <= opt.value + 1e-7);
  }
}

TEST_CASE("soundness sandwich on full runs") {
  for (int trial = 0; trial < 5; ++trial) {
    Rng rng(700 + trial);
    EmvInstance inst = gen_random_nonmetric(4, 2.0, rng);
    EmvParams p = desk_params(50 + trial);
    p.grid_override = build_uniform_grid(-3.0, 3.0, 1.0);
    EmvResult res = solve_emv(inst, p);
    CHECK(res.embedding.objective >= 0.0);
    CHECK(res.min_anchor_lp - 1e-7 <= res.embedding.objective);
    // Provenance and reports are populated.
    CHECK(!res.embedding.provenance.empty());
    CHECK(!res.reports.empty());
    for (const auto& rep : res.reports) CHECK(rep.objective >= 0.0);
  }
}

TEST_CASE("translation invariance of the objective") {
  Rng rng(13);
  EmvInstance inst = gen_random_nonmetric(5, 3.0, rng);
  std::vector<Vec> x(5, Vec(1));
  for (auto& pt : x) pt[0] = rng.uniform(-2.0, 2.0);
  double before = emv_objective(inst, x);
  for (auto& pt : x) pt[0] += 17.25;
  CHECK(emv_objective(inst, x) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("some anchor satisfies the ball for any decent embedding") {
  // For embeddings with objective <= 2 * mean_sq there is an anchor whose
  // centered second moment is at most 6 * mean_sq.
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    EmvInstance inst = gen_random_nonmetric(5, 2.0, rng);
    Grid g = build_uniform_grid(-3.0, 3.0, 1.0);
    DiscreteOpt opt = brute_force_emv(inst, g);
    REQUIRE(opt.value <= 2 * inst.mean_sq);  // zero embedding already achieves mean_sq
    bool some_anchor = false;
    for (int a = 0; a < inst.n && !some_anchor; ++a) {
      double second = 0;
      for (int i = 0; i < inst.n; ++i) second += sq_dist(opt.argmin[i], opt.argmin[a]);
      second /= inst.n;
      some_anchor = second <= 6 * inst.mean_sq;
    }
    CHECK(some_anchor);
  }
}

TEST_CASE("degenerate strategies are rejected") {
  EmvInstance inst = load_emv({{0, 1}, {1, 0}}, 1);
  EmvParams p = desk_params(1);
  p.degree = 2;  // too small for seed size 1
  CHECK_THROWS_WITH_AS(solve_emv(inst, p), doctest::Contains("DegreeTooLow"), Error);
  EmvParams q = desk_params(1);
  q.eps = 1.5;
  CHECK_THROWS_AS(solve_emv(inst, q), Error);
}
