#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <set>
#include <vector>

#include "sropt/kernels.hpp"
#include "sropt/sr.hpp"

using namespace sropt;

TEST_CASE("td_update first self-transition") {
  SRMatrix sr = make_sr(3, 0.99, 1.0);
  td_update(sr, 1, 1);
  CHECK(sr.psi.at(1, 1) == doctest::Approx(1.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!(i == 1 && j == 1)) CHECK(sr.psi.at(i, j) == 0.0);
  CHECK(sr.update_count == 1);
}

TEST_CASE("td_update converges to the geometric series on one state") {
  SRMatrix sr = make_sr(1, 0.99, 0.5);
  for (int i = 0; i < 5000; ++i) td_update(sr, 0, 0);
  CHECK(sr.psi.at(0, 0) == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("td_update only touches the source row") {
  SRMatrix sr = make_sr(4, 0.9, 0.2);
  td_update(sr, 2, 3);
  for (int j = 0; j < 4; ++j) {
    CHECK(sr.psi.at(0, j) == 0.0);
    CHECK(sr.psi.at(1, j) == 0.0);
    CHECK(sr.psi.at(3, j) == 0.0);
  }
}

TEST_CASE("sr_oracle closed forms") {
  Mat p1(1, 1);
  p1.at(0, 0) = 1.0;
  const Mat o1 = sr_oracle(p1, 0.99);
  CHECK(o1.at(0, 0) == doctest::Approx(100.0));

  // Two-cell corridor under the uniform policy; hand 2x2 inverse.
  Mat p2(2, 2);
  p2.at(0, 0) = 0.8;
  p2.at(0, 1) = 0.2;
  p2.at(1, 0) = 0.2;
  p2.at(1, 1) = 0.8;
  const Mat o2 = sr_oracle(p2, 0.99);
  const double a = 1.0 - 0.99 * 0.8;  // diagonal of I - gamma P
  const double b = -0.99 * 0.2;       // off-diagonal
  const double det = a * a - b * b;
  CHECK(o2.at(0, 0) == doctest::Approx(a / det));
  CHECK(o2.at(0, 1) == doctest::Approx(-b / det));
  CHECK(o2.at(1, 0) == doctest::Approx(o2.at(0, 1)));
  CHECK(o2.at(0, 0) + o2.at(0, 1) == doctest::Approx(100.0));
  CHECK(o2.at(1, 0) + o2.at(1, 1) == doctest::Approx(100.0));

  // Psi (I - gamma P) = I.
  Mat m(2, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m.at(r, c) = (r == c ? 1.0 : 0.0) - 0.99 * p2.at(r, c);
  Mat prod;
  kernels::matmul(o2, m, prod);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      CHECK(prod.at(r, c) == doctest::Approx(r == c ? 1.0 : 0.0).epsilon(1e-9));
}

TEST_CASE("sr_oracle rejects bad input") {
  Mat p(2, 2);
  p.at(0, 0) = 0.5;  // rows do not sum to 1
  CHECK_THROWS_AS(sr_oracle(p, 0.99), std::invalid_argument);
  Mat ok(1, 1);
  ok.at(0, 0) = 1.0;
  CHECK_THROWS_AS(sr_oracle(ok, 1.0), std::invalid_argument);
}

TEST_CASE("learn_sr with zero budget returns the zero matrix") {
  const GridMap m = parse_map("..\n..");
  SRLearnConfig cfg;
  cfg.budget = 0;
  Rng rng(1);
  const SRMatrix sr = learn_sr(m, uniform_policy(4), cfg, rng);
  for (double v : sr.psi.a) CHECK(v == 0.0);
  CHECK(sr.update_count == 0);
}

TEST_CASE("learn_sr tracks the closed form on the two-cell corridor") {
  const GridMap m = parse_map("..");
  SRLearnConfig cfg;
  cfg.budget = 1000000;
  cfg.alpha = 0.1;
  cfg.alpha_decay_tau = 3000;
  Rng rng(7);
  const SRMatrix sr = learn_sr(m, uniform_policy(2), cfg, rng);
  const Mat oracle = sr_oracle(transition_matrix(m, uniform_policy(2)), cfg.gamma);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      CHECK(std::abs(sr.psi.at(r, c) - oracle.at(r, c)) < 0.5);
  CHECK(sr.update_count == cfg.budget);
}

TEST_CASE("learn_sr tracks the closed form on the open five-by-five grid") {
  const GridMap m = parse_map(".....\n.....\n.....\n.....\n.....");
  SRLearnConfig cfg;
  cfg.budget = 2000000;
  cfg.alpha = 0.1;
  cfg.alpha_decay_tau = 3000;
  Rng rng(3);
  const SRMatrix sr = learn_sr(m, uniform_policy(25), cfg, rng);
  const Mat oracle = sr_oracle(transition_matrix(m, uniform_policy(25)), cfg.gamma);
  double linf = 0.0;
  for (size_t i = 0; i < sr.psi.a.size(); ++i)
    linf = std::max(linf, std::abs(sr.psi.a[i] - oracle.a[i]));
  CHECK(linf < 1.0);
}

TEST_CASE("unvisited rows stay exactly zero") {
  // Fixed start, tiny budget, one-step episodes: only nearby rows move.
  const GridMap m = parse_map(".........");
  SRLearnConfig cfg;
  cfg.budget = 3;
  cfg.episode_len = 1;
  cfg.fixed_start = 0;
  Rng rng(5);
  const SRMatrix sr = learn_sr(m, uniform_policy(9), cfg, rng);
  const auto norms = l1_norms(sr);
  for (int s = 0; s < 9; ++s) {
    if (sr.row_updates[s] == 0)
      CHECK(norms[s] == 0.0);
    else
      CHECK(norms[s] > 0.0);
  }
  CHECK(sr.row_updates[0] == 3);  // every episode restarts at state 0
}

TEST_CASE("l1 norms sit between zero and the row-sum limit while learning") {
  const GridMap m = parse_map("...\n...\n...");
  SRLearnConfig cfg;
  cfg.budget = 4000;
  Rng rng(11);
  const SRMatrix sr = learn_sr(m, uniform_policy(9), cfg, rng);
  const auto norms = l1_norms(sr);
  bool some_partial = false;
  for (int s = 0; s < 9; ++s) {
    CHECK(norms[s] >= 0.0);
    CHECK(norms[s] <= 100.0 + 1e-9);
    if (norms[s] > 0.0 && norms[s] < 100.0) some_partial = true;
  }
  CHECK(some_partial);
}

TEST_CASE("nonzero coverage is nondecreasing in budget for a fixed seed") {
  const GridMap m = parse_map("....\n....\n....");
  std::set<int> prev;
  for (long long budget : {50, 200, 1000, 5000}) {
    SRLearnConfig cfg;
    cfg.budget = budget;
    Rng rng(21);
    const SRMatrix sr = learn_sr(m, uniform_policy(12), cfg, rng);
    const auto norms = l1_norms(sr);
    std::set<int> cur;
    for (int s = 0; s < 12; ++s)
      if (norms[s] > 0.0) cur.insert(s);
    for (int s : prev) CHECK(cur.count(s) == 1);
    prev = cur;
  }
}

TEST_CASE("row sums never exceed the single-update overshoot bound") {
  const GridMap m = parse_map("...\n...");
  SRLearnConfig cfg;
  cfg.budget = 60000;
  cfg.alpha = 0.5;
  cfg.alpha_decay_tau = 0;  // constant, worst case
  cfg.gamma = 0.9;
  Rng rng(2);
  const SRMatrix sr = learn_sr(m, uniform_policy(6), cfg, rng);
  const double bound = 1.0 / (1.0 - 0.9) + 0.5 * (1.0 + 0.9 / (1.0 - 0.9));
  for (double norm : l1_norms(sr)) CHECK(norm <= bound);
}

TEST_CASE("sr save/load round trip is exact") {
  const GridMap m = parse_map("..\n..");
  SRLearnConfig cfg;
  cfg.budget = 1000;
  Rng rng(9);
  const SRMatrix sr = learn_sr(m, uniform_policy(4), cfg, rng);
  const std::string path = "sr_roundtrip_test.bin";
  save_sr(sr, path);
  const SRMatrix back = load_sr(path);
  CHECK(back.size() == sr.size());
  CHECK(back.gamma == sr.gamma);
  CHECK(back.psi.a == sr.psi.a);
  std::remove(path.c_str());
}
