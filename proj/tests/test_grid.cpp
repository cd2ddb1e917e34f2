#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "sropt/grid.hpp"
#include "sropt/rng.hpp"

using namespace sropt;

namespace {
const char* kMapDir = SROPT_SOURCE_DIR "/maps";
}

TEST_CASE("parse_map basic shapes") {
  const GridMap open2 = parse_map("..\n..\n");
  CHECK(open2.width == 2);
  CHECK(open2.height == 2);
  CHECK(open2.num_states() == 4);

  const GridMap diag = parse_map("#.\n.#");
  CHECK(diag.num_states() == 2);

  const GridMap marked = parse_map("S.\n.G");
  CHECK(marked.num_states() == 4);  // S and G are plain free cells
}

TEST_CASE("parse_map rejects bad input") {
  CHECK_THROWS_AS(parse_map("..\n..."), std::invalid_argument);
  CHECK_THROWS_AS(parse_map(".x\n.."), std::invalid_argument);
  CHECK_THROWS_AS(parse_map("##\n##"), std::invalid_argument);
  CHECK_THROWS_AS(parse_map(""), std::invalid_argument);
}

TEST_CASE("step clamps at walls and edges") {
  const GridMap m = parse_map("...\n...\n...");
  const int center = m.state_at[m.cell(1, 1)];
  const int corner = m.state_at[m.cell(0, 0)];
  CHECK(step(m, corner, Action::Left) == corner);
  CHECK(step(m, corner, Action::Up) == corner);
  CHECK(step(m, center, Action::NoOp) == center);
  CHECK(step(m, center, Action::Up) == m.state_at[m.cell(0, 1)]);
  CHECK(step(m, center, Action::Down) == m.state_at[m.cell(2, 1)]);
  CHECK(step(m, center, Action::Left) == m.state_at[m.cell(1, 0)]);
  CHECK(step(m, center, Action::Right) == m.state_at[m.cell(1, 2)]);
  CHECK_THROWS_AS(step(m, 99, Action::NoOp), std::out_of_range);

  // Pure function: same inputs, same outputs.
  for (int s = 0; s < m.num_states(); ++s)
    for (int a = 0; a < kNumActions; ++a)
      CHECK(step(m, s, static_cast<Action>(a)) == step(m, s, static_cast<Action>(a)));
}

TEST_CASE("transition_matrix on tiny maps") {
  const GridMap one = parse_map(".");
  const Mat p1 = transition_matrix(one, uniform_policy(1));
  CHECK(p1.at(0, 0) == doctest::Approx(1.0));

  const GridMap two = parse_map("..");
  const Mat p2 = transition_matrix(two, uniform_policy(2));
  CHECK(p2.at(0, 0) == doctest::Approx(0.8));
  CHECK(p2.at(0, 1) == doctest::Approx(0.2));
  CHECK(p2.at(1, 0) == doctest::Approx(0.2));
  CHECK(p2.at(1, 1) == doctest::Approx(0.8));
}

TEST_CASE("transition_matrix rejects malformed policies") {
  const GridMap two = parse_map("..");
  Policy bad = uniform_policy(2);
  bad[0][0] = 0.5;
  CHECK_THROWS_AS(transition_matrix(two, bad), std::invalid_argument);
  CHECK_THROWS_AS(transition_matrix(two, uniform_policy(3)), std::invalid_argument);
}

TEST_CASE("transition rows sum to one on every shipped map") {
  for (const char* name : {"grid1.txt", "grid2.txt", "grid3.txt", "grid4.txt"}) {
    const GridMap m = load_map(std::string(kMapDir) + "/" + name);
    const Mat p = transition_matrix(m, uniform_policy(m.num_states()));
    for (int s = 0; s < m.num_states(); ++s) {
      double sum = 0.0;
      for (int t = 0; t < m.num_states(); ++t) sum += p.at(s, t);
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("shipped maps are connected and multi-room sized") {
  int expected_states[] = {104, 157, 336, 409};
  int i = 0;
  for (const char* name : {"grid1.txt", "grid2.txt", "grid3.txt", "grid4.txt"}) {
    const GridMap m = load_map(std::string(kMapDir) + "/" + name);
    CHECK(is_connected(m));
    CHECK(m.num_states() == expected_states[i]);
    ++i;
  }
}

TEST_CASE("sampled transitions match the transition matrix") {
  const GridMap m = parse_map("...\n.#.\n...");
  const Policy pol = uniform_policy(m.num_states());
  const Mat p = transition_matrix(m, pol);
  const int n = m.num_states();
  const int samples = 100000;
  Rng root(123);
  for (int s = 0; s < n; ++s) {
    std::vector<int> counts(n, 0);
    Rng rng = root.child("mc", s);
    for (int i = 0; i < samples; ++i)
      ++counts[step(m, s, static_cast<Action>(sample_action(pol[s], rng)))];
    for (int t = 0; t < n; ++t)
      CHECK(std::abs(static_cast<double>(counts[t]) / samples - p.at(s, t)) < 0.02);
  }
}

TEST_CASE("bfs distances on the four-room map") {
  const GridMap m = load_map(std::string(kMapDir) + "/grid1.txt");
  const auto d = bfs_distances(m, 0);
  for (int s = 0; s < m.num_states(); ++s) CHECK(d[s] >= 0);
  CHECK(d[0] == 0);
  // State 0 is the top-left free cell (1,1); its right neighbour is one step.
  CHECK(d[m.state_at[m.cell(1, 2)]] == 1);
}

TEST_CASE("task validation") {
  const GridMap m = parse_map("..");
  TaskSpec t;
  t.goal = 5;
  CHECK_THROWS_AS(validate_task(m, t), std::invalid_argument);
  t.goal = 1;
  t.gamma = 1.0;
  CHECK_THROWS_AS(validate_task(m, t), std::invalid_argument);
  t.gamma = 0.99;
  CHECK_NOTHROW(validate_task(m, t));
}
