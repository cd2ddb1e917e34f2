#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sropt/mat.hpp"
#include "sropt/rng.hpp"

namespace sropt {

// Fixed action order; it is also the column order of every Q table.
enum class Action : int { NoOp = 0, Left = 1, Right = 2, Up = 3, Down = 4 };
inline constexpr int kNumActions = 5;

// Deterministic grid MDP. States are the unblocked cells, indexed row-major;
// immutable after parsing, safe to share across threads.
struct GridMap {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> blocked;  // height*width, row-major
  std::vector<int> state_at;     // cell -> state id, -1 if blocked
  std::vector<int> cell_of;      // state id -> cell

  int num_states() const { return static_cast<int>(cell_of.size()); }
  int cell(int r, int c) const { return r * width + c; }
  bool is_blocked(int r, int c) const { return blocked[cell(r, c)] != 0; }
  std::pair<int, int> coords(int s) const {
    const int cell = cell_of[s];
    return {cell / width, cell % width};
  }
};

// Accepts rectangular text over {'#', '.', 'S', 'G'}; 'S'/'G' are free cells.
// Throws std::invalid_argument on ragged input, unknown characters, or a map
// with no free cell.
GridMap parse_map(std::string_view text);
GridMap load_map(const std::string& path);

// Walls and map edges clamp: the agent stays put. NoOp always stays put.
int step(const GridMap& map, int s, Action a);

using ActionDist = std::array<double, kNumActions>;
using Policy = std::vector<ActionDist>;

Policy uniform_policy(int n_states);
int sample_action(const ActionDist& dist, Rng& rng);

// P[s][s'] = sum_a pi(a|s) [step(s,a)=s']. Throws if any row of the policy
// does not sum to 1 within 1e-9.
Mat transition_matrix(const GridMap& map, const Policy& policy);

bool is_connected(const GridMap& map);

// BFS shortest-path distances over the 4-neighbour state graph; -1 where
// unreachable.
std::vector<int> bfs_distances(const GridMap& map, int src);

struct TaskSpec {
  int start = -1;  // -1: uniform over unblocked cells
  int goal = 0;
  double goal_reward = 10.0;
  double step_reward = 0.0;
  double gamma = 0.99;
  long long horizon = 0;  // 0: unbounded
};

void validate_task(const GridMap& map, const TaskSpec& task);

// One SMDP-level outcome. For primitive actions steps_elapsed is 1 and
// reward is the single-step reward; for options steps_elapsed is the number
// of primitive steps taken and reward is the discounted sum accumulated
// along the option's trajectory.
struct Transition {
  int state = 0;
  int choice = 0;  // 0..4 primitives, 5+i option i
  int next_state = 0;
  double reward = 0.0;
  bool done = false;
  long long steps_elapsed = 1;
};

}  // namespace sropt
