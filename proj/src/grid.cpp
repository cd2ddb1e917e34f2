#include "sropt/grid.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sropt {

GridMap parse_map(std::string_view text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw std::invalid_argument("parse_map: empty input");

  const size_t width = lines[0].size();
  if (width == 0) throw std::invalid_argument("parse_map: empty first row");
  for (const auto& line : lines)
    if (line.size() != width)
      throw std::invalid_argument("parse_map: non-rectangular input");

  GridMap map;
  map.width = static_cast<int>(width);
  map.height = static_cast<int>(lines.size());
  map.blocked.assign(static_cast<size_t>(map.width) * map.height, 0);
  map.state_at.assign(map.blocked.size(), -1);
  for (int r = 0; r < map.height; ++r) {
    for (int c = 0; c < map.width; ++c) {
      const char ch = lines[r][c];
      switch (ch) {
        case '#':
          map.blocked[map.cell(r, c)] = 1;
          break;
        case '.':
        case 'S':
        case 'G':
          map.state_at[map.cell(r, c)] = static_cast<int>(map.cell_of.size());
          map.cell_of.push_back(map.cell(r, c));
          break;
        default:
          throw std::invalid_argument(std::string("parse_map: unknown character '") + ch + "'");
      }
    }
  }
  if (map.cell_of.empty()) throw std::invalid_argument("parse_map: no unblocked cell");
  return map;
}

GridMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_map: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_map(ss.str());
}

int step(const GridMap& map, int s, Action a) {
  if (s < 0 || s >= map.num_states()) throw std::out_of_range("step: invalid state");
  auto [r, c] = map.coords(s);
  int nr = r, nc = c;
  switch (a) {
    case Action::NoOp: return s;
    case Action::Left: nc = c - 1; break;
    case Action::Right: nc = c + 1; break;
    case Action::Up: nr = r - 1; break;
    case Action::Down: nr = r + 1; break;
  }
  if (nr < 0 || nr >= map.height || nc < 0 || nc >= map.width) return s;
  if (map.is_blocked(nr, nc)) return s;
  return map.state_at[map.cell(nr, nc)];
}

Policy uniform_policy(int n_states) {
  ActionDist u;
  u.fill(1.0 / kNumActions);
  return Policy(n_states, u);
}

int sample_action(const ActionDist& dist, Rng& rng) {
  const double u = rng.uniform_real();
  double acc = 0.0;
  for (int a = 0; a < kNumActions; ++a) {
    acc += dist[a];
    if (u < acc) return a;
  }
  return kNumActions - 1;
}

Mat transition_matrix(const GridMap& map, const Policy& policy) {
  const int n = map.num_states();
  if (static_cast<int>(policy.size()) != n)
    throw std::invalid_argument("transition_matrix: policy size mismatch");
  for (const auto& dist : policy) {
    double sum = 0.0;
    for (double p : dist) {
      if (p < 0.0) throw std::invalid_argument("transition_matrix: negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("transition_matrix: row does not sum to 1");
  }
  Mat P(n, n);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < kNumActions; ++a)
      P.at(s, step(map, s, static_cast<Action>(a))) += policy[s][a];
  return P;
}

bool is_connected(const GridMap& map) {
  const int n = map.num_states();
  if (n == 0) return false;
  const auto dist = bfs_distances(map, 0);
  for (int s = 0; s < n; ++s)
    if (dist[s] < 0) return false;
  return true;
}

std::vector<int> bfs_distances(const GridMap& map, int src) {
  const int n = map.num_states();
  if (src < 0 || src >= n) throw std::out_of_range("bfs_distances: invalid state");
  std::vector<int> dist(n, -1);
  std::deque<int> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (int a = 1; a < kNumActions; ++a) {  // skip NoOp
      const int t = step(map, s, static_cast<Action>(a));
      if (t != s && dist[t] < 0) {
        dist[t] = dist[s] + 1;
        queue.push_back(t);
      }
    }
  }
  return dist;
}

void validate_task(const GridMap& map, const TaskSpec& task) {
  const int n = map.num_states();
  if (task.goal < 0 || task.goal >= n)
    throw std::invalid_argument("task: goal out of range");
  if (task.start >= n)
    throw std::invalid_argument("task: start out of range");
  if (!(task.gamma > 0.0 && task.gamma < 1.0))
    throw std::invalid_argument("task: gamma must lie in (0,1)");
  if (task.horizon < 0)
    throw std::invalid_argument("task: negative horizon");
}

}  // namespace sropt
