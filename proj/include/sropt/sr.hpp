#pragma once

#include <string>
#include <vector>

#include "sropt/grid.hpp"
#include "sropt/mat.hpp"
#include "sropt/rng.hpp"

namespace sropt {

// Successor representation estimate under a fixed behaviour policy.
// psi[s][s'] is the expected discounted future occupancy of s' from s.
// Rows of never-visited states stay exactly zero.
struct SRMatrix {
  Mat psi;
  double gamma = 0.99;
  double alpha = 0.1;            // base learning rate
  double alpha_decay_tau = 0.0;  // 0: constant alpha; else alpha*tau/(tau+visits)
  long long update_count = 0;
  std::vector<long long> row_updates;

  int size() const { return psi.rows; }
  double effective_alpha(int s) const {
    if (alpha_decay_tau <= 0.0) return alpha;
    return alpha * alpha_decay_tau / (alpha_decay_tau + static_cast<double>(row_updates[s]));
  }
};

SRMatrix make_sr(int n, double gamma, double alpha = 0.1, double alpha_decay_tau = 0.0);

// psi[s] += alpha * (onehot(s) + gamma*psi[s_next] - psi[s]); touches row s only.
void td_update(SRMatrix& sr, int s, int s_next);

struct SRLearnConfig {
  double gamma = 0.99;
  double alpha = 0.1;
  double alpha_decay_tau = 3000.0;
  long long budget = 0;   // number of TD updates (primitive transitions)
  int episode_len = 0;    // 0: 10*max(width,height)
  int fixed_start = -1;   // -1: uniform random restarts
  long long horizon = 0;  // >0 overrides episode_len (finite-horizon mode)
};

// Runs episodes under `policy`, applying td_update to every primitive
// transition until `budget` updates have been made.
SRMatrix learn_sr(const GridMap& map, const Policy& policy, const SRLearnConfig& cfg, Rng& rng);

// Closed-form SR of a row-stochastic P: (I - gamma*P)^-1.
Mat sr_oracle(const Mat& P, double gamma);

// Row sums of |psi|; equals plain row sums for SR matrices learnt from zero.
std::vector<double> l1_norms(const SRMatrix& sr);

void save_sr(const SRMatrix& sr, const std::string& path);
SRMatrix load_sr(const std::string& path);

}  // namespace sropt
