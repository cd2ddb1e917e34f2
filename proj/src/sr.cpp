#include "sropt/sr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include "sropt/kernels.hpp"

namespace sropt {

SRMatrix make_sr(int n, double gamma, double alpha, double alpha_decay_tau) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("sr: gamma must lie in (0,1)");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("sr: alpha must lie in (0,1]");
  SRMatrix sr;
  sr.psi = Mat(n, n);
  sr.gamma = gamma;
  sr.alpha = alpha;
  sr.alpha_decay_tau = alpha_decay_tau;
  sr.row_updates.assign(n, 0);
  return sr;
}

void td_update(SRMatrix& sr, int s, int s_next) {
  const int n = sr.size();
  if (s < 0 || s >= n || s_next < 0 || s_next >= n)
    throw std::out_of_range("td_update: invalid state");
  const double a = sr.effective_alpha(s);
  const double g = sr.gamma;
  double* row = sr.psi.row(s);
  const double* next = sr.psi.row(s_next);
  for (int i = 0; i < n; ++i) row[i] += a * (g * next[i] - row[i]);
  row[s] += a;  // the onehot(s) term
  ++sr.row_updates[s];
  ++sr.update_count;
}

SRMatrix learn_sr(const GridMap& map, const Policy& policy, const SRLearnConfig& cfg, Rng& rng) {
  if (cfg.budget < 0) throw std::invalid_argument("learn_sr: negative budget");
  const int n = map.num_states();
  SRMatrix sr = make_sr(n, cfg.gamma, cfg.alpha, cfg.alpha_decay_tau);
  if (cfg.budget == 0) return sr;
  long long ep_len = cfg.horizon > 0 ? cfg.horizon : cfg.episode_len;
  if (ep_len <= 0) ep_len = 10LL * std::max(map.width, map.height);

  long long remaining = cfg.budget;
  while (remaining > 0) {
    int s = cfg.fixed_start >= 0 ? cfg.fixed_start
                                 : static_cast<int>(rng.uniform_int(n));
    for (long long t = 0; t < ep_len && remaining > 0; ++t) {
      const int a = sample_action(policy[s], rng);
      const int s2 = step(map, s, static_cast<Action>(a));
      td_update(sr, s, s2);
      --remaining;
      s = s2;
    }
  }
  return sr;
}

Mat sr_oracle(const Mat& P, double gamma) {
  if (P.rows != P.cols) throw std::invalid_argument("sr_oracle: P not square");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("sr_oracle: gamma must lie in (0,1)");
  for (int r = 0; r < P.rows; ++r) {
    double sum = 0.0;
    for (int c = 0; c < P.cols; ++c) sum += P.at(r, c);
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("sr_oracle: P not row-stochastic");
  }
  Mat M(P.rows, P.cols);
  for (int r = 0; r < P.rows; ++r)
    for (int c = 0; c < P.cols; ++c)
      M.at(r, c) = (r == c ? 1.0 : 0.0) - gamma * P.at(r, c);
  return kernels::inverse(std::move(M));
}

std::vector<double> l1_norms(const SRMatrix& sr) {
  std::vector<double> out;
  kernels::row_l1(sr.psi, out);
  return out;
}

namespace {
constexpr uint32_t kSrMagic = 0x53524d31;  // "SRM1"
}

void save_sr(const SRMatrix& sr, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_sr: cannot open " + path);
  const uint32_t magic = kSrMagic;
  const uint64_t n = static_cast<uint64_t>(sr.size());
  out.write(reinterpret_cast<const char*>(&magic), sizeof magic);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&sr.gamma), sizeof sr.gamma);
  out.write(reinterpret_cast<const char*>(sr.psi.a.data()),
            static_cast<std::streamsize>(sr.psi.a.size() * sizeof(double)));
  if (!out) throw std::runtime_error("save_sr: write failed for " + path);
}

SRMatrix load_sr(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_sr: cannot open " + path);
  uint32_t magic = 0;
  uint64_t n = 0;
  double gamma = 0.0;
  in.read(reinterpret_cast<char*>(&magic), sizeof magic);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&gamma), sizeof gamma);
  if (!in || magic != kSrMagic) throw std::runtime_error("load_sr: bad header in " + path);
  SRMatrix sr = make_sr(static_cast<int>(n), gamma);
  in.read(reinterpret_cast<char*>(sr.psi.a.data()),
          static_cast<std::streamsize>(sr.psi.a.size() * sizeof(double)));
  if (!in) throw std::runtime_error("load_sr: truncated file " + path);
  return sr;
}

}  // namespace sropt
