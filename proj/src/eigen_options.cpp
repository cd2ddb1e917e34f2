#include "sropt/eigen_options.hpp"

#include <stdexcept>

namespace sropt {

Mat build_laplacian(const GridMap& map) {
  if (!is_connected(map)) throw std::invalid_argument("build_laplacian: map not connected");
  const int n = map.num_states();
  Mat L(n, n);
  for (int s = 0; s < n; ++s) {
    for (int a = 1; a < kNumActions; ++a) {  // NoOp never makes an edge
      const int t = step(map, s, static_cast<Action>(a));
      if (t == s) continue;
      L.at(s, t) = -1.0;
    }
  }
  for (int s = 0; s < n; ++s) {
    double degree = 0.0;
    for (int t = 0; t < n; ++t)
      if (t != s && L.at(s, t) != 0.0) degree += 1.0;
    L.at(s, s) = degree;
  }
  return L;
}

LaplacianSpectrum laplacian_spectrum(const GridMap& map) {
  const Mat L = build_laplacian(map);
  auto eig = kernels::sym_eigen(L);
  LaplacianSpectrum spec;
  spec.eigenvalues = std::move(eig.values);
  spec.eigenvectors = std::move(eig.vectors);
  return spec;
}

std::vector<Option> train_eigen_options(const GridMap& map, const LaplacianSpectrum& spectrum,
                                        int m, const OptionQParams& params, const Rng& rng_base) {
  const int n = map.num_states();
  if (m < 0) throw std::invalid_argument("train_eigen_options: negative count");
  if (m > 2 * (n - 1))
    throw std::invalid_argument("train_eigen_options: not enough non-constant eigenvectors");
  std::vector<Option> options(m);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < m; ++i) {
    // Eigenvector 0 is the constant vector; start at index 1, both signs.
    const int vec_index = 1 + i / 2;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    PseudoReward pr;
    pr.row.resize(n);
    const double* v = spectrum.eigenvectors.row(vec_index);
    for (int s = 0; s < n; ++s) pr.row[s] = sign * v[s];
    int peak = 0;
    for (int s = 1; s < n; ++s)
      if (pr.row[s] > pr.row[peak]) peak = s;
    Rng rng = rng_base.child("eigen-option", static_cast<uint64_t>(i));
    options[i] = train_option(map, pr, peak, params, rng);
    options[i].id = i;
  }
  return options;
}

}  // namespace sropt
