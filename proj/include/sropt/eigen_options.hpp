#pragma once

#include <vector>

#include "sropt/grid.hpp"
#include "sropt/kernels.hpp"
#include "sropt/mat.hpp"
#include "sropt/option.hpp"
#include "sropt/rng.hpp"

namespace sropt {

// Combinatorial Laplacian L = D - W of the undirected state adjacency graph
// (edge iff a primitive move connects two distinct states). Throws on a
// disconnected map.
Mat build_laplacian(const GridMap& map);

struct LaplacianSpectrum {
  std::vector<double> eigenvalues;  // ascending
  Mat eigenvectors;                 // row i pairs with eigenvalues[i]
};

LaplacianSpectrum laplacian_spectrum(const GridMap& map);

// Options trained on eigenvector-difference rewards: for each non-constant
// eigenvector in ascending eigenvalue order, one option per sign, until m
// options exist. Same termination rule (V <= 0) as sub-goal options.
std::vector<Option> train_eigen_options(const GridMap& map, const LaplacianSpectrum& spectrum,
                                        int m, const OptionQParams& params, const Rng& rng_base);

}  // namespace sropt
