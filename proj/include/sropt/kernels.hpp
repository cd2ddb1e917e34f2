#pragma once

#include <vector>

#include "sropt/mat.hpp"

// Data-parallel kernels used by the library. The default implementations are
// OpenMP-parallel; kernels::serial holds plain single-threaded versions kept
// as the reference for tests and for the bench_kernels comparison.
//
// Every parallel loop writes disjoint outputs and keeps a fixed per-output
// summation order, so results are identical for any thread count.

namespace sropt::kernels {

void matmul(const Mat& A, const Mat& B, Mat& out);

// Gauss-Jordan inverse with partial pivoting. Throws std::runtime_error if a
// pivot falls below tolerance.
Mat inverse(Mat A);

struct SymEigen {
  std::vector<double> values;  // ascending
  Mat vectors;                 // row i pairs with values[i]; rows orthonormal
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Rotations are
// applied in a fixed order, so this kernel is serial by construction; it is
// reported standalone by bench_kernels.
SymEigen sym_eigen(Mat A, double tol = 1e-12, int max_sweeps = 64);

// Nearest centroid per point (squared Euclidean, ties to the lowest id).
void assign_nearest(const Mat& points, const Mat& centroids,
                    std::vector<int>& assign_out, std::vector<double>& dist2_out);

// Mean of the points assigned to each cluster, accumulated in point order.
// Empty clusters get a zero row and size 0; the caller decides what to do.
void centroid_means(const Mat& points, const std::vector<int>& assign, int k,
                    Mat& centroids_out, std::vector<int>& sizes_out);

// Row-wise sums of absolute values.
void row_l1(const Mat& m, std::vector<double>& out);

// Cosine similarity of every row of `rows` against v (length rows.cols).
// Zero-norm rows get similarity 0.
void cosine_to(const Mat& rows, const double* v, std::vector<double>& out);

namespace serial {

void matmul(const Mat& A, const Mat& B, Mat& out);
Mat inverse(Mat A);
void assign_nearest(const Mat& points, const Mat& centroids,
                    std::vector<int>& assign_out, std::vector<double>& dist2_out);
void centroid_means(const Mat& points, const std::vector<int>& assign, int k,
                    Mat& centroids_out, std::vector<int>& sizes_out);
void row_l1(const Mat& m, std::vector<double>& out);
void cosine_to(const Mat& rows, const double* v, std::vector<double>& out);

}  // namespace serial

}  // namespace sropt::kernels
