#include "sropt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace sropt::kernels {

namespace {

double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dist2(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

void matmul(const Mat& A, const Mat& B, Mat& out) {
  if (A.cols != B.rows) throw std::invalid_argument("matmul: shape mismatch");
  out = Mat(A.rows, B.cols);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < A.rows; ++i) {
    const double* arow = A.row(i);
    double* orow = out.row(i);
    for (int k = 0; k < A.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = B.row(k);
      for (int j = 0; j < B.cols; ++j) orow[j] += aik * brow[j];
    }
  }
}

Mat inverse(Mat A) {
  if (A.rows != A.cols) throw std::invalid_argument("inverse: matrix not square");
  const int n = A.rows;
  Mat inv = Mat::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(A.at(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(A.at(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-12) throw std::runtime_error("inverse: singular matrix");
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(A.at(col, c), A.at(pivot, c));
        std::swap(inv.at(col, c), inv.at(pivot, c));
      }
    }
    const double d = A.at(col, col);
    for (int c = 0; c < n; ++c) {
      A.at(col, c) /= d;
      inv.at(col, c) /= d;
    }
    // Row eliminations below/above the pivot are independent of each other.
    const double* src_a = A.row(col);
    const double* src_i = inv.row(col);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = A.at(r, col);
      if (f == 0.0) continue;
      double* dst_a = A.row(r);
      double* dst_i = inv.row(r);
      for (int c = 0; c < n; ++c) {
        dst_a[c] -= f * src_a[c];
        dst_i[c] -= f * src_i[c];
      }
    }
  }
  return inv;
}

void assign_nearest(const Mat& points, const Mat& centroids,
                    std::vector<int>& assign_out, std::vector<double>& dist2_out) {
  if (points.cols != centroids.cols) throw std::invalid_argument("assign_nearest: dim mismatch");
  if (centroids.rows == 0) throw std::invalid_argument("assign_nearest: no centroids");
  assign_out.assign(points.rows, 0);
  dist2_out.assign(points.rows, 0.0);
#pragma omp parallel for schedule(static)
  for (int p = 0; p < points.rows; ++p) {
    int best = 0;
    double best_d = dist2(points.row(p), centroids.row(0), points.cols);
    for (int c = 1; c < centroids.rows; ++c) {
      const double d = dist2(points.row(p), centroids.row(c), points.cols);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    assign_out[p] = best;
    dist2_out[p] = best_d;
  }
}

void centroid_means(const Mat& points, const std::vector<int>& assign, int k,
                    Mat& centroids_out, std::vector<int>& sizes_out) {
  centroids_out = Mat(k, points.cols);
  sizes_out.assign(k, 0);
  // One cluster per task; members accumulated in point order, so the result
  // does not depend on the thread count.
#pragma omp parallel for schedule(static)
  for (int c = 0; c < k; ++c) {
    double* row = centroids_out.row(c);
    int count = 0;
    for (int p = 0; p < points.rows; ++p) {
      if (assign[p] != c) continue;
      const double* pr = points.row(p);
      for (int d = 0; d < points.cols; ++d) row[d] += pr[d];
      ++count;
    }
    if (count > 0)
      for (int d = 0; d < points.cols; ++d) row[d] /= count;
    sizes_out[c] = count;
  }
}

void row_l1(const Mat& m, std::vector<double>& out) {
  out.assign(m.rows, 0.0);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < m.rows; ++r) {
    const double* row = m.row(r);
    double s = 0.0;
    for (int c = 0; c < m.cols; ++c) s += std::abs(row[c]);
    out[r] = s;
  }
}

void cosine_to(const Mat& rows, const double* v, std::vector<double>& out) {
  out.assign(rows.rows, 0.0);
  const double vn = std::sqrt(dot(v, v, rows.cols));
  if (vn == 0.0) return;
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows.rows; ++r) {
    const double* row = rows.row(r);
    const double rn = std::sqrt(dot(row, row, rows.cols));
    if (rn == 0.0) continue;
    out[r] = dot(row, v, rows.cols) / (rn * vn);
  }
}

SymEigen sym_eigen(Mat A, double tol, int max_sweeps) {
  if (A.rows != A.cols) throw std::invalid_argument("sym_eigen: matrix not square");
  const int n = A.rows;
  Mat V = Mat::identity(n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A.at(p, q) * A.at(p, q);
    if (off < tol * tol) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A.at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double app = A.at(p, p);
        const double aqq = A.at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = A.at(i, p);
          const double aiq = A.at(i, q);
          A.at(i, p) = c * aip - s * aiq;
          A.at(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = A.at(p, i);
          const double aqi = A.at(q, i);
          A.at(p, i) = c * api - s * aqi;
          A.at(q, i) = s * api + c * aqi;
        }
        // Row i of V accumulates into eigenvector i.
        for (int i = 0; i < n; ++i) {
          const double vpi = V.at(p, i);
          const double vqi = V.at(q, i);
          V.at(p, i) = c * vpi - s * vqi;
          V.at(q, i) = s * vpi + c * vqi;
        }
      }
    }
  }
  SymEigen res;
  res.values.resize(n);
  for (int i = 0; i < n; ++i) res.values[i] = A.at(i, i);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return res.values[a] < res.values[b]; });
  SymEigen sorted;
  sorted.values.resize(n);
  sorted.vectors = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    sorted.values[i] = res.values[order[i]];
    const double* src = V.row(order[i]);
    double* dst = sorted.vectors.row(i);
    // Sign convention: largest-magnitude component positive.
    int arg = 0;
    for (int j = 1; j < n; ++j)
      if (std::abs(src[j]) > std::abs(src[arg])) arg = j;
    const double sign = src[arg] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) dst[j] = sign * src[j];
  }
  return sorted;
}

// ---------------------------------------------------------------------------
// Serial references. Written as plain textbook loops, independent of the
// parallel versions above; tests assert the two agree.
// ---------------------------------------------------------------------------

namespace serial {

void matmul(const Mat& A, const Mat& B, Mat& out) {
  if (A.cols != B.rows) throw std::invalid_argument("matmul: shape mismatch");
  out = Mat(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const double aik = A.at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) out.at(i, j) += aik * B.at(k, j);
    }
}

Mat inverse(Mat A) {
  if (A.rows != A.cols) throw std::invalid_argument("inverse: matrix not square");
  const int n = A.rows;
  Mat inv = Mat::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A.at(r, col)) > std::abs(A.at(pivot, col))) pivot = r;
    if (std::abs(A.at(pivot, col)) < 1e-12)
      throw std::runtime_error("inverse: singular matrix");
    if (pivot != col)
      for (int c = 0; c < n; ++c) {
        std::swap(A.at(col, c), A.at(pivot, c));
        std::swap(inv.at(col, c), inv.at(pivot, c));
      }
    const double d = A.at(col, col);
    for (int c = 0; c < n; ++c) {
      A.at(col, c) /= d;
      inv.at(col, c) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = A.at(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        A.at(r, c) -= f * A.at(col, c);
        inv.at(r, c) -= f * inv.at(col, c);
      }
    }
  }
  return inv;
}

void assign_nearest(const Mat& points, const Mat& centroids,
                    std::vector<int>& assign_out, std::vector<double>& dist2_out) {
  if (points.cols != centroids.cols) throw std::invalid_argument("assign_nearest: dim mismatch");
  if (centroids.rows == 0) throw std::invalid_argument("assign_nearest: no centroids");
  assign_out.assign(points.rows, 0);
  dist2_out.assign(points.rows, 0.0);
  for (int p = 0; p < points.rows; ++p) {
    int best = 0;
    double best_d = dist2(points.row(p), centroids.row(0), points.cols);
    for (int c = 1; c < centroids.rows; ++c) {
      const double d = dist2(points.row(p), centroids.row(c), points.cols);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    assign_out[p] = best;
    dist2_out[p] = best_d;
  }
}

void centroid_means(const Mat& points, const std::vector<int>& assign, int k,
                    Mat& centroids_out, std::vector<int>& sizes_out) {
  centroids_out = Mat(k, points.cols);
  sizes_out.assign(k, 0);
  for (int c = 0; c < k; ++c) {
    int count = 0;
    for (int p = 0; p < points.rows; ++p) {
      if (assign[p] != c) continue;
      for (int d = 0; d < points.cols; ++d) centroids_out.at(c, d) += points.at(p, d);
      ++count;
    }
    if (count > 0)
      for (int d = 0; d < points.cols; ++d) centroids_out.at(c, d) /= count;
    sizes_out[c] = count;
  }
}

void row_l1(const Mat& m, std::vector<double>& out) {
  out.assign(m.rows, 0.0);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) out[r] += std::abs(m.at(r, c));
}

void cosine_to(const Mat& rows, const double* v, std::vector<double>& out) {
  out.assign(rows.rows, 0.0);
  const double vn = std::sqrt(dot(v, v, rows.cols));
  if (vn == 0.0) return;
  for (int r = 0; r < rows.rows; ++r) {
    const double rn = std::sqrt(dot(rows.row(r), rows.row(r), rows.cols));
    if (rn == 0.0) continue;
    out[r] = dot(rows.row(r), v, rows.cols) / (rn * vn);
  }
}

}  // namespace serial

}  // namespace sropt::kernels
