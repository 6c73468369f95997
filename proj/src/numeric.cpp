#include "triscore/numeric.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "triscore/errors.hpp"

namespace triscore {

Matrix::Matrix(int r, int c, double fill)
    : rows(r), cols(c), data(static_cast<size_t>(r) * static_cast<size_t>(c), fill) {
  if (r < 0 || c < 0) throw ArgumentError("matrix dimensions must be non-negative");
}

uint64_t Rng::next_below(uint64_t n) {
  if (n == 0) throw ArgumentError("next_below: n must be positive");
  // Accept only draws below the largest multiple of n, then reduce.
  const uint64_t rem = (std::numeric_limits<uint64_t>::max() % n + 1) % n;  // 2^64 mod n
  for (;;) {
    const uint64_t x = next_u64();
    if (rem == 0 || x < std::numeric_limits<uint64_t>::max() - rem + 1) return x % n;
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw ArgumentError("matmul: inner dimensions do not match");
  Matrix out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < b.cols; ++j) {
      double acc = 0.0;
      for (int k = 0; k < a.cols; ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw ArgumentError("add: shape mismatch");
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] + b.data[i];
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw ArgumentError("sub: shape mismatch");
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] - b.data[i];
  return out;
}

Matrix scale(const Matrix& a, double k) {
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] * k;
  return out;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double log_sigmoid(double x) {
  // x >= 0: -log(1 + e^-x); x < 0: x - log(1 + e^x). Both arguments to
  // exp are non-positive, so nothing overflows.
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double relu(double x) { return x > 0.0 ? x : 0.0; }

Matrix glorot_init(int rows, int cols, Rng& rng) {
  if (rows <= 0 || cols <= 0) throw ArgumentError("glorot_init: dimensions must be positive");
  const double bound = std::sqrt(6.0 / (rows + cols));
  Matrix out(rows, cols);
  for (double& v : out.data) v = rng.uniform(-bound, bound);
  return out;
}

Matrix dropout_mask(int rows, int cols, double rate, Rng& rng) {
  if (rate < 0.0 || rate >= 1.0) throw ArgumentError("dropout_mask: rate must be in [0, 1)");
  Matrix out(rows, cols);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& v : out.data) v = rng.next_double() < rate ? 0.0 : keep_scale;
  return out;
}

std::vector<double> block_diag_apply(const std::vector<Matrix>& blocks, std::span<const double> v) {
  size_t dim = 0;
  for (const Matrix& b : blocks) {
    if (b.rows != b.cols) throw ArgumentError("block_diag_apply: blocks must be square");
    dim += static_cast<size_t>(b.rows);
  }
  if (dim != v.size()) throw ArgumentError("block_diag_apply: vector length does not match block sizes");
  std::vector<double> out(dim, 0.0);
  size_t off = 0;
  for (const Matrix& b : blocks) {
    const int n = b.rows;
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += b(i, j) * v[off + j];
      out[off + i] = acc;
    }
    off += static_cast<size_t>(n);
  }
  return out;
}

std::vector<double> finite_diff_gradient(const std::function<double(std::span<const double>)>& f,
                                         std::span<const double> x, double h) {
  if (h <= 0.0) throw ArgumentError("finite_diff_gradient: h must be positive");
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (size_t i = 0; i < point.size(); ++i) {
    const double saved = point[i];
    point[i] = saved + h;
    const double fp = f(point);
    point[i] = saved - h;
    const double fm = f(point);
    point[i] = saved;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw NumericError("finite_diff_gradient: non-finite function value");
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

}  // namespace triscore
