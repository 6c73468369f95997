#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace triscore {

// Dense row-major matrix of doubles. Everything in this library is small
// enough that 64-bit floats and serial loops are the right trade: tight
// gradient checks beat raw speed.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // rows * cols, row-major

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0);

  double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  std::span<double> row(int r) { return {data.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)}; }
  std::span<const double> row(int r) const {
    return {data.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)};
  }

  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

// Deterministic random source. The core generator is std::mt19937_64, whose
// output stream is fully specified by the C++ standard, and all derived
// draws (doubles, bounded integers) are implemented here rather than with
// std::*_distribution, so identical seeds produce identical streams on
// every platform and standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of randomness.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n). Rejection sampling keeps the draw unbiased.
  uint64_t next_below(uint64_t n);

  bool next_bool() { return (next_u64() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

// Standard product with a fixed summation order (row-major, k ascending),
// so results are reproducible bit for bit.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double k);

double sigmoid(double x);

// log(sigmoid(x)), computed without overflow for any finite x.
// log(1 - sigmoid(x)) is log_sigmoid(-x).
double log_sigmoid(double x);

double relu(double x);

// Uniform init on [-sqrt(6/(rows+cols)), +sqrt(6/(rows+cols))].
Matrix glorot_init(int rows, int cols, Rng& rng);

// Inverted dropout: each entry is 0 with probability rate, otherwise
// 1/(1-rate), so the masked signal keeps its expected scale.
Matrix dropout_mask(int rows, int cols, double rate, Rng& rng);

// y = diag(blocks) * v where the block-diagonal matrix is stored as its
// dense square blocks. v.size() must equal the sum of block dimensions.
std::vector<double> block_diag_apply(const std::vector<Matrix>& blocks, std::span<const double> v);

// Central differences (f(x+h*e_i) - f(x-h*e_i)) / (2h). This is the
// independent oracle used to validate every analytic gradient in the
// model code; keep it free of any shared machinery.
std::vector<double> finite_diff_gradient(const std::function<double(std::span<const double>)>& f,
                                         std::span<const double> x, double h);

}  // namespace triscore
