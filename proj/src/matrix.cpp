#include "dst/matrix.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "dst/kernels.hpp"

namespace dst {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Vector Matrix::diag() const {
  const std::size_t n = std::min(rows_, cols_);
  Vector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = (*this)(i, i);
  return d;
}

double Matrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  assert(rows_ == other.rows_ && cols_ == other.cols_);
  kernels::active().axpy(1.0, other.data(), data(), data_.size());
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  assert(rows_ == other.rows_ && cols_ == other.cols_);
  kernels::active().axpy(-1.0, other.data(), data(), data_.size());
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  assert(a.cols() == b.rows());
  Matrix c(a.rows(), b.cols());
  kernels::active().gemm(a.data(), b.data(), c.data(), a.rows(), a.cols(),
                         b.cols());
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  assert(a.cols() == x.size());
  Vector y(a.rows());
  kernels::active().matvec(a.data(), x.data(), y.data(), a.rows(), a.cols());
  return y;
}

double trace_of_product(const Matrix& a, const Matrix& b) {
  assert(a.cols() == b.rows() && a.rows() == b.cols());
  // tr(AB) = sum_ij A_ij B_ji = sum_i <row_i(A), col_i(B)> = <A, B^T>_F
  const Matrix bt = b.transposed();
  return kernels::active().dot(a.data(), bt.data(), a.rows() * a.cols());
}

double max_abs(const Matrix& a) {
  return max_abs(std::span<const double>(a.data(), a.rows() * a.cols()));
}

double frobenius_norm(const Matrix& a) {
  const std::size_t n = a.rows() * a.cols();
  return std::sqrt(kernels::active().dot(a.data(), a.data(), n));
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace dst
