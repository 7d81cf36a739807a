#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace vmz {

// Dense row-major matrix over an exact runtime-context scalar. Scalars carry
// their own field context, so the zero element is supplied explicitly.
template <class T>
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : r_(rows), c_(cols), a_(rows * cols, fill) {}

  static Matrix identity(std::size_t n, const T& zero, const T& one) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  Matrix operator+(const Matrix& o) const {
    check_same(o);
    Matrix m = *this;
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] + o.a_[k];
    return m;
  }
  Matrix operator-(const Matrix& o) const {
    check_same(o);
    Matrix m = *this;
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] - o.a_[k];
    return m;
  }
  Matrix operator*(const Matrix& o) const {
    if (c_ != o.r_) throw std::invalid_argument("matrix shape mismatch");
    Matrix m(r_, o.c_, a_.empty() ? o.a_.at(0) : a_[0]);
    for (std::size_t i = 0; i < r_; ++i) {
      for (std::size_t j = 0; j < o.c_; ++j) {
        T acc = (*this)(i, 0) * o(0, j);
        for (std::size_t k = 1; k < c_; ++k) acc = acc + (*this)(i, k) * o(k, j);
        m(i, j) = acc;
      }
    }
    return m;
  }
  bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

  template <class F>
  auto map(F f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    std::vector<U> out;
    out.reserve(a_.size());
    for (const auto& x : a_) out.push_back(f(x));
    return Matrix<U>(r_, c_, std::move(out));
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data) : r_(rows), c_(cols), a_(std::move(data)) {
    if (a_.size() != r_ * c_) throw std::invalid_argument("matrix data size mismatch");
  }

 private:
  void check_same(const Matrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t r_, c_;
  std::vector<T> a_;
};

}  // namespace vmz
