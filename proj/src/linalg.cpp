#include "vmz/linalg.hpp"

#include "vmz/error.hpp"

namespace vmz {

namespace {

// Row reduction in place; returns pivot columns.
std::vector<std::size_t> rref(Matrix<RatK>& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col).is_zero()) ++p;
    if (p == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(p, j));
    const RatK inv = m(row, col).inv();
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = m(row, j) * inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const RatK f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<std::size_t> fq_rref(const FqContext& ctx, std::vector<FqRow>& rows, std::size_t n) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < rows.size(); ++col) {
    std::size_t p = row;
    while (p < rows.size() && rows[p][col] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[row], rows[p]);
    const Code inv = ctx.inv(rows[row][col]);
    for (std::size_t j = col; j < n; ++j) rows[row][j] = ctx.mul(rows[row][j], inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == row || rows[i][col] == 0) continue;
      const Code f = rows[i][col];
      for (std::size_t j = col; j < n; ++j) rows[i][j] = ctx.sub(rows[i][j], ctx.mul(f, rows[row][j]));
    }
    pivots.push_back(col);
    ++row;
  }
  rows.resize(row);
  return pivots;
}

}  // namespace

RatK determinant(const Matrix<RatK>& m0) {
  if (m0.rows() != m0.cols()) throw DomainError("determinant of a non-square matrix");
  Matrix<RatK> m = m0;
  const FqContext& ctx = m(0, 0).ctx();
  RatK det = RatK::one(ctx);
  const std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && m(p, col).is_zero()) ++p;
    if (p == n) return RatK(ctx);
    if (p != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(col, j), m(p, j));
      det = -det;
    }
    det *= m(col, col);
    const RatK inv = m(col, col).inv();
    for (std::size_t i = col + 1; i < n; ++i) {
      if (m(i, col).is_zero()) continue;
      const RatK f = m(i, col) * inv;
      for (std::size_t j = col; j < n; ++j) m(i, j) = m(i, j) - f * m(col, j);
    }
  }
  return det;
}

std::optional<Matrix<RatK>> inverse(const Matrix<RatK>& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw DomainError("inverse of a non-square matrix");
  const FqContext& ctx = m(0, 0).ctx();
  Matrix<RatK> aug(n, 2 * n, RatK(ctx));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = RatK::one(ctx);
  }
  const auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Matrix<RatK> out(n, n, RatK(ctx));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  }
  return out;
}

std::vector<std::vector<RatK>> kernel(const Matrix<RatK>& m0) {
  Matrix<RatK> m = m0;
  const FqContext& ctx = m(0, 0).ctx();
  const auto piv = rref(m);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::vector<RatK>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    std::vector<RatK> x(m.cols(), RatK(ctx));
    x[f] = RatK::one(ctx);
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -m(r, f);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::vector<FqRow> fq_kernel(const FqContext& ctx, std::vector<FqRow> rows, std::size_t n) {
  const auto piv = fq_rref(ctx, rows, n);
  std::vector<bool> is_piv(n, false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<FqRow> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_piv[f]) continue;
    FqRow x(n, 0);
    x[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = ctx.neg(rows[r][f]);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::size_t fq_rank(const FqContext& ctx, std::vector<FqRow> rows, std::size_t n) {
  return fq_rref(ctx, rows, n).size();
}

std::vector<Code> fq_minpoly(const FqContext& ctx, const Matrix<Code>& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw DomainError("minimal polynomial of a non-square matrix");
  auto mul = [&](const Matrix<Code>& a, const Matrix<Code>& b) {
    Matrix<Code> c(n, n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Code acc = 0;
        for (std::size_t k = 0; k < n; ++k) acc = ctx.add(acc, ctx.mul(a(i, k), b(k, j)));
        c(i, j) = acc;
      }
    }
    return c;
  };
  std::vector<Matrix<Code>> powers{Matrix<Code>::identity(n, 0, 1)};
  for (std::size_t k = 1; k <= n; ++k) {
    powers.push_back(mul(powers.back(), m));
    // Columns vec(M^0), ..., vec(M^k).
    std::vector<FqRow> rows(n * n, FqRow(k + 1, 0));
    for (std::size_t c = 0; c <= k; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) rows[i * n + j][c] = powers[c](i, j);
      }
    }
    auto ker = fq_kernel(ctx, rows, k + 1);
    if (ker.empty()) continue;
    FqRow v = ker[0];
    const Code inv = ctx.inv(v[k]);
    for (auto& x : v) x = ctx.mul(x, inv);
    return v;
  }
  throw AssertionFailure("minimal polynomial search exceeded the dimension");
}

}  // namespace vmz
