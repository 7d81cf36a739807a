#pragma once

#include <optional>
#include <vector>

#include "vmz/matrix.hpp"
#include "vmz/ratk.hpp"

namespace vmz {

// Exact linear algebra over k and over F_q.

RatK determinant(const Matrix<RatK>& m);
std::optional<Matrix<RatK>> inverse(const Matrix<RatK>& m);
// Basis of {x : m·x = 0}.
std::vector<std::vector<RatK>> kernel(const Matrix<RatK>& m);

using FqRow = std::vector<Code>;
// Basis of the right kernel of the matrix with the given rows (all of length n).
std::vector<FqRow> fq_kernel(const FqContext& ctx, std::vector<FqRow> rows, std::size_t n);
std::size_t fq_rank(const FqContext& ctx, std::vector<FqRow> rows, std::size_t n);
// Monic minimal polynomial of a square matrix over F_q, ascending coefficients.
std::vector<Code> fq_minpoly(const FqContext& ctx, const Matrix<Code>& m);

}  // namespace vmz
