#pragma once

// Small dense integer matrices with Smith and Hermite normal forms.
// Every elementary operation is overflow-checked; matrices here are tiny
// (ambient dimension n <= ~6), so no modular tricks are used.

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace torsion {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_columns(const std::vector<std::vector<std::int64_t>>& columns);
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<std::int64_t> row(std::size_t r) const;
  std::vector<std::int64_t> column(std::size_t c) const;
  std::vector<std::vector<std::int64_t>> row_list() const;

  IntMatrix transposed() const;
  bool is_zero() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend std::vector<std::int64_t> operator*(const IntMatrix& a, const std::vector<std::int64_t>& v);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
  friend auto operator<=>(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

/// left * input * right == diagonal, with left and right unimodular and the
/// diagonal entries d_1 | d_2 | ... | d_rank positive.
struct SmithForm {
  IntMatrix left;
  IntMatrix left_inverse;
  IntMatrix diagonal;
  IntMatrix right;
  std::size_t rank = 0;
};

SmithForm smith_normal_form(const IntMatrix& a);

std::size_t rank(const IntMatrix& a);

/// Row Hermite normal form of the row lattice: echelon, positive pivots,
/// entries above each pivot reduced into [0, pivot). Zero rows are dropped.
IntMatrix row_hermite_form(const IntMatrix& a);

/// Column-style Hermite form of the column lattice (transpose of the row form
/// of the transpose).
IntMatrix column_hermite_form(const IntMatrix& a);

}  // namespace torsion
