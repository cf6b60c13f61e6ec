#include "torsion/intmat.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace torsion {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("integer matrix entry overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("integer matrix entry overflow");
  return out;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// row dst += factor * row src
void add_row(IntMatrix& m, std::size_t dst, std::size_t src, std::int64_t factor) {
  if (factor == 0) return;
  for (std::size_t c = 0; c < m.cols(); ++c) m(dst, c) = checked_add(m(dst, c), checked_mul(factor, m(src, c)));
}

void add_col(IntMatrix& m, std::size_t dst, std::size_t src, std::int64_t factor) {
  if (factor == 0) return;
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, dst) = checked_add(m(r, dst), checked_mul(factor, m(r, src)));
}

void swap_rows(IntMatrix& m, std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(i, c), m(j, c));
}

void swap_cols(IntMatrix& m, std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, i), m(r, j));
}

void negate_row(IntMatrix& m, std::size_t i) {
  for (std::size_t c = 0; c < m.cols(); ++c) m(i, c) = -m(i, c);
}

void negate_col(IntMatrix& m, std::size_t i) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, i) = -m(r, i);
}

// Row operations on the working matrix, mirrored into left (same op) and
// left_inverse (inverse op applied on the right).
struct RowTracker {
  IntMatrix& work;
  IntMatrix& left;
  IntMatrix& left_inv;

  void add(std::size_t dst, std::size_t src, std::int64_t factor) {
    add_row(work, dst, src, factor);
    add_row(left, dst, src, factor);
    add_col(left_inv, src, dst, -factor);
  }
  void swap(std::size_t i, std::size_t j) {
    swap_rows(work, i, j);
    swap_rows(left, i, j);
    swap_cols(left_inv, i, j);
  }
  void negate(std::size_t i) {
    negate_row(work, i);
    negate_row(left, i);
    negate_col(left_inv, i);
  }
};

}  // namespace

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<std::vector<std::int64_t>>& columns) {
  if (columns.empty()) return {};
  IntMatrix m(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != m.rows()) throw std::invalid_argument("ragged column list");
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = columns[c][r];
  }
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty()) return {};
  IntMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw std::invalid_argument("ragged row list");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::vector<std::int64_t> IntMatrix::row(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

std::vector<std::int64_t> IntMatrix::column(std::size_t c) const {
  std::vector<std::int64_t> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<std::vector<std::int64_t>> IntMatrix::row_list() const {
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](std::int64_t x) { return x == 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product dimension mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        out(i, j) = checked_add(out(i, j), checked_mul(a(i, k), b(k, j)));
    }
  return out;
}

std::vector<std::int64_t> operator*(const IntMatrix& a, const std::vector<std::int64_t>& v) {
  if (a.cols() != v.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
  std::vector<std::int64_t> out(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) out[i] = checked_add(out[i], checked_mul(a(i, k), v[k]));
  return out;
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << m(r, c);
    os << ']';
  }
  return os << ']';
}

SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  SmithForm out{IntMatrix::identity(rows), IntMatrix::identity(rows), a, IntMatrix::identity(cols), 0};
  IntMatrix& w = out.diagonal;
  RowTracker rowops{w, out.left, out.left_inverse};

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (w(i, j) != 0 && (pr == rows || std::abs(w(i, j)) < std::abs(w(pr, pc)))) {
          pr = i;
          pc = j;
        }
    if (pr == rows) break;
    rowops.swap(t, pr);
    swap_cols(w, t, pc);
    swap_cols(out.right, t, pc);

    for (bool dirty = true; dirty;) {
      dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (w(i, t) == 0) continue;
        rowops.add(i, t, -(w(i, t) / w(t, t)));
        if (w(i, t) != 0) {
          rowops.swap(t, i);
          dirty = true;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (w(t, j) == 0) continue;
        const std::int64_t q = -(w(t, j) / w(t, t));
        add_col(w, j, t, q);
        add_col(out.right, j, t, q);
        if (w(t, j) != 0) {
          swap_cols(w, t, j);
          swap_cols(out.right, t, j);
          dirty = true;
        }
      }
      if (dirty) continue;
      // Divisibility: fold any offending row into the pivot row and repeat.
      for (std::size_t i = t + 1; i < rows && !dirty; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (w(i, j) % w(t, t) != 0) {
            rowops.add(t, i, 1);
            dirty = true;
            break;
          }
    }
    if (w(t, t) < 0) rowops.negate(t);
    ++out.rank;
  }
  return out;
}

std::size_t rank(const IntMatrix& a) { return row_hermite_form(a).rows(); }

IntMatrix row_hermite_form(const IntMatrix& a) {
  IntMatrix h = a;
  const std::size_t rows = h.rows(), cols = h.cols();
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    for (std::size_t i = pivot_row + 1; i < rows; ++i) {
      while (h(i, c) != 0) {
        add_row(h, pivot_row, i, -(h(pivot_row, c) / h(i, c)));
        swap_rows(h, pivot_row, i);
      }
    }
    if (h(pivot_row, c) == 0) continue;
    if (h(pivot_row, c) < 0) negate_row(h, pivot_row);
    const std::int64_t p = h(pivot_row, c);
    for (std::size_t i = 0; i < pivot_row; ++i) add_row(h, i, pivot_row, -floor_div(h(i, c), p));
    ++pivot_row;
  }
  IntMatrix out(pivot_row, cols);
  for (std::size_t r = 0; r < pivot_row; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = h(r, c);
  return out;
}

IntMatrix column_hermite_form(const IntMatrix& a) { return row_hermite_form(a.transposed()).transposed(); }

}  // namespace torsion
