#include "bergerkit/rat_matrix.hpp"

#include <algorithm>
#include <string>

#include "bergerkit/errors.hpp"
#include "bergerkit/linalg.hpp"

namespace bergerkit {

namespace {

const Rational& zero_rational() {
  static const Rational z;
  return z;
}

}  // namespace

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols, Storage storage)
    : rows_(rows), cols_(cols), storage_(storage) {
  if (storage_ == Storage::dense)
    dense_.assign(rows * cols, Rational());
  else
    sparse_.assign(rows, SparseRow{});
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

RatMatrix RatMatrix::from_rows(std::initializer_list<std::initializer_list<Rational>> rows) {
  std::size_t nr = rows.size();
  std::size_t nc = nr ? rows.begin()->size() : 0;
  RatMatrix m(nr, nc);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != nc) throw DimensionError("from_rows: ragged rows");
    std::size_t j = 0;
    for (const auto& v : r) m.set(i, j++, v);
    ++i;
  }
  return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows, std::size_t cols) {
  RatMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DimensionError("from_rows: row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) m.dense_[m.index(i, j)] = rows[i][j];
  }
  return m;
}

RatMatrix RatMatrix::from_columns(const std::vector<RatVector>& cols, std::size_t rows) {
  RatMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw DimensionError("from_columns: column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m.dense_[m.index(i, j)] = cols[j][i];
  }
  return m;
}

RatMatrix RatMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  RatMatrix m(rows, cols, Storage::sparse);
  for (auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) throw DimensionError("from_triplets: index out of range");
    auto& r = m.sparse_[t.row];
    if (!r.empty() && r.back().col == t.col)
      r.back().value += t.value;
    else
      r.push_back({t.col, std::move(t.value)});
  }
  for (auto& r : m.sparse_)
    r.erase(std::remove_if(r.begin(), r.end(), [](const Entry& e) { return sgn(e.value) == 0; }),
            r.end());
  return m.compacted();
}

void RatMatrix::check(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_)
    throw DimensionError("matrix index (" + std::to_string(i) + "," + std::to_string(j) +
                         ") out of range");
}

std::size_t RatMatrix::nonzeros() const {
  std::size_t n = 0;
  if (storage_ == Storage::dense) {
    for (const auto& x : dense_)
      if (sgn(x) != 0) ++n;
  } else {
    for (const auto& r : sparse_) n += r.size();
  }
  return n;
}

double RatMatrix::fill_ratio() const {
  if (rows_ == 0 || cols_ == 0) return 0.0;
  return static_cast<double>(nonzeros()) / static_cast<double>(rows_ * cols_);
}

const Rational& RatMatrix::at(std::size_t i, std::size_t j) const {
  check(i, j);
  if (storage_ == Storage::dense) return dense_[index(i, j)];
  const auto& r = sparse_[i];
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const Entry& e, std::size_t c) { return e.col < c; });
  if (it != r.end() && it->col == j) return it->value;
  return zero_rational();
}

void RatMatrix::set(std::size_t i, std::size_t j, const Rational& v) {
  check(i, j);
  if (storage_ == Storage::dense) {
    dense_[index(i, j)] = v;
    return;
  }
  auto& r = sparse_[i];
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const Entry& e, std::size_t c) { return e.col < c; });
  bool present = it != r.end() && it->col == j;
  if (sgn(v) == 0) {
    if (present) r.erase(it);
  } else if (present) {
    it->value = v;
  } else {
    r.insert(it, Entry{j, v});
  }
}

void RatMatrix::add_to(std::size_t i, std::size_t j, const Rational& v) {
  if (sgn(v) == 0) return;
  if (storage_ == Storage::dense) {
    check(i, j);
    dense_[index(i, j)] += v;
    return;
  }
  set(i, j, at(i, j) + v);
}

RatMatrix::SparseRow RatMatrix::row_entries(std::size_t i) const {
  if (i >= rows_) throw DimensionError("row index out of range");
  if (storage_ == Storage::sparse) return sparse_[i];
  SparseRow out;
  for (std::size_t j = 0; j < cols_; ++j)
    if (sgn(dense_[index(i, j)]) != 0) out.push_back({j, dense_[index(i, j)]});
  return out;
}

RatVector RatMatrix::row(std::size_t i) const {
  RatVector v(cols_);
  for (auto& e : row_entries(i)) v[e.col] = e.value;
  return v;
}

RatVector RatMatrix::col(std::size_t j) const {
  RatVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
  return v;
}

RatMatrix RatMatrix::with_storage(Storage s) const {
  if (s == storage_) return *this;
  RatMatrix m(rows_, cols_, s);
  for (std::size_t i = 0; i < rows_; ++i)
    for (auto& e : row_entries(i)) m.set(i, e.col, e.value);
  return m;
}

RatMatrix RatMatrix::compacted() const {
  return with_storage(fill_ratio() <= kSparseFillThreshold ? Storage::sparse : Storage::dense);
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_, storage_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (auto& e : row_entries(i)) t.set(e.col, i, e.value);
  return t;
}

RatMatrix RatMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block out of range");
  RatMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b.set(i, j, at(r0 + i, c0 + j));
  return b;
}

void RatMatrix::set_block(std::size_t r0, std::size_t c0, const RatMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw DimensionError("set_block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) set(r0 + i, c0 + j, b.at(i, j));
}

RatVector RatMatrix::flatten() const {
  RatVector v(rows_ * cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (auto& e : row_entries(i)) v[index(i, e.col)] = e.value;
  return v;
}

RatMatrix RatMatrix::unflatten(const RatVector& v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) throw DimensionError("unflatten: size mismatch");
  RatMatrix m(rows, cols);
  m.dense_ = v;
  return m;
}

bool RatMatrix::is_zero() const { return nonzeros() == 0; }

Rational RatMatrix::trace() const {
  if (rows_ != cols_) throw DimensionError("trace of non-square matrix");
  Rational t;
  for (std::size_t i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

RatMatrix RatMatrix::operator-() const {
  RatMatrix m = *this;
  m *= Rational(-1);
  return m;
}

RatMatrix& RatMatrix::operator+=(const RatMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sum: shape mismatch");
  if (storage_ == Storage::dense && o.storage_ == Storage::dense) {
    for (std::size_t k = 0; k < dense_.size(); ++k) dense_[k] += o.dense_[k];
    return *this;
  }
  for (std::size_t i = 0; i < rows_; ++i)
    for (auto& e : o.row_entries(i)) add_to(i, e.col, e.value);
  return *this;
}

RatMatrix& RatMatrix::operator-=(const RatMatrix& o) { return *this += -o; }

RatMatrix& RatMatrix::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    *this = RatMatrix(rows_, cols_, storage_);
    return *this;
  }
  for (auto& x : dense_) x *= s;
  for (auto& r : sparse_)
    for (auto& e : r) e.value *= s;
  return *this;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product: shape mismatch");
  RatMatrix c(a.rows_, b.cols_);
  std::vector<RatMatrix::SparseRow> brows(b.rows_);
  for (std::size_t k = 0; k < b.rows_; ++k) brows[k] = b.row_entries(k);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (auto& ea : a.row_entries(i))
      for (auto& eb : brows[ea.col]) c.dense_[c.index(i, eb.col)] += ea.value * eb.value;
  return c;
}

RatVector operator*(const RatMatrix& a, const RatVector& v) {
  if (a.cols_ != v.size()) throw DimensionError("matrix-vector product: shape mismatch");
  RatVector out(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (auto& e : a.row_entries(i))
      if (sgn(v[e.col]) != 0) out[i] += e.value * v[e.col];
  return out;
}

bool operator==(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    auto ra = a.row_entries(i);
    auto rb = b.row_entries(i);
    if (ra.size() != rb.size()) return false;
    for (std::size_t k = 0; k < ra.size(); ++k)
      if (ra[k].col != rb[k].col || ra[k].value != rb[k].value) return false;
  }
  return true;
}

RatMatrix commutator(const RatMatrix& a, const RatMatrix& b) { return a * b - b * a; }

RatMatrix inverse(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("inverse of non-square matrix");
  std::size_t n = m.rows();
  RatMatrix aug(n, 2 * n);
  aug.set_block(0, 0, m);
  aug.set_block(0, n, RatMatrix::identity(n));
  auto red = rref(aug);
  if (red.pivots.size() < n || red.pivots[n - 1] != n - 1)
    throw PreconditionError("inverse: matrix is singular");
  return red.reduced.block(0, n, n, n);
}

}  // namespace bergerkit
