#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "bergerkit/rational.hpp"

namespace bergerkit {

// Dense or sparse rational matrix. The storage kind is chosen by fill ratio
// (see kSparseFillThreshold) whenever a matrix is built from triplets or
// compacted; both kinds answer every query identically.
class RatMatrix {
 public:
  enum class Storage { dense, sparse };

  struct Entry {
    std::size_t col;
    Rational value;
  };
  using SparseRow = std::vector<Entry>;

  struct Triplet {
    std::size_t row;
    std::size_t col;
    Rational value;
  };

  // Matrices with at most this fraction of nonzeros are stored sparse.
  static constexpr double kSparseFillThreshold = 0.25;

  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols, Storage storage = Storage::dense);

  static RatMatrix identity(std::size_t n);
  static RatMatrix from_rows(std::initializer_list<std::initializer_list<Rational>> rows);
  static RatMatrix from_rows(const std::vector<RatVector>& rows, std::size_t cols);
  static RatMatrix from_columns(const std::vector<RatVector>& cols, std::size_t rows);
  // Duplicate (row, col) pairs are summed.
  static RatMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Storage storage() const { return storage_; }
  bool is_sparse() const { return storage_ == Storage::sparse; }
  std::size_t nonzeros() const;
  double fill_ratio() const;

  const Rational& at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Rational& v);
  void add_to(std::size_t i, std::size_t j, const Rational& v);

  // Nonzero entries of row i, ordered by column.
  SparseRow row_entries(std::size_t i) const;
  RatVector row(std::size_t i) const;
  RatVector col(std::size_t j) const;

  RatMatrix with_storage(Storage s) const;
  // Re-selects storage by the fill-ratio rule.
  RatMatrix compacted() const;

  RatMatrix transpose() const;
  RatMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const RatMatrix& b);
  // Row-major flattening, used to treat N x N matrices as vectors of length N^2.
  RatVector flatten() const;
  static RatMatrix unflatten(const RatVector& v, std::size_t rows, std::size_t cols);

  bool is_zero() const;
  Rational trace() const;

  RatMatrix operator-() const;
  RatMatrix& operator+=(const RatMatrix& o);
  RatMatrix& operator-=(const RatMatrix& o);
  RatMatrix& operator*=(const Rational& s);
  friend RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
  friend RatMatrix operator-(RatMatrix a, const RatMatrix& b) { return a -= b; }
  friend RatMatrix operator*(RatMatrix a, const Rational& s) { return a *= s; }
  friend RatMatrix operator*(const Rational& s, RatMatrix a) { return a *= s; }
  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend RatVector operator*(const RatMatrix& a, const RatVector& v);

  // Entrywise equality, independent of storage kind.
  friend bool operator==(const RatMatrix& a, const RatMatrix& b);
  friend bool operator!=(const RatMatrix& a, const RatMatrix& b) { return !(a == b); }

 private:
  std::size_t index(std::size_t i, std::size_t j) const { return i * cols_ + j; }
  void check(std::size_t i, std::size_t j) const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Storage storage_ = Storage::dense;
  std::vector<Rational> dense_;
  std::vector<SparseRow> sparse_;
};

// Commutator ab - ba.
RatMatrix commutator(const RatMatrix& a, const RatMatrix& b);

// Inverse of a square invertible matrix; throws PreconditionError when singular.
RatMatrix inverse(const RatMatrix& m);

}  // namespace bergerkit
