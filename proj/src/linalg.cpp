#include "bergerkit/linalg.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

#include "bergerkit/errors.hpp"

namespace bergerkit {

namespace {

using IntRow = std::vector<std::pair<std::size_t, mpz_class>>;

// Scales a rational row to a primitive integer row with the same span.
IntRow integer_row(const RatMatrix::SparseRow& row) {
  mpz_class l = 1;
  for (const auto& e : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.value.get_den_mpz_t());
  IntRow out;
  out.reserve(row.size());
  for (const auto& e : row) {
    mpz_class v = e.value.get_num() * (l / e.value.get_den());
    out.emplace_back(e.col, std::move(v));
  }
  return out;
}

void make_primitive(IntRow& row) {
  if (row.empty()) return;
  mpz_class g = 0;
  for (const auto& e : row) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
    if (g == 1) break;
  }
  if (sgn(row.front().second) < 0) g = -g;
  if (g != 1)
    for (auto& e : row) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

// a*x - b*y for sorted sparse rows.
IntRow combine(const mpz_class& a, const IntRow& x, const mpz_class& b, const IntRow& y) {
  IntRow out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.emplace_back(x[i].first, a * x[i].second);
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, -b * y[j].second);
      ++j;
    } else {
      mpz_class v = a * x[i].second - b * y[j].second;
      if (sgn(v) != 0) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

const mpz_class* entry_at(const IntRow& row, std::size_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const auto& e, std::size_t c) { return e.first < c; });
  if (it != row.end() && it->first == col) return &it->second;
  return nullptr;
}

RrefResult assemble_result(std::size_t rows, std::size_t cols, const std::vector<IntRow>& pivot_rows) {
  std::vector<RatMatrix::Triplet> trip;
  std::vector<std::size_t> pivots;
  for (std::size_t i = 0; i < pivot_rows.size(); ++i) {
    const auto& r = pivot_rows[i];
    pivots.push_back(r.front().first);
    const mpz_class& lead = r.front().second;
    for (const auto& e : r) {
      Rational q(e.second, lead);
      q.canonicalize();
      trip.push_back({i, e.first, std::move(q)});
    }
  }
  return RrefResult{RatMatrix::from_triplets(rows, cols, std::move(trip)), std::move(pivots)};
}

SubspaceBasis nullspace_from_rref(const RrefResult& red, std::size_t cols) {
  std::vector<bool> is_pivot(cols, false);
  for (auto p : red.pivots)
    if (p < cols) is_pivot[p] = true;
  std::vector<RatMatrix::SparseRow> prow(red.pivots.size());
  for (std::size_t i = 0; i < red.pivots.size(); ++i) prow[i] = red.reduced.row_entries(i);
  std::vector<RatVector> gens;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RatVector v(cols);
    v[f] = 1;
    for (std::size_t i = 0; i < red.pivots.size(); ++i) {
      if (red.pivots[i] >= cols) continue;
      auto it = std::lower_bound(prow[i].begin(), prow[i].end(), f,
                                 [](const RatMatrix::Entry& e, std::size_t c) { return e.col < c; });
      if (it != prow[i].end() && it->col == f) v[red.pivots[i]] = -it->value;
    }
    gens.push_back(std::move(v));
  }
  return SubspaceBasis::from_generators(cols, gens);
}

}  // namespace

RrefResult rref_bareiss(const RatMatrix& m) {
  const std::size_t n = m.rows(), c = m.cols();
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(c));
  for (std::size_t i = 0; i < n; ++i)
    for (auto& e : integer_row(m.row_entries(i))) a[i][e.first] = e.second;

  mpz_class prev = 1;
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  mpz_class t;
  for (std::size_t col = 0; col < c && r < n; ++col) {
    std::size_t p = r;
    while (p < n && sgn(a[p][col]) == 0) ++p;
    if (p == n) continue;
    std::swap(a[p], a[r]);
    const mpz_class pivot = a[r][col];
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r) continue;
      const mpz_class factor = a[i][col];
      for (std::size_t j = 0; j < c; ++j) {
        t = pivot * a[i][j] - factor * a[r][j];
        if (!mpz_divisible_p(t.get_mpz_t(), prev.get_mpz_t()))
          throw std::logic_error("rref_bareiss: inexact division");
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = pivot;
    pivots.push_back(col);
    ++r;
  }

  std::vector<IntRow> rows;
  for (std::size_t i = 0; i < r; ++i) {
    IntRow row;
    for (std::size_t j = pivots[i]; j < c; ++j)
      if (sgn(a[i][j]) != 0) row.emplace_back(j, a[i][j]);
    rows.push_back(std::move(row));
  }
  auto res = assemble_result(n, c, rows);
  res.reduced = res.reduced.with_storage(m.storage());
  return res;
}

RrefResult rref_sparse(const RatMatrix& m) {
  const std::size_t n = m.rows(), c = m.cols();
  std::map<std::size_t, IntRow> pivot_rows;  // keyed by leading column

  for (std::size_t i = 0; i < n; ++i) {
    IntRow row = integer_row(m.row_entries(i));
    make_primitive(row);
    while (!row.empty()) {
      auto it = pivot_rows.find(row.front().first);
      if (it == pivot_rows.end()) break;
      const IntRow& p = it->second;
      row = combine(p.front().second, row, row.front().second, p);
      make_primitive(row);
    }
    if (!row.empty()) pivot_rows.emplace(row.front().first, std::move(row));
  }

  // Back substitution, highest pivot column first.
  for (auto pit = pivot_rows.rbegin(); pit != pivot_rows.rend(); ++pit) {
    const std::size_t col = pit->first;
    const IntRow& p = pit->second;
    for (auto& [lead, row] : pivot_rows) {
      if (lead >= col) break;
      const mpz_class* v = entry_at(row, col);
      if (!v) continue;
      mpz_class factor = *v;
      row = combine(p.front().second, row, factor, p);
      make_primitive(row);
    }
  }

  std::vector<IntRow> rows;
  rows.reserve(pivot_rows.size());
  for (auto& [lead, row] : pivot_rows) rows.push_back(std::move(row));
  auto res = assemble_result(n, c, rows);
  res.reduced = res.reduced.with_storage(m.storage());
  return res;
}

RrefResult rref(const RatMatrix& m) {
  return m.is_sparse() ? rref_sparse(m) : rref_bareiss(m);
}

std::size_t rank(const RatMatrix& m) { return rref(m).rank(); }

SubspaceBasis nullspace(const RatMatrix& m) { return nullspace_from_rref(rref(m), m.cols()); }

AffineSolution affine_solve(const RatMatrix& m, const RatVector& b) {
  if (b.size() != m.rows()) throw DimensionError("affine_solve: rhs length mismatch");
  const std::size_t c = m.cols();
  std::vector<RatMatrix::Triplet> trip;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (auto& e : m.row_entries(i)) trip.push_back({i, e.col, e.value});
    if (sgn(b[i]) != 0) trip.push_back({i, c, b[i]});
  }
  auto aug = RatMatrix::from_triplets(m.rows(), c + 1, std::move(trip));
  auto red = rref(aug);

  AffineSolution sol;
  sol.directions = nullspace_from_rref(red, c);
  if (!red.pivots.empty() && red.pivots.back() == c) return sol;
  RatVector x(c);
  for (std::size_t i = 0; i < red.pivots.size(); ++i) x[red.pivots[i]] = red.reduced.at(i, c);
  sol.particular = std::move(x);
  return sol;
}

}  // namespace bergerkit
