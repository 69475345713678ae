#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bergerkit/quadratic_space.hpp"
#include "bergerkit/rat_matrix.hpp"
#include "bergerkit/subspace.hpp"

namespace bergerkit {

// A Lie subalgebra of gl(N, Q) given by a rational basis. Matrices are
// identified with vectors of length N^2 through row-major flattening.
class MatrixLieAlgebra {
 public:
  struct Options {
    bool check_closure = true;
  };

  MatrixLieAlgebra() = default;
  // Throws DimensionError on shape mismatch, PreconditionError on dependent
  // basis, ClosureError (naming a failing pair) when not closed, and
  // MembershipError when a basis element is not skew for the metric.
  MatrixLieAlgebra(std::string name, std::size_t ambient_dim, std::vector<RatMatrix> basis,
                   std::optional<QuadraticSpace> metric = std::nullopt);
  MatrixLieAlgebra(std::string name, std::size_t ambient_dim, std::vector<RatMatrix> basis,
                   std::optional<QuadraticSpace> metric, Options options);

  // Basis read off a subspace of Q^{N^2}.
  static MatrixLieAlgebra from_span(std::string name, std::size_t ambient_dim, const SubspaceBasis& span,
                                    std::optional<QuadraticSpace> metric = std::nullopt);

  const std::string& name() const { return name_; }
  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<RatMatrix>& basis() const { return basis_; }
  const RatMatrix& basis(std::size_t i) const { return basis_[i]; }
  bool has_metric() const { return metric_.has_value(); }
  const QuadraticSpace& metric() const;
  const std::optional<QuadraticSpace>& metric_opt() const { return metric_; }
  // Span in Q^{N^2}, canonical form.
  const SubspaceBasis& span() const { return span_; }

  bool contains(const RatMatrix& x) const;
  // Coefficients of x against basis(); empty if x is not in the algebra.
  std::optional<RatVector> coordinates(const RatMatrix& x) const;
  RatMatrix element(const RatVector& coeffs) const;

  MatrixLieAlgebra renamed(std::string name) const;

 private:
  void validate(bool check_closure);

  std::string name_;
  std::size_t n_ = 0;
  std::vector<RatMatrix> basis_;
  std::optional<QuadraticSpace> metric_;
  SubspaceBasis span_;
  RatMatrix to_basis_;  // rows: span_ coordinates -> basis coefficients
};

RatMatrix bracket(const RatMatrix& a, const RatMatrix& b);

// a^t G + G a == 0.
bool is_skew(const RatMatrix& a, const RatMatrix& gram);

// so(V, G) for an arbitrary nondegenerate symmetric Gram matrix.
MatrixLieAlgebra orthogonal_algebra(const QuadraticSpace& space, std::string name = "so");

// {x in ambient : [x, b] = 0 for every basis element b of g}, flattened.
SubspaceBasis centralizer(const MatrixLieAlgebra& g, const MatrixLieAlgebra& ambient);

// Smallest subspace of g containing seed (flattened) and stable under ad(g).
SubspaceBasis generated_ideal(const MatrixLieAlgebra& g, const SubspaceBasis& seed);

// True iff b v lies in candidate for every basis element b and generator v.
bool invariant_subspace_probe(const MatrixLieAlgebra& g, const SubspaceBasis& candidate);

// Flattened span of a list of matrices.
SubspaceBasis matrix_span(std::size_t ambient_dim, const std::vector<RatMatrix>& mats);

}  // namespace bergerkit
