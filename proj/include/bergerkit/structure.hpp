#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bergerkit/decorated.hpp"
#include "bergerkit/lie_algebra.hpp"
#include "bergerkit/modules.hpp"
#include "bergerkit/serialize.hpp"

namespace bergerkit {

// Block data of an algebra f + h + N + C inside so(m+r, m+s)_{R^m}, written in
// a Witt basis p, e, q whose isotropic part splits as V_1 + ... + V_k and
// whose middle part splits as L_1 + ... + L_t.
//   f[i]          subalgebra of gl(V_i)
//   f_off[(i,j)]  i < j, subspace of m_i x m_j matrices (block (i,j) of B)
//   h[a]          subalgebra of so(L_a); its metric fixes the signs of L_a
//   n_blocks[(i,a)] subspace of k_a x m_i matrices (block (a,i) of X)
//   c_blocks[(i,j)] i <= j, subspace of m_i x m_j matrices (block (i,j) of C;
//                 skew when i == j)
// Missing map entries are zero.
struct StructuredAlgebraSpec {
  using Key = std::pair<std::size_t, std::size_t>;

  std::string name = "g";
  std::vector<std::size_t> v_dims;
  std::vector<MatrixLieAlgebra> f;
  std::vector<MatrixLieAlgebra> h;
  std::map<Key, SubspaceBasis> f_off;
  std::map<Key, SubspaceBasis> n_blocks;
  std::map<Key, SubspaceBasis> c_blocks;

  std::size_t m() const;
  std::size_t k() const;
  std::size_t v_offset(std::size_t i) const;
  std::size_t l_offset(std::size_t a) const;
  std::size_t l_dim(std::size_t a) const { return h[a].ambient_dim(); }
  DecoratedFrame frame() const;
  SplitSignature split() const;
};

// Shapes, skewness and metric signs; throws DimensionError/PreconditionError.
void check_shapes(const StructuredAlgebraSpec& spec);

// Conditions of the structure theorem that the spec does not meet: f_i
// irreducible, h_a weakly irreducible, N_{i*} != 0 for each i, and the
// submodule/bracket inclusions. Empty when all hold.
std::vector<std::string> theorem_violations(const StructuredAlgebraSpec& spec);

// Throws ClosureError naming the first failing inclusion, e.g.
// "[N_1,1, N_2,1] has a component outside C_1,2", with the witness bracket.
MatrixLieAlgebra assemble(const StructuredAlgebraSpec& spec);

struct BlockProjection {
  SubspaceBasis gl_part;    // B blocks, m x m flattened
  SubspaceBasis so_part;    // A blocks, k x k flattened
  SubspaceBasis n_part;     // g intersected with the X-directions, N x N flattened
  SubspaceBasis c_part;     // g intersected with the C-directions
  SubspaceBasis nc_part;    // g intersected with the X- and C-directions
};

BlockProjection project_blocks(const MatrixLieAlgebra& g, const DecoratedFrame& frame);

// Subspaces the spec prescribes for the same projections.
BlockProjection expected_blocks(const StructuredAlgebraSpec& spec);

struct Index2Instance {
  int family = 0;
  std::string label;
  StructuredAlgebraSpec spec;
};

// Instances of the index-2 families for signature (2, n+2) with Riemannian
// holonomy factors given by catalog ids (so:n, u:n). Throws PreconditionError
// for invalid factor lists.
std::vector<Index2Instance> enumerate_index2(std::size_t n, const std::vector<std::string>& factors);

struct CandidateReport {
  std::string name;
  bool assembled = false;
  std::string closure_error;
  std::size_t dim = 0;
  std::vector<std::string> violations;
  bool R1_nonempty = false;
  bool LR1_equals_g = false;
  Verdict weakly_irreducible = Verdict::inconclusive;
  std::string weak_reason;
  bool projection_decomposes = false;
  bool all_hold() const {
    return assembled && violations.empty() && R1_nonempty && LR1_equals_g && weakly_irreducible == Verdict::yes &&
           projection_decomposes;
  }
};

CandidateReport validate_einstein_candidate(const StructuredAlgebraSpec& spec);

Json spec_to_json(const StructuredAlgebraSpec& spec);
StructuredAlgebraSpec spec_from_json(const Json& j);
Json candidate_to_json(const CandidateReport& r);

}  // namespace bergerkit
