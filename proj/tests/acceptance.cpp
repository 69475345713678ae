// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bergerkit/catalog.hpp"
#include "bergerkit/curvature.hpp"
#include "bergerkit/decorated.hpp"
#include "bergerkit/errors.hpp"
#include "bergerkit/metric.hpp"
#include "bergerkit/modules.hpp"
#include "bergerkit/structure.hpp"
#include "support/naive_curvature.hpp"

using namespace bergerkit;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

Rational small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  return make_rational(num(rng), den(rng));
}

RatMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, small_rational(rng));
  return m;
}

RatMatrix random_skew(std::mt19937_64& rng, std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto v = small_rational(rng);
      m.set(i, j, v);
      m.set(j, i, -v);
    }
  return m;
}

// m <= 3, r + s <= 3
DecoratedFrame random_frame(std::mt19937_64& rng) {
  DecoratedFrame f;
  f.m = 1 + rng() % 3;
  std::size_t k = rng() % 4;
  for (std::size_t a = 0; a < k; ++a) f.e_signs.push_back((rng() & 1) ? 1 : -1);
  return f;
}

DecoratedElement random_element(std::mt19937_64& rng, const DecoratedFrame& f) {
  return {random_matrix(rng, f.m, f.m), f.E() * random_skew(rng, f.k()), random_matrix(rng, f.k(), f.m),
          random_skew(rng, f.m)};
}

void criterion1(Outcome& o) {
  const std::size_t want[] = {1, 6, 20};
  for (std::size_t n = 2; n <= 4; ++n) {
    auto d = curvature_space(catalog("so:" + std::to_string(n))).dim();
    o.require(d == want[n - 2], "dim R(so(" + std::to_string(n) + ")) = " + std::to_string(d));
    o.require(naive::curvature_dim_so(n) == d, "dense solver disagrees at n = " + std::to_string(n));
    o.require(d == n * n * (n * n - 1) / 12, "classical count at n = " + std::to_string(n));
  }
  o.detail << (o.pass ? "dims 1, 6, 20" : "");
}

void criterion2(Outcome& o) {
  for (int n = 2; n <= 3; ++n) {
    auto s = std::to_string(n);
    o.require(einstein_space(catalog("sl:" + s + ":R@so(" + s + "," + s + ")")).empty(), "R1(sl(" + s + ")) non-empty");
    o.require(!einstein_space(catalog("gl:" + s + ":R@so(" + s + "," + s + ")")).empty(), "R1(gl(" + s + ")) empty");
  }
  o.detail << (o.pass ? "sl(2), sl(3) Ricci-flat; gl(2), gl(3) admit Ric = g" : "");
}

std::vector<std::string> einstein_sublist() {
  std::vector<std::string> ids;
  for (int p = 0; p <= 5; ++p)
    for (int q = 0; p + q <= 5; ++q)
      if (p + q >= 2) ids.push_back("so:" + std::to_string(p) + "," + std::to_string(q));
  ids.insert(ids.end(), {"u:1", "u:2", "u:1,1", "u:0,2", "gl:1:R@so(1,1)", "gl:2:R@so(2,2)", "gl:1:C@so(2,2)"});
  return ids;
}

void criterion3(Outcome& o) {
  std::size_t yes = 0, no = 0;
  for (auto& id : einstein_sublist()) {
    o.require(is_einstein_berger(catalog(id)), id + " not Einstein-Berger");
    ++yes;
  }
  for (auto& id : {"su:1", "su:2", "su:3", "sl:1:R@so(1,1)", "sl:2:R@so(2,2)", "sl:3:R@so(3,3)"}) {
    auto g = catalog(id);
    o.require(!is_einstein_berger(g), std::string(id) + " Einstein-Berger");
    o.require(einstein_space(g).empty(), std::string(id) + " has R1 non-empty");
    ++no;
  }
  if (o.pass) o.detail << yes << " positive, " << no << " negative";
}

void criterion4(Outcome& o) {
  std::size_t count = 0;
  for (auto& id : einstein_sublist()) {
    auto g = catalog(id);
    auto z = centralizer(g, orthogonal_algebra(g.metric()));
    o.require(contains(g.span(), z), "centralizer of " + id + " leaves g");
    ++count;
  }
  if (o.pass) o.detail << count << " algebras";
}

void criterion5(Outcome& o) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    auto f = random_frame(rng);
    auto E = f.E();
    auto u = random_element(rng, f), v = random_element(rng, f);
    const std::size_t m = f.m, k = f.k();
    RatMatrix zx(k, m), zc(m, m), zb(m, m), za(k, k);
    DecoratedElement a1{u.B, u.A, zx, zc}, a2{v.B, v.A, zx, zc};
    DecoratedElement e1{commutator(u.B, v.B), commutator(u.A, v.A), zx, zc};
    o.require(bracket(assemble(a1, f), assemble(a2, f)) == assemble(e1, f), "[(B,A),(B,A)] formula");
    DecoratedElement n2{zb, za, v.X, v.C};
    DecoratedElement e2{zb, za, u.A * v.X + v.X * u.B.transpose(), u.B * v.C + v.C * u.B.transpose()};
    o.require(bracket(assemble(a1, f), assemble(n2, f)) == assemble(e2, f), "[(B,A),(X,C)] formula");
    DecoratedElement x{zb, za, u.X, zc}, y{zb, za, v.X, zc};
    DecoratedElement e3{zb, za, zx, -(u.X.transpose() * E * v.X) + v.X.transpose() * E * u.X};
    o.require(bracket(assemble(x, f), assemble(y, f)) == assemble(e3, f), "[X,Y] formula");
    if (!o.pass) return;
  }
  for (int t = 0; t < 100; ++t) {
    auto f = random_frame(rng);
    auto a = assemble(random_element(rng, f), f);
    auto b = assemble(random_element(rng, f), f);
    auto c = assemble(random_element(rng, f), f);
    o.require((bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))).is_zero(),
              "Jacobi");
    if (!o.pass) return;
  }
  o.detail << "100 bracket pairs, 100 Jacobi triples";
}

void criterion6(Outcome& o) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    auto f = random_frame(rng);
    auto xi = DecoratedElement::zero(f.m, f.k());
    xi.B = RatMatrix::identity(f.m);
    xi.X = random_matrix(rng, f.k(), f.m);
    xi.C = random_skew(rng, f.m);
    auto data = cleaning_rebase(xi, f);
    auto [space, basis] = standard_witt(f.m, f.e_signs);
    auto nb = witt_rebase(basis, space, data);
    o.require(verify_witt(nb, space), "rebased basis is not Witt");
    o.require(nb.vectors.transpose() * space.gram() * nb.vectors == space.gram(), "Gram changed");
    auto clean = decorated_project(rebase_conjugate(assemble(xi, f), data, f), f);
    o.require(clean.X.is_zero() && clean.C.is_zero(), "X or C block survives");
    o.require(clean.B == RatMatrix::identity(f.m) && clean.A.is_zero(), "B or A block changed");
    if (!o.pass) return;
  }
  o.detail << "100 random (X, C)";
}

Json load_fixture(const std::string& name) {
  std::ifstream in(std::string(BERGERKIT_FIXTURES_DIR) + "/" + name);
  if (!in) throw PreconditionError("missing fixture " + name);
  return Json::parse(in);
}

void criterion7(Outcome& o) {
  auto n0 = enumerate_index2(0, {});
  std::vector<int> fams;
  for (auto& i : n0) fams.push_back(i.family);
  std::sort(fams.begin(), fams.end());
  o.require(fams == std::vector<int>{6, 7}, "n = 0 does not give exactly families 6, 7");

  for (auto& c : load_fixture("expected/index2_counts.json")) {
    std::vector<std::string> factors = c["factors"];
    auto inst = enumerate_index2(c["n"].get<std::size_t>(), factors);
    std::map<std::string, int> got;
    for (auto& i : inst) got[std::to_string(i.family)]++;
    std::map<std::string, int> want = c["counts"];
    o.require(got == want, "counts differ for n = " + c["n"].dump() + " " + c["factors"].dump());
  }

  std::size_t checked = 0;
  std::optional<StructuredAlgebraSpec> control;
  for (auto& i : enumerate_index2(2, {"so:2"})) {
    MatrixLieAlgebra g;
    try {
      g = assemble(i.spec);
    } catch (const ClosureError& e) {
      o.require(false, i.label + " does not close: " + e.what());
      continue;
    }
    o.require(is_weakly_irreducible(g) == Verdict::yes, i.label + " not weakly irreducible");
    ++checked;
    if (!control) control = i.spec;
  }
  for (auto& i : enumerate_index2(0, {})) {
    o.require(is_weakly_irreducible(assemble(i.spec)) == Verdict::yes, i.label + " not weakly irreducible");
    ++checked;
  }
  if (control) {
    control->n_blocks.clear();
    control->c_blocks.clear();
    o.require(is_weakly_irreducible(assemble(*control)) == Verdict::no, "no-N-no-C control is weakly irreducible");
  }
  if (o.pass) o.detail << checked << " instances closed and weakly irreducible; degenerate control reducible";
}

Expr xy(const std::string& s) { return parse_expr(s, {"x", "y"}); }

void criterion8(Outcome& o) {
  auto s2 = unit_sphere_stereographic();
  auto H0 = harmonic_library("sphere2").front();
  auto chart = build_example1(s2, xy(H0), 1.0);
  auto pts = sample_points(chart.domain(), 20, 7);
  auto ec = einstein_check(chart, 1.0, pts, 1e-8);
  o.require(ec.pass, "Einstein residual " + std::to_string(ec.max_residual));
  auto base = chart.domain().center();
  auto h = holonomy_estimate(chart, base);
  o.require(h.dimension == 4, "holonomy dimension " + std::to_string(h.dimension));
  o.require(h.gap >= 1e3, "gap " + std::to_string(h.gap));
  auto control = build_example1(s2, Expr(0.0), 1.0);
  auto hc = holonomy_estimate(control, control.domain().center());
  o.require(hc.dimension == 2, "control dimension " + std::to_string(hc.dimension));
  char buf[160];
  std::snprintf(buf, sizeof buf, "H0 = %s, residual %.2e, dim %zu, gap %.2e, control dim %zu", H0.c_str(),
                ec.max_residual, h.dimension, h.gap, hc.dimension);
  o.detail << (o.pass ? buf : "");
}

void criterion9(Outcome& o) {
  auto flat = flat_chart(2);
  auto f4 = build_index2_metric(4, Index2Ingredients{flat, 0.0, xy("x^2 - y^2"), xy("x*y"), Expr(0.0)});
  auto f5 = build_index2_metric(5, Index2Ingredients{flat, 0.0, xy("x^2 - y^2"), xy("x*y + (x^4 - y^4)/6"), Expr(0.0)});
  auto e4 = einstein_check(f4, 0.0, sample_points(f4.domain(), 20, 7), 1e-8);
  auto e5 = einstein_check(f5, 0.0, sample_points(f5.domain(), 20, 7), 1e-8);
  o.require(e4.pass, "family 4 residual " + std::to_string(e4.max_residual));
  o.require(e5.pass, "family 5 residual " + std::to_string(e5.max_residual));
  auto h4 = holonomy_estimate(f4, f4.domain().center());
  auto h5 = holonomy_estimate(f5, f5.domain().center());
  o.require(h5.dimension >= h4.dimension + 1,
            "dims " + std::to_string(h4.dimension) + " and " + std::to_string(h5.dimension));
  char buf[160];
  std::snprintf(buf, sizeof buf, "residuals %.2e / %.2e, dim family 4 = %zu, family 5 = %zu", e4.max_residual,
                e5.max_residual, h4.dimension, h5.dimension);
  o.detail << (o.pass ? buf : "");
}

void criterion10(Outcome& o) {
  auto s2 = unit_sphere_stereographic();
  double bianchi = 0, ric = 0, tensor = 0;
  for (auto& x : sample_points(s2.domain(), 20, 3)) {
    auto R = curvature_at(s2, x);
    bianchi = std::max(bianchi, R.bianchi_residual());
    auto g = s2.metric_at(x);
    ric = std::max(ric, (ricci_at(s2, x) - g).cwiseAbs().maxCoeff());
    // R(d_c, d_d) d_b = g_db d_c - g_cb d_d
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t c = 0; c < 2; ++c)
          for (std::size_t d = 0; d < 2; ++d) {
            double want = (a == c ? g(d, b) : 0.0) - (a == d ? g(c, b) : 0.0);
            tensor = std::max(tensor, std::abs(R(a, b, c, d) - want));
          }
  }
  o.require(bianchi <= 1e-9, "Bianchi residual " + std::to_string(bianchi));
  o.require(ric <= 1e-8, "Ric - g residual " + std::to_string(ric));
  o.require(tensor <= 1e-8, "not the constant-curvature tensor");
  // exact side: the constant-curvature tensor of so(2) has Ric = (n - 1) g = g
  auto so2 = catalog("so:2");
  o.require(ricci(so2, constant_curvature_tensor(so2)) == so2.metric().gram(), "exact Ric(R_const) != g");
  char buf[160];
  std::snprintf(buf, sizeof buf, "Bianchi %.2e, |Ric - g| %.2e, |R - R_const| %.2e", bianchi, ric, tensor);
  o.detail << (o.pass ? buf : "");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"curvature-space dimensions", criterion1},
      {"Ricci-flat criterion for sl(n) and gl(n)", criterion2},
      {"Einstein-list spot checks", criterion3},
      {"centralizers lie in g", criterion4},
      {"decorated bracket table and Jacobi", criterion5},
      {"Witt rebase", criterion6},
      {"index-2 enumeration", criterion7},
      {"Lorentzian sphere-wave metric", criterion8},
      {"families 4 and 5 metrics", criterion9},
      {"numerical and exact curvature agree", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu: %s (%.1fs) %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                secs, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed ? 1 : 0;
}
