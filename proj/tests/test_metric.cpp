#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "bergerkit/catalog.hpp"
#include "bergerkit/errors.hpp"
#include "bergerkit/metric.hpp"
#include "bergerkit/structure.hpp"
#include "support/naive_metric.hpp"

using namespace bergerkit;

namespace {

const std::vector<std::string> XY{"x", "y"};

Expr ex(const std::string& s, const std::vector<std::string>& names = XY) { return parse_expr(s, names); }

Point pt(std::initializer_list<double> v) {
  Point p(v.size());
  std::size_t i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

MetricChart example1(const std::string& H0 = "x^2 - y^2") { return build_example1(unit_sphere_stereographic(), ex(H0), 1.0); }

// {A in so(g) : A e_0 in R e_0}, the stabilizer of the null line d_v.
std::vector<Eigen::MatrixXd> null_line_stabilizer(const Eigen::MatrixXd& G) {
  const Eigen::Index n = G.rows();
  Eigen::MatrixXd Ginv = G.inverse();
  std::vector<Eigen::MatrixXd> so;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
      e(i, j) = 1;
      e(j, i) = -1;
      so.push_back(Ginv * e);
    }
  Eigen::MatrixXd C(n - 1, so.size());
  for (std::size_t k = 0; k < so.size(); ++k) C.col(k) = so[k].col(0).tail(n - 1);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
  Eigen::MatrixXd ker = lu.kernel();
  std::vector<Eigen::MatrixXd> out;
  for (Eigen::Index c = 0; c < ker.cols(); ++c) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < so.size(); ++k) a += ker(k, c) * so[k];
    out.push_back(a);
  }
  return out;
}

}  // namespace

TEST_CASE("expressions: parsing, evaluation, printing") {
  auto e = ex("2*x^2 - 3*x*y + sin(y)/(1 + x^2) + exp(0) - pi");
  std::vector<double> at{0.5, -1.25};
  double want = 2 * 0.25 + 3 * 0.5 * 1.25 + std::sin(-1.25) / 1.25 + 1 - std::numbers::pi;
  CHECK(e.eval(at) == doctest::Approx(want).epsilon(1e-14));
  CHECK(ex("-x^2").eval(at) == doctest::Approx(-0.25));
  CHECK(ex("2^3^2").eval(at) == doctest::Approx(512));
  CHECK(ex("sqrt(4*x)").eval(at) == doctest::Approx(std::sqrt(2.0)));
  auto back = parse_expr(e.to_string(XY), XY);
  CHECK(back.eval(at) == doctest::Approx(want).epsilon(1e-14));
  CHECK(ex("3 + 4").is_constant());
  CHECK(ex("x*0").is_zero());
  CHECK(ex("x*y").arity() == 2);
  CHECK_THROWS_AS(ex("x + z"), PreconditionError);
  CHECK_THROWS_AS(ex("x +"), PreconditionError);
  CHECK_THROWS_AS(ex("(x"), PreconditionError);
  CHECK_THROWS_AS(ex("foo(x)"), PreconditionError);
  CHECK_THROWS_AS(ex("x y"), PreconditionError);
}

TEST_CASE("expressions: symbolic derivatives match finite differences") {
  std::vector<std::string> funcs{"x^3*y - 2*y^2", "sin(x*y) + cos(x)^2", "exp(x - y)/(1 + x^2 + y^2)^2",
                                 "log(2 + x^2)*y", "x^y", "sqrt(1 + x^2*y^2)"};
  const double h = 1e-4;
  for (auto& s : funcs) {
    CAPTURE(s);
    auto f = ex(s);
    for (std::vector<double> p : {std::vector<double>{0.3, 0.7}, std::vector<double>{1.1, -0.4}}) {
      if (s == "x^y" && p[0] < 0) continue;
      for (std::size_t i = 0; i < 2; ++i) {
        auto q = p, r = p;
        q[i] += h;
        r[i] -= h;
        double fd = (f.eval(q) - f.eval(r)) / (2 * h);
        CHECK(f.derivative(i).eval(p) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("expressions: substitution and renumbering") {
  auto f = ex("x^2 + y");
  auto g = f.substitute({ex("x + y"), ex("2")});
  std::vector<double> p{1.0, 2.0};
  CHECK(g.eval(p) == doctest::Approx(11));
  auto r = f.remap({2, 0});
  std::vector<double> q{5.0, 0.0, 3.0};
  CHECK(r.eval(q) == doctest::Approx(14));
  CHECK(r.arity() == 3);
}

TEST_CASE("charts: validation") {
  auto sym_fail = [] {
    return MetricChart("bad", XY, {ex("1"), ex("x"), ex("0"), ex("1")}, {{-1, -1}, {1, 1}});
  };
  CHECK_THROWS_AS(sym_fail(), PreconditionError);
  auto degenerate = [] { return MetricChart("bad", XY, {ex("x"), ex("0"), ex("0"), ex("1")}, {{-1, -1}, {1, 1}}); };
  CHECK_THROWS_AS(degenerate(), PreconditionError);
  auto sig_change = [] { return MetricChart("bad", XY, {ex("1"), ex("0"), ex("0"), ex("x - 0.5")}, {{-1, -1}, {1, 1}}); };
  CHECK_THROWS_AS(sig_change(), PreconditionError);
  CHECK_THROWS_AS(MetricChart("bad", XY, {ex("1")}, {{-1, -1}, {1, 1}}), DimensionError);
  CHECK_THROWS_AS(MetricChart("bad", {"x", "x"}, {1.0, 0.0, 0.0, 1.0}, {{-1, -1}, {1, 1}}), PreconditionError);
  CHECK(unit_sphere_stereographic().signature() == Signature{2, 0});
  CHECK(example1().signature() == Signature{3, 1});
  CHECK(pp_wave_2d(1.0).signature() == Signature{1, 1});
}

TEST_CASE("Levi-Civita data: flat and classical values") {
  auto flat = flat_chart(3);
  auto x = pt({0.1, 0.2, -0.3});
  auto gam = christoffel(flat, x);
  CHECK(*std::max_element(gam.data.begin(), gam.data.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }) == 0.0);
  auto R = curvature_at(flat, x);
  for (double v : R.data) CHECK(v == 0.0);

  auto s2 = unit_sphere_stereographic();
  for (auto& p : sample_points(s2.domain(), 10, 11)) CHECK(max_abs(ricci_at(s2, p) - s2.metric_at(p)) < 1e-12);
  auto polar = unit_sphere_polar();
  auto p = pt({1.0, 0.5});
  CHECK(christoffel(polar, p)(0, 1, 1) == doctest::Approx(-std::sin(1.0) * std::cos(1.0)));
  CHECK(christoffel(polar, p)(1, 0, 1) == doctest::Approx(std::cos(1.0) / std::sin(1.0)));
  CHECK(max_abs(ricci_at(polar, p) - polar.metric_at(p)) < 1e-12);
  // R(X, Y)Z = g(Y, Z)X - g(X, Z)Y: R^theta_{phi theta phi} = g_phiphi
  CHECK(curvature_at(polar, p)(0, 1, 0, 1) == doctest::Approx(std::sin(1.0) * std::sin(1.0)));

  for (double L : {1.0, -2.0}) {
    auto pp = pp_wave_2d(L);
    auto q = pt({0.3, -0.2});
    CHECK(max_abs(ricci_at(pp, q) - L * pp.metric_at(q)) < 1e-12);
    auto Rq = curvature_at(pp, q);
    // the only independent component is R(d_v, d_u)
    CHECK(max_abs(Rq.endomorphism(0, 1)) > 0.1);
    CHECK(max_abs(Rq.endomorphism(0, 1) + Rq.endomorphism(1, 0)) == 0.0);
  }
  CHECK_THROWS_AS(christoffel(flat_chart(2), pt({0.0, 0.0, 0.0})), DimensionError);
}

TEST_CASE("Levi-Civita data: symbolic values agree with finite differences") {
  std::vector<MetricChart> charts{unit_sphere_stereographic(), example1(),
                                  MetricChart("warped", XY, {ex("exp(x*y)"), ex("x/3"), ex("x/3"), ex("2 + sin(y)")},
                                              {{-0.5, -0.5}, {0.5, 0.5}})};
  for (auto& chart : charts) {
    CAPTURE(chart.name());
    const std::size_t n = chart.dim();
    for (auto& x : sample_points(chart.domain(), 3, 5, 0.2)) {
      auto gam = christoffel(chart, x);
      auto ref = naive::christoffel(chart, x);
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) CHECK(std::abs(gam(c, a, b) - ref[c](a, b)) < 1e-6);
      auto R = curvature_at(chart, x);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t c = 0; c < n; ++c)
            for (std::size_t d = c + 1; d < n; ++d) CHECK(std::abs(R(a, b, c, d) - naive::riemann(chart, x, a, b, c, d)) < 1e-6);
    }
  }
}

TEST_CASE("Levi-Civita data: Bianchi identity and skewness") {
  for (auto& chart : {unit_sphere_stereographic(), example1(), build_index2_metric(5, Index2Ingredients{flat_chart(2), 0.0, ex("x^2 - y^2"), ex("x*y + (x^4 - y^4)/6"), 0.0})}) {
    CAPTURE(chart.name());
    for (auto& x : sample_points(chart.domain(), 10, 2)) {
      auto R = curvature_at(chart, x);
      CHECK(R.bianchi_residual() < 1e-9);
      Eigen::MatrixXd G = chart.metric_at(x);
      for (std::size_t c = 0; c < chart.dim(); ++c)
        for (std::size_t d = 0; d < chart.dim(); ++d) {
          Eigen::MatrixXd GR = G * R.endomorphism(c, d);
          CHECK(max_abs(GR + GR.transpose()) < 1e-9);
        }
    }
  }
}

TEST_CASE("einstein_check and laplace_check") {
  auto flat = flat_chart(2);
  auto s2 = unit_sphere_stereographic();
  auto fs = sample_points(flat.domain(), 20, 1), ss = sample_points(s2.domain(), 20, 1);
  CHECK(einstein_check(flat, 0.0, fs, 1e-8).pass);
  CHECK(einstein_check(s2, 1.0, ss, 1e-8).pass);
  auto bad = einstein_check(s2, 2.0, ss, 1e-8);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_residual > 0.1);
  CHECK(bad.residuals.size() == 20);
  CHECK(bad.residuals[bad.worst] == bad.max_residual);

  CHECK(laplace_check(flat, 3.0, fs, 1e-10).pass);
  CHECK(laplace_check(flat, ex("x^2 - y^2"), fs, 1e-10).pass);
  auto lx = laplace_check(flat, ex("x^2"), fs, 1e-10);
  CHECK_FALSE(lx.pass);
  CHECK(lx.max_residual == doctest::Approx(2.0));
  for (auto& chart : {std::string("flat2"), std::string("sphere2")})
    for (auto& H : harmonic_library(chart)) {
      CAPTURE(H);
      CHECK(laplace_check(chart == "flat2" ? flat : s2, ex(H), chart == "flat2" ? fs : ss, 1e-10).pass);
    }
  CHECK_THROWS_AS(harmonic_library("torus"), PreconditionError);
  // stereographic Laplacian is (1 + r^2)^2 / 4 times the flat one
  auto x = pt({0.3, 0.4});
  CHECK(laplacian_at(s2, ex("x^2 + y^2"), x) == doctest::Approx(std::pow(1.25, 2)));
}

TEST_CASE("build_example1") {
  auto flat = flat_chart(2);
  auto pp = build_example1(flat, ex("x^2 - y^2"), 0.0);
  CHECK(pp.coordinates() == std::vector<std::string>{"v", "x", "y", "u"});
  CHECK(pp.signature() == Signature{3, 1});
  auto x = pt({0.2, 0.5, -0.3, 0.1});
  CHECK(pp.metric_at(x)(3, 3) == doctest::Approx(0.25 - 0.09));
  CHECK(pp.metric_at(x)(0, 3) == 1.0);

  auto e1 = example1();
  CHECK(e1.metric_at(x)(3, 3) == doctest::Approx(0.04 + 0.25 - 0.09));
  CHECK(einstein_check(e1, 1.0, sample_points(e1.domain(), 20, 9), 1e-8).pass);
  auto product = build_example1(unit_sphere_stereographic(), 0.0, 1.0);
  CHECK(einstein_check(product, 1.0, sample_points(product.domain(), 20, 9), 1e-8).pass);

  CHECK_THROWS_AS(build_example1(flat, ex("x^2"), 0.0), PreconditionError);
  CHECK_THROWS_AS(build_example1(unit_sphere_stereographic(), ex("x^2 - y^2"), 2.0), PreconditionError);
  CHECK_THROWS_AS(build_example1(pp_wave_2d(1.0), 0.0, 1.0), PreconditionError);
  auto clash = MetricChart("clash", {"v", "y"}, {1.0, 0.0, 0.0, 1.0}, {{-1, -1}, {1, 1}});
  CHECK_THROWS_AS(build_example1(clash, 0.0, 0.0), PreconditionError);
}

TEST_CASE("build_index2_metric") {
  auto flat = flat_chart(2);
  Index2Ingredients in{flat, 0.0, ex("x^2 - y^2"), ex("x*y"), 0.0};
  auto f4 = build_index2_metric(4, in);
  CHECK(f4.coordinates() == std::vector<std::string>{"v1", "v2", "x", "y", "u1", "u2"});
  CHECK(f4.signature() == Signature{4, 2});
  CHECK(einstein_check(f4, 0.0, sample_points(f4.domain(), 20, 4), 1e-8).pass);
  CHECK_THROWS_AS(build_index2_metric(5, in), PreconditionError);  // Laplace(H2) != 2 H1
  in.H2 = ex("x*y + (x^4 - y^4)/6");
  auto f5 = build_index2_metric(5, in);
  auto x = pt({0.5, 0.1, 0.2, 0.3, 0.0, 0.0});
  CHECK(f5.metric_at(x)(5, 5) - in.H2.eval(std::vector<double>{0.2, 0.3}) == doctest::Approx(0.25));
  CHECK(einstein_check(f5, 0.0, sample_points(f5.domain(), 20, 4), 1e-8).pass);

  Index2Ingredients i2{flat, 0.0, ex("x^2 - y^2"), ex("x*y"), ex("x^3 - 3*x*y^2")};
  for (int fam : {2, 3}) {
    auto c = build_index2_metric(fam, i2);
    CHECK(einstein_check(c, 0.0, sample_points(c.domain(), 20, 4), 1e-8).pass);
  }
  auto s2 = unit_sphere_stereographic();
  Index2Ingredients i3{s2, 1.0, ex("x^2 - y^2"), ex("y^2 - x^2"), ex("x*y")};
  auto f3 = build_index2_metric(3, i3);
  CHECK(einstein_check(f3, 1.0, sample_points(f3.domain(), 20, 4), 1e-8).pass);
  auto f4s = build_index2_metric(4, Index2Ingredients{s2, 1.0, ex("x^2 - y^2"), ex("x*y"), 0.0});
  CHECK(einstein_check(f4s, 1.0, sample_points(f4s.domain(), 20, 4), 1e-8).pass);

  // harmonic H is not enough for family 2 once lambda != 0
  CHECK_THROWS_AS(build_index2_metric(2, Index2Ingredients{s2, 1.0, ex("x^2 - y^2"), 0.0, 0.0}), PreconditionError);
  CHECK_THROWS_AS(build_index2_metric(3, Index2Ingredients{s2, 1.0, ex("x^2 - y^2"), 0.0, 0.0}), PreconditionError);
  CHECK_THROWS_AS(build_index2_metric(5, Index2Ingredients{s2, 1.0, 0.0, 0.0, 0.0}), PreconditionError);
  CHECK_THROWS_AS(build_index2_metric(4, Index2Ingredients{flat, 0.0, 0.0, 0.0, ex("x")}), PreconditionError);
  CHECK_THROWS_AS(build_index2_metric(1, in), PreconditionError);
}

TEST_CASE("build_conclusion_metric reproduces the explicit charts") {
  auto s2 = unit_sphere_stereographic();
  StructuredAlgebraSpec lor;
  lor.v_dims = {1};
  lor.f = {MatrixLieAlgebra("gl(1)", 1, {RatMatrix::identity(1)})};
  lor.h = {catalog("so:2")};
  lor.n_blocks[{0, 0}] = SubspaceBasis::full(2);

  ConclusionIngredients in{1.0, {s2}, {}, {}};
  auto product = build_conclusion_metric(lor, in);
  auto ref0 = build_example1(s2, 0.0, 1.0);
  in.du_du[{0, 0}] = "v^2";
  auto with_f = build_conclusion_metric(lor, in);
  in.du_du[{0, 0}] = "v^2 + x^2 - y^2";
  auto e1 = build_conclusion_metric(lor, in);
  auto ref = example1();
  for (auto& x : sample_points(ref.domain(), 10, 3)) {
    CHECK(max_abs(e1.metric_at(x) - ref.metric_at(x)) < 1e-14);
    CHECK(max_abs(with_f.metric_at(x) - ref0.metric_at(x)) < 1e-14);
    Eigen::MatrixXd g = product.metric_at(x);
    CHECK(g(3, 3) == 0.0);
  }

  StructuredAlgebraSpec f4;
  f4.v_dims = {1, 1};
  f4.f = {lor.f[0], lor.f[0]};
  f4.h = {catalog("so:2")};
  f4.n_blocks[{0, 0}] = SubspaceBasis::full(2);
  f4.n_blocks[{1, 0}] = SubspaceBasis::full(2);
  f4.c_blocks[{0, 1}] = SubspaceBasis::full(1);
  auto flat = flat_chart(2);
  ConclusionIngredients in4{0.0, {flat}, {{{0, 0}, "x^2 - y^2"}, {{1, 1}, "x*y"}}, {}};
  auto c4 = build_conclusion_metric(f4, in4);
  auto r4 = build_index2_metric(4, Index2Ingredients{flat, 0.0, ex("x^2 - y^2"), ex("x*y"), 0.0});
  for (auto& x : sample_points(r4.domain(), 10, 3)) CHECK(max_abs(c4.metric_at(x) - r4.metric_at(x)) < 1e-14);

  ConclusionIngredients wrong{2.0, {s2}, {}, {}};
  CHECK_THROWS_AS(build_conclusion_metric(lor, wrong), PreconditionError);
  ConclusionIngredients dims{0.0, {flat_chart(3)}, {}, {}};
  CHECK_THROWS_AS(build_conclusion_metric(lor, dims), DimensionError);
}

TEST_CASE("parallel transport") {
  auto flat = flat_chart(2);
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  auto loop = polyline({pt({0, 0}), pt({1, 0}), pt({1, 1}), pt({0, 0})});
  CHECK(max_abs(parallel_transport(flat, loop, I).frame - I) < 1e-14);

  auto polar = unit_sphere_polar();
  for (double theta : {0.3, 1.0, std::numbers::pi / 2, 2.2}) {
    CAPTURE(theta);
    Path circle{{[=](double t) { return pt({theta, 2 * std::numbers::pi * t}); },
                 [=](double) { return pt({0.0, 2 * std::numbers::pi}); }}};
    auto r = parallel_transport(polar, circle, I);
    CHECK(r.drift <= 1e-10);
    // orthonormal frame e_theta, e_phi / sin(theta)
    Eigen::MatrixXd D = Eigen::Vector2d(1.0, std::sin(theta)).asDiagonal();
    Eigen::MatrixXd rot = D * r.frame * D.inverse();
    double alpha = 2 * std::numbers::pi * (1 - std::cos(theta));
    CHECK(rot(0, 0) == doctest::Approx(std::cos(alpha)).epsilon(1e-8));
    CHECK(std::abs(rot(1, 0)) == doctest::Approx(std::abs(std::sin(alpha))).epsilon(1e-8));
    CHECK(rot(1, 1) == doctest::Approx(std::cos(alpha)).epsilon(1e-8));
  }

  auto e1 = example1();
  Eigen::MatrixXd I4 = Eigen::MatrixXd::Identity(4, 4);
  auto sq = polyline({pt({0, 0, 0, 0}), pt({0.5, 0.4, 0, 0.3}), pt({0, 0.4, 0.5, -0.2}), pt({0, 0, 0, 0})});
  auto r = parallel_transport(e1, sq, I4);
  auto G = e1.metric_at(pt({0, 0, 0, 0}));
  CHECK(max_abs(r.frame.transpose() * G * r.frame - G) <= 1e-10);
  CHECK(max_abs(r.frame - I4) > 1e-3);

  CHECK_THROWS_AS(parallel_transport(e1, straight_path(pt({0, 0, 0, 0}), pt({0, 2, 0, 0})), I4), PreconditionError);
  TransportOptions tight{1e-16, 4, 8};
  CHECK_THROWS_AS(parallel_transport(e1, sq, I4, tight), ConvergenceError);
}

TEST_CASE("holonomy estimates") {
  auto flat = build_example1(flat_chart(2), 0.0, 0.0);
  auto hf = holonomy_estimate(flat, flat.domain().center());
  CHECK(hf.dimension == 0);

  auto pp = pp_wave_2d(1.0);
  CHECK(holonomy_estimate(pp, pp.domain().center()).dimension == 1);

  auto e1 = example1();
  auto base = e1.domain().center();
  HolonomyConfig cfg;
  cfg.candidate = null_line_stabilizer(e1.metric_at(base));
  REQUIRE(cfg.candidate->size() == 4);
  auto h = holonomy_estimate(e1, base, cfg);
  CHECK(h.dimension == 4);
  CHECK(h.gap >= 1e3);
  CHECK(h.max_skew_residual < 1e-9);
  CHECK(h.elements.size() == 9 * 6);
  CHECK(*std::max_element(h.candidate_residuals.begin(), h.candidate_residuals.end()) < 1e-8);

  auto control = build_example1(unit_sphere_stereographic(), 0.0, 1.0);
  auto hc = holonomy_estimate(control, base);
  CHECK(hc.dimension == 2);
  CHECK(hc.dimension < h.dimension);

  auto flat2 = flat_chart(2);
  auto f4 = build_index2_metric(4, Index2Ingredients{flat2, 0.0, ex("x^2 - y^2"), ex("x*y"), 0.0});
  auto f5 = build_index2_metric(5, Index2Ingredients{flat2, 0.0, ex("x^2 - y^2"), ex("x*y + (x^4 - y^4)/6"), 0.0});
  auto h4 = holonomy_estimate(f4, f4.domain().center());
  auto h5 = holonomy_estimate(f5, f5.domain().center());
  CHECK(h4.dimension == 5);
  CHECK(h5.dimension == 6);
  CHECK(h4.gap >= 1e3);
  CHECK(h5.gap >= 1e3);

  HolonomyConfig one_plane;
  one_plane.planes = {{1, 2}};
  CHECK(holonomy_estimate(e1, base, one_plane).elements.size() == 9);
  CHECK_THROWS_AS(holonomy_estimate(e1, pt({5, 0, 0, 0})), PreconditionError);
}

TEST_CASE("holonomy estimates do not depend on the thread count") {
  auto e1 = example1();
  setenv("BERGERKIT_THREADS", "1", 1);
  auto a = holonomy_estimate(e1, e1.domain().center());
  setenv("BERGERKIT_THREADS", "4", 1);
  auto b = holonomy_estimate(e1, e1.domain().center());
  unsetenv("BERGERKIT_THREADS");
  CHECK(a.singular_values == b.singular_values);
  CHECK(holonomy_to_json(a) == holonomy_to_json(b));
}

TEST_CASE("chart JSON") {
  auto e1 = example1();
  auto back = chart_from_json(Json::parse(chart_to_json(e1).dump()));
  CHECK(back.coordinates() == e1.coordinates());
  for (auto& x : sample_points(e1.domain(), 5, 8)) CHECK(max_abs(back.metric_at(x) - e1.metric_at(x)) < 1e-15);

  auto j = Json::parse(R"({"name": "pp", "coordinates": ["v", "u"],
      "components": {"v,u": "1", "u,u": "v^2"}, "domain": {"lo": [-1, -1], "hi": [1, 1]}})");
  auto pp = chart_from_json(j);
  CHECK(pp.metric_at(pt({0.5, 0}))(1, 1) == doctest::Approx(0.25));
  CHECK(pp.metric_at(pt({0.5, 0}))(1, 0) == 1.0);
  j["components"]["w,u"] = "1";
  CHECK_THROWS_AS(chart_from_json(j), PreconditionError);
  CHECK_THROWS_AS(chart_from_json(Json::parse(R"({"coordinates": ["x"]})")), PreconditionError);
}
