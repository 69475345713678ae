#include "bergerkit/metric.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "bergerkit/errors.hpp"
#include "bergerkit/parallel.hpp"
#include "bergerkit/structure.hpp"

namespace bergerkit {

namespace {

std::span<const double> view(const Point& x) { return {x.data(), static_cast<std::size_t>(x.size())}; }

std::string format_point(const Point& x) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) s += (i ? ", " : "") + std::to_string(x[i]);
  return s + ")";
}

}  // namespace

bool DomainBox::contains(const Point& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
  return true;
}

Point DomainBox::center() const {
  Point c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

std::vector<Point> sample_points(const DomainBox& box, std::size_t count, std::uint64_t seed, double margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> out;
  for (std::size_t k = 0; k < count; ++k) {
    Point x(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) {
      double w = box.hi[i] - box.lo[i];
      x[i] = box.lo[i] + w * (margin + (1 - 2 * margin) * u(rng));
    }
    out.push_back(std::move(x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// charts

MetricChart::MetricChart(std::string name, std::vector<std::string> coordinates, std::vector<Expr> g,
                         DomainBox domain)
    : name_(std::move(name)), coords_(std::move(coordinates)), g_(std::move(g)), domain_(std::move(domain)) {
  const std::size_t n = coords_.size();
  if (n == 0) throw PreconditionError("chart: no coordinates");
  if (g_.size() != n * n) throw DimensionError("chart: metric must have " + std::to_string(n * n) + " entries");
  if (domain_.lo.size() != n || domain_.hi.size() != n) throw DimensionError("chart: domain dimension mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!(domain_.lo[i] < domain_.hi[i])) throw PreconditionError("chart: empty domain in " + coords_[i]);
  if (std::set<std::string>(coords_.begin(), coords_.end()).size() != n)
    throw PreconditionError("chart: duplicate coordinate names");
  for (auto& e : g_)
    if (e.arity() > n) throw DimensionError("chart: metric entry uses an unknown variable");

  auto probes = sample_points(domain_, 8, 0x5eed);
  probes.insert(probes.begin(), domain_.center());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      for (auto& x : probes) {
        double u = g_[a * n + b].eval(view(x)), w = g_[b * n + a].eval(view(x));
        if (std::abs(u - w) > 1e-12 * (1 + std::abs(u)))
          throw PreconditionError("chart: metric is not symmetric in (" + coords_[a] + ", " + coords_[b] + ")");
      }
      g_[b * n + a] = g_[a * n + b];
    }

  dg_.assign(n * n * n, Expr());
  ddg_.assign(n * n * n * n, Expr());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        auto d1 = g_[a * n + b].derivative(c);
        dg_[(c * n + a) * n + b] = dg_[(c * n + b) * n + a] = d1;
        for (std::size_t d = c; d < n; ++d) {
          auto d2 = d1.derivative(d);
          for (auto [p, q] : {std::pair{c, d}, std::pair{d, c}})
            for (auto [r, s] : {std::pair{a, b}, std::pair{b, a}}) ddg_[((p * n + q) * n + r) * n + s] = d2;
        }
      }

  std::optional<Signature> sig;
  for (auto& x : probes) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(metric_at(x));
    const auto& ev = es.eigenvalues();
    double scale = ev.cwiseAbs().maxCoeff();
    Signature s;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (std::abs(ev[i]) <= 1e-12 * std::max(scale, 1.0))
        throw PreconditionError("chart: metric is degenerate at " + format_point(x));
      (ev[i] > 0 ? s.p : s.q)++;
    }
    if (sig && !(*sig == s)) throw PreconditionError("chart: signature changes inside the domain");
    sig = s;
  }
  signature_ = *sig;
}

const Expr& MetricChart::dg(std::size_t c, std::size_t a, std::size_t b) const {
  const std::size_t n = dim();
  return dg_[(c * n + a) * n + b];
}

const Expr& MetricChart::ddg(std::size_t c, std::size_t d, std::size_t a, std::size_t b) const {
  const std::size_t n = dim();
  return ddg_[((c * n + d) * n + a) * n + b];
}

Eigen::MatrixXd MetricChart::metric_at(const Point& x) const {
  const std::size_t n = dim();
  if (static_cast<std::size_t>(x.size()) != n) throw DimensionError("chart: point dimension mismatch");
  Eigen::MatrixXd m(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) m(a, b) = m(b, a) = g_[a * n + b].eval(view(x));
  return m;
}

// ---------------------------------------------------------------------------
// Levi-Civita data

namespace {

struct Jet {
  std::size_t n;
  Eigen::MatrixXd g, ginv;
  std::vector<double> dg;  // [c][a][b]
  double d(std::size_t c, std::size_t a, std::size_t b) const { return dg[(c * n + a) * n + b]; }
};

Jet first_jet(const MetricChart& chart, const Point& x) {
  const std::size_t n = chart.dim();
  Jet j{n, chart.metric_at(x), {}, std::vector<double>(n * n * n)};
  Eigen::FullPivLU<Eigen::MatrixXd> lu(j.g);
  if (!lu.isInvertible()) throw PreconditionError("singular metric at " + format_point(x));
  j.ginv = lu.inverse();
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b)
        j.dg[(c * n + a) * n + b] = j.dg[(c * n + b) * n + a] = chart.dg(c, a, b).eval(view(x));
  return j;
}

Christoffel christoffel_from(const Jet& j) {
  const std::size_t n = j.n;
  Christoffel gam{n, std::vector<double>(n * n * n, 0.0)};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        double s = 0;
        for (std::size_t d = 0; d < n; ++d) s += j.ginv(c, d) * (j.d(a, d, b) + j.d(b, d, a) - j.d(d, a, b));
        gam.data[(c * n + a) * n + b] = gam.data[(c * n + b) * n + a] = 0.5 * s;
      }
  return gam;
}

}  // namespace

Christoffel christoffel(const MetricChart& chart, const Point& x) { return christoffel_from(first_jet(chart, x)); }

CurvatureTensor curvature_at(const MetricChart& chart, const Point& x) {
  const std::size_t n = chart.dim();
  auto j = first_jet(chart, x);
  auto gam = christoffel_from(j);
  auto S = [&](std::size_t d, std::size_t a, std::size_t b) { return j.d(a, d, b) + j.d(b, d, a) - j.d(d, a, b); };
  // dgam[e][c][a][b] = d_e Gamma^c_ab
  std::vector<double> dgam(n * n * n * n, 0.0);
  for (std::size_t e = 0; e < n; ++e) {
    Eigen::MatrixXd dge(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) dge(a, b) = j.d(e, a, b);
    Eigen::MatrixXd dginv = -j.ginv * dge * j.ginv;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          double s = 0;
          for (std::size_t d = 0; d < n; ++d) {
            double dS = chart.ddg(e, a, d, b).eval(view(x)) + chart.ddg(e, b, d, a).eval(view(x)) -
                        chart.ddg(e, d, a, b).eval(view(x));
            s += dginv(c, d) * S(d, a, b) + j.ginv(c, d) * dS;
          }
          dgam[((e * n + c) * n + a) * n + b] = dgam[((e * n + c) * n + b) * n + a] = 0.5 * s;
        }
  }
  auto dG = [&](std::size_t e, std::size_t c, std::size_t a, std::size_t b) { return dgam[((e * n + c) * n + a) * n + b]; };
  CurvatureTensor R{n, std::vector<double>(n * n * n * n, 0.0)};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          double r = dG(c, a, d, b) - dG(d, a, c, b);
          for (std::size_t e = 0; e < n; ++e) r += gam(a, c, e) * gam(e, d, b) - gam(a, d, e) * gam(e, c, b);
          R.data[((a * n + b) * n + c) * n + d] = r;
        }
  return R;
}

Eigen::MatrixXd CurvatureTensor::endomorphism(std::size_t c, std::size_t d) const {
  Eigen::MatrixXd m(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) m(a, b) = (*this)(a, b, c, d);
  return m;
}

double CurvatureTensor::bianchi_residual() const {
  double worst = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d)
          worst = std::max(worst, std::abs((*this)(a, b, c, d) + (*this)(a, c, d, b) + (*this)(a, d, b, c)));
  return worst;
}

Eigen::MatrixXd ricci_at(const MetricChart& chart, const Point& x) {
  const std::size_t n = chart.dim();
  auto R = curvature_at(chart, x);
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t a = 0; a < n; ++a) ric(p, q) += R(a, q, a, p);
  return ric;
}

namespace {

struct Derivatives {
  std::vector<Expr> d1;  // [a]
  std::vector<Expr> d2;  // [a][b]
};

Derivatives derivatives_of(const Expr& f, std::size_t n) {
  if (f.arity() > n) throw DimensionError("function uses variables outside the chart");
  Derivatives d;
  for (std::size_t a = 0; a < n; ++a) d.d1.push_back(f.derivative(a));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) d.d2.push_back(d.d1[a].derivative(b));
  return d;
}

double laplacian_from(const MetricChart& chart, const Derivatives& f, const Point& x) {
  const std::size_t n = chart.dim();
  auto j = first_jet(chart, x);
  auto gam = christoffel_from(j);
  double s = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double hess = f.d2[a * n + b].eval(view(x));
      for (std::size_t c = 0; c < n; ++c) hess -= gam(c, a, b) * f.d1[c].eval(view(x));
      s += j.ginv(a, b) * hess;
    }
  return s;
}

SampleCheck run_check(const std::vector<Point>& samples, double tol, const std::function<double(const Point&)>& f) {
  SampleCheck r;
  r.tolerance = tol;
  r.points = samples;
  r.residuals.assign(samples.size(), 0.0);
  parallel_for(samples.size(), [&](std::size_t i) { r.residuals[i] = f(samples[i]); });
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (!(r.residuals[i] <= r.max_residual)) r.max_residual = r.residuals[i], r.worst = i;
  r.pass = std::all_of(r.residuals.begin(), r.residuals.end(), [&](double v) { return v <= tol; });
  return r;
}

}  // namespace

double laplacian_at(const MetricChart& chart, const Expr& f, const Point& x) {
  return laplacian_from(chart, derivatives_of(f, chart.dim()), x);
}

SampleCheck einstein_check(const MetricChart& chart, double lambda, const std::vector<Point>& samples, double tol) {
  return run_check(samples, tol, [&](const Point& x) {
    return (ricci_at(chart, x) - lambda * chart.metric_at(x)).cwiseAbs().maxCoeff();
  });
}

SampleCheck laplace_check(const MetricChart& h, const Expr& H, const std::vector<Point>& samples, double tol) {
  auto d = derivatives_of(H, h.dim());
  return run_check(samples, tol, [&](const Point& x) { return std::abs(laplacian_from(h, d, x)); });
}

// ---------------------------------------------------------------------------
// ingredient charts

namespace {

DomainBox cube(std::size_t n, double lo, double hi) {
  return {std::vector<double>(n, lo), std::vector<double>(n, hi)};
}

std::vector<Expr> parse_grid(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& names) {
  std::vector<Expr> g;
  for (auto& r : rows) {
    if (r.size() != rows.size()) throw DimensionError("chart: metric must be square");
    for (auto& s : r) g.push_back(parse_expr(s, names));
  }
  return g;
}

}  // namespace

MetricChart flat_chart(std::size_t n, double half_width) {
  std::vector<std::string> names;
  if (n == 2)
    names = {"x", "y"};
  else
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  std::vector<Expr> g(n * n, Expr(0.0));
  for (std::size_t i = 0; i < n; ++i) g[i * n + i] = 1.0;
  return MetricChart("flat" + std::to_string(n), names, g, cube(n, -half_width, half_width));
}

MetricChart unit_sphere_stereographic(double half_width) {
  std::vector<std::string> names{"x", "y"};
  const std::string c = "4/(1 + x^2 + y^2)^2";
  return MetricChart("sphere2", names, parse_grid({{c, "0"}, {"0", c}}, names), cube(2, -half_width, half_width));
}

MetricChart unit_sphere_polar() {
  std::vector<std::string> names{"theta", "phi"};
  return MetricChart("sphere2_polar", names, parse_grid({{"1", "0"}, {"0", "sin(theta)^2"}}, names),
                     {{0.05, -1.0}, {std::numbers::pi - 0.05, 2 * std::numbers::pi + 1.0}});
}

MetricChart pp_wave_2d(double lambda) {
  std::vector<std::string> names{"v", "u"};
  std::vector<Expr> g{0.0, 1.0, 1.0, Expr(lambda) * pow(Expr::var(0), 2.0)};
  return MetricChart("ppwave2", names, g, cube(2, -1.0, 1.0));
}

std::vector<std::string> harmonic_library(const std::string& chart) {
  // On a surface the Laplacian of a conformally flat metric is a multiple of
  // the flat one, so flat harmonic polynomials serve both charts.
  if (chart == "flat2" || chart == "sphere2") return {"x^2 - y^2", "x*y", "x^3 - 3*x*y^2"};
  throw PreconditionError("no harmonic functions bundled for chart '" + chart + "'");
}

// ---------------------------------------------------------------------------
// builders

namespace {

void require_einstein_ingredient(const MetricChart& h, double lambda, const IngredientChecks& ck) {
  if (h.signature().q != 0) throw PreconditionError("ingredient chart " + h.name() + " is not Riemannian");
  auto r = einstein_check(h, lambda, sample_points(h.domain(), ck.samples, ck.seed), ck.tol);
  if (!r.pass)
    throw PreconditionError("ingredient chart " + h.name() + " is not Einstein with lambda = " +
                            std::to_string(lambda) + " (residual " + std::to_string(r.max_residual) + ")");
}

void require_laplace(const MetricChart& h, const Expr& H, const Expr& target, const std::string& what,
                     const IngredientChecks& ck) {
  if (H.arity() > h.dim() || target.arity() > h.dim())
    throw PreconditionError(what + " depends on coordinates outside " + h.name());
  auto d = derivatives_of(H, h.dim());
  auto r = run_check(sample_points(h.domain(), ck.samples, ck.seed), ck.tol,
                     [&](const Point& x) { return std::abs(laplacian_from(h, d, x) - target.eval(view(x))); });
  if (!r.pass)
    throw PreconditionError(what + " fails its Laplace equation (residual " + std::to_string(r.max_residual) + ")");
}

std::vector<std::size_t> shifted(std::size_t count, std::size_t by) {
  std::vector<std::size_t> m(count);
  for (std::size_t i = 0; i < count; ++i) m[i] = i + by;
  return m;
}

void reserve_names(const std::vector<std::string>& h, const std::vector<std::string>& taken) {
  for (auto& s : taken)
    if (std::find(h.begin(), h.end(), s) != h.end())
      throw PreconditionError("ingredient coordinate '" + s + "' clashes with a Walker coordinate");
}

}  // namespace

MetricChart build_example1(const MetricChart& h, const Expr& H0, double lambda, const IngredientChecks& checks) {
  reserve_names(h.coordinates(), {"v", "u"});
  require_einstein_ingredient(h, lambda, checks);
  require_laplace(h, H0, 0.0, "H0", checks);
  const std::size_t k = h.dim(), n = k + 2, v = 0, u = n - 1;
  std::vector<std::string> names{"v"};
  names.insert(names.end(), h.coordinates().begin(), h.coordinates().end());
  names.push_back("u");
  std::vector<Expr> g(n * n, Expr(0.0));
  g[v * n + u] = g[u * n + v] = 1.0;
  auto map = shifted(k, 1);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) g[(a + 1) * n + b + 1] = h.g(a, b).remap(map);
  g[u * n + u] = Expr(lambda) * pow(Expr::var(v), 2.0) + H0.remap(map);
  DomainBox box{{-1.0}, {1.0}};
  box.lo.insert(box.lo.end(), h.domain().lo.begin(), h.domain().lo.end());
  box.hi.insert(box.hi.end(), h.domain().hi.begin(), h.domain().hi.end());
  box.lo.push_back(-1.0);
  box.hi.push_back(1.0);
  return MetricChart("example1", names, g, box);
}

MetricChart build_index2_metric(int family, const Index2Ingredients& in, const IngredientChecks& checks) {
  if (family < 2 || family > 5) throw PreconditionError("index-2 metrics exist for families 2 to 5");
  const double L = in.lambda;
  const bool mu = family == 5;
  if (mu && L != 0.0) throw PreconditionError("family 5 chart is only available for lambda = 0");
  const auto& h = in.h;
  reserve_names(h.coordinates(), {"v1", "v2", "u1", "u2"});
  require_einstein_ingredient(h, L, checks);
  switch (family) {
    case 2:
      for (auto [H, what] : {std::pair{in.H1, "H1"}, std::pair{in.H2, "H2"}, std::pair{in.H12, "H12"}})
        require_laplace(h, H, Expr(-2 * L / 3) * H, what, checks);
      break;
    case 3:
      require_laplace(h, in.H1 - in.H2, 0.0, "H1 - H2", checks);
      require_laplace(h, in.H1 + in.H2, Expr(-2 * L) * (in.H1 + in.H2), "H1 + H2", checks);
      require_laplace(h, in.H12, 0.0, "H12", checks);
      break;
    default:
      require_laplace(h, in.H1, 0.0, "H1", checks);
      require_laplace(h, in.H2, mu ? Expr(2.0) * in.H1 : Expr(0.0), "H2", checks);
      if (!in.H12.is_zero()) throw PreconditionError("families 4 and 5 have no du1 du2 term");
  }

  const std::size_t k = h.dim(), n = k + 4, v1 = 0, v2 = 1, u1 = k + 2, u2 = k + 3;
  const Expr x1 = Expr::var(v1), x2 = Expr::var(v2);
  Expr F1, F2, F12;
  switch (family) {
    case 2:
      F1 = Expr(2 * L / 3) * x1 * x1, F12 = Expr(2 * L / 3) * x1 * x2, F2 = Expr(2 * L / 3) * x2 * x2;
      break;
    case 3:
      F1 = Expr(L / 2) * (x1 * x1 - x2 * x2), F2 = -F1, F12 = Expr(L) * x1 * x2;
      break;
    default:
      F1 = Expr(L) * x1 * x1, F2 = Expr(L) * x2 * x2 + (mu ? x1 * x1 : Expr(0.0));
  }
  std::vector<std::string> names{"v1", "v2"};
  names.insert(names.end(), h.coordinates().begin(), h.coordinates().end());
  names.insert(names.end(), {"u1", "u2"});
  std::vector<Expr> g(n * n, Expr(0.0));
  g[v1 * n + u1] = g[u1 * n + v1] = 1.0;
  g[v2 * n + u2] = g[u2 * n + v2] = 1.0;
  auto map = shifted(k, 2);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) g[(a + 2) * n + b + 2] = h.g(a, b).remap(map);
  g[u1 * n + u1] = F1 + in.H1.remap(map);
  g[u2 * n + u2] = F2 + in.H2.remap(map);
  g[u1 * n + u2] = g[u2 * n + u1] = F12 + in.H12.remap(map);
  DomainBox box{{-1.0, -1.0}, {1.0, 1.0}};
  box.lo.insert(box.lo.end(), h.domain().lo.begin(), h.domain().lo.end());
  box.hi.insert(box.hi.end(), h.domain().hi.begin(), h.domain().hi.end());
  box.lo.insert(box.lo.end(), {-1.0, -1.0});
  box.hi.insert(box.hi.end(), {1.0, 1.0});
  return MetricChart("family" + std::to_string(family), names, g, box);
}

MetricChart build_conclusion_metric(const StructuredAlgebraSpec& spec, const ConclusionIngredients& in,
                                    const IngredientChecks& checks) {
  check_shapes(spec);
  const std::size_t m = spec.m();
  if (in.h.size() != spec.h.size()) throw PreconditionError("conclusion chart: one ingredient chart per L block");
  std::vector<std::string> vnames, unames, names;
  for (std::size_t i = 0; i < m; ++i) {
    vnames.push_back(m == 1 ? "v" : "v" + std::to_string(i + 1));
    unames.push_back(m == 1 ? "u" : "u" + std::to_string(i + 1));
  }
  names = vnames;
  std::size_t k = 0;
  for (std::size_t a = 0; a < in.h.size(); ++a) {
    const auto& h = in.h[a];
    if (h.dim() != spec.l_dim(a)) throw DimensionError("conclusion chart: L block " + std::to_string(a + 1) + " dimension");
    if (!(h.signature() == spec.h[a].metric().signature()))
      throw PreconditionError("conclusion chart: L block " + std::to_string(a + 1) + " signature");
    require_einstein_ingredient(h, in.lambda, checks);
    names.insert(names.end(), h.coordinates().begin(), h.coordinates().end());
    k += h.dim();
  }
  names.insert(names.end(), unames.begin(), unames.end());
  const std::size_t n = 2 * m + k;
  std::vector<Expr> g(n * n, Expr(0.0));
  for (std::size_t i = 0; i < m; ++i) g[i * n + m + k + i] = g[(m + k + i) * n + i] = 1.0;
  DomainBox box{std::vector<double>(m, -1.0), std::vector<double>(m, 1.0)};
  std::size_t off = m;
  for (const auto& h : in.h) {
    auto map = shifted(h.dim(), off);
    for (std::size_t a = 0; a < h.dim(); ++a)
      for (std::size_t b = 0; b < h.dim(); ++b) g[(off + a) * n + off + b] = h.g(a, b).remap(map);
    box.lo.insert(box.lo.end(), h.domain().lo.begin(), h.domain().lo.end());
    box.hi.insert(box.hi.end(), h.domain().hi.begin(), h.domain().hi.end());
    off += h.dim();
  }
  box.lo.insert(box.lo.end(), m, -1.0);
  box.hi.insert(box.hi.end(), m, 1.0);
  for (auto& [key, text] : in.du_du) {
    auto [a, b] = key;
    if (a > b || b >= m) throw DimensionError("conclusion chart: du_du index");
    auto e = parse_expr(text, names);
    g[(m + k + a) * n + m + k + b] = g[(m + k + a) * n + m + k + b] + e;
    if (a != b) g[(m + k + b) * n + m + k + a] = g[(m + k + a) * n + m + k + b];
  }
  for (auto& [key, text] : in.dx_du) {
    auto [x, a] = key;
    if (x >= k || a >= m) throw DimensionError("conclusion chart: dx_du index");
    auto e = parse_expr(text, names);
    g[(m + x) * n + m + k + a] = g[(m + k + a) * n + m + x] = e;
  }
  return MetricChart("conclusion[" + spec.name + "]", names, g, box);
}

// ---------------------------------------------------------------------------
// transport and holonomy

Path straight_path(const Point& a, const Point& b) {
  Point d = b - a;
  return {PathSegment{[a, d](double t) -> Point { return a + t * d; }, [d](double) -> Point { return d; }}};
}

Path polyline(const std::vector<Point>& points) {
  Path p;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) p.push_back(straight_path(points[i], points[i + 1])[0]);
  return p;
}

namespace {

Eigen::MatrixXd transport_rhs(const MetricChart& chart, const Point& x, const Point& xdot, const Eigen::MatrixXd& V) {
  if (!chart.domain().contains(x)) throw PreconditionError("path leaves the chart domain at " + format_point(x));
  const std::size_t n = chart.dim();
  auto gam = christoffel(chart, x);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t b = 0; b < n; ++b) A(a, c) += gam(a, b, c) * xdot[b];
  return -A * V;
}

Eigen::MatrixXd rk4(const MetricChart& chart, const Path& path, Eigen::MatrixXd V, std::size_t steps) {
  const double h = 1.0 / static_cast<double>(steps);
  for (const auto& seg : path)
    for (std::size_t i = 0; i < steps; ++i) {
      double t = i * h;
      auto f = [&](double s, const Eigen::MatrixXd& W) { return transport_rhs(chart, seg.point(s), seg.velocity(s), W); };
      auto k1 = f(t, V);
      auto k2 = f(t + h / 2, V + h / 2 * k1);
      auto k3 = f(t + h / 2, V + h / 2 * k2);
      auto k4 = f(t + h, V + h * k3);
      V += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
  return V;
}

}  // namespace

TransportResult parallel_transport(const MetricChart& chart, const Path& path, const Eigen::MatrixXd& frame,
                                   const TransportOptions& opts) {
  if (path.empty()) return {frame, 0, 0.0};
  const Point start = path.front().point(0.0), end = path.back().point(1.0);
  const Eigen::MatrixXd gram0 = frame.transpose() * chart.metric_at(start) * frame;
  const Eigen::MatrixXd gend = chart.metric_at(end);
  std::size_t steps = std::max<std::size_t>(1, opts.initial_steps);
  Eigen::MatrixXd prev = rk4(chart, path, frame, steps);
  double last_drift = 0;
  for (steps *= 2; steps <= opts.max_steps; steps *= 2) {
    Eigen::MatrixXd cur = rk4(chart, path, frame, steps);
    last_drift = (cur.transpose() * gend * cur - gram0).cwiseAbs().maxCoeff();
    double change = (cur - prev).cwiseAbs().maxCoeff();
    double size = std::max(1.0, cur.cwiseAbs().maxCoeff());
    if (last_drift <= opts.drift_tol && change <= 100 * opts.drift_tol * size)
      return {cur, steps, last_drift};
    prev = std::move(cur);
  }
  throw ConvergenceError("parallel transport: Gram drift " + std::to_string(last_drift) + " after " +
                         std::to_string(opts.max_steps) + " steps per segment");
}

HolonomyEstimate holonomy_estimate(const MetricChart& chart, const Point& base, const HolonomyConfig& config) {
  const std::size_t n = chart.dim();
  if (!chart.domain().contains(base)) throw PreconditionError("holonomy: base point outside the domain");
  auto planes = config.planes;
  if (planes.empty())
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t d = c + 1; d < n; ++d) planes.emplace_back(c, d);

  HolonomyEstimate est;
  est.base = base;
  est.frame = Eigen::MatrixXd::Identity(n, n);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t k = 0; k < config.points; ++k) {
    for (int attempt = 0;; ++attempt) {
      Point x = base;
      for (std::size_t i = 0; i < n; ++i)
        x[i] += config.radius * 0.5 * (chart.domain().hi[i] - chart.domain().lo[i]) * u(rng);
      if (chart.domain().contains(x)) {
        est.points.push_back(x);
        break;
      }
      if (attempt > 100) throw PreconditionError("holonomy: cannot place sample points around the base");
    }
  }

  // slot 0 is the base point itself
  std::vector<std::vector<Eigen::MatrixXd>> slots(est.points.size() + 1);
  parallel_for(slots.size(), [&](std::size_t s) {
    const Point& x = s == 0 ? base : est.points[s - 1];
    Eigen::MatrixXd F = est.frame;
    if (s > 0) F = parallel_transport(chart, straight_path(base, x), est.frame, config.transport).frame;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(F);
    if (!lu.isInvertible()) throw PreconditionError("holonomy: transported frame is singular");
    Eigen::MatrixXd Finv = lu.inverse();
    auto R = curvature_at(chart, x);
    for (auto [c, d] : planes) slots[s].push_back(Finv * R.endomorphism(c, d) * F);
  });
  for (std::size_t s = 0; s < slots.size(); ++s)
    for (std::size_t p = 0; p < planes.size(); ++p) {
      est.elements.push_back(slots[s][p]);
      est.labels.push_back((s == 0 ? std::string("base") : "p" + std::to_string(s)) + ":R(" +
                           chart.coordinates()[planes[p].first] + "," + chart.coordinates()[planes[p].second] + ")");
    }

  const Eigen::MatrixXd G = chart.metric_at(base);
  double max_norm = 0;
  for (auto& e : est.elements) {
    max_norm = std::max(max_norm, e.norm());
    Eigen::MatrixXd ge = G * e;
    est.max_skew_residual =
        std::max(est.max_skew_residual, (ge + ge.transpose()).cwiseAbs().maxCoeff() / std::max(1.0, e.cwiseAbs().maxCoeff()));
  }
  std::vector<Eigen::VectorXd> cols;
  if (max_norm > 1e-14)
    for (auto& e : est.elements)
      if (e.norm() > 1e-8 * max_norm) cols.push_back(Eigen::Map<const Eigen::VectorXd>(e.data(), n * n) / e.norm());
  if (!cols.empty()) {
    Eigen::MatrixXd M(n * n, cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) M.col(i) = cols[i];
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    est.singular_values.assign(sv.data(), sv.data() + sv.size());
  }
  const auto& sv = est.singular_values;
  const double cut = sv.empty() ? 0.0 : config.threshold * sv.front();
  while (est.dimension < sv.size() && sv[est.dimension] > cut) ++est.dimension;
  est.dimension = std::min(est.dimension, n * (n - 1) / 2);
  est.gap = std::numeric_limits<double>::infinity();
  if (est.dimension > 0 && est.dimension < sv.size() && sv[est.dimension] > 0)
    est.gap = sv[est.dimension - 1] / sv[est.dimension];

  if (config.candidate) {
    Eigen::MatrixXd B(n * n, config.candidate->size());
    for (std::size_t i = 0; i < config.candidate->size(); ++i) {
      const auto& c = (*config.candidate)[i];
      if (static_cast<std::size_t>(c.rows()) != n || static_cast<std::size_t>(c.cols()) != n)
        throw DimensionError("holonomy: candidate basis element has the wrong size");
      B.col(i) = Eigen::Map<const Eigen::VectorXd>(c.data(), n * n);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
    for (auto& e : est.elements) {
      Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(e.data(), n * n);
      double nv = v.norm();
      est.candidate_residuals.push_back(nv == 0 ? 0.0 : (v - B * qr.solve(v)).norm() / nv);
    }
  }
  return est;
}

// ---------------------------------------------------------------------------
// JSON

Json chart_to_json(const MetricChart& chart) {
  const std::size_t n = chart.dim();
  Json rows = Json::array();
  for (std::size_t a = 0; a < n; ++a) {
    Json r = Json::array();
    for (std::size_t b = 0; b < n; ++b) r.push_back(chart.g(a, b).to_string(chart.coordinates()));
    rows.push_back(r);
  }
  return {{"name", chart.name()},
          {"coordinates", chart.coordinates()},
          {"metric", rows},
          {"domain", {{"lo", chart.domain().lo}, {"hi", chart.domain().hi}}}};
}

MetricChart chart_from_json(const Json& j) {
  try {
    auto names = j.at("coordinates").get<std::vector<std::string>>();
    const std::size_t n = names.size();
    std::vector<Expr> g(n * n, Expr(0.0));
    if (j.contains("metric")) {
      auto rows = j.at("metric").get<std::vector<std::vector<std::string>>>();
      if (rows.size() != n) throw DimensionError("chart JSON: metric has " + std::to_string(rows.size()) + " rows");
      g = parse_grid(rows, names);
    } else {
      auto index = [&](const std::string& s) {
        auto it = std::find(names.begin(), names.end(), s);
        if (it == names.end()) throw PreconditionError("chart JSON: unknown coordinate '" + s + "'");
        return static_cast<std::size_t>(it - names.begin());
      };
      for (auto& [key, val] : j.at("components").items()) {
        auto comma = key.find(',');
        if (comma == std::string::npos) throw PreconditionError("chart JSON: component key '" + key + "'");
        std::size_t a = index(key.substr(0, comma)), b = index(key.substr(comma + 1));
        g[a * n + b] = g[b * n + a] = parse_expr(val.get<std::string>(), names);
      }
    }
    DomainBox box{j.at("domain").at("lo").get<std::vector<double>>(), j.at("domain").at("hi").get<std::vector<double>>()};
    return MetricChart(j.value("name", std::string("chart")), names, g, box);
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("chart JSON: ") + e.what());
  }
}

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json point_json(const Point& x) { return std::vector<double>(x.data(), x.data() + x.size()); }

}  // namespace

Json check_to_json(const SampleCheck& c) {
  Json j{{"tolerance", c.tolerance}, {"max_residual", c.max_residual}, {"pass", c.pass}, {"residuals", c.residuals}};
  j["worst_point"] = c.points.empty() ? Json(nullptr) : point_json(c.points[c.worst]);
  return j;
}

Json holonomy_to_json(const HolonomyEstimate& h) {
  Json pts = Json::array();
  for (auto& p : h.points) pts.push_back(point_json(p));
  Json j{{"base", point_json(h.base)},
         {"dimension", h.dimension},
         {"gap", finite_or_null(h.gap)},
         {"singular_values", h.singular_values},
         {"element_count", h.elements.size()},
         {"max_skew_residual", h.max_skew_residual},
         {"points", pts}};
  if (!h.candidate_residuals.empty())
    j["candidate_max_residual"] = *std::max_element(h.candidate_residuals.begin(), h.candidate_residuals.end());
  return j;
}

}  // namespace bergerkit
