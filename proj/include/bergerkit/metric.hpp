#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bergerkit/expr.hpp"
#include "bergerkit/quadratic_space.hpp"
#include "bergerkit/serialize.hpp"

namespace bergerkit {

struct StructuredAlgebraSpec;

using Point = Eigen::VectorXd;

// Open coordinate rectangle lo < x < hi.
struct DomainBox {
  std::vector<double> lo, hi;
  std::size_t dim() const { return lo.size(); }
  bool contains(const Point& x) const;
  Point center() const;
};

// Uniform points in the box shrunk by `margin` (fraction of each side) on every side.
std::vector<Point> sample_points(const DomainBox& box, std::size_t count, std::uint64_t seed, double margin = 0.1);

class MetricChart {
 public:
  // g is n x n row-major and must be symmetric; throws PreconditionError if
  // it is not, if det g vanishes at a probe point, or if the signature varies.
  MetricChart(std::string name, std::vector<std::string> coordinates, std::vector<Expr> g, DomainBox domain);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return coords_.size(); }
  const std::vector<std::string>& coordinates() const { return coords_; }
  const DomainBox& domain() const { return domain_; }
  Signature signature() const { return signature_; }
  const Expr& g(std::size_t a, std::size_t b) const { return g_[a * dim() + b]; }
  // d_c g_ab and d_c d_d g_ab.
  const Expr& dg(std::size_t c, std::size_t a, std::size_t b) const;
  const Expr& ddg(std::size_t c, std::size_t d, std::size_t a, std::size_t b) const;

  Eigen::MatrixXd metric_at(const Point& x) const;

 private:
  std::string name_;
  std::vector<std::string> coords_;
  std::vector<Expr> g_;
  DomainBox domain_;
  Signature signature_;
  std::vector<Expr> dg_;   // [c][a][b]
  std::vector<Expr> ddg_;  // [c][d][a][b]
};

// Gamma^c_ab, symmetric in a, b.
struct Christoffel {
  std::size_t n = 0;
  std::vector<double> data;
  double operator()(std::size_t c, std::size_t a, std::size_t b) const { return data[(c * n + a) * n + b]; }
};

// R^a_bcd with R(d_c, d_d) d_b = R^a_bcd d_a.
struct CurvatureTensor {
  std::size_t n = 0;
  std::vector<double> data;
  double operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return data[((a * n + b) * n + c) * n + d];
  }
  // Matrix of R(d_c, d_d) acting on coordinate vectors.
  Eigen::MatrixXd endomorphism(std::size_t c, std::size_t d) const;
  double bianchi_residual() const;  // max |R^a_bcd + R^a_cdb + R^a_dbc|
};

Christoffel christoffel(const MetricChart& chart, const Point& x);
CurvatureTensor curvature_at(const MetricChart& chart, const Point& x);
// Ric_xy = R^a_yax, so the unit sphere gives Ric = (n-1) g.
Eigen::MatrixXd ricci_at(const MetricChart& chart, const Point& x);
double laplacian_at(const MetricChart& chart, const Expr& f, const Point& x);

struct SampleCheck {
  double tolerance = 0;
  double max_residual = 0;
  std::size_t worst = 0;
  std::vector<Point> points;
  std::vector<double> residuals;
  bool pass = false;
};

// max |Ric - lambda g| over the samples.
SampleCheck einstein_check(const MetricChart& chart, double lambda, const std::vector<Point>& samples, double tol);
// max |Laplace(H)| over the samples; H is written in the chart's coordinates.
SampleCheck laplace_check(const MetricChart& h, const Expr& H, const std::vector<Point>& samples, double tol);

// Standard ingredient charts.
MetricChart flat_chart(std::size_t n, double half_width = 2.0);            // x1..xn (x, y for n = 2)
MetricChart unit_sphere_stereographic(double half_width = 1.0);            // x, y; Ric = g
MetricChart unit_sphere_polar();                                           // theta, phi
MetricChart pp_wave_2d(double lambda);                                     // v, u: 2dvdu + lambda v^2 du^2

// Closed-form functions harmonic for the named chart ("flat2", "sphere2"),
// each with non-zero Hessian.
std::vector<std::string> harmonic_library(const std::string& chart);

struct IngredientChecks {
  std::size_t samples = 20;
  std::uint64_t seed = 7;
  double tol = 1e-8;
};

// 2 dv du + h + (lambda v^2 + H0) du^2 in coordinates v, h..., u. Throws
// PreconditionError unless h is Riemannian Einstein with constant lambda and
// H0 is h-harmonic.
MetricChart build_example1(const MetricChart& h, const Expr& H0, double lambda, const IngredientChecks& checks = {});

struct Index2Ingredients {
  MetricChart h;
  double lambda = 0;
  Expr H1, H2, H12;  // in h's coordinates
};

// Charts for the index-2 families 2 to 5 in coordinates v1, v2, h..., u1, u2:
//   2 dv1 du1 + 2 dv2 du2 + h + (F1 + H1) du1^2 + 2 (F12 + H12) du1 du2 + (F2 + H2) du2^2.
// Laplace constraints: family 2 Laplace(H) = -(2 lambda / 3) H for each H;
// family 3 Laplace(H1 - H2) = Laplace(H12) = 0, Laplace(H1 + H2) = -2 lambda (H1 + H2);
// family 4 H1, H2 harmonic; family 5 takes mu = 1, lambda = 0, Laplace(H2) = 2 H1.
MetricChart build_index2_metric(int family, const Index2Ingredients& in, const IngredientChecks& checks = {});

// Experimental: Walker-type chart for a structured spec. Coordinates v_i, the
// L-block charts, u_i; `du_du` and `dx_du` hold the F/H and cross terms in
// the final coordinate names, keyed by (a <= b) u-indices and (x, u) indices.
struct ConclusionIngredients {
  double lambda = 0;
  std::vector<MetricChart> h;
  std::map<std::pair<std::size_t, std::size_t>, std::string> du_du;
  std::map<std::pair<std::size_t, std::size_t>, std::string> dx_du;
};
MetricChart build_conclusion_metric(const StructuredAlgebraSpec& spec, const ConclusionIngredients& in,
                                    const IngredientChecks& checks = {});

// Piecewise smooth curve; each piece is parameterized over [0, 1].
struct PathSegment {
  std::function<Point(double)> point;
  std::function<Point(double)> velocity;
};
using Path = std::vector<PathSegment>;

Path straight_path(const Point& a, const Point& b);
Path polyline(const std::vector<Point>& points);

struct TransportOptions {
  double drift_tol = 1e-10;
  std::size_t initial_steps = 16;
  std::size_t max_steps = 1 << 16;
};

struct TransportResult {
  Eigen::MatrixXd frame;  // columns are the transported vectors at the end point
  std::size_t steps = 0;  // per segment, at the accepted level
  double drift = 0;       // max |F^T g F - F0^T g F0|
};

// RK4 on dV/dt = -Gamma(xdot, V), halving the step until the Gram drift is
// at most drift_tol and two levels agree. Throws ConvergenceError.
TransportResult parallel_transport(const MetricChart& chart, const Path& path, const Eigen::MatrixXd& frame,
                                   const TransportOptions& opts = {});

struct HolonomyConfig {
  std::size_t points = 8;
  double radius = 0.3;  // fraction of the half-width of each side
  std::uint64_t seed = 1;
  double threshold = 1e-7;  // relative to the largest singular value
  std::vector<std::pair<std::size_t, std::size_t>> planes;  // empty: all coordinate planes
  std::optional<std::vector<Eigen::MatrixXd>> candidate;    // basis in base coordinates
  TransportOptions transport;
};

struct HolonomyEstimate {
  Point base;
  Eigen::MatrixXd frame;  // coordinate frame at the base point
  std::vector<Point> points;
  std::vector<Eigen::MatrixXd> elements;  // P R_x(X, Y) P^-1 in the base frame
  std::vector<std::string> labels;
  std::vector<double> singular_values;
  std::size_t dimension = 0;
  double gap = 0;  // sigma_d / sigma_{d+1}, infinite when nothing is below the threshold
  double max_skew_residual = 0;
  std::vector<double> candidate_residuals;
};

HolonomyEstimate holonomy_estimate(const MetricChart& chart, const Point& base, const HolonomyConfig& config = {});

Json chart_to_json(const MetricChart& chart);
MetricChart chart_from_json(const Json& j);
Json check_to_json(const SampleCheck& c);
Json holonomy_to_json(const HolonomyEstimate& h);

}  // namespace bergerkit
