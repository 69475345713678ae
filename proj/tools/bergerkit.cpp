// bergerkit command-line frontend.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bergerkit/catalog.hpp"
#include "bergerkit/curvature.hpp"
#include "bergerkit/errors.hpp"
#include "bergerkit/metric.hpp"
#include "bergerkit/serialize.hpp"
#include "bergerkit/structure.hpp"

using namespace bergerkit;
namespace fs = std::filesystem;

namespace {

constexpr int kPass = 0, kCheckFailed = 1, kInputError = 2;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outcome {
  Json payload;
  bool pass = true;
  std::string summary;
};

std::string digest(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fixtures_root() {
  if (const char* env = std::getenv("BERGERKIT_FIXTURES")) return env;
  return BERGERKIT_FIXTURES_DIR;
}

// A path, or a bundled fixture addressed by name.
fs::path resolve(const std::string& name, const std::string& kind) {
  if (fs::exists(name)) return name;
  for (auto candidate : {fixtures_root() / kind / (name + ".json"), fixtures_root() / kind / name, fixtures_root() / name})
    if (fs::exists(candidate)) return candidate;
  throw InputError("no such file or fixture: " + name);
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw InputError(what + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string catalog_id, file;
};

Outcome cmd_analyze(const AnalyzeArgs& a, std::string& input) {
  Outcome out;
  if (a.catalog_id.empty() == a.file.empty()) throw InputError("analyze: give exactly one of --catalog or --file");
  std::optional<MatrixLieAlgebra> g;
  if (!a.catalog_id.empty()) {
    input = "catalog:" + a.catalog_id;
    g = catalog(a.catalog_id);
  } else {
    input = read_file(resolve(a.file, "algebras"));
    auto j = parse_json(input, a.file);
    if (j.contains("v_dims")) {
      auto spec = spec_from_json(j);
      out.payload["candidate"] = candidate_to_json(validate_einstein_candidate(spec));
      g = assemble(spec);
    } else {
      g = algebra_from_json(j);
    }
  }
  auto r = analyze(*g);
  out.payload["report"] = report_to_json(r);
  std::ostringstream s;
  s << r.algebra << ": dim " << g->dim() << " in so(" << g->metric().signature().p << "," << g->metric().signature().q
    << "), dim R " << r.dim_R << ", R1 " << (r.R1_nonempty ? "non-empty" : "empty") << ", berger "
    << (r.is_berger ? "yes" : "no") << ", einstein-berger " << (r.is_einstein_berger ? "yes" : "no")
    << ", symmetric-berger " << (r.is_symmetric_berger ? "yes" : "no");
  out.summary = s.str();
  return out;
}

// ---------------------------------------------------------------------------

struct EnumerateArgs {
  std::string signature;
  std::vector<std::string> holonomy;
};

bool instance_passes(const CandidateReport& r) {
  return r.assembled && r.R1_nonempty && r.LR1_equals_g && r.weakly_irreducible == Verdict::yes &&
         r.projection_decomposes;
}

Outcome cmd_enumerate(const EnumerateArgs& a, std::string& input) {
  auto comma = a.signature.find(',');
  if (comma == std::string::npos) throw InputError("--signature expects 2,n");
  long index = 0, n = 0;
  try {
    std::size_t used = 0;
    index = std::stol(a.signature.substr(0, comma), &used);
    n = std::stol(a.signature.substr(comma + 1));
  } catch (const std::exception&) {
    throw InputError("--signature expects 2,n with integers");
  }
  if (index != 2) throw InputError("only index 2 (signature (2, n+2)) is enumerated");
  if (n < 0) throw InputError("--signature: n must be non-negative");
  std::vector<std::string> factors;
  for (auto& h : a.holonomy) {
    std::stringstream ss(h);
    for (std::string f; std::getline(ss, f, '+');)
      if (!f.empty()) factors.push_back(f);
  }
  input = a.signature + "|";
  for (auto& f : factors) input += f + "+";

  auto inst = enumerate_index2(static_cast<std::size_t>(n), factors);
  std::vector<CandidateReport> reports(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) reports[i] = validate_einstein_candidate(inst[i].spec);
  Outcome out;
  out.payload["n"] = n;
  out.payload["factors"] = factors;
  out.payload["instances"] = Json::array();
  std::map<int, int> counts;
  std::ostringstream s;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    auto j = candidate_to_json(reports[i]);
    j["family"] = inst[i].family;
    j["label"] = inst[i].label;
    j["passes"] = instance_passes(reports[i]);
    out.payload["instances"].push_back(j);
    out.pass = out.pass && instance_passes(reports[i]);
    counts[inst[i].family]++;
    s << "  " << inst[i].spec.name << ": dim " << reports[i].dim << ", weakly irreducible "
      << to_string(reports[i].weakly_irreducible) << ", einstein-berger "
      << (reports[i].R1_nonempty && reports[i].LR1_equals_g ? "yes" : "no")
      << (reports[i].violations.empty() ? "" : ", note: " + reports[i].violations.front()) << "\n";
  }
  for (auto [f, c] : counts) out.payload["counts"][std::to_string(f)] = c;
  out.summary = std::to_string(inst.size()) + " instances for signature (2, " + std::to_string(n + 2) + ")\n" + s.str();
  return out;
}

// ---------------------------------------------------------------------------

struct MetricArgs {
  std::string file;
  std::optional<double> lambda;
  double tol = 1e-8;
  std::size_t samples = 20;
  std::uint64_t seed = 1;
  std::size_t points = 8;
  double radius = 0.3;
  std::optional<std::size_t> expect_dim;
};

struct LoadedChart {
  MetricChart chart;
  Json raw;
};

LoadedChart load_chart(const MetricArgs& a, std::string& input) {
  input = read_file(resolve(a.file, "charts"));
  auto j = parse_json(input, a.file);
  return {chart_from_json(j), j};
}

Outcome cmd_metric_verify(const MetricArgs& a, std::string& input) {
  auto [chart, raw] = load_chart(a, input);
  if (!a.lambda && !raw.contains("lambda")) throw InputError("metric verify: no --lambda and none in the chart file");
  const double lambda = a.lambda ? *a.lambda : raw.at("lambda").get<double>();
  auto r = einstein_check(chart, lambda, sample_points(chart.domain(), a.samples, a.seed), a.tol);
  Outcome out;
  out.payload = {{"chart", chart.name()}, {"lambda", lambda}, {"einstein", check_to_json(r)}};
  out.pass = r.pass;
  std::ostringstream s;
  s << chart.name() << ": Ric = " << lambda << " g " << (r.pass ? "holds" : "FAILS") << ", max residual "
    << r.max_residual << " over " << a.samples << " samples (tol " << a.tol << ")";
  if (!r.pass) {
    s << ", worst at (";
    const auto& p = r.points[r.worst];
    for (Eigen::Index i = 0; i < p.size(); ++i) s << (i ? ", " : "") << chart.coordinates()[i] << "=" << p[i];
    s << ")";
  }
  out.summary = s.str();
  return out;
}

Outcome cmd_metric_holonomy(const MetricArgs& a, std::string& input) {
  auto [chart, raw] = load_chart(a, input);
  HolonomyConfig cfg;
  cfg.points = a.points;
  cfg.radius = a.radius;
  cfg.seed = a.seed;
  Point base = chart.domain().center();
  if (raw.contains("base")) {
    auto b = raw.at("base").get<std::vector<double>>();
    if (b.size() != chart.dim()) throw InputError("base point has the wrong dimension");
    base = Eigen::Map<Eigen::VectorXd>(b.data(), b.size());
  }
  auto h = holonomy_estimate(chart, base, cfg);
  Outcome out;
  out.payload = {{"chart", chart.name()}, {"holonomy", holonomy_to_json(h)}};
  std::optional<std::size_t> expected = a.expect_dim;
  if (!expected && raw.contains("expected") && raw["expected"].contains("holonomy_dimension"))
    expected = raw["expected"]["holonomy_dimension"].get<std::size_t>();
  if (expected) {
    out.payload["expected_dimension"] = *expected;
    out.pass = h.dimension == *expected;
  }
  std::ostringstream s;
  s << chart.name() << ": holonomy dimension " << h.dimension << " (gap " << h.gap << ", " << h.elements.size()
    << " elements, skew residual " << h.max_skew_residual << ")";
  if (expected) s << (out.pass ? ", matches expected " : ", EXPECTED ") << *expected;
  out.summary = s.str();
  return out;
}

// ---------------------------------------------------------------------------

Json entry_json(const CatalogEntry& e) {
  return {{"id", e.id},
          {"family", e.family},
          {"ambient", e.ambient},
          {"parameters", e.parameters},
          {"dim_formula", e.dim_formula},
          {"in_berger_list", e.in_berger_list},
          {"in_einstein_list", e.in_einstein_list},
          {"symmetric_family", e.symmetric_family},
          {"experimental", e.experimental}};
}

Outcome cmd_catalog_list(std::string& input) {
  input = "catalog-list";
  Outcome out;
  out.payload["families"] = Json::array();
  std::ostringstream s;
  for (auto& e : catalog_entries()) {
    out.payload["families"].push_back(entry_json(e));
    s << "  " << e.id << "  " << e.family << " in " << e.ambient << "  [" << e.parameters << "]  dim " << e.dim_formula
      << (e.experimental ? "  (experimental)" : "") << "\n";
  }
  out.summary = std::to_string(catalog_entries().size()) + " families\n" + s.str();
  return out;
}

Outcome cmd_catalog_describe(const std::string& id, std::string& input) {
  input = "catalog-describe:" + id;
  const auto& e = catalog_entry(id);
  auto g = catalog(id);
  Outcome out;
  out.payload = entry_json(e);
  out.payload["instance"] = {{"id", id},
                             {"name", g.name()},
                             {"dim", g.dim()},
                             {"ambient_dim", g.ambient_dim()},
                             {"signature", {g.metric().signature().p, g.metric().signature().q}}};
  std::ostringstream s;
  s << id << ": " << e.family << " in " << e.ambient << ", dim = " << e.dim_formula << " = " << g.dim()
    << ", acting on R^(" << g.metric().signature().p << "," << g.metric().signature().q << ")";
  out.summary = s.str();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bergerkit: Berger algebras, curvature spaces and Einstein holonomy"};
  app.require_subcommand(1);
  std::string json_out;
  app.add_option("--json", json_out, "write the run report to this file ('-' for stdout)");

  AnalyzeArgs aa;
  auto* analyze_cmd = app.add_subcommand("analyze", "curvature spaces and Berger predicates of an algebra");
  analyze_cmd->add_option("--catalog", aa.catalog_id, "catalog id, e.g. so:3 or gl:2:R@so(2,2)");
  analyze_cmd->add_option("--file", aa.file, "algebra or structured-spec JSON (path or fixture name)");

  EnumerateArgs ea;
  auto* enum_cmd = app.add_subcommand("enumerate", "index-2 families for signature (2, n+2)");
  enum_cmd->add_option("--signature", ea.signature, "2,n")->required();
  enum_cmd->add_option("--holonomy", ea.holonomy, "Riemannian factors, e.g. so:2 or so:2+so:3");

  MetricArgs ma;
  auto* metric_cmd = app.add_subcommand("metric", "coordinate metrics: Einstein checks and holonomy");
  metric_cmd->require_subcommand(1);
  auto add_metric_flags = [&](CLI::App* c) {
    c->add_option("--file", ma.file, "chart JSON (path or fixture name)")->required();
    c->add_option("--lambda", ma.lambda, "Einstein constant, Ric = lambda g");
    c->add_option("--tol", ma.tol, "tolerance")->capture_default_str();
    c->add_option("--samples", ma.samples, "sample points")->capture_default_str();
    c->add_option("--seed", ma.seed, "random seed")->capture_default_str();
  };
  auto* verify_cmd = metric_cmd->add_subcommand("verify", "check Ric = lambda g at sample points");
  add_metric_flags(verify_cmd);
  auto* hol_cmd = metric_cmd->add_subcommand("holonomy", "numerical holonomy algebra dimension");
  add_metric_flags(hol_cmd);
  hol_cmd->add_option("--points", ma.points, "transport end points")->capture_default_str();
  hol_cmd->add_option("--radius", ma.radius, "sampling radius, fraction of the half-width")->capture_default_str();
  hol_cmd->add_option("--expect", ma.expect_dim, "expected dimension (overrides the chart file)");

  auto* catalog_cmd = app.add_subcommand("catalog", "holonomy algebra catalog");
  catalog_cmd->require_subcommand(1);
  auto* list_cmd = catalog_cmd->add_subcommand("list", "list families");
  std::string describe_id;
  auto* describe_cmd = catalog_cmd->add_subcommand("describe", "describe one family instance");
  describe_cmd->add_option("id", describe_id, "catalog id, e.g. so:2,3")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::string command, input;
  Outcome out;
  try {
    if (*analyze_cmd) {
      command = "analyze";
      out = cmd_analyze(aa, input);
    } else if (*enum_cmd) {
      command = "enumerate";
      out = cmd_enumerate(ea, input);
    } else if (*verify_cmd) {
      command = "metric verify";
      out = cmd_metric_verify(ma, input);
    } else if (*hol_cmd) {
      command = "metric holonomy";
      out = cmd_metric_holonomy(ma, input);
    } else if (*list_cmd) {
      command = "catalog list";
      out = cmd_catalog_list(input);
    } else if (*describe_cmd) {
      command = "catalog describe";
      out = cmd_catalog_describe(describe_id, input);
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {  // precondition and dimension errors
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ClosureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const MembershipError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::cout << out.summary << (out.summary.empty() || out.summary.back() == '\n' ? "" : "\n");
  std::cout << (out.pass ? "PASS" : "FAIL") << "\n";
  if (!json_out.empty()) {
    Json report{{"command", command},
                {"input_digest", digest(input)},
                {"version", BERGERKIT_VERSION},
                {"pass", out.pass},
                {"payload", out.payload},
                {"wall_time_s", wall}};
    if (json_out == "-") {
      std::cout << report.dump(2) << "\n";
    } else {
      std::ofstream f(json_out);
      if (!f) {
        std::cerr << "error: cannot write " << json_out << "\n";
        return kInputError;
      }
      f << report.dump(2) << "\n";
    }
  }
  return out.pass ? kPass : kCheckFailed;
}
