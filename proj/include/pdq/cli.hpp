#pragma once

#include "pdq/automorphism.hpp"
#include "pdq/diffop.hpp"
#include "pdq/geometry.hpp"
#include "pdq/hochschild.hpp"

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdq::cli {

using nlohmann::json;

// Malformed input. Exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChartSpec {
  int n = 1;
  int order = 0;
  std::vector<TSeries> omega_potential; // g_i in lambda_t = sum (y_i + t g_i) dx_i
  // Christoffel symbols in the Darboux coordinates w of omega_t; absent means
  // the standard flat connection.
  std::optional<ChristoffelData> christoffel;
  std::map<std::string, TSeries> bindings;

  BaseForm omega() const;
  bool omega_is_standard() const;
  ChristoffelData connection() const;
};

// Fields: n, order, omega_potential: [literal], christoffel: [[i, j, k,
// literal]] meaning Gamma^k_ij (indices 0-based over x_1..x_n, y_1..y_n),
// bindings: {name: literal}. order_override replaces the file's order.
ChartSpec parse_chart_spec(std::string_view text, std::optional<int> order_override = {});

// Wire formats. Coefficients are literals of the shared grammar, multi-indices
// are exponent lists over x_1..x_n, y_1..y_n.
json to_json(const StarProduct &mu);
StarProduct star_product_from_json(const json &j);
json to_json(const BaseForm &form);
BaseForm form_from_json(const json &j);
json to_json(const FormalAutomorphism &phi);
FormalAutomorphism automorphism_from_json(const json &j);
json to_json(const DiffOpSeries &D);
DiffOpSeries diffop_series_from_json(const json &j);
json to_json(const MultiDiffOp &op, int n);

enum class Method { fedosov, moyal_weyl, moyal_wick };
Method parse_method(std::string_view name);

// A report carries the emitted data, named verdicts and witnesses for the
// failed ones. The artifact, when present, is what --out writes.
struct Report {
  json body = json::object();
  std::optional<json> artifact;

  void verdict(const std::string &name, bool value, const std::string &witness = {});
  bool all_true() const;
};

StarProduct build_star_product(const ChartSpec &spec, Method method);

Report cmd_star_product(const ChartSpec &spec, Method method);
Report cmd_curvature(const ChartSpec &spec);
// Checks: assoc, psp, wpsp, unit, bracket_jacobi. Arguments are the monomials
// of degree <= degree plus the chart's bindings.
Report cmd_check(const ChartSpec &spec, const StarProduct &mu, const std::vector<std::string> &checks,
                 int degree = 2);
// Searches D with apply_gauge(D, b) = a.
Report cmd_equiv(const StarProduct &a, const StarProduct &b, bool identical_on_O);
// mu absent: the Fedosov product of the chart.
Report cmd_darboux(const ChartSpec &spec, const std::optional<StarProduct> &mu);
Report cmd_trivialize(const ChartSpec &spec);

std::string render_text(const json &body);

// Full command line; returns the exit code (0 all verdicts true, 1 a verdict
// false, 2 input error).
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace pdq::cli
