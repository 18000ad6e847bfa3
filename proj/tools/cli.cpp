#include "pdq/cli.hpp"

#include "pdq/darboux.hpp"
#include "pdq/engine.hpp"
#include "pdq/literal.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pdq::cli {

namespace {

std::string position(std::string_view text, std::size_t byte) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

TSeries literal(const json &j, int n, int order, const std::string &where) {
  if (!j.is_string())
    throw InputError(where + ": expected a string literal");
  try {
    return parse_series(j.get<std::string>(), n, order);
  } catch (const ParseError &e) {
    throw InputError(where + ": column " + std::to_string(e.column()) + ": " + e.what());
  }
}

// Coefficients of tables and operators carry no t.
Poly poly_literal(const json &j, int n, const std::string &where) {
  TSeries s = literal(j, n, 1, where);
  if (!s[1].is_zero())
    throw InputError(where + ": coefficient literal must not contain t");
  return s[0];
}

int get_int(const json &j, const char *key) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw InputError(std::string("missing or non-integer field '") + key + "'");
  return j.at(key).get<int>();
}

int checked_n(const json &j) {
  int n = get_int(j, "n");
  if (n < 1 || 2 * n > kMaxVars)
    throw InputError("n must lie in 1.." + std::to_string(kMaxVars / 2));
  return n;
}

int checked_order(int order) {
  if (order < 0)
    throw InputError("order must be non-negative");
  return order;
}

json exponents(Mono m, int nvars) {
  json out = json::array();
  for (int v = 0; v < nvars; ++v)
    out.push_back(m[v]);
  return out;
}

Mono mono_from(const json &j, int nvars, const std::string &where) {
  if (!j.is_array() || static_cast<int>(j.size()) != nvars)
    throw InputError(where + ": multi-index must list " + std::to_string(nvars) + " exponents");
  Mono m;
  for (int v = 0; v < nvars; ++v) {
    if (!j[v].is_number_integer() || j[v].get<int>() < 0 || j[v].get<int>() > kMaxExponent)
      throw InputError(where + ": bad exponent");
    m = m.with(v, j[v].get<int>());
  }
  return m;
}

MultiDiffOp op_from_json(const json &j, int n, int arity, const std::string &where) {
  int nv = 2 * n;
  MultiDiffOp op(nv, arity);
  if (!j.is_array())
    throw InputError(where + ": expected a list of terms");
  for (std::size_t t = 0; t < j.size(); ++t) {
    std::string at = where + "[" + std::to_string(t) + "]";
    const json &term = j[t];
    if (!term.is_array() || static_cast<int>(term.size()) != arity + 1)
      throw InputError(at + ": expected " + std::to_string(arity) + " multi-indices and a coefficient");
    Slots slots;
    for (int s = 0; s < arity; ++s)
      slots.push_back(mono_from(term[s], nv, at));
    op.add_term(slots, poly_literal(term[arity], n, at));
  }
  return op;
}

std::string format_operator(const MultiDiffOp &op, int n) {
  auto names = coordinate_names(n);
  std::string out;
  for (const auto &[slots, c] : op.terms()) {
    if (!out.empty())
      out += " + ";
    out += "(" + format_poly(c, n) + ")";
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (s > 0)
        out += " (x)";
      bool any = false;
      for (int v = 0; v < 2 * n; ++v) {
        int e = slots[s][v];
        if (e == 0)
          continue;
        out += " d_" + names[v] + (e > 1 ? "^" + std::to_string(e) : "");
        any = true;
      }
      if (!any)
        out += " 1";
    }
  }
  return out.empty() ? "0" : out;
}

std::vector<TSeries> argument_basis(const ChartSpec &spec, int nvars, int order, int degree) {
  std::vector<TSeries> args;
  for (Mono m : monomials_up_to(nvars, degree))
    args.emplace_back(Poly::monomial(nvars, m), order);
  for (const auto &[name, f] : spec.bindings)
    args.push_back(f.retruncate(order));
  return args;
}

bool in_O(const TSeries &f, int n) {
  for (int v = n; v < 2 * n; ++v)
    if (f.depends_on(v))
      return false;
  return true;
}

std::string tuple(const std::vector<const TSeries *> &args, int n) {
  std::string out = "(";
  for (std::size_t i = 0; i < args.size(); ++i)
    out += (i ? ", " : "") + format_series(*args[i], n);
  return out + ")";
}

FormalAutomorphism normalizing_map(const ChartSpec &spec) {
  return spec.omega_is_standard() ? FormalAutomorphism::identity(spec.n, spec.order)
                                  : darboux_map(spec.omega());
}

ChristoffelData valid_connection(const ChartSpec &spec) {
  ChristoffelData gamma = spec.connection();
  ConnectionReport rep = validate_connection(gamma, BaseForm::standard_symplectic(spec.n, spec.order));
  if (!rep.ok())
    throw InputError("invalid connection: " + rep.witness);
  return gamma;
}

json lift_json(const DarbouxCoordinates &c, int n) {
  json x = json::array(), y = json::array();
  for (const auto &v : c.x)
    x.push_back(format_series(v, n));
  for (const auto &v : c.y)
    y.push_back(format_series(v, n));
  return {{"x_hat", x}, {"y_hat", y}};
}

void write_atomically(const std::string &path, const std::string &content) {
  namespace fs = std::filesystem;
  fs::path target(path), tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f)
      throw InputError("cannot write " + tmp.string());
    f << content;
    if (!f.flush())
      throw InputError("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json parse_json(std::string_view text, const std::string &what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw InputError(what + ": " + position(text, e.byte > 0 ? e.byte - 1 : 0) + ": invalid JSON");
  }
}

} // namespace

// ---- chart spec ----

BaseForm ChartSpec::omega() const { return form_from_potential(omega_potential); }

bool ChartSpec::omega_is_standard() const {
  for (const auto &g : omega_potential)
    if (!g.is_zero())
      return false;
  return true;
}

ChristoffelData ChartSpec::connection() const {
  return christoffel ? *christoffel : standard_flat_connection(n, order);
}

ChartSpec parse_chart_spec(std::string_view text, std::optional<int> order_override) {
  json j = parse_json(text, "chart spec");
  try {
    if (!j.is_object())
      throw InputError("chart spec must be a JSON object");
    ChartSpec spec;
    spec.n = checked_n(j);
    spec.order = checked_order(order_override ? *order_override : get_int(j, "order"));
    int nv = 2 * spec.n;
    if (j.contains("omega_potential")) {
      const json &g = j.at("omega_potential");
      if (!g.is_array() || static_cast<int>(g.size()) != spec.n)
        throw InputError("omega_potential must list n literals");
      for (std::size_t i = 0; i < g.size(); ++i)
        spec.omega_potential.push_back(
            literal(g[i], spec.n, spec.order, "omega_potential[" + std::to_string(i) + "]"));
    } else {
      spec.omega_potential.assign(spec.n, TSeries(nv, spec.order));
    }
    if (j.contains("christoffel")) {
      ChristoffelData gamma(spec.n, spec.order);
      const json &entries = j.at("christoffel");
      if (!entries.is_array())
        throw InputError("christoffel must be a list of [i, j, k, literal]");
      for (std::size_t e = 0; e < entries.size(); ++e) {
        std::string at = "christoffel[" + std::to_string(e) + "]";
        const json &entry = entries[e];
        if (!entry.is_array() || entry.size() != 4)
          throw InputError(at + ": expected [i, j, k, literal]");
        int idx[3];
        for (int a = 0; a < 3; ++a) {
          if (!entry[a].is_number_integer() || entry[a].get<int>() < 0 || entry[a].get<int>() >= nv)
            throw InputError(at + ": index out of range");
          idx[a] = entry[a].get<int>();
        }
        gamma.set(idx[0], idx[1], idx[2], literal(entry[3], spec.n, spec.order, at));
      }
      spec.christoffel = gamma;
    }
    if (j.contains("bindings")) {
      const json &b = j.at("bindings");
      if (!b.is_object())
        throw InputError("bindings must map names to literals");
      for (const auto &[name, value] : b.items())
        spec.bindings.emplace(name, literal(value, spec.n, spec.order, "bindings." + name));
    }
    return spec;
  } catch (const json::exception &e) {
    throw InputError(std::string("chart spec: ") + e.what());
  }
}

// ---- serialization ----

json to_json(const MultiDiffOp &op, int n) {
  json terms = json::array();
  for (const auto &[slots, c] : op.terms()) {
    json term = json::array();
    for (Mono m : slots)
      term.push_back(exponents(m, op.nvars()));
    term.push_back(format_poly(c, n));
    terms.push_back(term);
  }
  return terms;
}

json to_json(const StarProduct &mu) {
  json table = json::array();
  for (int k = 0; k <= mu.order(); ++k)
    table.push_back(to_json(mu[k], mu.n()));
  return {{"n", mu.n()}, {"order", mu.order()}, {"table", table}};
}

StarProduct star_product_from_json(const json &j) {
  try {
    int n = checked_n(j), order = checked_order(get_int(j, "order"));
    const json &table = j.at("table");
    if (!table.is_array() || static_cast<int>(table.size()) != order + 1)
      throw InputError("table must have order + 1 entries");
    StarProduct mu(n, order);
    for (int k = 0; k <= order; ++k)
      mu[k] = op_from_json(table[k], n, 2, "table[" + std::to_string(k) + "]");
    return mu;
  } catch (const json::exception &e) {
    throw InputError(std::string("star-product table: ") + e.what());
  }
}

json to_json(const BaseForm &form) {
  json terms = json::array();
  for (const auto &[w, c] : form.terms()) {
    json vars = json::array();
    for (int v = 0; v < 2 * form.n(); ++v)
      if (w & (Wedge{1} << v))
        vars.push_back(v);
    terms.push_back(json::array({vars, format_series(c, form.n())}));
  }
  return {{"n", form.n()},
          {"order", form.order()},
          {"degree", form.degree()},
          {"terms", terms},
          {"text", format_form(form)}};
}

BaseForm form_from_json(const json &j) {
  try {
    int n = checked_n(j), order = checked_order(get_int(j, "order")), degree = get_int(j, "degree");
    if (degree < 0 || degree > 2 * n)
      throw InputError("form degree out of range");
    BaseForm form(n, order, degree);
    for (const json &term : j.at("terms")) {
      if (!term.is_array() || term.size() != 2 || !term[0].is_array() ||
          static_cast<int>(term[0].size()) != degree)
        throw InputError("form term must be [[directions], literal] with degree directions");
      Wedge w = 0;
      for (const json &v : term[0]) {
        int d = v.get<int>();
        if (d < 0 || d >= 2 * n || (w & (Wedge{1} << d)))
          throw InputError("bad form direction");
        w |= Wedge{1} << d;
      }
      form.add_term(w, literal(term[1], n, order, "form term"));
    }
    return form;
  } catch (const json::exception &e) {
    throw InputError(std::string("form: ") + e.what());
  }
}

json to_json(const FormalAutomorphism &phi) {
  json images = json::array();
  for (const auto &s : phi.images())
    images.push_back(format_series(s, phi.n()));
  return {{"n", phi.n()}, {"order", phi.order()}, {"images", images}};
}

FormalAutomorphism automorphism_from_json(const json &j) {
  try {
    int n = checked_n(j), order = checked_order(get_int(j, "order"));
    const json &images = j.at("images");
    if (!images.is_array() || static_cast<int>(images.size()) != 2 * n)
      throw InputError("automorphism needs 2n images");
    std::vector<TSeries> out;
    for (std::size_t v = 0; v < images.size(); ++v)
      out.push_back(literal(images[v], n, order, "images[" + std::to_string(v) + "]"));
    return FormalAutomorphism(std::move(out));
  } catch (const json::exception &e) {
    throw InputError(std::string("automorphism: ") + e.what());
  }
}

json to_json(const DiffOpSeries &D) {
  int n = D.nvars() / 2;
  json ops = json::array(), text = json::array();
  for (int k = 0; k <= D.order(); ++k) {
    ops.push_back(to_json(D[k], n));
    text.push_back(format_operator(D[k], n));
  }
  return {{"n", n}, {"order", D.order()}, {"operators", ops}, {"text", text}};
}

DiffOpSeries diffop_series_from_json(const json &j) {
  try {
    int n = checked_n(j), order = checked_order(get_int(j, "order"));
    const json &ops = j.at("operators");
    if (!ops.is_array() || static_cast<int>(ops.size()) != order + 1)
      throw InputError("operators must have order + 1 entries");
    DiffOpSeries D(2 * n, order);
    for (int k = 0; k <= order; ++k)
      D[k] = op_from_json(ops[k], n, 1, "operators[" + std::to_string(k) + "]");
    return D;
  } catch (const json::exception &e) {
    throw InputError(std::string("operator series: ") + e.what());
  }
}

Method parse_method(std::string_view name) {
  if (name == "fedosov")
    return Method::fedosov;
  if (name == "moyal_weyl")
    return Method::moyal_weyl;
  if (name == "moyal_wick")
    return Method::moyal_wick;
  throw InputError("unknown method '" + std::string(name) + "'");
}

// ---- reports ----

void Report::verdict(const std::string &name, bool value, const std::string &witness) {
  body["verdicts"][name] = value;
  if (!value && !witness.empty())
    body["witnesses"][name] = witness;
}

bool Report::all_true() const {
  if (!body.contains("verdicts"))
    return true;
  for (const auto &[name, v] : body.at("verdicts").items())
    if (!v.get<bool>())
      return false;
  return true;
}

StarProduct build_star_product(const ChartSpec &spec, Method method) {
  StarProduct mu_w;
  switch (method) {
  case Method::moyal_wick:
    mu_w = moyal_wick(spec.n, spec.order);
    break;
  case Method::moyal_weyl:
    mu_w = moyal_weyl(spec.n, spec.order);
    break;
  case Method::fedosov:
    mu_w = extract_star_product(build_r(valid_connection(spec)), 2);
    break;
  }
  if (spec.omega_is_standard())
    return mu_w;
  return transport_star_product(mu_w, darboux_map(spec.omega()), 2);
}

namespace {

void run_checks(Report &r, const ChartSpec &spec, const StarProduct &mu,
                const std::vector<std::string> &checks, int degree) {
  int n = mu.n(), N = mu.order(), nv = mu.nvars();
  std::vector<TSeries> args = argument_basis(spec, nv, N, degree);
  for (const std::string &check : checks) {
    std::string witness;
    if (check == "assoc") {
      for (const auto &f : args) {
        for (const auto &g : args) {
          TSeries fg = mu(f, g);
          for (const auto &h : args) {
            TSeries res = mu(fg, h) - mu(f, mu(g, h));
            if (!res.is_zero()) {
              witness = "order t^" + std::to_string(res.valuation()) + " at " + tuple({&f, &g, &h}, n);
              break;
            }
          }
          if (!witness.empty())
            break;
        }
        if (!witness.empty())
          break;
      }
    } else if (check == "psp" || check == "wpsp") {
      for (const auto &a : args) {
        if (!in_O(a, n))
          continue;
        for (const auto &g : args) {
          if (check == "wpsp" && !in_O(g, n))
            continue;
          TSeries res = mu(a, g) - a * g;
          if (!res.is_zero()) {
            witness = "mu(a, g) != a g at order t^" + std::to_string(res.valuation()) +
                      " for (a, g) = " + tuple({&a, &g}, n);
            break;
          }
        }
        if (!witness.empty())
          break;
      }
    } else if (check == "unit") {
      TSeries one = TSeries::constant(nv, N, Scalar(1));
      for (const auto &f : args)
        if (mu(one, f) != f || mu(f, one) != f) {
          witness = "1 is not a two-sided unit on " + format_series(f, n);
          break;
        }
    } else if (check == "bracket_jacobi") {
      if (N >= 1) {
        BracketReport rep = validate_bracket(DeformedBracket::of_star_product(mu), degree);
        if (!rep.ok())
          witness = rep.witness.empty() ? "bracket check failed" : rep.witness;
      }
    } else {
      throw InputError("unknown check '" + check + "'");
    }
    r.verdict(check, witness.empty(), witness);
  }
  r.body["argument_basis"] = "monomials of degree <= " + std::to_string(degree) + " plus bindings";
}

} // namespace

Report cmd_star_product(const ChartSpec &spec, Method method) {
  Report r;
  r.body["command"] = "star-product";
  r.body["method"] = method == Method::fedosov      ? "fedosov"
                     : method == Method::moyal_weyl ? "moyal_weyl"
                                                    : "moyal_wick";
  r.body["n"] = spec.n;
  r.body["order"] = spec.order;
  StarProduct mu = build_star_product(spec, method);
  if (method == Method::fedosov && spec.omega_is_standard()) {
    FedosovReport fr = check_fedosov(build_r(spec.connection()));
    r.verdict("fedosov_connection", fr.ok(), "Fedosov connection fails its postconditions");
  }
  run_checks(r, spec, mu, {"assoc", "unit", method == Method::moyal_weyl ? "wpsp" : "psp"}, 2);
  json products = json::object();
  for (const auto &[fn, f] : spec.bindings)
    for (const auto &[gn, g] : spec.bindings)
      products[fn + "*" + gn] = format_series(mu(f, g), spec.n);
  if (!products.empty())
    r.body["products"] = products;
  r.artifact = to_json(mu);
  return r;
}

Report cmd_curvature(const ChartSpec &spec) {
  Report r;
  r.body["command"] = "curvature";
  ChristoffelData gamma_w = valid_connection(spec);
  Curvatures c = curvatures(build_r(gamma_w));
  BaseForm omega = spec.omega();
  FormalAutomorphism T = normalizing_map(spec);
  ChristoffelData gamma_z = spec.omega_is_standard() ? gamma_w : transform_connection(gamma_w, T);
  ConnectionReport rep = validate_connection(gamma_z, omega);
  r.verdict("connection_valid_on_chart", rep.ok(), rep.witness);
  BaseForm wick = T.pullback(c.wick), weyl = T.pullback(c.weyl);
  BaseForm trace = classical_trace_form(gamma_z);
  BaseForm expected_weyl = omega + trace.shift(1).scaled(Scalar::ratio(1, 2));
  r.body["omega"] = to_json(omega);
  r.body["trace_form"] = to_json(trace);
  r.body["omega_wick"] = to_json(wick);
  r.body["omega_weyl"] = to_json(weyl);
  r.verdict("wick_equals_omega", wick == omega, "difference " + format_form(wick - omega));
  r.verdict("weyl_equals_omega_plus_half_t_trace", weyl == expected_weyl,
            "difference " + format_form(weyl - expected_weyl));
  return r;
}

Report cmd_check(const ChartSpec &spec, const StarProduct &mu, const std::vector<std::string> &checks,
                 int degree) {
  Report r;
  r.body["command"] = "check";
  if (mu.n() != spec.n)
    throw InputError("product and chart spec disagree on n");
  run_checks(r, spec, mu, checks, degree);
  return r;
}

Report cmd_equiv(const StarProduct &a, const StarProduct &b, bool identical_on_O) {
  Report r;
  r.body["command"] = "equiv";
  r.body["identical_on_O"] = identical_on_O;
  if (a.n() != b.n() || a.order() != b.order())
    throw InputError("products differ in n or order");
  EquivalenceResult res;
  try {
    res = equivalence_search(a, b, identical_on_O);
  } catch (const std::invalid_argument &e) {
    throw InputError(std::string("precondition: ") + e.what());
  }
  r.verdict("equivalent", res.found, res.reason);
  if (res.found) {
    r.body["gauge"] = to_json(res.D);
    r.body["vector_field_steps"] = res.vector_field_steps;
    r.verdict("regauge_reproduces_first", apply_gauge(res.D, b) == a);
    if (identical_on_O)
      r.verdict("gauge_identical_on_O", res.D.identical_on_O());
    r.artifact = to_json(res.D);
  } else if (res.obstruction_order >= 0) {
    r.body["obstruction_order"] = res.obstruction_order;
    r.body["obstruction"] = to_json(res.obstruction, a.n());
    r.body["obstruction_text"] = format_operator(res.obstruction, a.n());
  }
  return r;
}

Report cmd_darboux(const ChartSpec &spec, const std::optional<StarProduct> &given) {
  Report r;
  r.body["command"] = "darboux";
  StarProduct mu = given ? *given : build_star_product(spec, Method::fedosov);
  int n = mu.n(), N = mu.order();
  if (N < 1)
    throw InputError("darboux needs order >= 1");
  if (!is_psp(mu)) {
    int k = 1;
    while (is_strongly_polarized(mu[k]))
      ++k;
    r.verdict("psp", false, "mu_" + std::to_string(k) + " is not strongly polarized");
    return r;
  }
  r.verdict("psp", true);
  DarbouxCoordinates lift, other;
  BaseForm form = characteristic_form(mu, {}, &lift);
  std::vector<Poly> potentials(N, Poly(2 * n));
  for (int k = 1; k < N; ++k)
    potentials[k] = Poly::monomial(2 * n, Mono::unit(0, k + 1));
  BaseForm form2 = characteristic_form(mu, potentials, &other);
  DeformedBracket b = DeformedBracket::of_star_product(mu);
  std::string why;
  r.verdict("darboux_relations", darboux_valid_order(b, lift, &why) == N, why);
  r.verdict("x_hat_in_O", x_lifts_in_O(lift));
  r.verdict("independent_of_lift", form == form2, "second lift gives " + format_form(form2));
  r.body["lift"] = lift_json(lift, n);
  r.body["omega_t"] = to_json(form);
  r.body["valid_through_order"] = N - 1;
  if (!given) {
    BaseForm input = spec.omega().retruncate(N - 1);
    r.verdict("recovers_input_omega", form == input, "input " + format_form(input));
  }
  r.artifact = to_json(form);
  return r;
}

Report cmd_trivialize(const ChartSpec &spec) {
  Report r;
  r.body["command"] = "trivialize";
  BaseForm omega = spec.omega();
  FormalAutomorphism S = trivialize_pair(omega);
  r.body["automorphism"] = to_json(S);
  r.body["identity"] = S.is_identity();
  r.verdict("pullback_is_standard", S.pullback(omega) == BaseForm::standard_symplectic(spec.n, spec.order));
  bool preserves = true;
  for (int i = 0; i < spec.n; ++i)
    preserves = preserves && in_O(S.images()[i], spec.n);
  r.verdict("x_images_in_O", preserves);
  r.artifact = to_json(S);
  return r;
}

std::string render_text(const json &body) {
  std::ostringstream out;
  auto rec = [&](auto &&self, const json &j, int indent) -> void {
    std::string pad(indent, ' ');
    for (const auto &[key, v] : j.items()) {
      if (v.is_object()) {
        out << pad << key << ":\n";
        self(self, v, indent + 2);
      } else if (v.is_array()) {
        out << pad << key << ": " << v.dump() << "\n";
      } else if (v.is_string()) {
        out << pad << key << ": " << v.template get<std::string>() << "\n";
      } else {
        out << pad << key << ": " << v.dump() << "\n";
      }
    }
  };
  rec(rec, body, 0);
  return out.str();
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Polarized deformation quantization on a Darboux chart"};
  app.require_subcommand(1);
  std::string spec_path, format = "json", out_path, product, against, checks_arg;
  std::optional<int> order;
  std::string method = "fedosov";
  bool identical_on_O = false;
  int degree = 2;

  auto common = [&](CLI::App *sub) {
    sub->add_option("spec", spec_path, "chart-spec JSON file")->required();
    sub->add_option("--order", order, "truncation order (overrides the spec)");
    sub->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--out", out_path, "file for the emitted artifact");
  };
  auto *star = app.add_subcommand("star-product", "build and verify a star-product table");
  common(star);
  star->add_option("--method", method)->check(CLI::IsMember({"fedosov", "moyal_weyl", "moyal_wick"}));
  auto *curv = app.add_subcommand("curvature", "Weyl and Wick curvatures of the Fedosov connection");
  common(curv);
  auto *check = app.add_subcommand("check", "run checks on a product");
  common(check);
  check->add_option("--product", product, "method name or table file")->required();
  check->add_option("--check", checks_arg, "comma list of assoc,psp,wpsp,unit,bracket_jacobi")
      ->required();
  check->add_option("--degree", degree, "largest monomial degree of test arguments");
  auto *equiv = app.add_subcommand("equiv", "gauge equivalence between two products");
  common(equiv);
  equiv->add_option("--product", product, "first product: method name or table file")->required();
  equiv->add_option("--against", against, "second product: method name or table file")->required();
  equiv->add_flag("--identical-on-O", identical_on_O, "restrict to gauges identical on O");
  auto *darb = app.add_subcommand("darboux", "Darboux lift and characteristic form");
  common(darb);
  darb->add_option("--product", product, "method name or table file (default: Fedosov)");
  auto *triv = app.add_subcommand("trivialize", "automorphism trivializing the polarized form");
  common(triv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    ChartSpec spec = parse_chart_spec(read_file(spec_path), order);
    auto load_product = [&](const std::string &what) {
      for (const char *m : {"fedosov", "moyal_weyl", "moyal_wick"})
        if (what == m)
          return build_star_product(spec, parse_method(what));
      std::string text = read_file(what);
      StarProduct mu = star_product_from_json(parse_json(text, what));
      if (order && mu.order() != *order)
        throw InputError(what + ": table order differs from --order");
      return mu;
    };

    Report report;
    if (star->parsed()) {
      report = cmd_star_product(spec, parse_method(method));
    } else if (curv->parsed()) {
      report = cmd_curvature(spec);
    } else if (check->parsed()) {
      std::vector<std::string> checks;
      std::stringstream ss(checks_arg);
      for (std::string c; std::getline(ss, c, ',');)
        if (!c.empty())
          checks.push_back(c);
      report = cmd_check(spec, load_product(product), checks, degree);
    } else if (equiv->parsed()) {
      report = cmd_equiv(load_product(product), load_product(against), identical_on_O);
    } else if (darb->parsed()) {
      std::optional<StarProduct> mu;
      if (!product.empty())
        mu = load_product(product);
      report = cmd_darboux(spec, mu);
    } else {
      report = cmd_trivialize(spec);
    }

    if (report.artifact) {
      if (out_path.empty())
        report.body["artifact"] = *report.artifact;
      else
        write_atomically(out_path, report.artifact->dump(2) + "\n");
    }
    out << (format == "text" ? render_text(report.body) : report.body.dump(2) + "\n");
    return report.all_true() ? 0 : 1;
  } catch (const InputError &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    err << "verification failed: " << e.what() << "\n";
    return 1;
  }
}

} // namespace pdq::cli
