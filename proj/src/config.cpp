#include "essspec/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <algorithm>
#include <cctype>

#include "json.hpp"

#include "essspec/expr.hpp"

namespace essspec {

using nlohmann::json;

ConfigError::ConfigError(std::string path, const std::string& message)
    : ValidationError(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

namespace {

constexpr std::array<const char*, 4> kEntryKeys{"a", "b", "c", "d"};

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "/" + key, "missing required field");
  return *it;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) throw ConfigError(path + "/" + it.key(), "unknown field");
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
  return d;
}

double get_positive(const json& v, const std::string& path) {
  const double d = get_number(v, path);
  if (!(d > 0.0)) throw ConfigError(path, "expected a positive number");
  return d;
}

int get_int(const json& v, const std::string& path, int min_value) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  const auto i = v.get<long long>();
  if (i < min_value || i > 1'000'000)
    throw ConfigError(path, "expected an integer >= " + std::to_string(min_value));
  return static_cast<int>(i);
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected an expression string");
  return v.get<std::string>();
}

bool reserved_name(const std::string& name) {
  static const std::set<std::string> kReserved{"x", "i", "pi", "exp", "sin", "cos", "tan", "tanh", "sqrt", "abs"};
  return kReserved.count(name) > 0;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  return true;
}

ParamMap param_map(const Config& c) {
  ParamMap p;
  for (const auto& [k, v] : c.params) p.emplace(k, complex{v});
  return p;
}

Expr parse_at(const std::string& text, const std::string& path, const ParamMap& params) {
  Expr e = [&] {
    try {
      return parse_expr(text);
    } catch (const ParseError& ex) {
      throw ConfigError(path, ex.what());
    }
  }();
  for (const auto& name : e.free_params())
    if (!params.count(name)) throw ConfigError(path, "unbound identifier '" + name + "'");
  return e;
}

CoeffFn build_coeff(const TermSpec& t, const std::string& path, const ParamMap& params) {
  const Expr lim = parse_at(t.limit, path + "/limit", params);
  if (lim.depends_on_x()) throw ConfigError(path + "/limit", "limit must not depend on x");
  complex limit;
  try {
    limit = lim.eval(0.0, params);
  } catch (const std::exception& ex) {
    throw ConfigError(path + "/limit", ex.what());
  }
  if (!std::isfinite(limit.real()) || !std::isfinite(limit.imag()))
    throw ConfigError(path + "/limit", "limit is not finite");
  if (!t.perturbation) return CoeffFn(limit);
  return CoeffFn(limit, parse_at(*t.perturbation, path + "/perturbation", params), params);
}

DiffSymbol build_symbol(const std::vector<TermSpec>& terms, const std::string& path, const ParamMap& params) {
  int top = -1;
  for (const auto& t : terms) top = std::max(top, t.power);
  std::vector<CoeffFn> coeffs(static_cast<std::size_t>(top + 1));
  std::vector<bool> seen(coeffs.size(), false);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& t = terms[k];
    const std::string p = path + "/" + std::to_string(k);
    if (seen[t.power]) throw ConfigError(p + "/power", "duplicate power " + std::to_string(t.power));
    seen[t.power] = true;
    coeffs[t.power] = build_coeff(t, p, params);
  }
  return DiffSymbol(std::move(coeffs));
}

}  // namespace

OperatorMatrix Config::build_operator() const {
  const ParamMap p = param_map(*this);
  std::array<DiffSymbol, 4> s;
  for (int e = 0; e < 4; ++e) s[e] = build_symbol(entries[e], std::string("/entries/") + kEntryKeys[e], p);
  try {
    return OperatorMatrix(s[0], s[1], s[2], s[3]);
  } catch (const ValidationError& ex) {
    throw ConfigError("/entries", ex.what());
  }
}

Config parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& ex) {
    throw ConfigError("", std::string("invalid JSON: ") + ex.what());
  }
  if (!doc.is_object()) throw ConfigError("", "top level must be an object");
  reject_unknown(doc, {"params", "entries", "grids", "tolerances"}, "");

  Config c;
  if (auto it = doc.find("params"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("/params", "expected an object");
    for (auto p = it->begin(); p != it->end(); ++p) {
      const std::string path = "/params/" + p.key();
      if (!is_identifier(p.key()) || reserved_name(p.key()))
        throw ConfigError(path, "parameter name must be an identifier other than x, i, pi or a function name");
      c.params[p.key()] = get_number(*p, path);
    }
  }

  const json& entries = require(doc, "entries", "");
  if (!entries.is_object()) throw ConfigError("/entries", "expected an object");
  reject_unknown(entries, {"a", "b", "c", "d"}, "/entries");
  for (int e = 0; e < 4; ++e) {
    const std::string epath = std::string("/entries/") + kEntryKeys[e];
    const json& list = require(entries, kEntryKeys[e], "/entries");
    if (!list.is_array()) throw ConfigError(epath, "expected an array of coefficient records");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string path = epath + "/" + std::to_string(k);
      const json& rec = list[k];
      if (!rec.is_object()) throw ConfigError(path, "expected an object");
      reject_unknown(rec, {"power", "limit", "perturbation"}, path);
      TermSpec t;
      t.power = get_int(require(rec, "power", path), path + "/power", 0);
      if (t.power > 64) throw ConfigError(path + "/power", "power above 64 is not supported");
      t.limit = get_string(require(rec, "limit", path), path + "/limit");
      if (auto pt = rec.find("perturbation"); pt != rec.end() && !pt->is_null())
        t.perturbation = get_string(*pt, path + "/perturbation");
      c.entries[e].push_back(std::move(t));
    }
  }

  if (auto it = doc.find("grids"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("/grids", "expected an object");
    reject_unknown(*it, {"x_max", "x_points", "xi_min", "xi_max", "xi_points"}, "/grids");
    auto& g = c.grids;
    if (it->contains("x_max")) g.x_max = get_positive((*it)["x_max"], "/grids/x_max");
    if (it->contains("x_points")) g.x_points = get_int((*it)["x_points"], "/grids/x_points", 1);
    if (it->contains("xi_min")) g.xi_min = get_positive((*it)["xi_min"], "/grids/xi_min");
    if (it->contains("xi_max")) g.xi_max = get_positive((*it)["xi_max"], "/grids/xi_max");
    if (it->contains("xi_points")) g.xi_points = get_int((*it)["xi_points"], "/grids/xi_points", 1);
    if (g.xi_min > g.xi_max) throw ConfigError("/grids/xi_min", "xi_min exceeds xi_max");
  }

  if (auto it = doc.find("tolerances"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("/tolerances", "expected an object");
    auto& t = c.tolerances;
    const std::map<std::string, double*> fields{
        {"decay_tol", &t.decay_tol},   {"x_far", &t.x_far},           {"margin_tol", &t.margin_tol},
        {"pole_tol", &t.pole_tol},     {"pole_guard", &t.pole_guard}, {"coarse_tol", &t.coarse_tol},
        {"refine_tol", &t.refine_tol}, {"root_tol", &t.root_tol},     {"qr_tol", &t.qr_tol},
        {"excl_tol", &t.excl_tol},     {"stab_tol", &t.stab_tol}};
    for (auto f = it->begin(); f != it->end(); ++f) {
      const std::string path = "/tolerances/" + f.key();
      if (f.key() == "dist_tol") {
        if (!f->is_null()) t.dist_tol = get_positive(*f, path);
        continue;
      }
      auto slot = fields.find(f.key());
      if (slot == fields.end()) throw ConfigError(path, "unknown field");
      *slot->second = get_positive(*f, path);
    }
  }

  const OperatorMatrix T = c.build_operator();
  try {
    check_decay(T, c.tolerances.x_far, c.tolerances.decay_tol);
  } catch (const ValidationError& ex) {
    throw ConfigError("/entries", ex.what());
  } catch (const EvalError& ex) {
    throw ConfigError("/entries", std::string("decay: ") + ex.what());
  }
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string emit_config(const Config& c) {
  json doc;
  doc["params"] = json::object();
  for (const auto& [k, v] : c.params) doc["params"][k] = v;
  doc["entries"] = json::object();
  for (int e = 0; e < 4; ++e) {
    json list = json::array();
    for (const auto& t : c.entries[e]) {
      json rec{{"power", t.power}, {"limit", t.limit}};
      if (t.perturbation) rec["perturbation"] = *t.perturbation;
      list.push_back(std::move(rec));
    }
    doc["entries"][kEntryKeys[e]] = std::move(list);
  }
  const auto& g = c.grids;
  doc["grids"] = {{"x_max", g.x_max}, {"x_points", g.x_points}, {"xi_min", g.xi_min},
                  {"xi_max", g.xi_max}, {"xi_points", g.xi_points}};
  const auto& t = c.tolerances;
  doc["tolerances"] = {{"decay_tol", t.decay_tol},   {"x_far", t.x_far},       {"margin_tol", t.margin_tol},
                       {"pole_tol", t.pole_tol},     {"pole_guard", t.pole_guard},
                       {"coarse_tol", t.coarse_tol}, {"refine_tol", t.refine_tol},
                       {"root_tol", t.root_tol},     {"qr_tol", t.qr_tol},     {"excl_tol", t.excl_tol},
                       {"stab_tol", t.stab_tol}};
  if (t.dist_tol) doc["tolerances"]["dist_tol"] = *t.dist_tol;
  return doc.dump(2) + "\n";
}

Config film_config(double delta, double eta, double c0, bool perturbed) {
  if (!(delta > 0.0) || !(eta > 0.0)) throw ValidationError("film: requires delta > 0 and eta > 0");
  Config c;
  c.params = {{"delta", delta}, {"eta", eta}, {"c0", c0}};
  auto term = [&](int power, std::string limit) {
    TermSpec t{power, std::move(limit), std::nullopt};
    if (perturbed) t.perturbation = "0.1*exp(-x^2)";
    return t;
  };
  c.entries[0] = {term(2, "9*eta/(2*delta)"), term(1, "c0 - 17/21"), term(0, "-5/(2*delta)")};
  c.entries[1] = {term(3, "5/(6*delta)"), term(2, "-2*eta/delta"), term(1, "1/7"), term(0, "5/(2*delta)")};
  c.entries[2] = {term(1, "-1")};
  c.entries[3] = {term(1, "c0")};
  return c;
}

bool equivalent(const Config& a, const Config& b, double tol) {
  if (a.params != b.params || !(a.tolerances == b.tolerances)) return false;
  const auto& ga = a.grids;
  const auto& gb = b.grids;
  if (ga.x_max != gb.x_max || ga.x_points != gb.x_points || ga.xi_min != gb.xi_min || ga.xi_max != gb.xi_max ||
      ga.xi_points != gb.xi_points)
    return false;
  const OperatorMatrix ta = a.build_operator();
  const OperatorMatrix tb = b.build_operator();
  std::vector<double> xs{-std::numeric_limits<double>::infinity()};
  for (int k = -20; k <= 20; ++k) xs.push_back(0.5 * k);
  for (Entry e : kEntries) {
    const DiffSymbol& sa = ta.entry(e);
    const DiffSymbol& sb = tb.entry(e);
    if (sa.order() != sb.order()) return false;
    for (int j = 0; j <= sa.order(); ++j)
      for (double x : xs)
        if (std::abs(sa.coeff(j).value(x) - sb.coeff(j).value(x)) > tol) return false;
  }
  return true;
}

}  // namespace essspec
