#include "ahe/cli/cli.hpp"

#include "ahe/compactify/compactify.hpp"
#include "ahe/error.hpp"
#include "ahe/renorm/renorm.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace ahe::cli {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorCode::kUsage, msg); }

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    usage("number: '" + text + "' in " + what + " is not a finite decimal");
  }
  return v;
}

std::pair<double, double> parse_range(const std::string& text, const std::string& what) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) usage("range: " + what + " must be lo..hi, got '" + text + "'");
  const double lo = parse_number(text.substr(0, dots), what);
  const double hi = parse_number(text.substr(dots + 2), what);
  if (!(lo < hi)) usage("range: " + what + " needs lo < hi");
  return {lo, hi};
}

// Requires exactly the named keys (plus optional ones) and returns them.
void expect_keys(const FamilySpec& s, const std::vector<std::string>& required,
                 const std::vector<std::string>& optional = {}) {
  for (const auto& k : required) {
    if (!s.params.count(k)) usage("family: " + s.tag + " requires key '" + k + "'");
  }
  for (const auto& [k, v] : s.params) {
    const bool known = std::find(required.begin(), required.end(), k) != required.end() ||
                       std::find(optional.begin(), optional.end(), k) != optional.end();
    if (!known) usage("family: unknown key '" + k + "' for " + s.tag);
  }
}

int integer_key(const FamilySpec& s, const std::string& key) {
  const double v = s.params.at(key);
  if (v != std::floor(v) || std::abs(v) > 1e6) usage("family: key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

std::string subject_of(const FamilySpec& s) {
  std::string out = s.tag;
  char sep = ':';
  for (const auto& [k, v] : s.params) {
    std::ostringstream os;
    os << v;
    out += sep + k + "=" + os.str();
    sep = ',';
  }
  return out;
}

void add(std::vector<Check>& out, const std::string& subject, Check c) {
  c.id = subject + "/" + c.id;
  out.push_back(std::move(c));
}

Check info(std::string id, std::string anchor, double value, std::string note = {}) {
  Check c;
  c.id = std::move(id);
  c.anchor = std::move(anchor);
  c.status = Status::kInfo;
  c.value = value;
  c.expected = NAN;
  c.tolerance = NAN;
  c.residual = NAN;
  c.note = std::move(note);
  return c;
}

Check error_record(const Error& e) {
  Check c = info("error", "pipeline completes", NAN, std::string(to_string(e.code())) + ": " + e.what());
  c.status = Status::kFail;
  return c;
}

template <class F>
void guarded(std::vector<Check>& out, const std::string& subject, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUsage) throw;
    add(out, subject, error_record(e));
  }
}

// --- pipelines ------------------------------------------------------------

void verify_einstein(const RunConfig& cfg, const CatalogMetric& m, std::vector<Check>& out) {
  const int n = cfg.grid.value_or(200);
  if (n < 1) usage("grid: verify-einstein needs --grid >= 1");
  double worst = 0.0;
  for (const auto& p : m.sample_points(static_cast<std::size_t>(n)))
    worst = std::max(worst, einstein_residual(m.field, p));
  add(out, m.id, make_check("einstein-residual", "Ric + 3g = 0 over interior samples", worst, 0.0,
                            worst, cfg.tol.value_or(1e-6),
                            std::to_string(n) + " quasi-random samples"));
}

void fg_pipeline(const RunConfig& cfg, const CatalogMetric& m, std::vector<Check>& out,
                 json& data) {
  const double tol = cfg.tol.value_or(1e-5);
  const auto c = geodesic_compactify(m);
  const auto e = fg_expand(c, boundary_samples(c, static_cast<std::size_t>(cfg.grid.value_or(4))));
  const std::string s = m.id;
  add(out, s, make_check("g0-boundary-metric", "g(0) equals the boundary representative",
                         e.max_g0_error, 0.0, e.max_g0_error, 1e-8));
  add(out, s, make_check("g1-vanishes", "no odd t^1 term in the geodesic expansion", e.max_g1, 0.0,
                         e.max_g1, 1e-6));
  add(out, s, make_check("g3-trace", "g(3) is trace-free", e.max_trace, 0.0, e.max_trace, tol));
  add(out, s, make_check("g3-divergence", "g(3) is divergence-free", e.max_div, 0.0, e.max_div, tol));
  const double g2 = g2_pipeline_residual(c, e);
  add(out, s, make_check("g2-closed-form", "g(2) = -(Ric_gamma - s_gamma/4 gamma)", g2, 0.0, g2,
                         tol));
  double g3_max = 0.0, g2_ball = 0.0;
  json points = json::array();
  for (const auto& p : e.points) {
    g3_max = std::max(g3_max, p.norm_g3);
    g2_ball = std::max(g2_ball, std::sqrt(norm_sq<3>(p.g2 + 0.5 * p.gamma, p.gamma.inverse())));
    points.push_back({{"y", p.y}, {"norm_g3", p.norm_g3}, {"trace_g3", p.trace_g3},
                      {"div_g3", p.div_g3}, {"fit_residual", p.fit_residual}});
  }
  if (m.family == Family::kPoincareBall) {
    add(out, s, make_check("g2-hyperbolic", "g(2) = -1/2 gamma on the round sphere", g2_ball, 0.0,
                           g2_ball, 1e-6));
    add(out, s, make_check("g3-vanishes", "g(3) = 0 for the hyperbolic ball", g3_max, 0.0, g3_max,
                           1e-6));
  } else {
    add(out, s, info("g3-norm", "max |g(3)| over boundary samples", g3_max));
  }
  if (g3_max > 1e-3 && m.family == Family::kAdSSchwarzschild) {
    const auto rule = conformal_rule_check(m, 2.0);
    add(out, s, compare("g3-conformal-rule", "|g(3)| scales as lambda^-3 under gamma -> lambda^2 gamma",
                        rule.norm_ratio, rule.expected_ratio, 1e-4, "lambda = 2"));
  }
  data[s] = {{"t_grid", e.t_grid}, {"powers", e.powers}, {"points", points}};
}

void g2_calibration(std::vector<Check>& out) {
  const auto cal = calibrate_g2_sign();
  Check c = make_check("g2-sign", "sign of g(2) calibrated on the hyperbolic ball", cal.sign, kG2Sign,
                       std::abs(cal.sign - kG2Sign), 0.0);
  std::ostringstream note;
  note << "fit residual " << cal.residual_minus << " for -(Ric - s/4 gamma), " << cal.residual_plus
       << " for +(Ric - s/4 gamma); the displayed expansion carries the opposite sign";
  c.note = note.str();
  if (c.status == Status::kPass && cal.residual_minus < 1e-6 && cal.residual_plus > 1.0)
    c.status = Status::kPassDiscrepancy;
  add(out, "calibration", c);
}

void renorm_pipeline(const RunConfig& cfg, const CatalogMetric& m, std::vector<Check>& out,
                     json& data) {
  const auto r = gauss_bonnet_check(m);
  const std::string s = m.id;
  add(out, s, make_check("gauss-bonnet", "(1/8pi^2) int |W|^2 = chi - (3/4pi^2) V",
                         r.identity_residual, 0.0, r.identity_residual, cfg.tol.value_or(1e-3)));
  add(out, s, make_check("volume-fit", "vol(t) = v3 t^-3 + v1 t^-1 + V + O(t)", r.fit_residual, 0.0,
                         r.fit_residual, 1e-4));
  add(out, s, info("renormalized-volume", "constant term of the volume expansion", r.V));
  add(out, s, info("weyl-energy", "int |W|^2 dV", r.weyl_energy));
  if (m.family == Family::kPoincareBall) {
    add(out, s, compare("ball-volume", "V = 4 pi^2 / 3 for the hyperbolic ball", r.V,
                        4.0 * kPi * kPi / 3.0, 1e-4));
    add(out, s, compare("ball-action", "I_ren = -6 V = -8 pi^2", r.I_ren, -8.0 * kPi * kPi, 1e-3));
  }
  if (m.family == Family::kAdSSchwarzschild) {
    const double rp = m.params.count("r_plus") ? m.params.at("r_plus") : r_plus(m.params.at("m"));
    add(out, s, compare("schwarzschild-volume", "V = (8 pi^2/3) r+^2 (1 - r+^2) / (1 + 3 r+^2)", r.V,
                        8.0 * kPi * kPi / 3.0 * rp * rp * (1 - rp * rp) / (1 + 3 * rp * rp), 1e-5));
  }
  data[s] = {{"v3", r.v3}, {"v1", r.v1},           {"V", r.V},
             {"I_ren", r.I_ren}, {"weyl_energy", r.weyl_energy}, {"euler_char", r.euler_char},
             {"fit_condition", r.fit_condition}};
}

void appendix_pipeline(const CatalogMetric& m, std::vector<Check>& out) {
  const auto c = geodesic_compactify(m);
  for (auto chk : appendix_suite(c)) add(out, m.id, std::move(chk));
  const MonotonicityOptions opt;
  const auto mono = jacobian_monotonicity(c, opt);
  const double boundary = std::max(0.0, -mono.boundary_worst_step);
  add(out, m.id, make_check("boundary-jacobian-monotone",
                            "boundary Jacobian ratio non-decreasing toward the boundary", boundary, 0.0,
                            boundary, opt.tolerance,
                            std::to_string(mono.geodesics) + " geodesics x " +
                                std::to_string(mono.steps) + " steps"));
  const double bg = std::max({0.0, mono.ball_worst_step, mono.jacobi_worst_step});
  add(out, m.id, make_check("bishop-gromov", "J / sinh^3 and vol B / V_-1 non-increasing", bg, 0.0,
                            bg, opt.tolerance));
  if (m.family == Family::kPoincareBall) {
    const double dev =
        std::max(std::abs(mono.boundary_ratio_min - 0.125), std::abs(mono.boundary_ratio_max - 0.125));
    add(out, m.id, make_check("boundary-jacobian-constant", "ratio is 1/8 on the hyperbolic ball",
                              mono.boundary_ratio_min, 0.125, dev, 1e-8));
  }
}

std::pair<double, double> default_range(const FamilyCurve& c) {
  if (c.id == "bolt-period") return {0.05, 5.0};
  if (c.id == "translation") return {0.05, 10.0};
  return {c.lo, 20.0};
}

void moduli_pipeline(const RunConfig& cfg, const FamilySpec& spec, std::vector<Check>& out,
                     json& data) {
  const auto curve = make_curve(spec);
  const std::string s = curve.id;
  FoldOptions opt;
  if (cfg.grid) opt.grid = *cfg.grid;
  const auto f = fold_analysis(curve, opt);
  FoldOptions fine = opt;
  fine.grid = 2 * opt.grid;
  const auto g = fold_analysis(curve, fine);
  double drift = f.max_value == g.max_value ? 0.0 : std::abs(f.max_value - g.max_value);
  if (f.critical.size() == g.critical.size()) {
    for (std::size_t i = 0; i < f.critical.size(); ++i)
      drift = std::max(drift, std::abs(f.critical[i].parameter - g.critical[i].parameter));
  } else {
    drift = INFINITY;
  }
  add(out, s, make_check("grid-stability", "fold count and maximum agree on a doubled grid",
                         static_cast<double>(f.critical.size()),
                         static_cast<double>(g.critical.size()), drift, 1e-8));
  json crit = json::array();
  for (const auto& cp : f.critical) {
    add(out, s, info("critical-point", "interior zero of d(invariant)/d(parameter)", cp.parameter,
                     to_string(cp.kind)));
    crit.push_back({{"parameter", cp.parameter}, {"value", cp.value},
                    {"second_derivative", cp.second_derivative}, {"kind", to_string(cp.kind)}});
  }
  const double tol = cfg.tol.value_or(1e-8);
  if (curve.id == "bolt-period") {
    add(out, s, compare("beta-max", "beta <= 2 pi / sqrt(3)", f.max_value, 2 * kPi / kSqrt3, tol));
    if (!f.critical.empty()) {
      add(out, s, compare("beta-fold", "fold at r+ = 1/sqrt(3)", f.critical[0].parameter,
                          1 / kSqrt3, tol));
      add(out, s, fold_mass_check(f));
    }
  } else if (curve.id == "berger:k=1") {
    add(out, s, compare("e-max", "E_max = (2 - sqrt(3))/3", f.max_value, (2 - kSqrt3) / 3, tol));
    if (!f.critical.empty())
      add(out, s, compare("e-fold", "fold at s = 2 + sqrt(3)", f.critical[0].parameter, 2 + kSqrt3,
                          tol));
  } else if (curve.id == "berger:k=2") {
    add(out, s, compare("e-limit", "E_{s,2} -> 2/3 as s -> 1", f.lo_limit, 2.0 / 3.0, tol));
    add(out, s, make_check("e-monotone", "no interior critical point",
                           static_cast<double>(f.critical.size()), 0.0,
                           static_cast<double>(f.critical.size()), 0.0));
  } else if (spec.tag == "berger") {
    const int k = integer_key(spec, "k");
    const double s0 = round_boundary_parameter(k);
    add(out, s, compare("round-boundary", "E(s0, k) = 1 at s0 = (k + sqrt(k^2 - 3))/3",
                        curve.value(s0), 1.0, 1e-10));
    add(out, s, make_check("e-monotone", "no interior critical point",
                           static_cast<double>(f.critical.size()), 0.0,
                           static_cast<double>(f.critical.size()), 0.0));
  }
  json d = {{"critical", crit},   {"max", f.max_value},      {"argmax", f.argmax},
            {"max_attained", f.max_attained}, {"lo_limit", f.lo_limit}, {"hi_limit", f.hi_limit},
            {"grid", f.grid}};
  if (cfg.value) {
    const double v = *cfg.value;
    const auto pre = preimages(curve, v, f);
    json pj = json::array();
    bool critical = false;
    for (const auto& p : pre) {
      pj.push_back({{"parameter", p.parameter}, {"critical", p.critical}});
      critical = critical || p.critical;
    }
    d["value"] = v;
    d["preimages"] = pj;
    const auto w = nonsurjectivity_witness(curve, v);
    add(out, s, info("outside-image", "value exceeds the supremum of the invariant",
                     w.outside_image ? 1.0 : 0.0, w.outside_image ? "not attained" : "attained"));
    d["witness"] = {{"outside_image", w.outside_image}, {"sup", w.sup},
                    {"sup_parameter", w.sup_parameter}, {"sup_attained", w.sup_attained}};
    if (critical) {
      add(out, s, info("degree", "critical value, degree not evaluated", NAN));
    } else {
      IndexRule rule = trivial_index();
      if (curve.id == "bolt-period") rule = bolt_period_index();
      if (curve.id == "berger:k=1" && !f.critical.empty()) rule = fold_index(f.critical[0].parameter);
      const auto rep = degree(curve.manifold, curve.invariant + " = " + std::to_string(v), v, pre,
                              rule);
      add(out, s, info("degree", "sum of (-1)^index over preimages", rep.degree,
                       std::to_string(rep.preimages.size()) + " preimages"));
      d["degree"] = {{"degree", rep.degree}, {"mod2", rep.mod2}, {"indices", rep.indices}};
    }
  }
  data[s] = d;
}

void orbifold_pipeline(const RunConfig& cfg, std::vector<Check>& out, json& data) {
  const auto [k0, k1] = cfg.k_range;
  if (k0 < 1 || k1 < k0) usage("k-range: needs 1 <= lo <= hi");
  json rows = json::array();
  bool consistent = true;
  for (int k = k0; k <= k1; ++k) {
    const auto r = orbifold_bound(k);
    const double eta = boost::rational_cast<double>(r.eta);
    const double ale = boost::rational_cast<double>(r.ale_weyl_energy);
    // |1 - η| <= (2/3) (2 - 1/k) is the same inequality before clearing 3k
    const bool bound = std::abs(1.0 - eta) <= (2.0 / 3.0) * ale + 1e-12;
    consistent = consistent && (bound == !r.excluded);
    std::ostringstream eta_s, ale_s;
    eta_s << r.eta;
    ale_s << r.ale_weyl_energy;
    Check c = info("orbifold:k=" + std::to_string(k), "4k - 2 >= |3k - (k-1)(k-2)|",
                   static_cast<double>(r.inequality_lhs),
                   r.excluded ? "excluded" : "admitted");
    c.expected = static_cast<double>(r.inequality_rhs);
    out.push_back(c);
    rows.push_back({{"k", k}, {"eta", eta_s.str()}, {"ale_weyl_energy", ale_s.str()},
                    {"inequality_lhs", r.inequality_lhs}, {"inequality_rhs", r.inequality_rhs},
                    {"excluded", r.excluded}, {"nontrivial_group", r.nontrivial_group}});
  }
  out.push_back(make_check("orbifold-arithmetic", "integer inequality matches the signature bound",
                           consistent ? 1.0 : 0.0, 1.0, consistent ? 0.0 : 1.0, 0.0));
  data["orbifold"] = rows;
}

int expected_degree(const std::string& manifold) {
  if (manifold == "R2xS2" || manifold == "CP2-B4") return 0;
  return 1;
}

void degrees_pipeline(std::vector<Check>& out, json& data) {
  json rows = json::array();
  for (const auto& e : catalog_degrees()) {
    const auto& r = e.report;
    Check c = compare("degree:" + r.manifold, e.anchor, r.degree, expected_degree(r.manifold), 0.0,
                      e.method);
    const int mod2 = ((r.degree % 2) + 2) % 2;
    if (mod2 != r.mod2) {
      c.status = Status::kFail;
      c.note += "; mod 2 degree inconsistent";
    }
    out.push_back(c);
    rows.push_back({{"manifold", r.manifold}, {"boundary", r.boundary},
                    {"regular_value", r.regular_value}, {"preimages", r.preimages},
                    {"indices", r.indices}, {"degree", r.degree}, {"mod2", r.mod2},
                    {"anchor", e.anchor}, {"method", e.method}});
  }
  data["degrees"] = rows;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

// --- parsing ----------------------------------------------------------------

FamilySpec parse_family_spec(const std::string& text) {
  FamilySpec s;
  const auto colon = text.find(':');
  s.tag = text.substr(0, colon);
  if (s.tag.empty()) usage("family: tag must be non-empty in 'tag:key=val,key=val'");
  for (char ch : s.tag) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-'))
      usage("family: tag '" + s.tag + "' may contain only letters, digits and '-'");
  }
  if (colon == std::string::npos) return s;
  const std::string rest = text.substr(colon + 1);
  if (rest.empty()) usage("family: ':' must be followed by key=val pairs");
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const auto comma = rest.find(',', pos);
    const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) usage("family: '" + item + "' is not key=val");
    const std::string key = item.substr(0, eq);
    if (s.params.count(key)) usage("family: key '" + key + "' given twice");
    s.params[key] = parse_number(item.substr(eq + 1), "family '" + text + "'");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return s;
}

CatalogMetric make_family(const FamilySpec& s) {
  try {
    if (s.tag == "poincare") {
      expect_keys(s, {});
      return poincare_ball();
    }
    if (s.tag == "cusp") {
      expect_keys(s, {});
      return hyperbolic_cusp();
    }
    if (s.tag == "hyp-quotient" || s.tag == "quotient") {
      expect_keys(s, {"L"});
      return hyperbolic_quotient(s.params.at("L"));
    }
    if (s.tag == "ads-schw") {
      expect_keys(s, {"m"});
      return ads_schwarzschild(s.params.at("m"));
    }
    if (s.tag == "taub-bolt") {
      expect_keys(s, {"s", "k"});
      return taub_bolt(s.params.at("s"), integer_key(s, "k"));
    }
    if (s.tag == "toral") {
      expect_keys(s, {"m"}, {"a", "b", "c"});
      TorusModuli t;
      if (s.params.count("a")) t.a = s.params.at("a");
      if (s.params.count("b")) t.b = s.params.at("b");
      if (s.params.count("c")) t.c = s.params.at("c");
      return toral_black_hole(s.params.at("m"), t);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidParameter) usage("family: " + subject_of(s) + ": " + e.what());
    throw;
  }
  usage("family: unknown tag '" + s.tag +
        "' (poincare, cusp, hyp-quotient, ads-schw, taub-bolt, toral)");
}

FamilyCurve make_curve(const FamilySpec& s) {
  if (s.tag == "bolt-period") {
    expect_keys(s, {});
    return bolt_period_curve();
  }
  if (s.tag == "translation") {
    expect_keys(s, {});
    return translation_curve();
  }
  if (s.tag == "berger") {
    expect_keys(s, {"k"});
    const int k = integer_key(s, "k");
    if (k < 1) usage("family: berger needs k >= 1");
    return berger_curve(k);
  }
  usage("curve: unknown tag '" + s.tag + "' (bolt-period, translation, berger)");
}

std::vector<std::string> default_families() {
  return {"poincare",         "hyp-quotient:L=2",  "cusp",
          "ads-schw:m=0.5",   "ads-schw:m=1",      "ads-schw:m=2",
          "taub-bolt:s=3,k=1", "taub-bolt:s=2.5,k=2", "taub-bolt:s=1.5,k=5",
          "toral:m=1"};
}

// --- reports ----------------------------------------------------------------

nlohmann::json to_json(const Check& c) {
  return {{"id", c.id},          {"anchor", c.anchor},       {"status", to_string(c.status)},
          {"value", c.value},    {"expected", c.expected},   {"tolerance", c.tolerance},
          {"residual", c.residual}, {"note", c.note}};
}

nlohmann::json to_json(const Report& r) {
  json cfg = {{"subcommand", r.config.subcommand},
              {"families", r.config.families},
              {"curves", r.config.curves},
              {"format", r.config.format},
              {"k_range", {r.config.k_range.first, r.config.k_range.second}}};
  cfg["value"] = r.config.value ? json(*r.config.value) : json(nullptr);
  cfg["tol"] = r.config.tol ? json(*r.config.tol) : json(nullptr);
  cfg["grid"] = r.config.grid ? json(*r.config.grid) : json(nullptr);
  cfg["range"] = r.config.range ? json({r.config.range->first, r.config.range->second})
                                : json(nullptr);
  json records = json::array();
  std::size_t failed = 0;
  for (const auto& c : r.checks) {
    records.push_back(to_json(c));
    if (!passed(c)) ++failed;
  }
  return {{"schema_version", kSchemaVersion},
          {"tool_version", kToolVersion},
          {"config", cfg},
          {"records", records},
          {"summary", {{"records", r.checks.size()}, {"failed", failed}, {"all_pass", failed == 0}}},
          {"data", r.data}};
}

std::string to_csv(const Report& r) {
  std::ostringstream os;
  os << "id,anchor,status,value,expected,tolerance,residual,note\n";
  for (const auto& c : r.checks) {
    os << csv_quote(c.id) << ',' << csv_quote(c.anchor) << ',' << csv_quote(to_string(c.status))
       << ',' << fmt(c.value) << ',' << fmt(c.expected) << ',' << fmt(c.tolerance) << ','
       << fmt(c.residual) << ',' << csv_quote(c.note) << '\n';
  }
  return os.str();
}

CurveTable emit_curve(const FamilyCurve& curve, double lo, double hi, int points) {
  if (points < 1) throw Error(ErrorCode::kInvalidParameter, "curve grid is empty");
  if (!(lo < hi) && points > 1) throw Error(ErrorCode::kInvalidParameter, "curve range needs lo < hi");
  CurveTable t;
  t.header = curve.parameter + "," + curve.invariant + " = " + curve.formula;
  std::vector<double> ps;
  for (int i = 0; i < points; ++i)
    ps.push_back(points == 1 ? lo : lo + (hi - lo) * i / (points - 1));
  for (const auto& cp : fold_analysis(curve).critical)
    if (cp.parameter >= lo && cp.parameter <= hi) ps.push_back(cp.parameter);
  std::sort(ps.begin(), ps.end());
  for (double p : ps) {
    double v = NAN;
    if (curve.contains(p)) {
      v = curve.value(p);
    } else if (p == curve.lo) {
      v = end_limit(curve, false);
    } else if (p == curve.hi) {
      v = end_limit(curve, true);
    } else {
      throw Error(ErrorCode::kInvalidParameter, "curve range leaves the parameter interval");
    }
    t.rows.emplace_back(p, v);
  }
  return t;
}

std::string to_csv(const CurveTable& t) {
  std::ostringstream os;
  os << csv_quote(t.header.substr(0, t.header.find(','))) << ','
     << csv_quote(t.header.substr(t.header.find(',') + 1)) << '\n';
  for (const auto& [p, v] : t.rows) os << fmt(p) << ',' << fmt(v) << '\n';
  return os.str();
}

Report execute(const RunConfig& cfg) {
  Report rep;
  rep.config = cfg;
  const auto& sub = cfg.subcommand;
  auto families = cfg.families.empty() ? default_families() : cfg.families;
  std::vector<FamilySpec> fam_specs;
  for (const auto& f : families) fam_specs.push_back(parse_family_spec(f));

  auto each_family = [&](auto&& body, bool compact_only) {
    for (const auto& spec : fam_specs) {
      const auto m = make_family(spec);
      if (compact_only && !m.conformally_compact && cfg.families.empty()) continue;
      guarded(rep.checks, m.id, [&] { body(m); });
    }
  };

  if (sub == "verify-einstein" || sub == "all") {
    each_family([&](const CatalogMetric& m) { verify_einstein(cfg, m, rep.checks); }, false);
  }
  if (sub == "fg-expand" || sub == "all") {
    g2_calibration(rep.checks);
    json d = json::object();
    each_family([&](const CatalogMetric& m) { fg_pipeline(cfg, m, rep.checks, d); }, true);
    rep.data["fg"] = d;
  }
  if (sub == "renorm" || sub == "all") {
    json d = json::object();
    each_family([&](const CatalogMetric& m) { renorm_pipeline(cfg, m, rep.checks, d); }, true);
    rep.data["renorm"] = d;
  }
  if (sub == "appendix" || sub == "all") {
    each_family([&](const CatalogMetric& m) { appendix_pipeline(m, rep.checks); }, true);
  }
  if (sub == "moduli" || sub == "all") {
    std::vector<std::string> curves = cfg.curves;
    if (curves.empty()) {
      if (sub == "moduli") usage("moduli: --curve is required");
      curves = {"bolt-period", "berger:k=1", "berger:k=2", "berger:k=3", "translation"};
    }
    if (cfg.format == "csv" && sub == "moduli") {
      if (curves.size() != 1) usage("moduli: --format csv takes exactly one --curve");
      const auto curve = make_curve(parse_family_spec(curves[0]));
      const auto [lo, hi] = cfg.range.value_or(default_range(curve));
      try {
        rep.csv = to_csv(emit_curve(curve, lo, hi, cfg.grid.value_or(200)));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kInvalidParameter) usage(std::string("grid: ") + e.what());
        throw;
      }
      return rep;
    }
    json d = json::object();
    for (const auto& c : curves) {
      const auto spec = parse_family_spec(c);
      guarded(rep.checks, spec.tag, [&] { moduli_pipeline(cfg, spec, rep.checks, d); });
    }
    rep.data["moduli"] = d;
  }
  if (sub == "orbifold" || sub == "all") orbifold_pipeline(cfg, rep.checks, rep.data);
  if (sub == "catalog-degrees" || sub == "all") degrees_pipeline(rep.checks, rep.data);
  return rep;
}

// --- entry point -------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for asymptotically hyperbolic Einstein metrics", "ahe"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  std::string k_range, range;
  double value = 0.0, tol = 0.0;
  int grid = 0;
  CLI::Option* value_opt = nullptr;
  CLI::Option* range_opt = nullptr;
  CLI::Option* k_range_opt = nullptr;
  app.add_option("--out", cfg.out, "Report path (stdout when omitted)");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol", tol, "Tolerance of the primary check");
  app.add_option("--grid", grid, "Sample count (family checks) or grid size (curves)");

  const std::vector<std::pair<const char*, const char*>> subs{
      {"verify-einstein", "max |Ric + 3g| over interior samples"},
      {"fg-expand", "boundary expansion of the geodesic compactification"},
      {"renorm", "renormalized volume and the Gauss-Bonnet identity"},
      {"appendix", "compactified curvature identities and volume monotonicity"},
      {"moduli", "fold analysis, preimages and degree on a family curve"},
      {"orbifold", "orbifold bubble arithmetic for S^3/Z_k"},
      {"catalog-degrees", "degree of the boundary map for the catalog manifolds"},
      {"all", "every pipeline on the default matrix"}};
  for (const auto& [name, help] : subs) {
    auto* s = app.add_subcommand(name, help);
    const std::string n = name;
    if (n == "verify-einstein" || n == "fg-expand" || n == "renorm" || n == "appendix")
      s->add_option("--family", cfg.families, "tag:key=val,... (repeatable)");
    if (n == "moduli") {
      s->add_option("--curve", cfg.curves, "bolt-period | translation | berger:k=K")->required();
      value_opt = s->add_option("--value", value, "Boundary value for preimages and degree");
      range_opt = s->add_option("--range", range, "Parameter range lo..hi for --format csv");
    }
    if (n == "orbifold") k_range_opt = s->add_option("--k-range", k_range, "lo..hi (default 1..100)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (app.count("--tol")) cfg.tol = tol;
    if (app.count("--grid")) cfg.grid = grid;
    auto given = [](const CLI::Option* o) { return o && o->count() > 0; };
    if (given(value_opt)) cfg.value = value;
    if (given(range_opt)) cfg.range = parse_range(range, "--range");
    if (given(k_range_opt)) {
      const auto [a, b] = parse_range(k_range, "--k-range");
      if (a != std::floor(a) || b != std::floor(b)) usage("k-range: bounds must be integers");
      cfg.k_range = {static_cast<int>(a), static_cast<int>(b)};
    }
    if (cfg.format == "csv" && cfg.subcommand == "moduli" && cfg.value)
      usage("moduli: --value is not used with --format csv");
    const auto rep = execute(cfg);
    std::string text;
    if (rep.csv) {
      text = *rep.csv;
    } else if (cfg.format == "csv") {
      text = to_csv(rep);
    } else {
      text = to_json(rep).dump(2) + "\n";
    }
    if (cfg.out.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.out);
      if (!f) usage("out: cannot open '" + cfg.out + "' for writing");
      f << text;
    }
    bool ok = true;
    for (const auto& c : rep.checks) {
      if (passed(c)) continue;
      ok = false;
      err << "FAIL " << c.id << " [" << c.anchor << "] residual " << fmt(c.residual) << " tol "
          << fmt(c.tolerance);
      if (!c.note.empty()) err << " (" << c.note << ")";
      err << '\n';
    }
    return ok ? 0 : 1;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUsage) {
      err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
      return 1;
    }
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ahe::cli
