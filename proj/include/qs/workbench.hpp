#pragma once

// Run configuration, JSON result documents and the command implementations
// behind the qslopes tool.

#include <qs/spectral.hpp>

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qs::wb {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kInvalid = 1, kUncertified = 2 };

/// Bad configuration or malformed input; maps to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Configuration

/// Keys accepted in config files, QS_* variables and flags.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"p",     "k",    "k0",     "scale-m", "width", "weights", "trunc-M",
                                             "prec-N", "v",   "h",      "ops",     "out",   "seed",    "splitting"};
  return keys;
}

using Settings = std::map<std::string, std::string>;

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline void check_key(const std::string& key, const std::string& where) {
  for (const auto& k : config_keys())
    if (k == key) return;
  throw ConfigError("unknown setting '" + key + "' in " + where);
}

/// Flat "key = value" lines; '#' starts a comment.
inline Settings parse_config_text(const std::string& text, const std::string& where = "config") {
  Settings out;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ":" + std::to_string(n) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    check_key(key, where + ":" + std::to_string(n));
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

inline Settings read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

/// QS_P, QS_TRUNC_M, ...: the key upper-cased with '-' as '_'.
inline std::string env_name(const std::string& key) {
  std::string s = "QS_";
  for (char c : key) s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

inline Settings read_environment(const std::function<const char*(const char*)>& getenv = [](const char* n) { return std::getenv(n); }) {
  Settings out;
  for (const auto& k : config_keys())
    if (const char* v = getenv(env_name(k).c_str())) out[k] = v;
  return out;
}

/// Later layers win.
inline Settings merge(std::initializer_list<Settings> layers) {
  Settings out;
  for (const auto& l : layers)
    for (const auto& [k, v] : l) out[k] = v;
  return out;
}

struct RunConfig {
  unsigned p = 3;
  /// Fixed weight, for slopes, charpoly and bgg-check.
  std::optional<int> k;
  /// Family centre, scale exponent and series width, for family.
  std::optional<int> k0;
  int scale_m = 5;
  int width = 8;
  std::vector<int> weights;
  int v = 0;
  int M = 40;
  int N = 60;
  std::string h = "2.9";
  std::vector<std::string> ops{"T5", "T7"};
  std::string out;
  std::uint64_t seed = 1;
  int splitting = 0;
  /// Every setting as given, for the metadata.
  Settings echo;

  mpq_class slope_bound() const { return parse_rational(h); }
  WeightSetup setup() const {
    WeightSetup w;
    w.p = p;
    w.k = *k;
    w.v = v;
    w.M = M;
    w.N = N;
    w.splitting_choice = splitting;
    return w;
  }
};

namespace detail {

inline long parse_int(const Settings& s, const std::string& key, long lo, long hi) {
  const std::string& v = s.at(key);
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  if (x < lo || x > hi) throw ConfigError(key + " = " + v + " is out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v + ",") {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace detail

/// Operator names "T5" / "T_5" / "S5" to the prime 5; "U" / "U3" / "U_3" to p.
inline long operator_prime(const std::string& name, unsigned p) {
  if (name.empty() || (name[0] != 'T' && name[0] != 'S' && name[0] != 'U'))
    throw ConfigError("operator '" + name + "': expected T<l>, S<l> or U<p>");
  std::string digits = name.substr(1);
  if (!digits.empty() && digits[0] == '_') digits.erase(0, 1);
  if (name[0] == 'U' && digits.empty()) return static_cast<long>(p);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 6)
    throw ConfigError("operator '" + name + "': bad prime");
  const long l = std::stol(digits);
  if (name[0] == 'U') {
    if (l != static_cast<long>(p)) throw ConfigError("operator '" + name + "': U is only defined at p = " + std::to_string(p));
    return l;
  }
  if (!detail::is_prime(l) || l == 2 || l == static_cast<long>(p))
    throw ConfigError("operator '" + name + "': " + name[0] + "_l needs a prime l not dividing 2p");
  return l;
}

inline HeckeOp operator_kind(const std::string& name) {
  return name[0] == 'U' ? HeckeOp::Up : name[0] == 'S' ? HeckeOp::Sl : HeckeOp::Tl;
}

inline std::string operator_name(const std::string& name, unsigned p) {
  return std::string(1, name.empty() ? '?' : name[0]) + "_" + std::to_string(operator_prime(name, p));
}

/// Validate merged settings for the given command.
inline RunConfig make_config(const Settings& s, const std::string& command) {
  RunConfig c;
  c.echo = s;
  auto has = [&](const char* k) { return s.count(k) > 0; };
  if (has("p")) c.p = static_cast<unsigned>(detail::parse_int(s, "p", 2, 997));
  if (c.p == 2 || !detail::is_prime(c.p)) throw ConfigError("p = " + std::to_string(c.p) + ": p must be an odd prime");
  if (has("k")) c.k = static_cast<int>(detail::parse_int(s, "k", 2, 100000));
  if (has("k0")) c.k0 = static_cast<int>(detail::parse_int(s, "k0", 2, 100000));
  if (has("scale-m")) c.scale_m = static_cast<int>(detail::parse_int(s, "scale-m", 1, 60));
  if (has("width")) c.width = static_cast<int>(detail::parse_int(s, "width", 1, 64));
  if (has("v")) c.v = static_cast<int>(detail::parse_int(s, "v", 0, 1));
  if (has("trunc-M")) c.M = static_cast<int>(detail::parse_int(s, "trunc-M", 0, 2000));
  if (has("prec-N")) c.N = static_cast<int>(detail::parse_int(s, "prec-N", 4, 5000));
  if (has("seed")) {
    const std::string& v = s.at("seed");
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos || v.size() > 19)
      throw ConfigError("seed: expected a non-negative integer, got '" + v + "'");
    c.seed = std::stoull(v);
  }
  if (has("splitting")) c.splitting = static_cast<int>(detail::parse_int(s, "splitting", 0, 1000));
  if (has("out")) c.out = s.at("out");
  if (has("h")) c.h = s.at("h");
  try {
    if (c.slope_bound() < 0) throw ConfigError("h = " + c.h + ": the slope bound must be non-negative");
  } catch (const std::invalid_argument&) {
    throw ConfigError("h = " + c.h + ": expected a rational such as 2, 5/2 or 2.9");
  }
  if (has("ops")) c.ops = detail::split_list(s.at("ops"));
  for (auto& o : c.ops) o = operator_name(o, c.p);
  if (has("weights"))
    for (const auto& w : detail::split_list(s.at("weights"))) {
      Settings one{{"weights", w}};
      c.weights.push_back(static_cast<int>(detail::parse_int(one, "weights", 2, 100000000)));
    }

  if (command == "slopes" || command == "charpoly" || command == "bgg-check") {
    if (!c.k) throw ConfigError(command + " needs a weight: pass --k");
    if (command == "slopes" && c.M < *c.k - 2)
      throw ConfigError("trunc-M = " + std::to_string(c.M) + " is below k - 2 = " + std::to_string(*c.k - 2) +
                        "; the classical comparison needs M >= k - 2");
    if (command == "bgg-check" && (c.v != 0 || c.M < *c.k))
      throw ConfigError("bgg-check needs v = 0 and trunc-M >= k");
  }
  if (command == "family") {
    if (!c.k0) throw ConfigError("family needs a centre weight: pass --k0");
    const int pm1 = static_cast<int>(c.p) - 1;
    for (int w : c.weights)
      if (((w - *c.k0) % pm1 + pm1) % pm1 != 0)
        throw ConfigError("weight " + std::to_string(w) + " is not congruent to k0 mod p - 1");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Serialisation

inline Json to_json(const Padic& x) {
  Json j;
  if (x.is_exact_zero()) {
    j["valuation"] = nullptr;
    j["digits"] = "";
    j["precision"] = nullptr;
    return j;
  }
  j["valuation"] = x.valuation();
  j["digits"] = x.unit_digits();
  j["precision"] = x.absprec();
  return j;
}

inline Padic padic_from_json(const Json& j, unsigned p, int cap) {
  try {
    if (j.at("valuation").is_null()) return Padic::zero(p, cap);
    return Padic::from_digits(p, cap, j.at("valuation").get<int>(), j.at("digits").get<std::string>(), j.at("precision").get<int>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad p-adic number: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad p-adic number: ") + e.what());
  }
}

inline Json to_json(const Polynomial& f) {
  Json a = Json::array();
  for (const auto& c : f) a.push_back(to_json(c));
  return a;
}

inline Polynomial polynomial_from_json(const Json& j, unsigned p, int cap) {
  Polynomial out;
  for (const auto& c : j) out.push_back(padic_from_json(c, p, cap));
  return out;
}

inline Json to_json(const FamilyCoefficient& c) {
  Json a = Json::array();
  for (int n = 0; n < c.width(); ++n) a.push_back(to_json(c[n]));
  return a;
}

inline Json to_json(const PolynomialOver<FamilyCoefficient>& f) {
  Json a = Json::array();
  for (const auto& c : f) a.push_back(to_json(c));
  return a;
}

inline Json to_json(const PadicMatrix& A) {
  Json rows = Json::array();
  for (int r = 0; r < A.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < A.cols(); ++c) row.push_back(to_json(A(r, c)));
    rows.push_back(row);
  }
  return rows;
}

inline PadicMatrix matrix_from_json(const Json& j, unsigned p, int cap) {
  const int n = static_cast<int>(j.size());
  const int m = n == 0 ? 0 : static_cast<int>(j[0].size());
  PadicMatrix A = PadicMatrix::zero(n, m, Padic::zero(p, cap));
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(j[static_cast<std::size_t>(r)].size()) != m) throw ConfigError("ragged matrix");
    for (int c = 0; c < m; ++c) A(r, c) = padic_from_json(j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], p, cap);
  }
  return A;
}

inline std::string rational_string(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return c.get_str();
}

inline Json to_json(const NewtonPolygon& np) {
  Json v = Json::array();
  for (const auto& [x, y] : np.vertices) v.push_back(Json::array({x, y}));
  Json j;
  j["vertices"] = v;
  j["certified_until"] = np.certified_until;
  return j;
}

inline Json to_json(const SlopeMultiset& s) {
  Json a = Json::array();
  for (const auto& [slope, mult] : s.slopes) {
    Json e;
    e["slope"] = rational_string(slope);
    e["multiplicity"] = mult;
    e["certified"] = s.certified;
    a.push_back(e);
  }
  return a;
}

// ---------------------------------------------------------------------------
// Documents

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// The document without its hash, timings and output path, none of which
/// bear on the results.
inline Json hashed_region(const Json& doc) {
  Json d = doc;
  d.erase("hash");
  if (d.contains("metadata") && d["metadata"].is_object()) {
    d["metadata"].erase("timings_ms");
    if (d["metadata"].contains("config") && d["metadata"]["config"].is_object()) d["metadata"]["config"].erase("out");
  }
  return d;
}

inline std::string document_hash(const Json& doc) {
  std::ostringstream s;
  s << "fnv1a64:" << std::hex;
  s.width(16);
  s.fill('0');
  s << fnv1a(hashed_region(doc).dump());
  return s.str();
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline Json new_document(const std::string& command, const RunConfig& c) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  Json cfg;
  for (const auto& [k, v] : c.echo) cfg[k] = v;
  Json eff;
  eff["p"] = c.p;
  if (c.k) eff["k"] = *c.k;
  if (c.k0) {
    eff["k0"] = *c.k0;
    eff["scale-m"] = c.scale_m;
    eff["width"] = c.width;
    eff["weights"] = c.weights;
  }
  eff["v"] = c.v;
  eff["trunc-M"] = c.M;
  eff["prec-N"] = c.N;
  eff["h"] = c.h;
  eff["ops"] = c.ops;
  eff["seed"] = c.seed;
  eff["splitting"] = c.splitting;
  doc["metadata"]["config"] = cfg;
  doc["metadata"]["effective"] = eff;
  doc["metadata"]["versions"] = {{"qslopes", kToolVersion}, {"gmp", gmp_version}, {"schema", kSchemaVersion}};
  doc["metadata"]["timings_ms"] = Json::object();
  doc["results"] = Json::object();
  return doc;
}

inline void seal(Json& doc) { doc["hash"] = document_hash(doc); }

struct CommandResult {
  Json document;
  int exit_code = kOk;
};

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline Json valuation_json(int v) { return v >= kInfinitePrecision ? Json(nullptr) : Json(v); }

inline Json series_json(const CharSeries& F) {
  Json j;
  j["coefficients"] = to_json(F.coeffs);
  j["a_priori"] = F.a_priori;
  return j;
}

inline Json factor_json(const SlopeRun& run) {
  Json j;
  if (!run.factor) {
    j["error"] = run.error;
    return j;
  }
  j["degree"] = run.factor->degree;
  j["precision"] = valuation_json(run.factor->precision);
  j["coefficients"] = to_json(run.factor->small);
  return j;
}

inline bool same_slopes(const SlopeMultiset& a, const SlopeMultiset& b) { return a.slopes == b.slopes; }

/// Commutators of the named operators, with U_p first.
inline Json commutators_json(const std::vector<NamedOperator>& ops) {
  Json a = Json::array();
  for (const auto& e : commutation_report(ops)) a.push_back({{"a", e.a}, {"b", e.b}, {"min_valuation", valuation_json(e.min_valuation)}});
  return a;
}

}  // namespace detail

/// Fixed-weight pipeline: char series, polygon, slopes <= h, stabilisation at
/// M + 10, the classical cross-check and Hecke tables on the slope <= h part.
inline CommandResult cmd_slopes(const RunConfig& c) {
  Json doc = new_document("slopes", c);
  Json& R = doc["results"];
  Json& T = doc["metadata"]["timings_ms"];
  const WeightSetup w = c.setup();
  const mpq_class h = c.slope_bound();
  const int step = 10;

  Timer t;
  const SlopeRun base = slope_run(w, h, c.seed);
  T["base"] = t.ms();
  WeightSetup w2 = w;
  w2.M += step;
  t = Timer();
  const SlopeRun ext = slope_run(w2, h, c.seed);
  T["stabilization"] = t.ms();

  const SlopeMultiset ms = slope_multiset(base.series.coeffs, h, base.series.a_priori);
  const SlopeMultiset ms2 = slope_multiset(ext.series.coeffs, h, ext.series.a_priori);
  R["weight"] = {{"p", w.p}, {"k", w.k}, {"v", w.v}, {"trunc-M", w.M}, {"prec-N", w.N}};
  R["h"] = rational_string(h);
  R["char_series"] = detail::series_json(base.series);
  R["newton_polygon"] = to_json(base.polygon);
  R["slopes"] = to_json(ms);
  R["slopes_certified"] = ms.certified;
  R["factor"] = detail::factor_json(base);

  const int agreement_digits = base.factor && ext.factor ? agreement(base.factor->small, ext.factor->small, w.N) : 0;
  const int required = w.N / 2;
  const bool stable = ms.certified && ms2.certified && detail::same_slopes(ms, ms2) && base.factor && ext.factor &&
                      base.factor->degree == ext.factor->degree && agreement_digits >= required;
  R["stabilization"] = {{"trunc-M", w2.M},
                        {"slopes", to_json(ms2)},
                        {"factor_agreement_digits", agreement_digits},
                        {"required_digits", required},
                        {"unchanged", stable}};

  t = Timer();
  const ClassicalComparison cc = classical_compare(w, h, 2 * w.N / 3);
  T["classical"] = t.ms();
  Json cj;
  cj["verdict"] = cc.pass() ? "PASS" : "FAIL";
  cj["classical_dim"] = cc.classical_dim;
  cj["agreement_digits"] = cc.agreement_digits;
  cj["required_digits"] = cc.required_digits;
  cj["classical_factor"] = to_json(cc.classical);
  if (!cc.error.empty()) cj["error"] = cc.error;
  R["classical_compare"] = cj;

  Json hj;
  hj["operators"] = Json::object();
  std::optional<EtaleDiagnostic> et;
  if (base.factor) {
    t = Timer();
    const AutomorphicSpace S = w.space();
    std::vector<NamedOperator> others;
    for (const auto& name : c.ops) {
      const long l = operator_prime(name, w.p);
      if (name[0] == 'U') continue;
      others.push_back({name, hecke_matrix(S, operator_kind(name), l, c.seed)});
    }
    try {
      const SlopeSubspace sub = slope_subspace(base.U, base.factor->small, others);
      hj["dimension"] = sub.dim();
      hj["preservation"] = detail::valuation_json(sub.preservation);
      if (sub.dim() > 0) {
        std::vector<NamedOperator> ops{{"U_" + std::to_string(w.p), sub.up}};
        for (const auto& o : sub.restricted) ops.push_back(o);
        for (const auto& o : ops) hj["operators"][o.name] = to_json(o.matrix);
        hj["commutators"] = detail::commutators_json(ops);
      } else {
        hj["commutators"] = Json::array();
      }
    } catch (const PrecisionError& e) {
      hj["error"] = e.what();
    }
    T["hecke"] = t.ms();
    et = etale_diagnostic(w.k, base.factor->small);
  } else {
    hj["error"] = base.error;
  }
  R["hecke"] = hj;
  if (et) R["etale"] = {{"regular", et->regular}, {"eigenspace_dim", et->eigenspace_dim}, {"verdict", et->verdict}};

  const bool ok = ms.certified && base.factor && stable && cc.pass() && !hj.contains("error");
  R["verdict"] = {{"certified", ms.certified && base.factor.has_value()}, {"stable", stable}, {"classical", cj["verdict"]}, {"ok", ok}};
  seal(doc);
  return {doc, ok ? kOk : kUncertified};
}

/// Family char series over the disc around k0, its slope <= h chart and the
/// degree at each requested weight computed three ways.
inline CommandResult cmd_family(const RunConfig& c) {
  Json doc = new_document("family", c);
  Json& R = doc["results"];
  Json& T = doc["metadata"]["timings_ms"];
  const mpq_class h = c.slope_bound();
  const WeightCharacter kappa = WeightCharacter::family(c.p, c.N, *c.k0, c.scale_m, c.width);
  Timer t;
  const FamilyFredholm F = family_char_series(kappa, c.v, c.M);
  T["family_series"] = t.ms();
  R["family"] = {{"p", c.p}, {"k0", *c.k0}, {"scale-m", c.scale_m}, {"width", c.width}, {"v", c.v}, {"trunc-M", c.M}, {"prec-N", c.N}};
  R["h"] = rational_string(h);
  Json sj;
  sj["coefficients"] = to_json(F.series.coeffs);
  sj["a_priori"] = F.series.a_priori;
  R["char_series"] = sj;
  t = Timer();
  const ConstancyReport rep = local_constancy_check(F, h, c.weights, c.M, c.N);
  T["specializations"] = t.ms();
  Json ch;
  if (rep.chart_error.empty()) {
    ch["degree"] = rep.chart.degree;
    ch["constant_degree"] = rep.chart.constant_degree;
    ch["factor"] = to_json(rep.chart.factor);
  } else {
    ch["error"] = rep.chart_error;
  }
  R["chart"] = ch;
  Json es = Json::array();
  for (const auto& e : rep.entries) {
    Json j{{"k", e.k}, {"direct", e.direct}, {"specialized", e.specialized}, {"chart", e.chart}, {"equal", e.pass()}};
    if (!e.note.empty()) j["note"] = e.note;
    es.push_back(j);
  }
  R["specializations"] = es;
  const bool ok = rep.pass();
  R["verdict"] = {{"chart_certified", rep.chart_error.empty() && rep.chart.constant_degree}, {"equal_degrees", ok}};
  seal(doc);
  return {doc, ok ? kOk : kUncertified};
}

/// Char series of U_p on the overconvergent space and the characteristic
/// polynomials of the requested operators on the classical space.
inline CommandResult cmd_charpoly(const RunConfig& c) {
  Json doc = new_document("charpoly", c);
  Json& R = doc["results"];
  const WeightSetup w = c.setup();
  Timer t;
  const PadicMatrix U = hecke_matrix(w.space(), HeckeOp::Up, static_cast<long>(w.p), c.seed);
  const CharSeries F = char_series(U);
  doc["metadata"]["timings_ms"]["overconvergent"] = t.ms();
  R["weight"] = {{"p", w.p}, {"k", w.k}, {"v", w.v}, {"trunc-M", w.M}, {"prec-N", w.N}};
  R["char_series"] = detail::series_json(F);
  R["newton_polygon"] = to_json(newton_polygon(F.coeffs, F.a_priori));
  t = Timer();
  const AutomorphicSpace C = w.classical_space();
  R["classical_dim"] = C.dim;
  Json polys = Json::object();
  std::vector<std::string> names{"U_" + std::to_string(w.p)};
  for (const auto& o : c.ops)
    if (o[0] != 'U') names.push_back(o);
  for (const auto& name : names) {
    const long l = operator_prime(name, w.p);
    const HeckeOp op = operator_kind(name);
    polys[name] = C.dim > 0 ? to_json(char_series_berkowitz(hecke_matrix(C, op, l, c.seed))) : to_json(Polynomial{C.spec.scalar(1)});
  }
  R["classical_char_polys"] = polys;
  doc["metadata"]["timings_ms"]["classical"] = t.ms();
  seal(doc);
  return {doc, kOk};
}

/// D_{k-1} U_p = p^{k-1} U_p D_{k-1} on weight k.
inline CommandResult cmd_bgg_check(const RunConfig& c) {
  Json doc = new_document("bgg-check", c);
  Timer t;
  const BggCheck b = bgg_check(c.p, *c.k - 2, 0, c.M, c.N);
  doc["metadata"]["timings_ms"]["check"] = t.ms();
  doc["results"] = {{"k1", b.k1},
                    {"k2", b.k2},
                    {"trunc-M", b.M},
                    {"prec-N", b.N},
                    {"rows_compared", b.rows},
                    {"min_valuation", detail::valuation_json(b.min_valuation)},
                    {"precision", detail::valuation_json(b.precision)},
                    {"pass", b.pass()}};
  seal(doc);
  return {doc, b.pass() ? kOk : kUncertified};
}

// ---------------------------------------------------------------------------
// Verification

inline std::string serialize(const Json& doc) { return doc.dump(2) + "\n"; }

inline Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed document: ") + e.what());
  }
}

inline Json read_document(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read document " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_document(ss.str());
}

inline void write_document(const Json& doc, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << serialize(doc);
}

namespace detail {

struct Checks {
  Json list = Json::array();
  bool ok = true;
  void add(const std::string& name, bool pass, const std::string& detail = "") {
    Json j{{"check", name}, {"pass", pass}};
    if (!detail.empty()) j["detail"] = detail;
    list.push_back(j);
    ok = ok && pass;
  }
};

inline bool is_one(const Padic& x) { return !x.is_zero() && x.valuation() == 0 && (x - x.one_like()).is_zero(); }

inline Json polygon_of(const Polynomial& F, const std::vector<int>& a_priori) { return to_json(newton_polygon(F, a_priori)); }

inline void check_series(Checks& ck, const Json& R, unsigned p, int N, const std::string& tag, Polynomial& F, std::vector<int>& a_priori) {
  F = polynomial_from_json(R.at("char_series").at("coefficients"), p, N);
  a_priori = R.at("char_series").at("a_priori").get<std::vector<int>>();
  ck.add(tag + "constant term is 1", !F.empty() && is_one(F[0]));
  if (R.contains("newton_polygon")) ck.add(tag + "Newton polygon is the lower hull", polygon_of(F, a_priori) == R.at("newton_polygon"));
}

inline void verify_slopes(Checks& ck, const Json& R, unsigned p, int N) {
  Polynomial F;
  std::vector<int> ap;
  check_series(ck, R, p, N, "", F, ap);
  const mpq_class h(R.at("h").get<std::string>(), 10);
  const SlopeMultiset ms = slope_multiset(F, h, ap);
  ck.add("slope multiset", to_json(ms) == R.at("slopes") && ms.certified == R.at("slopes_certified").get<bool>());
  for (const auto& e : R.at("slopes")) ck.add("slope " + e.at("slope").get<std::string>() + " is non-negative", mpq_class(e.at("slope").get<std::string>(), 10) >= 0);
  const Json& fj = R.at("factor");
  Polynomial Q;
  if (fj.contains("coefficients")) {
    Q = polynomial_from_json(fj.at("coefficients"), p, N);
    ck.add("factor starts with 1", !Q.empty() && is_one(Q[0]));
    ck.add("factor degree matches slope count", static_cast<int>(Q.size()) - 1 == fj.at("degree").get<int>() &&
                                                    (!ms.certified || ms.count() == fj.at("degree").get<int>()));
    std::string why;
    bool same = false;
    try {
      const auto f = slope_le_h_factor(F, h, ap);
      const int need = fj.at("precision").is_null() ? N : fj.at("precision").get<int>();
      const int got = agreement(f.small, Q, N);
      same = f.degree == static_cast<int>(Q.size()) - 1 && got >= need;
      why = std::to_string(got) + " digits, " + std::to_string(need) + " claimed";
    } catch (const std::exception& e) {
      why = e.what();
    }
    ck.add("factor recomputed from the series", same, why);
  }
  const Json& cj = R.at("classical_compare");
  if (cj.at("verdict") == "PASS") {
    const Polynomial C = polynomial_from_json(cj.at("classical_factor"), p, N);
    const int got = Q.empty() ? 0 : agreement(Q, C, N);
    ck.add("classical factor agrees", C.size() == Q.size() && got >= cj.at("required_digits").get<int>() &&
                                          got == cj.at("agreement_digits").get<int>(),
           std::to_string(got) + " digits");
  }
  const Json& hj = R.at("hecke");
  if (hj.contains("commutators") && !hj.at("operators").empty()) {
    std::vector<NamedOperator> ops;
    for (const auto& [name, m] : hj.at("operators").items()) ops.push_back({name, matrix_from_json(m, p, N)});
    ck.add("commutators recomputed", commutators_json(ops) == hj.at("commutators"));
    const std::string up = "U_" + std::to_string(p);
    if (hj.at("operators").contains(up) && !Q.empty()) {
      // The restricted U_p is killed by the reversed factor.
      const PadicMatrix Z = reversed_polynomial_at(Q, matrix_from_json(hj.at("operators").at(up), p, N));
      const int need = hj.at("preservation").is_null() ? N / 2 : hj.at("preservation").get<int>() / 2;
      ck.add("factor annihilates U_p on the slope subspace", Z.min_valuation() >= need, std::to_string(Z.min_valuation()));
    }
  }
}

inline void verify_family(Checks& ck, const Json& R, unsigned p, int N) {
  const int W = R.at("family").at("width").get<int>();
  PolynomialOver<FamilyCoefficient> F;
  for (const auto& c : R.at("char_series").at("coefficients")) {
    std::vector<Padic> parts;
    for (const auto& x : c) parts.push_back(padic_from_json(x, p, N));
    if (static_cast<int>(parts.size()) != W) throw ConfigError("family coefficient has the wrong width");
    F.push_back(FamilyCoefficient(parts));
  }
  bool one = !F.empty() && is_one(F[0][0]);
  for (int n = 1; one && n < W; ++n) one = F[0][n].is_zero();
  ck.add("constant term is 1", one);
  FamilyFredholm fam;
  fam.kappa = WeightCharacter::family(p, N, R.at("family").at("k0").get<int>(), R.at("family").at("scale-m").get<int>(), W);
  fam.v = R.at("family").at("v").get<int>();
  fam.M = R.at("family").at("trunc-M").get<int>();
  fam.series.coeffs = F;
  fam.series.a_priori = R.at("char_series").at("a_priori").get<std::vector<int>>();
  const mpq_class h(R.at("h").get<std::string>(), 10);
  const Json& ch = R.at("chart");
  if (ch.contains("degree")) {
    bool same = false;
    try {
      const FamilyChart c = family_chart(fam, h);
      same = c.degree == ch.at("degree").get<int>() && c.constant_degree == ch.at("constant_degree").get<bool>();
    } catch (const std::exception&) {
    }
    ck.add("chart degree recomputed", same);
  }
  for (const auto& e : R.at("specializations")) {
    const int k = e.at("k").get<int>();
    int d = -1;
    try {
      d = slope_le_h_factor(fam.at(k), h, fam.series.a_priori).degree;
    } catch (const std::exception&) {
    }
    ck.add("specialisation at k = " + std::to_string(k), d == e.at("specialized").get<int>());
    const bool eq = e.at("direct") == e.at("specialized") && e.at("direct") == e.at("chart") && e.at("direct").get<int>() >= 0;
    ck.add("equality flag at k = " + std::to_string(k), eq == e.at("equal").get<bool>());
  }
}

inline void verify_charpoly(Checks& ck, const Json& R, unsigned p, int N) {
  Polynomial F;
  std::vector<int> ap;
  check_series(ck, R, p, N, "", F, ap);
  for (const auto& [name, poly] : R.at("classical_char_polys").items()) {
    const Polynomial P = polynomial_from_json(poly, p, N);
    ck.add(name + " char poly has constant term 1", !P.empty() && is_one(P[0]));
    ck.add(name + " char poly degree", static_cast<int>(P.size()) - 1 == R.at("classical_dim").get<int>());
  }
}

inline void verify_bgg(Checks& ck, const Json& R) {
  const bool claimed = R.at("pass").get<bool>();
  const Json& mv = R.at("min_valuation");
  const Json& pr = R.at("precision");
  const bool consistent = mv.is_null() || (!pr.is_null() && (mv.get<int>() >= pr.get<int>()) == claimed);
  ck.add("verdict consistent with valuations", consistent && (!mv.is_null() || claimed));
}

}  // namespace detail

/// Recompute the cheap invariants of a document from its own data.
inline CommandResult cmd_verify(const Json& doc) {
  detail::Checks ck;
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["command"] = "verify";
  try {
    if (!doc.is_object() || !doc.contains("schema_version")) throw ConfigError("document has no schema_version");
    if (doc.at("schema_version") != kSchemaVersion)
      throw ConfigError("unsupported schema_version " + doc.at("schema_version").dump());
    ck.add("hash", doc.contains("hash") && doc.at("hash") == document_hash(doc));
    const std::string cmd = doc.at("command").get<std::string>();
    const Json& eff = doc.at("metadata").at("effective");
    const unsigned p = eff.at("p").get<unsigned>();
    const int N = eff.at("prec-N").get<int>();
    const Json& R = doc.at("results");
    if (cmd == "slopes")
      detail::verify_slopes(ck, R, p, N);
    else if (cmd == "family")
      detail::verify_family(ck, R, p, N);
    else if (cmd == "charpoly")
      detail::verify_charpoly(ck, R, p, N);
    else if (cmd == "bgg-check")
      detail::verify_bgg(ck, R);
    else
      throw ConfigError("unknown document command '" + cmd + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed document: ") + e.what());
  }
  out["checks"] = ck.list;
  out["verified"] = ck.ok;
  return {out, ck.ok ? kOk : kInvalid};
}

}  // namespace qs::wb
