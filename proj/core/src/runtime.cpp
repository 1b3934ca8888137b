#include "lawsonflow/runtime.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"

namespace lawson {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_vec(const Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    fail(ErrorCode::ParseError, "key '" + key + "': not a finite real: '" + v + "'");
  return x;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    fail(ErrorCode::ParseError, "key '" + key + "': not an integer: '" + v + "'");
  return x;
}

Vec parse_vec(const std::string& key, const std::string& v) {
  Vec out;
  if (v.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    out.push_back(parse_double(key, trim(std::string_view(v).substr(start, comma - start))));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Key {
  const char* name;
  const char* unit;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;  // nullopt: key omitted
};

#define LF_REAL(field, unit)                                                                         \
  Key {                                                                                              \
    #field, unit, [](RunConfig& c, const std::string& v) { c.field = parse_double(#field, v); },     \
        [](const RunConfig& c) { return std::optional<std::string>(fmt(c.field)); }                  \
  }
#define LF_INT(field, type, unit)                                                                    \
  Key {                                                                                              \
    #field, unit, [](RunConfig& c, const std::string& v) { c.field = parse_int<type>(#field, v); },  \
        [](const RunConfig& c) { return std::optional<std::string>(std::to_string(c.field)); }       \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> k{
      LF_INT(p, int, "integer, first factor dimension"),
      LF_INT(q, int, "integer, second factor dimension"),
      LF_INT(l, int, "integer, unstable mode index"),
      Key{"a", "comma list of l reals, packet parameters; omit to shoot",
          [](RunConfig& c, const std::string& v) { c.a = parse_vec("a", v); },
          [](const RunConfig& c) {
            return c.a ? std::optional<std::string>(fmt_vec(*c.a)) : std::nullopt;
          }},
      LF_REAL(t0, "time, initial time, negative"),
      LF_REAL(rho, "length, outer radius of the rotated chart"),
      LF_REAL(beta, "type-II length, inner edge of the packet region"),
      LF_REAL(Lambda, "dimensionless, admissibility bound"),
      LF_REAL(R, "type-I length, parabolic region radius"),
      LF_REAL(delta, "length, half-width of the cap blend"),
      LF_INT(tip_nodes, std::size_t, "count"),
      LF_INT(ray_nodes, std::size_t, "count"),
      LF_REAL(tip_stretch, "dimensionless, tip mesh grading"),
      LF_REAL(outer_spacing, "length, arclength spacing on the cap"),
      LF_REAL(t_end, "time, end of the flow"),
      LF_INT(snapshots, std::size_t, "count, equally spaced in log(-t)"),
      LF_REAL(max_dtau, "type-II time, step cap"),
      LF_REAL(max_change, "dimensionless, per-step change limit"),
      LF_INT(max_steps, std::size_t, "count"),
      LF_REAL(tip_band, "dimensionless, tip-height band, 0 disables"),
      LF_INT(inject_failure_at_step, std::int64_t, "step index, -1 disables"),
      Key{"horizons", "comma list of times in [t0, 0), shooting schedule; empty means t0",
          [](RunConfig& c, const std::string& v) { c.horizons = parse_vec("horizons", v); },
          [](const RunConfig& c) { return std::optional<std::string>(fmt_vec(c.horizons)); }},
      LF_REAL(shoot_tol, "absolute, on |Phi|"),
      LF_INT(shoot_max_iter, int, "count"),
      LF_REAL(fd_step, "parameter units, Jacobian seed step"),
      LF_INT(seed, std::uint64_t, "integer, test utilities only"),
  };
  return k;
}

#undef LF_REAL
#undef LF_INT

std::string hex(const unsigned char* d, unsigned n) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < n; ++i) {
    out += digits[d[i] >> 4];
    out += digits[d[i] & 15];
  }
  return out;
}

std::string sha256(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    fail(ErrorCode::IoError, "SHA-256 failed");
  return hex(md, len);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << data;
  out.close();
  if (!out) fail(ErrorCode::IoError, "cannot write " + p.string());
}

std::string header() { return "# lawsonflow " + std::string(tool_version); }

}  // namespace

ConeParams RunConfig::params() const { return derive_cone_params(p, q); }
SpectralExponents RunConfig::exps() const { return spectral_exponents(params(), l); }

GeometryConfig RunConfig::geometry() const {
  GeometryConfig g;
  g.rho = rho;
  g.beta = beta;
  g.Lambda = Lambda;
  g.R = R;
  g.delta = delta;
  return g;
}

MeshConfig RunConfig::mesh() const {
  MeshConfig m;
  m.tip_nodes = tip_nodes;
  m.ray_nodes = ray_nodes;
  m.tip_stretch = tip_stretch;
  m.outer_spacing = outer_spacing;
  return m;
}

FlowConfig RunConfig::flow() const {
  FlowConfig f;
  f.t_end = t_end;
  f.snapshots = snapshots;
  f.max_dtau = max_dtau;
  f.max_change = max_change;
  f.max_steps = max_steps;
  f.tip_band = tip_band;
  f.inject_failure_at_step = inject_failure_at_step;
  return f;
}

ShootConfig RunConfig::shoot() const {
  ShootConfig s;
  s.params = params();
  s.exps = exps();
  s.geometry = geometry();
  s.mesh = mesh();
  s.flow = flow();
  s.t0 = t0;
  s.horizons = horizons.empty() ? Vec{t0} : horizons;
  s.root.tol = shoot_tol;
  s.root.max_iter = shoot_max_iter;
  s.root.fd_step = fd_step;
  return s;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto& ks = keys();
    const auto it = std::find_if(ks.begin(), ks.end(), [&](const Key& k) { return key == k.name; });
    if (it == ks.end()) fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) fail(ErrorCode::ParseError, "duplicate key '" + key + "'");
    it->set(c, value);
  }
  for (const char* required : {"p", "q", "l"})
    if (!seen.count(required)) fail(ErrorCode::ParseError, std::string("missing required key '") + required + "'");
  return c;
}

std::string serialize_config(const RunConfig& c) {
  std::string out = header() + " config\n";
  for (const Key& k : keys()) {
    const auto v = k.get(c);
    out += "# " + std::string(k.unit) + "\n";
    if (v)
      out += std::string(k.name) + " = " + *v + "\n";
    else
      out += "# " + std::string(k.name) + " absent\n";
  }
  return out;
}

std::vector<std::string> ordering_violations(const RunConfig& c) {
  std::vector<std::string> v;
  const int n = c.p + c.q;
  if (n < 8) v.push_back("n = p + q >= 8");
  if (c.p < 2 || c.q < 2) v.push_back("p, q >= 2");
  if (n == 8 && (c.p < 3 || c.q < 3)) v.push_back("p, q >= 3 when n = 8");
  if (c.l < 2) v.push_back("l >= 2");
  if (!(c.t0 < 0.0)) v.push_back("t0 < 0");
  if (!(c.t0 < c.t_end && c.t_end < 0.0)) v.push_back("t0 < t_end < 0");
  if (!(c.rho > 0.0 && c.rho <= 0.25)) v.push_back("0 < rho << 1 (policy bound rho <= 1/4)");
  if (!(c.beta > 1.0)) v.push_back("beta >> 1 (beta > 1)");
  if (!(c.R > 1.0)) v.push_back("R >> 1 (R > 1)");
  if (!(c.Lambda > 1.0)) v.push_back("Lambda >> 1 (Lambda > 1)");
  if (!(c.delta > 0.0 && c.delta < 0.25)) v.push_back("0 < delta < 1/4");
  if (!v.empty()) return v;  // the rest needs valid exponents

  const ConeParams P = c.params();
  const SpectralExponents e = c.exps();
  if (!(c.beta * tip_scale(e, c.t0) <= 0.25 * c.rho)) v.push_back("beta (-t0)^(1/2+sigma_l) <= rho/4");
  if (c.a) {
    if (static_cast<int>(c.a->size()) != c.l)
      v.push_back("a has l entries");
    else if (!(norm2(*c.a) < std::pow(c.beta, P.alpha_tilde - P.alpha)))
      v.push_back("|a| < beta^(alpha_tilde - alpha)");
  }
  for (std::size_t i = 0; i < c.horizons.size(); ++i) {
    const double h = c.horizons[i];
    if (h < c.t0 || !(h < 0.0) || (i > 0 && !(h > c.horizons[i - 1]))) {
      v.push_back("horizons increase within [t0, 0)");
      break;
    }
  }
  if (c.tip_nodes < 16 || c.ray_nodes < 16) v.push_back("tip_nodes, ray_nodes >= 16");
  if (c.snapshots < 2) v.push_back("snapshots >= 2");
  return v;
}

double admissibility_constant(const RunConfig& c, const ProfileSolution& unit) {
  auto shared = std::make_shared<const ProfileSolution>(unit);
  const Vec a = c.a ? *c.a : Vec(static_cast<std::size_t>(c.l), 0.0);
  RunConfig probe = c;
  probe.Lambda = 1.0;
  const InitialData d = assemble_initial_curve(c.params(), c.exps(), a, c.t0, probe.geometry(), shared, c.mesh());
  const AdmissibilityReport r = admissibility_check(d);
  return *std::max_element(r.worst_ratio.begin(), r.worst_ratio.end());
}

namespace {

[[noreturn]] void violation(const std::vector<std::string>& v) {
  std::string msg = "violated:";
  for (const auto& s : v) msg += " [" + s + "]";
  fail(ErrorCode::ConstraintViolation, msg);
}

void validate_with(const RunConfig& c, const ProfileSolution* unit) {
  std::vector<std::string> v = ordering_violations(c);
  if (v.empty() && unit) {
    double lam = 0.0;
    try {
      lam = admissibility_constant(c, *unit);
    } catch (const Error& e) {
      v.push_back(std::string("initial curve constructible (") + e.what() + ")");
    }
    if (v.empty() && !(c.Lambda > lam)) v.push_back("Lambda above the admissibility constant " + fmt(lam));
  }
  if (!v.empty()) violation(v);
}

}  // namespace

void validate_config(const RunConfig& c, bool check_lambda) {
  if (!check_lambda || !ordering_violations(c).empty()) return validate_with(c, nullptr);
  const ProfileSolution unit = minimal_profile(c.params(), 1.0);
  validate_with(c, &unit);
}

RunConfig load_config(const fs::path& path, bool check_lambda) {
  const RunConfig c = parse_config(read_file(path));
  validate_config(c, check_lambda);
  return c;
}

std::string run_id(const RunConfig& c) {
  return sha256(std::string(tool_version) + "\n" + serialize_config(c)).substr(0, 16);
}

fs::path default_run_root() {
  const char* env = std::getenv("LAWSONFLOW_RUN_ROOT");
  return env && *env ? fs::path(env) : fs::path("runs");
}

std::string sha256_file(const fs::path& path) { return sha256(read_file(path)); }

namespace {

double or_nan(const std::function<double()>& f) {
  try {
    return f();
  } catch (const Error&) {
    return std::nan("");
  }
}

void snapshot_rows(std::string& out, std::size_t idx, const FlowState& st) {
  auto row = [&](const char* chart, const char* frame, double time, double x, double v, double d1, double d2,
                 double res) {
    out += std::to_string(idx) + "," + chart + "," + frame + "," + fmt(time) + "," + fmt(x) + "," + fmt(v) + "," +
           fmt(d1) + "," + fmt(d2) + "," + fmt(res) + "\n";
  };
  const Vec td1 = st.tip.d1(), td2 = st.tip.d2();
  for (std::size_t i = 0; i < st.tip.mesh.size(); ++i) {
    const double z = st.tip.mesh[i], w = st.tip.value[i];
    row("tip_radial", "tau", st.tau(), z, w, td1[i], td2[i],
        or_nan([&] { return mean_curvature_hat(z, w, td1[i], td2[i], st.params); }));
  }
  const Vec rd1 = st.ray.d1(), rd2 = st.ray.d2();
  for (std::size_t i = 0; i < st.ray.mesh.size(); ++i) {
    const double x = st.ray.mesh[i], u = st.ray.value[i];
    row("rotated_ray", "t", st.t, x, u, rd1[i], rd2[i],
        or_nan([&] { return mean_curvature_graph(u, rd1[i], rd2[i], x, st.params); }));
  }
  const Vec H = parametric_mean_curvature(st.outer, st.params);
  const double nan = std::nan("");
  for (std::size_t i = 0; i < st.outer.nodes.size(); ++i)
    row("outer_parametric", "t", st.t, st.outer.nodes[i][0], st.outer.nodes[i][1], nan, nan, H[i]);
}

struct DiagRow {
  CurvatureReport rep;
  Sandwich sandwich;
  bool admissible = false;
  Vec amps;
};

DiagRow diagnose_state(const FlowState& st, const ProfileSolution& unit) {
  DiagRow r;
  r.rep = curvature_report(st);
  r.sandwich = profile_sandwich(st, unit);
  const AdmissibilityReport a =
      admissibility_check(st.ray.mesh, st.ray.value, st.ray.d1(), st.ray.d2(), st.t, st.params, st.exps, st.geometry);
  r.admissible = a.all();
  try {
    r.amps = mode_amplitudes(st, st.exps.l + 1);
  } catch (const Error&) {
    r.amps.assign(static_cast<std::size_t>(st.exps.l + 1), std::nan(""));
  }
  return r;
}

std::string diagnostics_csv(const std::string& id, const std::vector<FlowState>& states, const ProfileSolution& unit,
                            int l) {
  std::string out = header() + " run " + id + "\n";
  out += "snapshot,t,s,tau,sup_A,sup_H,typeII_A,weight_exponent,weighted_H,weight_feasible,admissible,"
         "sandwich_lower,sandwich_upper,remark_H";
  for (int j = 0; j <= l; ++j) out += ",amp_" + std::to_string(j);
  out += "\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    const FlowState& st = states[i];
    const DiagRow d = diagnose_state(st, unit);
    out += std::to_string(i) + "," + fmt(st.t) + "," + fmt(st.s()) + "," + fmt(st.tau()) + "," + fmt(d.rep.sup_A) +
           "," + fmt(d.rep.sup_H) + "," + fmt(d.rep.typeII_A) + "," + fmt(d.rep.weight_exponent) + "," +
           fmt(d.rep.weighted_H) + "," + (d.rep.weight_feasible ? "1" : "0") + "," + (d.admissible ? "1" : "0") +
           "," + fmt(d.sandwich.lower_margin) + "," + fmt(d.sandwich.upper_margin) + "," + fmt(d.rep.remark_H);
    for (double a : d.amps) out += "," + fmt(a);
    out += "\n";
  }
  return out;
}

json config_json(const RunConfig& c) {
  json j;
  for (const Key& k : keys()) {
    const auto v = k.get(c);
    if (v) j[k.name] = *v;
  }
  return j;
}

}  // namespace

RunManifest run_and_persist(const RunConfig& c, const fs::path& root) {
  const ConeParams P = c.params();
  validate_with(c, nullptr);
  const auto unit = std::make_shared<const ProfileSolution>(minimal_profile(P, 1.0));
  validate_with(c, unit.get());
  const SpectralExponents e = c.exps();

  RunManifest m;
  m.run_id = run_id(c);
  m.config = c;
  m.directory = root / m.run_id;
  std::error_code ec;
  fs::create_directories(m.directory, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + m.directory.string() + ": " + ec.message());

  json shooting = json::array();
  bool ok = true;
  if (c.a) {
    m.a = *c.a;
  } else {
    try {
      const ShootResult sr = shoot_parameters(c.shoot(), unit);
      for (const HorizonSolve& h : sr.horizons)
        shooting.push_back({{"t_hat", h.t_hat},
                            {"a", h.a},
                            {"phi", h.phi},
                            {"phi_norm", h.phi_norm},
                            {"tol", h.tol},
                            {"iterations", h.iterations},
                            {"evaluations", h.evaluations},
                            {"converged", h.converged},
                            {"message", h.message}});
      m.a = sr.horizons.back().a;
      if (!sr.all_converged()) {
        ok = false;
        m.error = std::string(to_string(ErrorCode::RootFindStall));
        m.message = "shooting did not converge at every horizon";
      }
    } catch (const Error& err) {
      ok = false;
      m.error = std::string(to_string(err.code()));
      m.message = err.what();
      m.a.assign(static_cast<std::size_t>(c.l), 0.0);
    }
  }

  std::vector<FlowState> states;
  std::size_t rejected = 0, regrids = 0;
  try {
    const InitialData data = assemble_initial_curve(P, e, m.a, c.t0, c.geometry(), unit, c.mesh());
    const FlowState init = initial_flow_state(data, c.mesh());
    if (ok) {
      const FlowRun run = run_flow(init, c.flow());
      states = run.snapshots;
      m.steps = run.steps;
      rejected = run.rejected;
      regrids = run.regrids;
      if (!run.completed) {
        ok = false;
        m.error = std::string(to_string(run.error));
        m.message = run.message;
      }
    } else {
      states.push_back(init);
    }
  } catch (const Error& err) {
    ok = false;
    m.error = std::string(to_string(err.code()));
    m.message = err.what();
  }
  m.status = ok ? "completed" : "failed";

  const std::string h = header() + " run " + m.run_id + "\n";
  std::string snaps = h + "snapshot,chart,frame,time,coord,value,d1,d2,residual\n";
  for (std::size_t i = 0; i < states.size(); ++i) snapshot_rows(snaps, i, states[i]);
  const std::vector<std::pair<std::string, std::string>> files{
      {"config.txt", serialize_config(c)},
      {"snapshots.csv", snaps},
      {"diagnostics.csv", diagnostics_csv(m.run_id, states, *unit, c.l)},
  };
  for (const auto& [name, data] : files) {
    write_file(m.directory / name, data);
    m.files.push_back({name, sha256(data), data.size()});
  }

  const double a_max = weight_exponent_max(P, e);
  json derived = {{"n", P.n},
                  {"mu", P.mu},
                  {"alpha", P.alpha},
                  {"alpha_hat", P.alpha_hat},
                  {"alpha_tilde", P.alpha_tilde},
                  {"lambda_l", e.lambda_l},
                  {"sigma_l", e.sigma_l},
                  {"tip_scale_t0", tip_scale(e, c.t0)},
                  {"a_ball_radius", std::pow(c.beta, P.alpha_tilde - P.alpha)},
                  {"weight_exponent_max", a_max},
                  {"bounded_H", bounded_H_criterion(P, c.l)}};
  json files_j = json::array();
  for (const FileEntry& f : m.files) files_j.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  const json manifest = {{"tool", "lawsonflow"},
                         {"version", m.version},
                         {"run_id", m.run_id},
                         {"status", m.status},
                         {"error", m.error},
                         {"message", m.message},
                         {"config", config_json(c)},
                         {"derived", derived},
                         {"a", m.a},
                         {"shooting", shooting},
                         {"flow", {{"steps", m.steps}, {"rejected", rejected}, {"regrids", regrids},
                                   {"snapshots", states.size()}}},
                         {"files", files_j}};
  write_file(m.directory / "manifest.json", manifest.dump(2) + "\n");
  return m;
}

std::string Verdict::to_json() const {
  json j = {{"run_id", run_id}, {"version", version}, {"status", status}, {"checks", checks}};
  json mj = json::object();
  for (const auto& [k, v] : metrics) mj[k] = std::isfinite(v) ? json(v) : json(nullptr);
  j["metrics"] = mj;
  return j.dump(2) + "\n";
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double cell_value(const std::string& s) {
  if (s == "nan" || s == "-nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  return parse_double("csv", s);
}

}  // namespace

Verdict diagnose_run(const fs::path& dir) {
  json m;
  try {
    m = json::parse(read_file(dir / "manifest.json"));
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("manifest.json: ") + e.what());
  }
  Verdict v;
  v.run_id = m.value("run_id", "");
  v.version = m.value("version", "");
  v.status = m.value("status", "");
  if (v.version != tool_version)
    fail(ErrorCode::ParseError, "run was written by version " + v.version + ", this is " + std::string(tool_version));
  const std::string expect = header() + " ";
  for (const auto& f : m.at("files")) {
    const std::string name = f.at("name");
    const std::string data = read_file(dir / name);
    if (sha256(data) != f.at("sha256").get<std::string>()) fail(ErrorCode::IoError, name + ": checksum mismatch");
    if (data.rfind(expect, 0) != 0) fail(ErrorCode::ParseError, name + ": mixed-version run directory");
  }

  std::istringstream in(read_file(dir / "diagnostics.csv"));
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  const std::vector<std::string> cols = split(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(cols.begin(), cols.end(), name);
    if (it == cols.end()) fail(ErrorCode::ParseError, "diagnostics.csv lacks column " + name);
    return static_cast<std::size_t>(it - cols.begin());
  };
  std::vector<Vec> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Vec r;
    for (const auto& c : split(line)) r.push_back(cell_value(c));
    if (r.size() != cols.size()) fail(ErrorCode::ParseError, "diagnostics.csv: ragged row");
    rows.push_back(r);
  }

  v.checks["completed"] = v.status == "completed";
  v.metrics["snapshots"] = static_cast<double>(rows.size());
  if (rows.empty()) return v;
  const std::size_t cA = col("sup_A"), cH = col("sup_H"), c2 = col("typeII_A"), cad = col("admissible"),
                    clo = col("sandwich_lower"), chi = col("sandwich_upper"), ct = col("t");
  bool adm = true, sand = true;
  double t2min = INFINITY, t2max = 0.0, hmax = 0.0;
  for (const Vec& r : rows) {
    adm = adm && r[cad] == 1.0;
    sand = sand && r[clo] >= 0.0 && r[chi] >= 0.0;
    t2min = std::min(t2min, r[c2]);
    t2max = std::max(t2max, r[c2]);
    hmax = std::max(hmax, r[cH]);
  }
  v.checks["admissible"] = adm;
  v.checks["sandwich"] = sand;
  v.metrics["typeII_A_ratio"] = t2max / t2min;
  v.checks["typeII_A_within_3"] = t2max / t2min < 3.0;
  v.metrics["H_final_over_max"] = hmax > 0.0 ? rows.back()[cH] / hmax : 0.0;
  v.checks["H_trend"] = v.metrics["H_final_over_max"] <= 1.5;
  v.metrics["t_first"] = rows.front()[ct];
  v.metrics["t_last"] = rows.back()[ct];

  std::vector<CurvatureReport> series;
  for (const Vec& r : rows) {
    CurvatureReport c;
    c.t = r[ct];
    c.sup_A = r[cA];
    series.push_back(c);
  }
  try {
    const auto& cfg = m.at("config");
    const ConeParams P = derive_cone_params(std::stoi(cfg.at("p").get<std::string>()),
                                            std::stoi(cfg.at("q").get<std::string>()));
    const RateFit f = blowup_rate_fit(series, spectral_exponents(P, std::stoi(cfg.at("l").get<std::string>())));
    v.metrics["rate_slope"] = f.slope;
    v.metrics["rate_expected"] = f.expected;
    v.metrics["rate_band"] = f.band;
    v.checks["type_II_rate"] = f.type == BlowupType::type_II;
  } catch (const Error&) {
    // Too short a window for a fit; the verdict simply has no rate entry.
  }
  return v;
}

}  // namespace lawson
