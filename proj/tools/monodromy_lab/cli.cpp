#include "monodromy_lab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "monodromy/braid.hpp"
#include "monodromy/bslattice.hpp"
#include "monodromy/pendulum.hpp"
#include "monodromy/quadrature.hpp"
#include "monodromy/sl2z.hpp"
#include "monodromy/theta.hpp"
#include "monodromy/weierstrass.hpp"
#include "monodromy_lab/report.hpp"

namespace monodromy::lab {

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Parsing helpers

double parse_double_strict(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v))
      throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + s + "'");
  }
}

std::pair<double, double> parse_pair(const std::string& s,
                                     const std::string& what) {
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw ConfigError(what + " must be two comma-separated numbers");
  return {parse_double_strict(s.substr(0, comma), what + " (first entry)"),
          parse_double_strict(s.substr(comma + 1), what + " (second entry)")};
}

// Loop-file coefficient token: plain decimal for a real value, re,im for a
// complex one.
Complex parse_coeff_token(const std::string& tok) {
  const auto comma = tok.find(',');
  const auto num = [&](const std::string& part) {
    std::size_t used = 0;
    const double v = std::stod(part, &used);
    if (used != part.size() || !std::isfinite(v))
      throw FileParseError("bad coefficient token '" + tok + "'");
    return v;
  };
  try {
    if (comma == std::string::npos) return {num(tok), 0.0};
    return {num(tok.substr(0, comma)), num(tok.substr(comma + 1))};
  } catch (const std::invalid_argument&) {
    throw FileParseError("bad coefficient token '" + tok + "'");
  } catch (const std::out_of_range&) {
    throw FileParseError("bad coefficient token '" + tok + "'");
  }
}

// Header `t_count=<N>`, then N rows `c3 c2 c1 c0`; the closure (last row
// matched to the first) is implied and stored explicitly on return.
LoopSamples parse_loop_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FileParseError("cannot open loop file '" + path + "'");
  std::string header;
  if (!std::getline(f, header))
    throw FileParseError("loop file is empty");
  const std::string prefix = "t_count=";
  if (header.rfind(prefix, 0) != 0)
    throw FileParseError("loop file must start with t_count=<N>");
  unsigned long n = 0;
  try {
    std::size_t used = 0;
    n = std::stoul(header.substr(prefix.size()), &used);
    if (used != header.size() - prefix.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw FileParseError("bad sample count in loop file header");
  }
  if (n < 16) throw FileParseError("loop file must carry at least 16 samples");
  std::vector<double> params;
  std::vector<CubicPoly> polys;
  params.reserve(n + 1);
  polys.reserve(n + 1);
  std::string line;
  for (unsigned long k = 0; k < n; ++k) {
    if (!std::getline(f, line))
      throw FileParseError("loop file ends before row " + std::to_string(k));
    std::istringstream row(line);
    std::string tok;
    Complex c[4];
    for (int i = 0; i < 4; ++i) {
      if (!(row >> tok))
        throw FileParseError("row " + std::to_string(k) +
                             " has fewer than 4 coefficients");
      c[i] = parse_coeff_token(tok);
    }
    if (row >> tok)
      throw FileParseError("row " + std::to_string(k) +
                           " has more than 4 coefficients");
    if (c[0] == Complex{0.0, 0.0})
      throw FileParseError("row " + std::to_string(k) +
                           " has a vanishing leading coefficient");
    params.push_back(static_cast<double>(k) / static_cast<double>(n));
    polys.emplace_back(c[0], c[1], c[2], c[3]);
  }
  std::string rest;
  while (std::getline(f, rest))
    if (!rest.empty() &&
        rest.find_first_not_of(" \t\r") != std::string::npos)
      throw FileParseError("loop file has trailing content past its rows");
  params.push_back(1.0);
  polys.push_back(polys.front());
  return {std::move(params), std::move(polys)};
}

// ---------------------------------------------------------------------------
// Shared emission helpers

void emit_complex(JsonWriter& w, Complex v) {
  w.begin_array();
  w.value(v.real());
  w.value(v.imag());
  w.end_array();
}

void emit_matrix(JsonWriter& w, const UnimodularMatrix& m) {
  w.begin_array();
  w.begin_array();
  w.value_int(m.a());
  w.value_int(m.b());
  w.end_array();
  w.begin_array();
  w.value_int(m.c());
  w.value_int(m.d());
  w.end_array();
  w.end_array();
}

void emit_gate(JsonWriter& w, const PhaseGate& g) {
  w.begin_array();
  for (int r = 0; r < 2; ++r) {
    w.begin_array();
    emit_complex(w, g.at(r, 0));
    emit_complex(w, g.at(r, 1));
    w.end_array();
  }
  w.end_array();
}

void emit_config(JsonWriter& w, const RunConfig& cfg) {
  w.begin_object();
  w.key("command");
  w.value(cfg.command);
  w.key("epsilon");
  w.value(cfg.epsilon);
  w.key("samples");
  w.value_int(static_cast<long long>(cfg.samples));
  w.key("center");
  w.begin_array();
  w.value(cfg.center_j);
  w.value(cfg.center_h);
  w.end_array();
  w.key("turns");
  w.value_int(cfg.turns);
  w.key("format");
  w.value(cfg.format);
  w.key("threads");
  w.value_int(static_cast<long long>(cfg.threads));
  w.key("tolerances");
  w.begin_object();
  for (const auto& [name, val] : cfg.tolerances) {
    w.key(name);
    w.value(val);
  }
  w.end_object();
  w.end_object();
}

std::string matrix_text(const UnimodularMatrix& m) {
  std::string s = "[[" + std::to_string(m.a()) + "," + std::to_string(m.b()) +
                  "],[" + std::to_string(m.c()) + "," + std::to_string(m.d()) +
                  "]]";
  return s;
}

std::string complex_text(Complex v) {
  return format_double(v.real()) +
         (v.imag() < 0.0 || std::signbit(v.imag()) ? "-" : "+") +
         format_double(std::abs(v.imag())) + "i";
}

std::string gate_text(const PhaseGate& g) {
  return "[[" + complex_text(g.at(0, 0)) + ", " + complex_text(g.at(0, 1)) +
         "], [" + complex_text(g.at(1, 0)) + ", " + complex_text(g.at(1, 1)) +
         "]]";
}

std::string word_text(const BraidWord& word) {
  if (word.empty()) return "(empty)";
  std::string s;
  for (const auto& l : word.letters()) {
    if (!s.empty()) s += ' ';
    s += 's' + std::to_string(l.index);
    if (l.sign < 0) s += "^-1";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Verification suite

struct CheckResult {
  std::string name;
  double measured;
  double tolerance;
  bool pass;
};

const double kReGrid[5] = {-0.4, -0.2, 0.0, 0.2, 0.4};
const double kImGrid[5] = {0.5, 1.0, 1.5, 2.5, 4.0};
const Complex kZProbes[2] = {{0.13, 0.0}, {0.21, 0.11}};
const double kCurveG3[10] = {0.0, 0.3, -0.3, 0.6, -0.6,
                             0.9, -0.9, 1.2, -1.2, 1.5};

double rel_dev(Complex measured, Complex expected) {
  return std::abs(measured - expected) / std::abs(expected);
}

double check_jacobi() {
  double worst = 0.0;
  for (double re : kReGrid)
    for (double im : kImGrid) {
      const ModularParameter tau(Complex{re, im});
      const Complex z0{0.0, 0.0};
      const auto p4 = [](Complex t) { return t * t * t * t; };
      const Complex lhs = p4(theta3(z0, tau));
      const Complex rhs = p4(theta2(z0, tau)) + p4(theta4(z0, tau));
      worst = std::max(worst, rel_dev(rhs, lhs));
    }
  return worst;
}

double check_tau_shift() {
  const Complex rot = std::exp(Complex{0.0, kPi / 4.0});
  double worst = 0.0;
  for (double re : kReGrid)
    for (double im : kImGrid)
      for (Complex z : kZProbes) {
        const ModularParameter tau(Complex{re, im});
        const ModularParameter tau1 = tau.shifted(1);
        worst = std::max(worst, rel_dev(theta1(z, tau1), rot * theta1(z, tau)));
        worst = std::max(worst, rel_dev(theta2(z, tau1), rot * theta2(z, tau)));
        worst = std::max(worst, rel_dev(theta3(z, tau1), theta4(z, tau)));
        worst = std::max(worst, rel_dev(theta4(z, tau1), theta3(z, tau)));
      }
  return worst;
}

double check_level_shift() {
  const Complex i_unit{0.0, 1.0};
  double worst = 0.0;
  for (double re : kReGrid)
    for (double im : kImGrid)
      for (Complex z : kZProbes) {
        const ModularParameter tau(Complex{re, im});
        const ModularParameter tau1 = tau.shifted(1);
        worst = std::max(
            worst, rel_dev(level_theta(2, 0, z, tau1), level_theta(2, 0, z, tau)));
        worst = std::max(worst, rel_dev(level_theta(2, 1, z, tau1),
                                        i_unit * level_theta(2, 1, z, tau)));
      }
  return worst;
}

double check_k_prime() {
  double worst = 0.0;
  for (double re : kReGrid)
    for (double im : kImGrid) {
      const ModularParameter tau(Complex{re, im});
      const Complex z0{0.0, 0.0};
      const Complex t3 = theta3(z0, tau);
      const Complex t4 = theta4(z0, tau);
      const Complex kprime = (t4 * t4) / (t3 * t3);
      const Complex lhs = theta3(z0, tau.shifted(1));
      worst = std::max(worst, rel_dev(lhs, std::sqrt(kprime) * t3));
    }
  return worst;
}

double check_heat() {
  double worst = 0.0;
  worst = std::max(worst, heat_residual(2, 1, Complex{0.13, 0.07},
                                        ModularParameter({0.2, 0.9}), 1e-4));
  worst = std::max(worst, heat_residual(1, 0, Complex{0.1, 0.0},
                                        ModularParameter({0.0, 1.0}), 1e-4));
  worst = std::max(worst, heat_residual(16, 5, Complex{0.05, 0.02},
                                        ModularParameter({-0.3, 1.4}), 1e-4));
  return worst;
}

double check_heat_ratio() {
  const ModularParameter tau({0.2, 0.9});
  const Complex z{0.13, 0.07};
  const double r_coarse = heat_residual(2, 1, z, tau, 2e-3);
  const double r_fine = heat_residual(2, 1, z, tau, 1e-3);
  return std::abs(r_coarse / r_fine - 4.0);
}

double check_bridge() {
  double worst = 0.0;
  for (double g3 : kCurveG3) {
    const BridgeResiduals r = theta_root_residuals(4.0, g3);
    worst = std::max({worst, r.root_identities, r.difference_identities,
                      r.modulus_bridge});
  }
  return worst;
}

double check_lemniscatic() {
  const Periods per = periods_from_invariants(4.0, 0.0);
  return std::abs(per.tau.value() - Complex{0.0, 1.0});
}

double check_switch() {
  double worst = 0.0;
  for (double g3 : kCurveG3) {
    const auto e = roots_from_invariants(4.0, g3);
    const Periods per = periods_from_invariants(4.0, g3);
    const ModularParameter tau1 = per.tau.shifted(1);
    const Complex z0{0.0, 0.0};
    const auto p4 = [](Complex t) { return t * t * t * t; };
    const Complex t2 = p4(theta2(z0, tau1));
    const Complex t3 = p4(theta3(z0, tau1));
    const Complex t4 = p4(theta4(z0, tau1));
    const double pref = kPi * kPi / (12.0 * per.omega * per.omega);
    const Complex e1s = pref * (t3 + t4);
    const Complex e2s = pref * (t2 - t4);
    const Complex e3s = -pref * (t2 + t3);
    const double emax =
        std::max({std::abs(e[0]), std::abs(e[1]), std::abs(e[2])});
    // Theta constants at tau+1 must reproduce the triple with e2 and e3
    // exchanged.
    const double dev = std::max({std::abs(e1s - e[0]), std::abs(e2s - e[2]),
                                 std::abs(e3s - e[1])}) /
                       emax;
    worst = std::max(worst, dev);
  }
  return worst;
}

double check_carlson() {
  double worst = 0.0;
  const double tol = 1e-12;
  // Generic cubic 2(x + 1.2)(x - 0.3)(x - 1.5).
  {
    const CubicPoly poly(Complex{2.0, 0.0}, Complex{-1.2, 0.0},
                         Complex{-3.42, 0.0}, Complex{1.08, 0.0});
    const std::array<double, 3> roots{-1.2, 0.3, 1.5};
    const auto one = [](double) { return 1.0; };
    const double i1 = elliptic_first(poly, -1.2, 0.3);
    const double q1 = elliptic_quadrature(roots, 2.0, 0, one, tol);
    worst = std::max(worst, std::abs(i1 - q1) / std::abs(q1));
    for (double c : {2.0, -2.0}) {
      const double i3 = elliptic_third(poly, -1.2, 0.3, c);
      const double q3 = elliptic_quadrature(
          roots, 2.0, 0, [c](double x) { return 1.0 / (x - c); }, tol);
      worst = std::max(worst, std::abs(i3 - q3) / std::abs(q3));
    }
  }
  // Lemniscatic-type cubic 4x(1 - x)(1 + x) over its middle interval.
  {
    const CubicPoly poly(Complex{-4.0, 0.0}, Complex{0.0, 0.0},
                         Complex{4.0, 0.0}, Complex{0.0, 0.0});
    const std::array<double, 3> roots{-1.0, 0.0, 1.0};
    const double i1 = elliptic_first(poly, 0.0, 1.0);
    const double q1 =
        elliptic_quadrature(roots, -4.0, 1, [](double) { return 1.0; }, tol);
    worst = std::max(worst, std::abs(i1 - q1) / std::abs(q1));
  }
  // Pendulum point (j, h) = (0.05, 1): period and rotation integrands.
  {
    const double j = 0.05, h = 1.0;
    const PendulumRoots r = pendulum_roots(j, h);
    const std::array<double, 3> roots{r.x_minus, r.x_plus, r.x_zero};
    const RotationPeriod rp = rotation_and_period(j, h);
    const double qT = 2.0 * elliptic_quadrature(
                                roots, 2.0, 0, [](double) { return 1.0; }, tol);
    worst = std::max(worst, std::abs(rp.T - qT) / qT);
    const double qTheta =
        2.0 * j *
        elliptic_quadrature(
            roots, 2.0, 0, [](double x) { return 1.0 / (1.0 - x * x); }, tol);
    worst = std::max(worst, std::abs(rp.theta_raw - qTheta) / std::abs(qTheta));
  }
  return worst;
}

std::vector<CheckResult> run_verification(
    const std::map<std::string, double>& tolerances) {
  const auto tol = [&](const std::string& name) {
    const auto it = tolerances.find(name);
    if (it != tolerances.end()) return it->second;
    return default_tolerances().at(name);
  };
  std::vector<CheckResult> out;
  const auto add = [&](const std::string& name, double measured) {
    const double t = tol(name);
    out.push_back({name, measured, t, measured < t});
  };
  add("jacobi", check_jacobi());
  add("tau_shift", check_tau_shift());
  add("level_shift", check_level_shift());
  add("k_prime", check_k_prime());
  add("heat", check_heat());
  add("heat_ratio", check_heat_ratio());
  add("bridge", check_bridge());
  add("lemniscatic", check_lemniscatic());
  add("switch", check_switch());
  add("carlson", check_carlson());
  return out;
}

// ---------------------------------------------------------------------------
// Report documents

std::string verify_report_json(const RunConfig& cfg,
                               const std::vector<CheckResult>& checks) {
  JsonWriter w;
  w.begin_object();
  w.key("schema");
  w.value_int(1);
  w.key("kind");
  w.value("verify_report");
  w.key("config");
  emit_config(w, cfg);
  w.key("checks");
  w.begin_array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    w.begin_object();
    w.key("name");
    w.value(c.name);
    w.key("measured");
    w.value(c.measured);
    w.key("tolerance");
    w.value(c.tolerance);
    w.key("pass");
    w.value_bool(c.pass);
    w.end_object();
  }
  w.end_array();
  w.key("all_pass");
  w.value_bool(all);
  w.end_object();
  std::string s = w.take();
  s += '\n';
  return s;
}

std::string verify_report_csv(const std::vector<CheckResult>& checks) {
  std::string s = "name,measured,tolerance,pass\n";
  for (const auto& c : checks) {
    s += c.name;
    s += ',';
    s += format_double(c.measured);
    s += ',';
    s += format_double(c.tolerance);
    s += ',';
    s += c.pass ? "true" : "false";
    s += '\n';
  }
  return s;
}

void append_csv_row(std::string& s, const CircuitSample& r) {
  const double cols[9] = {r.t,      r.j,         r.h,
                          r.x_minus, r.x_plus,   r.x_zero,
                          r.theta_raw, r.T,      r.theta_hat};
  for (int i = 0; i < 9; ++i) {
    if (i) s += ',';
    s += format_double(cols[i]);
  }
  s += '\n';
}

std::string trace_csv(const CircuitTrace& trace) {
  std::string s =
      "t,j,h,x_minus,x_plus,x_zero,theta_raw,T,theta_hat_unwrapped\n";
  for (const auto& r : trace.samples) append_csv_row(s, r);
  append_csv_row(s, trace.closure); // closure row: same point, t + 2 pi turns
  return s;
}

void emit_sample(JsonWriter& w, const CircuitSample& r) {
  w.begin_array();
  w.value(r.t);
  w.value(r.j);
  w.value(r.h);
  w.value(r.x_minus);
  w.value(r.x_plus);
  w.value(r.x_zero);
  w.value(r.theta_raw);
  w.value(r.T);
  w.value(r.theta_hat);
  w.end_array();
}

std::string trace_json(const RunConfig& cfg, const CircuitTrace& trace) {
  JsonWriter w;
  w.begin_object();
  w.key("schema");
  w.value_int(1);
  w.key("kind");
  w.value("circuit_trace");
  w.key("config");
  emit_config(w, cfg);
  w.key("columns");
  w.begin_array();
  for (const char* col : {"t", "j", "h", "x_minus", "x_plus", "x_zero",
                          "theta_raw", "T", "theta_hat_unwrapped"})
    w.value(col);
  w.end_array();
  w.key("rows");
  w.begin_array();
  for (const auto& r : trace.samples) emit_sample(w, r);
  w.end_array();
  w.key("closure");
  emit_sample(w, trace.closure);
  w.key("delta_theta_hat");
  w.value(trace.delta_theta_hat);
  w.key("delta_T");
  w.value(trace.delta_T);
  w.end_object();
  std::string s = w.take();
  s += '\n';
  return s;
}

std::string certificate_report_json(const RunConfig& cfg,
                                    const CircuitTrace& trace,
                                    const MonodromyCertificate& cert) {
  JsonWriter w;
  w.begin_object();
  w.key("schema");
  w.value_int(1);
  w.key("kind");
  w.value("certificate_report");
  w.key("config");
  emit_config(w, cfg);
  w.key("provenance");
  w.begin_object();
  w.key("sample_count");
  w.value_int(static_cast<long long>(cert.n_samples));
  w.key("refinement_depth");
  w.value_int(cert.refinement_depth);
  w.key("max_step");
  w.value(cert.max_step);
  w.key("delta_T");
  w.value(trace.delta_T);
  w.key("mean_T");
  w.value(cert.mean_T);
  w.end_object();
  w.key("certificate");
  w.begin_object();
  w.key("m");
  w.value_int(cert.m);
  w.key("delta_theta_hat");
  w.value(cert.delta_theta_hat);
  w.key("delta_T");
  w.value(cert.delta_T);
  w.key("classical_matrix");
  emit_matrix(w, cert.classical);
  w.key("quantum_matrix");
  emit_matrix(w, cert.quantum);
  w.key("gate");
  emit_gate(w, cert.gate);
  w.end_object();
  w.end_object();
  std::string s = w.take();
  s += '\n';
  return s;
}

// ---------------------------------------------------------------------------
// Subcommand handlers

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto checks = run_verification(cfg.tolerances);
  bool all = true;
  for (const auto& c : checks) all = all && c.pass;
  std::string doc = cfg.format == "json" ? verify_report_json(cfg, checks)
                                         : verify_report_csv(checks);
  if (!cfg.out_path.empty()) {
    atomic_write(cfg.out_path, doc);
    out << "verify: " << (all ? "all checks passed" : "checks FAILED")
        << ", report written to " << cfg.out_path << "\n";
  } else {
    out << doc;
  }
  if (!all)
    for (const auto& c : checks)
      if (!c.pass)
        err << "FAIL " << c.name << " measured=" << format_double(c.measured)
            << " tol=" << format_double(c.tolerance) << "\n";
  return all ? 0 : 1;
}

int cmd_pendulum(const RunConfig& cfg, std::ostream& out,
                 std::ostream& /*err*/) {
  CircuitSpec spec;
  spec.center_j = cfg.center_j;
  spec.center_h = cfg.center_h;
  spec.epsilon = cfg.epsilon;
  spec.turns = cfg.turns;
  spec.n_samples = cfg.samples;
  spec.threads = cfg.threads;
  const CircuitTrace trace = trace_circuit(spec);
  const MonodromyCertificate cert = certify(trace);
  const std::string cert_doc = certificate_report_json(cfg, trace, cert);
  if (!cfg.out_path.empty()) {
    const std::string table =
        cfg.format == "json" ? trace_json(cfg, trace) : trace_csv(trace);
    atomic_write(cfg.out_path, table);
    atomic_write(cfg.out_path + ".cert.json", cert_doc);
    out << "m=" << cert.m
        << " delta_theta_hat=" << format_double(cert.delta_theta_hat)
        << " delta_T=" << format_double(cert.delta_T)
        << " samples=" << cert.n_samples << " trace=" << cfg.out_path
        << " certificate=" << cfg.out_path << ".cert.json\n";
  } else {
    out << cert_doc;
  }
  return 0;
}

int cmd_braid(const RunConfig& cfg, const std::string& loop_path,
              std::ostream& out, std::ostream& err) {
  LoopSamples loop = parse_loop_file(loop_path);
  constexpr int kMaxDepth = 12;
  int depth = 0;
  TrackResult result{{}, {0, 1, 2}};
  bool ok = false;
  while (true) {
    try {
      result = track_roots(loop);
      ok = true;
      break;
    } catch (const RefinementNeeded&) {
      if (depth >= kMaxDepth) break;
      loop = loop.subdivided();
      ++depth;
    }
  }
  if (!ok) {
    err << "braid tracking still ambiguous after " << kMaxDepth
        << " refinements\n";
    return 1;
  }
  const UnimodularMatrix mat = braid_to_matrix(result.word);
  const long long det = mat.a() * mat.d() - mat.b() * mat.c();
  if (cfg.format == "json") {
    JsonWriter w;
    w.begin_object();
    w.key("schema");
    w.value_int(1);
    w.key("kind");
    w.value("braid_report");
    w.key("config");
    emit_config(w, cfg);
    w.key("samples");
    w.value_int(static_cast<long long>(loop.size()));
    w.key("refinement_depth");
    w.value_int(depth);
    w.key("permutation");
    w.begin_array();
    for (int p : result.permutation) w.value_int(p);
    w.end_array();
    w.key("word");
    w.begin_array();
    for (const auto& l : result.word.letters())
      w.value("s" + std::to_string(l.index) + (l.sign < 0 ? "^-1" : ""));
    w.end_array();
    w.key("matrix");
    emit_matrix(w, mat);
    w.key("det");
    w.value_int(det);
    w.end_object();
    std::string doc = w.take();
    doc += '\n';
    if (!cfg.out_path.empty()) {
      atomic_write(cfg.out_path, doc);
      out << "braid report written to " << cfg.out_path << "\n";
    } else {
      out << doc;
    }
  } else {
    std::string doc;
    doc += "samples," + std::to_string(loop.size()) + "\n";
    doc += "refinement_depth," + std::to_string(depth) + "\n";
    doc += "permutation," + std::to_string(result.permutation[0]) + " " +
           std::to_string(result.permutation[1]) + " " +
           std::to_string(result.permutation[2]) + "\n";
    doc += "word," + word_text(result.word) + "\n";
    doc += "matrix," + matrix_text(mat) + "\n";
    doc += "det," + std::to_string(det) + "\n";
    if (!cfg.out_path.empty()) {
      atomic_write(cfg.out_path, doc);
      out << "braid report written to " << cfg.out_path << "\n";
    } else {
      out << doc;
    }
  }
  return 0;
}

int cmd_gate(const RunConfig& cfg, long long m, std::ostream& out,
             std::ostream& /*err*/) {
  const PhaseGate gate = phase_gate(m);
  const UnimodularMatrix classical = b2().pow(m);
  const UnimodularMatrix quantum = b1().pow(m);
  const Complex sample_z{0.1, 0.0};
  const ModularParameter sample_tau{Complex{0.0, 1.0}};
  const double residual = verify_gate_against_theta(m, sample_z, sample_tau);
  if (cfg.format == "json") {
    JsonWriter w;
    w.begin_object();
    w.key("schema");
    w.value_int(1);
    w.key("kind");
    w.value("gate_report");
    w.key("m");
    w.value_int(m);
    w.key("gate");
    emit_gate(w, gate);
    w.key("classical_matrix");
    emit_matrix(w, classical);
    w.key("quantum_matrix");
    emit_matrix(w, quantum);
    w.key("sample_z");
    emit_complex(w, sample_z);
    w.key("sample_tau");
    emit_complex(w, sample_tau.value());
    w.key("residual");
    w.value(residual);
    w.end_object();
    std::string doc = w.take();
    doc += '\n';
    if (!cfg.out_path.empty()) {
      atomic_write(cfg.out_path, doc);
      out << "gate report written to " << cfg.out_path << "\n";
    } else {
      out << doc;
    }
  } else {
    std::string doc;
    doc += "m," + std::to_string(m) + "\n";
    doc += "gate," + gate_text(gate) + "\n";
    doc += "classical," + matrix_text(classical) + "\n";
    doc += "quantum," + matrix_text(quantum) + "\n";
    doc += "residual," + format_double(residual) + "\n";
    if (!cfg.out_path.empty()) {
      atomic_write(cfg.out_path, doc);
      out << "gate report written to " << cfg.out_path << "\n";
    } else {
      out << doc;
    }
  }
  return 0;
}

int cmd_curve(const RunConfig& cfg, double g2, double g3, std::ostream& out,
              std::ostream& /*err*/) {
  const auto roots = roots_from_invariants(g2, g3);
  const double disc = g2 * g2 * g2 - 27.0 * g3 * g3;
  const bool three_real = disc > 0.0;
  Periods per{0.0, Complex{0.0, 0.0}, ModularParameter(Complex{0.0, 1.0})};
  JacobiModulus jm{0.0, 0.0};
  BridgeResiduals br{0.0, 0.0, 0.0};
  if (three_real) {
    per = periods_from_invariants(g2, g3);
    jm = jacobi_modulus(g2, g3);
    br = theta_root_residuals(g2, g3);
  }
  if (cfg.format == "json") {
    JsonWriter w;
    w.begin_object();
    w.key("schema");
    w.value_int(1);
    w.key("kind");
    w.value("curve_report");
    w.key("g2");
    w.value(g2);
    w.key("g3");
    w.value(g3);
    w.key("roots");
    w.begin_array();
    for (const auto& r : roots) emit_complex(w, r);
    w.end_array();
    w.key("three_real_roots");
    w.value_bool(three_real);
    if (three_real) {
      w.key("omega");
      w.value(per.omega);
      w.key("omega_prime");
      emit_complex(w, per.omega_prime);
      w.key("tau");
      emit_complex(w, per.tau.value());
      w.key("k2");
      w.value(jm.k2);
      w.key("kprime2");
      w.value(jm.kprime2);
      w.key("residuals");
      w.begin_object();
      w.key("root_identities");
      w.value(br.root_identities);
      w.key("difference_identities");
      w.value(br.difference_identities);
      w.key("modulus_bridge");
      w.value(br.modulus_bridge);
      w.end_object();
    }
    w.end_object();
    std::string doc = w.take();
    doc += '\n';
    if (!cfg.out_path.empty()) {
      atomic_write(cfg.out_path, doc);
      out << "curve report written to " << cfg.out_path << "\n";
    } else {
      out << doc;
    }
  } else {
    std::string doc;
    doc += "g2," + format_double(g2) + "\n";
    doc += "g3," + format_double(g3) + "\n";
    for (int i = 0; i < 3; ++i)
      doc += "e" + std::to_string(i + 1) + "," +
             complex_text(roots[static_cast<std::size_t>(i)]) + "\n";
    if (three_real) {
      doc += "omega," + format_double(per.omega) + "\n";
      doc += "tau," + complex_text(per.tau.value()) + "\n";
      doc += "k2," + format_double(jm.k2) + "\n";
      doc += "kprime2," + format_double(jm.kprime2) + "\n";
      doc += "root_identities," + format_double(br.root_identities) + "\n";
      doc += "difference_identities," +
             format_double(br.difference_identities) + "\n";
      doc += "modulus_bridge," + format_double(br.modulus_bridge) + "\n";
    }
    if (!cfg.out_path.empty()) {
      atomic_write(cfg.out_path, doc);
      out << "curve report written to " << cfg.out_path << "\n";
    } else {
      out << doc;
    }
  }
  return 0;
}

int cmd_theta(const RunConfig& cfg, Complex z, Complex tau_value, int level,
              int index, std::ostream& out, std::ostream& /*err*/) {
  const ModularParameter tau(tau_value);
  const Complex t = theta(z, tau);
  const Complex t1 = theta1(z, tau), t2 = theta2(z, tau),
                t3 = theta3(z, tau), t4 = theta4(z, tau);
  const Complex lv = level_theta(level, index, z, tau);
  const Complex mlv = modified_level_theta(level, index, z, tau);
  if (cfg.format == "json") {
    JsonWriter w;
    w.begin_object();
    w.key("schema");
    w.value_int(1);
    w.key("kind");
    w.value("theta_report");
    w.key("z");
    emit_complex(w, z);
    w.key("tau");
    emit_complex(w, tau_value);
    w.key("theta");
    emit_complex(w, t);
    w.key("theta1");
    emit_complex(w, t1);
    w.key("theta2");
    emit_complex(w, t2);
    w.key("theta3");
    emit_complex(w, t3);
    w.key("theta4");
    emit_complex(w, t4);
    w.key("level");
    w.value_int(level);
    w.key("index");
    w.value_int(index);
    w.key("level_theta");
    emit_complex(w, lv);
    w.key("modified_level_theta");
    emit_complex(w, mlv);
    w.end_object();
    std::string doc = w.take();
    doc += '\n';
    if (!cfg.out_path.empty()) {
      atomic_write(cfg.out_path, doc);
      out << "theta report written to " << cfg.out_path << "\n";
    } else {
      out << doc;
    }
  } else {
    std::string doc;
    doc += "z," + complex_text(z) + "\n";
    doc += "tau," + complex_text(tau_value) + "\n";
    doc += "theta," + complex_text(t) + "\n";
    doc += "theta1," + complex_text(t1) + "\n";
    doc += "theta2," + complex_text(t2) + "\n";
    doc += "theta3," + complex_text(t3) + "\n";
    doc += "theta4," + complex_text(t4) + "\n";
    doc += "level_theta_" + std::to_string(level) + "_" +
           std::to_string(index) + "," + complex_text(lv) + "\n";
    doc += "modified_level_theta_" + std::to_string(level) + "_" +
           std::to_string(index) + "," + complex_text(mlv) + "\n";
    if (!cfg.out_path.empty()) {
      atomic_write(cfg.out_path, doc);
      out << "theta report written to " << cfg.out_path << "\n";
    } else {
      out << doc;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Config assembly

void apply_tolerance_args(RunConfig& cfg,
                          const std::vector<std::string>& args) {
  for (const auto& a : args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--tol expects NAME=VALUE, got '" + a + "'");
    const std::string name = a.substr(0, eq);
    if (default_tolerances().find(name) == default_tolerances().end())
      throw ConfigError("unknown tolerance name '" + name + "'");
    cfg.tolerances[name] =
        parse_double_strict(a.substr(eq + 1), "tolerance value");
  }
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 0.1))
    throw ConfigError("epsilon must lie in (0, 0.1]");
  const unsigned long long s = cfg.samples;
  const bool pow2 = s != 0 && (s & (s - 1)) == 0;
  if (!pow2 || s < 256 || s > (1ull << 20))
    throw ConfigError("samples must be a power of two in [256, 2^20]");
  if (cfg.turns == 0 || cfg.turns > 8 || cfg.turns < -8)
    throw ConfigError("turns must be a nonzero integer with |turns| <= 8");
  if (cfg.format != "csv" && cfg.format != "json")
    throw ConfigError("format must be csv or json");
}

unsigned thread_cap_from_env() {
  const char* env = std::getenv("MONODROMY_LAB_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || v < 1 || v > 64)
    throw ConfigError("MONODROMY_LAB_THREADS must be an integer in [1, 64]");
  return static_cast<unsigned>(v);
}

} // namespace

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defaults = {
      {"jacobi", 1e-10},     {"tau_shift", 1e-10}, {"level_shift", 1e-10},
      {"k_prime", 1e-10},    {"heat", 1e-6},       {"heat_ratio", 2.0},
      {"bridge", 1e-9},      {"lemniscatic", 1e-9}, {"switch", 1e-9},
      {"carlson", 1e-10},
  };
  return defaults;
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"monodromy-lab: theta functions, elliptic curves, braids, and "
               "spherical-pendulum monodromy certificates"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string center_str, z_str, tau_str, loop_path, cert_path;
  std::vector<std::string> tol_args;
  long long gate_m = 0;
  double g2 = 0.0, g3 = 0.0;
  int level = 1, index = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--epsilon", cfg.epsilon, "circuit radius in (0, 0.1]");
    sub->add_option("--samples", cfg.samples,
                    "sample count, power of two >= 256");
    sub->add_option("--center", center_str, "circuit center as J,H");
    sub->add_option("--turns", cfg.turns, "signed traversal count");
    sub->add_option("--format", cfg.format, "output format: csv or json");
    sub->add_option("--out", cfg.out_path, "output path (atomic write)");
    sub->add_option("--tol", tol_args, "tolerance override NAME=VALUE")
        ->take_all();
  };

  CLI::App* verify =
      app.add_subcommand("verify", "run the identity verification suites");
  add_common(verify);
  CLI::App* pendulum = app.add_subcommand(
      "pendulum", "trace a circuit and emit the monodromy certificate");
  add_common(pendulum);
  CLI::App* braid =
      app.add_subcommand("braid", "track cubic roots around a sampled loop");
  add_common(braid);
  braid->add_option("--loop", loop_path, "loop sample file")->required();
  CLI::App* gate =
      app.add_subcommand("gate", "print the phase gate and its duals");
  add_common(gate);
  gate->add_option("--m", gate_m, "gate power");
  gate->add_option("--certificate", cert_path,
                   "take m from a certificate report");
  CLI::App* curve = app.add_subcommand(
      "curve", "roots, periods, and theta bridges of a Weierstrass curve");
  add_common(curve);
  curve->add_option("--g2", g2, "invariant g2")->required();
  curve->add_option("--g3", g3, "invariant g3")->required();
  CLI::App* theta_cmd =
      app.add_subcommand("theta", "evaluate theta functions at (z, tau)");
  add_common(theta_cmd);
  theta_cmd->add_option("--z", z_str, "argument as RE,IM")->required();
  theta_cmd->add_option("--tau", tau_str, "modular parameter as RE,IM")
      ->required();
  theta_cmd->add_option("--level", level, "theta level k");
  theta_cmd->add_option("--index", index, "theta index j");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!center_str.empty()) {
      const auto [cj, ch] = parse_pair(center_str, "--center");
      cfg.center_j = cj;
      cfg.center_h = ch;
    }
    apply_tolerance_args(cfg, tol_args);
    cfg.threads = thread_cap_from_env();
    validate_config(cfg);

    if (verify->parsed()) return cmd_verify(cfg, out, err);
    if (pendulum->parsed()) {
      try {
        return cmd_pendulum(cfg, out, err);
      } catch (const RefinementExceededError& e) {
        err << "certification failed: " << e.what() << "\n";
        return 1;
      } catch (const NonIntegralVariationError& e) {
        err << "certification failed: " << e.what() << "\n";
        return 1;
      }
    }
    if (braid->parsed()) return cmd_braid(cfg, loop_path, out, err);
    if (gate->parsed()) {
      long long m = gate_m;
      if (gate->count("--m") == 0) {
        if (cert_path.empty())
          throw ConfigError("gate needs --m or --certificate");
        std::ifstream f(cert_path);
        if (!f)
          throw FileParseError("cannot open certificate '" + cert_path + "'");
        nlohmann::json doc;
        try {
          f >> doc;
        } catch (const nlohmann::json::exception& e) {
          throw FileParseError(std::string("bad certificate JSON: ") +
                               e.what());
        }
        const nlohmann::json* mval = nullptr;
        if (doc.contains("certificate") && doc["certificate"].contains("m"))
          mval = &doc["certificate"]["m"];
        else if (doc.contains("m"))
          mval = &doc["m"];
        if (mval == nullptr || !mval->is_number_integer())
          throw FileParseError("certificate carries no integer m");
        m = mval->get<long long>();
      }
      if (m < -8 || m > 8)
        throw ConfigError("gate power m must satisfy |m| <= 8");
      return cmd_gate(cfg, m, out, err);
    }
    if (curve->parsed()) return cmd_curve(cfg, g2, g3, out, err);
    if (theta_cmd->parsed()) {
      const auto [zr, zi] = parse_pair(z_str, "--z");
      const auto [tr, ti] = parse_pair(tau_str, "--tau");
      return cmd_theta(cfg, Complex{zr, zi}, Complex{tr, ti}, level, index,
                       out, err);
    }
    err << "no subcommand dispatched\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const FileParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const RangeError& e) {
    err << "range error: " << e.what() << "\n";
    return 2;
  } catch (const OverflowError& e) {
    err << "overflow error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace monodromy::lab
