// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hqmap/boundary_kernels.hpp"
#include "hqmap/boundary_spec.hpp"
#include "hqmap/cli.hpp"
#include "hqmap/curve_spec.hpp"
#include "hqmap/harmonic_extension.hpp"
#include "hqmap/hilbert_transform.hpp"
#include "hqmap/lipschitz_bounds.hpp"
#include "hqmap/presets.hpp"
#include "hqmap/qc_analysis.hpp"

using namespace hqmap;
using std::numbers::pi;

namespace {

// Tolerances.
constexpr double kSpectralTol = 1e-8;
constexpr double kParsevalTol = 1e-10;
constexpr double kPvTol = 1e-3;
constexpr double kHilbertIdentityTol = 1e-6;
constexpr double kConjugateTol = 1e-8;
constexpr double kIdentityJacobianTol = 1e-4;
constexpr double kAffineJacobianTol = 1e-3;
constexpr double kKernelSlack = 1e-3;
constexpr double kCrossRouteTol = 1e-6;
constexpr double kAffineKTol = 1e-9;
constexpr double kQuadraticKTol = 1e-3;
constexpr double kNonQcK = 0.99;
constexpr double kInverseTol = 1e-10;
constexpr double kRatioTol = 1e-9;
constexpr double kMoriTol = 1e-10;
constexpr double kCertificateSeconds = 30.0;

// 2/(1+pi)^2 and 4 2^alpha (1 + pi) sqrt(2 pi^2 / log 2), 40 digits.
constexpr double kAlphaOracle = 0.1165991091837293596589272150230396661725;
constexpr double kLambdaOracle = 95.847180578179832187485221225705671938;

const std::vector<std::string> kPresets{"circle", "identity", "ellipse", "affine:a=0.25", "affine:a=0.5",
                                        "quadratic", "nonqc", "star"};

struct Result {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

BoundaryMap preset_boundary(const std::string& name, std::size_t n) {
  return BoundaryMap(boundary_from_json(resolve_map_spec(name), 1024), n);
}

std::vector<TrigTerm> random_trig(std::mt19937_64& rng, int degree) {
  // c_1 = 1 plus a perturbation with sum |n c_n| <= 1/2, so the trace is a Jordan curve.
  std::normal_distribution<double> g;
  std::vector<TrigTerm> terms{{1, 1.0}};
  std::vector<TrigTerm> extra;
  double weight = 0.0;
  for (int n = -degree; n <= degree; ++n) {
    if (n == 1 || n == 0) continue;
    const Complex c(g(rng), g(rng));
    extra.push_back({n, c});
    weight += std::abs(static_cast<double>(n)) * std::abs(c);
  }
  for (auto& t : extra) terms.push_back({t.n, t.c * (0.5 / weight)});
  terms.push_back({0, Complex(g(rng), g(rng))});
  return terms;
}

CircleFunction sample_trig(std::size_t n, const std::vector<TrigTerm>& terms) {
  std::vector<Complex> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = 2 * pi * static_cast<double>(j) / static_cast<double>(n);
    for (const auto& term : terms) v[j] += term.c * std::polar(1.0, static_cast<double>(term.n) * t);
  }
  return CircleFunction(std::move(v));
}

double max_diff(const CircleFunction& a, const CircleFunction& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

Complex disk_point(std::mt19937_64& rng, double rmax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(rmax * std::sqrt(u(rng)), 2 * pi * u(rng));
}

Result spectral_fidelity() {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> deg(2, 32);
  double poisson = 0.0, parseval = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const BoundaryMap bm(make_trig_boundary(random_trig(rng, deg(rng))), 1024);
    const auto f = analyze(bm);
    for (int k = 0; k < 50; ++k) {
      const Complex z = disk_point(rng, 0.9);
      poisson = std::max(poisson, std::abs(f(z) - poisson_quadrature(bm, z).value));
    }
    double coeffs = 0.0, mean = 0.0;
    for (auto a : f.analytic()) coeffs += std::norm(a);
    for (auto b : f.coanalytic()) coeffs += std::norm(b);
    for (auto v : bm.values()) mean += std::norm(v);
    mean /= static_cast<double>(bm.size());
    parseval = std::max(parseval, std::abs(coeffs - mean) / mean);
  }
  return {poisson <= kSpectralTol && parseval <= kParsevalTol,
          "max |evaluate - poisson| = " + fmt("%.3g", poisson) + ", Parseval rel. error = " + fmt("%.3g", parseval)};
}

Result hilbert_consistency() {
  const std::size_t n = 4096;
  std::mt19937_64 rng(2);
  double pv = 0.0, conj = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto terms = random_trig(rng, 32);
    const auto f = sample_trig(n, terms);
    pv = std::max(pv, max_diff(hilbert_pv(f).values, hilbert_spectral(f)));
    conj = std::max(conj, conjugate_identity_check(sample_trig(256, terms)));
  }
  const auto cosf = sample_trig(n, {{1, 0.5}, {-1, 0.5}});
  const auto sinf = sample_trig(n, {{1, Complex(0, -0.5)}, {-1, Complex(0, 0.5)}});
  const double hcos = std::max(max_diff(hilbert_pv(cosf).values, sinf), max_diff(hilbert_spectral(cosf), sinf));
  const auto cst = sample_trig(n, {{0, Complex(1.5, -0.5)}});
  double hconst = 0.0;
  for (auto v : hilbert_pv(cst).values.samples()) hconst = std::max(hconst, std::abs(v));
  for (auto v : hilbert_spectral(cst).samples()) hconst = std::max(hconst, std::abs(v));
  const auto g = sample_trig(n, random_trig(rng, 32));
  const Complex mean = g.mean();
  std::vector<Complex> expect(n);
  for (std::size_t j = 0; j < n; ++j) expect[j] = -(g[j] - mean);
  const double inv = std::max(max_diff(hilbert_spectral(hilbert_spectral(g)), CircleFunction(expect)),
                              max_diff(hilbert_pv(hilbert_pv(g).values).values, CircleFunction(expect)));
  const bool ok = pv <= kPvTol && hcos <= kHilbertIdentityTol && hconst <= kHilbertIdentityTol &&
                  inv <= kHilbertIdentityTol && conj <= kConjugateTol;
  return {ok, "PV vs spectral = " + fmt("%.3g", pv) + ", H(cos)-sin = " + fmt("%.3g", hcos) + ", H(const) = " +
                  fmt("%.3g", hconst) + ", HH+id-mean = " + fmt("%.3g", inv) + ", conjugate = " + fmt("%.3g", conj)};
}

Result boundary_jacobian_criterion() {
  const auto id = preset_boundary("identity", 2048);
  const auto af = preset_boundary("affine:a=0.5", 2048);
  double id_err = 0.0, af_err = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double tau = 2 * pi * k / 64;
    id_err = std::max(id_err, std::abs(boundary_jacobian(id, tau).value - 1.0));
    af_err = std::max(af_err, std::abs(boundary_jacobian(af, tau).value - 0.75));
  }
  double worst_ratio = 0.0;
  std::string worst;
  for (const auto& name : kPresets) {
    const auto bm = preset_boundary(name, 1024);
    const auto omega = tangent_modulus(bm.target());
    for (int k = 0; k < 64; ++k) {
      const double tau = 2 * pi * k / 64;
      const double r = boundary_jacobian(bm, tau, omega).value / jacobian_upper_bound(bm, omega, tau).value;
      if (r > worst_ratio) {
        worst_ratio = r;
        worst = name;
      }
    }
  }
  return {id_err <= kIdentityJacobianTol && af_err <= kAffineJacobianTol && worst_ratio <= 1.0,
          "identity |J-1| = " + fmt("%.3g", id_err) + ", affine |J-0.75| = " + fmt("%.3g", af_err) +
              ", max J/bound = " + fmt("%.4f", worst_ratio) + " (" + worst + ")"};
}

Result kernel_bounds() {
  const auto circle = arc_length_reparametrize(make_circle(1.0), 1024);
  const auto omega_c = ModulusOfContinuity::closed_form(
      [](double t) { return 2.0 * std::sin(std::min(t, pi) / 2); }, pi, "2 sin(t/2)");
  const auto id = preset_boundary("identity", 1024);
  const auto rc = kernel_bound_check(circle, omega_c, &id, kKernelSlack);

  const auto ell_map = preset_boundary("ellipse", 1024);
  const auto ellipse = arc_length_reparametrize(make_ellipse(2.0, 1.0), 1024);
  const auto re = kernel_bound_check(ellipse, tangent_modulus(ellipse), &ell_map, kKernelSlack);

  double cross = 0.0;
  for (const auto& name : {"affine:a=0.5", "ellipse", "quadratic"}) {
    const auto bm = preset_boundary(name, 256);
    for (std::size_t i = 0; i < bm.size(); ++i) {
      for (std::size_t j = 0; j < bm.size(); j += 3) {
        const double t = bm.angle(i), tau = bm.angle(j);
        cross = std::max(cross, std::abs(kernel_KF(bm, t, tau) - kernel_KF_pullback(bm, t, tau)));
      }
    }
  }
  const bool ok = rc.pass && rc.pullback_pass && re.pass && re.pullback_pass && cross <= kCrossRouteTol;
  return {ok, "circle excess = " + fmt("%.3g", rc.max_excess) + "/" + fmt("%.3g", rc.pullback_max_excess) +
                  ", ellipse excess = " + fmt("%.3g", re.max_excess) + "/" + fmt("%.3g", re.pullback_max_excess) +
                  ", cross-route = " + fmt("%.3g", cross)};
}

Result qc_measurement() {
  const auto grid = boundary_approaching_grid(12, 256);
  const auto af = dilatation_field(analyze(preset_boundary("affine:a=0.5", 1024)), grid);
  double k_err = 0.0;
  for (const auto& s : af.samples) k_err = std::max(k_err, std::abs(s.k - 0.5));
  // dK/dk = 2/(1-k)^2 = 8 at k = 1/2
  const double K_err = std::abs(af.K - 3.0);
  const auto qd = dilatation_field(analyze(preset_boundary("quadratic", 1024)), grid);
  const double qd_err = std::abs(qd.k_sup - 0.5);
  const auto nonqc = analyze(preset_boundary("nonqc", 1024));
  std::string seq;
  double last = 0.0;
  bool increasing = true;
  for (int levels : {4, 8, 12, 16}) {
    const double k = dilatation_field(nonqc, boundary_approaching_grid(levels, 256)).k_sup;
    increasing = increasing && k >= last;
    last = k;
    seq += (seq.empty() ? "" : ", ") + fmt("%.6f", k);
  }
  const bool ok = k_err <= kAffineKTol && K_err <= 8.0 * kAffineKTol && qd_err <= kQuadraticKTol &&
                  last >= kNonQcK && increasing;
  return {ok, "affine |k-0.5| = " + fmt("%.3g", k_err) + ", K = " + fmt("%.12f", af.K) + ", quadratic sup k = " +
                  fmt("%.6f", qd.k_sup) + ", non-q.c. sup k by level = [" + seq + "]"};
}

Result eremenko_suite() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> uc(0.1, 3.0), up(-0.9, 3.0), ub(0.2, 5.0), uq(0.5, 10.0), uQ(0.1, 10.0);
  std::uniform_int_distribution<int> nt(1, 4);
  double worst_ratio = 0.0, worst_convex = -std::numeric_limits<double>::infinity(), worst_inv = 0.0;
  int convex_fail = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<double, double>> terms;
    for (int i = nt(rng); i > 0; --i) terms.emplace_back(uc(rng), up(rng));
    const double b = ub(rng), q = uq(rng), big_q = uQ(rng);
    const auto chi = eremenko_majorant(power_mixture(terms), b, q, std::log(big_q), 64);
    worst_ratio = std::max(worst_ratio, (chi.integral_A_xi() + chi.integral_tail_bound()) / chi.mass());
    const auto cc = chi.convexity_check(200);
    worst_convex = std::max(worst_convex, cc.worst_excess);
    convex_fail += cc.pass ? 0 : 1;
    for (int i = 1; i < 64; ++i) {
      const double l = chi.log_chi_inverse(i - 0.37);
      worst_inv = std::max(worst_inv, std::abs(chi.log_chi_inverse(chi.chi_from_log(l)) - l));
    }
  }
  const auto one = eremenko_majorant(constant_function(1.0), 1.0, 3.0, std::log(2.0), 64);
  const double ratio_err = std::abs(one.ratio() - 1.5);
  const bool ok = worst_ratio <= 4.0 && convex_fail == 0 && worst_inv <= kInverseTol && ratio_err <= kRatioTol;
  return {ok, "max int A chi / int A = " + fmt("%.4f", worst_ratio) + ", convexity failures = " +
                  std::to_string(convex_fail) + " (worst excess " + fmt("%.3g", worst_convex) +
                  "), chi^-1 chi error = " + fmt("%.3g", worst_inv) + ", A=1 ratio error = " + fmt("%.3g", ratio_err)};
}

Result mori_constants() {
  const auto m = mori_holder(1.0, pi / 2, pi);
  const double a_err = std::abs(m.alpha - kAlphaOracle);
  const double l_err = std::abs(m.Lambda - kLambdaOracle);
  std::size_t pairs = 0, violations = 0;
  std::string skipped;
  for (const auto& name : kPresets) {
    const auto f = renormalize(analyze(preset_boundary(name, 1024)));
    const double K = dilatation_field(f, boundary_approaching_grid(12, 256)).K;
    if (!std::isfinite(K)) {
      skipped += (skipped.empty() ? "" : ",") + name;
      continue;
    }
    const auto& c = f.boundary().target();
    const auto mb = mori_holder(K, chord_arc_constant(c), c.enclosed_area());
    for (int i = 0; i < 128; ++i) {
      for (int j = 0; j < 128; ++j) {
        const Complex z1 = std::polar(1.0, 2 * pi * i / 128), z2 = std::polar(1.0, 2 * pi * j / 128);
        ++pairs;
        violations += mb.holds(z1, z2, f(z1), f(z2)) ? 0 : 1;
      }
    }
  }
  return {a_err <= kMoriTol && l_err <= kMoriTol && violations == 0,
          "|alpha - oracle| = " + fmt("%.3g", a_err) + ", |Lambda - oracle| = " + fmt("%.3g", l_err) +
              ", Holder violations = " + std::to_string(violations) + "/" + std::to_string(pairs) +
              (skipped.empty() ? "" : " (not q.c., skipped: " + skipped + ")")};
}

Result certificate_soundness() {
  const auto start = std::chrono::steady_clock::now();
  struct Case {
    const char* name;
    double K;
  };
  const std::vector<Case> cases{{"identity", 1.0}, {"affine:a=0.25", 5.0 / 3.0}, {"affine:a=0.5", 3.0},
                                {"quadratic", 3.0}};
  bool ok = true;
  std::string detail;
  const auto grid = boundary_approaching_grid(12, 256);
  const auto pairs = default_lipschitz_pairs(grid);
  for (const auto& c : cases) {
    const auto f = analyze(preset_boundary(c.name, 1024));
    const auto g = renormalize(f);
    const double emp = std::max(empirical_lipschitz(f, pairs, grid, c.K).sup,
                                empirical_lipschitz(g, pairs, grid, c.K).sup);
    const auto& target = f.boundary().target();
    const auto cert = lipschitz_certificate(c.K, target, tangent_modulus(target));
    const bool covers = certificate_covers(cert, emp);
    ok = ok && covers;
    detail += std::string(detail.empty() ? "" : "; ") + c.name + ": empirical " + fmt("%.6f", emp) +
              ", log10 bound " + fmt("%.1f", cert.f_bound_log10) + ", gap " +
              fmt("%.1f", cert.f_bound_log10 - std::log10(emp)) + " decades";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs <= kCertificateSeconds;
  return {ok, detail + "; " + fmt("%.2f", secs) + " s"};
}

Result convex_target_checks() {
  bool ok = true;
  std::string detail;
  const auto grid = boundary_approaching_grid(12, 256);
  for (const auto& name : kPresets) {
    const auto bm = preset_boundary(name, 1024);
    if (!is_convex(bm.target())) {
      detail += std::string(detail.empty() ? "" : "; ") + name + ": nonconvex, skipped";
      continue;
    }
    const auto f = analyze(bm);
    const auto h = heinz_lower_check(f, grid);
    const auto j = jacobian_lower_check(f, grid);
    const auto c = convex_qc_criterion(bm);
    const bool expect_qc = name != "nonqc";
    const bool good = h.pass && h.margin > 0.0 && j.pass && j.margin > 0.0 && c.predicted_qc == expect_qc &&
                      c.consistent;
    ok = ok && good;
    detail += std::string(detail.empty() ? "" : "; ") + name + ": Heinz margin " + fmt("%.3g", h.margin) +
              ", Jacobian margin " + fmt("%.3g", j.margin) + ", " + (c.predicted_qc ? "q.c." : "not q.c.") +
              (c.consistent ? "" : " (inconsistent)");
  }
  return {ok, detail};
}

std::string run_in_process(const cli::RunConfig& c) {
  std::ostringstream out, err;
  cli::run(c, out, err);
  return out.str();
}

std::string run_executable(const std::string& args, const std::string& path) {
  const std::string cmd = std::string(HQMAP_CLI_PATH) + " " + args + " --out " + path + " >/dev/null 2>&1";
  if (std::system(cmd.c_str()) == -1) return {};
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result determinism() {
  std::size_t compared = 0;
  bool ok = true;
  for (const char* sub : {"analyze", "jacobian", "hilbert"}) {
    for (const char* map : {"quadratic", "nonqc", "ellipse"}) {
      cli::RunConfig c;
      c.subcommand = sub;
      c.map = map;
      c.N = 512;
      c.grid_radii = 8;
      c.grid_angles = 64;
      c.taus = 16;
      c.seed = 17;
      const auto a = run_in_process(c);
      ok = ok && !a.empty() && a == run_in_process(c);
      ++compared;
    }
  }
  cli::RunConfig cert;
  cert.subcommand = "certify";
  cert.curve = "ellipse";
  cert.K = 3.0;
  ok = ok && run_in_process(cert) == run_in_process(cert);
  cli::RunConfig er;
  er.subcommand = "eremenko";
  er.A = "power:1@-0.5,2@1";
  ok = ok && run_in_process(er) == run_in_process(er);
  compared += 2;
  const std::string tmp = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/hqmap_accept_";
  const std::string args = "analyze --map quadratic --N 512 --grid-radii 8 --grid-angles 64 --seed 3";
  const auto x = run_executable(args, tmp + "a.json");
  const auto y = run_executable(args, tmp + "b.json");
  ok = ok && !x.empty() && x == y;
  ++compared;
  std::remove((tmp + "a.json").c_str());
  std::remove((tmp + "b.json").c_str());
  return {ok, std::to_string(compared) + " report pairs compared"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
      {"spectral fidelity", spectral_fidelity},
      {"Hilbert consistency", hilbert_consistency},
      {"boundary Jacobian", boundary_jacobian_criterion},
      {"kernel bounds", kernel_bounds},
      {"q.c. measurement", qc_measurement},
      {"Eremenko suite", eremenko_suite},
      {"Mori constants", mori_constants},
      {"certificate soundness", certificate_soundness},
      {"convex-target checks", convex_target_checks},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    const auto start = std::chrono::steady_clock::now();
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += r.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s [%.1f s]\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, r.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
