#include "hqmap/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hqmap/boundary_kernels.hpp"
#include "hqmap/boundary_spec.hpp"
#include "hqmap/curve_spec.hpp"
#include "hqmap/errors.hpp"
#include "hqmap/harmonic_extension.hpp"
#include "hqmap/hilbert_transform.hpp"
#include "hqmap/lipschitz_bounds.hpp"
#include "hqmap/presets.hpp"
#include "hqmap/qc_analysis.hpp"

namespace hqmap::cli {
namespace {

using nlohmann::json;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Outcome {
  json report;
  Table table;
  std::vector<std::string> failed;
};

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

void check_resolution(std::size_t n, const char* flag) {
  if (!is_power_of_two(n) || n < 64 || n > 16384) {
    throw InputError(std::string(flag) + " must be a power of two in [64, 16384]");
  }
}

HarmonicMap load_map(const RunConfig& c) {
  if (c.map.empty()) throw InputError("--map is required");
  const auto spec = resolve_map_spec(c.map);
  return analyze(BoundaryMap(boundary_from_json(spec, c.M), c.N));
}

Outcome run_analyze(const RunConfig& c) {
  const auto map = load_map(c);
  PolarGrid grid = boundary_approaching_grid(c.grid_radii, c.grid_angles);
  const auto field = dilatation_field(map, grid, c.K);
  Outcome o;
  auto& r = o.report;
  r["k_sup"] = field.k_sup;
  r["k_argmax"] = complex_json(field.k_argmax);
  r["K"] = finite_or_null(field.K);
  r["quasiconformal"] = field.quasiconformal;
  r["J_min"] = field.J_min;
  r["sense_preserving"] = field.sense_preserving;
  r["distortion"] = {{"holds", field.distortion_holds}, {"max_excess", finite_or_null(field.distortion_excess)}};
  if (field.user_K) r["user_K"] = {{"K", *field.user_K}, {"holds", field.user_K_holds}};
  r["tail_energy"] = map.tail_energy();
  r["resolved"] = map.resolved();
  r["grid"] = {{"radii", grid.radii}, {"angles", grid.angles}};

  const auto lip = empirical_lipschitz(map, default_lipschitz_pairs(grid), grid, field.K);
  r["lipschitz_sup"] = lip.sup;
  r["lipschitz"] = {{"sup", lip.sup},
                    {"z1", complex_json(lip.z1)},
                    {"z2", complex_json(lip.z2)},
                    {"pairs", lip.pairs},
                    {"tangential_max", lip.tangential_max},
                    {"mean_value_bound", finite_or_null(lip.mean_value_bound)}};

  const auto norm = normalization_check(map);
  r["normalization"] = {{"pass", norm.pass}, {"arcs", norm.arcs}, {"max_deviation", norm.max_deviation}};

  if (is_convex(map.boundary().target())) {
    const auto heinz = heinz_lower_check(map, grid);
    r["heinz"] = {{"pass", heinz.pass},
                  {"margin", heinz.margin},
                  {"min_norm", heinz.min_norm},
                  {"threshold", heinz.threshold}};
    const auto jac = jacobian_lower_check(map, grid);
    r["jacobian_lower"] = {{"pass", jac.pass},
                           {"margin", jac.margin},
                           {"kappa", jac.kappa},
                           {"delta", jac.delta},
                           {"J_min", jac.J_min}};
    CriterionOptions opt;
    opt.grid_angles = c.grid_angles;
    opt.grid_levels = c.grid_radii;
    const auto crit = convex_qc_criterion(map.boundary(), opt);
    r["criterion"] = {{"log_dF_sup", finite_or_null(crit.log_dF_sup)},
                      {"hilbert_sup", finite_or_null(crit.hilbert_sup)},
                      {"log_dF_sup_half", finite_or_null(crit.log_dF_sup_half)},
                      {"hilbert_sup_half", finite_or_null(crit.hilbert_sup_half)},
                      {"predicted_qc", crit.predicted_qc},
                      {"measured_k_sup", crit.measured_k_sup},
                      {"consistent", crit.consistent}};
    if (field.quasiconformal && !heinz.pass) o.failed.push_back("heinz");
    if (field.quasiconformal && !jac.pass) o.failed.push_back("jacobian_lower");
    if (!crit.consistent) o.failed.push_back("criterion");
  } else {
    r["heinz"] = nullptr;
    r["jacobian_lower"] = nullptr;
    r["criterion"] = nullptr;
  }
  if (field.quasiconformal && !field.distortion_holds) o.failed.push_back("distortion");
  if (field.user_K && !field.user_K_holds) o.failed.push_back("user_K");
  if (std::isfinite(lip.mean_value_bound) && lip.sup > lip.mean_value_bound * (1.0 + 1e-9)) {
    o.failed.push_back("mean_value_route");
  }

  o.table.header = {"r", "phi", "x", "y", "k", "J", "norm_Df", "abs_dphi_f"};
  for (std::size_t i = 0; i < field.samples.size(); ++i) {
    const auto& s = field.samples[i];
    const double phi = kTwoPi * static_cast<double>(i % grid.angles) / static_cast<double>(grid.angles);
    o.table.rows.push_back({grid.radii[i / grid.angles], phi, s.z.real(), s.z.imag(), s.k, s.jacobian, s.norm,
                            s.tangential});
  }
  return o;
}

Outcome run_certify(const RunConfig& c) {
  Outcome o;
  auto& r = o.report;
  std::optional<HarmonicMap> map;
  std::shared_ptr<const JordanCurve> curve;
  double K = 0.0;
  if (!c.map.empty()) {
    map.emplace(load_map(c));
    curve = map->boundary().target_ptr();
    if (c.K) {
      K = *c.K;
    } else {
      const auto field = dilatation_field(*map, boundary_approaching_grid(c.grid_radii, c.grid_angles));
      if (!field.quasiconformal) throw PreconditionError("certify: the map is not quasiconformal on the grid");
      K = field.K;
    }
  } else if (!c.curve.empty()) {
    if (!c.K) throw InputError("certify: --K is required with --curve");
    K = *c.K;
    curve = std::make_shared<const JordanCurve>(curve_from_json(resolve_curve_spec(c.curve), c.M));
  } else {
    throw InputError("certify: one of --map or --curve is required");
  }
  const auto omega = tangent_modulus(*curve);
  const auto cert = lipschitz_certificate(K, *curve, omega);
  r["K"] = cert.K;
  r["B_gamma"] = cert.B_gamma;
  r["alpha"] = cert.alpha;
  r["Lambda"] = cert.Lambda;
  r["B"] = cert.B;
  r["q"] = cert.q;
  r["Q"] = finite_or_null(std::exp(cert.log_Q));
  r["Q_log10"] = cert.log_Q / std::log(10.0);
  r["Upsilon"] = cert.Upsilon;
  r["C1"] = cert.C1;
  r["L_bound"] = finite_or_null(cert.L_bound);
  r["L_bound_log10"] = cert.L_bound_log10;
  r["f_lipschitz_bound_log10"] = cert.f_bound_log10;
  r["audit"] = {{"x_k_count", cert.x_k_count},
                {"x_k_numeric", cert.x_k_numeric},
                {"quadrature_errors", {{"dini_integral", cert.dini_error}, {"majorant_tail", cert.majorant_tail}}},
                {"Upsilon_printed_form", cert.Upsilon_literal},
                {"curve", {{"length", cert.length}, {"area", cert.area}, {"samples", curve->size()}}},
                {"omega", omega.label()}};
  o.table.header = {"K", "B_gamma", "alpha", "Lambda", "B", "Q_log10", "Upsilon", "C1", "L_bound_log10"};
  o.table.rows.push_back({cert.K, cert.B_gamma, cert.alpha, cert.Lambda, cert.B, cert.log_Q / std::log(10.0),
                          cert.Upsilon, cert.C1, cert.L_bound_log10});
  if (map) {
    const auto grid = boundary_approaching_grid(c.grid_radii, c.grid_angles);
    const auto lip = empirical_lipschitz(*map, default_lipschitz_pairs(grid), grid, K);
    const bool covered = certificate_covers(cert, lip.sup);
    r["empirical_lipschitz"] = lip.sup;
    r["sound"] = covered;
    r["gap_log10"] = cert.f_bound_log10 - std::log10(lip.sup);
    if (!covered) o.failed.push_back("soundness");
  }
  return o;
}

Outcome run_hilbert(const RunConfig& c) {
  const auto map = load_map(c);
  const CircleFunction fn({map.boundary().values().begin(), map.boundary().values().end()});
  const auto spectral = hilbert_spectral(fn);
  Outcome o;
  auto& r = o.report;
  double pv_diff = 0.0;
  double pv_err = 0.0;
  std::optional<PvResult> pv;
  if (fn.size() >= 128) {
    pv.emplace(hilbert_pv(fn));
    pv_err = pv->error_estimate;
    for (std::size_t j = 0; j < fn.size(); ++j) pv_diff = std::max(pv_diff, std::abs(pv->values[j] - spectral[j]));
  }
  const auto twice = hilbert_spectral(spectral);
  const Complex mean = fn.mean();
  double involution = 0.0;
  for (std::size_t j = 0; j < fn.size(); ++j) involution = std::max(involution, std::abs(twice[j] + fn[j] - mean));
  const double conj_dev = conjugate_identity_check(fn);
  r["N"] = fn.size();
  r["pv_vs_spectral"] = pv ? json(pv_diff) : json(nullptr);
  r["pv_error_estimate"] = pv ? json(pv_err) : json(nullptr);
  r["involution_error"] = involution;
  r["conjugate_identity_deviation"] = conj_dev;
  r["mean"] = complex_json(mean);
  r["resolved"] = map.resolved();
  if (map.resolved() && conj_dev > 1e-8) o.failed.push_back("conjugate_identity");
  o.table.header = {"t", "re_f", "im_f", "re_H_spectral", "im_H_spectral", "re_H_pv", "im_H_pv"};
  for (std::size_t j = 0; j < fn.size(); ++j) {
    const Complex p = pv ? pv->values[j] : Complex(std::nan(""), std::nan(""));
    o.table.rows.push_back({fn.angle(j), fn[j].real(), fn[j].imag(), spectral[j].real(), spectral[j].imag(), p.real(),
                            p.imag()});
  }
  return o;
}

Outcome run_jacobian(const RunConfig& c) {
  const auto map = load_map(c);
  const auto& boundary = map.boundary();
  const auto omega = tangent_modulus(boundary.target());
  Outcome o;
  json rows = json::array();
  bool bounded = true;
  o.table.header = {"tau", "J", "remainder_bound", "upper_bound", "J_spectral"};
  for (std::size_t i = 0; i < c.taus; ++i) {
    const double tau = kTwoPi * static_cast<double>(i) / static_cast<double>(c.taus);
    const auto j = boundary_jacobian(boundary, tau, omega);
    const auto ub = jacobian_upper_bound(boundary, omega, tau);
    const double spectral = map.evaluate(std::polar(1.0, tau)).jacobian();
    const bool ok = j.value <= ub.value + ub.tail_bound + j.remainder_bound;
    bounded = bounded && ok;
    rows.push_back({{"tau", tau},
                    {"J", j.value},
                    {"remainder_bound", j.remainder_bound},
                    {"upper_bound", ub.value},
                    {"upper_tail", ub.tail_bound},
                    {"J_spectral", spectral},
                    {"bounded", ok}});
    o.table.rows.push_back({tau, j.value, j.remainder_bound, ub.value, spectral});
  }
  o.report["N"] = boundary.size();
  o.report["samples"] = rows;
  o.report["bounded"] = bounded;
  if (!bounded) o.failed.push_back("upper_bound");
  return o;
}

Outcome run_eremenko(const RunConfig& c) {
  if (!(c.Q > 0.0)) throw InputError("eremenko: --Q must be positive");
  const auto A = integrable_from_string(c.A);
  const auto chi = eremenko_majorant(A, c.B, c.q, std::log(c.Q), c.depth);
  const auto conv = chi.convexity_check();
  Outcome o;
  auto& r = o.report;
  r["A"] = A->describe();
  r["B"] = c.B;
  r["q"] = c.q;
  r["Q"] = c.Q;
  r["mass"] = chi.mass();
  r["integral_A_chi"] = chi.integral_A_xi();
  r["tail_bound"] = chi.integral_tail_bound();
  r["ratio"] = chi.ratio();
  r["ratio_limit"] = 4.0;
  r["depth"] = chi.depth();
  r["convexity"] = {{"pass", conv.pass}, {"points", conv.points}, {"worst_excess", finite_or_null(conv.worst_excess)}};
  json xs = json::array();
  o.table.header = {"k", "x_k", "log_x_k"};
  for (std::size_t k = 0; k <= chi.depth(); ++k) {
    xs.push_back(chi.log_breakpoints()[k]);
    o.table.rows.push_back({static_cast<double>(k), chi.breakpoint(k), chi.log_breakpoints()[k]});
  }
  r["log_breakpoints"] = xs;
  if (!(chi.ratio() + chi.integral_tail_bound() / chi.mass() <= 4.0)) o.failed.push_back("ratio");
  if (!conv.pass) o.failed.push_back("convexity");
  return o;
}

Outcome run_presets(const RunConfig&) {
  Outcome o;
  json list = json::array();
  o.table.header = {"index"};
  for (const auto& p : presets()) {
    list.push_back({{"name", p.name}, {"kind", p.kind}, {"description", p.description}, {"spec", p.spec}});
  }
  o.report["presets"] = list;
  return o;
}

std::string format_csv(const Table& t) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Outcome o;
  try {
    if (config.format != "json" && config.format != "csv") throw InputError("--format must be json or csv");
    check_resolution(config.N, "--N");
    check_resolution(config.M, "--M");
    if (config.grid_radii < 1 || config.grid_radii > 40) throw InputError("--grid-radii must be in [1, 40]");
    if (config.grid_angles < 1) throw InputError("--grid-angles must be positive");
    if (config.K && !(*config.K >= 1.0)) throw InputError("--K must be >= 1");
    const auto& s = config.subcommand;
    if (s == "analyze") {
      o = run_analyze(config);
    } else if (s == "certify") {
      o = run_certify(config);
    } else if (s == "hilbert") {
      o = run_hilbert(config);
    } else if (s == "jacobian") {
      o = run_jacobian(config);
    } else if (s == "eremenko") {
      o = run_eremenko(config);
    } else if (s == "presets") {
      o = run_presets(config);
    } else {
      throw InputError("unknown subcommand \"" + s + "\"");
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidCurveError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "check failed: " << e.what() << '\n';
    return 1;
  }

  o.report["subcommand"] = config.subcommand;
  o.report["seed"] = config.seed;
  o.report["failed_checks"] = o.failed;
  std::string text;
  if (config.format == "csv" && config.subcommand != "presets") {
    text = format_csv(o.table);
  } else {
    text = o.report.dump(2) + "\n";
  }
  if (config.out.empty()) {
    out << text;
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << config.out << '\n';
      return 2;
    }
    file << text;
  }
  for (const auto& f : o.failed) err << "check failed: " << f << '\n';
  return o.failed.empty() ? 0 : 1;
}

int main(int argc, char** argv) {
  CLI::App app{"Harmonic and quasiconformal analysis of disk maps onto Jordan domains"};
  app.require_subcommand(1, 1);
  RunConfig config;
  double K = 0.0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", config.out, "Report path (default: stdout)");
    sub->add_option("--format", config.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", config.seed, "Seed recorded in the report");
    sub->add_option("--N", config.N, "Boundary samples (power of two, 64..16384)");
    sub->add_option("--M", config.M, "Curve samples (power of two, 64..16384)");
  };
  auto* analyze_cmd = app.add_subcommand("analyze", "Dilatation, Lipschitz and convex-target checks of a map");
  analyze_cmd->add_option("--map", config.map, "Map spec: preset name, inline JSON or file")->required();
  analyze_cmd->add_option("--grid-radii", config.grid_radii, "Radii 1 - 2^-j for j = 1..n, plus 0 and 1");
  analyze_cmd->add_option("--grid-angles", config.grid_angles, "Angles per radius");
  analyze_cmd->add_option("--K", K, "Distortion constant to validate");

  auto* certify_cmd = app.add_subcommand("certify", "Lipschitz certificate for a curve and K, or for a map");
  certify_cmd->add_option("--map", config.map, "Map spec");
  certify_cmd->add_option("--curve", config.curve, "Curve spec");
  certify_cmd->add_option("--K", K, "Distortion constant (measured from the map when omitted)");
  certify_cmd->add_option("--grid-radii", config.grid_radii, "Radii levels for measurements");
  certify_cmd->add_option("--grid-angles", config.grid_angles, "Angles per radius");

  auto* hilbert_cmd = app.add_subcommand("hilbert", "Hilbert transform of the boundary values of a map");
  hilbert_cmd->add_option("--map", config.map, "Map spec")->required();

  auto* jacobian_cmd = app.add_subcommand("jacobian", "Boundary Jacobian and its upper bound");
  jacobian_cmd->add_option("--map", config.map, "Map spec")->required();
  jacobian_cmd->add_option("--taus", config.taus, "Number of boundary angles");

  auto* eremenko_cmd = app.add_subcommand("eremenko", "Convex majorant for an integrable A");
  eremenko_cmd->add_option("--A", config.A, "const:C or power:c@p,c@p,...");
  eremenko_cmd->add_option("--B", config.B, "Interval end");
  eremenko_cmd->add_option("--q", config.q, "Exponent q > 0");
  eremenko_cmd->add_option("--Q", config.Q, "Scale Q > 0");
  eremenko_cmd->add_option("--depth", config.depth, "Number of breakpoints");

  auto* presets_cmd = app.add_subcommand("presets", "List the built-in specs");

  for (auto* sub : {analyze_cmd, certify_cmd, hilbert_cmd, jacobian_cmd, eremenko_cmd, presets_cmd}) {
    add_common(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (auto* sub : app.get_subcommands()) {
    config.subcommand = sub->get_name();
    const auto* opt = sub->get_option_no_throw("--K");
    if (opt != nullptr && opt->count() > 0) config.K = K;
  }
  return run(config, std::cout, std::cerr);
}

}  // namespace hqmap::cli
