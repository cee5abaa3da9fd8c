#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gspin/closure.hpp"
#include "gspin/dynamics.hpp"
#include "gspin/errors.hpp"
#include "gspin/gbit.hpp"
#include "gspin/invariant_solver.hpp"
#include "gspin/quantum_limit.hpp"

#ifndef GSPIN_VERSION
#define GSPIN_VERSION "0.0.0"
#endif

namespace gspin::cli {

namespace {

using nlohmann::json;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InvalidArgument("cannot parse integer '" + std::string(s) + "'");
  return v;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

// Nonzero entries with 1-based multi-indices.
json sparse_tensor_json(const InvariantTensor& t) {
  json entries = json::array();
  const Vector& c = t.components();
  for (Eigen::Index f = 0; f < c.size(); ++f) {
    if (std::abs(c[f]) <= 1e-12) continue;
    std::vector<int> idx = t.multi_index(f);
    for (int& i : idx) ++i;
    entries.push_back({{"index", idx}, {"value", c[f]}});
  }
  return {{"order", t.order()}, {"d", t.dim()}, {"entries", entries}};
}

json attempt_json(const GroupAttempt& at) {
  json j = {{"group", at.group},
            {"contains_inversion", at.contains_inversion},
            {"a_dim_invariant", at.a_dim_invariant},
            {"a_dim", at.a_dim},
            {"mu_dim", at.mu_dim},
            {"membership_residuals", at.membership_residuals},
            {"admissible_mu_dim", at.admissible_mu_dim},
            {"stabilizer_dim", at.stabilizer_dim},
            {"outcome", at.outcome}};
  if (at.witness_in_algebra_dim >= 0) {
    j["product_form"] = {{"in_algebra_dim", at.witness_in_algebra_dim},
                         {"surviving_dim", at.witness_surviving_dim}};
  }
  return j;
}

std::vector<SymmetryConstraint> parse_constraints(std::string_view text) {
  std::vector<SymmetryConstraint> out;
  for (std::string_view part : split(text, ',')) {
    part = trim(part);
    if (part == "none" || part.empty()) continue;
    if (part == "antisymmetric-first-pair" || part == "antisym")
      out.push_back(SymmetryConstraint::AntisymmetricFirstPair);
    else if (part == "inversion-parity" || part == "parity")
      out.push_back(SymmetryConstraint::InversionParity);
    else
      throw InvalidArgument("unknown constraint '" + std::string(part) + "'");
  }
  return out;
}

Vector parse_vector(std::string_view text, int d, const char* what) {
  const std::vector<double> v = parse_real_list(text);
  if (static_cast<int>(v.size()) != d)
    throw InvalidArgument(std::string(what) + ": expected " + std::to_string(d) + " components");
  return Eigen::Map<const Vector>(v.data(), d);
}

CommandOutput precess_d3(const PrecessParams& p) {
  CommandOutput out;
  const double tol = 1e-12 * std::max({1.0, std::abs(p.a), std::abs(p.b)});
  int sign = p.sign;
  if (sign == 0) sign = std::abs(p.b - p.a) <= tol ? 1 : -1;
  if (sign != 1 && sign != -1) throw InvalidArgument("precess: --sign must be -1, 0 or 1");
  out.parameters = {{"model", "d3"}, {"a", p.a},       {"b", p.b},
                    {"sign", sign},  {"t_max", p.t_max}, {"dt", p.dt},
                    {"directions", p.directions}};

  const D3Trajectory traj = integrate_composite_d3(canonical_d3_state(sign), p.a, p.b, p.t_max, p.dt);
  const Classification cls = classify_solution(p.a, p.b, p.directions, p.seed);

  double min_eig = std::numeric_limits<double>::infinity();
  double t_min = 0.0;
  for (const D3Sample& s : traj.samples) {
    const CompositeState psi(BlochVector(s.x, 1e3), BlochVector(s.y, 1e3), s.T);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(density_matrix(psi));
    if (eig.eigenvalues()[0] < min_eig) {
      min_eig = eig.eigenvalues()[0];
      t_min = s.t;
    }
  }
  const D3Sample& last = traj.samples.back();
  out.payload = {{"classification", to_string(cls.kind)},
                 {"positivity_min", cls.min_probability},
                 {"min_eigenvalue", min_eig},
                 {"t_at_min_eigenvalue", t_min},
                 {"samples", traj.samples.size()},
                 {"final", {{"t", last.t},
                            {"x", vector_json(last.x)},
                            {"y", vector_json(last.y)},
                            {"T", matrix_json(last.T)}}}};
  std::ostringstream csv;
  write_csv(csv, traj);
  out.csv = csv.str();
  return out;
}

CommandOutput precess_d4(const PrecessParams& p) {
  CommandOutput out;
  out.parameters = {{"model", "d4"}, {"n1", p.n1},     {"n2", p.n2},
                    {"x0", p.x0},    {"N", p.count},   {"mean_j", p.mean_coupling},
                    {"t_max", p.t_max}, {"dt", p.dt}};
  const Vector n1 = parse_vector(p.n1, 4, "--n1");
  const Vector n2 = parse_vector(p.n2, 4, "--n2");
  const BlochVector x0(parse_vector(p.x0, 4, "--x0"));
  const Matrix g = d4_three_body_generator(d4_coherent_field(n1, n2, p.count, p.mean_coupling));
  const std::vector<BlochSample> traj = precess_trajectory(x0, g, p.t_max, p.dt);

  double drift1 = 0.0, drift2 = 0.0, norm_drift = 0.0;
  const double c1 = n1.dot(x0.components());
  const double c2 = n2.dot(x0.components());
  for (const BlochSample& s : traj) {
    drift1 = std::max(drift1, std::abs(n1.dot(s.x) - c1));
    drift2 = std::max(drift2, std::abs(n2.dot(s.x) - c2));
    norm_drift = std::max(norm_drift, std::abs(s.x.norm() - x0.norm()));
  }
  out.payload = {{"generator", matrix_json(g)},
                 {"conservation_drift", {drift1, drift2}},
                 {"norm_drift", norm_drift},
                 {"samples", traj.size()},
                 {"final", {{"t", traj.back().t}, {"x", vector_json(traj.back().x)}}}};
  std::ostringstream csv;
  write_csv(csv, traj);
  out.csv = csv.str();
  return out;
}

}  // namespace

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (std::string_view part : split(text, ',')) {
    part = trim(part);
    if (part.empty()) throw InvalidArgument("empty entry in integer list");
    const std::size_t dots = part.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_int(part));
      continue;
    }
    const int lo = parse_int(part.substr(0, dots));
    const int hi = parse_int(part.substr(dots + 2));
    if (hi < lo) throw InvalidArgument("descending range '" + std::string(part) + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (std::string_view part : split(text, ',')) {
    part = trim(part);
    const std::string s(part);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size()) throw InvalidArgument("cannot parse number '" + s + "'");
    out.push_back(v);
  }
  return out;
}

CommandOutput run_verdict(const VerdictParams& p) {
  if (p.dims.empty()) throw InvalidArgument("verdict: no dimensions given");
  std::vector<int> dims = p.dims;
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  for (int d : dims)
    if (d < kMinVerdictDim || d > kMaxVerdictDim)
      throw InvalidArgument("verdict: d = " + std::to_string(d) + " outside supported range " +
                            std::to_string(kMinVerdictDim) + ".." + std::to_string(kMaxVerdictDim));
  CommandOutput out;
  out.parameters = {{"dims", dims}};
  json rows = json::array();
  std::ostringstream csv;
  csv << "d,closed,chain,a_dim,mu_dim,stabilizer_dim\n";
  for (int d : dims) {
    const ClosureVerdict v = closure_verdict(d);
    json attempts = json::array();
    for (const GroupAttempt& at : v.attempts) attempts.push_back(attempt_json(at));
    json mu = json::array();
    for (const InvariantTensor& t : v.mu_basis) mu.push_back(sparse_tensor_json(t));
    json gens = json::array();
    for (const Matrix& g : v.generators) gens.push_back(matrix_json(g));
    rows.push_back({{"d", d},
                    {"chain", v.chain},
                    {"attempts", attempts},
                    {"a_dim", v.a_dim},
                    {"mu_dim", v.mu_dim},
                    {"membership_residuals", v.membership_residuals},
                    {"stabilizer_dim", v.stabilizer_dim},
                    {"closed_with_pairwise", v.closed_with_pairwise},
                    {"mu_basis", mu},
                    {"generators", gens},
                    {"notes", v.notes}});
    std::string chain;
    for (const std::string& g : v.chain) chain += (chain.empty() ? "" : ">") + g;
    csv << d << ',' << (v.closed_with_pairwise ? "true" : "false") << ',' << chain << ',' << v.a_dim
        << ',' << v.mu_dim << ',' << v.stabilizer_dim << '\n';
  }
  out.payload = {{"verdicts", rows}};
  out.csv = csv.str();
  return out;
}

CommandOutput run_invariants(const InvariantsParams& p) {
  const GroupSpec group = group_from_name(p.group, p.d);
  const std::vector<SymmetryConstraint> constraints = parse_constraints(p.constraints);
  const SolutionSpace space = invariant_tensors(group, p.order, constraints);
  CommandOutput out;
  out.parameters = {{"group", group.name}, {"d", p.d}, {"order", p.order},
                    {"constraints", p.constraints}};
  json basis = json::array();
  for (const InvariantTensor& t : space.basis) basis.push_back(sparse_tensor_json(t));
  out.payload = {{"dimension", space.dimension},
                 {"threshold_used", space.threshold_used},
                 {"gap_ratio", space.gap_ratio},
                 {"parity_shortcut", space.parity_shortcut},
                 {"basis", basis}};
  return out;
}

CommandOutput run_precess(const PrecessParams& p) {
  if (p.model == "d3") return precess_d3(p);
  if (p.model == "d4") return precess_d4(p);
  throw InvalidArgument("precess: unknown model '" + p.model + "' (expected d3 or d4)");
}

CommandOutput run_qlimit(const QlimitParams& p) {
  const std::vector<int> sizes = parse_int_list(p.n_list);
  if (sizes.empty()) throw InvalidArgument("qlimit: empty N list");
  CouplingRule rule;
  if (p.rule == "fixed") rule = CouplingRule::Fixed;
  else if (p.rule == "constant") rule = CouplingRule::Constant;
  else throw InvalidArgument("qlimit: unknown rule '" + p.rule + "' (expected fixed or constant)");
  const double norm = std::hypot(p.alpha, p.beta);
  if (norm == 0.0) throw InvalidArgument("qlimit: probe state must be nonzero");
  const ErrorScalingReport report =
      error_scaling_sweep(sizes, rule, p.alpha / norm, p.beta / norm, p.t, p.strength);

  CommandOutput out;
  out.parameters = {{"n_list", p.n_list}, {"rule", p.rule}, {"t", p.t},
                    {"alpha", p.alpha / norm}, {"beta", p.beta / norm}, {"strength", p.strength}};
  json rows = json::array();
  for (const ErrorScalingRow& r : report.rows)
    rows.push_back({{"N", r.n},
                    {"F", r.fidelity},
                    {"one_minus_F", r.one_minus_fidelity},
                    {"chi2", r.chi_norm_sq},
                    {"mu2", r.mu_norm_sq},
                    {"ratio", r.ratio}});
  out.payload = {{"rows", rows}};
  if (std::isfinite(report.slope)) out.payload["slope"] = report.slope;
  else out.payload["slope"] = nullptr;
  std::ostringstream csv;
  write_csv(csv, report);
  out.csv = csv.str();
  return out;
}

CommandOutput run_coherent(const CoherentParams& p) {
  if (p.angles < 2) throw InvalidArgument("coherent: need at least two grid angles");
  const CoherentStatistics stats = coherent_outcome_distribution(p.theta, p.count);
  CommandOutput out;
  out.parameters = {{"theta", p.theta}, {"N", p.count}, {"slots", p.slots}, {"angles", p.angles}};
  auto pmf_json = [](const CoherentStatistics& s) {
    json rows = json::array();
    for (const Outcome& o : s.pmf) rows.push_back({{"m", o.m}, {"p", o.probability}});
    return rows;
  };
  out.payload = {{"mean", stats.mean}, {"stddev", stats.stddev}, {"pmf", pmf_json(stats)}};
  if (p.slots > 1) {
    const CoherentStatistics coarse = coarse_grain(stats, p.slots);
    out.payload["coarse"] = {{"mean", coarse.mean}, {"stddev", coarse.stddev},
                             {"pmf", pmf_json(coarse)}};
  }
  // Overlap of coherent states along e3 and along angle φ in the 1-3 plane.
  json overlaps = json::array();
  const BlochVector n1 = BlochVector::axis(3, 2);
  for (int k = 0; k < p.angles; ++k) {
    const double phi = std::numbers::pi * k / (p.angles - 1);
    const BlochVector n2(Vector(Eigen::Vector3d(std::sin(phi), 0.0, std::cos(phi))));
    overlaps.push_back({{"angle", phi}, {"overlap", coherent_overlap(n1, n2, p.count)}});
  }
  out.payload["overlaps"] = overlaps;
  std::ostringstream csv;
  csv << "m,p\n";
  csv.precision(17);
  for (const Outcome& o : stats.pmf) csv << o.m << ',' << o.probability << '\n';
  out.csv = csv.str();
  return out;
}

json make_envelope(std::string_view command, const CommandOutput& out, std::uint64_t seed,
                   double wall_time_s) {
  return {{"schema", kSchemaVersion},     {"command", command},       {"version", GSPIN_VERSION},
          {"seed", seed},                 {"parameters", out.parameters},
          {"payload", out.payload},       {"wall_time_s", wall_time_s}};
}

json error_record(std::string_view kind, std::string_view message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace gspin::cli
