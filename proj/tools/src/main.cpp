#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gspin/errors.hpp"

namespace {

using gspin::cli::CommandOutput;

int emit(const std::string& command, const CommandOutput& out, std::uint64_t seed, double wall,
         const std::string& out_path, const std::string& csv_path) {
  const std::string doc = gspin::cli::make_envelope(command, out, seed, wall).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << doc;
  } else {
    std::ofstream f(out_path);
    if (!f) throw gspin::InvalidArgument("cannot open --out file '" + out_path + "'");
    f << doc;
  }
  if (!csv_path.empty()) {
    if (out.csv.empty()) throw gspin::InvalidArgument(command + " produces no CSV output");
    std::ofstream f(csv_path);
    if (!f) throw gspin::InvalidArgument("cannot open --csv file '" + csv_path + "'");
    f << out.csv;
  }
  return 0;
}

int fail(const char* kind, const std::string& message, int code) {
  std::cerr << gspin::cli::error_record(kind, message).dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closure, invariant and dynamics experiments for generalized spins"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 1;
  std::string out_path;
  std::string csv_path;
  app.add_option("--seed", seed, "Seed for randomized scans")->capture_default_str();
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");
  app.add_option("--csv", csv_path, "Write the command's CSV series here");

  gspin::cli::VerdictParams verdict;
  std::string dims = "2..10";
  auto* cmd_verdict = app.add_subcommand("verdict", "Closure verdict per dimension");
  cmd_verdict->add_option("--dims", dims, "Dimensions, e.g. 2..10 or 3,6,7")->capture_default_str();

  gspin::cli::InvariantsParams inv;
  auto* cmd_inv = app.add_subcommand("invariants", "Invariant tensors of a group");
  cmd_inv->add_option("--group", inv.group, "special-orthogonal | g2 | su-real | inversion-containing")
      ->capture_default_str();
  cmd_inv->add_option("--d", inv.d, "Vector dimension")->capture_default_str();
  cmd_inv->add_option("--order", inv.order, "Tensor order")->capture_default_str();
  cmd_inv->add_option("--constraints", inv.constraints,
                      "none | antisymmetric-first-pair | inversion-parity (comma separated)")
      ->capture_default_str();

  gspin::cli::PrecessParams pre;
  auto* cmd_pre = app.add_subcommand("precess", "d = 3 composite or d = 4 three-body dynamics");
  cmd_pre->add_option("--model", pre.model, "d3 | d4")->capture_default_str();
  cmd_pre->add_option("--a", pre.a, "d3 coupling a")->capture_default_str();
  cmd_pre->add_option("--b", pre.b, "d3 coupling b")->capture_default_str();
  cmd_pre->add_option("--sign", pre.sign, "d3 initial sign (0 = evolving branch)")->capture_default_str();
  cmd_pre->add_option("--t-max", pre.t_max, "Final time")->capture_default_str();
  cmd_pre->add_option("--dt", pre.dt, "Step / sampling interval")->capture_default_str();
  cmd_pre->add_option("--directions", pre.directions, "Random measurement pairs in the scan")
      ->capture_default_str();
  cmd_pre->add_option("--n1", pre.n1, "d4 first field direction")->capture_default_str();
  cmd_pre->add_option("--n2", pre.n2, "d4 second field direction")->capture_default_str();
  cmd_pre->add_option("--x0", pre.x0, "d4 initial Bloch vector")->capture_default_str();
  cmd_pre->add_option("--N", pre.count, "d4 bath size")->capture_default_str();
  cmd_pre->add_option("--mean-j", pre.mean_coupling, "d4 mean coupling")->capture_default_str();

  gspin::cli::QlimitParams ql;
  auto* cmd_ql = app.add_subcommand("qlimit", "Mean-field error scaling of the Heisenberg bath");
  cmd_ql->add_option("--n-list", ql.n_list, "Bath sizes, e.g. 8,16,32 or 1..10")->capture_default_str();
  cmd_ql->add_option("--rule", ql.rule, "fixed (J = s/N) | constant (J = s)")->capture_default_str();
  cmd_ql->add_option("--t", ql.t, "Evolution time")->capture_default_str();
  cmd_ql->add_option("--alpha", ql.alpha, "Probe amplitude on |0>")->capture_default_str();
  cmd_ql->add_option("--beta", ql.beta, "Probe amplitude on |1>")->capture_default_str();
  cmd_ql->add_option("--strength", ql.strength, "Coupling strength s")->capture_default_str();

  gspin::cli::CoherentParams coh;
  auto* cmd_coh = app.add_subcommand("coherent", "Spin-coherent-state statistics");
  cmd_coh->add_option("--theta", coh.theta, "Polar angle")->capture_default_str();
  cmd_coh->add_option("--N", coh.count, "Number of spins")->capture_default_str();
  cmd_coh->add_option("--slots", coh.slots, "Coarse-graining slot size")->capture_default_str();
  cmd_coh->add_option("--angles", coh.angles, "Overlap grid points on [0, pi]")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    std::optional<CommandOutput> out;
    std::string name;
    if (cmd_verdict->parsed()) {
      name = "verdict";
      verdict.dims = gspin::cli::parse_int_list(dims);
      out = gspin::cli::run_verdict(verdict);
    } else if (cmd_inv->parsed()) {
      name = "invariants";
      out = gspin::cli::run_invariants(inv);
    } else if (cmd_pre->parsed()) {
      name = "precess";
      pre.seed = seed;
      out = gspin::cli::run_precess(pre);
    } else if (cmd_ql->parsed()) {
      name = "qlimit";
      out = gspin::cli::run_qlimit(ql);
    } else {
      name = "coherent";
      out = gspin::cli::run_coherent(coh);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return emit(name, *out, seed, wall, out_path, csv_path);
  } catch (const gspin::GuardViolation& e) {
    return fail("guard", e.what(), 3);
  } catch (const gspin::IndeterminateResult& e) {
    return fail("indeterminate", e.what(), 4);
  } catch (const std::invalid_argument& e) {
    return fail("invalid-argument", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
}
