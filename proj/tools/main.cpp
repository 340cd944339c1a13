// Command-line driver for the seeded verification campaigns.
//
// Exit status: 0 when every asserted slack stays above -tol (or the run
// is exploratory), 1 on a contract violation (the report is still
// written), 2 on a usage error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "trineq/errors.hpp"
#include "trineq/functionals.hpp"
#include "trineq/io.hpp"
#include "trineq/probes.hpp"

namespace {

using trineq::PExponent;
using trineq::TensorSpace;
using trineq::probes::ProbeReport;

struct CommonOpts {
  double p = 0.5;
  std::vector<Eigen::Index> dims;
  Eigen::Index dim = 3;
  int n = 2;
  int trials = 100;
  std::uint64_t seed = 1;
  double tol = trineq::kDefaultTol;
  bool tol_set = false;
  std::string out;
  std::string format = "json";
  int threads = 1;
  bool exploratory = false;
};

void add_output_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out, "Write the report to this path");
  cmd->add_option("--format", o.format, "Report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--threads", o.threads,
                  "Worker threads for the trials (never changes results)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Campaign seed");
  cmd->add_option("--trials", o.trials, "Number of trials")
      ->check(CLI::PositiveNumber);
  auto* tol_opt =
      cmd->add_option("--tol", o.tol, "Slack tolerance")->check(CLI::PositiveNumber);
  cmd->parse_complete_callback([&o, tol_opt] { o.tol_set = tol_opt->count() > 0; });
}

int emit(const ProbeReport& rep, const CommonOpts& o) {
  nlohmann::json j = rep.to_json();
  j["timestamp"] = trineq::io::timestamp_utc();
  if (!o.out.empty()) {
    if (o.format == "csv") {
      trineq::io::write_text(o.out, rep.to_csv());
    } else {
      trineq::io::write_text(o.out, j.dump(2) + "\n");
    }
  } else if (o.format == "csv") {
    std::cout << rep.to_csv();
  } else {
    std::cout << j.dump(2) << "\n";
  }
  std::cerr << rep.name << ": trials=" << rep.trials
            << " violations=" << rep.violations
            << " worst_slack=" << rep.worst_slack
            << (rep.contract ? "" : " (exploratory)")
            << (rep.passed() ? " [ok]" : " [violated]") << "\n";
  return rep.passed() ? 0 : 1;
}

TensorSpace space_from(const std::vector<Eigen::Index>& dims,
                       std::size_t expected) {
  if (dims.size() != expected) {
    throw trineq::ShapeError("--dims expects " + std::to_string(expected) +
                             " factor dimensions");
  }
  return TensorSpace(dims);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "trineq: seeded numerical verification of trace-functional "
      "convexity, Minkowski-type partial-trace inequalities, entropy "
      "subadditivity, and the BKS inequality"};
  app.require_subcommand(1);

  CommonOpts o;
  ProbeReport report;

  auto* probe = app.add_subcommand(
      "probe", "Midpoint concavity/convexity campaign for the trace functional");
  probe->add_option("--p", o.p, "Exponent p > 0")->check(CLI::PositiveNumber);
  probe->add_option("--n", o.n, "Tuple length")->check(CLI::PositiveNumber);
  probe->add_option("--dim", o.dim, "Matrix dimension")->check(CLI::PositiveNumber);
  probe->add_flag("--exploratory", o.exploratory,
                  "Record slacks without asserting them");
  add_output_flags(probe, o);

  auto* verify2 = app.add_subcommand(
      "verify2", "Two-space Minkowski inequality campaign");
  verify2->add_option("--p", o.p)->check(CLI::PositiveNumber);
  verify2->add_option("--dims", o.dims, "Factor dimensions d1,d2")->delimiter(',');
  verify2->add_flag("--exploratory", o.exploratory);
  add_output_flags(verify2, o);

  auto* verify3 = app.add_subcommand(
      "verify3", "Three-space Minkowski inequality campaign");
  verify3->add_option("--p", o.p)->check(CLI::PositiveNumber);
  verify3->add_option("--dims", o.dims, "Factor dimensions d1,d2,d3")->delimiter(',');
  verify3->add_flag("--exploratory", o.exploratory);
  add_output_flags(verify3, o);

  double ssa_h = 0.0;
  auto* ssa = app.add_subcommand(
      "ssa", "Strong-subadditivity deficit campaign on random densities");
  ssa->add_option("--dims", o.dims, "Factor dimensions d1,d2,d3")->delimiter(',');
  ssa->add_option("--limit-h", ssa_h,
                  "Step size: check the derivative of the three-space gap "
                  "at p = 1 instead of the deficit");
  add_output_flags(ssa, o);

  auto* bks = app.add_subcommand(
      "bks", "BKS difference and subadditivity inequality campaign, p > 1");
  bks->add_option("--p", o.p)->check(CLI::PositiveNumber);
  bks->add_option("--dim", o.dim)->check(CLI::PositiveNumber);
  add_output_flags(bks, o);

  auto* cex = app.add_subcommand(
      "counterexample",
      "Construct a midpoint-convexity counterexample for p > 2");
  cex->add_option("--p", o.p)->check(CLI::PositiveNumber);
  cex->add_option("--dim", o.dim)->check(CLI::PositiveNumber);
  int cex_attempts = 10000;
  cex->add_option("--attempts", cex_attempts, "Search attempt budget")
      ->check(CLI::PositiveNumber);
  add_output_flags(cex, o);

  double p_low = 0.5, p_high = 2.5;
  auto* identities = app.add_subcommand(
      "identities", "Residual suite for the algebraic identities");
  identities->add_option("--dim", o.dim, "Matrix dimension for the pair checks")
      ->check(CLI::PositiveNumber);
  identities->add_option("--dims", o.dims,
                         "Two-factor space for averaging/duality (d1,d2)")
      ->delimiter(',');
  identities->add_option("--p-low", p_low, "Exponent in (0,1) for the splits");
  identities->add_option("--p-high", p_high, "Exponent > 1 for duality/blocks");
  add_output_flags(identities, o);

  auto* oracle = app.add_subcommand(
      "oracle", "Classical (diagonal) oracle cross-path campaign");
  oracle->add_option("--p", o.p)->check(CLI::PositiveNumber);
  oracle->add_option("--dims", o.dims, "Tensor shape X,Y,Z")->delimiter(',');
  add_output_flags(oracle, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (probe->parsed()) {
      report = trineq::probes::midpoint_probe(PExponent(o.p), o.n, o.dim,
                                              o.trials, o.seed, o.tol,
                                              o.threads);
      if (o.exploratory) report.contract = false;
    } else if (verify2->parsed()) {
      if (o.dims.empty()) o.dims = {2, 2};
      report = trineq::probes::verify_minkowski2(
          o.trials, space_from(o.dims, 2), PExponent(o.p), o.seed, o.tol,
          o.threads, o.exploratory);
    } else if (verify3->parsed()) {
      if (o.dims.empty()) o.dims = {2, 2, 2};
      if (!o.exploratory && !trineq::probes::minkowski3_contract(o.p)) {
        std::cerr << "verify3: the inequality is only asserted for p in "
                     "(0,1] or p = 2; pass --exploratory for other p\n";
        return 2;
      }
      report = trineq::probes::verify_minkowski3(
          o.trials, space_from(o.dims, 3), PExponent(o.p), o.seed, o.tol,
          o.threads, o.exploratory);
    } else if (ssa->parsed()) {
      if (o.dims.empty()) o.dims = {2, 2, 2};
      const TensorSpace space = space_from(o.dims, 3);
      if (ssa_h > 0.0) {
        const double tol = o.tol_set ? o.tol : 1e-6;
        report = trineq::probes::verify_ssa_limit(o.trials, space, ssa_h,
                                                  o.seed, tol, o.threads);
      } else {
        report = trineq::probes::verify_ssa(o.trials, space, o.seed, o.tol,
                                            o.threads);
      }
    } else if (bks->parsed()) {
      if (!(o.p > 1.0)) {
        std::cerr << "bks: requires --p > 1\n";
        return 2;
      }
      report = trineq::probes::verify_bks(o.trials, o.dim, o.p, o.seed, o.tol,
                                          o.threads);
    } else if (cex->parsed()) {
      if (!(o.p > 2.0)) {
        std::cerr << "counterexample: requires --p > 2\n";
        return 2;
      }
      report = trineq::probes::counterexample_report(o.p, o.dim, o.seed,
                                                     cex_attempts);
    } else if (identities->parsed()) {
      if (o.dims.empty()) o.dims = {2, 2};
      report = trineq::probes::verify_identities(o.trials, o.dim,
                                                 space_from(o.dims, 2), p_low,
                                                 p_high, o.seed, o.threads);
    } else if (oracle->parsed()) {
      if (o.dims.empty()) o.dims = {2, 2, 2};
      if (o.dims.size() != 3) {
        std::cerr << "oracle: --dims needs three entries\n";
        return 2;
      }
      report = trineq::probes::verify_classical_oracle(o.trials, o.dims, o.p,
                                                       o.seed, 1e-10,
                                                       o.threads);
    }
  } catch (const trineq::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const trineq::ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const trineq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    return emit(report, o);
  } catch (const trineq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
