#include "ssbc/cli.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssbc/adjust.hpp"
#include "ssbc/feasibility.hpp"
#include "ssbc/mc.hpp"
#include "ssbc/mondrian.hpp"
#include "ssbc/report_io.hpp"

namespace ssbc::cli {

namespace {

// Thrown for flag combinations CLI11 cannot express on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
      try {
        const double v = std::stod(s);
        if (v > 0.0 && v < 1.0) return {};
      } catch (const std::exception&) {
      }
      return "value " + s + " not in the open interval (0, 1)";
    },
    "in (0,1)");

struct Common {
  std::string format = "json";
};

void emit(std::ostream& out, const Json& j, const std::string& format) {
  if (format == "human") {
    write_human(out, j);
  } else {
    out << dump_json(j);
  }
}

CoverageRegime make_regime(const std::string& regime, int m, bool m_given) {
  if (regime == "window") {
    if (!m_given) throw UsageError("--m is required with --regime window (window size m >= 1)");
    return CoverageRegime::window(m);
  }
  if (m_given) throw UsageError("--m is only valid with --regime window");
  return CoverageRegime::infinite();
}

void add_format(CLI::App* sub, std::string& format, std::vector<std::string> allowed) {
  sub->add_option("--format", format, "output format")
      ->check(CLI::IsMember(std::move(allowed)))
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Small-sample PAC corrections for split conformal prediction levels", "ssbc"};
  app.require_subcommand(1);

  // adjust
  int adj_n = 0;
  double adj_alpha = 0.0;
  double adj_delta = 0.0;
  std::string adj_regime = "inf";
  int adj_m = 0;
  std::string adj_method = "ssbc";
  std::string adj_format = "json";
  auto* adjust = app.add_subcommand("adjust", "Adjusted miscoverage level (SSBC grid search or DKWM)");
  adjust->add_option("--n", adj_n, "calibration set size (n), >= 1")->required()->check(CLI::PositiveNumber);
  adjust->add_option("--alpha", adj_alpha, "target miscoverage (α_target), in (0,1)")->required()->check(kOpenUnit);
  adjust->add_option("--delta", adj_delta, "risk tolerance over calibration draws (δ), in (0,1)")->required()->check(kOpenUnit);
  adjust->add_option("--regime", adj_regime, "coverage law: inf (Beta) or window (Beta-Binomial)")
      ->check(CLI::IsMember({"inf", "window"}))->capture_default_str();
  auto* adj_m_opt = adjust->add_option("--m", adj_m, "inference window size (m), >= 1; required iff --regime window")
                        ->check(CLI::PositiveNumber);
  adjust->add_option("--method", adj_method, "ssbc or dkwm")->check(CLI::IsMember({"ssbc", "dkwm"}))->capture_default_str();
  add_format(adjust, adj_format, {"json", "human"});

  // feasible
  int fea_n = 0;
  double fea_delta = 0.0;
  int fea_m = 0;
  std::string fea_format = "json";
  auto* feasible = app.add_subcommand("feasible", "Minimal certifiable miscoverage and grid implementability");
  feasible->add_option("--n", fea_n, "calibration set size (n), >= 1")->required()->check(CLI::PositiveNumber);
  feasible->add_option("--delta", fea_delta, "risk tolerance (δ), in (0,1)")->required()->check(kOpenUnit);
  auto* fea_m_opt = feasible->add_option("--m", fea_m, "inference window size (m), >= 1; adds finite-window thresholds")
                        ->check(CLI::PositiveNumber);
  add_format(feasible, fea_format, {"json", "human"});

  // rungs
  int rung_n = 0;
  double rung_alpha = 0.0;
  std::string rung_regime = "inf";
  int rung_m = 0;
  std::string rung_format = "json";
  auto* rungs = app.add_subcommand("rungs", "Attainable δ for every grid level u/(n+1)");
  rungs->add_option("--n", rung_n, "calibration set size (n), >= 1")->required()->check(CLI::PositiveNumber);
  rungs->add_option("--alpha", rung_alpha, "target miscoverage (α_target), in (0,1)")->required()->check(kOpenUnit);
  rungs->add_option("--regime", rung_regime, "coverage law: inf or window")
      ->check(CLI::IsMember({"inf", "window"}))->capture_default_str();
  auto* rung_m_opt = rungs->add_option("--m", rung_m, "inference window size (m), >= 1; required iff --regime window")
                         ->check(CLI::PositiveNumber);
  add_format(rungs, rung_format, {"json", "csv", "human"});

  // mondrian
  MondrianSpec mspec;
  std::string mon_format = "json";
  auto* mondrian = app.add_subcommand("mondrian", "Class-conditional window-budget SSBC under prevalence uncertainty");
  mondrian->add_option("--k", mspec.k, "training set size (k), >= 1")->required()->check(CLI::PositiveNumber);
  mondrian->add_option("--kj", mspec.k_j, "class-j training count (k_j), in [0, k]")->required()->check(CLI::NonNegativeNumber);
  mondrian->add_option("--nj", mspec.n_j, "class-j calibration size (n_j), >= 1")->required()->check(CLI::PositiveNumber);
  mondrian->add_option("--m", mspec.m, "inference window size (m), >= 1")->required()->check(CLI::PositiveNumber);
  mondrian->add_option("--alpha", mspec.alpha_target, "target miscoverage (α_target), in (0,1)")->required()->check(kOpenUnit);
  mondrian->add_option("--delta", mspec.delta, "risk tolerance (δ), in (0,1)")->required()->check(kOpenUnit);
  add_format(mondrian, mon_format, {"json", "human"});

  // simulate
  SimConfig sim;
  std::string sim_methods = "none,ssbc";
  std::string sim_score = "cauchy";
  unsigned sim_threads = 0;
  std::string sim_format = "json";
  std::string sim_csv_method;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of coverage and violation rates");
  simulate->add_option("--n", sim.n, "calibration set size (n), >= 1")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--m", sim.m, "inference window size (m), >= 1")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--alpha", sim.alpha_target, "target miscoverage (α_target), in (0,1)")->required()->check(kOpenUnit);
  simulate->add_option("--delta", sim.delta, "risk tolerance (δ), in (0,1)")->required()->check(kOpenUnit);
  simulate->add_option("--runs", sim.runs, "number of Monte Carlo runs, >= 1")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", sim.seed, "64-bit seed")->capture_default_str();
  simulate->add_option("--methods", sim_methods, "comma-separated subset of none,ssbc,dkwm")->capture_default_str();
  simulate->add_option("--score", sim_score, "score distribution: cauchy, normal or uniform")
      ->check(CLI::IsMember({"cauchy", "abs_cauchy", "normal", "abs_normal", "uniform"}))->capture_default_str();
  simulate->add_option("--threads", sim_threads,
                       "worker threads; 0 uses SSBC_THREADS or the hardware count (results do not depend on it)")
      ->capture_default_str();
  add_format(simulate, sim_format, {"json", "csv", "human"});
  simulate->add_option("--csv-method", sim_csv_method, "method whose histogram --format csv writes (default: first)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*adjust) {
      const CalibrationContext ctx{adj_n, adj_alpha, adj_delta};
      const CoverageRegime regime = make_regime(adj_regime, adj_m, adj_m_opt->count() > 0);
      AdjustmentReport rep;
      if (adj_method == "dkwm") {
        if (regime.is_window()) throw UsageError("--method dkwm supports --regime inf only");
        rep = dkwm_adjust(ctx);
      } else {
        rep = ssbc_adjust(ctx, regime);
      }
      emit(out, to_json(rep), adj_format);
      return rep.feasible ? kExitOk : kExitInfeasible;
    }
    if (*feasible) {
      std::optional<int> m;
      if (fea_m_opt->count() > 0) m = fea_m;
      emit(out, to_json(feasibility_report(fea_n, fea_delta, m)), fea_format);
      return kExitOk;
    }
    if (*rungs) {
      const CoverageRegime regime = make_regime(rung_regime, rung_m, rung_m_opt->count() > 0);
      const RungTable table = rung_table(rung_n, rung_alpha, regime);
      if (rung_format == "csv") {
        write_rungs_csv(out, table);
      } else {
        emit(out, to_json(table), rung_format);
      }
      return kExitOk;
    }
    if (*mondrian) {
      mspec.validate();
      const AdjustmentReport rep = ssbc_mondrian(mspec);
      Json j = to_json(rep);
      j["inputs"]["k"] = mspec.k;
      j["inputs"]["k_j"] = mspec.k_j;
      emit(out, j, mon_format);
      return rep.feasible ? kExitOk : kExitInfeasible;
    }
    if (*simulate) {
      sim.score_model = parse_score_model(sim_score);
      sim.methods.clear();
      std::stringstream ss(sim_methods);
      for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) sim.methods.push_back(parse_sim_method(item));
      }
      sim.validate();
      const SimReport rep = run_simulation(sim, sim_threads);
      if (sim_format == "csv") {
        const MethodResult* chosen = nullptr;
        for (const MethodResult& r : rep.methods) {
          if (sim_csv_method.empty() ? !r.skipped : to_string(r.method) == sim_csv_method) {
            chosen = &r;
            break;
          }
        }
        if (chosen == nullptr || chosen->skipped) {
          throw UsageError("--csv-method: no simulated histogram for '" + sim_csv_method + "'");
        }
        write_histogram_csv(out, *chosen, sim.m);
      } else {
        emit(out, to_json(rep), sim_format);
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ssbc::cli
