#include "discordkit/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "discordkit/correlations.hpp"
#include "discordkit/mcstats.hpp"
#include "discordkit/mdms.hpp"
#include "discordkit/parallel.hpp"
#include "discordkit/state_file.hpp"

namespace discordkit::cli {

namespace {

constexpr const char* kUnitsNote =
    "Entropies, discord, classical correlations (J) and mutual information (I) are in bits; "
    "concurrence (E) and purity are dimensionless. Basis order: |00>, |01>, |10>, |11> (left label = qubit A).";

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct CommonOptions {
  int grid = 48;
  double tol = 1e-10;
  int workers = default_workers();

  OptimizerSettings settings() const {
    OptimizerSettings s;
    s.grid = grid;
    s.tolerance = tol;
    return s;
  }

  int effective_workers() const {
    if (const char* env = std::getenv("DISCORDKIT_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return workers;
  }
};

void add_optimizer_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--grid", o.grid, "Grid points per measurement angle")->check(CLI::Range(4, 1024))->capture_default_str();
  cmd->add_option("--tol", o.tol, "Simplex refinement tolerance on the objective (bits)")
      ->check(CLI::Range(1e-16, 1e-4))
      ->capture_default_str();
}

Subsystem parse_side(const std::string& s) { return s == "A" ? Subsystem::A : Subsystem::B; }

void print_record(std::ostream& out, const CorrelationRecord& r) {
  out << "delta_ab=" << fixed6(r.delta_ab) << '\n'
      << "delta_ba=" << fixed6(r.delta_ba) << '\n'
      << "J=" << fixed6(r.classical_j) << '\n'
      << "I=" << fixed6(r.mutual_i) << '\n'
      << "E=" << fixed6(r.concurrence) << '\n'
      << "purity=" << fixed6(r.purity) << '\n'
      << "rank=" << r.rank << '\n';
}

void print_matrix(std::ostream& out, const Matrix4& m) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s(%.6f%+.6fi)", j ? " " : "", m(i, j).real(), m(i, j).imag());
      out << buf;
    }
    out << '\n';
  }
}

void describe_measurement(std::ostream& out, const TwoQubitState& rho, Subsystem measured, int povm,
                          const OptimizerSettings& settings) {
  const MeasurementOptimum d = discord_projective(rho, measured, settings);
  out << "measured=" << label(measured) << " discord=" << fixed6(d.value) << " theta=" << fixed6(d.basis.theta)
      << " phi=" << fixed6(d.basis.phi) << '\n';
  if (povm > 0) {
    const PovmOptimum p = discord_povm(rho, measured, povm, settings);
    out << "measured=" << label(measured) << " povm_elements<=" << povm << " discord_povm=" << fixed6(p.value)
        << " used_elements=" << p.povm.elements().size() << '\n';
  }
}

template <class Writer>
void write_output(const std::string& path, std::ostream& fallback, Writer&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::FileNotFound, "cannot open '" + path + "' for writing");
  write(f);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"discordkit: quantum discord and correlation toolkit for two-qubit states"};
  app.footer(kUnitsNote);
  app.require_subcommand(1, 1);

  CommonOptions common;

  // discord
  auto* discord = app.add_subcommand("discord", "Correlation record of a state read from a JSON file");
  discord->footer(kUnitsNote);
  std::string state_path;
  std::string measured = "B";
  int povm = 0;
  discord->add_option("--state", state_path, "State file: {\"matrix\": 4x4 array of [re, im]}")->required();
  discord->add_option("--measured", measured, "Measured qubit for the reported optimum")
      ->check(CLI::IsMember({"A", "B"}))
      ->capture_default_str();
  discord->add_option("--povm", povm, "Also minimize over rank-one POVMs with up to N elements")
      ->check(CLI::Range(2, 4));
  add_optimizer_flags(discord, common);

  // family
  auto* family = app.add_subcommand("family", "Build a state from the rank-2 / rank-3 families and report it");
  family->footer(kUnitsNote);
  bool use_r2 = false, use_r3 = false, use_sym = false, use_cusp = false;
  double epsilon = 0.5, p = 0.5, m = 0.5;
  std::string family_out;
  auto* f_r2 = family->add_flag("--r2", use_r2, "eps|Phi~><Phi~| + (1-eps)|01><01|, |Phi~> = sqrt(p)|00> + sqrt(1-p)|11>");
  auto* f_r3 = family->add_flag("--r3", use_r3, "eps|Phi+><Phi+| + (1-eps)(m|01><01| + (1-m)|10><10|)");
  auto* f_sym = family->add_flag("--sym", use_sym, "eps|Phi+><Phi+| + (1-eps)|01><01|");
  auto* f_cusp = family->add_flag("--cusp", use_cusp, "(|Phi+><Phi+| + |01><01| + |10><10|)/3");
  f_r2->excludes(f_r3)->excludes(f_sym)->excludes(f_cusp);
  f_r3->excludes(f_sym)->excludes(f_cusp);
  f_sym->excludes(f_cusp);
  family->add_option("--epsilon", epsilon, "Bell-component weight")->capture_default_str();
  family->add_option("--p", p, "Bell asymmetry weight (--r2)")->capture_default_str();
  family->add_option("--m", m, "Parity-sector weight (--r3)")->capture_default_str();
  family->add_option("--out", family_out, "Write the state as a JSON state file");
  family->add_option("--measured", measured, "Measured qubit for the reported optimum")
      ->check(CLI::IsMember({"A", "B"}))
      ->capture_default_str();
  family->add_option("--povm", povm, "Also minimize over rank-one POVMs with up to N elements")
      ->check(CLI::Range(2, 4));
  add_optimizer_flags(family, common);

  // trace
  auto* trace = app.add_subcommand("trace", "Trace the maximal-discord boundary curve to CSV");
  trace->footer(std::string("CSV columns: branch,epsilon,param2,J,delta,E (param2 is p for Rank2, m otherwise). ") +
                kUnitsNote);
  int points = 40;
  std::string trace_out;
  trace->add_option("--points", points, "Points per branch")->check(CLI::Range(2, 2000))->capture_default_str();
  trace->add_option("--out", trace_out, "Output CSV path (default: stdout)");
  trace->add_option("--workers", common.workers, "Worker threads (DISCORDKIT_THREADS overrides)")
      ->check(CLI::PositiveNumber);
  add_optimizer_flags(trace, common);

  // survey
  auto* survey = app.add_subcommand("survey", "Monte Carlo survey over random states of fixed rank");
  survey->footer(std::string("Records CSV columns: delta_ab,delta_ba,J,I,E,purity,rank. ") + kUnitsNote);
  int rank = 4;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  std::string survey_out;
  survey->add_option("--rank", rank, "Rank of the sampled density matrices")->check(CLI::Range(1, 4))->capture_default_str();
  survey->add_option("--samples", samples, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
  survey->add_option("--seed", seed, "Master seed")->capture_default_str();
  survey->add_option("--workers", common.workers, "Worker threads (DISCORDKIT_THREADS overrides)")
      ->check(CLI::PositiveNumber);
  survey->add_option("--out", survey_out, "Records CSV path");
  add_optimizer_flags(survey, common);

  // hist
  auto* hist = app.add_subcommand("hist", "Histogram / density grid of a records file");
  hist->footer(std::string("Histogram CSV: bin_lo,bin_hi,density. Grid CSV: x_lo,x_hi,y_lo,y_hi,count with x = J. ") +
               kUnitsNote);
  std::string records_path, hist_out, grid_out, quantity = "delta", grid_y = "delta";
  int bins = 100;
  hist->add_option("--records", records_path, "Records CSV written by 'survey --out'")->required();
  hist->add_option("--quantity", quantity, "Histogrammed quantity")
      ->check(CLI::IsMember({"delta", "J", "E", "I", "purity"}))
      ->capture_default_str();
  hist->add_option("--bins", bins, "Number of bins")->check(CLI::Range(2, 100000))->capture_default_str();
  hist->add_option("--out", hist_out, "Histogram CSV path (default: stdout)");
  hist->add_option("--grid-out", grid_out, "Also write the (J, y) density grid CSV");
  hist->add_option("--grid-y", grid_y, "Grid y quantity")->check(CLI::IsMember({"delta", "E"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*discord) {
      const TwoQubitState rho = parse_state_file(state_path);
      print_record(out, correlation_record(rho, common.settings()));
      describe_measurement(out, rho, parse_side(measured), povm, common.settings());
    } else if (*family) {
      std::optional<TwoQubitState> rho;
      if (use_cusp) {
        rho = mdms::cusp_state();
      } else if (use_r3) {
        rho = mdms::r3_state({epsilon, m});
      } else if (use_sym) {
        rho = mdms::symmetric_r2_state(epsilon);
      } else if (use_r2) {
        rho = mdms::r2_state({epsilon, p});
      } else {
        err << "family: choose one of --r2, --r3, --sym, --cusp\n";
        return 2;
      }
      print_matrix(out, rho->matrix());
      print_record(out, correlation_record(*rho, common.settings()));
      describe_measurement(out, *rho, parse_side(measured), povm, common.settings());
      if (!family_out.empty())
        write_output(family_out, out, [&](std::ostream& os) { os << state_to_json(rho->matrix()) << '\n'; });
    } else if (*trace) {
      const mdms::MdmsCurve curve = mdms::trace_mdms_curve(points, common.settings(), common.effective_workers());
      write_output(trace_out, out, [&](std::ostream& os) {
        os << mdms::curve_csv_header() << '\n';
        for (const auto& pt : curve.points()) os << mdms::curve_csv_row(pt) << '\n';
      });
      if (!trace_out.empty()) {
        const auto& j = curve.junction();
        out << "junction: epsilon_middle=" << fixed6(j.epsilon_middle) << " epsilon_rank2=" << fixed6(j.epsilon_rank2)
            << " p=" << fixed6(j.p) << " J=" << fixed6(j.classical_j) << " delta=" << fixed6(j.delta) << '\n';
      }
    } else if (*survey) {
      mcstats::SurveyConfig config;
      config.rank = rank;
      config.n_samples = samples;
      config.master_seed = seed;
      config.workers = common.effective_workers();
      config.optimizer = common.settings();
      const mcstats::SurveyResult result = mcstats::run_survey(config);
      if (!survey_out.empty())
        write_output(survey_out, out,
                     [&](std::ostream& os) { mcstats::write_records_csv(os, result.records, config.echo()); });
      const mcstats::Fraction f = mcstats::fraction_delta_exceeds_j(result.records);
      out << config.echo().substr(2) << '\n'
          << "fraction_delta_gt_J=" << fixed6(f.value) << " +/- " << fixed6(f.std_error) << '\n'
          << "failed_samples=" << result.failed_samples.size() << '\n';
    } else if (*hist) {
      std::ifstream in(records_path);
      if (!in) throw Error(ErrorCode::FileNotFound, records_path);
      std::string echo;
      const auto records = mcstats::read_records_csv(in, &echo);
      const auto h = mcstats::histogram(records, mcstats::parse_quantity(quantity), bins);
      write_output(hist_out, out, [&](std::ostream& os) { mcstats::write_histogram_csv(os, h, echo); });
      if (!grid_out.empty()) {
        const auto g = mcstats::density_grid(records, mcstats::parse_quantity(grid_y));
        write_output(grid_out, out, [&](std::ostream& os) { mcstats::write_grid_csv(os, g, echo); });
      }
      if (!hist_out.empty()) {
        const mcstats::Fraction f = mcstats::fraction_delta_exceeds_j(records);
        out << "records=" << records.size() << '\n'
            << "fraction_delta_gt_J=" << fixed6(f.value) << " +/- " << fixed6(f.std_error) << '\n';
      }
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace discordkit::cli
