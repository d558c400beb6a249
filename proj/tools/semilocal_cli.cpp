#include <iostream>

#include "CLI11.hpp"
#include "semilocal/cli_reporting.hpp"

using namespace semilocal;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> levels;
  std::optional<int> samples;
  std::string out_dir;

  void apply(ScheduleSpec& s) const {
    if (seed) s.seed = *seed;
    if (levels) s.levels = *levels;
    if (samples) s.samples = *samples;
  }
};

void print_summary(const RunReport& r) {
  std::cout << "scenario " << r.scenario.id << " (" << r.scenario.family.kind << "), seed " << r.seed << "\n";
  auto show = [](const ModulusEstimate& e) {
    std::ostringstream s;
    s << e.value.value() << " [" << to_string(e.classification) << "]";
    return s.str();
  };
  for (const auto& a : r.results) {
    std::cout << "  " << a.request.kind;
    if (a.estimate) std::cout << ": " << show(*a.estimate);
    if (a.table) std::cout << ": " << show(a.table->sup);
    if (a.qp) std::cout << ": " << a.qp->value << " over " << a.qp->certificates.size() << " active sets";
    if (a.sublevel) std::cout << ": " << a.sublevel->value.value();
    if (a.hypotheses) {
      std::cout << ": applicable=" << (a.hypotheses->applicable ? "yes" : "no");
      for (const auto& v : a.hypotheses->violated) std::cout << " !" << v;
    }
    if (a.equality) {
      std::cout << ": lipusc " << show(a.equality->lipusc) << ", sup clm " << show(a.equality->sup_calmness.sup)
                << ", " << to_string(a.equality->verdict);
    }
    std::cout << "\n";
  }
  std::cout << "  wall time " << r.wall_time_s << " s\n";
}

int run(const std::string& path, const Overrides& o) {
  Scenario s = load_scenario(path);
  o.apply(s.schedule);
  validate(s);
  const RunReport r = run_scenario(s);
  print_summary(r);
  const std::string dir = !o.out_dir.empty() ? o.out_dir : (!s.out_dir.empty() ? s.out_dir : ".");
  for (const auto& p : write_outputs(r, dir)) std::cout << "  wrote " << p << "\n";
  return 0;
}

int reproduce(const std::string& id, const Overrides& o) {
  std::vector<std::string> ids;
  if (id == "all") {
    ids = fixture_ids();
  } else {
    ids = {id};
  }
  for (const auto& one : ids) {
    std::optional<ScheduleSpec> sch;
    if (o.seed || o.levels || o.samples) {
      sch = ScheduleSpec{};
      o.apply(*sch);
    }
    const ReproduceResult res = reproduce_example(one, sch);
    std::cout << format_table(one, res.rows) << "\n";
    if (!o.out_dir.empty() && !res.report.results.empty()) {
      for (const auto& p : write_outputs(res.report, o.out_dir)) std::cout << "wrote " << p << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calmness and Lipschitz upper semicontinuity moduli of parametric set-valued mappings"};
  app.set_version_flag("--version", std::string(SEMILOCAL_VERSION));
  app.require_subcommand(1);

  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "override the schedule seed");
    sub->add_option("--schedule-levels", o.levels, "override the number of radius levels")
        ->check(CLI::PositiveNumber);
    sub->add_option("--samples", o.samples, "override the random samples per radius")->check(CLI::PositiveNumber);
    sub->add_option("--out-dir", o.out_dir, "directory for the report and CSV traces");
  };

  std::string scenario_path, example_id;
  CLI::App* run_cmd = app.add_subcommand("run", "run a scenario file");
  run_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  add_common(run_cmd);

  CLI::App* rep_cmd = app.add_subcommand("reproduce", "run a built-in example and compare with its known values");
  std::vector<std::string> choices = fixture_ids();
  choices.push_back("all");
  rep_cmd->add_option("example_id", example_id, "example id or 'all'")
      ->required()
      ->check(CLI::IsMember(choices));
  add_common(rep_cmd);

  CLI::App* list_cmd = app.add_subcommand("list-families", "list mapping family kinds and built-in examples");
  CLI::App* schema_cmd = app.add_subcommand("schema", "print the scenario JSON schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return run(scenario_path, o);
    if (*rep_cmd) return reproduce(example_id, o);
    if (*list_cmd) {
      std::cout << "families:\n";
      for (FamilyKind k : kAllFamilyKinds) std::cout << "  " << to_string(k) << "\n";
      std::cout << "examples:\n";
      for (const auto& id : fixture_ids()) std::cout << "  " << id << ": " << make_fixture(id).description << "\n";
      return 0;
    }
    if (*schema_cmd) {
      std::cout << scenario_schema().dump(2) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
