#include "gridarb/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>

#include "gridarb/common/csv.hpp"
#include "gridarb/common/errors.hpp"
#include "gridarb/common/time.hpp"
#include "gridarb/study.hpp"

namespace gridarb::cli {
namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> days;
  std::string scenario;
  std::string out = "out";
};

/// A replay stopped on a model fault; carries the time it happened.
struct ReplayFault {
  std::string scenario;
  Timestamp time;
  std::string message;
};

StudyConfig load(const Options& o) {
  StudyConfig c = o.config.empty() ? default_study() : load_study(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.days) {
    if (*o.days < 1) throw DataError("--days must be >= 1");
    c.days = *o.days;
  }
  return c;
}

PriceSeries prices_for(const StudyConfig& c, const study::Layout& layout) {
  const PriceSeries p = study::study_prices(c);
  std::filesystem::create_directories(layout.root);
  write_text_file(layout.prices_csv(), prices_to_csv(p));
  return p;
}

void optimize(const StudyConfig& c, const Scenario& s, const PriceSeries& prices,
              const study::Layout& layout, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const YearSchedule year = study::plan_scenario(c, s, prices, [&](std::size_t w, std::size_t n) {
    if (w % 30 == 0) err << "optimize " << s.id << ": window " << w + 1 << '/' << n << std::endl;
  });
  std::filesystem::create_directories(layout.schedules());
  write_text_file(layout.schedule_csv(s.id), schedule_to_csv(year.schedule));
  write_text_file(layout.windows_csv(s.id), study::windows_to_csv(year.windows));
  write_text_file(layout.meta_csv(s.id),
                  econ::meta_to_csv(study::schedule_meta(s, year, c.linear.nominal_energy_wh)));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  err << "optimize " << s.id << ": revenue " << year.schedule.revenue << " EUR, "
      << year.windows.size() << " windows in " << secs << " s" << std::endl;
}

std::optional<ReplayFault> replay(const StudyConfig& c, const Scenario& s,
                                  const study::Layout& layout, std::ostream& err) {
  const DispatchSchedule schedule = load_schedule(layout.schedule_csv(s.id));
  std::filesystem::create_directories(layout.ledgers());
  ExperimentStore store(layout.ledger_csv(s.id), layout.checkup_csv(s.id), layout.checkpoint(s.id));
  const ExperimentLedger ledger = study::replay_scenario(c, s, schedule, &store);
  if (ledger.fault_time) return ReplayFault{s.id, *ledger.fault_time, ledger.fault_message};
  err << "replay " << s.id << ": " << ledger.checkups.size() << " check-ups, FEC " << ledger.fec_cum
      << ", revenue " << ledger.revenue_cum_eur << " EUR" << std::endl;
  return std::nullopt;
}

int report_fault(const ReplayFault& f, std::ostream& err) {
  err << "model fault in " << f.scenario << " at " << format_timestamp(f.time) << ": " << f.message
      << std::endl;
  return kModelFault;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Battery arbitrage planning and virtual tester"};
  app.require_subcommand(1);
  Options o;
  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "INI configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "price generator seed");
    sub->add_option("--days", o.days, "days to simulate");
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
  };
  auto scenario_option = [&o](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "scenario id")
        ->required()
        ->check(CLI::IsMember({"lm-revenue", "lm-profit", "pbm-profit", "pbm-revenue"}));
  };
  CLI::App* prices = app.add_subcommand("prices", "write the hourly price series");
  CLI::App* opt = app.add_subcommand("optimize", "plan a year for one scenario");
  CLI::App* rep = app.add_subcommand("replay", "run a schedule on the virtual tester");
  CLI::App* report = app.add_subcommand("report", "economic report and figure data from ledgers");
  CLI::App* all = app.add_subcommand("all", "prices, optimize, replay and report for the study");
  for (CLI::App* sub : {prices, opt, rep, report, all}) common(sub);
  scenario_option(opt);
  scenario_option(rep);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage" << std::endl;
    return kUsage;
  }

  try {
    const StudyConfig config = load(o);
    const study::Layout layout{o.out};
    if (prices->parsed()) {
      const PriceSeries p = prices_for(config, layout);
      out << layout.prices_csv().string() << ": " << p.size() << " hours" << std::endl;
    } else if (opt->parsed()) {
      optimize(config, config.scenario(o.scenario), prices_for(config, layout), layout, err);
    } else if (rep->parsed()) {
      if (auto f = replay(config, config.scenario(o.scenario), layout, err)) return report_fault(*f, err);
    } else if (report->parsed()) {
      study::write_reports(config, layout);
    } else if (all->parsed()) {
      const PriceSeries p = prices_for(config, layout);
      for (const std::string& id : config.study) optimize(config, config.scenario(id), p, layout, err);
      for (const std::string& id : config.study) {
        if (auto f = replay(config, config.scenario(id), layout, err)) return report_fault(*f, err);
      }
      study::write_reports(config, layout);
    }
  } catch (const ModelFault& e) {
    err << "model fault: " << e.what() << std::endl;
    return kModelFault;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << std::endl;
    return kDataError;
  }
  return kOk;
}

}  // namespace gridarb::cli
