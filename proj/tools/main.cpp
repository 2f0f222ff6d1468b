#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gtcount/bounds.hpp"
#include "gtcount/harness.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace gtcount;

std::string fmt_real(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Reals are clamped at zero only here, in the display layer; `clamped`
// collects the names of columns that were raised.
std::string fmt_bound(double v, const std::string& name, std::vector<std::string>& clamped) {
  if (v < 0.0) {
    clamped.push_back(name);
    return "0";
  }
  return fmt_real(v);
}

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open " << out_path << " for writing\n";
    return 2;
  }
  file << text;
  return 0;
}

json config_json(const TrialConfig& config) {
  json j;
  j["n"] = config.n;
  j["d"] = config.effective_d();
  if (!config.defectives.empty()) j["defectives"] = config.defectives;
  j["delta"] = config.delta;
  j["trials"] = config.trials;
  j["seed"] = config.master_seed;
  j["algorithm"] = algorithm_name(config.algorithm);
  return j;
}

json aggregate_json(const Aggregate& agg) {
  json j;
  j["failure_rate"] = agg.failure_rate;
  j["mean_queries"] = agg.mean_queries;
  j["min_queries"] = agg.min_queries;
  j["max_queries"] = agg.max_queries;
  j["stddev_queries"] = agg.stddev_queries;
  json b = json::object();
  for (const auto& [name, value] : agg.bound_curve_values) b[name] = value;
  j["bounds"] = b;
  return j;
}

json record_json(const TrialRecord& r) {
  json j;
  j["trial"] = r.trial_index;
  j["d_true"] = r.d_true;
  j["D"] = r.D;
  j["delta_hat"] = r.delta_hat;
  j["correct"] = r.correct;
  j["queries_estimate"] = r.queries_estimate;
  j["queries_find"] = r.queries_find;
  j["queries_total"] = r.queries_total;
  return j;
}

constexpr const char* aggregate_csv_header =
    "n,d,delta,trials,seed,algorithm,failure_rate,mean_queries,min_queries,"
    "max_queries,stddev_queries,ub_theorem5,ub_cheng,lb_theorem1,lb_theorem2,clamped";

void append_aggregate_csv_row(std::ostringstream& out, const Aggregate& agg) {
  const TrialConfig& c = agg.config;
  out << c.n << ',' << c.effective_d() << ',' << fmt_real(c.delta) << ',' << c.trials
      << ',' << c.master_seed << ',' << algorithm_name(c.algorithm) << ','
      << fmt_real(agg.failure_rate) << ',' << fmt_real(agg.mean_queries) << ','
      << agg.min_queries << ',' << agg.max_queries << ',' << fmt_real(agg.stddev_queries);
  std::vector<std::string> clamped;
  for (const char* name : {"ub_theorem5", "ub_cheng", "lb_theorem1", "lb_theorem2"}) {
    out << ',';
    const auto it = agg.bound_curve_values.find(name);
    if (it != agg.bound_curve_values.end()) out << fmt_bound(it->second, name, clamped);
  }
  out << ',';
  if (clamped.empty()) {
    out << '-';
  } else {
    for (std::size_t i = 0; i < clamped.size(); ++i)
      out << (i > 0 ? ";" : "") << clamped[i];
  }
  out << '\n';
}

void append_trial_csv(std::ostringstream& out, const std::vector<TrialRecord>& records) {
  out << "\ntrial,d_true,D,delta_hat,correct,queries_estimate,queries_find,queries_total\n";
  for (const TrialRecord& r : records)
    out << r.trial_index << ',' << r.d_true << ',' << r.D << ',' << r.delta_hat << ','
        << (r.correct ? 1 : 0) << ',' << r.queries_estimate << ',' << r.queries_find
        << ',' << r.queries_total << '\n';
}

int cmd_run(const TrialConfig& config, unsigned threads, bool per_trial,
            const std::string& format, const std::string& out_path) {
  const ExperimentResult result = run_experiment(config, threads);
  std::ostringstream out;
  if (format == "json") {
    json j;
    j["config"] = config_json(config);
    j["aggregate"] = aggregate_json(result.aggregate);
    if (per_trial) {
      json trials = json::array();
      for (const TrialRecord& r : result.records) trials.push_back(record_json(r));
      j["trials"] = trials;
    }
    out << j.dump(2) << '\n';
  } else {
    out << aggregate_csv_header << '\n';
    append_aggregate_csv_row(out, result.aggregate);
    if (per_trial) append_trial_csv(out, result.records);
  }
  return write_output(out.str(), out_path);
}

int cmd_sweep(const SweepGrid& grid, unsigned threads, const std::string& format,
              const std::string& out_path) {
  const std::vector<Aggregate> rows = sweep(grid, threads);
  std::ostringstream out;
  if (format == "json") {
    json j;
    json jrows = json::array();
    for (const Aggregate& agg : rows) {
      json row;
      row["config"] = config_json(agg.config);
      row["aggregate"] = aggregate_json(agg);
      jrows.push_back(row);
    }
    j["rows"] = jrows;
    out << j.dump(2) << '\n';
  } else {
    out << aggregate_csv_header << '\n';
    for (const Aggregate& agg : rows) append_aggregate_csv_row(out, agg);
  }
  return write_output(out.str(), out_path);
}

struct BoundRow {
  std::string bound;
  std::uint64_t n, d;
  double delta;
  std::optional<double> value;
  bool valid;
  std::string requirement;
  std::string note;
};

std::vector<BoundRow> bound_rows(std::uint64_t n, std::vector<std::uint64_t> ds,
                                 std::vector<double> deltas) {
  std::sort(ds.begin(), ds.end());
  std::sort(deltas.begin(), deltas.end());
  std::vector<BoundRow> rows;
  for (std::uint64_t d : ds) {
    if (d < 1 || d > n) throw std::invalid_argument("each d must satisfy 1 <= d <= n");
    for (double delta : deltas) {
      const double small_delta_edge = 1.0 / (2.0 * static_cast<double>(n - d + 1));
      rows.push_back({"ub_theorem5", n, d, delta, bounds::ub_theorem5(d, delta), true,
                      "-", "-"});
      rows.push_back(
          {"ub_cheng", n, d, delta, bounds::ub_cheng(d, delta), true, "-", "-"});
      rows.push_back({"lb_theorem1", n, d, delta, bounds::lb_theorem1(d, delta),
                      delta >= small_delta_edge, "delta >= 1/(2(n-d+1))", "-"});
      rows.push_back({"lb_theorem1_small_delta", n, d, delta,
                      bounds::lb_theorem1_small_delta(n, d), delta < small_delta_edge,
                      "delta < 1/(2(n-d+1))", "-"});
      rows.push_back(
          {"lb_theorem2", n, d, delta, bounds::lb_theorem2(n, d, delta), true, "-", "-"});
      BoundRow appendix{"lb_appendix", n, d, delta, std::nullopt, false,
                        "d >= 2 and d*delta < 1/2", "-"};
      if (d < 2) {
        appendix.note = "requires d >= 2";
      } else {
        try {
          appendix.value = bounds::lb_appendix(d, delta);
          appendix.valid = true;
        } catch (const bounds::OutsideRegime& e) {
          appendix.note = e.what();
        }
      }
      rows.push_back(appendix);
    }
  }
  return rows;
}

int cmd_bounds(std::uint64_t n, const std::vector<std::uint64_t>& ds,
               const std::vector<double>& deltas, const std::string& format,
               const std::string& out_path) {
  const std::vector<BoundRow> rows = bound_rows(n, ds, deltas);
  std::ostringstream out;
  if (format == "json") {
    json j;
    json jrows = json::array();
    for (const BoundRow& r : rows) {
      json row;
      row["bound"] = r.bound;
      row["n"] = r.n;
      row["d"] = r.d;
      row["delta"] = r.delta;
      if (r.value)
        row["value"] = *r.value;  // raw, unclamped
      else
        row["value"] = nullptr;
      row["valid"] = r.valid;
      row["requirement"] = r.requirement;
      row["note"] = r.note;
      jrows.push_back(row);
    }
    j["rows"] = jrows;
    out << j.dump(2) << '\n';
  } else {
    out << "bound,n,d,delta,value,valid,requirement,note\n";
    for (const BoundRow& r : rows) {
      std::vector<std::string> clamped;
      std::string value;
      std::string note = r.note;
      if (r.value) {
        value = fmt_bound(*r.value, r.bound, clamped);
        if (!clamped.empty()) note = "raw=" + fmt_real(*r.value);
      }
      out << r.bound << ',' << r.n << ',' << r.d << ',' << fmt_real(r.delta) << ','
          << value << ',' << (r.valid ? "yes" : "no") << ',' << r.requirement << ','
          << note << '\n';
    }
  }
  return write_output(out.str(), out_path);
}

int cmd_verify(std::uint32_t n_small) {
  const VerifyReport report = exhaustive_verify(n_small);
  std::cout << "exhaustive verification: n=" << report.n_small << ", "
            << report.sets_checked << " defective sets x " << report.variants
            << " variants = " << report.sets_checked * report.variants
            << " oracle sets x variants\n"
            << "runs: " << report.runs << " (bounded hints in {1,2,4} where hint <= n)\n"
            << "max queries: bounded " << report.max_queries_bounded << ", unbounded "
            << report.max_queries_unbounded << '\n';
  if (!report.passed) {
    std::cout << "FAILED: " << report.failure << '\n';
    return 1;
  }
  std::cout << "all checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive group-testing defective counter"};
  app.require_subcommand(1);

  std::string format = "csv";
  std::string out_path;
  unsigned threads = 1;

  TrialConfig run_config;
  run_config.n = 1000;
  run_config.d = 1;
  bool per_trial = false;
  std::string algorithm_flag = "find_d";

  auto* run = app.add_subcommand("run", "Run one Monte Carlo experiment");
  run->add_option("--n", run_config.n, "universe size")->required();
  auto* d_opt = run->add_option("--d", run_config.d, "defectives drawn per trial");
  run->add_option("--defectives", run_config.defectives,
                  "explicit defective ids (fixed across trials)")
      ->delimiter(',')
      ->excludes(d_opt);
  run->add_option("--delta", run_config.delta, "failure budget in (0,1)")->required();
  run->add_option("--trials", run_config.trials, "trial count")->required();
  run->add_option("--seed", run_config.master_seed, "master seed");
  run->add_option("--algorithm", algorithm_flag,
                  "find_d | estimate_only | find_defectives_bounded | "
                  "find_defectives_unbounded");
  run->add_flag("--per-trial", per_trial, "emit one row per trial");
  run->add_option("--threads", threads, "worker threads (results are identical)");
  run->add_option("--format", format, "csv | json");
  run->add_option("--out", out_path, "write output to a file instead of stdout");

  SweepGrid grid;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a grid of experiments");
  sweep_cmd->add_option("--n-list", grid.n_values, "universe sizes")
      ->delimiter(',')
      ->required();
  sweep_cmd->add_option("--d-list", grid.d_values, "defective counts")
      ->delimiter(',')
      ->required();
  sweep_cmd->add_option("--delta-list", grid.delta_values, "failure budgets")
      ->delimiter(',')
      ->required();
  sweep_cmd->add_option("--trials", grid.trials, "trials per grid point")->required();
  sweep_cmd->add_option("--seed", grid.master_seed, "master seed");
  sweep_cmd->add_option("--algorithm", algorithm_flag, "algorithm to sweep");
  sweep_cmd->add_option("--threads", threads, "worker threads (results are identical)");
  sweep_cmd->add_option("--format", format, "csv | json");
  sweep_cmd->add_option("--out", out_path, "write output to a file instead of stdout");

  std::uint64_t bounds_n = 0;
  std::vector<std::uint64_t> bounds_d;
  std::vector<double> bounds_delta;
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate the bound formulas");
  bounds_cmd->add_option("--n", bounds_n, "universe size")->required();
  bounds_cmd->add_option("--d-list", bounds_d, "defective counts")
      ->delimiter(',')
      ->required();
  bounds_cmd->add_option("--delta-list", bounds_delta, "failure budgets")
      ->delimiter(',')
      ->required();
  bounds_cmd->add_option("--format", format, "csv | json");
  bounds_cmd->add_option("--out", out_path, "write output to a file instead of stdout");

  std::uint32_t n_small = 10;
  auto* verify_cmd =
      app.add_subcommand("verify", "Exhaustively verify the splitters at small n");
  verify_cmd->add_option("--n-small", n_small, "universe size, at most 12");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (format != "csv" && format != "json") {
      std::cerr << "error: --format must be csv or json\n";
      return 2;
    }
    if (app.got_subcommand(run)) {
      const auto algorithm = parse_algorithm(algorithm_flag);
      if (!algorithm) {
        std::cerr << "error: unknown algorithm '" << algorithm_flag << "'\n";
        return 2;
      }
      run_config.algorithm = *algorithm;
      validate(run_config);
      return cmd_run(run_config, threads, per_trial, format, out_path);
    }
    if (app.got_subcommand(sweep_cmd)) {
      const auto algorithm = parse_algorithm(algorithm_flag);
      if (!algorithm) {
        std::cerr << "error: unknown algorithm '" << algorithm_flag << "'\n";
        return 2;
      }
      grid.algorithm = *algorithm;
      return cmd_sweep(grid, threads, format, out_path);
    }
    if (app.got_subcommand(bounds_cmd)) {
      if (bounds_n < 1) {
        std::cerr << "error: --n must be >= 1\n";
        return 2;
      }
      return cmd_bounds(bounds_n, bounds_d, bounds_delta, format, out_path);
    }
    return cmd_verify(n_small);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
