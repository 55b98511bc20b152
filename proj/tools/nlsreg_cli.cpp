#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "nlsreg_harness/harness.hpp"

namespace fs = std::filesystem;
using namespace nlsreg::harness;

namespace {

constexpr int kConfigExit = 64;

struct CommonFlags {
  std::string config_file;
  std::vector<std::string> sets;
  std::string problem, solver, lambda, atol, rtol, seed, max_inner, max_outer, mnist_dir;
  std::string out;
  std::string format = "text";
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config_file, "Flat key = value configuration file");
  app->add_option("--set", f.sets, "Override one setting, key=value (repeatable)");
  app->add_option("--problem", f.problem, "group_lasso | svm | fh");
  app->add_option("--lambda", f.lambda, "Regularization weight");
  app->add_option("--atol", f.atol, "Absolute stopping tolerance");
  app->add_option("--rtol", f.rtol, "Relative stopping tolerance");
  app->add_option("--max-inner", f.max_inner, "Inner iteration cap");
  app->add_option("--max-outer", f.max_outer, "Outer iteration cap");
  app->add_option("--mnist-dir", f.mnist_dir, "Directory with the MNIST IDX files (svm only)");
  app->add_option("--out", f.out, "Directory for report, history and timing files");
  app->add_option("--format", f.format, "Table format: text | csv")
      ->check(CLI::IsMember({"text", "csv"}));
}

RunConfig build_config(const CommonFlags& f) {
  RunConfig config;
  if (!f.config_file.empty()) apply_config_file(config, f.config_file);
  for (const std::string& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
  }
  const std::pair<const char*, const std::string*> flags[] = {
      {"problem", &f.problem}, {"solver", &f.solver},       {"lambda", &f.lambda},
      {"atol", &f.atol},       {"rtol", &f.rtol},           {"seed", &f.seed},
      {"max_inner", &f.max_inner}, {"max_outer", &f.max_outer}, {"mnist_dir", &f.mnist_dir}};
  for (const auto& [key, value] : flags)
    if (!value->empty()) apply_setting(config, key, *value);
  config.validate();
  return config;
}

TableFormat table_format(const std::string& s) {
  return s == "csv" ? TableFormat::Csv : TableFormat::Text;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void save(const RunReport& report, const std::string& dir) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  const std::string name = run_name(report.config);
  write_file(fs::path(dir) / (name + ".json"), report_json(report));
  write_file(fs::path(dir) / (name + ".history.dat"), emit_history(report));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f\n", report.stats.elapsed_seconds);
  write_file(fs::path(dir) / (name + ".time"), buf);
}

RunReport load(const fs::path& path) {
  RunReport report = report_from_json(read_file(path));
  fs::path time = path;
  time.replace_extension(".time");
  if (fs::exists(time)) {
    std::istringstream in(read_file(time));
    in >> report.stats.elapsed_seconds;
  }
  return report;
}

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(list);
  for (std::string part; std::getline(ss, part, ',');) {
    const auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dash));
        const auto hi = std::stoull(part.substr(dash + 1));
        if (hi < lo) throw ConfigError("empty seed range '" + part + "'");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw ConfigError("invalid seed list '" + list + "'");
    }
  }
  if (seeds.empty()) throw ConfigError("no seeds given");
  return seeds;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');)
    if (!part.empty()) out.push_back(part);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonsmooth regularized nonlinear least-squares benchmarks"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Solve one configuration");
  add_common(run_cmd, run_flags);
  run_cmd->add_option("--solver", run_flags.solver, "r2 | lm | lmtr");
  run_cmd->add_option("--seed", run_flags.seed, "Instance seed");

  CommonFlags sweep_flags;
  std::string sweep_solvers = "r2,lm,lmtr";
  std::string sweep_seeds = "1";
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep_cmd = app.add_subcommand("sweep", "Solve every (solver, seed) pair in parallel");
  add_common(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--solver", sweep_solvers, "Comma-separated solvers");
  sweep_cmd->add_option("--seed", sweep_seeds, "Seeds, e.g. 1-5 or 1,3,7");
  sweep_cmd->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  std::vector<std::string> table_inputs;
  std::string table_fmt = "text";
  auto* table_cmd = app.add_subcommand("table", "Tabulate saved reports in the given order");
  table_cmd->add_option("reports", table_inputs, "Report JSON files")->required();
  table_cmd->add_option("--format", table_fmt, "text | csv")->check(CLI::IsMember({"text", "csv"}));

  std::string history_input, history_out;
  auto* history_cmd = app.add_subcommand("history", "Plot data from a saved report");
  history_cmd->add_option("report", history_input, "Report JSON file")->required();
  history_cmd->add_option("--out", history_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*run_cmd) {
      const RunConfig config = build_config(run_flags);
      const RunReport report = run(config);
      save(report, run_flags.out);
      std::cout << emit_table({report}, table_format(run_flags.format));
      return exit_code(report.stats.status);
    }
    if (*sweep_cmd) {
      std::vector<RunConfig> configs;
      const RunConfig base = build_config(sweep_flags);
      for (const std::string& solver : split(sweep_solvers)) {
        for (std::uint64_t seed : parse_seeds(sweep_seeds)) {
          RunConfig c = base;
          c.solver = parse_solver(solver);
          c.seed = seed;
          configs.push_back(c);
        }
      }
      std::vector<RunReport> reports(configs.size());
      std::vector<std::string> errors(configs.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
          try {
            reports[i] = run(configs[i]);
            save(reports[i], sweep_flags.out);
          } catch (const std::exception& e) {
            errors[i] = e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < std::min<std::size_t>(jobs, configs.size()); ++t)
        pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty()) throw std::runtime_error(run_name(configs[i]) + ": " + errors[i]);
      std::cout << emit_table(reports, table_format(sweep_flags.format));
      int code = 0;
      for (const auto& r : reports) code = std::max(code, exit_code(r.stats.status));
      return code;
    }
    if (*table_cmd) {
      std::vector<RunReport> reports;
      for (const auto& path : table_inputs) reports.push_back(load(path));
      std::cout << emit_table(reports, table_format(table_fmt));
      return 0;
    }
    if (*history_cmd) {
      const std::string data = emit_history(load(history_input));
      if (history_out.empty())
        std::cout << data;
      else
        write_file(history_out, data);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "nlsreg: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "nlsreg: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
