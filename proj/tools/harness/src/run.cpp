#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nlsreg/problems/fh.hpp"
#include "nlsreg/problems/group_lasso.hpp"
#include "nlsreg/problems/mnist.hpp"
#include "nlsreg/problems/svm.hpp"
#include "nlsreg_harness/harness.hpp"

namespace nlsreg::harness {

namespace {

using nlohmann::json;

SolverStats solve(SolverId id, LeastSquaresProblem& problem, const Regularizer& reg,
                  const Vector& x0, const SolverOptions& opts) {
  switch (id) {
    case SolverId::R2: return r2_minimize(problem, reg, x0, opts);
    case SolverId::LM: return lm_solve(problem, reg, x0, opts);
    case SolverId::LMTR: return lmtr_solve(problem, reg, x0, opts);
  }
  throw ConfigError("unknown solver");
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j) { return j.is_null() ? kInf : j.get<double>(); }

std::string fixed(double v, int decimals) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string solver_label(const RunReport& r) {
  return r.stats.solver.empty() ? std::string(to_string(r.config.solver)) : r.stats.solver;
}

}  // namespace

RunReport run(const RunConfig& config) {
  config.validate();
  SolverOptions opts;
  opts.atol = config.effective_atol();
  opts.rtol = config.rtol;
  opts.max_inner = config.max_inner;
  opts.max_outer = config.effective_max_outer();
  const double lambda = config.effective_lambda();

  RunReport report;
  report.config = config;
  switch (config.problem) {
    case ProblemId::GroupLasso: {
      problems::GroupLassoConfig gc;
      gc.observations = config.observations;
      gc.signal_length = config.signal_length;
      gc.groups = config.groups;
      gc.active_groups = config.active_groups;
      gc.noise = config.noise;
      const auto inst = problems::generate_group_lasso(config.seed, gc);
      auto setup = problems::make_group_lasso(inst, lambda);
      report.stats = solve(config.solver, *setup.problem, setup.regularizer, setup.x0, opts);
      report.error_norm = (report.stats.x - inst.x_true).norm();
      break;
    }
    case ProblemId::Svm: {
      problems::SvmInstance inst;
      if (!config.mnist_dir.empty()) {
        inst = problems::load_mnist_idx(config.mnist_dir);
      } else {
        problems::SyntheticSvmConfig sc;
        sc.train = config.svm_train;
        sc.test = config.svm_test;
        sc.dimension = config.svm_dimension;
        sc.informative = config.svm_informative;
        sc.separation = config.svm_separation;
        inst = problems::generate_svm(config.seed, sc);
      }
      auto setup = problems::make_svm(inst, lambda);
      report.stats = solve(config.solver, *setup.problem, setup.regularizer, setup.x0, opts);
      report.train_accuracy = problems::accuracy(inst.train, report.stats.x);
      report.test_accuracy = problems::accuracy(inst.test, report.stats.x);
      break;
    }
    case ProblemId::FH: {
      problems::FHGrid grid;
      grid.intervals = config.fh_intervals;
      grid.steps_per_sample = config.fh_steps_per_sample;
      const auto inst = problems::generate_fh(grid);
      auto setup = problems::make_fh(inst, lambda);
      report.stats = solve(config.solver, *setup.problem, setup.regularizer, setup.x0, opts);
      report.error_norm = (report.stats.x - inst.x_true).norm();
      break;
    }
  }
  report.zeros = (report.stats.x.array() == 0.0).count();
  return report;
}

int exit_code(SolverStatus status) {
  switch (status) {
    case SolverStatus::FirstOrder: return 0;
    case SolverStatus::MaxIterations: return 2;
    case SolverStatus::Stalled: return 3;
  }
  return 1;
}

std::string report_json(const RunReport& r) {
  const SolverStats& s = r.stats;
  json doc;
  json cfg = json::object();
  std::istringstream lines(canonical_config(r.config));
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find('=');
    cfg[line.substr(0, eq)] = line.substr(eq + 1);
  }
  doc["config"] = std::move(cfg);
  doc["name"] = run_name(r.config);
  doc["solver"] = s.solver;
  doc["status"] = to_string(s.status);
  doc["f"] = number_or_null(s.f);
  doc["h"] = number_or_null(s.h);
  doc["objective"] = number_or_null(s.objective());
  doc["xi"] = number_or_null(s.xi);
  doc["iterations"] = s.iterations;
  doc["successful"] = s.successful;
  doc["residual_evals"] = s.residual_evals;
  doc["gradient_evals"] = s.gradient_evals;
  doc["jprods"] = s.jprods;
  doc["prox_calls"] = s.prox_calls;
  doc["inner_iterations"] = s.inner_iterations;
  doc["error_norm"] = r.error_norm ? json(*r.error_norm) : json(nullptr);
  doc["train_accuracy"] = r.train_accuracy ? json(*r.train_accuracy) : json(nullptr);
  doc["test_accuracy"] = r.test_accuracy ? json(*r.test_accuracy) : json(nullptr);
  doc["zeros"] = r.zeros;
  doc["x"] = std::vector<double>(s.x.data(), s.x.data() + s.x.size());
  json history = json::array();
  for (const HistoryEntry& e : s.history)
    history.push_back({e.evaluation, number_or_null(e.f), number_or_null(e.h), e.accepted});
  doc["history"] = std::move(history);
  return doc.dump(1) + "\n";
}

RunReport report_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  RunReport r;
  try {
    for (const auto& [key, value] : doc.at("config").items())
      apply_setting(r.config, key, value.get<std::string>());
    SolverStats& s = r.stats;
    s.solver = doc.at("solver").get<std::string>();
    const std::string status = doc.at("status").get<std::string>();
    s.status = status == "first_order" ? SolverStatus::FirstOrder
               : status == "stalled"   ? SolverStatus::Stalled
                                       : SolverStatus::MaxIterations;
    s.f = number_or_inf(doc.at("f"));
    s.h = number_or_inf(doc.at("h"));
    s.xi = number_or_inf(doc.at("xi"));
    s.iterations = doc.at("iterations").get<int>();
    s.successful = doc.at("successful").get<int>();
    s.residual_evals = doc.at("residual_evals").get<std::int64_t>();
    s.gradient_evals = doc.at("gradient_evals").get<std::int64_t>();
    s.jprods = doc.at("jprods").get<std::int64_t>();
    s.prox_calls = doc.at("prox_calls").get<std::int64_t>();
    s.inner_iterations = doc.at("inner_iterations").get<std::int64_t>();
    const auto x = doc.at("x").get<std::vector<double>>();
    s.x = Eigen::Map<const Vector>(x.data(), static_cast<Index>(x.size()));
    for (const json& e : doc.at("history"))
      s.history.push_back({e.at(0).get<std::int64_t>(), number_or_inf(e.at(1)),
                           number_or_inf(e.at(2)), e.at(3).get<bool>()});
    if (!doc.at("error_norm").is_null()) r.error_norm = doc["error_norm"].get<double>();
    if (!doc.at("train_accuracy").is_null()) r.train_accuracy = doc["train_accuracy"].get<double>();
    if (!doc.at("test_accuracy").is_null()) r.test_accuracy = doc["test_accuracy"].get<double>();
    r.zeros = doc.at("zeros").get<Index>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string emit_table(const std::vector<RunReport>& reports, TableFormat format) {
  bool accuracy = false;
  for (const auto& r : reports) accuracy = accuracy || r.train_accuracy.has_value();

  std::vector<std::string> header = {"Alg", "f(x)", "h(x)", "(f+h)(x)", "||x-x_T||_2",
                                     "#f",  "#grad", "#prox", "t(s)"};
  if (accuracy) {
    header.push_back("Train(%)");
    header.push_back("Test(%)");
  }
  std::vector<std::vector<std::string>> rows;
  rows.push_back(header);
  for (const auto& r : reports) {
    const SolverStats& s = r.stats;
    std::vector<std::string> row = {
        solver_label(r),
        fixed(s.f, 2),
        fixed(s.h, 2),
        fixed(s.objective(), 2),
        r.error_norm ? fixed(*r.error_norm, 2) : "-",
        std::to_string(s.residual_evals),
        std::to_string(s.gradient_evals),
        std::to_string(s.prox_calls),
        fixed(s.elapsed_seconds, 2)};
    if (accuracy) {
      row.push_back(r.train_accuracy ? fixed(100.0 * *r.train_accuracy, 2) : "-");
      row.push_back(r.test_accuracy ? fixed(100.0 * *r.test_accuracy, 2) : "-");
    }
    rows.push_back(std::move(row));
  }

  std::ostringstream out;
  if (format == TableFormat::Csv) {
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
    return out.str();
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << "  ";
      const std::string pad(width[i] - row[i].size(), ' ');
      out << (i == 0 ? row[i] + pad : pad + row[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::string emit_history(const RunReport& report) {
  std::ostringstream out;
  out << "# evaluation f h objective accepted envelope\n";
  double envelope = kInf;
  for (const HistoryEntry& e : report.stats.history) {
    const double obj = e.f + e.h;
    if (e.accepted) envelope = std::min(envelope, obj);
    out << e.evaluation << ' ' << fixed(e.f, 12) << ' ' << fixed(e.h, 12) << ' ' << fixed(obj, 12)
        << ' ' << (e.accepted ? 1 : 0) << ' ' << fixed(envelope, 12) << '\n';
  }
  return out.str();
}

}  // namespace nlsreg::harness
