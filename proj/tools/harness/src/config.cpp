#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nlsreg_harness/harness.hpp"

namespace nlsreg::harness {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string normalize_key(std::string key) {
  for (char& c : key)
    if (c == '-') c = '_';
  return key;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError("invalid value '" + text + "' for " + key);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

template <typename T>
Setter number(T RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.*field = parse_number<T>(k, v);
  };
}

template <typename T>
Setter optional_number(std::optional<T> RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    if (trim(v) == "default")
      (c.*field).reset();
    else
      c.*field = parse_number<T>(k, v);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"problem", [](RunConfig& c, const std::string&, const std::string& v) {
         c.problem = parse_problem(trim(v));
       }},
      {"solver", [](RunConfig& c, const std::string&, const std::string& v) {
         c.solver = parse_solver(trim(v));
       }},
      {"lambda", optional_number(&RunConfig::lambda)},
      {"atol", optional_number(&RunConfig::atol)},
      {"rtol", number(&RunConfig::rtol)},
      {"seed", number(&RunConfig::seed)},
      {"max_inner", number(&RunConfig::max_inner)},
      {"max_outer", optional_number(&RunConfig::max_outer)},
      {"observations", number(&RunConfig::observations)},
      {"signal_length", number(&RunConfig::signal_length)},
      {"groups", number(&RunConfig::groups)},
      {"active_groups", number(&RunConfig::active_groups)},
      {"noise", number(&RunConfig::noise)},
      {"svm_train", number(&RunConfig::svm_train)},
      {"svm_test", number(&RunConfig::svm_test)},
      {"svm_dimension", number(&RunConfig::svm_dimension)},
      {"svm_informative", number(&RunConfig::svm_informative)},
      {"svm_separation", number(&RunConfig::svm_separation)},
      {"fh_intervals", number(&RunConfig::fh_intervals)},
      {"fh_steps_per_sample", number(&RunConfig::fh_steps_per_sample)},
      {"mnist_dir", [](RunConfig& c, const std::string&, const std::string& v) {
         c.mnist_dir = trim(v);
       }},
  };
  return table;
}

}  // namespace

const char* to_string(ProblemId id) {
  switch (id) {
    case ProblemId::GroupLasso: return "group_lasso";
    case ProblemId::Svm: return "svm";
    case ProblemId::FH: return "fh";
  }
  return "unknown";
}

const char* to_string(SolverId id) {
  switch (id) {
    case SolverId::R2: return "r2";
    case SolverId::LM: return "lm";
    case SolverId::LMTR: return "lmtr";
  }
  return "unknown";
}

ProblemId parse_problem(const std::string& name) {
  if (name == "group_lasso") return ProblemId::GroupLasso;
  if (name == "svm") return ProblemId::Svm;
  if (name == "fh") return ProblemId::FH;
  throw ConfigError("unknown problem '" + name + "' (expected group_lasso, svm or fh)");
}

SolverId parse_solver(const std::string& name) {
  if (name == "r2") return SolverId::R2;
  if (name == "lm") return SolverId::LM;
  if (name == "lmtr") return SolverId::LMTR;
  throw ConfigError("unknown solver '" + name + "' (expected r2, lm or lmtr)");
}

double RunConfig::effective_lambda() const {
  if (lambda) return *lambda;
  switch (problem) {
    case ProblemId::GroupLasso: return 1e-2;
    case ProblemId::Svm: return 1e-1;
    case ProblemId::FH: return 10.0;
  }
  return 0.0;
}

double RunConfig::effective_atol() const {
  if (atol) return *atol;
  return problem == ProblemId::FH ? 1e-2 : 1e-4;
}

int RunConfig::effective_max_outer() const {
  if (max_outer) return *max_outer;
  return solver == SolverId::R2 ? 10000 : 500;
}

void RunConfig::validate() const {
  if (!(effective_lambda() >= 0.0)) throw ConfigError("lambda must be nonnegative");
  if (!(effective_atol() > 0.0)) throw ConfigError("atol must be positive");
  if (!(rtol > 0.0)) throw ConfigError("rtol must be positive");
  if (max_inner < 1) throw ConfigError("max_inner must be at least 1");
  if (effective_max_outer() < 1) throw ConfigError("max_outer must be at least 1");
  if (observations < 1 || signal_length < observations)
    throw ConfigError("need 1 <= observations <= signal_length");
  if (groups < 1 || signal_length % groups != 0)
    throw ConfigError("signal_length must be divisible by groups");
  if (active_groups < 0 || active_groups > groups) throw ConfigError("active_groups out of range");
  if (!(noise >= 0.0)) throw ConfigError("noise must be nonnegative");
  if (svm_train < 1 || svm_test < 1 || svm_dimension < 1 || svm_informative < 1 ||
      svm_informative > svm_dimension)
    throw ConfigError("invalid synthetic SVM dimensions");
  if (fh_intervals < 1 || fh_steps_per_sample < 1) throw ConfigError("invalid FH grid");
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(normalize_key(trim(key)));
  if (it == table.end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second(config, it->first, value);
}

void apply_config_text(RunConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_text(config, text.str());
}

std::string canonical_config(const RunConfig& c) {
  std::ostringstream out;
  auto opt = [](const auto& v) {
    if (!v) return std::string("default");
    if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, double>)
      return format_double(*v);
    else
      return std::to_string(*v);
  };
  out << "problem=" << to_string(c.problem) << '\n'
      << "solver=" << to_string(c.solver) << '\n'
      << "lambda=" << opt(c.lambda) << '\n'
      << "atol=" << opt(c.atol) << '\n'
      << "rtol=" << format_double(c.rtol) << '\n'
      << "seed=" << c.seed << '\n'
      << "max_inner=" << c.max_inner << '\n'
      << "max_outer=" << opt(c.max_outer) << '\n'
      << "observations=" << c.observations << '\n'
      << "signal_length=" << c.signal_length << '\n'
      << "groups=" << c.groups << '\n'
      << "active_groups=" << c.active_groups << '\n'
      << "noise=" << format_double(c.noise) << '\n'
      << "svm_train=" << c.svm_train << '\n'
      << "svm_test=" << c.svm_test << '\n'
      << "svm_dimension=" << c.svm_dimension << '\n'
      << "svm_informative=" << c.svm_informative << '\n'
      << "svm_separation=" << format_double(c.svm_separation) << '\n'
      << "fh_intervals=" << c.fh_intervals << '\n'
      << "fh_steps_per_sample=" << c.fh_steps_per_sample << '\n'
      << "mnist_dir=" << c.mnist_dir << '\n';
  return out.str();
}

std::uint64_t config_hash(const RunConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical_config(config)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string run_name(const RunConfig& config) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(config)));
  return std::string(to_string(config.problem)) + "-" + to_string(config.solver) + "-" +
         std::to_string(config.seed) + "-" + std::string(hash, 8);
}

}  // namespace nlsreg::harness
