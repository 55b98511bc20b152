#include "nlsreg/problems/instance_io.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace nlsreg::problems {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "nlsreg-instance";
constexpr int kVersion = 1;

json encode(const Matrix& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix decode_matrix(const json& j) {
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  const json& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols))
    throw std::runtime_error("instance: array size mismatch");
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Index i = 0; i < rows; ++i)
    for (Index jj = 0; jj < cols; ++jj) m(i, jj) = data[k++].get<double>();
  return m;
}

Vector decode_vector(const json& j) {
  const Matrix m = decode_matrix(j);
  if (m.cols() != 1) throw std::runtime_error("instance: expected a column vector");
  return m.col(0);
}

json header(const char* kind, std::uint64_t seed) {
  return {{"format", kFormat}, {"version", kVersion}, {"kind", kind}, {"seed", seed}};
}

json parse(const std::string& text, const char* expected_kind) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("instance: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kFormat)
    throw std::runtime_error("instance: not an nlsreg instance document");
  if (doc.value("version", 0) != kVersion) throw std::runtime_error("instance: unsupported version");
  if (expected_kind && doc.value("kind", "") != expected_kind)
    throw std::runtime_error(std::string("instance: expected kind ") + expected_kind);
  return doc;
}

json encode(const LabeledData& d) {
  return {{"features", encode(d.features)}, {"labels", encode(d.labels)}};
}

LabeledData decode_labeled(const json& j) {
  return {decode_matrix(j.at("features")), decode_vector(j.at("labels"))};
}

}  // namespace

std::string serialize(const GroupLassoInstance& inst) {
  json doc = header("group_lasso", inst.seed);
  const auto& c = inst.config;
  doc["params"] = {{"observations", c.observations}, {"signal_length", c.signal_length},
                   {"groups", c.groups},             {"active_groups", c.active_groups},
                   {"noise", c.noise}};
  doc["groups"] = inst.groups;
  doc["arrays"] = {{"A", encode(inst.A)}, {"b", encode(inst.b)}, {"x_true", encode(inst.x_true)}};
  return doc.dump(1);
}

std::string serialize(const SvmInstance& inst) {
  json doc = header("svm", inst.seed);
  doc["arrays"] = {{"train", encode(inst.train)}, {"test", encode(inst.test)}};
  return doc.dump(1);
}

std::string serialize(const FHInstance& inst) {
  json doc = header("fh", 0);
  const auto& g = inst.grid;
  doc["params"] = {{"intervals", g.intervals}, {"steps_per_sample", g.steps_per_sample},
                   {"t_end", g.t_end},         {"v0", g.v0},
                   {"w0", g.w0}};
  doc["arrays"] = {{"x_true", encode(inst.x_true)},
                   {"v_data", encode(inst.v_data)},
                   {"w_data", encode(inst.w_data)}};
  return doc.dump(1);
}

std::string instance_kind(const std::string& text) {
  return parse(text, nullptr).at("kind").get<std::string>();
}

GroupLassoInstance deserialize_group_lasso(const std::string& text) {
  const json doc = parse(text, "group_lasso");
  GroupLassoInstance inst;
  inst.seed = doc.at("seed").get<std::uint64_t>();
  const json& p = doc.at("params");
  inst.config.observations = p.at("observations").get<Index>();
  inst.config.signal_length = p.at("signal_length").get<Index>();
  inst.config.groups = p.at("groups").get<Index>();
  inst.config.active_groups = p.at("active_groups").get<Index>();
  inst.config.noise = p.at("noise").get<double>();
  inst.groups = doc.at("groups").get<GroupPartition>();
  const json& a = doc.at("arrays");
  inst.A = decode_matrix(a.at("A"));
  inst.b = decode_vector(a.at("b"));
  inst.x_true = decode_vector(a.at("x_true"));
  return inst;
}

SvmInstance deserialize_svm(const std::string& text) {
  const json doc = parse(text, "svm");
  SvmInstance inst;
  inst.seed = doc.at("seed").get<std::uint64_t>();
  inst.train = decode_labeled(doc.at("arrays").at("train"));
  inst.test = decode_labeled(doc.at("arrays").at("test"));
  return inst;
}

FHInstance deserialize_fh(const std::string& text) {
  const json doc = parse(text, "fh");
  FHInstance inst;
  const json& p = doc.at("params");
  inst.grid.intervals = p.at("intervals").get<Index>();
  inst.grid.steps_per_sample = p.at("steps_per_sample").get<int>();
  inst.grid.t_end = p.at("t_end").get<double>();
  inst.grid.v0 = p.at("v0").get<double>();
  inst.grid.w0 = p.at("w0").get<double>();
  const json& a = doc.at("arrays");
  inst.x_true = decode_vector(a.at("x_true"));
  inst.v_data = decode_vector(a.at("v_data"));
  inst.w_data = decode_vector(a.at("w_data"));
  return inst;
}

}  // namespace nlsreg::problems
