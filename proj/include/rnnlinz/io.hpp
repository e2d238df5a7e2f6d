#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "rnnlinz/context.hpp"
#include "rnnlinz/rnn_core.hpp"

namespace rnnlinz::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

/// Parameters shared by all subcommands. Vectors left empty in the file are
/// filled with zeros (or another documented default) by load_config().
struct ExperimentConfig {
  ExperimentConfig(std::filesystem::path source_path, std::filesystem::path model_file, RnnModel loaded)
      : source(std::move(source_path)), model_path(std::move(model_file)), model(std::move(loaded)) {}

  std::filesystem::path source;      // the config file itself
  std::filesystem::path model_path;  // resolved against the config's directory
  RnnModel model;
  std::vector<Context> contexts;  // first one is "the" context for single-context commands
  Eigen::VectorXd probe_u;
  InputSequence inputs;
  Eigen::VectorXd x_init;
  Eigen::VectorXd dev_init;
  Eigen::VectorXd x_guess;
  std::size_t horizon = 100;
  double tol = 1e-12;             // equivalence tolerance (relative form)
  double fixed_point_tol = 1e-12;
  int max_iter = 100;
  double epsilon = 1e-2;          // Taylor-order probe
  Eigen::VectorXd direction;      // unit 2-norm
  std::size_t taylor_horizon = 5;
  double fd_step = 1e-5;
  bool warm_start = true;

  const Context& primary_context() const { return contexts.front(); }
};

RnnModel model_from_json(const Json& j, const std::string& origin = "<model>");
Json model_to_json(const RnnModel& model);

RnnModel load_model(const std::filesystem::path& path);
void save_model(const RnnModel& model, const std::filesystem::path& path);

ExperimentConfig load_config(const std::filesystem::path& path);

// Text helpers shared by every report.
std::string format_double(double v);  // 17 significant digits
Json to_json(const Eigen::VectorXd& v);
Json to_json(const Eigen::MatrixXd& m);  // row-major nested arrays
Json to_json(const Complex& z);          // [re, im]

}  // namespace rnnlinz::io
