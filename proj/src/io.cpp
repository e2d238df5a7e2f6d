#include "rnnlinz/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "rnnlinz/errors.hpp"

namespace rnnlinz::io {

namespace {

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "<file>", "cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string(), "<file>", e.what());
  }
}

double to_double(const Json& j, const std::string& origin, const std::string& field) {
  if (!j.is_number()) throw ConfigError(origin, field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(origin, field, "expected a finite number");
  return v;
}

Eigen::VectorXd to_vector(const Json& j, const std::string& origin, const std::string& field, Eigen::Index n) {
  if (!j.is_array()) throw ConfigError(origin, field, "expected an array of numbers");
  if (n >= 0 && static_cast<Eigen::Index>(j.size()) != n) {
    throw ConfigError(origin, field, fmt::format("expected {} entries, got {}", n, j.size()));
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = to_double(j[i], origin, fmt::format("{}[{}]", field, i));
  }
  return v;
}

Eigen::VectorXd optional_vector(const Json& cfg, const char* key, const std::string& origin, Eigen::Index n,
                                Eigen::VectorXd fallback) {
  if (!cfg.contains(key) || cfg[key].is_null()) return fallback;
  return to_vector(cfg[key], origin, key, n);
}

template <typename T>
T optional_scalar(const Json& cfg, const char* key, const std::string& origin, T fallback) {
  if (!cfg.contains(key)) return fallback;
  const Json& j = cfg[key];
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) throw ConfigError(origin, key, "expected true or false");
    return j.get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
      throw ConfigError(origin, key, "expected a non-negative integer");
    }
    return static_cast<T>(j.get<long long>());
  } else {
    return to_double(j, origin, key);
  }
}

InputSequence parse_inputs(const Json& cfg, const std::string& origin, Eigen::Index n) {
  if (!cfg.contains("inputs")) return {};
  const Json& list = cfg["inputs"];
  if (!list.is_array()) throw ConfigError(origin, "inputs", "expected an array of {k, u} objects");
  std::vector<Eigen::VectorXd> steps;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string field = fmt::format("inputs[{}]", i);
    const Json& item = list[i];
    if (!item.is_object() || !item.contains("k") || !item.contains("u")) {
      throw ConfigError(origin, field, "expected an object with 'k' and 'u'");
    }
    if (!item["k"].is_number_integer() || item["k"].get<long long>() < 0) {
      throw ConfigError(origin, field + ".k", "expected a non-negative integer");
    }
    const auto k = static_cast<std::size_t>(item["k"].get<long long>());
    if (k >= steps.size()) steps.resize(k + 1, Eigen::VectorXd::Zero(n));
    steps[k] = to_vector(item["u"], origin, field + ".u", n);
  }
  return InputSequence(std::move(steps));
}

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

RnnModel model_from_json(const Json& j, const std::string& origin) {
  if (!j.is_object()) throw ConfigError(origin, "<root>", "expected a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long long>() <= 0) {
    throw ConfigError(origin, "n", "expected a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(j["n"].get<long long>());
  if (!j.contains("W") || !j["W"].is_array()) throw ConfigError(origin, "W", "expected an array of rows");
  const Json& rows = j["W"];
  if (static_cast<Eigen::Index>(rows.size()) != n) {
    throw ConfigError(origin, "W", fmt::format("expected {} rows, got {}", n, rows.size()));
  }
  Eigen::MatrixXd W(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = to_vector(rows[static_cast<std::size_t>(i)], origin, fmt::format("W[{}]", i), n);
    W.row(i) = row.transpose();
  }
  if (!j.contains("nonlinearity") || !j["nonlinearity"].is_object() || !j["nonlinearity"].contains("kind") ||
      !j["nonlinearity"]["kind"].is_string()) {
    throw ConfigError(origin, "nonlinearity.kind", "expected \"tanh\", \"logistic\" or \"identity\"");
  }
  const Json& nl = j["nonlinearity"];
  const double gain = nl.contains("gain") ? to_double(nl["gain"], origin, "nonlinearity.gain") : 1.0;
  try {
    return RnnModel(std::move(W), Nonlinearity::from_name(nl["kind"].get<std::string>(), gain));
  } catch (const DomainError& e) {
    throw ConfigError(origin, "nonlinearity", e.what());
  }
}

Json model_to_json(const RnnModel& model) {
  Json nl = {{"kind", model.nonlinearity().name()}};
  if (model.nonlinearity().gain() != 1.0) nl["gain"] = model.nonlinearity().gain();
  return Json{{"n", model.size()}, {"W", to_json(model.weights())}, {"nonlinearity", nl}};
}

RnnModel load_model(const std::filesystem::path& path) { return model_from_json(read_json(path), path.string()); }

void save_model(const RnnModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string(), "<file>", "cannot write file");
  out << model_to_json(model).dump(2) << '\n';
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const std::string origin = path.string();
  const Json cfg = read_json(path);
  if (!cfg.is_object()) throw ConfigError(origin, "<root>", "expected a JSON object");
  if (!cfg.contains("model") || !cfg["model"].is_string()) {
    throw ConfigError(origin, "model", "expected a path to a model file");
  }
  std::filesystem::path model_path = cfg["model"].get<std::string>();
  if (model_path.is_relative()) model_path = path.parent_path() / model_path;

  ExperimentConfig out(path, model_path, load_model(model_path));
  const Eigen::Index n = out.model.size();
  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(n);

  if (cfg.contains("contexts")) {
    const Json& list = cfg["contexts"];
    if (!list.is_array()) throw ConfigError(origin, "contexts", "expected an array of {label, c} objects");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string field = fmt::format("contexts[{}]", i);
      if (!list[i].is_object() || !list[i].contains("c")) throw ConfigError(origin, field, "expected {label, c}");
      std::string label = fmt::format("ctx{}", i);
      if (list[i].contains("label")) {
        if (!list[i]["label"].is_string()) throw ConfigError(origin, field + ".label", "expected a string");
        label = list[i]["label"].get<std::string>();
      }
      out.contexts.push_back(Context{std::move(label), to_vector(list[i]["c"], origin, field + ".c", n)});
    }
  }
  if (out.contexts.empty()) out.contexts.push_back(Context{"zero", zeros});

  out.probe_u = optional_vector(cfg, "probe_u", origin, n, Eigen::VectorXd::Ones(n));
  out.inputs = parse_inputs(cfg, origin, n);
  out.x_init = optional_vector(cfg, "x_init", origin, n, zeros);
  out.dev_init = optional_vector(cfg, "dev_init", origin, n, zeros);
  out.x_guess = optional_vector(cfg, "x_guess", origin, n, zeros);
  out.horizon = optional_scalar<std::size_t>(cfg, "horizon", origin, out.horizon);
  out.tol = optional_scalar<double>(cfg, "tol", origin, out.tol);
  out.fixed_point_tol = optional_scalar<double>(cfg, "fixed_point_tol", origin, out.fixed_point_tol);
  out.max_iter = static_cast<int>(optional_scalar<std::size_t>(cfg, "max_iter", origin, 100));
  out.epsilon = optional_scalar<double>(cfg, "epsilon", origin, out.epsilon);
  out.taylor_horizon = optional_scalar<std::size_t>(cfg, "taylor_horizon", origin, out.taylor_horizon);
  out.fd_step = optional_scalar<double>(cfg, "fd_step", origin, out.fd_step);
  out.warm_start = optional_scalar<bool>(cfg, "warm_start", origin, out.warm_start);

  Eigen::VectorXd dir = optional_vector(cfg, "direction", origin, n, Eigen::VectorXd::Ones(n));
  if (dir.norm() == 0.0) throw ConfigError(origin, "direction", "must be nonzero");
  out.direction = dir / dir.norm();

  if (!(out.tol > 0.0)) throw ConfigError(origin, "tol", "must be positive");
  if (!(out.fixed_point_tol > 0.0)) throw ConfigError(origin, "fixed_point_tol", "must be positive");
  if (out.max_iter < 1) throw ConfigError(origin, "max_iter", "must be at least 1");
  if (!(out.epsilon >= 0.0)) throw ConfigError(origin, "epsilon", "must be non-negative");
  if (!(out.fd_step > 0.0)) throw ConfigError(origin, "fd_step", "must be positive");
  return out;
}

}  // namespace rnnlinz::io
