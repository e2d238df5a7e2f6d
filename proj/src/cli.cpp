#include "rnnlinz/cli.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "rnnlinz/errors.hpp"
#include "rnnlinz/fixed_point.hpp"
#include "rnnlinz/linearize.hpp"
#include "rnnlinz/spectral.hpp"

namespace rnnlinz::cli {

namespace {

using io::format_double;
using io::Json;
using io::to_json;

Json report_header(Command cmd, const io::ExperimentConfig& cfg) {
  return Json{{"schema_version", io::kSchemaVersion},
              {"command", std::string(command_name(cmd))},
              {"n", cfg.model.size()},
              {"nonlinearity", cfg.model.nonlinearity().name()}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json fixed_point_json(const FixedPoint& fp) {
  return Json{{"x0", to_json(fp.x0())},
              {"r0", to_json(fp.r0())},
              {"c", to_json(fp.context())},
              {"residual", fp.residual()},
              {"iterations", fp.iterations()}};
}

FixedPoint solve_primary(const io::ExperimentConfig& cfg) {
  return find_fixed_point(cfg.model, cfg.primary_context().c, cfg.x_guess, cfg.fixed_point_tol, cfg.max_iter);
}

void csv_row(std::ostringstream& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& cell : cells) {
    if (!first) out << ',';
    out << cell;
    first = false;
  }
  out << '\n';
}

// Labels are user text; quote them when they would break the row.
std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

CommandResult cmd_simulate(const io::ExperimentConfig& cfg, Format format) {
  const auto sim = simulate(cfg.model, cfg.x_init, cfg.inputs, cfg.primary_context().c, cfg.horizon);
  const auto n = cfg.model.size();
  CommandResult res;
  if (format == Format::Csv) {
    std::ostringstream out;
    out << 'k';
    for (Eigen::Index i = 1; i <= n; ++i) out << ",x_" << i;
    for (Eigen::Index i = 1; i <= n; ++i) out << ",r_" << i;
    out << '\n';
    for (std::size_t k = 0; k < sim.activation.states.size(); ++k) {
      out << k;
      for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(sim.activation.states[k][i]);
      for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(sim.activity.states[k][i]);
      out << '\n';
    }
    res.output = out.str();
  } else {
    Json j = report_header(Command::Simulate, cfg);
    j["context"] = cfg.primary_context().label;
    j["horizon"] = cfg.horizon;
    Json xs = Json::array(), rs = Json::array();
    for (const auto& s : sim.activation.states) xs.push_back(to_json(s));
    for (const auto& s : sim.activity.states) rs.push_back(to_json(s));
    j["activation"] = std::move(xs);
    j["activity"] = std::move(rs);
    res.output = dump(j);
  }
  return res;
}

CommandResult cmd_linearize(const io::ExperimentConfig& cfg, Format format) {
  const FixedPoint fp = solve_primary(cfg);
  const GainMatrix D = gain_matrix(cfg.model, fp);
  const LinearizedSystem act = linearize_activation(cfg.model, fp);
  const LinearizedSystem rate = linearize_activity(cfg.model, fp);
  CommandResult res;
  if (format == Format::Csv) {
    std::ostringstream out;
    csv_row(out, {"matrix", "i", "j", "value"});
    const auto emit = [&](const char* name, const Eigen::MatrixXd& M) {
      for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
          csv_row(out, {name, std::to_string(i), std::to_string(j), format_double(M(i, j))});
        }
      }
    };
    emit("D", D.dense());
    emit("WD", act.A);
    emit("DW", rate.A);
    emit("B_activation", act.B);
    emit("B_activity", rate.B);
    csv_row(out, {"fixed_point_residual", "", "", format_double(fp.residual())});
    res.output = out.str();
  } else {
    Json j = report_header(Command::Linearize, cfg);
    j["context"] = cfg.primary_context().label;
    j["fixed_point"] = fixed_point_json(fp);
    j["D"] = to_json(D.diag);
    j["WD"] = to_json(act.A);
    j["DW"] = to_json(rate.A);
    j["B_activation"] = to_json(act.B);
    j["B_activity"] = to_json(rate.B);
    res.output = dump(j);
  }
  return res;
}

CommandResult cmd_eigen(const io::ExperimentConfig& cfg, Format format) {
  const FixedPoint fp = solve_primary(cfg);
  const CorrespondenceAnalysis an = analyze_correspondence(cfg.model, fp);
  CommandResult res;
  res.exit_code = an.passed() ? kExitOk : kExitPropertyFailed;
  if (!an.passed()) res.message = "eigenvector correspondence check failed";

  if (format == Format::Csv) {
    std::ostringstream out;
    csv_row(out, {"index_x", "index_r", "re_x", "im_x", "re_r", "im_r", "gap", "skipped", "left_residual",
                  "right_residual", "dot_r_re", "dot_r_im", "dot_mapped_re", "dot_mapped_im", "dot_difference"});
    for (std::size_t p = 0; p < an.pairing.pairs.size(); ++p) {
      const auto [ix, ir] = an.pairing.pairs[p];
      const auto& lx = an.pairing.eig_x[ix];
      const auto& lr = an.pairing.eig_r[ir];
      const auto& m = an.mapping.rows[ir];
      const auto& d = an.dots.rows[p];
      csv_row(out, {std::to_string(ix), std::to_string(ir), format_double(lx.real()), format_double(lx.imag()),
                    format_double(lr.real()), format_double(lr.imag()), format_double(an.pairing.gaps[p]),
                    m.skipped ? "1" : "0", format_double(m.left_residual), format_double(m.right_residual),
                    format_double(d.dot_r.real()), format_double(d.dot_r.imag()),
                    format_double(d.dot_mapped.real()), format_double(d.dot_mapped.imag()),
                    format_double(d.difference)});
    }
    res.output = out.str();
    return res;
  }

  Json j = report_header(Command::Eigen, cfg);
  j["context"] = cfg.primary_context().label;
  j["fixed_point"] = fixed_point_json(fp);
  j["D"] = to_json(an.D.diag);
  j["wd_norm"] = an.mapping.wd_norm;

  Json pairs = Json::array();
  for (std::size_t p = 0; p < an.pairing.pairs.size(); ++p) {
    const auto [ix, ir] = an.pairing.pairs[p];
    pairs.push_back(Json{{"index_x", ix},
                         {"index_r", ir},
                         {"lambda_x", to_json(an.pairing.eig_x[ix])},
                         {"lambda_r", to_json(an.pairing.eig_r[ir])},
                         {"gap", an.pairing.gaps[p]}});
  }
  j["spectrum"] = Json{{"pairs", std::move(pairs)},
                       {"max_gap", an.pairing.max_eigenvalue_gap},
                       {"tol", an.pairing.tol},
                       {"passed", an.pairing.passed}};

  Json rows = Json::array();
  for (const auto& m : an.mapping.rows) {
    rows.push_back(Json{{"index_r", m.index},
                        {"lambda", to_json(m.lambda)},
                        {"neighbor_gap", std::isfinite(m.neighbor_gap) ? Json(m.neighbor_gap) : Json(nullptr)},
                        {"skipped", m.skipped},
                        {"left_residual", m.left_residual},
                        {"right_residual", m.right_residual}});
  }
  j["eigvec_mapping"] = Json{{"rows", std::move(rows)},
                             {"threshold", an.mapping.threshold},
                             {"max_left_residual", an.mapping.max_left_residual},
                             {"max_right_residual", an.mapping.max_right_residual},
                             {"checked", an.mapping.checked},
                             {"passed", an.mapping.passed}};

  Json dots = Json::array();
  for (const auto& d : an.dots.rows) {
    dots.push_back(Json{{"index_x", d.index_x},
                        {"index_r", d.index_r},
                        {"skipped", d.skipped},
                        {"dot_r", to_json(d.dot_r)},
                        {"dot_mapped", to_json(d.dot_mapped)},
                        {"difference", d.difference}});
  }
  j["dot_preservation"] = Json{{"rows", std::move(dots)},
                               {"max_difference", an.dots.max_difference},
                               {"checked", an.dots.checked},
                               {"passed", an.dots.passed}};
  j["passed"] = an.passed();
  res.output = dump(j);
  return res;
}

CommandResult cmd_equiv(const io::ExperimentConfig& cfg, Format format) {
  const FixedPoint fp = solve_primary(cfg);
  const EquivalenceReport eq = check_equivalence(cfg.model, fp, cfg.dev_init, cfg.inputs, cfg.horizon, cfg.tol);
  const double err_full = linearization_error(cfg.model, fp, cfg.direction, cfg.epsilon, cfg.taylor_horizon);
  const double err_half = linearization_error(cfg.model, fp, cfg.direction, cfg.epsilon / 2.0, cfg.taylor_horizon);
  const double ratio = err_half > 0.0 ? err_full / err_half : std::nan("");

  CommandResult res;
  res.exit_code = eq.passed ? kExitOk : kExitPropertyFailed;
  if (!eq.passed) res.message = "equivalence gap exceeds tolerance";
  if (format == Format::Csv) {
    std::ostringstream out;
    csv_row(out, {"k", "gap"});
    for (std::size_t k = 0; k < eq.step_gap.size(); ++k) {
      csv_row(out, {std::to_string(k), format_double(eq.step_gap[k])});
    }
    res.output = out.str();
    return res;
  }
  Json j = report_header(Command::Equiv, cfg);
  j["context"] = cfg.primary_context().label;
  j["fixed_point"] = fixed_point_json(fp);
  j["equivalence"] = Json{{"horizon", cfg.horizon},
                          {"max_gap", eq.max_gap},
                          {"max_activity_norm", eq.max_activity_norm},
                          {"tol", eq.tol},
                          {"threshold", eq.threshold},
                          {"passed", eq.passed},
                          {"step_gap", eq.step_gap}};
  j["taylor"] = Json{{"epsilon", cfg.epsilon},
                     {"horizon", cfg.taylor_horizon},
                     {"direction", to_json(cfg.direction)},
                     {"error_epsilon", err_full},
                     {"error_half_epsilon", err_half},
                     {"ratio", std::isfinite(ratio) ? Json(ratio) : Json(nullptr)}};
  res.output = dump(j);
  return res;
}

CommandResult cmd_context(const io::ExperimentConfig& cfg, Format format) {
  SweepOptions opts;
  opts.tol = cfg.fixed_point_tol;
  opts.max_iter = cfg.max_iter;
  opts.warm_start = cfg.warm_start;
  const ContextSweep sweep = context_sweep(cfg.model, cfg.contexts, cfg.probe_u, opts);

  CommandResult res;
  bool dichotomy = true;
  for (const auto& c : sweep.comparisons) dichotomy = dichotomy && c.activation_input_identical;
  if (sweep.failures > 0) {
    res.exit_code = kExitNumerical;
    res.message = fmt::format("{} context(s) failed to instantiate", sweep.failures);
  } else if (!dichotomy) {
    res.exit_code = kExitPropertyFailed;
    res.message = "activation-space input matrix is not the identity";
  }

  if (format == Format::Csv) {
    std::ostringstream out;
    csv_row(out, {"labelA", "labelB", "angle_deg", "norm_ratio", "max_spectrum_gap"});
    for (const auto& c : sweep.comparisons) {
      csv_row(out, {csv_text(c.label_a), csv_text(c.label_b), format_double(c.effective_input_angle_deg),
                    format_double(c.effective_input_norm_ratio), format_double(c.max_spectrum_gap)});
    }
    res.output = out.str();
    return res;
  }

  Json j = report_header(Command::Context, cfg);
  j["probe_u"] = to_json(cfg.probe_u);
  Json entries = Json::array();
  for (const auto& e : sweep.entries) {
    Json item{{"label", e.context.label}, {"c", to_json(e.context.c)}, {"ok", e.ok()}};
    if (e.inst) {
      item["fixed_point"] = fixed_point_json(e.inst->fp);
      item["D"] = to_json(e.inst->D.diag);
      item["effective_input"] = to_json(Eigen::VectorXd(e.inst->activity_sys.B * cfg.probe_u));
      Json spec = Json::array();
      for (const auto& z : e.activation_spectrum) spec.push_back(to_json(z));
      item["activation_spectrum"] = std::move(spec);
    }
    if (!e.error.empty()) item["error"] = e.error;
    entries.push_back(std::move(item));
  }
  j["contexts"] = std::move(entries);
  Json comps = Json::array();
  for (const auto& c : sweep.comparisons) {
    comps.push_back(Json{{"labelA", c.label_a},
                         {"labelB", c.label_b},
                         {"effective_input_angle_deg", c.effective_input_angle_deg},
                         {"effective_input_norm_ratio", c.effective_input_norm_ratio},
                         {"activation_input_identical", c.activation_input_identical},
                         {"max_spectrum_gap", c.max_spectrum_gap},
                         {"mean_spectrum_gap", c.mean_spectrum_gap}});
  }
  j["comparisons"] = std::move(comps);
  j["failures"] = sweep.failures;
  res.output = dump(j);
  return res;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "simulate") return Command::Simulate;
  if (name == "linearize") return Command::Linearize;
  if (name == "eigen") return Command::Eigen;
  if (name == "equiv") return Command::Equiv;
  if (name == "context") return Command::Context;
  if (name == "export") return Command::Export;
  return std::nullopt;
}

std::optional<Format> parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  return std::nullopt;
}

std::string_view command_name(Command cmd) {
  switch (cmd) {
    case Command::Simulate:
      return "simulate";
    case Command::Linearize:
      return "linearize";
    case Command::Eigen:
      return "eigen";
    case Command::Equiv:
      return "equiv";
    case Command::Context:
      return "context";
    case Command::Export:
      return "export";
  }
  return "unknown";
}

Format default_format(Command cmd) { return cmd == Command::Simulate ? Format::Csv : Format::Json; }

CommandResult run_command(Command cmd, const io::ExperimentConfig& config, Format format) {
  switch (cmd) {
    case Command::Simulate:
      return cmd_simulate(config, format);
    case Command::Linearize:
      return cmd_linearize(config, format);
    case Command::Eigen:
      return cmd_eigen(config, format);
    case Command::Equiv:
      return cmd_equiv(config, format);
    case Command::Context:
      return cmd_context(config, format);
    case Command::Export:
      return CommandResult{io::model_to_json(config.model).dump(2) + "\n", kExitOk, {}};
  }
  return CommandResult{{}, kExitConfig, "unknown command"};
}

CommandResult run(Command cmd, const std::filesystem::path& config_path, std::optional<Format> format) {
  try {
    const io::ExperimentConfig cfg = io::load_config(config_path);
    return run_command(cmd, cfg, format.value_or(default_format(cmd)));
  } catch (const ConfigError& e) {
    return CommandResult{{}, kExitConfig, e.what()};
  } catch (const NumericalError& e) {
    return CommandResult{{}, kExitNumerical, e.what()};
  } catch (const Error& e) {
    // Shape/domain problems reaching this point come from config contents.
    return CommandResult{{}, kExitConfig, e.what()};
  }
}

}  // namespace rnnlinz::cli
