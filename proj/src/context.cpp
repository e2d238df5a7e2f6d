#include "rnnlinz/context.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include <fmt/format.h>

#include "rnnlinz/errors.hpp"

namespace rnnlinz {

namespace {

void require_probe(const RnnModel& model, const Eigen::VectorXd& u) {
  require_length(u, model.size(), "probe input u");
  if (!u.allFinite()) throw DomainError("probe input u has non-finite entries");
  if (u.isZero(0.0)) throw ZeroProbe();
}

bool is_exact_identity(const Eigen::MatrixXd& B) {
  return B.rows() == B.cols() && B == Eigen::MatrixXd::Identity(B.rows(), B.cols());
}

// Fixed-point solves run in input order so that each can start from the
// previous result.
std::vector<SweepEntry> solve_all(const RnnModel& model, const std::vector<Context>& contexts,
                                  const SweepOptions& opts) {
  if (contexts.empty()) throw ShapeError("context sweep needs at least one context");
  std::vector<SweepEntry> entries;
  entries.reserve(contexts.size());
  Eigen::VectorXd guess = Eigen::VectorXd::Zero(model.size());
  for (const auto& ctx : contexts) {
    SweepEntry e{ctx, std::nullopt, {}, {}};
    try {
      e.inst = instantiate_context(model, ctx, opts.warm_start ? guess : Eigen::VectorXd::Zero(model.size()),
                                   opts.tol, opts.max_iter);
      guess = e.inst->fp.x0();
    } catch (const Error& err) {
      e.error = err.what();
      guess = Eigen::VectorXd::Zero(model.size());
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void fill_spectrum(SweepEntry& e) {
  if (!e.ok()) return;
  try {
    e.activation_spectrum = eigenvalues(e.inst->activation_sys.A);
  } catch (const Error& err) {
    e.error = err.what();
  }
}

std::vector<std::pair<std::size_t, std::size_t>> comparable_pairs(const std::vector<SweepEntry>& entries) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      if (entries[i].ok() && entries[j].ok()) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

ContextComparison compare_entries(const std::vector<SweepEntry>& entries, std::size_t i, std::size_t j,
                                  const Eigen::VectorXd& u) {
  ContextComparison cmp = compare_instantiations(*entries[i].inst, *entries[j].inst, u,
                                                 &entries[i].activation_spectrum, &entries[j].activation_spectrum);
  cmp.index_a = i;
  cmp.index_b = j;
  return cmp;
}

std::size_t count_failures(const std::vector<SweepEntry>& entries) {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const SweepEntry& e) { return !e.ok(); }));
}

}  // namespace

ContextInstantiation instantiate_context(const RnnModel& model, const Context& ctx, const Eigen::VectorXd& x_guess,
                                         double tol, int max_iter) {
  require_length(ctx.c, model.size(), "context c");
  if (!ctx.c.allFinite()) throw DomainError(fmt::format("context '{}' has non-finite entries", ctx.label));
  FixedPoint fp = find_fixed_point(model, ctx.c, x_guess, tol, max_iter);
  GainMatrix D = gain_matrix(model, fp);
  LinearizedSystem act = linearize_activation(model, fp);
  LinearizedSystem rate = linearize_activity(model, fp);
  return ContextInstantiation{ctx, std::move(fp), std::move(D), std::move(act), std::move(rate)};
}

double angle_degrees(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw DomainError("angle with a zero vector is undefined");
  const Eigen::VectorXd ua = a / na;
  const Eigen::VectorXd ub = b / nb;
  return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm()) * 180.0 / std::numbers::pi;
}

ContextComparison compare_instantiations(const ContextInstantiation& a, const ContextInstantiation& b,
                                         const Eigen::VectorXd& u, const std::vector<Complex>* spectrum_a,
                                         const std::vector<Complex>* spectrum_b) {
  if (a.D.size() != b.D.size()) throw ShapeError("instantiations come from models of different size");
  require_length(u, a.D.size(), "probe input u");
  if (u.isZero(0.0)) throw ZeroProbe();

  ContextComparison cmp;
  cmp.label_a = a.context.label;
  cmp.label_b = b.context.label;
  cmp.effective_input_a = a.activity_sys.B * u;
  cmp.effective_input_b = b.activity_sys.B * u;
  cmp.effective_input_angle_deg = angle_degrees(cmp.effective_input_a, cmp.effective_input_b);
  cmp.effective_input_norm_ratio = cmp.effective_input_a.norm() / cmp.effective_input_b.norm();
  cmp.activation_input_identical = is_exact_identity(a.activation_sys.B) && is_exact_identity(b.activation_sys.B);

  const std::vector<Complex> own_a = spectrum_a ? std::vector<Complex>{} : eigenvalues(a.activation_sys.A);
  const std::vector<Complex> own_b = spectrum_b ? std::vector<Complex>{} : eigenvalues(b.activation_sys.A);
  const auto& eig_a = spectrum_a ? *spectrum_a : own_a;
  const auto& eig_b = spectrum_b ? *spectrum_b : own_b;
  const SpectrumPairing pairing = pair_spectra(eig_a, eig_b, 0.0);
  cmp.max_spectrum_gap = pairing.max_eigenvalue_gap;
  double total = 0.0;
  for (double g : pairing.gaps) total += g;
  cmp.mean_spectrum_gap = pairing.gaps.empty() ? 0.0 : total / static_cast<double>(pairing.gaps.size());
  return cmp;
}

ContextComparison compare_contexts(const RnnModel& model, const Context& a, const Context& b,
                                   const Eigen::VectorXd& u, double tol) {
  require_probe(model, u);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(model.size());
  const ContextInstantiation ia = instantiate_context(model, a, zero, tol);
  const ContextInstantiation ib = instantiate_context(model, b, zero, tol);
  ContextComparison cmp = compare_instantiations(ia, ib, u);
  cmp.index_a = 0;
  cmp.index_b = 1;
  return cmp;
}

ContextSweep context_sweep(const RnnModel& model, const std::vector<Context>& contexts, const Eigen::VectorXd& u,
                           const SweepOptions& opts) {
  require_probe(model, u);
  ContextSweep out;
  out.entries = solve_all(model, contexts, opts);

  const auto m = static_cast<long>(out.entries.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < m; ++i) {
    fill_spectrum(out.entries[static_cast<std::size_t>(i)]);
  }

  const auto pairs = comparable_pairs(out.entries);
  out.comparisons.resize(pairs.size());
  const auto p = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < p; ++k) {
    const auto [i, j] = pairs[static_cast<std::size_t>(k)];
    out.comparisons[static_cast<std::size_t>(k)] = compare_entries(out.entries, i, j, u);
  }
  out.failures = count_failures(out.entries);
  return out;
}

ContextSweep context_sweep_serial(const RnnModel& model, const std::vector<Context>& contexts,
                                  const Eigen::VectorXd& u, const SweepOptions& opts) {
  require_probe(model, u);
  ContextSweep out;
  out.entries = solve_all(model, contexts, opts);
  for (auto& e : out.entries) fill_spectrum(e);
  for (const auto& [i, j] : comparable_pairs(out.entries)) {
    out.comparisons.push_back(compare_entries(out.entries, i, j, u));
  }
  out.failures = count_failures(out.entries);
  return out;
}

}  // namespace rnnlinz
