#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rnnlinz/fixed_point.hpp"
#include "rnnlinz/linearize.hpp"
#include "rnnlinz/spectral.hpp"

namespace rnnlinz {

/// A constant input c held for a whole run.
struct Context {
  std::string label;
  Eigen::VectorXd c;
};

/// Both linearizations of one network around the fixed point selected by a context.
struct ContextInstantiation {
  Context context;
  FixedPoint fp;
  GainMatrix D;
  LinearizedSystem activation_sys;  // A = W D_R, B = I
  LinearizedSystem activity_sys;    // A = D_R W, B = D_R
};

struct ContextComparison {
  std::string label_a;
  std::string label_b;
  std::size_t index_a = 0;
  std::size_t index_b = 0;
  Eigen::VectorXd effective_input_a;  // D_A u
  Eigen::VectorXd effective_input_b;  // D_B u
  double effective_input_angle_deg = 0.0;
  double effective_input_norm_ratio = 1.0;  // ||D_A u|| / ||D_B u||
  // Both activation-space input matrices are bit-exactly the identity.
  bool activation_input_identical = false;
  double max_spectrum_gap = 0.0;  // between eig(W D_A) and eig(W D_B)
  double mean_spectrum_gap = 0.0;
};

struct SweepEntry {
  Context context;
  std::optional<ContextInstantiation> inst;
  std::vector<Complex> activation_spectrum;  // eig(W D_R)
  std::string error;

  bool ok() const noexcept { return inst.has_value() && error.empty(); }
};

struct ContextSweep {
  std::vector<SweepEntry> entries;            // input order
  std::vector<ContextComparison> comparisons;  // (0,1), (0,2), ..., (1,2), ... over successful entries
  std::size_t failures = 0;
};

struct SweepOptions {
  double tol = kDefaultFixedPointTol;
  int max_iter = kDefaultMaxNewtonIter;
  bool warm_start = true;  // start each solve at the previous context's fixed point
};

ContextInstantiation instantiate_context(const RnnModel& model, const Context& ctx, const Eigen::VectorXd& x_guess,
                                         double tol = kDefaultFixedPointTol, int max_iter = kDefaultMaxNewtonIter);

/// Angle in degrees between two nonzero vectors, 2 atan2(|a^ - b^|, |a^ + b^|).
double angle_degrees(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Compares two instantiations under the same probe input u. The activation
/// spectra may be passed in to avoid recomputing them.
ContextComparison compare_instantiations(const ContextInstantiation& a, const ContextInstantiation& b,
                                         const Eigen::VectorXd& u, const std::vector<Complex>* spectrum_a = nullptr,
                                         const std::vector<Complex>* spectrum_b = nullptr);

/// Solves both contexts from zero and compares them. Throws ZeroProbe for u = 0.
ContextComparison compare_contexts(const RnnModel& model, const Context& a, const Context& b,
                                   const Eigen::VectorXd& u, double tol = kDefaultFixedPointTol);

/// Instantiates every context, recording failures in place, then compares all
/// successful pairs. Spectra and comparisons run in parallel.
ContextSweep context_sweep(const RnnModel& model, const std::vector<Context>& contexts, const Eigen::VectorXd& u,
                           const SweepOptions& opts = {});

/// Single-threaded reference for context_sweep; results are identical.
ContextSweep context_sweep_serial(const RnnModel& model, const std::vector<Context>& contexts,
                                  const Eigen::VectorXd& u, const SweepOptions& opts = {});

}  // namespace rnnlinz
