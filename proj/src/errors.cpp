#include "rnnlinz/errors.hpp"

#include <fmt/format.h>

namespace rnnlinz {

NonConvergence::NonConvergence(double best_residual, int iterations)
    : NumericalError(fmt::format("fixed-point solver did not converge: best residual {:.3e} after {} iterations",
                                 best_residual, iterations)),
      best_residual_(best_residual),
      iterations_(iterations) {}

SingularJacobian::SingularJacobian(double condition_estimate, int iteration)
    : NumericalError(fmt::format("Newton system numerically singular at iteration {} (condition estimate {:.3e})",
                                 iteration, condition_estimate)),
      condition_(condition_estimate) {}

NearZeroGain::NearZeroGain(std::size_t index, double gain)
    : NumericalError(fmt::format("gain D[{}] = {:.3e} is too close to zero to invert", index, gain)),
      index_(index) {}

}  // namespace rnnlinz
