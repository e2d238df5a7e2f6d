#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rnnlinz/fixed_point.hpp"
#include "rnnlinz/linearize.hpp"

namespace rnnlinz {

using Complex = std::complex<double>;

/// Eigenvalue with its right eigenvector (A rho = lambda rho) and left
/// eigenvector (s^T A = lambda s^T, plain transpose, no conjugation).
/// Both vectors have unit 2-norm and their largest-magnitude entry is real
/// and positive.
struct EigenTriple {
  Complex lambda;
  Eigen::VectorXcd right;
  Eigen::VectorXcd left;
  double right_residual = 0.0;  // ||A rho - lambda rho||_2
  double left_residual = 0.0;   // ||A^T s - lambda s||_2
};

/// Eigenvalues of one matrix matched one-to-one with those of another.
struct SpectrumPairing {
  std::vector<Complex> eig_x;  // eigenvalues of W D, sorted
  std::vector<Complex> eig_r;  // eigenvalues of D W, sorted
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (index into eig_x, index into eig_r), in eig_x order
  std::vector<double> gaps;
  double max_eigenvalue_gap = 0.0;
  double tol = 0.0;
  bool passed = false;
};

struct EigvecMappingRow {
  std::size_t index = 0;  // into the D W triples
  Complex lambda;
  double neighbor_gap = 0.0;
  bool skipped = false;  // near-degenerate eigenvalue
  double left_residual = 0.0;   // ||(s_r^T D)(W D) - lambda s_r^T D||_2
  double right_residual = 0.0;  // ||(W D)(D^-1 rho_r) - lambda D^-1 rho_r||_2
};

struct EigvecMappingReport {
  std::vector<EigvecMappingRow> rows;
  double wd_norm = 0.0;  // ||W D||_2
  double threshold = 0.0;
  double max_left_residual = 0.0;
  double max_right_residual = 0.0;
  std::size_t checked = 0;
  bool passed = false;
};

struct DotPreservationRow {
  std::size_t index_x = 0;
  std::size_t index_r = 0;
  Complex lambda;
  bool skipped = false;
  Complex dot_r;       // s_r^T rho_r
  Complex dot_mapped;  // (s_r^T D)(D^-1 rho_r)
  double difference = 0.0;
  double bound = 0.0;
};

struct DotPreservationReport {
  std::vector<DotPreservationRow> rows;
  double max_difference = 0.0;
  std::size_t checked = 0;
  bool passed = false;
};

// Eigenvalues closer than this to another eigenvalue of the same matrix are
// near-degenerate; their eigenvectors are not checked individually.
inline constexpr double kNearDegenerateGap = 1e-6;

/// Dense nonsymmetric eigendecomposition: n triples sorted by real part
/// descending, then imaginary part descending. Left vectors come from a
/// second decomposition of A^T matched to the eigenvalues of A.
std::vector<EigenTriple> eigendecompose(const Eigen::MatrixXd& A);

/// Eigenvalues only, in the same order as eigendecompose().
std::vector<Complex> eigenvalues(const Eigen::MatrixXd& A);

/// Greedy minimal-distance bijection: repeatedly matches the closest unused
/// pair (ties broken by lower indices). Returns b-index for each a-index.
std::vector<std::size_t> match_eigenvalues(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// Smallest distance from each eigenvalue to any other in the same list.
std::vector<double> neighbor_gaps(const std::vector<Complex>& eigs);

double spectral_norm(const Eigen::MatrixXd& A);

/// s_x = D s_r, the left eigenvector of W D for a left eigenvector s_r of D W.
Eigen::VectorXcd map_left_eigvec(const Eigen::VectorXcd& s_r, const GainMatrix& D);

/// rho_x = D^-1 rho_r, the right eigenvector of W D for a right eigenvector
/// rho_r of D W. Throws NearZeroGain.
Eigen::VectorXcd map_right_eigvec(const Eigen::VectorXcd& rho_r, const GainMatrix& D);

SpectrumPairing pair_spectra(const std::vector<Complex>& eig_x, const std::vector<Complex>& eig_r, double tol);

/// Independently decomposes W D and D W at fp and pairs the spectra.
SpectrumPairing verify_spectrum_identity(const RnnModel& model, const FixedPoint& fp, double tol);

/// Maps every simple left/right eigenvector of D W into W D coordinates and
/// checks both residuals against rel_tol * ||W D||_2.
EigvecMappingReport verify_eigvec_mapping(const Eigen::MatrixXd& WD, const std::vector<EigenTriple>& triples_r,
                                          const GainMatrix& D, double rel_tol);

/// For each simple eigenvalue compares s_r^T rho_r with (s_r^T D)(D^-1 rho_r);
/// a row passes when |difference| <= rel_tol * |s_r^T rho_r| + abs_tol.
DotPreservationReport verify_dot_preservation(const std::vector<EigenTriple>& triples_x,
                                              const std::vector<EigenTriple>& triples_r,
                                              const SpectrumPairing& pairing, const GainMatrix& D, double rel_tol,
                                              double abs_tol = 0.0);

struct CorrespondenceTolerances {
  double spectrum_rel = 1e-10;  // times ||W D||_2
  double eigvec_rel = 1e-8;     // times ||W D||_2
  double dot_rel = 1e-12;
  double dot_abs = 1e-14;
};

/// Everything the eigenvector correspondence needs, computed once.
struct CorrespondenceAnalysis {
  GainMatrix D;
  Eigen::MatrixXd WD;
  Eigen::MatrixXd DW;
  std::vector<EigenTriple> triples_x;
  std::vector<EigenTriple> triples_r;
  SpectrumPairing pairing;
  EigvecMappingReport mapping;
  DotPreservationReport dots;

  bool passed() const noexcept { return pairing.passed && mapping.passed && dots.passed; }
};

CorrespondenceAnalysis analyze_correspondence(const RnnModel& model, const FixedPoint& fp,
                                              const CorrespondenceTolerances& tols = {});

}  // namespace rnnlinz
