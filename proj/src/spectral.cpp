#include "rnnlinz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "rnnlinz/errors.hpp"
#include "rnnlinz/kernels.hpp"

namespace rnnlinz {

namespace {

bool sort_before(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

std::vector<std::size_t> sorted_order(const std::vector<Complex>& eigs) {
  std::vector<std::size_t> order(eigs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sort_before(eigs[i], eigs[j]); });
  return order;
}

Eigen::EigenSolver<Eigen::MatrixXd> solve(const Eigen::MatrixXd& A, bool vectors) {
  if (A.rows() != A.cols()) {
    throw ShapeError(fmt::format("eigendecomposition needs a square matrix, got {}x{}", A.rows(), A.cols()));
  }
  if (!A.allFinite()) {
    throw DomainError("eigendecomposition of a matrix with non-finite entries");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, vectors);
  if (es.info() != Eigen::Success) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& sv = svd.singularValues();
    const double cond = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();
    throw NumericalError(fmt::format("eigensolver failed on {}x{} matrix (||A||_2 = {:.3e}, condition {:.3e})",
                                     A.rows(), A.cols(), sv[0], cond));
  }
  return es;
}

std::vector<Complex> to_vector(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

// Unit 2-norm, largest-magnitude entry rotated onto the positive real axis.
Eigen::VectorXcd normalize_phase(Eigen::VectorXcd v) {
  const double norm = v.norm();
  if (norm == 0.0) return v;
  v /= norm;
  Eigen::Index lead = 0;
  v.cwiseAbs().maxCoeff(&lead);
  const Complex phase = std::conj(v[lead]) / std::abs(v[lead]);
  v *= phase;
  v[lead] = Complex(v[lead].real(), 0.0);
  return v;
}

// Plain bilinear s^T rho; Eigen's dot() would conjugate s.
Complex bilinear(const Eigen::VectorXcd& s, const Eigen::VectorXcd& rho) {
  return (s.array() * rho.array()).sum();
}

}  // namespace

double spectral_norm(const Eigen::MatrixXd& A) {
  if (A.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues()[0];
}

std::vector<std::size_t> match_eigenvalues(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) {
    throw ShapeError(fmt::format("cannot pair spectra of sizes {} and {}", a.size(), b.size()));
  }
  const std::size_t n = a.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  candidates.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      candidates.emplace_back(std::abs(a[i] - b[j]), i, j);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<std::size_t> match(n, n);
  std::vector<bool> used(n, false);
  std::size_t matched = 0;
  for (const auto& [dist, i, j] : candidates) {
    if (match[i] != n || used[j]) continue;
    match[i] = j;
    used[j] = true;
    if (++matched == n) break;
  }
  return match;
}

std::vector<double> neighbor_gaps(const std::vector<Complex>& eigs) {
  std::vector<double> gaps(eigs.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    for (std::size_t j = 0; j < eigs.size(); ++j) {
      if (i != j) gaps[i] = std::min(gaps[i], std::abs(eigs[i] - eigs[j]));
    }
  }
  return gaps;
}

std::vector<Complex> eigenvalues(const Eigen::MatrixXd& A) {
  const auto es = solve(A, false);
  std::vector<Complex> raw = to_vector(es.eigenvalues());
  std::vector<Complex> out;
  out.reserve(raw.size());
  for (std::size_t i : sorted_order(raw)) out.push_back(raw[i]);
  return out;
}

std::vector<EigenTriple> eigendecompose(const Eigen::MatrixXd& A) {
  const auto right_es = solve(A, true);
  const Eigen::MatrixXd At = A.transpose();
  const auto left_es = solve(At, true);

  const std::vector<Complex> lambdas = to_vector(right_es.eigenvalues());
  const std::vector<Complex> mus = to_vector(left_es.eigenvalues());
  const std::vector<std::size_t> left_for = match_eigenvalues(lambdas, mus);
  const Eigen::MatrixXcd V = right_es.eigenvectors();
  const Eigen::MatrixXcd U = left_es.eigenvectors();
  const Eigen::MatrixXcd Ac = A.cast<Complex>();
  const Eigen::MatrixXcd Atc = At.cast<Complex>();

  std::vector<EigenTriple> out;
  out.reserve(lambdas.size());
  for (std::size_t i : sorted_order(lambdas)) {
    EigenTriple t;
    t.lambda = lambdas[i];
    t.right = normalize_phase(V.col(static_cast<Eigen::Index>(i)));
    t.left = normalize_phase(U.col(static_cast<Eigen::Index>(left_for[i])));
    t.right_residual = (Ac * t.right - t.lambda * t.right).norm();
    t.left_residual = (Atc * t.left - t.lambda * t.left).norm();
    out.push_back(std::move(t));
  }
  return out;
}

Eigen::VectorXcd map_left_eigvec(const Eigen::VectorXcd& s_r, const GainMatrix& D) {
  if (s_r.size() != D.size()) throw ShapeError("left eigenvector and gain matrix sizes differ");
  return s_r.cwiseProduct(D.diag.cast<Complex>());
}

Eigen::VectorXcd map_right_eigvec(const Eigen::VectorXcd& rho_r, const GainMatrix& D) {
  if (rho_r.size() != D.size()) throw ShapeError("right eigenvector and gain matrix sizes differ");
  D.require_invertible();
  return rho_r.cwiseQuotient(D.diag.cast<Complex>());
}

SpectrumPairing pair_spectra(const std::vector<Complex>& eig_x, const std::vector<Complex>& eig_r, double tol) {
  SpectrumPairing out;
  out.eig_x = eig_x;
  out.eig_r = eig_r;
  out.tol = tol;
  const auto match = match_eigenvalues(eig_x, eig_r);
  for (std::size_t i = 0; i < eig_x.size(); ++i) {
    const double gap = std::abs(eig_x[i] - eig_r[match[i]]);
    out.pairs.emplace_back(i, match[i]);
    out.gaps.push_back(gap);
    out.max_eigenvalue_gap = std::max(out.max_eigenvalue_gap, gap);
  }
  out.passed = out.max_eigenvalue_gap <= tol;
  return out;
}

SpectrumPairing verify_spectrum_identity(const RnnModel& model, const FixedPoint& fp, double tol) {
  const GainMatrix D = gain_matrix(model, fp);
  const auto eig_x = eigenvalues(kernels::scale_columns(model.weights(), D.diag));
  const auto eig_r = eigenvalues(kernels::scale_rows(D.diag, model.weights()));
  return pair_spectra(eig_x, eig_r, tol);
}

EigvecMappingReport verify_eigvec_mapping(const Eigen::MatrixXd& WD, const std::vector<EigenTriple>& triples_r,
                                          const GainMatrix& D, double rel_tol) {
  EigvecMappingReport rep;
  rep.wd_norm = spectral_norm(WD);
  rep.threshold = rel_tol * rep.wd_norm;
  std::vector<Complex> lambdas;
  for (const auto& t : triples_r) lambdas.push_back(t.lambda);
  const auto gaps = neighbor_gaps(lambdas);
  const Eigen::MatrixXcd WDc = WD.cast<Complex>();
  const Eigen::MatrixXcd WDt = WDc.transpose();

  bool ok = true;
  for (std::size_t i = 0; i < triples_r.size(); ++i) {
    EigvecMappingRow row;
    row.index = i;
    row.lambda = triples_r[i].lambda;
    row.neighbor_gap = gaps[i];
    row.skipped = gaps[i] < kNearDegenerateGap;
    if (!row.skipped) {
      const Eigen::VectorXcd s_x = map_left_eigvec(triples_r[i].left, D);
      const Eigen::VectorXcd rho_x = map_right_eigvec(triples_r[i].right, D);
      row.left_residual = (WDt * s_x - row.lambda * s_x).norm();
      row.right_residual = (WDc * rho_x - row.lambda * rho_x).norm();
      rep.max_left_residual = std::max(rep.max_left_residual, row.left_residual);
      rep.max_right_residual = std::max(rep.max_right_residual, row.right_residual);
      ok = ok && row.left_residual <= rep.threshold && row.right_residual <= rep.threshold;
      ++rep.checked;
    }
    rep.rows.push_back(row);
  }
  rep.passed = ok;
  return rep;
}

DotPreservationReport verify_dot_preservation(const std::vector<EigenTriple>& triples_x,
                                              const std::vector<EigenTriple>& triples_r,
                                              const SpectrumPairing& pairing, const GainMatrix& D, double rel_tol,
                                              double abs_tol) {
  if (pairing.pairs.size() != triples_x.size() || triples_x.size() != triples_r.size()) {
    throw ShapeError("pairing does not cover both spectra");
  }
  std::vector<Complex> lambdas;
  for (const auto& t : triples_r) lambdas.push_back(t.lambda);
  const auto gaps = neighbor_gaps(lambdas);

  DotPreservationReport rep;
  bool ok = true;
  for (const auto& [ix, ir] : pairing.pairs) {
    DotPreservationRow row;
    row.index_x = ix;
    row.index_r = ir;
    row.lambda = triples_r.at(ir).lambda;
    row.skipped = gaps[ir] < kNearDegenerateGap;
    if (!row.skipped) {
      const auto& t = triples_r[ir];
      row.dot_r = bilinear(t.left, t.right);
      row.dot_mapped = bilinear(map_left_eigvec(t.left, D), map_right_eigvec(t.right, D));
      row.difference = std::abs(row.dot_mapped - row.dot_r);
      row.bound = rel_tol * std::abs(row.dot_r) + abs_tol;
      rep.max_difference = std::max(rep.max_difference, row.difference);
      ok = ok && row.difference <= row.bound;
      ++rep.checked;
    }
    rep.rows.push_back(row);
  }
  rep.passed = ok;
  return rep;
}

CorrespondenceAnalysis analyze_correspondence(const RnnModel& model, const FixedPoint& fp,
                                              const CorrespondenceTolerances& tols) {
  CorrespondenceAnalysis out;
  out.D = gain_matrix(model, fp);
  out.WD = kernels::scale_columns(model.weights(), out.D.diag);
  out.DW = kernels::scale_rows(out.D.diag, model.weights());
  out.triples_x = eigendecompose(out.WD);
  out.triples_r = eigendecompose(out.DW);

  std::vector<Complex> eig_x, eig_r;
  for (const auto& t : out.triples_x) eig_x.push_back(t.lambda);
  for (const auto& t : out.triples_r) eig_r.push_back(t.lambda);
  const double wd_norm = spectral_norm(out.WD);
  out.pairing = pair_spectra(eig_x, eig_r, tols.spectrum_rel * wd_norm);
  out.mapping = verify_eigvec_mapping(out.WD, out.triples_r, out.D, tols.eigvec_rel);
  out.dots = verify_dot_preservation(out.triples_x, out.triples_r, out.pairing, out.D, tols.dot_rel, tols.dot_abs);
  return out;
}

}  // namespace rnnlinz
