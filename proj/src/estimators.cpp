#include "tscs/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tscs/errors.hpp"

namespace tscs {

namespace {

// Relative residual level below which greedy loops treat the data as fully explained.
constexpr double kExhausted = 1e-12;

bool should_stop(double residual_rms, double residual_norm, double data_norm,
                 const std::optional<double>& tolerance) {
  if (data_norm == 0.0 || residual_norm <= kExhausted * data_norm) return true;
  return tolerance && residual_rms <= *tolerance;
}

void validate(const EstimatorInput& in) {
  if (in.y.empty()) throw InvalidArgument("estimator: no measurements");
  const auto pilots = in.y.front().rows();
  const auto n_bs = in.y.front().cols();
  for (const auto& y : in.y)
    if (y.rows() != pilots || y.cols() != n_bs)
      throw DimensionError("estimator: measurement matrices differ in shape");
  if (in.a.rows() != pilots)
    throw DimensionError("estimator: sensing matrix has " + std::to_string(in.a.rows()) +
                         " rows, measurements have " + std::to_string(pilots));
  if (in.a.cols() != in.geometry.elements())
    throw DimensionError("estimator: sensing matrix width does not match the RIS geometry");
  if (in.l1 < 1 || in.l1 > n_bs) throw InvalidArgument("estimator: L1 must lie in [1, N_BS]");
  if (in.l2.size() != in.y.size())
    throw InvalidArgument("estimator: need one L2 value per user");
  for (int l2 : in.l2)
    if (l2 < 1) throw InvalidArgument("estimator: L2 must be positive");
}

EstimateReport empty_report(const EstimatorInput& in) {
  EstimateReport report;
  const auto n_ris = in.a.cols();
  const auto n_bs = in.y.front().cols();
  report.channels.assign(in.y.size(), ComplexMatrix::Zero(n_ris, n_bs));
  report.diagnostics.residual_history.resize(in.y.size());
  const int max_l2 = *std::max_element(in.l2.begin(), in.l2.end());
  if (static_cast<long long>(max_l2) * in.l1 > in.a.rows())
    report.diagnostics.warnings.push_back("L1 * max L2 = " + std::to_string(max_l2 * in.l1) +
                                          " exceeds the pilot length T = " +
                                          std::to_string(in.a.rows()));
  return report;
}

// Independent OMP on each listed column of Y_k, written into the report.
void per_column_omp(const EstimatorInput& in, int user, const IndexSet& columns,
                    EstimateReport& report) {
  const OmpOptions options{in.residual_tolerance};
  for (int col : columns) {
    auto est = coarse_omp(in.y[user].col(col), in.a, in.l2[user], options);
    report.channels[user].col(col) = est.x;
    report.diagnostics.rank_deficient_solves += est.rank_deficient ? 1 : 0;
    report.diagnostics.residual_history[user].push_back(std::move(est.residual_norms));
  }
}

// Shared structured-SOMP engine. rows_for[l][p] is the row that anchor p occupies in
// column l.
StructuredRowEstimate structured_somp(const ComplexMatrix& y, const ComplexMatrix& a,
                                      const std::vector<std::vector<int>>& rows_for, int l2,
                                      const OmpOptions& options) {
  const auto columns = y.cols();
  const auto n = a.cols();
  if (y.rows() != a.rows()) throw DimensionError("phase2: measurement and sensing row counts differ");
  if (static_cast<Eigen::Index>(rows_for.size()) != columns)
    throw InvalidArgument("phase2: need one offset per retained column");
  if (l2 < 0) throw InvalidArgument("phase2: negative sparsity");

  StructuredRowEstimate out;
  out.coefficients = ComplexMatrix::Zero(n, columns);
  out.residual_history.resize(columns);
  out.grouped.assign(columns, IndexSet(static_cast<int>(n), std::vector<int>{}));

  std::vector<ComplexVector> residual(columns);
  double data_energy = 0.0;
  for (Eigen::Index l = 0; l < columns; ++l) {
    residual[l] = y.col(l);
    data_energy += residual[l].squaredNorm();
    out.residual_history[l].push_back(residual[l].norm());
  }
  const double data_norm = std::sqrt(data_energy);
  double residual_energy = data_energy;

  std::vector<char> used(n, 0);
  std::vector<std::vector<int>> xi(columns);
  std::vector<ComplexVector> coef(columns);
  const int iterations = static_cast<int>(std::min<Eigen::Index>(l2, n));
  for (int it = 0; it < iterations; ++it) {
    const double rms = std::sqrt(residual_energy / static_cast<double>(columns));
    if (should_stop(rms, std::sqrt(residual_energy), data_norm, options.residual_tolerance)) break;

    RealVector score = RealVector::Zero(n);
    for (Eigen::Index l = 0; l < columns; ++l) {
      const ComplexVector corr = a.adjoint() * residual[l];
      const auto& rows = rows_for[l];
      for (Eigen::Index p = 0; p < n; ++p) score[p] += std::norm(corr[rows[p]]);
    }
    for (Eigen::Index p = 0; p < n; ++p)
      if (used[p]) score[p] = -1.0;
    const auto anchor = static_cast<int>(argmax(score));
    used[anchor] = 1;
    out.anchors.push_back(anchor);

    residual_energy = 0.0;
    for (Eigen::Index l = 0; l < columns; ++l) {
      const int row = rows_for[l][anchor];
      if (std::find(xi[l].begin(), xi[l].end(), row) != xi[l].end())
        ++out.duplicate_indices;
      else
        xi[l].push_back(row);
      const ComplexMatrix sub = select_columns(a, xi[l]);
      auto ls = ls_solve(sub, y.col(l));
      out.rank_deficient_solves += ls.rank_deficient ? 1 : 0;
      residual[l] = y.col(l) - sub * ls.x;
      coef[l] = std::move(ls.x);
      residual_energy += residual[l].squaredNorm();
      out.residual_history[l].push_back(residual[l].norm());
    }
  }

  for (Eigen::Index l = 0; l < columns; ++l) {
    for (std::size_t i = 0; i < xi[l].size(); ++i)
      out.coefficients(xi[l][i], l) = coef[l][static_cast<Eigen::Index>(i)];
    out.grouped[l] = IndexSet(static_cast<int>(n), xi[l]);
  }
  out.pattern = IndexSet(static_cast<int>(n), out.anchors);
  return out;
}

std::vector<std::vector<int>> planar_rows(const ArrayGeometry& geo, std::span<const GridShift> offsets) {
  std::vector<std::vector<int>> rows(offsets.size(), std::vector<int>(geo.elements()));
  for (std::size_t l = 0; l < offsets.size(); ++l)
    for (int p = 0; p < geo.elements(); ++p)
      rows[l][p] = geo.flat(wrap_index(p / geo.n2() + offsets[l].axis1, geo.n1()),
                            wrap_index(p % geo.n2() + offsets[l].axis2, geo.n2()));
  return rows;
}

EstimateReport run_mtscs(const EstimatorInput& in, bool planar) {
  validate(in);
  EstimateReport report = empty_report(in);
  const OmpOptions options{in.residual_tolerance};

  // Phase 1: shared column support
  report.col_support = phase1_column_support(in.y, in.l1);
  const auto& cols = report.col_support.indices();

  std::vector<ComplexMatrix> restricted;
  std::vector<ComplexMatrix> coarse;
  for (std::size_t k = 0; k < in.y.size(); ++k) {
    restricted.push_back(select_columns(in.y[k], cols));
    ComplexMatrix h0(in.a.cols(), in.l1);
    for (int l = 0; l < in.l1; ++l)
      h0.col(l) = coarse_omp(restricted.back().col(l), in.a, in.l2[k], options).x;
    coarse.push_back(std::move(h0));
  }

  // Phase 3: offsets common to all users
  auto offsets = planar ? phase3_joint_offsets_upa(coarse, in.geometry) : phase3_joint_offsets(coarse);
  report.offsets = offsets.shifts;
  report.diagnostics.offset_fallbacks = offsets.undetermined;
  if (!offsets.undetermined.empty())
    report.diagnostics.warnings.push_back(std::to_string(offsets.undetermined.size()) +
                                          " offset(s) undetermined; fell back to zero shift");

  // Phase 2: offset-structured rows per user
  std::vector<int> linear_offsets;
  for (const auto& s : report.offsets) linear_offsets.push_back(s.axis1);
  for (std::size_t k = 0; k < in.y.size(); ++k) {
    auto est = planar ? phase2_structured_somp_upa(restricted[k], in.a, in.geometry, report.offsets,
                                                   in.l2[k], options)
                      : phase2_structured_somp(restricted[k], in.a, linear_offsets, in.l2[k], options);
    for (int l = 0; l < in.l1; ++l) report.channels[k].col(cols[l]) = est.coefficients.col(l);
    report.row_patterns.push_back(est.pattern);
    report.diagnostics.rank_deficient_solves += est.rank_deficient_solves;
    report.diagnostics.duplicate_indices += est.duplicate_indices;
    report.diagnostics.residual_history[k] = std::move(est.residual_history);
  }
  if (report.diagnostics.duplicate_indices > 0)
    report.diagnostics.warnings.push_back("grouped index sets contained duplicates");
  return report;
}

}  // namespace

double noise_residual_tolerance(double noise_variance, int pilots) {
  return std::sqrt(noise_variance * 2.0 * pilots);
}

IndexSet phase1_column_support(const std::vector<ComplexMatrix>& y, int l1) {
  if (y.empty()) throw InvalidArgument("phase1: no measurements");
  RealVector power = RealVector::Zero(y.front().cols());
  for (const auto& yk : y) {
    if (yk.cols() != power.size()) throw DimensionError("phase1: measurement widths differ");
    power += yk.colwise().squaredNorm().transpose();
  }
  if (l1 < 1 || l1 > power.size()) throw InvalidArgument("phase1: L1 must lie in [1, N_BS]");
  return top_l_indices(power, l1);
}

SparseEstimate coarse_omp(const ComplexVector& y, const ComplexMatrix& a, int sparsity,
                          const OmpOptions& options) {
  if (a.rows() != y.size()) throw DimensionError("coarse_omp: y length does not match A");
  if (sparsity < 0) throw InvalidArgument("coarse_omp: negative sparsity");
  const auto n = a.cols();
  SparseEstimate out;
  out.x = ComplexVector::Zero(n);

  ComplexVector residual = y;
  const double data_norm = y.norm();
  out.residual_norms.push_back(data_norm);
  std::vector<char> used(n, 0);
  ComplexVector coef;
  const int iterations = static_cast<int>(std::min<Eigen::Index>(sparsity, n));
  for (int it = 0; it < iterations; ++it) {
    const double r = residual.norm();
    if (should_stop(r, r, data_norm, options.residual_tolerance)) break;

    const ComplexVector corr = a.adjoint() * residual;
    RealVector score(n);
    for (Eigen::Index p = 0; p < n; ++p) score[p] = used[p] ? -1.0 : std::norm(corr[p]);
    const auto atom = static_cast<int>(argmax(score));
    used[atom] = 1;
    out.support.push_back(atom);

    const ComplexMatrix sub = select_columns(a, out.support);
    auto ls = ls_solve(sub, y);
    out.rank_deficient = out.rank_deficient || ls.rank_deficient;
    residual = y - sub * ls.x;
    coef = std::move(ls.x);
    out.residual_norms.push_back(residual.norm());
  }
  for (std::size_t i = 0; i < out.support.size(); ++i)
    out.x[out.support[i]] = coef[static_cast<Eigen::Index>(i)];
  return out;
}

OffsetEstimate phase3_joint_offsets(const std::vector<ComplexMatrix>& coarse) {
  if (coarse.empty()) throw InvalidArgument("phase3: no coarse estimates");
  const auto n = coarse.front().rows();
  const auto columns = coarse.front().cols();
  OffsetEstimate out;
  for (Eigen::Index l = 0; l < columns; ++l) {
    if (l == 0) {
      out.shifts.push_back({0, 0});
      continue;
    }
    RealVector acc = RealVector::Zero(n);
    for (const auto& h0 : coarse) {
      if (h0.rows() != n || h0.cols() != columns) throw DimensionError("phase3: coarse shapes differ");
      acc += circ_xcorr_1d(h0.col(0), h0.col(l));
    }
    if (!(acc.maxCoeff() > 0.0)) {
      out.undetermined.push_back(static_cast<int>(l));
      out.shifts.push_back({0, 0});
      continue;
    }
    out.shifts.push_back({signed_offset(static_cast<int>(argmax(acc)), static_cast<int>(n)), 0});
  }
  return out;
}

OffsetEstimate phase3_joint_offsets_upa(const std::vector<ComplexMatrix>& coarse,
                                        const ArrayGeometry& geo) {
  if (coarse.empty()) throw InvalidArgument("phase3: no coarse estimates");
  const auto columns = coarse.front().cols();
  if (coarse.front().rows() != geo.elements())
    throw DimensionError("phase3: coarse estimate length does not match the RIS plane");
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  auto plane = [&](const ComplexMatrix& h0, Eigen::Index l) -> ComplexMatrix {
    return Eigen::Map<const RowMajor>(h0.col(l).data(), geo.n1(), geo.n2());
  };
  OffsetEstimate out;
  for (Eigen::Index l = 0; l < columns; ++l) {
    if (l == 0) {
      out.shifts.push_back({0, 0});
      continue;
    }
    RealMatrix acc = RealMatrix::Zero(geo.n1(), geo.n2());
    for (const auto& h0 : coarse) {
      if (h0.rows() != geo.elements() || h0.cols() != columns)
        throw DimensionError("phase3: coarse shapes differ");
      acc += circ_xcorr_2d(plane(h0, 0), plane(h0, l));
    }
    if (!(acc.maxCoeff() > 0.0)) {
      out.undetermined.push_back(static_cast<int>(l));
      out.shifts.push_back({0, 0});
      continue;
    }
    const auto [d1, d2] = argmax(acc);
    out.shifts.push_back({signed_offset(static_cast<int>(d1), geo.n1()),
                          signed_offset(static_cast<int>(d2), geo.n2())});
  }
  return out;
}

StructuredRowEstimate phase2_structured_somp(const ComplexMatrix& y_restricted,
                                             const ComplexMatrix& a, std::span<const int> offsets,
                                             int l2, const OmpOptions& options) {
  const auto n = static_cast<int>(a.cols());
  std::vector<std::vector<int>> rows(offsets.size(), std::vector<int>(n));
  for (std::size_t l = 0; l < offsets.size(); ++l)
    for (int p = 0; p < n; ++p) rows[l][p] = wrap_index(static_cast<long long>(p) + offsets[l], n);
  return structured_somp(y_restricted, a, rows, l2, options);
}

StructuredRowEstimate phase2_structured_somp_upa(const ComplexMatrix& y_restricted,
                                                 const ComplexMatrix& a,
                                                 const ArrayGeometry& geometry,
                                                 std::span<const GridShift> offsets, int l2,
                                                 const OmpOptions& options) {
  if (a.cols() != geometry.elements())
    throw DimensionError("phase2: sensing matrix width does not match the RIS plane");
  return structured_somp(y_restricted, a, planar_rows(geometry, offsets), l2, options);
}

EstimateReport mtscs_ce(const EstimatorInput& input) {
  if (input.geometry.is_planar())
    throw InvalidArgument("mtscs_ce: planar RIS geometry needs mtscs_ce_upa");
  return run_mtscs(input, false);
}

EstimateReport mtscs_ce_upa(const EstimatorInput& input) { return run_mtscs(input, true); }

EstimateReport baseline_omp(const EstimatorInput& input) {
  validate(input);
  EstimateReport report = empty_report(input);
  std::vector<int> joined;
  for (std::size_t k = 0; k < input.y.size(); ++k) {
    const RealVector power = input.y[k].colwise().squaredNorm().transpose();
    const IndexSet mine = top_l_indices(power, input.l1);
    per_column_omp(input, static_cast<int>(k), mine, report);
    joined.insert(joined.end(), mine.begin(), mine.end());
  }
  report.col_support = IndexSet::deduplicated(static_cast<int>(input.y.front().cols()), joined);
  return report;
}

EstimateReport baseline_row_structured(const EstimatorInput& input) {
  validate(input);
  EstimateReport report = empty_report(input);
  report.col_support = phase1_column_support(input.y, input.l1);
  for (std::size_t k = 0; k < input.y.size(); ++k)
    per_column_omp(input, static_cast<int>(k), report.col_support, report);
  return report;
}

EstimateReport oracle_ls(const std::vector<ComplexMatrix>& y, const ComplexMatrix& a,
                         const GroundTruth& truth) {
  if (y.size() != truth.channels.size())
    throw DimensionError("oracle_ls: measurement and ground-truth user counts differ");
  EstimateReport report;
  report.col_support = truth.col_support;
  report.offsets = truth.offsets;
  report.row_patterns = truth.row_patterns;
  report.diagnostics.residual_history.resize(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (y[k].rows() != a.rows()) throw DimensionError("oracle_ls: A and Y_k row counts differ");
    ComplexMatrix h = ComplexMatrix::Zero(a.cols(), y[k].cols());
    for (std::size_t l = 0; l < truth.col_support.size(); ++l) {
      const int col = truth.col_support[l];
      const IndexSet rows = truth.row_support(static_cast<int>(k), static_cast<int>(l));
      const ComplexMatrix sub = select_columns(a, rows.indices());
      const auto ls = ls_solve(sub, y[k].col(col));
      report.diagnostics.rank_deficient_solves += ls.rank_deficient ? 1 : 0;
      for (std::size_t i = 0; i < rows.size(); ++i) h(rows[i], col) = ls.x[static_cast<Eigen::Index>(i)];
      report.diagnostics.residual_history[k].push_back(
          {y[k].col(col).norm(), (y[k].col(col) - sub * ls.x).norm()});
    }
    report.channels.push_back(std::move(h));
  }
  return report;
}

}  // namespace tscs
