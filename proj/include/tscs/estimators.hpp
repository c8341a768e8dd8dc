#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tscs/channel_model.hpp"
#include "tscs/numerics.hpp"
#include "tscs/sensing.hpp"

namespace tscs {

struct EstimatorInput {
  std::vector<ComplexMatrix> y;  // K measurement matrices, T x N_BS
  ComplexMatrix a;               // T x N_I sensing matrix
  int l1 = 1;                    // RIS-BS path count
  std::vector<int> l2;           // per-user UE-RIS path count
  ArrayGeometry geometry = ArrayGeometry::ula(1);
  /// Optional stopping rule for unknown sparsity: a greedy loop ends once the RMS column
  /// residual norm drops below this value. Path counts then act as caps.
  std::optional<double> residual_tolerance;
};

/// Stopping threshold sigma * sqrt(2T) for a per-entry noise variance sigma^2.
double noise_residual_tolerance(double noise_variance, int pilots);

struct Diagnostics {
  /// Residual norms per user, per retained column, per greedy iteration (entry 0 is ||y||).
  std::vector<std::vector<std::vector<double>>> residual_history;
  int rank_deficient_solves = 0;
  /// Retained-column positions whose offset fell back to zero.
  std::vector<int> offset_fallbacks;
  int duplicate_indices = 0;
  std::vector<std::string> warnings;
};

struct EstimateReport {
  std::vector<ComplexMatrix> channels;  // K matrices N_I x N_BS
  IndexSet col_support;
  std::vector<GridShift> offsets;       // structured estimators only
  std::vector<IndexSet> row_patterns;   // structured estimators only
  Diagnostics diagnostics;
};

struct OmpOptions {
  std::optional<double> residual_tolerance;
};

struct SparseEstimate {
  ComplexVector x;                    // dense length-N_I vector, zero off the support
  std::vector<int> support;           // atoms in selection order
  std::vector<double> residual_norms;
  bool rank_deficient = false;
};

/// Column support shared by all users: the L1 largest entries of diag(sum_k Y_k^H Y_k).
IndexSet phase1_column_support(const std::vector<ComplexMatrix>& y, int l1);

/// Plain OMP on a single measurement vector.
SparseEstimate coarse_omp(const ComplexVector& y, const ComplexMatrix& a, int sparsity,
                          const OmpOptions& options = {});

struct OffsetEstimate {
  std::vector<GridShift> shifts;  // one per retained column; shifts[0] == {0, 0}
  std::vector<int> undetermined;  // columns whose summed correlation vanished (shift set to 0)
};

/// Common offsets from coarse per-user estimates (each N_I x L1, columns in retained order),
/// using the user-summed 1-D circular correlation against the first column.
OffsetEstimate phase3_joint_offsets(const std::vector<ComplexMatrix>& coarse);

/// UPA variant: columns are reshaped to N1 x N2 planes and correlated in 2-D.
OffsetEstimate phase3_joint_offsets_upa(const std::vector<ComplexMatrix>& coarse,
                                        const ArrayGeometry& geometry);

struct StructuredRowEstimate {
  IndexSet pattern;                    // P_k, ascending
  std::vector<int> anchors;            // P_k in selection order
  ComplexMatrix coefficients;          // N_I x L1
  std::vector<IndexSet> grouped;       // Xi_{k,l1}
  std::vector<std::vector<double>> residual_history;  // [column][iteration]
  int rank_deficient_solves = 0;
  int duplicate_indices = 0;
};

/// Offset-structured simultaneous OMP for one user. `y_restricted` holds the retained
/// columns (T x L1); column l is searched at rows {p + offsets[l]} mod N_I.
StructuredRowEstimate phase2_structured_somp(const ComplexMatrix& y_restricted,
                                             const ComplexMatrix& a, std::span<const int> offsets,
                                             int l2, const OmpOptions& options = {});

/// UPA variant: anchors range over the N1 x N2 plane, shifts wrap per axis.
StructuredRowEstimate phase2_structured_somp_upa(const ComplexMatrix& y_restricted,
                                                 const ComplexMatrix& a,
                                                 const ArrayGeometry& geometry,
                                                 std::span<const GridShift> offsets, int l2,
                                                 const OmpOptions& options = {});

/// Three-phase multi-user estimator for a ULA RIS: column support (1), offsets (3),
/// structured rows (2), in that order.
EstimateReport mtscs_ce(const EstimatorInput& input);

/// Same pipeline with 2-D offsets for a UPA RIS.
EstimateReport mtscs_ce_upa(const EstimatorInput& input);

/// Per user: power-based column pruning, then independent OMP per retained column.
EstimateReport baseline_omp(const EstimatorInput& input);

/// Joint column support, then independent OMP per retained column.
EstimateReport baseline_row_structured(const EstimatorInput& input);

/// Least squares on the true supports.
EstimateReport oracle_ls(const std::vector<ComplexMatrix>& y, const ComplexMatrix& a,
                         const GroundTruth& truth);

}  // namespace tscs
