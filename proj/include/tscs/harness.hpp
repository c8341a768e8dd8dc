#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tscs/channel_model.hpp"
#include "tscs/estimators.hpp"
#include "tscs/sensing.hpp"

namespace tscs {

enum class Estimator { OracleLs, MtscsCe, RowStructured, Omp };

std::string_view to_string(Estimator e) noexcept;
/// Accepts the names produced by to_string; throws InvalidArgument otherwise.
Estimator parse_estimator(std::string_view name);
/// Comma-separated list; an empty string gives an empty list.
std::vector<Estimator> parse_estimator_list(std::string_view names);
std::vector<Estimator> all_estimators();

struct SystemConfig {
  ChannelScenario scenario;
  int pilots = 32;
  double snr_db = 0.0;  // kNoiseless disables noise
  int trials = 100;
  std::uint64_t base_seed = 1;
  std::vector<Estimator> estimators = all_estimators();
  int threads = 1;

  bool noiseless() const noexcept;
  /// Throws InvalidArgument with a readable message on the first bad field.
  void validate() const;
};

/// Seed of one trial, mixed from (base seed, axis point, trial) independently of the
/// order trials execute in.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t axis_index, std::uint64_t trial_index);

inline constexpr double kNmseFloorDb = -300.0;

/// sum_k ||H_hat_k - H_k||_F^2 / sum_k ||H_k||_F^2 (linear).
double nmse_linear(const std::vector<ComplexMatrix>& estimate, const std::vector<ComplexMatrix>& truth);
/// nmse_linear in dB, clamped at kNmseFloorDb.
double nmse(const std::vector<ComplexMatrix>& estimate, const std::vector<ComplexMatrix>& truth);
double to_db(double linear) noexcept;

struct EstimatorOutcome {
  Estimator estimator = Estimator::MtscsCe;
  std::optional<double> nmse_linear;  // empty when the estimator failed
  double nmse_db = 0.0;
  std::string error;
  Diagnostics diagnostics;
  bool ok() const noexcept { return nmse_linear.has_value(); }
};

struct TrialRecord {
  std::uint64_t seed = 0;
  std::vector<EstimatorOutcome> outcomes;  // in configured estimator order
};

/// Everything a trial draws before estimation. Exposed for tests and bindings.
struct TrialData {
  ChannelRealization realization;
  SensingSetup setup;
  GroundTruth truth;
  MeasurementSet measurements;
};

TrialData generate_trial_data(const SystemConfig& config, std::uint64_t seed);

/// Runs one estimator on prepared data. Throws whatever the estimator throws.
EstimateReport run_estimator(Estimator estimator, const TrialData& data, const SystemConfig& config);

TrialRecord run_trial(const SystemConfig& config, std::uint64_t trial_index, std::uint64_t axis_index = 0);

enum class SweepAxis { PilotLength, Snr };
std::string_view to_string(SweepAxis axis) noexcept;

struct SweepCell {
  double mean_nmse_db = 0.0;  // linear mean converted to dB
  double stderr_db = 0.0;     // delta-method standard error of the dB mean
  int trials = 0;             // completed trials
  int failures = 0;
  bool failed() const noexcept { return failures > 0; }
};

struct SweepResult {
  SweepAxis axis = SweepAxis::PilotLength;
  std::vector<double> values;                  // ascending
  std::vector<Estimator> estimators;
  std::vector<std::vector<SweepCell>> cells;   // [axis point][estimator]

  bool all_failed() const noexcept;
};

/// Aggregates a set of trial records into one cell per estimator.
std::vector<SweepCell> aggregate(const std::vector<TrialRecord>& records, std::size_t estimators);

SweepResult run_sweep(const SystemConfig& config, SweepAxis axis, std::vector<double> values);

/// CSV with header `axis,estimator,nmse_db,stderr_db,trials`. Failed cells carry the
/// literal `error` in both numeric columns. Throws IoError naming the path.
void emit_results(const SweepResult& result, const std::filesystem::path& path);
std::string format_results(const SweepResult& result);

struct ResultRow {
  double axis = 0.0;
  std::string estimator;
  std::optional<double> nmse_db;
  std::optional<double> stderr_db;
  int trials = 0;
};

std::vector<ResultRow> read_results(const std::filesystem::path& path);

}  // namespace tscs
