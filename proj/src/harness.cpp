#include "tscs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "tscs/errors.hpp"

namespace tscs {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_axis(SweepAxis axis, double v) {
  if (axis == SweepAxis::PilotLength) return std::to_string(static_cast<long long>(std::llround(v)));
  return format_double(v);
}

double parse_double(const std::string& field, const std::filesystem::path& path) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != field.size() || field.empty())
    throw IoError(path.string() + ": malformed number '" + field + "'");
  return v;
}

}  // namespace

std::string_view to_string(Estimator e) noexcept {
  switch (e) {
    case Estimator::OracleLs: return "oracle_ls";
    case Estimator::MtscsCe: return "mtscs_ce";
    case Estimator::RowStructured: return "baseline_row_structured";
    case Estimator::Omp: return "baseline_omp";
  }
  return "unknown";
}

Estimator parse_estimator(std::string_view name) {
  for (Estimator e : all_estimators())
    if (to_string(e) == name) return e;
  throw InvalidArgument("unknown estimator '" + std::string(name) + "'");
}

std::vector<Estimator> parse_estimator_list(std::string_view names) {
  std::vector<Estimator> out;
  std::size_t start = 0;
  while (start <= names.size() && !names.empty()) {
    const auto comma = names.find(',', start);
    const auto token = names.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                          : comma - start);
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    if (first == std::string_view::npos) throw InvalidArgument("empty entry in estimator list");
    out.push_back(parse_estimator(token.substr(first, last - first + 1)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<Estimator> all_estimators() {
  return {Estimator::OracleLs, Estimator::MtscsCe, Estimator::RowStructured, Estimator::Omp};
}

bool SystemConfig::noiseless() const noexcept { return std::isinf(snr_db) && snr_db > 0; }

void SystemConfig::validate() const {
  const auto& s = scenario;
  const int n_ris = s.geometry.elements();
  if (s.n_bs < 1) throw InvalidArgument("n_bs must be positive");
  if (s.users < 1) throw InvalidArgument("users must be positive");
  if (s.l1 < 1 || s.l1 > s.n_bs || s.l1 > n_ris)
    throw InvalidArgument("l1 must lie in [1, min(n_bs, N_I)]");
  if (s.l2_min < 1 || s.l2_max < s.l2_min)
    throw InvalidArgument("l2 range must be a nonempty interval of positive integers");
  if (s.l2_max > n_ris) throw InvalidArgument("l2_max exceeds the number of RIS elements");
  if (pilots < 1) throw InvalidArgument("pilots must be positive");
  if (std::isnan(snr_db) || (std::isinf(snr_db) && snr_db < 0))
    throw InvalidArgument("snr_db must be finite or +inf (noiseless)");
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  if (threads < 1) throw InvalidArgument("threads must be at least 1");
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t axis_index, std::uint64_t trial_index) {
  return splitmix64(splitmix64(splitmix64(base_seed) ^ axis_index) ^ trial_index);
}

double nmse_linear(const std::vector<ComplexMatrix>& estimate, const std::vector<ComplexMatrix>& truth) {
  if (estimate.size() != truth.size()) throw DimensionError("nmse: user counts differ");
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    if (estimate[k].rows() != truth[k].rows() || estimate[k].cols() != truth[k].cols())
      throw DimensionError("nmse: channel shapes differ");
    err += (estimate[k] - truth[k]).squaredNorm();
    ref += truth[k].squaredNorm();
  }
  if (ref == 0.0) throw MetricUndefined("nmse: true channels are all zero");
  return err / ref;
}

double to_db(double linear) noexcept {
  if (!(linear > 0.0)) return kNmseFloorDb;
  return std::max(kNmseFloorDb, 10.0 * std::log10(linear));
}

double nmse(const std::vector<ComplexMatrix>& estimate, const std::vector<ComplexMatrix>& truth) {
  return to_db(nmse_linear(estimate, truth));
}

TrialData generate_trial_data(const SystemConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  TrialData d;
  d.realization = generate_channels(config.scenario, rng);
  d.setup = make_sensing_setup(config.scenario.geometry, config.scenario.n_bs, config.pilots, rng);
  d.truth = extract_ground_truth(d.realization, d.setup);
  d.measurements = simulate_measurements(d.truth, d.setup, config.snr_db, rng);
  return d;
}

EstimateReport run_estimator(Estimator estimator, const TrialData& data, const SystemConfig& config) {
  if (estimator == Estimator::OracleLs)
    return oracle_ls(data.measurements.y, data.setup.a, data.truth);
  EstimatorInput in;
  in.y = data.measurements.y;
  in.a = data.setup.a;
  in.l1 = config.scenario.l1;
  for (const auto& paths : data.realization.h_paths) in.l2.push_back(static_cast<int>(paths.size()));
  in.geometry = config.scenario.geometry;
  switch (estimator) {
    case Estimator::MtscsCe:
      return in.geometry.is_planar() ? mtscs_ce_upa(in) : mtscs_ce(in);
    case Estimator::RowStructured: return baseline_row_structured(in);
    case Estimator::Omp: return baseline_omp(in);
    case Estimator::OracleLs: break;
  }
  throw InvalidArgument("run_estimator: unhandled estimator");
}

TrialRecord run_trial(const SystemConfig& config, std::uint64_t trial_index, std::uint64_t axis_index) {
  TrialRecord record;
  record.seed = derive_seed(config.base_seed, axis_index, trial_index);
  std::optional<TrialData> data;
  std::string setup_error;
  try {
    data = generate_trial_data(config, record.seed);
  } catch (const std::exception& e) {
    setup_error = std::string("trial setup failed: ") + e.what();
  }
  for (Estimator e : config.estimators) {
    EstimatorOutcome out;
    out.estimator = e;
    if (!data) {
      out.error = setup_error;
    } else {
      try {
        auto report = run_estimator(e, *data, config);
        out.nmse_linear = nmse_linear(report.channels, data->truth.channels);
        out.nmse_db = to_db(*out.nmse_linear);
        out.diagnostics = std::move(report.diagnostics);
      } catch (const std::exception& ex) {
        out.error = ex.what();
      }
    }
    record.outcomes.push_back(std::move(out));
  }
  return record;
}

std::string_view to_string(SweepAxis axis) noexcept {
  return axis == SweepAxis::PilotLength ? "pilot_length" : "snr_db";
}

bool SweepResult::all_failed() const noexcept {
  bool any = false;
  for (const auto& row : cells)
    for (const auto& cell : row) {
      any = true;
      if (!cell.failed()) return false;
    }
  return any;
}

std::vector<SweepCell> aggregate(const std::vector<TrialRecord>& records, std::size_t estimators) {
  std::vector<SweepCell> cells(estimators);
  for (std::size_t e = 0; e < estimators; ++e) {
    std::vector<double> values;
    for (const auto& r : records) {
      const auto& o = r.outcomes.at(e);
      if (o.ok())
        values.push_back(*o.nmse_linear);
      else
        ++cells[e].failures;
    }
    auto& cell = cells[e];
    cell.trials = static_cast<int>(values.size());
    if (cell.failed() || values.empty()) {
      cell.mean_nmse_db = std::nan("");
      cell.stderr_db = std::nan("");
      continue;
    }
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var = values.size() > 1 ? var / (n - 1.0) : 0.0;
    cell.mean_nmse_db = to_db(mean);
    // below the floor the dB mean is pinned, so its spread is reported as zero
    cell.stderr_db = cell.mean_nmse_db > kNmseFloorDb
                         ? 10.0 / std::log(10.0) * std::sqrt(var / n) / mean
                         : 0.0;
  }
  return cells;
}

SweepResult run_sweep(const SystemConfig& config, SweepAxis axis, std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("run_sweep: no axis values");
  config.validate();
  std::sort(values.begin(), values.end());

  SweepResult result;
  result.axis = axis;
  result.values = values;
  result.estimators = config.estimators;

  for (std::size_t i = 0; i < values.size(); ++i) {
    SystemConfig point = config;
    if (axis == SweepAxis::PilotLength) {
      if (values[i] < 1 || values[i] != std::floor(values[i]))
        throw InvalidArgument("run_sweep: pilot lengths must be positive integers");
      point.pilots = static_cast<int>(values[i]);
    } else {
      point.snr_db = values[i];
    }
    point.validate();

    std::vector<TrialRecord> records(point.trials);
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int t = next++; t < point.trials; t = next++)
        records[t] = run_trial(point, static_cast<std::uint64_t>(t), i);
    };
    const int workers = std::min(point.threads, point.trials);
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    result.cells.push_back(aggregate(records, config.estimators.size()));
  }
  return result;
}

std::string format_results(const SweepResult& result) {
  std::ostringstream os;
  os << "axis,estimator,nmse_db,stderr_db,trials\n";
  for (std::size_t i = 0; i < result.values.size(); ++i) {
    for (std::size_t e = 0; e < result.estimators.size(); ++e) {
      const auto& cell = result.cells.at(i).at(e);
      os << format_axis(result.axis, result.values[i]) << ',' << to_string(result.estimators[e]) << ',';
      if (cell.failed())
        os << "error,error,";
      else
        os << format_double(cell.mean_nmse_db) << ',' << format_double(cell.stderr_db) << ',';
      os << cell.trials << '\n';
    }
  }
  return os.str();
}

void emit_results(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << format_results(result);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != "axis,estimator,nmse_db,stderr_db,trials")
    throw IoError(path.string() + ": missing or unexpected header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string field; std::getline(ss, field, ',');) f.push_back(field);
    if (f.size() != 5) throw IoError(path.string() + ": expected 5 fields in '" + line + "'");
    ResultRow row;
    row.axis = parse_double(f[0], path);
    row.estimator = f[1];
    if (f[2] != "error") row.nmse_db = parse_double(f[2], path);
    if (f[3] != "error") row.stderr_db = parse_double(f[3], path);
    row.trials = static_cast<int>(parse_double(f[4], path));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace tscs
