#pragma once

#include <filesystem>
#include <string_view>

#include "tscs/harness.hpp"

namespace tscs {

// Flat `key = value` text, one entry per line, `#` starts a comment.
//
//   n_bs = 64            BS antennas
//   ris = 128 | 8x16     ULA size or UPA N1xN2
//   users = 16
//   l1 = 4
//   l2_min = 4
//   l2_max = 8
//   pilots = 32
//   snr_db = 0
//   noiseless = false
//   trials = 100
//   seed = 1
//   estimators = oracle_ls,mtscs_ce,baseline_row_structured,baseline_omp
//   threads = 1

/// "128" -> ULA(128), "8x16" -> UPA(8, 16).
ArrayGeometry parse_geometry(std::string_view text);

/// Sets one field. Throws InvalidArgument for unknown keys or malformed values.
void apply_config_value(SystemConfig& config, std::string_view key, std::string_view value);

/// Applies every entry of the file on top of `config`.
void load_config_file(SystemConfig& config, const std::filesystem::path& path);

}  // namespace tscs
