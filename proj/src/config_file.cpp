#include "tscs/config_file.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <string>

#include "tscs/errors.hpp"

namespace tscs {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw InvalidArgument("'" + std::string(key) + "': expected an integer, got '" + std::string(value) + "'");
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  const std::string s(value);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw InvalidArgument("'" + std::string(key) + "': expected a number, got '" + s + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InvalidArgument("'" + std::string(key) + "': expected true/false, got '" + std::string(value) + "'");
}

}  // namespace

ArrayGeometry parse_geometry(std::string_view text) {
  text = trim(text);
  const auto x = text.find_first_of("xX");
  if (x == std::string_view::npos) return ArrayGeometry::ula(parse_integer<int>("ris", text));
  return ArrayGeometry::upa(parse_integer<int>("ris", trim(text.substr(0, x))),
                            parse_integer<int>("ris", trim(text.substr(x + 1))));
}

void apply_config_value(SystemConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  auto& s = c.scenario;
  if (key == "n_bs") s.n_bs = parse_integer<int>(key, value);
  else if (key == "ris") s.geometry = parse_geometry(value);
  else if (key == "users") s.users = parse_integer<int>(key, value);
  else if (key == "l1") s.l1 = parse_integer<int>(key, value);
  else if (key == "l2_min") s.l2_min = parse_integer<int>(key, value);
  else if (key == "l2_max") s.l2_max = parse_integer<int>(key, value);
  else if (key == "pilots") c.pilots = parse_integer<int>(key, value);
  else if (key == "snr_db") c.snr_db = parse_real(key, value);
  else if (key == "noiseless") {
    if (parse_bool(key, value)) c.snr_db = std::numeric_limits<double>::infinity();
  }
  else if (key == "trials") c.trials = parse_integer<int>(key, value);
  else if (key == "seed") c.base_seed = parse_integer<std::uint64_t>(key, value);
  else if (key == "estimators") c.estimators = parse_estimator_list(value);
  else if (key == "threads") c.threads = parse_integer<int>(key, value);
  else throw InvalidArgument("unknown configuration key '" + std::string(key) + "'");
}

void load_config_file(SystemConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw InvalidArgument(path.string() + ":" + std::to_string(number) + ": expected key = value");
    try {
      apply_config_value(config, view.substr(0, eq), view.substr(eq + 1));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

}  // namespace tscs
