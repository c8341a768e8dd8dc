#include "tscs/channel_model.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "tscs/errors.hpp"

namespace tscs {

namespace {

void check_grid(int n, int grid_index, const char* what) {
  if (n < 1) throw InvalidArgument(std::string(what) + ": array size must be positive");
  if (grid_index < 0 || grid_index >= n)
    throw InvalidArgument(std::string(what) + ": grid index " + std::to_string(grid_index) +
                          " outside [0, " + std::to_string(n) + ")");
}

// First `count` entries of a partial Fisher-Yates shuffle of 0..n-1.
std::vector<int> sample_without_replacement(int n, int count, Rng& rng) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(count);
  return pool;
}

Complex standard_complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

GridPoint unflatten(const ArrayGeometry& geometry, int flat) {
  return {flat / geometry.n2(), flat % geometry.n2()};
}

}  // namespace

ArrayGeometry ArrayGeometry::ula(int n) {
  if (n < 1) throw InvalidArgument("ULA size must be positive");
  return {Kind::Ula, n, 1};
}

ArrayGeometry ArrayGeometry::upa(int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw InvalidArgument("UPA dimensions must be positive");
  return {Kind::Upa, n1, n2};
}

std::string ArrayGeometry::describe() const {
  if (kind_ == Kind::Ula) return "ULA(" + std::to_string(n1_) + ")";
  return "UPA(" + std::to_string(n1_) + "x" + std::to_string(n2_) + ")";
}

double grid_spatial_frequency(int n, int grid_index) {
  check_grid(n, grid_index, "grid_spatial_frequency");
  return 2.0 * static_cast<double>(grid_index - n / 2) / n;
}

int grid_beam_index(int n, int grid_index) {
  check_grid(n, grid_index, "grid_beam_index");
  return wrap_index(grid_index - n / 2, n);
}

ComplexVector ula_response(int n, double psi) {
  if (n < 1) throw InvalidArgument("ula_response: array size must be positive");
  ComplexVector a(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) a[i] = std::polar(scale, std::numbers::pi * i * psi);
  return a;
}

ComplexVector steering_ula(int n, int grid_index) {
  check_grid(n, grid_index, "steering_ula");
  // exact phases: pi * i * psi = 2 pi * i * (m - floor(N/2)) / N, reduced mod N first
  const int q = grid_index - n / 2;
  ComplexVector a(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    const int r = wrap_index(static_cast<long long>(i) * q, n);
    a[i] = std::polar(scale, 2.0 * std::numbers::pi * r / n);
  }
  return a;
}

ComplexVector steering_upa(int n1, int n2, int grid_az, int grid_el) {
  check_grid(n1, grid_az, "steering_upa");
  check_grid(n2, grid_el, "steering_upa");
  return kron(steering_ula(n1, grid_az), steering_ula(n2, grid_el));
}

ComplexVector steering(const ArrayGeometry& geometry, GridPoint point) {
  if (!geometry.is_planar()) {
    if (point.axis2 != 0) throw InvalidArgument("steering: ULA grid point has a second axis");
    return steering_ula(geometry.n1(), point.axis1);
  }
  return steering_upa(geometry.n1(), geometry.n2(), point.axis1, point.axis2);
}

ChannelRealization generate_channels(const ChannelScenario& s, Rng& rng) {
  const int n_ris = s.geometry.elements();
  if (s.n_bs < 1 || s.users < 1) throw InvalidArgument("generate_channels: N_BS and K must be positive");
  if (s.l1 < 1 || s.l1 > s.n_bs || s.l1 > n_ris)
    throw InvalidArgument("generate_channels: L1=" + std::to_string(s.l1) +
                          " must lie in [1, min(N_BS, N_I)]");
  if (s.l2_min < 1 || s.l2_max < s.l2_min || s.l2_max > n_ris)
    throw InvalidArgument("generate_channels: L2 range must lie in [1, N_I]");

  ChannelRealization out;
  out.geometry = s.geometry;

  const auto bs_aoa = sample_without_replacement(s.n_bs, s.l1, rng);
  const auto ris_aod = sample_without_replacement(n_ris, s.l1, rng);
  out.g = ComplexMatrix::Zero(s.n_bs, n_ris);
  for (int l = 0; l < s.l1; ++l) {
    RisBsPath path{bs_aoa[l], unflatten(s.geometry, ris_aod[l]), standard_complex_gaussian(rng)};
    out.g.noalias() += path.gain * steering_ula(s.n_bs, path.bs_aoa) *
                       steering(s.geometry, path.ris_aod).adjoint();
    out.g_paths.push_back(path);
  }

  std::uniform_int_distribution<int> path_count(s.l2_min, s.l2_max);
  out.h.reserve(s.users);
  out.h_paths.reserve(s.users);
  for (int k = 0; k < s.users; ++k) {
    const int l2 = path_count(rng);
    const auto aoa = sample_without_replacement(n_ris, l2, rng);
    ComplexVector h = ComplexVector::Zero(n_ris);
    std::vector<UeRisPath> paths;
    for (int l = 0; l < l2; ++l) {
      UeRisPath path{unflatten(s.geometry, aoa[l]), standard_complex_gaussian(rng)};
      h += path.gain * steering(s.geometry, path.ris_aoa);
      paths.push_back(path);
    }
    out.h.push_back(std::move(h));
    out.h_paths.push_back(std::move(paths));
  }
  return out;
}

ComplexMatrix cascade_spatial(const ComplexMatrix& g, const ComplexVector& h) {
  if (g.cols() != h.size())
    throw DimensionError("cascade_spatial: G has " + std::to_string(g.cols()) +
                         " columns but h has " + std::to_string(h.size()) + " entries");
  return g * h.asDiagonal();
}

}  // namespace tscs
