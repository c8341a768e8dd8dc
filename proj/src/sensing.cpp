#include "tscs/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tscs/errors.hpp"

namespace tscs {

namespace {

IndexSet nonzero_rows(const ComplexMatrix& h, Eigen::Index col) {
  std::vector<int> rows;
  for (Eigen::Index r = 0; r < h.rows(); ++r)
    if (std::abs(h(r, col)) > kSupportThreshold) rows.push_back(static_cast<int>(r));
  return IndexSet(static_cast<int>(h.rows()), std::move(rows));
}

IndexSet nonzero_columns(const ComplexMatrix& h) {
  std::vector<int> cols;
  for (Eigen::Index c = 0; c < h.cols(); ++c)
    if (h.col(c).cwiseAbs().maxCoeff() > kSupportThreshold) cols.push_back(static_cast<int>(c));
  return IndexSet(static_cast<int>(h.cols()), std::move(cols));
}

GridShift canonical(const ArrayGeometry& geo, int d1, int d2) {
  return {signed_offset(wrap_index(d1, geo.n1()), geo.n1()),
          signed_offset(wrap_index(d2, geo.n2()), geo.n2())};
}

// Every shift that maps `pattern` exactly onto `target`.
std::vector<GridShift> matching_shifts(const IndexSet& pattern, const IndexSet& target,
                                       const ArrayGeometry& geo) {
  std::vector<GridShift> out;
  if (pattern.size() != target.size() || pattern.empty()) return out;
  const int t0 = target[0];
  for (int s : pattern) {
    const GridShift shift =
        canonical(geo, t0 / geo.n2() - s / geo.n2(), t0 % geo.n2() - s % geo.n2());
    if (shift_support(pattern, geo, shift) == target) out.push_back(shift);
  }
  return out;
}

}  // namespace

ComplexMatrix generate_phase_schedule(int n_ris, int pilots, Rng& rng) {
  if (n_ris < 1 || pilots < 1)
    throw InvalidArgument("generate_phase_schedule: N_I and T must be positive");
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  ComplexMatrix phi(n_ris, pilots);
  for (Eigen::Index t = 0; t < phi.cols(); ++t)
    for (Eigen::Index i = 0; i < phi.rows(); ++i) phi(i, t) = std::polar(1.0, angle(rng));
  return phi;
}

ComplexMatrix ris_dft(const ArrayGeometry& geometry) {
  if (!geometry.is_planar()) return dft_matrix(geometry.n1());
  return kron(dft_matrix(geometry.n1()), dft_matrix(geometry.n2()));
}

SensingSetup make_sensing_setup(const ArrayGeometry& geometry, int n_bs, int pilots, Rng& rng) {
  if (n_bs < 1) throw InvalidArgument("make_sensing_setup: N_BS must be positive");
  SensingSetup s;
  s.geometry = geometry;
  s.phi = generate_phase_schedule(geometry.elements(), pilots, rng);
  s.f_bs = dft_matrix(n_bs);
  s.f_ris = ris_dft(geometry);
  s.a = s.phi.adjoint() * s.f_ris.adjoint();
  return s;
}

ComplexMatrix beamspace_cascaded(const ComplexMatrix& g, const ComplexVector& h,
                                 const SensingSetup& setup) {
  if (g.cols() != h.size() || g.cols() != setup.f_ris.rows() || g.rows() != setup.f_bs.rows())
    throw DimensionError("beamspace_cascaded: G, h_k and the DFT matrices disagree in size");
  const ComplexMatrix spatial_h = h.conjugate().asDiagonal() * g.adjoint();  // (G diag h)^H
  return setup.f_ris * spatial_h * setup.f_bs.adjoint();
}

IndexSet shift_support(const IndexSet& support, const ArrayGeometry& geometry, GridShift shift) {
  std::vector<int> out;
  out.reserve(support.size());
  for (int idx : support) {
    const int i1 = wrap_index(idx / geometry.n2() + shift.axis1, geometry.n1());
    const int i2 = wrap_index(idx % geometry.n2() + shift.axis2, geometry.n2());
    out.push_back(geometry.flat(i1, i2));
  }
  return IndexSet(support.period(), std::move(out));
}

IndexSet GroundTruth::row_support(int user, int column) const {
  return shift_support(row_patterns.at(user), geometry, offsets.at(column));
}

GroundTruth extract_ground_truth(const ChannelRealization& realization, const SensingSetup& setup) {
  GroundTruth truth;
  truth.geometry = realization.geometry;
  const auto users = realization.h.size();
  if (users == 0) throw InvalidArgument("extract_ground_truth: realization has no users");

  for (const auto& h : realization.h)
    truth.channels.push_back(beamspace_cascaded(realization.g, h, setup));

  // common column support
  truth.col_support = nonzero_columns(truth.channels[0]);
  for (std::size_t k = 1; k < users; ++k)
    if (!(nonzero_columns(truth.channels[k]) == truth.col_support))
      throw ConsistencyError("extract_ground_truth: users disagree on the nonzero columns");
  if (truth.col_support.size() != realization.g_paths.size())
    throw ConsistencyError("extract_ground_truth: " + std::to_string(truth.col_support.size()) +
                           " nonzero columns for " + std::to_string(realization.g_paths.size()) +
                           " RIS-BS paths");

  const std::size_t l1 = truth.col_support.size();
  std::vector<std::vector<IndexSet>> rows(users);
  for (std::size_t k = 0; k < users; ++k) {
    for (std::size_t l = 0; l < l1; ++l)
      rows[k].push_back(nonzero_rows(truth.channels[k], truth.col_support[l]));
    truth.row_patterns.push_back(rows[k][0]);
  }

  // offsets: shifts valid for every user; user 0's candidate order decides ties
  truth.offsets.push_back({0, 0});
  for (std::size_t l = 1; l < l1; ++l) {
    auto common = matching_shifts(rows[0][0], rows[0][l], truth.geometry);
    for (std::size_t k = 1; k < users && !common.empty(); ++k) {
      const auto mine = matching_shifts(rows[k][0], rows[k][l], truth.geometry);
      std::erase_if(common, [&](const GridShift& s) {
        return std::find(mine.begin(), mine.end(), s) == mine.end();
      });
    }
    if (common.empty())
      throw ConsistencyError("extract_ground_truth: no offset common to all users for nonzero column " +
                             std::to_string(l));
    truth.offsets.push_back(common.front());
  }
  return truth;
}

MeasurementSet simulate_measurements(const GroundTruth& truth, const SensingSetup& setup,
                                     double snr_db, Rng& rng) {
  MeasurementSet out;
  const auto pilots = setup.a.rows();
  double signal = 0.0;
  for (const auto& h : truth.channels) {
    if (h.rows() != setup.a.cols()) throw DimensionError("simulate_measurements: A and H_k disagree");
    out.y.push_back(setup.a * h);
    signal += out.y.back().squaredNorm();
  }
  if (out.y.empty() || (std::isinf(snr_db) && snr_db > 0)) return out;

  const double entries = static_cast<double>(pilots) * static_cast<double>(out.y.front().cols());
  double per_entry = signal / (static_cast<double>(out.y.size()) * entries);
  if (per_entry == 0.0) per_entry = 1.0;  // no signal: SNR is taken against unit power
  out.noise_variance = per_entry / std::pow(10.0, snr_db / 10.0);

  std::normal_distribution<double> normal(0.0, std::sqrt(out.noise_variance / 2.0));
  for (auto& y : out.y)
    for (Eigen::Index c = 0; c < y.cols(); ++c)
      for (Eigen::Index r = 0; r < y.rows(); ++r) {
        const double re = normal(rng);
        const double im = normal(rng);
        y(r, c) += Complex(re, im);
      }
  return out;
}

}  // namespace tscs
