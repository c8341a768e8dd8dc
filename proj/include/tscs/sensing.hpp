#pragma once

#include <limits>
#include <vector>

#include "tscs/channel_model.hpp"
#include "tscs/numerics.hpp"

namespace tscs {

/// Pilot-side matrices shared by all users of one trial. Immutable once built.
struct SensingSetup {
  ArrayGeometry geometry = ArrayGeometry::ula(1);
  ComplexMatrix phi;    // N_I x T, unit-modulus RIS phase schedule
  ComplexMatrix f_bs;   // N_BS x N_BS
  ComplexMatrix f_ris;  // N_I x N_I (F_N1 ⊗ F_N2 for a UPA)
  ComplexMatrix a;      // T x N_I, Phi^H F_ris^H

  int pilots() const noexcept { return static_cast<int>(phi.cols()); }
};

/// N_I x T matrix of exp(j phi), phi ~ U[0, 2 pi).
ComplexMatrix generate_phase_schedule(int n_ris, int pilots, Rng& rng);

/// Beamspace DFT for the RIS side: F_N for a ULA, F_N1 ⊗ F_N2 for a UPA.
ComplexMatrix ris_dft(const ArrayGeometry& geometry);

SensingSetup make_sensing_setup(const ArrayGeometry& geometry, int n_bs, int pilots, Rng& rng);

/// H_k = F_ris (G diag(h_k))^H F_bs^H, an N_I x N_BS matrix.
ComplexMatrix beamspace_cascaded(const ComplexMatrix& g, const ComplexVector& h,
                                 const SensingSetup& setup);

/// Ground-truth beamspace channels and their triple sparsity structure.
struct GroundTruth {
  ArrayGeometry geometry = ArrayGeometry::ula(1);
  std::vector<ComplexMatrix> channels;   // K matrices N_I x N_BS
  IndexSet col_support;                  // shared nonzero columns, ascending
  std::vector<IndexSet> row_patterns;    // S_k: row support of col_support[0]
  std::vector<GridShift> offsets;        // per nonzero column, offsets[0] == {0, 0}

  /// Row support of the l-th nonzero column of user k: S_k shifted by offsets[l].
  IndexSet row_support(int user, int column) const;
};

/// Applies a 2-D grid shift (per-axis wrap) to a set of flat RIS indices.
IndexSet shift_support(const IndexSet& support, const ArrayGeometry& geometry, GridShift shift);

inline constexpr double kSupportThreshold = 1e-9;

/// Builds H_k for every user, reads the supports and derives S_k and the common offsets.
/// Throws ConsistencyError if any of the column / offset-row / common-offset structures
/// fails to hold.
GroundTruth extract_ground_truth(const ChannelRealization& realization, const SensingSetup& setup);

struct MeasurementSet {
  std::vector<ComplexMatrix> y;  // K matrices T x N_BS
  double noise_variance = 0.0;   // per complex entry
};

inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

/// Y_k = A H_k + W_k. The noise variance makes mean_k ||A H_k||_F^2 / (T N_BS sigma^2)
/// equal to the requested SNR; snr_db = +inf gives W = 0.
MeasurementSet simulate_measurements(const GroundTruth& truth, const SensingSetup& setup,
                                     double snr_db, Rng& rng);

}  // namespace tscs
