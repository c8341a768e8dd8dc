#pragma once

#include <random>
#include <string>
#include <vector>

#include "tscs/numerics.hpp"

namespace tscs {

using Rng = std::mt19937_64;

/// RIS array layout. Element spacing is half a wavelength on every axis.
/// A ULA of N elements is stored as the degenerate plane N x 1.
class ArrayGeometry {
 public:
  enum class Kind { Ula, Upa };

  static ArrayGeometry ula(int n);
  static ArrayGeometry upa(int n1, int n2);

  Kind kind() const noexcept { return kind_; }
  bool is_planar() const noexcept { return kind_ == Kind::Upa; }
  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  int elements() const noexcept { return n1_ * n2_; }

  /// Flat (Kronecker) index of the grid point (i1, i2).
  int flat(int i1, int i2) const noexcept { return i1 * n2_ + i2; }

  std::string describe() const;

  friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;

 private:
  ArrayGeometry(Kind kind, int n1, int n2) : kind_(kind), n1_(n1), n2_(n2) {}
  Kind kind_ = Kind::Ula;
  int n1_ = 1;
  int n2_ = 1;
};

/// A point on the quantized angle grid (second axis is 0 for a ULA).
struct GridPoint {
  int axis1 = 0;
  int axis2 = 0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Circular shift between two beamspace supports, one component per RIS axis.
struct GridShift {
  int axis1 = 0;
  int axis2 = 0;
  friend bool operator==(const GridShift&, const GridShift&) = default;
};

/// Normalized spatial frequency psi = sin(theta) of grid point m on an N-element axis.
/// The grid is {2 (m - floor(N/2)) / N}, i.e. {2m/N - 1} for even N; every point lands
/// on a single DFT beam.
double grid_spatial_frequency(int n, int grid_index);

/// DFT beam that grid point m maps to: (m - floor(N/2)) mod N.
int grid_beam_index(int n, int grid_index);

/// Half-wavelength ULA response (1/sqrt N) [1, e^{j pi psi}, ..., e^{j pi (N-1) psi}].
ComplexVector ula_response(int n, double psi);

ComplexVector steering_ula(int n, int grid_index);

/// a_{N1}(az) ⊗ a_{N2}(el).
ComplexVector steering_upa(int n1, int n2, int grid_az, int grid_el);

ComplexVector steering(const ArrayGeometry& geometry, GridPoint point);

struct RisBsPath {
  int bs_aoa = 0;       // BS-side grid index
  GridPoint ris_aod;    // RIS-side grid point
  Complex gain;
};

struct UeRisPath {
  GridPoint ris_aoa;
  Complex gain;
};

struct ChannelScenario {
  int n_bs = 64;
  ArrayGeometry geometry = ArrayGeometry::ula(128);
  int users = 16;
  int l1 = 4;
  int l2_min = 4;
  int l2_max = 8;
};

struct ChannelRealization {
  ArrayGeometry geometry = ArrayGeometry::ula(1);
  ComplexMatrix g;                          // N_BS x N_I
  std::vector<ComplexVector> h;             // K vectors of length N_I
  std::vector<RisBsPath> g_paths;
  std::vector<std::vector<UeRisPath>> h_paths;
};

/// Draws one on-grid Saleh-Valenzuela realization. All grid indices within a draw are
/// sampled without replacement so sparsity levels are exact; gains are CN(0, 1).
ChannelRealization generate_channels(const ChannelScenario& scenario, Rng& rng);

/// G · diag(h_k).
ComplexMatrix cascade_spatial(const ComplexMatrix& g, const ComplexVector& h);

}  // namespace tscs
