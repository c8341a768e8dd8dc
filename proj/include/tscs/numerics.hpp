#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tscs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Ascending, duplicate-free set of indices in [0, period).
class IndexSet {
 public:
  IndexSet() = default;
  /// Throws InvalidArgument on duplicates or out-of-range entries.
  IndexSet(int period, std::vector<int> indices);
  IndexSet(int period, std::initializer_list<int> indices)
      : IndexSet(period, std::vector<int>(indices)) {}

  /// Like the constructor, but silently drops duplicates. Returns how many were dropped
  /// through `dropped` when non-null.
  static IndexSet deduplicated(int period, std::vector<int> indices, int* dropped = nullptr);

  int period() const noexcept { return period_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(int index) const noexcept;
  int operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<int>& indices() const noexcept { return indices_; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  /// {i + shift} mod period for every element.
  IndexSet shifted(int shift) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  int period_ = 0;
  std::vector<int> indices_;
};

/// Non-negative remainder of `index` modulo `period`.
constexpr int wrap_index(long long index, int period) noexcept {
  const long long r = index % period;
  return static_cast<int>(r < 0 ? r + period : r);
}

/// Maps a raw offset in [0, period) onto [-floor(period/2), ceil(period/2)).
constexpr int signed_offset(int raw, int period) noexcept {
  const int r = wrap_index(raw, period);
  return r >= (period + 1) / 2 ? r - period : r;
}

/// Unitary DFT matrix with F[m,n] = exp(-j 2 pi m n / N) / sqrt(N).
ComplexMatrix dft_matrix(int n);

/// Kronecker product a ⊗ b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// c[d] = | sum_n conj(u[n]) v[(n + d) mod N] |. If v is u circularly shifted by +s
/// (v[n] = u[n - s]) the peak sits at d = s.
RealVector circ_xcorr_1d(const ComplexVector& u, const ComplexVector& v);

/// Two-dimensional analogue of circ_xcorr_1d with per-axis wrapping.
RealMatrix circ_xcorr_2d(const ComplexMatrix& u, const ComplexMatrix& v);

/// Index of the largest entry; the smallest index wins ties.
Eigen::Index argmax(const RealVector& values);

/// (row, col) of the largest entry in row-major scan order; the first hit wins ties.
std::pair<Eigen::Index, Eigen::Index> argmax(const RealMatrix& values);

struct LsSolution {
  ComplexVector x;
  bool rank_deficient = false;
};

/// Least-squares / minimum-norm solution of A x ≈ y. Rank-deficient systems are solved
/// through a complete orthogonal decomposition and flagged instead of rejected.
LsSolution ls_solve(const ComplexMatrix& a, const ComplexVector& y);

/// Indices of the `count` largest values (smallest index wins ties), returned ascending.
IndexSet top_l_indices(const RealVector& values, int count);

/// Columns of `a` listed in `columns`, in that order.
ComplexMatrix select_columns(const ComplexMatrix& a, std::span<const int> columns);

}  // namespace tscs
