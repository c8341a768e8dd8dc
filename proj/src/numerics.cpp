#include "tscs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "tscs/errors.hpp"

namespace tscs {

IndexSet::IndexSet(int period, std::vector<int> indices) : period_(period), indices_(std::move(indices)) {
  if (period_ < 0) throw InvalidArgument("IndexSet: negative period");
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= period_)
      throw InvalidArgument("IndexSet: index " + std::to_string(indices_[i]) + " outside [0, " +
                            std::to_string(period_) + ")");
    if (i > 0 && indices_[i] == indices_[i - 1])
      throw InvalidArgument("IndexSet: duplicate index " + std::to_string(indices_[i]));
  }
}

IndexSet IndexSet::deduplicated(int period, std::vector<int> indices, int* dropped) {
  std::sort(indices.begin(), indices.end());
  const auto last = std::unique(indices.begin(), indices.end());
  if (dropped) *dropped = static_cast<int>(indices.end() - last);
  indices.erase(last, indices.end());
  return IndexSet(period, std::move(indices));
}

bool IndexSet::contains(int index) const noexcept {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

IndexSet IndexSet::shifted(int shift) const {
  std::vector<int> out;
  out.reserve(indices_.size());
  for (int i : indices_) out.push_back(wrap_index(static_cast<long long>(i) + shift, period_));
  return IndexSet(period_, std::move(out));
}

ComplexMatrix dft_matrix(int n) {
  if (n < 1) throw InvalidArgument("dft_matrix: N must be positive");
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      // reduce m*k first so large N keeps full phase precision
      const long long mk = (static_cast<long long>(m) * k) % n;
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(mk) / n;
      f(m, k) = std::polar(scale, phase);
    }
  }
  return f;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

RealVector circ_xcorr_1d(const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != v.size())
    throw DimensionError("circ_xcorr_1d: length mismatch (" + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()) + ")");
  if (u.size() == 0) throw DimensionError("circ_xcorr_1d: empty input");
  const Eigen::Index n = u.size();
  RealVector c(n);
  for (Eigen::Index d = 0; d < n; ++d) {
    Complex acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < n; ++i) acc += std::conj(u[i]) * v[(i + d) % n];
    c[d] = std::abs(acc);
  }
  return c;
}

RealMatrix circ_xcorr_2d(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw DimensionError("circ_xcorr_2d: shape mismatch");
  if (u.size() == 0) throw DimensionError("circ_xcorr_2d: empty input");
  const Eigen::Index n1 = u.rows();
  const Eigen::Index n2 = u.cols();
  RealMatrix c(n1, n2);
  for (Eigen::Index d1 = 0; d1 < n1; ++d1) {
    for (Eigen::Index d2 = 0; d2 < n2; ++d2) {
      Complex acc{0.0, 0.0};
      for (Eigen::Index i1 = 0; i1 < n1; ++i1)
        for (Eigen::Index i2 = 0; i2 < n2; ++i2)
          acc += std::conj(u(i1, i2)) * v((i1 + d1) % n1, (i2 + d2) % n2);
      c(d1, d2) = std::abs(acc);
    }
  }
  return c;
}

Eigen::Index argmax(const RealVector& values) {
  if (values.size() == 0) throw InvalidArgument("argmax: empty input");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

std::pair<Eigen::Index, Eigen::Index> argmax(const RealMatrix& values) {
  if (values.size() == 0) throw InvalidArgument("argmax: empty input");
  Eigen::Index br = 0, bc = 0;
  for (Eigen::Index r = 0; r < values.rows(); ++r)
    for (Eigen::Index c = 0; c < values.cols(); ++c)
      if (values(r, c) > values(br, bc)) {
        br = r;
        bc = c;
      }
  return {br, bc};
}

LsSolution ls_solve(const ComplexMatrix& a, const ComplexVector& y) {
  if (a.rows() != y.size())
    throw DimensionError("ls_solve: system has " + std::to_string(a.rows()) + " rows but y has " +
                         std::to_string(y.size()) + " entries");
  LsSolution out;
  if (a.cols() == 0) {
    out.x = ComplexVector::Zero(0);
    return out;
  }
  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(a);
  out.x = cod.solve(y);
  out.rank_deficient = cod.rank() < a.cols();
  return out;
}

IndexSet top_l_indices(const RealVector& values, int count) {
  const auto n = static_cast<int>(values.size());
  if (count < 0 || count > n)
    throw InvalidArgument("top_l_indices: L=" + std::to_string(count) + " exceeds length " +
                          std::to_string(n));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] > values[b]; });
  order.resize(count);
  return IndexSet(n, std::move(order));
}

ComplexMatrix select_columns(const ComplexMatrix& a, std::span<const int> columns) {
  ComplexMatrix out(a.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] < 0 || columns[j] >= a.cols())
      throw InvalidArgument("select_columns: column index out of range");
    out.col(static_cast<Eigen::Index>(j)) = a.col(columns[j]);
  }
  return out;
}

}  // namespace tscs
