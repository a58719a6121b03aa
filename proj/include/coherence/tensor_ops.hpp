#pragma once

#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace coherence {

/// Kronecker product; first argument most significant.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                             a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace detail {

inline std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

inline std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace detail

/// Partial trace of a square matrix over the factors not listed in `keep`.
/// `keep` must be ascending; the result keeps the original factor order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> partial_trace(
    const Eigen::MatrixBase<Derived>& m, std::span<const std::size_t> dims,
    std::span<const std::size_t> keep) {
  using Scalar = typename Derived::Scalar;
  const std::size_t total = detail::product(dims);
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != total) {
    throw std::invalid_argument("partial_trace: matrix does not match factor dimensions");
  }
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= dims.size() || (i > 0 && keep[i] <= keep[i - 1])) {
      throw std::invalid_argument("partial_trace: invalid kept factor set");
    }
    kept[keep[i]] = true;
  }
  const auto strides = detail::strides_of(dims);
  std::size_t keep_dim = 1, trace_dim = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) (kept[k] ? keep_dim : trace_dim) *= dims[k];

  // Split each full index into (kept index, traced index).
  std::vector<std::size_t> kept_index(total), traced_index(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t ki = 0, ti = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      std::size_t digit = (idx / strides[k]) % dims[k];
      if (kept[k]) {
        ki = ki * dims[k] + digit;
      } else {
        ti = ti * dims[k] + digit;
      }
    }
    kept_index[idx] = ki;
    traced_index[idx] = ti;
  }
  std::vector<std::vector<std::size_t>> by_trace(trace_dim);
  for (std::size_t idx = 0; idx < total; ++idx) by_trace[traced_index[idx]].push_back(idx);

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(
          static_cast<Eigen::Index>(keep_dim), static_cast<Eigen::Index>(keep_dim));
  for (const auto& group : by_trace) {
    for (std::size_t r : group) {
      for (std::size_t c : group) {
        out(static_cast<Eigen::Index>(kept_index[r]), static_cast<Eigen::Index>(kept_index[c])) +=
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return out;
}

/// Basis permutation matrix P with P |i_0 ... i_{n-1}> = |i_{perm[0]} ... i_{perm[n-1]}>,
/// i.e. output factor j is input factor perm[j].
inline Eigen::MatrixXcd factor_permutation(std::span<const std::size_t> dims,
                                           std::span<const std::size_t> perm) {
  if (perm.size() != dims.size()) throw std::invalid_argument("permutation size mismatch");
  std::vector<std::size_t> out_dims(dims.size());
  for (std::size_t j = 0; j < perm.size(); ++j) {
    if (perm[j] >= dims.size()) throw std::invalid_argument("permutation index out of range");
    out_dims[j] = dims[perm[j]];
  }
  const auto in_strides = detail::strides_of(dims);
  const auto out_strides = detail::strides_of(out_dims);
  const std::size_t total = detail::product(dims);
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(total),
                                              static_cast<Eigen::Index>(total));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t out_idx = 0;
    for (std::size_t j = 0; j < perm.size(); ++j) {
      std::size_t digit = (idx / in_strides[perm[j]]) % dims[perm[j]];
      out_idx += digit * out_strides[j];
    }
    p(static_cast<Eigen::Index>(out_idx), static_cast<Eigen::Index>(idx)) = 1.0;
  }
  return p;
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
template <typename Derived>
double trace_norm_hermitian(const Eigen::MatrixBase<Derived>& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.derived(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace coherence
