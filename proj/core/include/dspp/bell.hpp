#pragma once

// Partial and complete Bell polynomials.
//
// Every evaluator is a template over the scalar type so that the same code
// runs in exact integer arithmetic (long long), in double, and in
// std::complex<double>. The recurrence is the production route; the
// partition sum and the Hessenberg determinant are kept as independent
// evaluators and cross-checked in the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "dspp/errors.hpp"

namespace dspp::bell {

/// Largest polynomial order handled by the library.
inline constexpr int kMaxOrder = 32;

namespace detail {

template <class T>
inline constexpr bool is_integral_scalar = std::is_integral_v<T>;

inline void check_args(int n, std::size_t available, std::size_t needed) {
  if (n < 0) throw DomainError("Bell polynomial order must be non-negative");
  if (n > kMaxOrder) throw DomainError("Bell polynomial order exceeds the supported maximum of 32");
  if (available < needed) throw DomainError("too few Bell polynomial arguments supplied");
}

// n! / (prod_m j_m! (m!)^{j_m}), exact for n <= 20, double beyond.
template <class T>
T partition_coefficient(int n, const std::vector<int>& j) {
  if constexpr (is_integral_scalar<T>) {
    if (n > 20) throw DomainError("exact integer Bell evaluation is limited to order 20");
    auto fact = [](int m) {
      std::int64_t r = 1;
      for (int i = 2; i <= m; ++i) r *= i;
      return r;
    };
    std::int64_t c = fact(n);
    for (std::size_t m = 1; m < j.size(); ++m) {
      c /= fact(j[m]);
      for (int rep = 0; rep < j[m]; ++rep) c /= fact(static_cast<int>(m));
    }
    return static_cast<T>(c);
  } else {
    double log_c = std::lgamma(n + 1.0);
    for (std::size_t m = 1; m < j.size(); ++m) {
      log_c -= std::lgamma(j[m] + 1.0) + j[m] * std::lgamma(static_cast<double>(m) + 1.0);
    }
    return T(n <= 20 ? std::round(std::exp(log_c)) : std::exp(log_c));
  }
}

template <class T>
T ipow(T x, int e) {
  T r = T(1);
  while (e-- > 0) r *= x;
  return r;
}

// Enumerates j_1..j_L with sum j = k and sum m*j_m = n (recursively over m
// from L down to 1) and accumulates the partial Bell polynomial terms.
template <class T>
void accumulate_sequences(int n, int m, int parts_left, int weight_left, std::vector<int>& j,
                          std::span<const T> xs, T& sum) {
  if (m == 0) {
    if (parts_left == 0 && weight_left == 0) {
      T term = partition_coefficient<T>(n, j);
      for (std::size_t q = 1; q < j.size(); ++q) {
        if (j[q] > 0) term *= ipow(xs[q - 1], j[q]);
      }
      sum += term;
    }
    return;
  }
  for (int c = 0; c * m <= weight_left && c <= parts_left; ++c) {
    // the remaining m-1 sizes can absorb at most (m-1)*parts weight
    const int rest_parts = parts_left - c;
    const int rest_weight = weight_left - c * m;
    if (rest_weight < rest_parts || rest_weight > rest_parts * (m - 1)) continue;
    j[m] = c;
    accumulate_sequences(n, m - 1, rest_parts, rest_weight, j, xs, sum);
  }
  j[m] = 0;
}

template <class T>
T binom_as(int n, int k) {
  if (k < 0 || k > n) return T(0);
  if constexpr (is_integral_scalar<T>) {
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<T>(r);
  } else {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return T(std::round(r));
  }
}

template <class T>
double magnitude(const T& x) {
  return std::abs(x);
}

// Fraction-free Bareiss elimination with row pivoting on zero pivots.
template <class T>
T determinant_exact(std::vector<std::vector<T>> a) {
  const std::size_t n = a.size();
  __extension__ typedef __int128 Wide;
  std::vector<std::vector<Wide>> w(n, std::vector<Wide>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) w[r][c] = a[r][c];
  Wide prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (w[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && w[p][k] == 0) ++p;
      if (p == n) return T(0);
      std::swap(w[k], w[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t c = k + 1; c < n; ++c) {
        Wide lhs, rhs;
        if (__builtin_mul_overflow(w[i][c], w[k][k], &lhs) ||
            __builtin_mul_overflow(w[i][k], w[k][c], &rhs)) {
          throw DomainError("exact determinant overflowed 128-bit arithmetic");
        }
        w[i][c] = (lhs - rhs) / prev;
      }
      w[i][k] = 0;
    }
    prev = w[k][k];
  }
  const Wide det = sign * w[n - 1][n - 1];
  if (det > static_cast<Wide>(INT64_MAX) || det < static_cast<Wide>(INT64_MIN)) {
    throw DomainError("exact determinant does not fit the scalar type");
  }
  return static_cast<T>(det);
}

// LU factorization with partial pivoting.
template <class T>
T determinant_float(std::vector<std::vector<T>> a) {
  const std::size_t n = a.size();
  T det = T(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (magnitude(a[i][k]) > magnitude(a[p][k])) p = i;
    }
    if (magnitude(a[p][k]) == 0.0) return T(0);
    if (p != k) {
      std::swap(a[p], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const T factor = a[i][k] / a[k][k];
      for (std::size_t c = k; c < n; ++c) a[i][c] -= factor * a[k][c];
    }
  }
  return det;
}

}  // namespace detail

/// B_{n,k}(x_1..x_{n-k+1}) by summation over index sequences
/// j_1 + j_2 + ... = k, j_1 + 2 j_2 + ... = n.
template <class T>
T partial_bell(int n, int k, std::span<const T> xs) {
  if (k < 0 || k > n) throw DomainError("partial_bell requires 0 <= k <= n");
  const std::size_t needed = k >= 1 ? static_cast<std::size_t>(n - k + 1) : 0;
  detail::check_args(n, xs.size(), needed);
  if (n == 0) return T(1);  // B_{0,0}
  if (k == 0) return T(0);
  const int top = n - k + 1;
  std::vector<int> j(top + 1, 0);
  T sum = T(0);
  detail::accumulate_sequences<T>(n, top, k, n, j, xs, sum);
  return sum;
}

/// Complete Bell polynomial as the sum of partial ones.
template <class T>
T complete_bell_sum(int n, std::span<const T> xs) {
  detail::check_args(n, xs.size(), static_cast<std::size_t>(std::max(n, 0)));
  T sum = T(0);
  for (int k = 0; k <= n; ++k) sum += partial_bell<T>(n, k, xs);
  return sum;
}

/// The n x n upper-Hessenberg matrix whose determinant is B_n: entry (r, c)
/// for c >= r is binom(n-1-r, c-r) x_{c-r+1}, the subdiagonal is -1.
template <class T>
std::vector<std::vector<T>> bell_matrix(int n, std::span<const T> xs) {
  detail::check_args(n, xs.size(), static_cast<std::size_t>(n));
  std::vector<std::vector<T>> a(n, std::vector<T>(n, T(0)));
  for (int r = 0; r < n; ++r) {
    if (r > 0) a[r][r - 1] = T(-1);
    for (int c = r; c < n; ++c) a[r][c] = detail::binom_as<T>(n - 1 - r, c - r) * xs[c - r];
  }
  return a;
}

template <class T>
T complete_bell_det(int n, std::span<const T> xs) {
  if (n < 1) throw DomainError("complete_bell_det requires n >= 1");
  auto a = bell_matrix<T>(n, xs);
  if constexpr (detail::is_integral_scalar<T>) {
    return detail::determinant_exact<T>(std::move(a));
  } else {
    return detail::determinant_float<T>(std::move(a));
  }
}

/// B_0..B_n via B_{m+1} = sum_k binom(m,k) B_{m-k} x_{k+1}.
template <class T>
std::vector<T> complete_bell_all(int n, std::span<const T> xs) {
  detail::check_args(n, xs.size(), static_cast<std::size_t>(n));
  std::vector<T> b(n + 1, T(0));
  b[0] = T(1);
  for (int m = 0; m < n; ++m) {
    T acc = T(0);
    for (int k = 0; k <= m; ++k) acc += detail::binom_as<T>(m, k) * b[m - k] * xs[k];
    b[m + 1] = acc;
  }
  return b;
}

template <class T>
T complete_bell_recurrence(int n, std::span<const T> xs) {
  return complete_bell_all<T>(n, xs).back();
}

/// Derivatives of φ = e^Ψ from those of Ψ: φ^(k) = e^Ψ B_k(Ψ', ..., Ψ^(k)),
/// k = 0..n where n = psi_derivs.size().
template <class T>
std::vector<T> riordan_exp_derivatives(std::span<const T> psi_derivs, T psi_value) {
  const int n = static_cast<int>(psi_derivs.size());
  auto b = complete_bell_all<T>(n, psi_derivs);
  const T phi = std::exp(psi_value);
  for (auto& v : b) v *= phi;
  return b;
}

}  // namespace dspp::bell
