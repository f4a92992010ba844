#pragma once

// Maximum-weight assignment on a dense rectangular matrix (Hungarian method
// with potentials, O(n^2 m)).

#include <algorithm>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>

namespace corefud {

template <class T>
class WeightMatrix {
 public:
  WeightMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<T> data_;
};

// For each row, the column assigned to it (or -1), maximizing the total
// weight. Every row gets a column when rows <= cols and vice versa; callers
// that need a partial matching give absent edges weight 0 and drop them.
template <class T>
std::vector<int> max_weight_assignment(const WeightMatrix<T>& w) {
  static_assert(std::is_arithmetic_v<T>);
  const std::size_t rows = w.rows();
  const std::size_t cols = w.cols();
  std::vector<int> result(rows, -1);
  if (rows == 0 || cols == 0) return result;

  const bool transpose = rows > cols;
  const std::size_t n = transpose ? cols : rows;  // n <= m
  const std::size_t m = transpose ? rows : cols;
  auto cost = [&](std::size_t i, std::size_t j) -> T {
    // 1-based i in [1, n], j in [1, m]; minimize the negated weight.
    return transpose ? -w(j - 1, i - 1) : -w(i - 1, j - 1);
  };

  const T inf = std::numeric_limits<T>::has_infinity ? std::numeric_limits<T>::infinity()
                                                     : std::numeric_limits<T>::max() / 4;
  std::vector<T> u(n + 1, T{}), v(m + 1, T{});
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<T> minv(m + 1);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      T delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        T cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    if (transpose) {
      result[j - 1] = static_cast<int>(p[j] - 1);
    } else {
      result[p[j] - 1] = static_cast<int>(j - 1);
    }
  }
  return result;
}

}  // namespace corefud
