#include "binmat/binary_matrix.hpp"

namespace binmat {

std::vector<int> BinaryMatrix::row_sums() const {
  std::vector<int> r(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) r[i] += at(i, j);
  return r;
}

std::vector<int> BinaryMatrix::col_sums() const {
  std::vector<int> c(n, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) c[j] += at(i, j);
  return c;
}

}  // namespace binmat
