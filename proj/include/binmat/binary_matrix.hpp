#pragma once

#include <cstdint>
#include <vector>

namespace binmat {

struct BinaryMatrix {
  int m = 0;
  int n = 0;
  std::vector<std::uint8_t> cells;  // row-major, values 0/1

  BinaryMatrix() = default;
  BinaryMatrix(int rows, int cols)
      : m(rows), n(cols), cells(static_cast<std::size_t>(rows) * cols, 0) {}

  std::uint8_t at(int i, int j) const {
    return cells[static_cast<std::size_t>(i) * n + j];
  }
  void set(int i, int j, std::uint8_t v) {
    cells[static_cast<std::size_t>(i) * n + j] = v;
  }

  std::vector<int> row_sums() const;
  std::vector<int> col_sums() const;

  bool operator==(const BinaryMatrix& other) const = default;
};

}  // namespace binmat
