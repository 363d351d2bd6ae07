#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "todabrane/rational.hpp"

namespace tb {

/// Dense matrix of exact rationals. Small sizes only; everything is O(n^3)
/// textbook elimination with exact pivots.
class RationalMatrix {
 public:
  RationalMatrix() : rows_(0), cols_(0) {}
  RationalMatrix(int rows, int cols);
  static RationalMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& at(int i, int j) { return data_[index(i, j)]; }
  const Rational& at(int i, int j) const { return data_[index(i, j)]; }

  bool is_symmetric() const;
  Rational determinant() const;
  /// Gauss-Jordan inverse; nullopt when singular.
  std::optional<RationalMatrix> inverse() const;
  RationalMatrix transposed() const;

  Rational row_sum(int i) const;

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const RationalMatrix& a, const RationalMatrix& b) {
    return !(a == b);
  }

  /// [[...],[...]] with entries as "num/den" strings.
  nlohmann::json to_json() const;
  /// Accepts entries as integers or "num/den" strings; rejects anything else.
  static RationalMatrix from_json(const nlohmann::json& j);

 private:
  size_t index(int i, int j) const;

  int rows_, cols_;
  std::vector<Rational> data_;
};

}  // namespace tb
