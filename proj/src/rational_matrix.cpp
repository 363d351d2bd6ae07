#include "todabrane/rational_matrix.hpp"

namespace tb {

RationalMatrix::RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) fail(ErrorCode::invalid_argument, "negative matrix dimension");
  data_.assign(static_cast<size_t>(rows) * cols, Rational(0));
}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
  return m;
}

size_t RationalMatrix::index(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    fail(ErrorCode::invalid_argument, "matrix index out of range");
  return static_cast<size_t>(i) * cols_ + j;
}

bool RationalMatrix::is_symmetric() const {
  if (!is_square()) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

Rational RationalMatrix::determinant() const {
  if (!is_square()) fail(ErrorCode::invalid_argument, "determinant of non-square matrix");
  RationalMatrix m(*this);
  Rational det(1);
  const int n = rows_;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (!m.at(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return Rational(0);
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(m.at(pivot, j), m.at(col, j));
      det = -det;
    }
    det *= m.at(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (m.at(r, col).is_zero()) continue;
      Rational f = m.at(r, col) / m.at(col, col);
      for (int j = col; j < n; ++j) m.at(r, j) -= f * m.at(col, j);
    }
  }
  return det;
}

std::optional<RationalMatrix> RationalMatrix::inverse() const {
  if (!is_square()) fail(ErrorCode::invalid_argument, "inverse of non-square matrix");
  const int n = rows_;
  RationalMatrix m(*this);
  RationalMatrix inv = identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (!m.at(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(m.at(pivot, j), m.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    Rational inv_pivot = m.at(col, col).reciprocal();
    for (int j = 0; j < n; ++j) {
      m.at(col, j) *= inv_pivot;
      inv.at(col, j) *= inv_pivot;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || m.at(r, col).is_zero()) continue;
      Rational f = m.at(r, col);
      for (int j = 0; j < n; ++j) {
        m.at(r, j) -= f * m.at(col, j);
        inv.at(r, j) -= f * inv.at(col, j);
      }
    }
  }
  return inv;
}

RationalMatrix RationalMatrix::transposed() const {
  RationalMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

Rational RationalMatrix::row_sum(int i) const {
  Rational s(0);
  for (int j = 0; j < cols_; ++j) s += at(i, j);
  return s;
}

nlohmann::json RationalMatrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < rows_; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < cols_; ++j) row.push_back(at(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

RationalMatrix RationalMatrix::from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::parse_error, "matrix JSON must be a non-empty list of rows");
  const int rows = static_cast<int>(j.size());
  if (!j[0].is_array()) fail(ErrorCode::parse_error, "matrix rows must be lists");
  const int cols = static_cast<int>(j[0].size());
  RationalMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      fail(ErrorCode::parse_error, "ragged matrix rows");
    for (int c = 0; c < cols; ++c) {
      const auto& cell = row[c];
      if (cell.is_number_integer()) {
        m.at(i, c) = Rational(cell.get<long>());
      } else if (cell.is_string()) {
        m.at(i, c) = Rational::from_string(cell.get<std::string>());
      } else {
        fail(ErrorCode::parse_error, "matrix entries must be integers or 'num/den' strings");
      }
    }
  }
  return m;
}

}  // namespace tb
