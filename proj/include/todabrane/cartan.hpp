#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "todabrane/rational_matrix.hpp"

namespace tb {

/// Square rational matrix with every diagonal entry equal to 2. Coincides
/// with a Lie-algebra Cartan matrix for special brane intersections; the
/// off-diagonal entries may be arbitrary rationals.
class QuasiCartanMatrix {
 public:
  explicit QuasiCartanMatrix(RationalMatrix entries);

  int rank() const { return entries_.rows(); }
  const RationalMatrix& entries() const { return entries_; }
  const Rational& at(int i, int j) const { return entries_.at(i, j); }

  bool off_diagonal_nonpositive_integers() const;

  /// Recognizes the named rank-1/rank-2 Cartan matrices. "B2" is the
  /// transpose of "C2"; both transposes of C2 and G2 are recognized.
  static QuasiCartanMatrix named(std::string_view algebra);
  /// Label lookup for rank <= 2; nullopt when the matrix is not one of the
  /// tabulated Cartan matrices (up to relabeling for C2/G2 transposes).
  std::optional<std::string> classify() const;

  friend bool operator==(const QuasiCartanMatrix& a, const QuasiCartanMatrix& b) {
    return a.entries_ == b.entries_;
  }

 private:
  RationalMatrix entries_;
};

/// Conjectured polynomial degrees n_s = 2 * sum_{s'} (A^-1)_{ss'}, returned
/// exactly as rationals; integrality is the caller's concern. Throws
/// SingularMatrix when det A = 0.
std::vector<Rational> weyl_degrees(const QuasiCartanMatrix& A);

}  // namespace tb
