#include "todabrane/cartan.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace tb {

QuasiCartanMatrix::QuasiCartanMatrix(RationalMatrix entries) : entries_(std::move(entries)) {
  if (!entries_.is_square())
    fail(ErrorCode::invalid_argument, "quasi-Cartan matrix must be square");
  for (int i = 0; i < entries_.rows(); ++i)
    if (entries_.at(i, i) != Rational(2))
      fail(ErrorCode::invalid_argument,
           "quasi-Cartan matrix needs diagonal entries equal to 2, found " +
               entries_.at(i, i).to_string() + " at row " + std::to_string(i + 1));
}

bool QuasiCartanMatrix::off_diagonal_nonpositive_integers() const {
  for (int i = 0; i < rank(); ++i)
    for (int j = 0; j < rank(); ++j) {
      if (i == j) continue;
      const Rational& a = entries_.at(i, j);
      if (!a.is_integer() || a.sign() > 0) return false;
    }
  return true;
}

namespace {

RationalMatrix make2(long a11, long a12, long a21, long a22) {
  RationalMatrix m(2, 2);
  m.at(0, 0) = Rational(a11);
  m.at(0, 1) = Rational(a12);
  m.at(1, 0) = Rational(a21);
  m.at(1, 1) = Rational(a22);
  return m;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

}  // namespace

QuasiCartanMatrix QuasiCartanMatrix::named(std::string_view algebra) {
  const std::string name = upper(algebra);
  if (name == "A1") {
    RationalMatrix m(1, 1);
    m.at(0, 0) = Rational(2);
    return QuasiCartanMatrix(m);
  }
  if (name == "A1+A1") return QuasiCartanMatrix(make2(2, 0, 0, 2));
  if (name == "A2") return QuasiCartanMatrix(make2(2, -1, -1, 2));
  if (name == "C2") return QuasiCartanMatrix(make2(2, -1, -2, 2));
  if (name == "B2") return QuasiCartanMatrix(make2(2, -2, -1, 2));
  if (name == "G2") return QuasiCartanMatrix(make2(2, -1, -3, 2));
  fail(ErrorCode::invalid_argument,
       "unknown algebra '" + std::string(algebra) + "' (expected A1, A1+A1, A2, B2, C2 or G2)");
}

std::optional<std::string> QuasiCartanMatrix::classify() const {
  if (rank() == 1) return "A1";
  if (rank() != 2) return std::nullopt;
  const auto same = [&](long a12, long a21) {
    return at(0, 1) == Rational(a12) && at(1, 0) == Rational(a21);
  };
  if (same(0, 0)) return "A1+A1";
  if (same(-1, -1)) return "A2";
  if (same(-1, -2)) return "C2";
  if (same(-2, -1)) return "B2";
  if (same(-1, -3) || same(-3, -1)) return "G2";
  return std::nullopt;
}

std::vector<Rational> weyl_degrees(const QuasiCartanMatrix& A) {
  auto inv = A.entries().inverse();
  if (!inv)
    fail(ErrorCode::singular_matrix, "quasi-Cartan matrix is singular (det = 0)");
  std::vector<Rational> degrees;
  degrees.reserve(A.rank());
  for (int s = 0; s < A.rank(); ++s) degrees.push_back(Rational(2) * inv->row_sum(s));
  return degrees;
}

}  // namespace tb
