#pragma once

#include <vector>

#include "nchardy/series.hpp"
#include "nchardy/types.hpp"
#include "nchardy/word.hpp"

namespace nchardy {

// Orthonormal basis e_w of the Fock space truncated at degree N, words in degree-lex order.
class FockBasis {
 public:
  FockBasis() : FockBasis(1, 0) {}
  FockBasis(int d, int maxDegree);

  int alphabet() const { return d_; }
  int maxDegree() const { return n_; }
  Index dim() const { return offs_.back(); }
  // Number of words of length <= k (0 for k < 0).
  Index dimUpTo(int k) const;
  Index offset(int k) const { return offs_[static_cast<std::size_t>(k)]; }
  Index index(const Word& w) const;
  const Word& word(Index i) const { return words_[static_cast<std::size_t>(i)]; }
  int degreeOf(Index i) const { return words_[static_cast<std::size_t>(i)].size(); }
  // Rank of w among the words of its length, i.e. its letters read as base-d digits.
  Index lexRank(const Word& w) const;
  Index power(int k) const { return pow_[static_cast<std::size_t>(k)]; }

  friend bool operator==(const FockBasis& a, const FockBasis& b) { return a.d_ == b.d_ && a.n_ == b.n_; }

 private:
  int d_;
  int n_;
  std::vector<Index> offs_;
  std::vector<Index> pow_;
  std::vector<Word> words_;
};

// Dense compression of an operator to the truncated Fock space, tensored with coefficient spaces.
// Index layout: Fock index major, coefficient index minor. Columns built from words of length
// <= validDegree coincide with the untruncated operator.
struct OperatorMatrix {
  FockBasis basis;
  int rowCoef = 1;
  int colCoef = 1;
  CMatrix entries;
  int validDegree = 0;
};

OperatorMatrix left_shift(int k, const FockBasis& basis);
OperatorMatrix right_shift(int k, const FockBasis& basis);
// Permutation e_w -> e_{reverse(w)}.
CMatrix transpose_unitary(const FockBasis& basis);
OperatorMatrix mult_operator(const Series& f, const FockBasis& basis);

double isometry_defect(const OperatorMatrix& a, int degreeLimit);
double smallest_singular_value(const OperatorMatrix& a, int degreeLimit);
double operator_norm(const OperatorMatrix& a, int degreeLimit);

// Column series (p x 1) <-> coefficient vector in the truncated space.
CVector to_vector(const Series& f, const FockBasis& basis);
Series to_series(const CVector& v, const FockBasis& basis, int coefDim = 1);

// Largest k <= n whose truncated Fock space has at most maxDim basis vectors.
int manageable_degree(int d, int n, Index maxDim = 2048);

// Columns of the operator built from words of length <= degreeLimit.
Index window_columns(const OperatorMatrix& a, int degreeLimit);

}  // namespace nchardy
