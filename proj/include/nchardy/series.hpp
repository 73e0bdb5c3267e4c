#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "nchardy/errors.hpp"
#include "nchardy/types.hpp"
#include "nchardy/word.hpp"

namespace nchardy {

inline constexpr double kDefaultPruneTol = 1e-15;

// Truncated power series in d free variables with p x q matrix coefficients.
// Coefficients are stored sparsely, keyed by word in degree-lex order; missing words are zero.
template <class Scalar>
class BasicSeries {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using CoeffMap = std::map<Word, Matrix, DegLex>;

  BasicSeries() = default;
  BasicSeries(int d, int rows, int cols, int maxDegree) : d_(d), rows_(rows), cols_(cols), n_(maxDegree) {
    if (d < 1) throw DomainError("alphabet size must be positive");
    if (rows < 1 || cols < 1) throw ShapeMismatch("coefficient shape must be positive");
    if (maxDegree < 0) throw DomainError("max degree must be nonnegative");
  }

  static BasicSeries constant(int d, const Matrix& c, int maxDegree) {
    BasicSeries f(d, static_cast<int>(c.rows()), static_cast<int>(c.cols()), maxDegree);
    f.set(Word(d), c);
    return f;
  }
  static BasicSeries scalar(int d, Scalar c, int maxDegree) {
    Matrix m(1, 1);
    m(0, 0) = c;
    return constant(d, m, maxDegree);
  }
  static BasicSeries identity(int d, int p, int maxDegree) {
    return constant(d, Matrix::Identity(p, p), maxDegree);
  }
  static BasicSeries monomial(const Word& w, Scalar c, int maxDegree) {
    BasicSeries f(w.alphabet(), 1, 1, maxDegree);
    Matrix m(1, 1);
    m(0, 0) = c;
    f.set(w, m);
    return f;
  }
  static BasicSeries variable(int d, int k, int maxDegree) { return monomial(Word(d, {k}), Scalar(1), maxDegree); }

  int alphabet() const { return d_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int maxDegree() const { return n_; }
  const CoeffMap& coeffs() const { return c_; }
  bool isZero() const { return c_.empty(); }

  // Length of the longest stored word, -1 for the zero series.
  int degree() const { return c_.empty() ? -1 : c_.rbegin()->first.size(); }
  // Length of the shortest stored word, -1 for the zero series.
  int order() const { return c_.empty() ? -1 : c_.begin()->first.size(); }

  Matrix coeff(const Word& w) const {
    auto it = c_.find(w);
    return it == c_.end() ? Matrix::Zero(rows_, cols_) : it->second;
  }
  Scalar at(const Word& w, int i = 0, int j = 0) const {
    auto it = c_.find(w);
    return it == c_.end() ? Scalar(0) : it->second(i, j);
  }
  Matrix constantTerm() const { return coeff(Word(d_)); }

  void set(const Word& w, const Matrix& m) {
    checkWord(w);
    if (m.rows() != rows_ || m.cols() != cols_)
      throw ShapeMismatch("coefficient at " + w.str() + " has shape " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected " + std::to_string(rows_) + "x" +
                          std::to_string(cols_));
    if (w.size() > n_) return;
    c_[w] = m;
  }
  void add(const Word& w, const Matrix& m) {
    if (w.size() > n_) return;
    auto it = c_.find(w);
    if (it == c_.end())
      set(w, m);
    else
      it->second += m;
  }
  void erase(const Word& w) { c_.erase(w); }

  // Drops coefficients with Frobenius norm <= relTol * (largest coefficient norm).
  BasicSeries& prune(Real relTol = Real(kDefaultPruneTol)) {
    Real mx = 0;
    for (const auto& [w, m] : c_) mx = std::max(mx, m.norm());
    Real cut = relTol * mx;
    for (auto it = c_.begin(); it != c_.end();) {
      if (it->second.norm() <= cut)
        it = c_.erase(it);
      else
        ++it;
    }
    return *this;
  }

  BasicSeries withMaxDegree(int n) const {
    BasicSeries g(d_, rows_, cols_, n);
    for (const auto& [w, m] : c_)
      if (w.size() <= n) g.c_.emplace(w, m);
    return g;
  }

 private:
  void checkWord(const Word& w) const {
    if (w.alphabet() != d_)
      throw AlphabetMismatch("word " + w.str() + " over alphabet " + std::to_string(w.alphabet()) +
                             " used in a series over alphabet " + std::to_string(d_));
  }

  int d_ = 1;
  int rows_ = 1;
  int cols_ = 1;
  int n_ = 0;
  CoeffMap c_;
};

using Series = BasicSeries<Complex>;

namespace detail {

template <class S>
void requireSameAlphabet(const BasicSeries<S>& f, const BasicSeries<S>& g) {
  if (f.alphabet() != g.alphabet())
    throw AlphabetMismatch("series over alphabets " + std::to_string(f.alphabet()) + " and " +
                           std::to_string(g.alphabet()));
}

}  // namespace detail

template <class S>
BasicSeries<S> series_add(const BasicSeries<S>& f, const BasicSeries<S>& g) {
  detail::requireSameAlphabet(f, g);
  if (f.rows() != g.rows() || f.cols() != g.cols())
    throw ShapeMismatch("adding series of shapes " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                        " and " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
  BasicSeries<S> h = f.withMaxDegree(std::min(f.maxDegree(), g.maxDegree()));
  for (const auto& [w, m] : g.coeffs()) h.add(w, m);
  return h.prune();
}

template <class S>
BasicSeries<S> operator+(const BasicSeries<S>& f, const BasicSeries<S>& g) {
  return series_add(f, g);
}

template <class S, class C, std::enable_if_t<std::is_convertible_v<C, S> && !std::is_same_v<C, Word>, int> = 0>
BasicSeries<S> operator*(C c, const BasicSeries<S>& f) {
  const S cs(c);
  BasicSeries<S> h(f.alphabet(), f.rows(), f.cols(), f.maxDegree());
  if (cs == S(0)) return h;
  for (const auto& [w, m] : f.coeffs()) h.set(w, cs * m);
  return h;
}

template <class S>
BasicSeries<S> operator-(const BasicSeries<S>& f) {
  return S(-1) * f;
}

template <class S>
BasicSeries<S> operator-(const BasicSeries<S>& f, const BasicSeries<S>& g) {
  return series_add(f, -g);
}

// Cauchy-concatenation product, truncated at min(N_f, N_g).
template <class S>
BasicSeries<S> series_mul(const BasicSeries<S>& f, const BasicSeries<S>& g) {
  detail::requireSameAlphabet(f, g);
  if (f.cols() != g.rows())
    throw ShapeMismatch("multiplying series of shapes " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                        " and " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
  int n = std::min(f.maxDegree(), g.maxDegree());
  BasicSeries<S> h(f.alphabet(), f.rows(), g.cols(), n);
  for (const auto& [a, fa] : f.coeffs()) {
    if (a.size() > n) break;
    for (const auto& [b, gb] : g.coeffs()) {
      if (a.size() + b.size() > n) break;
      h.add(a * b, fa * gb);
    }
  }
  return h.prune();
}

template <class S>
BasicSeries<S> operator*(const BasicSeries<S>& f, const BasicSeries<S>& g) {
  return series_mul(f, g);
}

// Coefficient at alpha multiplied by r^|alpha|.
template <class S>
BasicSeries<S> rescale(const BasicSeries<S>& f, typename BasicSeries<S>::Real r) {
  if (!(r >= 0 && r <= 1)) throw DomainError("rescale radius " + std::to_string(double(r)) + " outside [0, 1]");
  BasicSeries<S> h(f.alphabet(), f.rows(), f.cols(), f.maxDegree());
  for (const auto& [w, m] : f.coeffs()) {
    if (r == 0 && w.size() > 0) continue;
    h.set(w, S(std::pow(r, w.size())) * m);
  }
  return h;
}

template <class S>
typename BasicSeries<S>::Real h2_norm(const BasicSeries<S>& f) {
  typename BasicSeries<S>::Real s = 0;
  for (const auto& [w, m] : f.coeffs()) s += m.squaredNorm();
  return std::sqrt(s);
}

// Two-sided inverse up to degree N via g_c = -f_0^{-1} sum_{ab = c, a != 0} f_a g_b.
template <class S>
BasicSeries<S> series_invert(const BasicSeries<S>& f) {
  using Matrix = typename BasicSeries<S>::Matrix;
  if (f.rows() != f.cols()) throw ShapeMismatch("only square-coefficient series can be inverted");
  const int d = f.alphabet();
  const int n = f.maxDegree();
  Matrix f0 = f.constantTerm();
  Eigen::JacobiSVD<Matrix> svd(f0);
  const auto& sv = svd.singularValues();
  double smax = double(sv(0));
  double smin = double(sv(sv.size() - 1));
  if (!(smin > 1e-13 * std::max(1.0, smax)))
    throw NotInvertible("constant term is singular (smallest singular value " + std::to_string(smin) + ")", smin);
  Matrix f0inv = f0.fullPivLu().inverse();

  std::vector<std::pair<Word, Matrix>> tail;
  for (const auto& [w, m] : f.coeffs())
    if (w.size() > 0) tail.emplace_back(w, m);

  BasicSeries<S> g(d, f.rows(), f.cols(), n);
  g.set(Word(d), f0inv);
  // Words that can carry nonzero coefficients are products of nonconstant support words of f.
  std::vector<std::vector<Word>> byDegree(static_cast<std::size_t>(n) + 1);
  byDegree[0].push_back(Word(d));
  for (int k = 1; k <= n; ++k) {
    std::set<Word, DegLex> cand;
    for (const auto& [a, fa] : tail) {
      int rest = k - a.size();
      if (rest < 0) continue;
      for (const Word& b : byDegree[static_cast<std::size_t>(rest)]) cand.insert(a * b);
    }
    for (const Word& c : cand) {
      Matrix acc = Matrix::Zero(f.rows(), f.cols());
      for (int i = 1; i <= c.size(); ++i) {
        Word a(d, std::vector<int>(c.letters().begin(), c.letters().begin() + i));
        auto fa = f.coeffs().find(a);
        if (fa == f.coeffs().end()) continue;
        Word b(d, std::vector<int>(c.letters().begin() + i, c.letters().end()));
        auto gb = g.coeffs().find(b);
        if (gb == g.coeffs().end()) continue;
        acc += fa->second * gb->second;
      }
      Matrix gc = -f0inv * acc;
      if (gc.norm() == 0) continue;
      g.set(c, gc);
      byDegree[static_cast<std::size_t>(k)].push_back(c);
    }
  }
  return g.prune();
}

// Largest coefficient difference (Frobenius) over words of length <= upTo.
template <class S>
double max_coeff_diff(const BasicSeries<S>& f, const BasicSeries<S>& g, int upTo) {
  double m = 0;
  for (const auto& [w, a] : f.coeffs())
    if (w.size() <= upTo) m = std::max(m, double((a - g.coeff(w)).norm()));
  for (const auto& [w, b] : g.coeffs())
    if (w.size() <= upTo && f.coeffs().find(w) == f.coeffs().end()) m = std::max(m, double(b.norm()));
  return m;
}

// Scalar series sitting at entry (i, j) of f.
template <class S>
BasicSeries<S> entry(const BasicSeries<S>& f, int i, int j) {
  BasicSeries<S> h(f.alphabet(), 1, 1, f.maxDegree());
  for (const auto& [w, m] : f.coeffs())
    if (m(i, j) != S(0)) h.set(w, m.block(i, j, 1, 1));
  return h;
}

template <class S>
BasicSeries<S> column(const BasicSeries<S>& f, int j) {
  BasicSeries<S> h(f.alphabet(), f.rows(), 1, f.maxDegree());
  for (const auto& [w, m] : f.coeffs()) h.set(w, m.col(j));
  return h.prune(0);
}

// Horizontal concatenation [f g].
template <class S>
BasicSeries<S> hcat(const BasicSeries<S>& f, const BasicSeries<S>& g) {
  detail::requireSameAlphabet(f, g);
  if (f.rows() != g.rows()) throw ShapeMismatch("hcat needs equal row counts");
  using Matrix = typename BasicSeries<S>::Matrix;
  BasicSeries<S> h(f.alphabet(), f.rows(), f.cols() + g.cols(), std::min(f.maxDegree(), g.maxDegree()));
  auto put = [&](const BasicSeries<S>& src, int off) {
    for (const auto& [w, m] : src.coeffs()) {
      Matrix c = h.coeff(w);
      c.block(0, off, m.rows(), m.cols()) = m;
      h.set(w, c);
    }
  };
  put(f, 0);
  put(g, f.cols());
  return h;
}

// Coefficientwise conjugate transpose of the coefficients (not the operator adjoint).
template <class S>
BasicSeries<S> coeff_adjoint(const BasicSeries<S>& f) {
  BasicSeries<S> h(f.alphabet(), f.cols(), f.rows(), f.maxDegree());
  for (const auto& [w, m] : f.coeffs()) h.set(w, m.adjoint());
  return h;
}

}  // namespace nchardy
