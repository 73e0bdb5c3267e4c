#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "nchardy/errors.hpp"

namespace nchardy {

// A word in the free monoid on letters 1..d. The empty word is the unit.
class Word {
 public:
  Word() = default;
  explicit Word(int d) : d_(d) {}
  Word(int d, std::vector<int> letters) : d_(d), letters_(std::move(letters)) { check(); }
  Word(int d, std::initializer_list<int> letters) : d_(d), letters_(letters) { check(); }

  int alphabet() const { return d_; }
  int size() const { return static_cast<int>(letters_.size()); }
  bool empty() const { return letters_.empty(); }
  int operator[](int i) const { return letters_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& letters() const { return letters_; }

  // Word with the last letter removed; requires a nonempty word.
  Word prefix() const {
    return Word(d_, std::vector<int>(letters_.begin(), letters_.end() - 1));
  }
  Word append(int k) const {
    std::vector<int> l = letters_;
    l.push_back(k);
    return Word(d_, std::move(l));
  }

  std::string str() const;

  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

 private:
  void check() const {
    for (int k : letters_)
      if (k < 1 || k > d_) throw DomainError("letter " + std::to_string(k) + " outside [1, " + std::to_string(d_) + "]");
  }

  int d_ = 1;
  std::vector<int> letters_;
};

// Degree first, then lexicographic on letters.
struct DegLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.letters() < b.letters();
  }
};

inline Word word_concat(const Word& a, const Word& b) {
  if (a.alphabet() != b.alphabet())
    throw AlphabetMismatch("concatenating words over alphabets of size " + std::to_string(a.alphabet()) + " and " +
                           std::to_string(b.alphabet()));
  std::vector<int> l = a.letters();
  l.insert(l.end(), b.letters().begin(), b.letters().end());
  return Word(a.alphabet(), std::move(l));
}

inline Word operator*(const Word& a, const Word& b) { return word_concat(a, b); }

inline Word word_reverse(const Word& a) {
  return Word(a.alphabet(), std::vector<int>(a.letters().rbegin(), a.letters().rend()));
}

inline std::string Word::str() const {
  if (letters_.empty()) return "()";
  std::string s = "(";
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(letters_[i]);
  }
  return s + ")";
}

// All words of length <= n in degree-lex order.
std::vector<Word> words_up_to(int d, int n);

}  // namespace nchardy
