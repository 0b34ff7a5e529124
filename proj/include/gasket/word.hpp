#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gasket {

/// Finite word over the letters {1, ..., alphabet}. The empty word is the
/// identity address.
class Word {
 public:
  Word() = default;

  Word(std::vector<std::uint8_t> letters, int alphabet = 3)
      : letters_(std::move(letters)), alphabet_(alphabet) {
    for (auto l : letters_) check(l);
  }

  static Word parse(std::string_view text, int alphabet = 3) {
    std::vector<std::uint8_t> letters;
    letters.reserve(text.size());
    for (char c : text) {
      if (c < '1' || c > '9')
        throw std::invalid_argument("word letter '" + std::string(1, c) + "' is not a digit 1-9");
      letters.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return Word(std::move(letters), alphabet);
  }

  /// Every word of length `n` in lexicographic order.
  static std::vector<Word> all_of_length(int n, int alphabet = 3) {
    std::vector<Word> out;
    std::vector<std::uint8_t> cur(static_cast<std::size_t>(n), 1);
    while (true) {
      out.emplace_back(cur, alphabet);
      int i = n - 1;
      while (i >= 0 && cur[static_cast<std::size_t>(i)] == alphabet) {
        cur[static_cast<std::size_t>(i)] = 1;
        --i;
      }
      if (i < 0) break;
      ++cur[static_cast<std::size_t>(i)];
    }
    return out;
  }

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int alphabet() const { return alphabet_; }
  int operator[](std::size_t i) const { return letters_[i]; }
  const std::vector<std::uint8_t>& letters() const { return letters_; }

  Word appended(int letter) const {
    Word w = *this;
    w.check(letter);
    w.letters_.push_back(static_cast<std::uint8_t>(letter));
    return w;
  }

  Word concat(const Word& other) const {
    Word w = *this;
    for (auto l : other.letters_) w = w.appended(l);
    return w;
  }

  std::string str() const {
    std::string s;
    s.reserve(letters_.size());
    for (auto l : letters_) s.push_back(static_cast<char>('0' + l));
    return s;
  }

  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
  friend bool operator<(const Word& a, const Word& b) { return a.letters_ < b.letters_; }

 private:
  void check(int l) const {
    if (l < 1 || l > alphabet_)
      throw std::out_of_range("letter " + std::to_string(l) + " outside alphabet {1.." +
                              std::to_string(alphabet_) + "}");
  }

  std::vector<std::uint8_t> letters_;
  int alphabet_ = 3;
};

}  // namespace gasket
