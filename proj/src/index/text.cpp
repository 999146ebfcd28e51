#include "splice/index/text.hpp"

#include <algorithm>
#include <cctype>

namespace splice {

namespace detail {
extern const char* const kBundledDictionary;
extern const char* const kBundledStopWords;
}  // namespace detail

namespace {

std::unordered_set<std::string> lines(std::string_view text) {
  std::unordered_set<std::string> out;
  size_t from = 0;
  while (from <= text.size()) {
    size_t nl = text.find('\n', from);
    if (nl == std::string_view::npos) nl = text.size();
    std::string w(text.substr(from, nl - from));
    while (!w.empty() && std::isspace(static_cast<unsigned char>(w.back()))) w.pop_back();
    while (!w.empty() && std::isspace(static_cast<unsigned char>(w.front()))) w.erase(0, 1);
    if (!w.empty()) out.insert(std::move(w));
    from = nl + 1;
  }
  return out;
}

}  // namespace

uint64_t hash_dictionary(const std::unordered_set<std::string>& dictionary) {
  std::vector<std::string> sorted(dictionary.begin(), dictionary.end());
  std::sort(sorted.begin(), sorted.end());
  uint64_t h = 1469598103934665603ULL;
  auto feed = [&](unsigned char c) {
    h ^= c;
    h *= 1099511628211ULL;
  };
  for (auto& w : sorted) {
    for (char c : w) feed(static_cast<unsigned char>(c));
    feed('\n');
  }
  return h;
}

WordLists WordLists::from_text(std::string_view dictionary, std::string_view stop_words) {
  WordLists w;
  w.dictionary = lines(dictionary);
  w.stop_words = lines(stop_words);
  w.dictionary_hash = hash_dictionary(w.dictionary);
  return w;
}

const WordLists& WordLists::bundled() {
  static const WordLists lists = from_text(detail::kBundledDictionary, detail::kBundledStopWords);
  return lists;
}

std::vector<std::string> split_case(std::string_view token) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  auto upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
  auto lower = [](char c) { return std::islower(static_cast<unsigned char>(c)) != 0; };
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  for (size_t i = 0; i < token.size(); ++i) {
    char c = token[i];
    if (!std::isalnum(static_cast<unsigned char>(c))) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      char p = token[i - 1];
      bool boundary = (lower(p) && upper(c)) || (digit(p) != digit(c)) ||
                      (upper(p) && upper(c) && i + 1 < token.size() && lower(token[i + 1]));
      if (boundary) flush();
    }
    cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  flush();
  return out;
}

std::vector<std::string> split_identifier(std::string_view token, const std::unordered_set<std::string>& dictionary) {
  std::vector<std::string> out;
  for (auto& piece : split_case(token)) {
    if (dictionary.count(piece)) {
      out.push_back(piece);
      continue;
    }
    size_t i = 0;
    while (i < piece.size()) {
      size_t best = 0;
      for (size_t len = piece.size() - i; len >= 2; --len) {
        if (dictionary.count(piece.substr(i, len))) {
          best = len;
          break;
        }
      }
      if (best == 0) {
        out.push_back(piece.substr(i));
        break;
      }
      out.push_back(piece.substr(i, best));
      i += best;
    }
  }
  return out;
}

namespace {

// Direct transcription of Porter's reference implementation: b[0..k] is the
// word being stemmed, j marks the end of the stem during suffix tests.
class Stemmer {
 public:
  explicit Stemmer(std::string_view w) : b_(w), k_(static_cast<int>(w.size()) - 1) {}

  std::string run() {
    if (k_ <= 1) return b_;
    step1ab();
    if (k_ > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    return b_.substr(0, static_cast<size_t>(k_ + 1));
  }

 private:
  bool cons(int i) const {
    switch (b_[static_cast<size_t>(i)]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u': return false;
      case 'y': return i == 0 ? true : !cons(i - 1);
      default: return true;
    }
  }

  int m() const {
    int n = 0, i = 0;
    while (true) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool doublec(int j) const {
    if (j < 1) return false;
    if (b_[static_cast<size_t>(j)] != b_[static_cast<size_t>(j - 1)]) return false;
    return cons(j);
  }

  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    char ch = b_[static_cast<size_t>(i)];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view s) {
    int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (std::string_view(b_).substr(static_cast<size_t>(k_ - len + 1), s.size()) != s) return false;
    j_ = k_ - len;
    return true;
  }

  void setto(std::string_view s) {
    b_.replace(static_cast<size_t>(j_ + 1), static_cast<size_t>(k_ - j_), s);
    k_ = j_ + static_cast<int>(s.size());
    b_.resize(static_cast<size_t>(k_ + 1));
  }

  void r(std::string_view s) {
    if (m() > 0) setto(s);
  }

  char at(int i) const { return b_[static_cast<size_t>(i)]; }

  void step1ab() {
    if (at(k_) == 's') {
      if (ends("sses")) k_ -= 2;
      else if (ends("ies")) setto("i");
      else if (at(k_ - 1) != 's') --k_;
    }
    if (ends("eed")) {
      if (m() > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      b_.resize(static_cast<size_t>(k_ + 1));
      if (ends("at")) setto("ate");
      else if (ends("bl")) setto("ble");
      else if (ends("iz")) setto("ize");
      else if (doublec(k_)) {
        --k_;
        char ch = at(k_);
        if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
      } else if (j_ = k_, m() == 1 && cvc(k_)) {
        setto("e");
      }
    }
    b_.resize(static_cast<size_t>(k_ + 1));
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[static_cast<size_t>(k_)] = 'i';
  }

  bool rule(std::string_view suffix, std::string_view repl) {
    if (!ends(suffix)) return false;
    r(repl);
    return true;
  }

  void step2() {
    switch (at(k_ - 1)) {
      case 'a':
        if (rule("ational", "ate") || rule("tional", "tion")) return;
        break;
      case 'c':
        if (rule("enci", "ence") || rule("anci", "ance")) return;
        break;
      case 'e':
        if (rule("izer", "ize")) return;
        break;
      case 'l':
        if (rule("bli", "ble") || rule("alli", "al") || rule("entli", "ent") || rule("eli", "e") ||
            rule("ousli", "ous"))
          return;
        break;
      case 'o':
        if (rule("ization", "ize") || rule("ation", "ate") || rule("ator", "ate")) return;
        break;
      case 's':
        if (rule("alism", "al") || rule("iveness", "ive") || rule("fulness", "ful") || rule("ousness", "ous"))
          return;
        break;
      case 't':
        if (rule("aliti", "al") || rule("iviti", "ive") || rule("biliti", "ble")) return;
        break;
      case 'g':
        if (rule("logi", "log")) return;
        break;
      default: break;
    }
  }

  void step3() {
    switch (at(k_)) {
      case 'e':
        if (rule("icate", "ic") || rule("ative", "") || rule("alize", "al")) return;
        break;
      case 'i':
        if (rule("iciti", "ic")) return;
        break;
      case 'l':
        if (rule("ical", "ic") || rule("ful", "")) return;
        break;
      case 's':
        if (rule("ness", "")) return;
        break;
      default: break;
    }
  }

  void step4() {
    switch (at(k_ - 1)) {
      case 'a':
        if (ends("al")) break;
        return;
      case 'c':
        if (ends("ance") || ends("ence")) break;
        return;
      case 'e':
        if (ends("er")) break;
        return;
      case 'i':
        if (ends("ic")) break;
        return;
      case 'l':
        if (ends("able") || ends("ible")) break;
        return;
      case 'n':
        if (ends("ant") || ends("ement") || ends("ment") || ends("ent")) break;
        return;
      case 'o':
        if (ends("ion") && j_ >= 0 && (at(j_) == 's' || at(j_) == 't')) break;
        if (ends("ou")) break;
        return;
      case 's':
        if (ends("ism")) break;
        return;
      case 't':
        if (ends("ate") || ends("iti")) break;
        return;
      case 'u':
        if (ends("ous")) break;
        return;
      case 'v':
        if (ends("ive")) break;
        return;
      case 'z':
        if (ends("ize")) break;
        return;
      default: return;
    }
    if (m() > 1) {
      k_ = j_;
      b_.resize(static_cast<size_t>(k_ + 1));
    }
  }

  void step5() {
    j_ = k_;
    if (at(k_) == 'e') {
      int a = m();
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
    }
    if (at(k_) == 'l' && doublec(k_) && m() > 1) --k_;
    b_.resize(static_cast<size_t>(k_ + 1));
  }

  std::string b_;
  int k_;
  int j_ = 0;
};

}  // namespace

std::string porter_stem(std::string_view word) { return Stemmer(word).run(); }

}  // namespace splice
