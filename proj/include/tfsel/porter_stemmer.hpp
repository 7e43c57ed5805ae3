#ifndef TFSEL_PORTER_STEMMER_HPP
#define TFSEL_PORTER_STEMMER_HPP

/*
 Porter stemmer, following Martin Porter's reference ANSI C implementation
 (the "bli"/"logi" step-2 variants included, words of length <= 2 left alone).

 Input is expected to be lowercase ASCII; anything else is passed through
 the same rules byte-wise.
*/

#include <string>
#include <string_view>

namespace tfsel {

class PorterStemmer {
 public:
  std::string operator()(std::string_view word) const {
    if (word.size() <= 2) return std::string(word);
    State s{std::string(word), static_cast<int>(word.size()) - 1, 0};
    step1ab(s);
    if (s.k > 0) {
      step1c(s);
      step2(s);
      step3(s);
      step4(s);
      step5(s);
    }
    s.b.resize(static_cast<std::size_t>(s.k) + 1);
    return s.b;
  }

 private:
  // b[0..k] is the live word; j marks the end of the stem during suffix tests.
  struct State {
    std::string b;
    int k;
    int j;
  };

  static bool cons(const State& s, int i) {
    switch (s.b[static_cast<std::size_t>(i)]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(s, i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b[0..j].
  static int measure(const State& s) {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > s.j) return n;
      if (!cons(s, i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > s.j) return n;
        if (cons(s, i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > s.j) return n;
        if (!cons(s, i)) break;
        ++i;
      }
      ++i;
    }
  }

  static bool vowel_in_stem(const State& s) {
    for (int i = 0; i <= s.j; ++i)
      if (!cons(s, i)) return true;
    return false;
  }

  static bool double_consonant(const State& s, int j) {
    if (j < 1) return false;
    if (s.b[static_cast<std::size_t>(j)] != s.b[static_cast<std::size_t>(j - 1)]) return false;
    return cons(s, j);
  }

  // consonant-vowel-consonant ending at i, last consonant not w, x or y.
  static bool cvc(const State& s, int i) {
    if (i < 2 || !cons(s, i) || cons(s, i - 1) || !cons(s, i - 2)) return false;
    const char ch = s.b[static_cast<std::size_t>(i)];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  static bool ends(State& s, std::string_view suffix) {
    const int len = static_cast<int>(suffix.size());
    if (len > s.k + 1) return false;
    if (std::string_view(s.b).substr(static_cast<std::size_t>(s.k - len + 1), suffix.size()) != suffix)
      return false;
    s.j = s.k - len;
    return true;
  }

  static void set_to(State& s, std::string_view replacement) {
    s.b.replace(static_cast<std::size_t>(s.j + 1), static_cast<std::size_t>(s.k - s.j), replacement);
    s.k = s.j + static_cast<int>(replacement.size());
  }

  static void replace_if_measured(State& s, std::string_view replacement) {
    if (measure(s) > 0) set_to(s, replacement);
  }

  static void step1ab(State& s) {
    if (s.b[static_cast<std::size_t>(s.k)] == 's') {
      if (ends(s, "sses")) {
        s.k -= 2;
      } else if (ends(s, "ies")) {
        set_to(s, "i");
      } else if (s.b[static_cast<std::size_t>(s.k - 1)] != 's') {
        --s.k;
      }
    }
    if (ends(s, "eed")) {
      if (measure(s) > 0) --s.k;
    } else if ((ends(s, "ed") || ends(s, "ing")) && vowel_in_stem(s)) {
      s.k = s.j;
      if (ends(s, "at")) {
        set_to(s, "ate");
      } else if (ends(s, "bl")) {
        set_to(s, "ble");
      } else if (ends(s, "iz")) {
        set_to(s, "ize");
      } else if (double_consonant(s, s.k)) {
        --s.k;
        const char ch = s.b[static_cast<std::size_t>(s.k)];
        if (ch == 'l' || ch == 's' || ch == 'z') ++s.k;
      } else {
        s.j = s.k;
        if (measure(s) == 1 && cvc(s, s.k)) set_to(s, "e");
      }
    }
  }

  static void step1c(State& s) {
    if (ends(s, "y") && vowel_in_stem(s)) s.b[static_cast<std::size_t>(s.k)] = 'i';
  }

  // Tries each (suffix, replacement) in order; the first matching suffix ends the step.
  template <std::size_t N>
  static void first_match(State& s, const std::pair<std::string_view, std::string_view> (&rules)[N]) {
    for (const auto& [suffix, replacement] : rules) {
      if (ends(s, suffix)) {
        replace_if_measured(s, replacement);
        return;
      }
    }
  }

  static void step2(State& s) {
    switch (s.b[static_cast<std::size_t>(s.k - 1)]) {
      case 'a': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {
            {"ational", "ate"}, {"tional", "tion"}};
        first_match(s, r);
        break;
      }
      case 'c': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {
            {"enci", "ence"}, {"anci", "ance"}};
        first_match(s, r);
        break;
      }
      case 'e': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {{"izer", "ize"}};
        first_match(s, r);
        break;
      }
      case 'l': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {
            {"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}};
        first_match(s, r);
        break;
      }
      case 'o': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {
            {"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}};
        first_match(s, r);
        break;
      }
      case 's': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {
            {"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}};
        first_match(s, r);
        break;
      }
      case 't': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {
            {"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}};
        first_match(s, r);
        break;
      }
      case 'g': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {{"logi", "log"}};
        first_match(s, r);
        break;
      }
      default:
        break;
    }
  }

  static void step3(State& s) {
    switch (s.b[static_cast<std::size_t>(s.k)]) {
      case 'e': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
        first_match(s, r);
        break;
      }
      case 'i': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {{"iciti", "ic"}};
        first_match(s, r);
        break;
      }
      case 'l': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {
            {"ical", "ic"}, {"ful", ""}};
        first_match(s, r);
        break;
      }
      case 's': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {{"ness", ""}};
        first_match(s, r);
        break;
      }
      default:
        break;
    }
  }

  static void step4(State& s) {
    bool matched = false;
    switch (s.b[static_cast<std::size_t>(s.k - 1)]) {
      case 'a': matched = ends(s, "al"); break;
      case 'c': matched = ends(s, "ance") || ends(s, "ence"); break;
      case 'e': matched = ends(s, "er"); break;
      case 'i': matched = ends(s, "ic"); break;
      case 'l': matched = ends(s, "able") || ends(s, "ible"); break;
      case 'n':
        matched = ends(s, "ant") || ends(s, "ement") || ends(s, "ment") || ends(s, "ent");
        break;
      case 'o':
        if (ends(s, "ion") && s.j >= 0 &&
            (s.b[static_cast<std::size_t>(s.j)] == 's' || s.b[static_cast<std::size_t>(s.j)] == 't')) {
          matched = true;
        } else {
          matched = ends(s, "ou");
        }
        break;
      case 's': matched = ends(s, "ism"); break;
      case 't': matched = ends(s, "ate") || ends(s, "iti"); break;
      case 'u': matched = ends(s, "ous"); break;
      case 'v': matched = ends(s, "ive"); break;
      case 'z': matched = ends(s, "ize"); break;
      default: break;
    }
    if (matched && measure(s) > 1) s.k = s.j;
  }

  static void step5(State& s) {
    s.j = s.k;
    if (s.b[static_cast<std::size_t>(s.k)] == 'e') {
      const int m = measure(s);
      if (m > 1 || (m == 1 && !cvc(s, s.k - 1))) --s.k;
    }
    if (s.b[static_cast<std::size_t>(s.k)] == 'l' && double_consonant(s, s.k) && measure(s) > 1) --s.k;
  }
};

inline std::string porter_stem(std::string_view word) { return PorterStemmer{}(word); }

}  // namespace tfsel

#endif  // TFSEL_PORTER_STEMMER_HPP
