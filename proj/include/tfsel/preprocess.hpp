#ifndef TFSEL_PREPROCESS_HPP
#define TFSEL_PREPROCESS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "tfsel/porter_stemmer.hpp"
#include "tfsel/stopwords.hpp"

namespace tfsel {

struct PreprocessConfig {
  StopwordSet stopwords = smart_stopwords();
  bool stemming = true;
  bool drop_numeric_tokens = true;
  bool lowercase = true;
  std::size_t min_token_length = 2;
};

namespace detail {

inline bool is_ascii_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

inline bool is_ascii_digit(unsigned char c) { return c >= '0' && c <= '9'; }

}  // namespace detail

/*
 Text to token list. Pipeline, in order:
   split on any byte that is not an ASCII letter or digit
   drop tokens containing a digit (drop_numeric_tokens)
   lowercase
   drop tokens shorter than min_token_length
   drop stopwords
   Porter-stem (stemming)
 Token order is preserved. Non-ASCII bytes (UTF-8 or Latin-1) act as separators.
*/
inline std::vector<std::string> preprocess(std::string_view raw_text, const PreprocessConfig& config) {
  std::vector<std::string> tokens;
  const PorterStemmer stem;
  std::size_t i = 0;
  const std::size_t n = raw_text.size();
  while (i < n) {
    while (i < n && !detail::is_ascii_alnum(static_cast<unsigned char>(raw_text[i]))) ++i;
    const std::size_t start = i;
    bool has_digit = false;
    while (i < n && detail::is_ascii_alnum(static_cast<unsigned char>(raw_text[i]))) {
      has_digit = has_digit || detail::is_ascii_digit(static_cast<unsigned char>(raw_text[i]));
      ++i;
    }
    if (i == start) break;
    if (has_digit && config.drop_numeric_tokens) continue;

    std::string token(raw_text.substr(start, i - start));
    if (config.lowercase)
      for (auto& c : token)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (token.size() < config.min_token_length) continue;
    if (config.stopwords.contains(token)) continue;
    tokens.push_back(config.stemming ? stem(token) : std::move(token));
  }
  return tokens;
}

}  // namespace tfsel

#endif  // TFSEL_PREPROCESS_HPP
