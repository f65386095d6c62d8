#pragma once

// Keyword signal extraction: tokenization, tweet classification, bot filtering and daily
// aggregation into the four signal pools (positive, negative, their sum, uncertainty).

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "moodmkt/core.hpp"

namespace moodmkt {

struct TweetRecord {
  std::string id;
  std::string author;
  std::int64_t timestamp = 0;  // UTC epoch seconds
  std::string text;

  Date day() const { return Date::from_epoch_seconds(timestamp); }
};

enum class Category { positive, negative, uncertainty };

inline std::string_view to_string(Category c) {
  switch (c) {
    case Category::positive: return "positive";
    case Category::negative: return "negative";
    case Category::uncertainty: return "uncertainty";
  }
  return "?";
}

using TokenSet = std::set<std::string, std::less<>>;

struct Lexicon {
  TokenSet topic_terms{"bitcoin"};
  TokenSet positive_terms{"feel", "happy", "great", "love", "awesome", "lucky", "good"};
  TokenSet negative_terms{"sad", "bad", "upset", "unhappy", "nervous"};
  TokenSet uncertainty_terms{"hope", "fear", "worry"};
  TokenSet negation_tokens{"not", "no", "never"};
  std::vector<std::vector<std::string>> stop_phrases{{"happy", "birthday"}};
  TokenSet bot_tokens{"bot"};

  const TokenSet& terms(Category c) const {
    switch (c) {
      case Category::positive: return positive_terms;
      case Category::negative: return negative_terms;
      case Category::uncertainty: break;
    }
    return uncertainty_terms;
  }
};

struct Classification {
  std::set<Category> categories;
  std::vector<std::pair<Category, std::string>> matched_terms;

  bool empty() const { return categories.empty(); }
  bool has(Category c) const { return categories.count(c) != 0; }
};

/// Splits on every code point that is neither alphabetic nor a decimal digit and case-folds what
/// remains. Invalid UTF-8 bytes act as separators.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 cp;
    U8_NEXT(bytes, i, length, cp);
    const bool word = cp >= 0 && (u_hasBinaryProperty(cp, UCHAR_ALPHABETIC) || u_isdigit(cp));
    if (!word) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
      continue;
    }
    UChar32 folded = u_foldCase(cp, U_FOLD_CASE_DEFAULT);
    char buf[U8_MAX_LENGTH];
    std::int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, folded);
    current.append(buf, static_cast<std::size_t>(n));
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

/// Throws if the lexicon breaks its invariants: every term must be a single lowercase token and
/// the three category sets must be pairwise disjoint.
inline void validate(const Lexicon& lex) {
  auto check_set = [](const TokenSet& set, std::string_view field) {
    for (const auto& term : set) {
      auto toks = tokenize(term);
      if (toks.size() != 1 || toks.front() != term)
        throw Error("lexicon field " + std::string(field) + ": '" + term +
                    "' is not a single lowercase token");
    }
  };
  check_set(lex.topic_terms, "topic_terms");
  check_set(lex.positive_terms, "positive_terms");
  check_set(lex.negative_terms, "negative_terms");
  check_set(lex.uncertainty_terms, "uncertainty_terms");
  check_set(lex.negation_tokens, "negation_tokens");
  check_set(lex.bot_tokens, "bot_tokens");
  for (const auto& phrase : lex.stop_phrases) {
    if (phrase.empty()) throw Error("lexicon field stop_phrases: empty phrase");
    for (const auto& tok : phrase) {
      auto toks = tokenize(tok);
      if (toks.size() != 1 || toks.front() != tok)
        throw Error("lexicon field stop_phrases: '" + tok + "' is not a single lowercase token");
    }
  }
  const std::pair<const TokenSet*, const TokenSet*> pairs[] = {
      {&lex.positive_terms, &lex.negative_terms},
      {&lex.positive_terms, &lex.uncertainty_terms},
      {&lex.negative_terms, &lex.uncertainty_terms}};
  for (auto [a, b] : pairs) {
    for (const auto& term : *a) {
      if (b->count(term)) throw Error("lexicon category sets overlap on '" + term + "'");
    }
  }
}

/// Classifies pre-tokenized text. A sentiment term is ignored when one of the two preceding
/// tokens is a negation or when it sits inside a stop-phrase occurrence.
inline Classification classify_tokens(const std::vector<std::string>& tokens, const Lexicon& lex) {
  Classification out;
  const bool on_topic = std::any_of(tokens.begin(), tokens.end(),
                                    [&](const std::string& t) { return lex.topic_terms.count(t) != 0; });
  if (!on_topic) return out;

  std::vector<bool> blocked(tokens.size(), false);
  for (const auto& phrase : lex.stop_phrases) {
    if (phrase.size() > tokens.size()) continue;
    for (std::size_t start = 0; start + phrase.size() <= tokens.size(); ++start) {
      if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(start))) {
        for (std::size_t k = 0; k < phrase.size(); ++k) blocked[start + k] = true;
      }
    }
  }

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (blocked[i]) continue;
    const bool negated = (i >= 1 && lex.negation_tokens.count(tokens[i - 1])) ||
                         (i >= 2 && lex.negation_tokens.count(tokens[i - 2]));
    if (negated) continue;
    for (Category c : {Category::positive, Category::negative, Category::uncertainty}) {
      if (!lex.terms(c).count(tokens[i])) continue;
      out.categories.insert(c);
      std::pair<Category, std::string> hit{c, tokens[i]};
      if (std::find(out.matched_terms.begin(), out.matched_terms.end(), hit) == out.matched_terms.end())
        out.matched_terms.push_back(std::move(hit));
    }
  }
  return out;
}

inline Classification classify_tweet(const TweetRecord& tweet, const Lexicon& lex) {
  return classify_tokens(tokenize(tweet.text), lex);
}

/// Drops tweets whose author or text carries a bot token, then same-day exact (author, text)
/// duplicates, keeping the earliest timestamp (first in input order on ties). Survivors keep
/// their input order.
inline std::vector<TweetRecord> filter_bots(const std::vector<TweetRecord>& tweets, const Lexicon& lex) {
  auto has_bot_token = [&](std::string_view s) {
    for (const auto& t : tokenize(s)) {
      if (lex.bot_tokens.count(t)) return true;
    }
    return false;
  };

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (!has_bot_token(tweets[i].author) && !has_bot_token(tweets[i].text)) candidates.push_back(i);
  }

  using Key = std::tuple<std::int64_t, std::string_view, std::string_view>;
  std::map<Key, std::size_t> keeper;
  for (std::size_t i : candidates) {
    const auto& t = tweets[i];
    Key key{t.day().serial(), t.author, t.text};
    auto [it, inserted] = keeper.try_emplace(key, i);
    if (!inserted && t.timestamp < tweets[it->second].timestamp) it->second = i;
  }

  std::vector<TweetRecord> out;
  for (std::size_t i : candidates) {
    const auto& t = tweets[i];
    if (keeper.at(Key{t.day().serial(), t.author, t.text}) == i) out.push_back(t);
  }
  return out;
}

struct DailySentiment {
  Date date;
  std::int64_t count_positive = 0;
  std::int64_t count_negative = 0;
  std::int64_t count_uncertainty = 0;

  std::int64_t sum_emotions() const { return count_positive + count_negative; }

  /// Undefined when there are no negative tweets.
  std::optional<double> ratio_positive_to_negative() const {
    if (count_negative == 0) return std::nullopt;
    return static_cast<double>(count_positive) / static_cast<double>(count_negative);
  }

  bool operator==(const DailySentiment&) const = default;
};

/// One row per UTC day from the first to the last tweet, empty days included with zero counts.
inline std::vector<DailySentiment> aggregate_daily(const std::vector<TweetRecord>& tweets, const Lexicon& lex) {
  if (tweets.empty()) throw Error("empty corpus");
  auto [lo, hi] = std::minmax_element(tweets.begin(), tweets.end(), [](const auto& a, const auto& b) {
    return a.timestamp < b.timestamp;
  });
  const Date first = lo->day();
  const Date last = hi->day();

  std::vector<DailySentiment> days;
  days.reserve(static_cast<std::size_t>(last - first + 1));
  for (Date d = first; d <= last; ++d) days.push_back(DailySentiment{d});

  for (const auto& t : tweets) {
    auto cls = classify_tweet(t, lex);
    auto& row = days[static_cast<std::size_t>(t.day() - first)];
    if (cls.has(Category::positive)) ++row.count_positive;
    if (cls.has(Category::negative)) ++row.count_negative;
    if (cls.has(Category::uncertainty)) ++row.count_uncertainty;
  }
  return days;
}

}  // namespace moodmkt
