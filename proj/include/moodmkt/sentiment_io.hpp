#pragma once

#include <json.hpp>

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "moodmkt/core.hpp"
#include "moodmkt/lexicon.hpp"

namespace moodmkt {

namespace detail {

inline std::string json_field_as_string(const nlohmann::json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error("line " + std::to_string(line_no) + ": missing field '" + key + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  throw Error("line " + std::to_string(line_no) + ": field '" + key + "' must be a string");
}

inline TweetRecord make_tweet(std::string id, std::string author, std::string_view ts, std::string text,
                              std::size_t line_no) {
  auto secs = parse_timestamp(ts);
  if (!secs) throw Error("line " + std::to_string(line_no) + ": invalid timestamp '" + std::string(ts) + "'");
  if (text.empty()) throw Error("line " + std::to_string(line_no) + ": empty text");
  return TweetRecord{std::move(id), std::move(author), *secs, std::move(text)};
}

}  // namespace detail

/// Reads one tweet per line. Input starting with `{` is JSON-object-per-line; anything else is a
/// delimited file whose header names `id`, `author`, `timestamp` and `text` (tab-delimited when
/// the header contains a tab, comma otherwise).
inline std::vector<TweetRecord> parse_tweets(std::string_view content) {
  std::vector<TweetRecord> out;
  auto lines = detail::split_lines(content);
  const bool json_lines = !content.empty() && content.front() == '{';

  if (json_lines) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (detail::blank(lines[i])) continue;
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(lines[i]);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error("line " + std::to_string(i + 1) + ": malformed JSON");
      }
      if (!obj.is_object()) throw Error("line " + std::to_string(i + 1) + ": expected a JSON object");
      auto ts_it = obj.find("timestamp");
      if (ts_it == obj.end()) throw Error("line " + std::to_string(i + 1) + ": missing field 'timestamp'");
      std::string ts = ts_it->is_string() ? ts_it->get<std::string>()
                       : ts_it->is_number_integer() ? std::to_string(ts_it->get<std::int64_t>())
                                                    : std::string{};
      out.push_back(detail::make_tweet(detail::json_field_as_string(obj, "id", i + 1),
                                       detail::json_field_as_string(obj, "author", i + 1), ts,
                                       detail::json_field_as_string(obj, "text", i + 1), i + 1));
    }
    return out;
  }

  std::size_t header_idx = 0;
  while (header_idx < lines.size() && detail::blank(lines[header_idx])) ++header_idx;
  if (header_idx == lines.size()) return out;
  const char delim = lines[header_idx].find('\t') != std::string_view::npos ? '\t' : ',';
  auto header = split_delimited(lines[header_idx], delim);
  auto column = [&](std::string_view name) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (detail::trim(header[c]) == name) return c;
    }
    throw Error("tweet file header lacks column '" + std::string(name) + "'");
  };
  const std::size_t c_id = column("id"), c_author = column("author"), c_ts = column("timestamp"),
                    c_text = column("text");
  for (std::size_t i = header_idx + 1; i < lines.size(); ++i) {
    if (detail::blank(lines[i])) continue;
    auto fields = split_delimited(lines[i], delim);
    if (fields.size() != header.size())
      throw Error("line " + std::to_string(i + 1) + ": expected " + std::to_string(header.size()) +
                  " fields, found " + std::to_string(fields.size()));
    out.push_back(detail::make_tweet(fields[c_id], fields[c_author], fields[c_ts], fields[c_text], i + 1));
  }
  return out;
}

/// Lexicon override. Fields that are absent keep their defaults.
inline Lexicon parse_lexicon_json(std::string_view content) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("lexicon: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("lexicon: expected a JSON object");

  Lexicon lex;
  auto read_set = [&](const char* key, TokenSet& dst) {
    auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_array()) throw Error(std::string("lexicon field ") + key + ": expected an array");
    dst.clear();
    for (const auto& v : *it) {
      if (!v.is_string()) throw Error(std::string("lexicon field ") + key + ": expected strings");
      dst.insert(v.get<std::string>());
    }
  };
  read_set("topic_terms", lex.topic_terms);
  read_set("positive_terms", lex.positive_terms);
  read_set("negative_terms", lex.negative_terms);
  read_set("uncertainty_terms", lex.uncertainty_terms);
  read_set("negation_tokens", lex.negation_tokens);
  read_set("bot_tokens", lex.bot_tokens);
  if (auto it = j.find("stop_phrases"); it != j.end()) {
    if (!it->is_array()) throw Error("lexicon field stop_phrases: expected an array");
    lex.stop_phrases.clear();
    for (const auto& v : *it) {
      std::vector<std::string> phrase;
      if (v.is_string()) {
        std::istringstream words(v.get<std::string>());
        for (std::string w; words >> w;) phrase.push_back(w);
      } else if (v.is_array()) {
        for (const auto& w : v) {
          if (!w.is_string()) throw Error("lexicon field stop_phrases: expected strings");
          phrase.push_back(w.get<std::string>());
        }
      } else {
        throw Error("lexicon field stop_phrases: expected strings or arrays of strings");
      }
      lex.stop_phrases.push_back(std::move(phrase));
    }
  }
  validate(lex);
  return lex;
}

inline constexpr std::string_view kSentimentHeader =
    "date,count_positive,count_negative,count_uncertainty,sum_emotions,ratio_positive_to_negative";

inline std::string write_sentiment_csv(const std::vector<DailySentiment>& days) {
  std::string out(kSentimentHeader);
  out += '\n';
  for (const auto& d : days) {
    out += d.date.iso();
    out += ',' + std::to_string(d.count_positive);
    out += ',' + std::to_string(d.count_negative);
    out += ',' + std::to_string(d.count_uncertainty);
    out += ',' + std::to_string(d.sum_emotions());
    out += ',';
    if (auto r = d.ratio_positive_to_negative()) out += format_number(*r);
    out += '\n';
  }
  return out;
}

/// Reads the extract output back. Derived columns are recomputed, not trusted.
inline std::vector<DailySentiment> parse_sentiment_csv(std::string_view content) {
  auto lines = detail::split_lines(content);
  if (lines.empty() || detail::blank(lines.front())) throw Error("sentiment file: missing header");
  auto header = split_delimited(lines.front(), ',');
  auto column = [&](std::string_view name) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (detail::trim(header[c]) == name) return c;
    }
    throw Error("sentiment file header lacks column '" + std::string(name) + "'");
  };
  const std::size_t c_date = column("date"), c_pos = column("count_positive"),
                    c_neg = column("count_negative"), c_unc = column("count_uncertainty");

  std::vector<DailySentiment> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (detail::blank(lines[i])) continue;
    auto f = split_delimited(lines[i], ',');
    if (f.size() != header.size()) throw Error("sentiment file row " + std::to_string(i) + ": wrong field count");
    auto date = parse_iso_date(detail::trim(f[c_date]));
    if (!date) throw Error("sentiment file row " + std::to_string(i) + ": invalid date '" + f[c_date] + "'");
    auto count = [&](std::size_t c) {
      auto v = parse_number(f[c]);
      if (!v || *v < 0 || *v != std::floor(*v))
        throw Error("sentiment file row " + std::to_string(i) + ": malformed count '" + f[c] + "'");
      return static_cast<std::int64_t>(*v);
    };
    DailySentiment d{*date, count(c_pos), count(c_neg), count(c_unc)};
    if (!out.empty() && d.date <= out.back().date)
      throw Error("sentiment file row " + std::to_string(i) + ": dates must be strictly ascending");
    out.push_back(d);
  }
  return out;
}

}  // namespace moodmkt
