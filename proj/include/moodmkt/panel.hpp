#pragma once

// Date-indexed panel joining sentiment and market columns, plus the shift and centered
// moving-average transforms. Panels are immutable values; transforms return trimmed copies.

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "moodmkt/core.hpp"
#include "moodmkt/lexicon.hpp"
#include "moodmkt/market.hpp"

namespace moodmkt {

enum class ColumnSource { sentiment, market, derived, transformed };

inline std::string_view to_string(ColumnSource s) {
  switch (s) {
    case ColumnSource::sentiment: return "sentiment";
    case ColumnSource::market: return "market";
    case ColumnSource::derived: return "derived";
    case ColumnSource::transformed: return "transformed";
  }
  return "?";
}

struct Provenance {
  ColumnSource source = ColumnSource::market;
  std::vector<Date> interpolated;  // days filled by linear interpolation
};

struct Column {
  std::string name;
  std::vector<double> values;
  Provenance provenance;
};

// Sentiment column names follow the signal-pool names.
inline constexpr std::string_view kColPositive = "sum_positive_tweets";
inline constexpr std::string_view kColNegative = "sum_negative_tweets";
inline constexpr std::string_view kColEmotions = "sum_emotions";
inline constexpr std::string_view kColUncertainty = "sum_hopefearworry";
inline constexpr std::string_view kColRatio = "ratio_positive_to_negative";

inline constexpr std::size_t kMinPanelLength = 8;

class AlignedPanel {
 public:
  AlignedPanel() = default;
  AlignedPanel(Date start, std::size_t length) : start_(start), length_(length) {}

  Date start() const { return start_; }
  std::size_t size() const { return length_; }
  Date date(std::size_t row) const { return start_ + static_cast<std::int64_t>(row); }
  const std::vector<Column>& columns() const { return columns_; }

  bool has(std::string_view name) const { return find(name) != nullptr; }

  const Column& column_info(std::string_view name) const {
    const Column* c = find(name);
    if (!c) throw Error("unknown column '" + std::string(name) + "'");
    return *c;
  }
  const std::vector<double>& column(std::string_view name) const { return column_info(name).values; }

  void add_column(std::string name, std::vector<double> values, Provenance provenance) {
    if (values.size() != length_)
      throw Error("column '" + name + "' has " + std::to_string(values.size()) + " rows, panel has " +
                  std::to_string(length_));
    if (has(name)) throw Error("duplicate column '" + name + "'");
    columns_.push_back(Column{std::move(name), std::move(values), std::move(provenance)});
  }

  /// Copy restricted to rows [first, first + count).
  AlignedPanel slice(std::size_t first, std::size_t count) const {
    if (first + count > length_) throw Error("slice out of range");
    AlignedPanel out(date(first), count);
    for (const auto& c : columns_) {
      Provenance prov = c.provenance;
      std::erase_if(prov.interpolated, [&](Date d) {
        return count == 0 || d < out.date(0) || d > out.date(count - 1);
      });
      out.columns_.push_back(Column{
          c.name,
          std::vector<double>(c.values.begin() + static_cast<std::ptrdiff_t>(first),
                              c.values.begin() + static_cast<std::ptrdiff_t>(first + count)),
          std::move(prov)});
    }
    return out;
  }

 private:
  const Column* find(std::string_view name) const {
    for (const auto& c : columns_) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  Date start_;
  std::size_t length_ = 0;
  std::vector<Column> columns_;
};

enum class GapPolicy { reject, interpolate_linear };

struct MarketInput {
  std::string label;  // empty: columns are unprefixed; otherwise "<label>_close" etc.
  std::vector<DailyMarket> rows;
};

struct AlignOptions {
  GapPolicy gap_policy = GapPolicy::reject;
  int delta_horizon = kDefaultDeltaHorizon;
};

namespace detail {

inline std::vector<DailyMarket> fill_market_gaps(const std::vector<DailyMarket>& rows, GapPolicy policy,
                                                 Date lo, Date hi, const std::string& label,
                                                 std::vector<Date>& filled) {
  std::vector<DailyMarket> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) {
      const auto& a = rows[i - 1];
      const auto& b = rows[i];
      const std::int64_t gap = b.date - a.date;
      for (std::int64_t k = 1; k < gap; ++k) {
        const Date missing = a.date + k;
        if (policy == GapPolicy::reject) {
          if (missing >= lo && missing <= hi)
            throw Error("market" + (label.empty() ? std::string{} : " '" + label + "'") + " has a gap at " +
                        missing.iso());
          continue;
        }
        const double w = static_cast<double>(k) / static_cast<double>(gap);
        auto lerp = [w](double x, double y) { return x + w * (y - x); };
        out.push_back(DailyMarket{missing, lerp(a.open, b.open), lerp(a.high, b.high), lerp(a.low, b.low),
                                  lerp(a.close, b.close), lerp(a.volume_btc, b.volume_btc),
                                  lerp(a.volume_ccy, b.volume_ccy)});
        if (missing >= lo && missing <= hi) filled.push_back(missing);
      }
    }
    out.push_back(rows[i]);
  }
  return out;
}

}  // namespace detail

/// Joins sentiment with one or more market series over the intersection of their date ranges.
/// Missing sentiment days count as zero tweets; missing market days are rejected or linearly
/// interpolated. Rows with undefined values (ratio without negative tweets, delta price near the
/// end) are trimmed from the ends; an undefined value inside the panel is an error.
inline AlignedPanel align(const std::vector<DailySentiment>& sentiment, const std::vector<MarketInput>& markets,
                          const AlignOptions& options = {}) {
  if (sentiment.empty()) throw Error("sentiment series is empty");
  if (markets.empty()) throw Error("no market series given");
  for (std::size_t i = 1; i < sentiment.size(); ++i) {
    if (!(sentiment[i - 1].date < sentiment[i].date)) throw Error("sentiment series must be sorted by date");
  }
  Date lo = sentiment.front().date;
  Date hi = sentiment.back().date;
  for (const auto& m : markets) {
    if (m.rows.empty()) throw Error("market series is empty");
    lo = std::max(lo, m.rows.front().date);
    hi = std::min(hi, m.rows.back().date);
  }
  if (lo > hi) throw Error("no overlapping dates");
  const auto length = static_cast<std::size_t>(hi - lo + 1);

  using Optional = std::vector<std::optional<double>>;
  std::vector<std::pair<std::string, std::pair<Optional, Provenance>>> raw;

  {
    Optional pos(length, 0.0), neg(length, 0.0), emo(length, 0.0), unc(length, 0.0), ratio(length);
    std::map<Date, const DailySentiment*> by_date;
    for (const auto& s : sentiment) by_date[s.date] = &s;
    for (std::size_t r = 0; r < length; ++r) {
      auto it = by_date.find(lo + static_cast<std::int64_t>(r));
      DailySentiment s = it == by_date.end() ? DailySentiment{lo + static_cast<std::int64_t>(r)} : *it->second;
      pos[r] = static_cast<double>(s.count_positive);
      neg[r] = static_cast<double>(s.count_negative);
      emo[r] = static_cast<double>(s.sum_emotions());
      unc[r] = static_cast<double>(s.count_uncertainty);
      ratio[r] = s.ratio_positive_to_negative();
    }
    const Provenance prov{ColumnSource::sentiment, {}};
    raw.push_back({std::string(kColPositive), {pos, prov}});
    raw.push_back({std::string(kColNegative), {neg, prov}});
    raw.push_back({std::string(kColEmotions), {emo, prov}});
    raw.push_back({std::string(kColUncertainty), {unc, prov}});
    raw.push_back({std::string(kColRatio), {ratio, prov}});
  }

  for (const auto& m : markets) {
    std::vector<Date> filled;
    auto rows = detail::fill_market_gaps(m.rows, options.gap_policy, lo, hi, m.label, filled);
    auto derived = derive_indicators(rows, options.delta_horizon);
    const std::string prefix = m.label.empty() ? std::string{} : m.label + "_";
    const std::size_t offset = static_cast<std::size_t>(lo - rows.front().date);

    auto column = [&](auto getter) {
      Optional v(length);
      for (std::size_t r = 0; r < length; ++r) v[r] = getter(rows[offset + r], derived[offset + r]);
      return v;
    };
    const Provenance market_prov{ColumnSource::market, filled};
    const Provenance derived_prov{ColumnSource::derived, filled};
    raw.push_back({prefix + "open", {column([](auto& a, auto&) { return a.open; }), market_prov}});
    raw.push_back({prefix + "high", {column([](auto& a, auto&) { return a.high; }), market_prov}});
    raw.push_back({prefix + "low", {column([](auto& a, auto&) { return a.low; }), market_prov}});
    raw.push_back({prefix + "close", {column([](auto& a, auto&) { return a.close; }), market_prov}});
    raw.push_back({prefix + "volume_btc", {column([](auto& a, auto&) { return a.volume_btc; }), market_prov}});
    raw.push_back({prefix + "volume_ccy", {column([](auto& a, auto&) { return a.volume_ccy; }), market_prov}});
    raw.push_back({prefix + "intraday_spread",
                   {column([](auto&, auto& d) -> std::optional<double> { return d.intraday_spread; }), derived_prov}});
    raw.push_back({prefix + "intraday_return",
                   {column([](auto&, auto& d) -> std::optional<double> { return d.intraday_return; }), derived_prov}});
    raw.push_back({prefix + delta_column_name(options.delta_horizon),
                   {column([](auto&, auto& d) { return d.delta_price; }), derived_prov}});
  }

  auto row_complete = [&](std::size_t r) {
    return std::all_of(raw.begin(), raw.end(), [r](const auto& c) { return c.second.first[r].has_value(); });
  };
  std::size_t first = 0;
  while (first < length && !row_complete(first)) ++first;
  std::size_t last = length;
  while (last > first && !row_complete(last - 1)) --last;
  for (std::size_t r = first; r < last; ++r) {
    for (const auto& [name, col] : raw) {
      if (!col.first[r])
        throw Error("undefined value in column '" + name + "' at " + (lo + static_cast<std::int64_t>(r)).iso());
    }
  }
  if (last - first < kMinPanelLength)
    throw Error("panel too short: " + std::to_string(last - first) + " usable days, need at least " +
                std::to_string(kMinPanelLength));

  AlignedPanel panel(lo + static_cast<std::int64_t>(first), last - first);
  for (auto& [name, col] : raw) {
    std::vector<double> values;
    values.reserve(last - first);
    for (std::size_t r = first; r < last; ++r) values.push_back(*col.first[r]);
    Provenance prov = col.second;
    std::erase_if(prov.interpolated, [&](Date d) { return d < panel.date(0) || d > panel.date(panel.size() - 1); });
    panel.add_column(name, std::move(values), std::move(prov));
  }
  return panel;
}

inline AlignedPanel align(const std::vector<DailySentiment>& sentiment, const std::vector<DailyMarket>& market,
                          const AlignOptions& options = {}) {
  return align(sentiment, std::vector<MarketInput>{{std::string{}, market}}, options);
}

struct Transformed {
  AlignedPanel panel;
  std::string column;
};

inline std::string shift_name(std::string_view base, int k) {
  return std::string(base) + "__shift" + (k < 0 ? "-" : "+") + std::to_string(std::abs(k));
}

/// Adds `column` shifted by k days: row t holds the value of day t + k (k > 0 looks into the
/// future). The returned copy loses |k| rows at the affected edge.
inline Transformed shift(const AlignedPanel& panel, std::string_view column, int k) {
  const auto& src = panel.column(column);
  const std::size_t n = panel.size();
  const std::size_t ak = static_cast<std::size_t>(std::abs(k));
  if (ak >= n) throw Error("shift of " + std::to_string(k) + " days does not fit a panel of " + std::to_string(n) + " rows");
  const std::size_t first = k < 0 ? ak : 0;
  const std::size_t count = n - ak;
  AlignedPanel out = panel.slice(first, count);
  std::vector<double> shifted(count);
  for (std::size_t r = 0; r < count; ++r)
    shifted[r] = src[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(first + r) + k)];
  std::string name = shift_name(column, k);
  if (!out.has(name)) out.add_column(name, std::move(shifted), Provenance{ColumnSource::transformed, {}});
  return Transformed{std::move(out), std::move(name)};
}

inline std::string moving_average_name(std::string_view base, int window) {
  return std::string(base) + "__ma" + std::to_string(window);
}

/// Centered moving average over an odd window. Edge rows without a full window are trimmed.
inline Transformed moving_average(const AlignedPanel& panel, std::string_view column, int window) {
  if (window <= 0) throw Error("window must be positive");
  if (window % 2 == 0) throw Error("window must be odd");
  const auto& src = panel.column(column);
  const std::size_t n = panel.size();
  const auto w = static_cast<std::size_t>(window);
  if (w > n) throw Error("window of " + std::to_string(window) + " exceeds panel length " + std::to_string(n));
  const std::size_t half = w / 2;
  const std::size_t count = n - 2 * half;
  AlignedPanel out = panel.slice(half, count);
  std::vector<double> avg(count);
  for (std::size_t r = 0; r < count; ++r) {
    // Anchored at the window's first element so a constant window averages to itself exactly.
    const double anchor = src[r];
    double acc = 0;
    for (std::size_t j = 0; j < w; ++j) acc += src[r + j] - anchor;
    avg[r] = anchor + acc / static_cast<double>(w);
  }
  std::string name = moving_average_name(column, window);
  if (!out.has(name)) out.add_column(name, std::move(avg), Provenance{ColumnSource::transformed, {}});
  return Transformed{std::move(out), std::move(name)};
}

inline std::string write_panel_csv(const AlignedPanel& panel) {
  std::string out = "date";
  for (const auto& c : panel.columns()) out += ',' + csv_escape(c.name);
  out += '\n';
  for (std::size_t r = 0; r < panel.size(); ++r) {
    out += panel.date(r).iso();
    for (const auto& c : panel.columns()) out += ',' + format_number(c.values[r]);
    out += '\n';
  }
  return out;
}

inline ColumnSource infer_source(std::string_view name) {
  if (name.find("__") != std::string_view::npos) return ColumnSource::transformed;
  for (auto s : {kColPositive, kColNegative, kColEmotions, kColUncertainty, kColRatio}) {
    if (name == s) return ColumnSource::sentiment;
  }
  for (std::string_view d : {"intraday_spread", "intraday_return", "delta_price_"}) {
    if (name.find(d) != std::string_view::npos) return ColumnSource::derived;
  }
  return ColumnSource::market;
}

/// Reads a panel CSV. Dates must be contiguous and every cell numeric; provenance is inferred from
/// column names.
inline AlignedPanel parse_panel_csv(std::string_view content) {
  auto lines = detail::split_lines(content);
  std::erase_if(lines, [](std::string_view l) { return detail::blank(l); });
  if (lines.empty()) throw Error("panel file: missing header");
  auto header = split_delimited(lines.front(), ',');
  if (header.empty() || detail::trim(header.front()) != "date") throw Error("panel file: first column must be 'date'");
  const std::size_t n = lines.size() - 1;
  if (n == 0) throw Error("panel file: no rows");

  std::vector<std::vector<double>> cols(header.size() - 1, std::vector<double>(n));
  std::optional<Date> start;
  for (std::size_t r = 0; r < n; ++r) {
    auto f = split_delimited(lines[r + 1], ',');
    if (f.size() != header.size()) throw Error("panel file row " + std::to_string(r + 1) + ": wrong field count");
    auto date = parse_iso_date(detail::trim(f[0]));
    if (!date) throw Error("panel file row " + std::to_string(r + 1) + ": invalid date '" + f[0] + "'");
    if (!start) start = date;
    if (*date != *start + static_cast<std::int64_t>(r))
      throw Error("panel file row " + std::to_string(r + 1) + ": dates are not contiguous at " + date->iso());
    for (std::size_t c = 1; c < f.size(); ++c) {
      auto v = parse_number(f[c]);
      if (!v)
        throw Error("panel file row " + std::to_string(r + 1) + ": malformed or missing value in column '" +
                    header[c] + "'");
      cols[c - 1][r] = *v;
    }
  }
  AlignedPanel panel(*start, n);
  for (std::size_t c = 1; c < header.size(); ++c) {
    std::string name(detail::trim(header[c]));
    const auto source = infer_source(name);
    panel.add_column(std::move(name), std::move(cols[c - 1]), Provenance{source, {}});
  }
  return panel;
}

}  // namespace moodmkt
