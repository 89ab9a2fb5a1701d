#pragma once

// Dataset ingestion and transformation: price CSVs to discretized return
// frequencies, count tables, and the embedded music-hits table.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ys/error.hpp"
#include "ys/yule_simon.hpp"

namespace ys {

struct PricePoint {
  std::chrono::year_month_day date;
  double adj_close;
};

struct PriceSeries {
  std::vector<PricePoint> points;  // strictly increasing dates, prices > 0
};

struct ReturnSeries {
  std::vector<double> values;  // |r_t / r_{t-1} - 1| * 100
};

struct CountRow {
  std::string label;
  std::uint64_t frequency;
};

struct CountTable {
  std::vector<CountRow> rows;
};

// How a two-column count table maps to observations.
//   Hits:     `k,count`         -> k observed `count` times.
//   Surnames: `label,frequency` -> each row is one observation k = frequency.
enum class CountMode { Hits, Surnames };

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = line.find(',');
    out.push_back(trim(line.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return out;
}

// Data lines of a CSV with a required header, with 1-based line numbers.
struct CsvLine {
  std::size_t number;
  std::vector<std::string_view> fields;
};

class CsvReader {
 public:
  CsvReader(std::istream& in, std::string_view expected_header) {
    std::string line;
    std::size_t number = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
      ++number;
      if (number == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      if (trim(line).empty()) continue;
      if (!header_seen) {
        std::string normalized;
        for (auto f : split_csv(line)) normalized += std::string(f) + ",";
        normalized.pop_back();
        if (normalized != expected_header)
          throw DataError("expected header '" + std::string(expected_header) + "'", number);
        header_seen = true;
        continue;
      }
      storage_.push_back(line);
      numbers_.push_back(number);
    }
    if (!header_seen) throw DataError("missing header '" + std::string(expected_header) + "'");
  }

  std::size_t size() const noexcept { return storage_.size(); }

  CsvLine at(std::size_t i, std::size_t columns) const {
    auto fields = split_csv(storage_[i]);
    if (fields.size() != columns)
      throw DataError("expected " + std::to_string(columns) + " fields, got " +
                          std::to_string(fields.size()),
                      numbers_[i]);
    return {numbers_[i], std::move(fields)};
  }

 private:
  std::vector<std::string> storage_;
  std::vector<std::size_t> numbers_;
};

inline std::uint64_t parse_count(std::string_view s, std::size_t line, const char* what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw DataError(std::string("invalid ") + what + " '" + std::string(s) + "'", line);
  if (v < 1) throw DataError(std::string(what) + " must be >= 1", line);
  return v;
}

inline double parse_real(std::string_view s, std::size_t line, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw DataError(std::string("invalid ") + what + " '" + std::string(s) + "'", line);
  return v;
}

inline std::chrono::year_month_day parse_date(std::string_view s, std::size_t line) {
  auto bad = [&] { return DataError("invalid ISO-8601 date '" + std::string(s) + "'", line); };
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw bad();
  auto num = [&](std::size_t off, std::size_t len) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data() + off, s.data() + off + len, v);
    if (ec != std::errc{} || ptr != s.data() + off + len) throw bad();
    return v;
  };
  const std::chrono::year_month_day ymd{std::chrono::year{num(0, 4)},
                                        std::chrono::month{static_cast<unsigned>(num(5, 2))},
                                        std::chrono::day{static_cast<unsigned>(num(8, 2))}};
  if (!ymd.ok()) throw bad();
  return ymd;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

// CSV with header `date,adj_close`. Rows must already be in strictly
// increasing date order; nothing is re-sorted.
inline PriceSeries parse_prices(std::istream& in) {
  const detail::CsvReader csv(in, "date,adj_close");
  PriceSeries series;
  for (std::size_t i = 0; i < csv.size(); ++i) {
    const auto row = csv.at(i, 2);
    const auto date = detail::parse_date(row.fields[0], row.number);
    const double price = detail::parse_real(row.fields[1], row.number, "adj_close");
    if (!(price > 0.0)) throw DataError("adj_close must be positive", row.number);
    if (!series.points.empty() && !(series.points.back().date < date))
      throw DataError("dates not strictly increasing", row.number);
    series.points.push_back({date, price});
  }
  return series;
}

inline PriceSeries ingest_prices(const std::string& path) {
  auto in = detail::open_input(path);
  return parse_prices(in);
}

inline ReturnSeries to_returns(const PriceSeries& prices) {
  if (prices.points.size() < 2) throw DataError("to_returns: need at least two prices");
  ReturnSeries out;
  out.values.reserve(prices.points.size() - 1);
  for (std::size_t t = 1; t < prices.points.size(); ++t) {
    const double ratio = prices.points[t].adj_close / prices.points[t - 1].adj_close;
    out.values.push_back(std::abs(ratio - 1.0) * 100.0);
  }
  return out;
}

// Truncates each return toward zero at `decimals` places, groups equal
// truncated values, and turns each group's size into one observation.
inline FrequencySample discretize_returns(const ReturnSeries& returns, int decimals = 2) {
  if (returns.values.empty()) throw DataError("discretize_returns: no returns");
  if (decimals < 0 || decimals > 9) throw DomainError("discretize_returns: decimals must be in [0, 9]");
  const double scale = std::pow(10.0, decimals);
  std::map<std::int64_t, std::uint64_t> groups;
  for (double z : returns.values) {
    if (!(z >= 0.0) || !std::isfinite(z)) throw DataError("discretize_returns: invalid return");
    const double scaled = z * scale;
    auto units = static_cast<std::int64_t>(std::floor(scaled));
    // 1.15 * 100 is 114.99999999999999 in binary; treat it as 115.
    if (static_cast<double>(units + 1) - scaled < 1e-9) ++units;
    ++groups[units];
  }
  std::vector<std::uint64_t> sizes;
  sizes.reserve(groups.size());
  for (const auto& [units, size] : groups) sizes.push_back(size);
  return FrequencySample::from_observations(sizes);
}

inline CountTable parse_count_table(std::istream& in, CountMode mode) {
  const detail::CsvReader csv(in, mode == CountMode::Hits ? "k,count" : "label,frequency");
  CountTable table;
  for (std::size_t i = 0; i < csv.size(); ++i) {
    const auto row = csv.at(i, 2);
    if (mode == CountMode::Hits) detail::parse_count(row.fields[0], row.number, "k");
    table.rows.push_back({std::string(row.fields[0]),
                          detail::parse_count(row.fields[1], row.number,
                                              mode == CountMode::Hits ? "count" : "frequency")});
  }
  if (table.rows.empty()) throw DataError("count table has no rows");
  return table;
}

// Observations implied by a table. Repeated k values are merged, keeping the
// order of first appearance.
inline FrequencySample to_sample(const CountTable& table, CountMode mode) {
  std::vector<FrequencyEntry> entries;
  std::map<std::uint64_t, std::size_t> where;
  auto add = [&](std::uint64_t k, std::uint64_t count) {
    auto [it, fresh] = where.try_emplace(k, entries.size());
    if (fresh)
      entries.push_back({k, count});
    else
      entries[it->second].count += count;
  };
  for (const auto& row : table.rows) {
    if (mode == CountMode::Hits) {
      std::uint64_t k = 0;
      std::from_chars(row.label.data(), row.label.data() + row.label.size(), k);
      if (k < 1) throw DataError("invalid k label '" + row.label + "'");
      add(k, row.frequency);
    } else {
      add(row.frequency, 1);
    }
  }
  return FrequencySample(std::move(entries));
}

inline FrequencySample load_count_table(const std::string& path, CountMode mode) {
  auto in = detail::open_input(path);
  return to_sample(parse_count_table(in, mode), mode);
}

// Number-one hits per artist on the Billboard Hot 100, 1955-2003:
// label = number of hits, frequency = number of artists with that many.
inline CountTable hits_table() {
  return CountTable{{{"1", 119}, {"2", 57}, {"3", 30}, {"4", 13}, {"5", 10}, {"6", 4},
                     {"7", 1},   {"8", 1},  {"9", 4},  {"10", 2}, {"11", 1}, {"12", 2},
                     {"13", 1},  {"14", 1}, {"15", 1}, {"16", 1}}};
}

// `k,count` CSV; loads back with CountMode::Hits.
inline void write_frequency_sample(std::ostream& out, const FrequencySample& data) {
  out << "k,count\n";
  for (const auto& e : data.entries()) out << e.k << ',' << e.count << '\n';
}

}  // namespace ys
