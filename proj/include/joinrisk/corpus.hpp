//
// Copyright 2026 The joinrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Dataset metadata, column-typed tables, the privacy-attribute dictionary and
// corpus-level filtering.

#ifndef JOINRISK_CORPUS_HPP_
#define JOINRISK_CORPUS_HPP_

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "joinrisk/binning.hpp"
#include "joinrisk/error.hpp"
#include "joinrisk/util.hpp"

namespace joinrisk {

inline constexpr std::size_t kDefaultRecordCap = 100000;

// ---------------------------------------------------------------------------
// Attribute names
// ---------------------------------------------------------------------------

namespace internal {

inline bool IsAsciiUpper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
inline bool IsAsciiLower(unsigned char c) { return c >= 'a' && c <= 'z'; }
inline bool IsAsciiDigit(unsigned char c) { return c >= '0' && c <= '9'; }
// Bytes >= 0x80 are kept so non-ASCII names survive normalization.
inline bool IsWordByte(unsigned char c) {
  return IsAsciiUpper(c) || IsAsciiLower(c) || IsAsciiDigit(c) || c >= 0x80;
}

}  // namespace internal

// Lowercases, splits camelCase boundaries ("offenderRace" -> "offender_race",
// "HTTPServer" -> "http_server"), collapses every run of other characters
// into one underscore and trims underscores at both ends.
inline std::string NormalizeAttribute(std::string_view raw) {
  using namespace internal;
  std::string out;
  out.reserve(raw.size() + 4);
  bool pending_sep = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto c = static_cast<unsigned char>(raw[i]);
    if (!IsWordByte(c)) {
      pending_sep = true;
      continue;
    }
    if (IsAsciiUpper(c) && i > 0) {
      const auto prev = static_cast<unsigned char>(raw[i - 1]);
      const bool next_lower =
          i + 1 < raw.size() &&
          IsAsciiLower(static_cast<unsigned char>(raw[i + 1]));
      if (IsAsciiLower(prev) || IsAsciiDigit(prev) ||
          (IsAsciiUpper(prev) && next_lower)) {
        pending_sep = true;
      }
    }
    if (pending_sep && !out.empty()) out.push_back('_');
    pending_sep = false;
    out.push_back(IsAsciiUpper(c) ? static_cast<char>(c - 'A' + 'a')
                                  : static_cast<char>(c));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kInvalidAttributeName,
                "attribute name '" + std::string(raw) +
                    "' is empty after normalization");
  }
  return out;
}

// Lowercase + trim; used wherever category values are compared.
inline std::string NormalizeValue(std::string_view raw) {
  std::size_t b = 0;
  std::size_t e = raw.size();
  while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
  std::string out(raw.substr(b, e - b));
  for (auto& ch : out) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

enum class Granularity { kIndividual, kAggregated };

inline std::string_view GranularityName(Granularity g) {
  return g == Granularity::kIndividual ? "individual" : "aggregated";
}

inline Granularity ParseGranularity(std::string_view text) {
  const std::string v = NormalizeValue(text);
  if (v == "individual") return Granularity::kIndividual;
  if (v == "aggregated" || v == "aggregate") return Granularity::kAggregated;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown granularity '" + std::string(text) + "'");
}

struct LocalFile {
  std::string path;
  bool operator==(const LocalFile&) const = default;
};
struct Remote {
  std::string permalink;
  bool operator==(const Remote&) const = default;
};
using DatasetSource = std::variant<LocalFile, Remote>;

struct DatasetMeta {
  std::string id;
  std::string name;
  std::string portal;
  std::set<std::string> tags;
  Granularity granularity = Granularity::kIndividual;
  std::vector<std::string> attribute_names;  // raw header strings
  std::size_t row_count = 0;
  DatasetSource source = LocalFile{};
  bool truncated = false;

  bool operator==(const DatasetMeta&) const = default;
};

// Partial metadata supplied by a manifest entry or a caller.
struct MetaOverrides {
  std::optional<std::string> id;
  std::optional<std::string> name;
  std::optional<std::string> portal;
  std::optional<std::set<std::string>> tags;
  std::optional<Granularity> granularity;
  std::optional<DatasetSource> source;
};

enum class ColumnKind { kCategorical, kNumeric };

inline std::string_view ColumnKindName(ColumnKind k) {
  return k == ColumnKind::kNumeric ? "numeric" : "categorical";
}

struct Missing {
  bool operator==(const Missing&) const = default;
};
using Cell = std::variant<Missing, std::string, double>;

inline bool IsMissing(const Cell& c) {
  return std::holds_alternative<Missing>(c);
}

inline std::string CellText(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return FormatNumber(*d);
  return "";
}

struct Column {
  std::string name;  // normalized
  ColumnKind kind = ColumnKind::kCategorical;
  std::vector<Cell> cells;

  bool operator==(const Column&) const = default;

  std::vector<double> NumericValues() const {
    std::vector<double> out;
    for (const auto& c : cells) {
      if (const auto* d = std::get_if<double>(&c)) out.push_back(*d);
    }
    return out;
  }
};

// Discrete label per cell for frequency work: normalized text for
// categories, four-bin labels for numbers. Missing cells map to nullopt.
// Text sentinels inside a numeric column keep their own normalized label.
class CellLabeler {
 public:
  explicit CellLabeler(const Column& column) {
    if (column.kind == ColumnKind::kNumeric) {
      auto values = column.NumericValues();
      if (!values.empty()) bins_.emplace(ComputeNumericBins(values));
    }
  }
  CellLabeler(const Column& column, NumericBins bins) {
    if (column.kind == ColumnKind::kNumeric) bins_.emplace(std::move(bins));
  }

  std::optional<std::string> operator()(const Cell& c) const {
    if (const auto* d = std::get_if<double>(&c)) {
      if (bins_) return bins_->LabelOf(*d);
      return FormatNumber(*d);
    }
    if (const auto* s = std::get_if<std::string>(&c)) return NormalizeValue(*s);
    return std::nullopt;
  }

  const std::optional<NumericBins>& bins() const { return bins_; }

 private:
  std::optional<NumericBins> bins_;
};

struct DatasetTable {
  DatasetMeta meta;
  std::vector<Column> columns;

  bool operator==(const DatasetTable&) const = default;

  std::size_t row_count() const { return meta.row_count; }

  const Column* FindColumn(std::string_view normalized) const {
    for (const auto& c : columns) {
      if (c.name == normalized) return &c;
    }
    return nullptr;
  }

  std::vector<std::string> ColumnNames() const {
    std::vector<std::string> out;
    out.reserve(columns.size());
    for (const auto& c : columns) out.push_back(c.name);
    return out;
  }
};

// Normalized attribute names of a dataset (from its metadata header).
inline std::vector<std::string> NormalizedAttributes(const DatasetMeta& meta) {
  std::vector<std::string> out;
  out.reserve(meta.attribute_names.size());
  for (const auto& raw : meta.attribute_names) {
    out.push_back(NormalizeAttribute(raw));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cell parsing and kind inference
// ---------------------------------------------------------------------------

inline bool IsMissingToken(std::string_view raw) {
  const std::string v = NormalizeValue(raw);
  return v.empty() || v == "na" || v == "n/a" || v == "null";
}

inline std::optional<double> ParseFiniteNumber(std::string_view raw) {
  std::size_t b = 0;
  std::size_t e = raw.size();
  while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
  if (b == e) return std::nullopt;
  if (raw[b] == '+') ++b;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(raw.data() + b, raw.data() + e, value);
  if (ec != std::errc() || ptr != raw.data() + e || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

// Numeric iff at least 90% of the non-missing cells parse as finite numbers.
// An all-missing column is categorical.
inline ColumnKind InferColumnKind(const std::vector<std::string>& raw_cells) {
  std::size_t present = 0;
  std::size_t numeric = 0;
  for (const auto& raw : raw_cells) {
    if (IsMissingToken(raw)) continue;
    ++present;
    if (ParseFiniteNumber(raw)) ++numeric;
  }
  if (present == 0) return ColumnKind::kCategorical;
  return numeric * 10 >= present * 9 ? ColumnKind::kNumeric
                                     : ColumnKind::kCategorical;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

// RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF line endings.
// Every record must have the header's field count.
inline std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_row = [&] {
    end_field();
    const bool blank = row.size() == 1 && row[0].empty();
    if (!blank) {
      if (!rows.empty() && row.size() != rows.front().size()) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line) + ": expected " +
                        std::to_string(rows.front().size()) + " fields, got " +
                        std::to_string(row.size()));
      }
      rows.push_back(std::move(row));
    }
    row.clear();
  };

  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
    text.remove_prefix(3);
  }
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw Error(ErrorCode::kParseError,
                      "line " + std::to_string(line) +
                          ": stray quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_row();
        ++line;
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        if (field_was_quoted) {
          throw Error(ErrorCode::kParseError,
                      "line " + std::to_string(line) +
                          ": characters after closing quote");
        }
        field.push_back(c);
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kParseError, "unterminated quoted field");
  }
  if (!field.empty() || field_was_quoted || !row.empty()) end_row();
  return rows;
}

struct IngestOptions {
  std::size_t record_cap = kDefaultRecordCap;
  bool truncate = false;
};

inline void ApplyOverrides(DatasetMeta& meta, const MetaOverrides& o) {
  if (o.id) meta.id = *o.id;
  if (o.name) meta.name = *o.name;
  if (o.portal) meta.portal = *o.portal;
  if (o.tags) {
    meta.tags.clear();
    for (const auto& t : *o.tags) meta.tags.insert(NormalizeValue(t));
  }
  if (o.granularity) meta.granularity = *o.granularity;
  if (o.source) meta.source = *o.source;
}

// Builds a typed table from CSV bytes. Deterministic: identical bytes and
// options give identical tables.
inline DatasetTable IngestCsvText(std::string_view text,
                                  const MetaOverrides& overrides = {},
                                  const IngestOptions& options = {}) {
  auto rows = ParseCsv(text);
  if (rows.empty()) throw Error(ErrorCode::kEmptyTable, "no header row");
  const auto& header = rows.front();
  const std::size_t data_rows = rows.size() - 1;
  if (data_rows == 0) throw Error(ErrorCode::kEmptyTable, "no data rows");

  DatasetTable table;
  ApplyOverrides(table.meta, overrides);
  std::size_t kept = data_rows;
  if (data_rows > options.record_cap) {
    if (!options.truncate) {
      throw Error(ErrorCode::kCapExceeded,
                  std::to_string(data_rows) + " rows exceed the record cap of " +
                      std::to_string(options.record_cap));
    }
    kept = options.record_cap;
    table.meta.truncated = true;
  }
  table.meta.row_count = kept;
  table.meta.attribute_names = header;

  std::unordered_set<std::string> seen;
  table.columns.reserve(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    Column col;
    col.name = NormalizeAttribute(header[c]);
    if (!seen.insert(col.name).second) {
      throw Error(ErrorCode::kInvalidAttributeName,
                  "duplicate attribute '" + col.name + "' after normalization");
    }
    std::vector<std::string> raw;
    raw.reserve(kept);
    for (std::size_t r = 1; r <= kept; ++r) raw.push_back(rows[r][c]);
    col.kind = InferColumnKind(raw);
    col.cells.reserve(kept);
    for (auto& s : raw) {
      if (IsMissingToken(s)) {
        col.cells.emplace_back(Missing{});
      } else if (col.kind == ColumnKind::kNumeric) {
        if (auto v = ParseFiniteNumber(s)) {
          col.cells.emplace_back(*v);
        } else {
          col.cells.emplace_back(std::move(s));
        }
      } else {
        col.cells.emplace_back(std::move(s));
      }
    }
    table.columns.push_back(std::move(col));
  }
  return table;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline DatasetTable IngestCsv(const std::filesystem::path& path,
                              MetaOverrides overrides = {},
                              const IngestOptions& options = {}) {
  if (!overrides.source) overrides.source = LocalFile{path.string()};
  if (!overrides.id) overrides.id = path.stem().string();
  if (!overrides.name) overrides.name = path.stem().string();
  return IngestCsvText(ReadFile(path), overrides, options);
}

// ---------------------------------------------------------------------------
// Privacy dictionary
// ---------------------------------------------------------------------------

// Ordered set of normalized privacy-related attribute names. Every edit bumps
// the version so derived results can detect staleness.
class PrivacyDictionary {
 public:
  PrivacyDictionary() = default;
  explicit PrivacyDictionary(const std::vector<std::string>& attributes) {
    Assign(attributes);
  }

  static PrivacyDictionary Default() {
    return PrivacyDictionary({
        "age", "gender", "race",
        "age_group", "vic_age_group", "susp_age_group", "perp_age_group",
        "vict_age", "age_1", "age_at_release", "admission_age", "age_class",
        "subject_age", "patient_age", "age_range", "offender_age",
        "officer_age", "age_at_arrest",
        "sex", "susp_sex", "vic_sex", "perp_sex", "sex_1", "victim_gender",
        "suspect_gender", "complainant_sex", "officers_sex",
        "susp_race", "vic_race", "perp_race", "vict_descent", "victim_race",
        "suspect_race", "complainant_race", "officers_race", "subject_race",
        "officer_race",
    });
  }

  const std::vector<std::string>& attributes() const { return attributes_; }
  std::uint64_t version() const { return version_; }
  std::size_t size() const { return attributes_.size(); }

  bool Contains(std::string_view normalized) const {
    return index_.contains(std::string(normalized));
  }

  // Position in dictionary order, or size() when absent.
  std::size_t IndexOf(std::string_view normalized) const {
    auto it = std::find(attributes_.begin(), attributes_.end(), normalized);
    return static_cast<std::size_t>(it - attributes_.begin());
  }

  void Replace(const std::vector<std::string>& attributes) {
    Assign(attributes);
    ++version_;
  }

  void Add(std::string_view raw) {
    std::string name = NormalizeAttribute(raw);
    if (index_.insert(name).second) {
      attributes_.push_back(std::move(name));
      ++version_;
    }
  }

  void Remove(std::string_view raw) {
    const std::string name = NormalizeAttribute(raw);
    if (index_.erase(name) > 0) {
      std::erase(attributes_, name);
      ++version_;
    }
  }

  // Content fingerprint, independent of the version counter.
  std::uint64_t Fingerprint() const {
    std::uint64_t h = 0;
    for (const auto& a : attributes_) h = Hash64(a, h);
    return h;
  }

 private:
  void Assign(const std::vector<std::string>& attributes) {
    attributes_.clear();
    index_.clear();
    for (const auto& raw : attributes) {
      std::string name = NormalizeAttribute(raw);
      if (index_.insert(name).second) attributes_.push_back(std::move(name));
    }
  }

  std::vector<std::string> attributes_;
  std::unordered_set<std::string> index_;
  std::uint64_t version_ = 1;
};

// ---------------------------------------------------------------------------
// Filtering
// ---------------------------------------------------------------------------

// Within a facet any selected value matches; across facets all must match.
// An empty facet places no constraint.
struct CorpusFilter {
  std::set<std::string> tags;
  std::set<std::string> portals;
  std::optional<Granularity> granularity;

  bool Matches(const DatasetMeta& meta) const {
    if (!tags.empty()) {
      bool any = false;
      for (const auto& t : tags) {
        if (meta.tags.contains(NormalizeValue(t))) {
          any = true;
          break;
        }
      }
      if (!any) return false;
    }
    if (!portals.empty() && !portals.contains(meta.portal)) return false;
    if (granularity && meta.granularity != *granularity) return false;
    return true;
  }
};

inline std::vector<DatasetMeta> FilterCorpus(
    const std::vector<DatasetMeta>& corpus, const CorpusFilter& filter) {
  std::vector<DatasetMeta> out;
  std::copy_if(corpus.begin(), corpus.end(), std::back_inserter(out),
               [&](const DatasetMeta& m) { return filter.Matches(m); });
  return out;
}

// ---------------------------------------------------------------------------
// Corpus snapshot
// ---------------------------------------------------------------------------

// Immutable once built; shared between readers through shared_ptr<const>.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<DatasetTable> tables) : tables_(std::move(tables)) {
    std::unordered_set<std::string> ids;
    for (const auto& t : tables_) {
      if (!ids.insert(t.meta.id).second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "duplicate dataset id '" + t.meta.id + "'");
      }
    }
  }

  const std::vector<DatasetTable>& tables() const { return tables_; }
  std::size_t size() const { return tables_.size(); }

  const DatasetTable* Find(std::string_view id) const {
    for (const auto& t : tables_) {
      if (t.meta.id == id) return &t;
    }
    return nullptr;
  }

  const DatasetTable& Get(std::string_view id) const {
    if (const auto* t = Find(id)) return *t;
    throw Error(ErrorCode::kNotFound, "unknown dataset '" + std::string(id) + "'");
  }

  std::vector<DatasetMeta> Metas() const {
    std::vector<DatasetMeta> out;
    out.reserve(tables_.size());
    for (const auto& t : tables_) out.push_back(t.meta);
    return out;
  }

  std::vector<const DatasetTable*> Select(
      const std::vector<std::string>& ids) const {
    std::vector<const DatasetTable*> out;
    out.reserve(ids.size());
    for (const auto& id : ids) out.push_back(&Get(id));
    return out;
  }

  std::vector<const DatasetTable*> Select(const CorpusFilter& filter) const {
    std::vector<const DatasetTable*> out;
    for (const auto& t : tables_) {
      if (filter.Matches(t.meta)) out.push_back(&t);
    }
    return out;
  }

 private:
  std::vector<DatasetTable> tables_;
};

}  // namespace joinrisk

#endif  // JOINRISK_CORPUS_HPP_
