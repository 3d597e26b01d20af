#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cxnprobe/error.hpp"
#include "cxnprobe/io.hpp"

namespace cxnprobe {

enum class Granularity { sentence, token };

inline const char* to_string(Granularity g) {
  return g == Granularity::sentence ? "sentence" : "token";
}

struct ItemRecord {
  std::string item_id;
  std::size_t row_start = 0;
  std::size_t row_count = 0;
  // Row offset (relative to row_start) of the tracked verb's first subword.
  std::optional<std::size_t> target_span;
  // Row offsets of sequence markers; excluded from pooling.
  std::vector<std::size_t> special_rows;
  // Free-form tag; corpus containers store the matched lemma here.
  std::string label;

  friend bool operator==(const ItemRecord&, const ItemRecord&) = default;
};

struct EmbeddingManifest {
  std::string schema_version = "embstore/1";
  std::string model_id;
  int model_layers = 0;  // depth of the source model, 0 when unknown
  int layer_index = 0;   // absolute, 1 = first transformer layer
  std::size_t dim = 0;
  std::size_t count = 0;
  Granularity granularity = Granularity::sentence;
  bool pooling_excludes_special = true;
  std::optional<std::string> standardization_source;
  std::string sha256;  // of the binary payload; filled on write
  std::vector<ItemRecord> items;

  friend bool operator==(const EmbeddingManifest&, const EmbeddingManifest&) = default;
};

// count x dim float32, row-major.
struct EmbeddingMatrix {
  EmbeddingManifest manifest;
  std::vector<float> data;

  std::span<const float> row(std::size_t r) const {
    return std::span<const float>(data).subspan(r * manifest.dim, manifest.dim);
  }
  std::span<float> row(std::size_t r) {
    return std::span<float>(data).subspan(r * manifest.dim, manifest.dim);
  }

  const ItemRecord* find_item(std::string_view item_id) const {
    for (const auto& it : manifest.items) {
      if (it.item_id == item_id) return &it;
    }
    return nullptr;
  }

  // item_id -> index into manifest.items
  std::unordered_map<std::string, std::size_t> item_index() const {
    std::unordered_map<std::string, std::size_t> idx;
    idx.reserve(manifest.items.size());
    for (std::size_t i = 0; i < manifest.items.size(); ++i) idx.emplace(manifest.items[i].item_id, i);
    return idx;
  }
};

struct ContainerPaths {
  std::filesystem::path manifest;
  std::filesystem::path binary;
};

// Accepts a stem ("out/roberta"), or either of the two file names.
inline ContainerPaths container_paths(const std::filesystem::path& p) {
  std::string s = p.string();
  for (std::string_view suffix : {".embmanifest.json", ".embf32"}) {
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
      s.resize(s.size() - suffix.size());
      break;
    }
  }
  return {s + ".embmanifest.json", s + ".embf32"};
}

inline void validate_manifest(const EmbeddingManifest& m) {
  auto fail = [](const std::string& msg) { throw Error(Errc::manifest, msg); };
  if (m.schema_version != "embstore/1") fail("unsupported container schema '" + m.schema_version + "'");
  if (m.dim == 0) fail("dim must be positive");
  std::size_t next = 0;
  std::unordered_set<std::string> seen;
  for (const auto& it : m.items) {
    if (!seen.insert(it.item_id).second) fail("duplicate item_id '" + it.item_id + "'");
    if (it.row_start != next) fail("item '" + it.item_id + "' rows are not contiguous");
    if (it.row_count == 0) fail("item '" + it.item_id + "' has no rows");
    if (m.granularity == Granularity::sentence && (it.row_count != 1 || it.target_span)) {
      fail("sentence container item '" + it.item_id + "' must have one row and no target_span");
    }
    if (it.target_span && *it.target_span >= it.row_count) {
      fail("item '" + it.item_id + "' target_span out of range");
    }
    for (auto r : it.special_rows) {
      if (r >= it.row_count) fail("item '" + it.item_id + "' special row out of range");
    }
    next += it.row_count;
  }
  if (next != m.count) fail("row counts sum to " + std::to_string(next) + ", manifest count is " +
                            std::to_string(m.count));
}

inline void check_finite(std::span<const float> data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      throw Error(Errc::non_finite, "non-finite value at flat index " + std::to_string(i));
    }
  }
}

inline void validate_matrix(const EmbeddingMatrix& m) {
  validate_manifest(m.manifest);
  if (m.data.size() != m.manifest.count * m.manifest.dim) {
    throw Error(Errc::length_mismatch, "matrix holds " + std::to_string(m.data.size()) +
                                           " values, manifest expects " +
                                           std::to_string(m.manifest.count * m.manifest.dim));
  }
  check_finite(m.data);
}

inline nlohmann::ordered_json manifest_to_json(const EmbeddingManifest& m,
                                               const std::string& binary_name) {
  nlohmann::ordered_json j;
  j["schema_version"] = m.schema_version;
  j["model_id"] = m.model_id;
  j["model_layers"] = m.model_layers;
  j["layer_index"] = m.layer_index;
  j["dim"] = m.dim;
  j["count"] = m.count;
  j["granularity"] = to_string(m.granularity);
  j["dtype"] = "float32-le";
  j["pooling"] = {{"exclude_special", m.pooling_excludes_special}};
  j["standardization_source"] =
      m.standardization_source ? nlohmann::ordered_json(*m.standardization_source)
                               : nlohmann::ordered_json(nullptr);
  j["binary"] = binary_name;
  j["sha256"] = m.sha256;
  auto items = nlohmann::ordered_json::array();
  for (const auto& it : m.items) {
    nlohmann::ordered_json ji;
    ji["item_id"] = it.item_id;
    ji["row_start"] = it.row_start;
    ji["row_count"] = it.row_count;
    if (it.target_span) ji["target_span"] = *it.target_span;
    if (!it.special_rows.empty()) ji["special_rows"] = it.special_rows;
    if (!it.label.empty()) ji["label"] = it.label;
    items.push_back(std::move(ji));
  }
  j["items"] = std::move(items);
  return j;
}

inline EmbeddingManifest manifest_from_json(const nlohmann::json& j) {
  try {
    EmbeddingManifest m;
    m.schema_version = j.at("schema_version").get<std::string>();
    m.model_id = j.at("model_id").get<std::string>();
    m.model_layers = j.value("model_layers", 0);
    m.layer_index = j.at("layer_index").get<int>();
    m.dim = j.at("dim").get<std::size_t>();
    m.count = j.at("count").get<std::size_t>();
    const auto g = j.at("granularity").get<std::string>();
    if (g == "sentence") {
      m.granularity = Granularity::sentence;
    } else if (g == "token") {
      m.granularity = Granularity::token;
    } else {
      throw Error(Errc::manifest, "unknown granularity '" + g + "'");
    }
    if (j.value("dtype", "float32-le") != "float32-le") {
      throw Error(Errc::manifest, "only float32-le payloads are supported");
    }
    if (auto it = j.find("pooling"); it != j.end()) {
      m.pooling_excludes_special = it->value("exclude_special", true);
    }
    if (auto it = j.find("standardization_source"); it != j.end() && !it->is_null()) {
      m.standardization_source = it->get<std::string>();
    }
    m.sha256 = j.value("sha256", "");
    for (const auto& ji : j.at("items")) {
      ItemRecord it;
      it.item_id = ji.at("item_id").get<std::string>();
      it.row_start = ji.at("row_start").get<std::size_t>();
      it.row_count = ji.at("row_count").get<std::size_t>();
      if (auto t = ji.find("target_span"); t != ji.end() && !t->is_null()) {
        it.target_span = t->get<std::size_t>();
      }
      if (auto s = ji.find("special_rows"); s != ji.end()) {
        it.special_rows = s->get<std::vector<std::size_t>>();
      }
      it.label = ji.value("label", "");
      m.items.push_back(std::move(it));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::manifest, std::string("malformed manifest: ") + e.what());
  }
}

namespace detail {

inline std::string encode_payload(std::span<const float> data) {
  std::string bytes(data.size() * sizeof(float), '\0');
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(bytes.data(), data.data(), bytes.size());
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) {
      auto u = std::bit_cast<std::uint32_t>(data[i]);
      for (int b = 0; b < 4; ++b) bytes[4 * i + b] = static_cast<char>((u >> (8 * b)) & 0xff);
    }
  }
  return bytes;
}

inline std::vector<float> decode_payload(std::string_view bytes) {
  std::vector<float> data(bytes.size() / sizeof(float));
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(data.data(), bytes.data(), data.size() * sizeof(float));
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) {
      std::uint32_t u = 0;
      for (int b = 0; b < 4; ++b) {
        u |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[4 * i + b])) << (8 * b);
      }
      data[i] = std::bit_cast<float>(u);
    }
  }
  return data;
}

}  // namespace detail

// Writes <stem>.embf32 then <stem>.embmanifest.json, each via temp+rename;
// the manifest appearing marks the container complete.
inline void write_container(const EmbeddingMatrix& matrix, const std::filesystem::path& stem) {
  validate_matrix(matrix);
  const auto paths = container_paths(stem);
  const std::string payload = detail::encode_payload(matrix.data);
  EmbeddingManifest m = matrix.manifest;
  m.sha256 = io::sha256_hex(payload);
  io::atomic_write(paths.binary, payload);
  io::atomic_write(paths.manifest,
                   manifest_to_json(m, paths.binary.filename().string()).dump(1) + "\n");
}

inline EmbeddingMatrix read_container(const std::filesystem::path& stem) {
  const auto paths = container_paths(stem);
  if (!std::filesystem::exists(paths.manifest)) {
    throw Error(Errc::io, "container manifest '" + paths.manifest.string() + "' not found");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(paths.manifest));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::manifest, "manifest '" + paths.manifest.string() + "': " + e.what());
  }
  EmbeddingMatrix out;
  out.manifest = manifest_from_json(j);
  validate_manifest(out.manifest);
  auto binary = paths.binary;
  if (auto it = j.find("binary"); it != j.end()) binary = paths.manifest.parent_path() / it->get<std::string>();
  if (!std::filesystem::exists(binary)) {
    throw Error(Errc::io, "container payload '" + binary.string() + "' not found");
  }
  const std::string payload = io::read_file(binary);
  const std::size_t expected = out.manifest.count * out.manifest.dim * sizeof(float);
  if (payload.size() != expected) {
    throw Error(Errc::length_mismatch, "payload '" + binary.string() + "' has " +
                                           std::to_string(payload.size()) + " bytes, expected " +
                                           std::to_string(expected));
  }
  if (io::sha256_hex(payload) != out.manifest.sha256) {
    throw Error(Errc::checksum_mismatch, "payload '" + binary.string() + "' fails its checksum");
  }
  out.data = detail::decode_payload(payload);
  check_finite(out.data);
  return out;
}

// Rows of an item that take part in pooling.
inline std::vector<std::size_t> pooled_rows(const EmbeddingManifest& m, const ItemRecord& item) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < item.row_count; ++r) {
    if (m.pooling_excludes_special &&
        std::find(item.special_rows.begin(), item.special_rows.end(), r) != item.special_rows.end()) {
      continue;
    }
    rows.push_back(item.row_start + r);
  }
  return rows;
}

// Mean of the item's non-special rows, accumulated in double.
inline std::vector<double> pool_sentence(const EmbeddingMatrix& matrix, std::string_view item_id) {
  const ItemRecord* item = matrix.find_item(item_id);
  if (!item) throw Error(Errc::missing_item, "no item '" + std::string(item_id) + "' in container");
  const auto rows = pooled_rows(matrix.manifest, *item);
  if (rows.empty()) {
    throw Error(Errc::degenerate_item, "item '" + std::string(item_id) + "' has no poolable rows");
  }
  std::vector<double> acc(matrix.manifest.dim, 0.0);
  for (auto r : rows) {
    auto v = matrix.row(r);
    for (std::size_t d = 0; d < acc.size(); ++d) acc[d] += v[d];
  }
  for (auto& x : acc) x /= static_cast<double>(rows.size());
  return acc;
}

// Token container -> sentence container (one pooled row per item).
inline EmbeddingMatrix pool_container(const EmbeddingMatrix& tokens) {
  EmbeddingMatrix out;
  out.manifest = tokens.manifest;
  out.manifest.granularity = Granularity::sentence;
  out.manifest.count = tokens.manifest.items.size();
  out.manifest.sha256.clear();
  out.data.reserve(out.manifest.count * out.manifest.dim);
  std::size_t row = 0;
  for (auto& it : out.manifest.items) {
    for (double x : pool_sentence(tokens, it.item_id)) out.data.push_back(static_cast<float>(x));
    it.row_start = row++;
    it.row_count = 1;
    it.target_span.reset();
    it.special_rows.clear();
  }
  return out;
}

struct StandardizationStats {
  std::vector<double> mean;
  std::vector<double> std;
  std::size_t sample_size = 0;
  std::string source_id;
  std::size_t floored_dims = 0;
};

inline constexpr double kStdFloor = 1e-8;

// Per-dimension mean and population standard deviation over all
// non-special rows.
inline StandardizationStats compute_standardization_stats(const EmbeddingMatrix& matrix,
                                                          std::string source_id = {}) {
  const std::size_t dim = matrix.manifest.dim;
  std::vector<std::size_t> rows;
  for (const auto& it : matrix.manifest.items) {
    for (auto r : pooled_rows(matrix.manifest, it)) rows.push_back(r);
  }
  if (rows.size() < 2) {
    throw Error(Errc::argument, "standardization needs at least 2 rows, got " +
                                    std::to_string(rows.size()));
  }
  // Welford update per dimension.
  std::vector<double> mean(dim, 0.0), m2(dim, 0.0);
  std::size_t n = 0;
  for (auto r : rows) {
    ++n;
    auto v = matrix.row(r);
    for (std::size_t d = 0; d < dim; ++d) {
      const double x = v[d];
      const double delta = x - mean[d];
      mean[d] += delta / static_cast<double>(n);
      m2[d] += delta * (x - mean[d]);
    }
  }
  StandardizationStats stats;
  stats.mean = std::move(mean);
  stats.std.resize(dim);
  stats.sample_size = n;
  stats.source_id = source_id.empty() ? matrix.manifest.model_id : std::move(source_id);
  for (std::size_t d = 0; d < dim; ++d) {
    const double sd = std::sqrt(m2[d] / static_cast<double>(n));
    if (sd < kStdFloor) {
      stats.std[d] = kStdFloor;
      ++stats.floored_dims;
    } else {
      stats.std[d] = sd;
    }
  }
  return stats;
}

inline EmbeddingMatrix apply_standardization(const EmbeddingMatrix& matrix,
                                             const StandardizationStats& stats) {
  const std::size_t dim = matrix.manifest.dim;
  if (stats.mean.size() != dim || stats.std.size() != dim) {
    throw Error(Errc::argument, "standardization stats have dim " +
                                    std::to_string(stats.mean.size()) + ", container has " +
                                    std::to_string(dim));
  }
  EmbeddingMatrix out = matrix;
  out.manifest.standardization_source = stats.source_id;
  out.manifest.sha256.clear();
  for (std::size_t r = 0; r < out.manifest.count; ++r) {
    auto row = out.row(r);
    for (std::size_t d = 0; d < dim; ++d) {
      row[d] = static_cast<float>((static_cast<double>(row[d]) - stats.mean[d]) / stats.std[d]);
    }
  }
  return out;
}

inline nlohmann::ordered_json stats_to_json(const StandardizationStats& s) {
  nlohmann::ordered_json j;
  j["schema"] = "embstats/1";
  j["source_id"] = s.source_id;
  j["sample_size"] = s.sample_size;
  j["dim"] = s.mean.size();
  j["floored_dims"] = s.floored_dims;
  j["mean"] = s.mean;
  j["std"] = s.std;
  return j;
}

inline StandardizationStats stats_from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "embstats/1") {
    throw Error(Errc::validation, "stats schema must be 'embstats/1'");
  }
  try {
    StandardizationStats s;
    s.source_id = j.at("source_id").get<std::string>();
    s.sample_size = j.at("sample_size").get<std::size_t>();
    s.floored_dims = j.value("floored_dims", std::size_t{0});
    s.mean = j.at("mean").get<std::vector<double>>();
    s.std = j.at("std").get<std::vector<double>>();
    if (s.mean.size() != s.std.size()) throw Error(Errc::validation, "stats mean/std length differ");
    for (double v : s.std) {
      if (!(v > 0.0)) throw Error(Errc::validation, "stats std must be positive");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::validation, std::string("malformed stats: ") + e.what());
  }
}

}  // namespace cxnprobe
