#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "openresp/error.hpp"
#include "openresp/io.hpp"

namespace openresp::embeddings {

// Row-major matrix of answer vectors.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  explicit EmbeddingMatrix(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool normalized() const noexcept { return normalized_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }

  void add_row(std::string id, std::span<const double> v) {
    if (v.size() != dim_)
      throw DataError("row '" + id + "' has " + std::to_string(v.size()) + " values, expected " +
                      std::to_string(dim_));
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!std::isfinite(v[k]))
        throw DataError("non-finite value in row '" + id + "' at column " + std::to_string(k + 1));
    ids_.push_back(std::move(id));
    values_.insert(values_.end(), v.begin(), v.end());
    normalized_ = false;
  }

  // Rescales every row to unit L2 norm; zero rows are rejected. Returns the
  // number of rows whose norm was off by more than 1e-6.
  std::size_t normalize_rows() {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      double* r = values_.data() + i * dim_;
      double ss = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) ss += r[k] * r[k];
      const double norm = std::sqrt(ss);
      if (norm == 0.0) throw DataError("zero vector for id '" + ids_[i] + "'");
      if (std::abs(norm - 1.0) > 1e-6) {
        for (std::size_t k = 0; k < dim_; ++k) r[k] /= norm;
        ++changed;
      }
    }
    normalized_ = true;
    return changed;
  }

  // Rows reordered to follow `order`; every id must be present.
  EmbeddingMatrix select(const std::vector<std::string>& order) const {
    std::map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < ids_.size(); ++i) index.emplace(ids_[i], i);
    EmbeddingMatrix out(dim_);
    for (const auto& id : order) {
      auto it = index.find(id);
      if (it == index.end()) throw DataError("no vector for id '" + id + "'");
      out.ids_.push_back(id);
      auto r = row(it->second);
      out.values_.insert(out.values_.end(), r.begin(), r.end());
    }
    out.normalized_ = normalized_;
    return out;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<double> values_;
  bool normalized_ = false;
};

inline double cosine(std::span<const double> a, std::span<const double> b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  return ab / std::sqrt(aa * bb);
}

// Vectors file: "DIM <d>" then "<id>\t<v1> <v2> ... <vd>" per row, shortest
// round-trip decimal floats.
inline std::string to_vectors_text(const EmbeddingMatrix& m) {
  std::string out = "DIM " + std::to_string(m.dim()) + "\n";
  char buf[64];
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += m.ids()[i];
    out += '\t';
    auto r = m.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (k) out += ' ';
      auto res = std::to_chars(buf, buf + sizeof buf, r[k]);
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

inline EmbeddingMatrix parse_vectors(std::string_view text, const std::string& source = "<vectors>") {
  std::size_t pos = 0, line_no = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++line_no;
    return true;
  };
  std::string_view line;
  if (!next_line(line) || line.substr(0, 4) != "DIM ") throw ParseError(source, 1, "expected 'DIM <d>' header");
  std::size_t dim = 0;
  auto hdr = line.substr(4);
  auto [hp, hec] = std::from_chars(hdr.data(), hdr.data() + hdr.size(), dim);
  if (hec != std::errc{} || hp != hdr.data() + hdr.size() || dim == 0)
    throw ParseError(source, 1, "invalid dimension '" + std::string(hdr) + "'");

  EmbeddingMatrix m(dim);
  std::set<std::string, std::less<>> seen;
  std::vector<double> row;
  while (next_line(line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) throw ParseError(source, line_no, "expected '<id>\\t<values>'");
    std::string id(line.substr(0, tab));
    if (!seen.insert(id).second) throw ParseError(source, line_no, "duplicate id '" + id + "'");
    row.clear();
    std::string_view rest = line.substr(tab + 1);
    std::size_t p = 0;
    while (p < rest.size()) {
      while (p < rest.size() && rest[p] == ' ') ++p;
      if (p >= rest.size()) break;
      auto e = rest.find(' ', p);
      if (e == std::string_view::npos) e = rest.size();
      std::string_view tok = rest.substr(p, e - p);
      double v = 0.0;
      auto [vp, vec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (vec != std::errc{} || vp != tok.data() + tok.size())
        throw ParseError(source, line_no,
                         "row '" + id + "' column " + std::to_string(row.size() + 1) + ": bad number '" +
                             std::string(tok) + "'");
      if (!std::isfinite(v))
        throw ParseError(source, line_no,
                         "row '" + id + "' column " + std::to_string(row.size() + 1) + ": non-finite value");
      row.push_back(v);
      p = e;
    }
    if (row.size() != dim)
      throw ParseError(source, line_no,
                       "row '" + id + "' has " + std::to_string(row.size()) + " values, DIM is " +
                           std::to_string(dim));
    m.add_row(std::move(id), row);
  }
  return m;
}

// Loads and L2-normalizes rows that are not already unit length.
inline EmbeddingMatrix load_vectors(const std::filesystem::path& path) {
  auto m = parse_vectors(read_file(path), path.string());
  m.normalize_rows();
  return m;
}

inline void store_vectors(const std::filesystem::path& path, const EmbeddingMatrix& m) {
  write_file(path, to_vectors_text(m));
}

}  // namespace openresp::embeddings
