#include "setsum/embed.hpp"

#include <charconv>
#include <fstream>
#include "json.hpp"
#include <sstream>

namespace setsum {

WordEmbeddingTable::WordEmbeddingTable(Eigen::Index dimension)
    : dimension_(dimension), oov_(Vector::Zero(dimension)) {}

bool WordEmbeddingTable::insert(std::string token, Vector vector) {
  if (vector.size() != dimension_) {
    throw Error(Errc::DimensionMismatch, "vector for '" + token + "' has " + std::to_string(vector.size()) +
                                             " components, table dimension is " + std::to_string(dimension_));
  }
  if (rows_.contains(token)) return false;
  tokens_.push_back(token);
  rows_.emplace(std::move(token), std::move(vector));
  return true;
}

const Vector* WordEmbeddingTable::find(std::string_view token) const {
  auto it = rows_.find(std::string(token));
  return it == rows_.end() ? nullptr : &it->second;
}

const Vector& WordEmbeddingTable::lookup(std::string_view token) const {
  const Vector* v = find(token);
  return v ? *v : oov_;
}

WordEmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return read_embeddings(in, path.string());
}

WordEmbeddingTable read_embeddings(std::istream& in, std::string_view source) {
  std::optional<WordEmbeddingTable> table;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view rest = line;
    auto skip_spaces = [&] {
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
    };
    skip_spaces();
    if (rest.empty()) continue;
    auto sp = rest.find_first_of(" \t");
    std::string token(rest.substr(0, sp));
    rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp);
    values.clear();
    for (skip_spaces(); !rest.empty(); skip_spaces()) {
      double v = 0;
      auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
      if (ec != std::errc{} || (ptr != rest.data() + rest.size() && *ptr != ' ' && *ptr != '\t')) {
        throw Error(Errc::MalformedRow, std::string(source) + ":" + std::to_string(line_no) +
                                            ": bad number for token '" + token + "'");
      }
      values.push_back(v);
      rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
    }
    if (values.empty()) {
      throw Error(Errc::DimensionMismatch,
                  std::string(source) + ":" + std::to_string(line_no) + ": token '" + token + "' has no components");
    }
    if (!table) table.emplace(static_cast<Eigen::Index>(values.size()));
    if (static_cast<Eigen::Index>(values.size()) != table->dimension()) {
      throw Error(Errc::DimensionMismatch, std::string(source) + ":" + std::to_string(line_no) + ": expected " +
                                               std::to_string(table->dimension()) + " components, got " +
                                               std::to_string(values.size()));
    }
    table->insert(std::move(token), Eigen::Map<const Vector>(values.data(), table->dimension()));
  }
  if (!table) throw Error(Errc::EmptyFile, std::string(source) + ": no embedding rows");
  return std::move(*table);
}

void write_embeddings(std::ostream& out, const WordEmbeddingTable& table) {
  char buf[32];
  for (const auto& token : table.tokens()) {
    out << token;
    for (double x : table.lookup(token)) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

SentenceVector sentence_embedding(std::span<const std::string> tokens, const WordEmbeddingTable& table,
                                  std::string sentence_id) {
  if (tokens.empty()) throw Error(Errc::InvalidArgument, "sentence_embedding needs at least one token");
  Vector sum = Vector::Zero(table.dimension());
  bool any_known = false;
  for (const auto& t : tokens) {
    if (const Vector* v = table.find(t)) {
      sum += *v;
      any_known = true;
    }
  }
  sum /= static_cast<double>(tokens.size());
  return SentenceVector(std::move(sentence_id), std::move(sum), !any_known);
}

double cosine(const SentenceVector& u, const SentenceVector& v) { return cosine(u.vector, v.vector); }

std::unordered_map<std::string, Vector> load_sentence_overrides(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::unordered_map<std::string, Vector> out;
  std::string line;
  std::size_t line_no = 0;
  Eigen::Index dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line);
    auto values = j.at("vector").get<std::vector<double>>();
    if (dim < 0) dim = static_cast<Eigen::Index>(values.size());
    if (static_cast<Eigen::Index>(values.size()) != dim) {
      throw Error(Errc::DimensionMismatch, path.string() + ":" + std::to_string(line_no) + ": vector length " +
                                               std::to_string(values.size()) + " != " + std::to_string(dim));
    }
    out.emplace(j.at("sentence_id").get<std::string>(), Eigen::Map<const Vector>(values.data(), dim));
  }
  return out;
}

}  // namespace setsum
