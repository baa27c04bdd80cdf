#include "sgs/textfeat.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sgs/error.hpp"

namespace sgs::text {
namespace {

// Decodes one UTF-8 sequence at s[i]; malformed bytes decode as U+FFFD and
// consume a single byte.
char32_t decode(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) {
    return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  auto bits = [&](std::size_t k) {
    return static_cast<char32_t>(static_cast<unsigned char>(s[i + k]) & 0x3F);
  };
  if (b0 < 0x80) {
    i += 1;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0 && cont(1)) {
    const char32_t c = (static_cast<char32_t>(b0 & 0x1F) << 6) | bits(1);
    i += 2;
    return c;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    const char32_t c = (static_cast<char32_t>(b0 & 0x0F) << 12) | (bits(1) << 6) | bits(2);
    i += 3;
    return c;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
    const char32_t c = (static_cast<char32_t>(b0 & 0x07) << 18) | (bits(1) << 12) |
                       (bits(2) << 6) | bits(3);
    i += 4;
    return c;
  }
  i += 1;
  return 0xFFFD;
}

void encode(char32_t c, std::string& out) {
  if (c < 0x80) {
    out += static_cast<char>(c);
  } else if (c < 0x800) {
    out += static_cast<char>(0xC0 | (c >> 6));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else if (c < 0x10000) {
    out += static_cast<char>(0xE0 | (c >> 12));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (c >> 18));
    out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  }
}

bool is_word_char(char32_t c) {
  if (c < 0x80) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  }
  if (c < 0xC0) return false;                // Latin-1 punctuation and symbols
  if (c == 0xD7 || c == 0xF7) return false;  // multiplication / division signs
  return c != 0xFFFD && !(c >= 0x2000 && c <= 0x206F);  // general punctuation
}

char32_t lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  return c;
}

bool all_digits(const std::string& token) {
  return std::all_of(token.begin(), token.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && !all_digits(current)) tokens.push_back(current);
    current.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t c = decode(text, i);
    if (is_word_char(c)) {
      encode(lower(c), current);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::ptrdiff_t Vocabulary::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

void Vocabulary::reindex() {
  index_.clear();
  for (std::size_t k = 0; k < terms.size(); ++k) index_.emplace(terms[k], k);
}

std::vector<std::string> document_tokens(const Document& doc, const FilterConfig& filter) {
  std::vector<std::string> tokens = tokenize(doc.text);
  if (filter.remove_stopwords) {
    const auto& stop = english_stopwords();
    std::erase_if(tokens, [&](const std::string& t) { return stop.contains(t); });
  }
  return tokens;
}

Vocabulary build_vocabulary(const Corpus& corpus, const FilterConfig& filter) {
  if (corpus.empty()) throw InvalidArgument("cannot build a vocabulary from an empty corpus");
  if (!(filter.min_fraction >= 0.0 && filter.max_fraction <= 1.0 &&
        filter.min_fraction <= filter.max_fraction)) {
    throw InvalidArgument("document-fraction filters must satisfy 0 <= min <= max <= 1");
  }
  std::map<std::string, std::int64_t> df;
  for (const Document& doc : corpus) {
    std::vector<std::string> tokens = document_tokens(doc, filter);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (const std::string& t : tokens) ++df[t];
  }
  const double n = static_cast<double>(corpus.size());
  Vocabulary vocab;
  vocab.document_count = static_cast<std::int64_t>(corpus.size());
  vocab.filter = filter;
  for (const auto& [term, count] : df) {
    const double c = static_cast<double>(count);
    if (c >= filter.min_fraction * n && c <= filter.max_fraction * n) {
      vocab.terms.push_back(term);
      vocab.document_frequencies.push_back(count);
    }
  }
  if (vocab.terms.empty()) {
    throw InvalidArgument(fmt::format(
        "no term has document frequency within [{}, {}] of {} documents",
        filter.min_fraction, filter.max_fraction, corpus.size()));
  }
  vocab.reindex();
  return vocab;
}

SparseMatrix tfidf_matrix(const Corpus& corpus, const Vocabulary& vocab) {
  std::vector<double> idf(vocab.size());
  for (std::size_t k = 0; k < vocab.size(); ++k) {
    idf[k] = std::log(static_cast<double>(vocab.document_count) /
                      static_cast<double>(vocab.document_frequencies[k]));
  }
  std::vector<Eigen::Triplet<double>> triplets;
  std::map<std::size_t, std::int64_t> counts;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::vector<std::string> tokens = document_tokens(corpus[i], vocab.filter);
    counts.clear();
    for (const std::string& t : tokens) {
      const std::ptrdiff_t k = vocab.index_of(t);
      if (k >= 0) ++counts[static_cast<std::size_t>(k)];
    }
    const double length = static_cast<double>(tokens.size());
    for (const auto& [k, count] : counts) {
      const double tf = 1.0 + std::log(1.0 + static_cast<double>(count) / length);
      const double value = tf * idf[k];
      if (value != 0.0) {
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(k), value);
      }
    }
  }
  SparseMatrix x(static_cast<Eigen::Index>(corpus.size()),
                 static_cast<Eigen::Index>(vocab.size()));
  x.setFromTriplets(triplets.begin(), triplets.end());
  return x;
}

std::vector<std::uint8_t> build_icd_surrogate(const Corpus& corpus,
                                              std::span<const std::string> code_set,
                                              std::int64_t threshold) {
  if (code_set.empty()) throw InvalidArgument("ICD code set is empty");
  std::vector<std::uint8_t> z(corpus.size(), 0);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::int64_t total = 0;
    for (const std::string& code : code_set) {
      auto it = corpus[i].icd_counts.find(code);
      if (it != corpus[i].icd_counts.end()) total += it->second;
    }
    z[i] = total > threshold ? 1 : 0;
  }
  return z;
}

DesignMatrix assemble_design_matrix(const SparseMatrix& tfidf, const Vocabulary& vocab,
                                    std::span<const std::uint8_t> surrogate,
                                    std::string_view surrogate_name) {
  if (static_cast<std::size_t>(tfidf.rows()) != surrogate.size()) {
    throw InvalidArgument(fmt::format("{} feature rows but {} surrogate values", tfidf.rows(),
                                      surrogate.size()));
  }
  if (static_cast<std::size_t>(tfidf.cols()) != vocab.size()) {
    throw InvalidArgument("TF-IDF columns do not match the vocabulary");
  }
  const Eigen::Index p = tfidf.cols();
  DesignMatrix d;
  d.x = Eigen::MatrixXd::Zero(tfidf.rows(), p + 1);
  d.x.leftCols(p) = Eigen::MatrixXd(tfidf);
  for (std::size_t i = 0; i < surrogate.size(); ++i) {
    d.x(static_cast<Eigen::Index>(i), p) = surrogate[i];
  }
  d.names = vocab.terms;
  std::string name(surrogate_name);
  for (int suffix = 1; vocab.index_of(name) >= 0; ++suffix) {
    name = fmt::format("{}_{}", surrogate_name, suffix);
  }
  d.names.push_back(name);
  d.penalty_factors = Eigen::VectorXd::Ones(p + 1);
  d.penalty_factors[p] = 0.0;
  d.surrogate_column = p;
  return d;
}

Corpus read_jsonl(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidArgument(fmt::format("corpus line {}: {}", line_no, e.what()));
    }
    Document doc;
    doc.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
    doc.text = j.value("text", std::string{});
    if (j.contains("icd_counts")) {
      for (const auto& [code, count] : j.at("icd_counts").items()) {
        const auto c = count.get<std::int64_t>();
        if (c < 0) {
          throw InvalidArgument(fmt::format("corpus line {}: negative count for {}", line_no, code));
        }
        doc.icd_counts[code] = c;
      }
    }
    if (j.contains("label") && !j.at("label").is_null()) {
      const int label = j.at("label").is_boolean() ? int(j.at("label").get<bool>())
                                                   : j.at("label").get<int>();
      if (label != 0 && label != 1) {
        throw InvalidArgument(fmt::format("corpus line {}: label must be 0 or 1", line_no));
      }
      doc.label = static_cast<std::uint8_t>(label);
    }
    corpus.push_back(std::move(doc));
  }
  std::unordered_set<std::string> seen;
  for (const Document& doc : corpus) {
    if (!seen.insert(doc.id).second) {
      throw InvalidArgument(fmt::format("duplicate document id '{}'", doc.id));
    }
  }
  return corpus;
}

void write_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const Document& doc : corpus) {
    nlohmann::json j = {{"id", doc.id}, {"text", doc.text}, {"icd_counts", doc.icd_counts}};
    if (doc.label) j["label"] = *doc.label;
    out << j.dump() << '\n';
  }
}

std::vector<std::string> read_code_set(std::istream& in) {
  std::vector<std::string> codes;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    codes.push_back(line.substr(first, last - first + 1));
  }
  return codes;
}

nlohmann::json to_json(const Vocabulary& vocab) {
  return {{"terms", vocab.terms},
          {"document_frequencies", vocab.document_frequencies},
          {"document_count", vocab.document_count},
          {"filter",
           {{"min_fraction", vocab.filter.min_fraction},
            {"max_fraction", vocab.filter.max_fraction},
            {"remove_stopwords", vocab.filter.remove_stopwords}}}};
}

Vocabulary vocabulary_from_json(const nlohmann::json& j) {
  Vocabulary v;
  v.terms = j.at("terms").get<std::vector<std::string>>();
  v.document_frequencies = j.at("document_frequencies").get<std::vector<std::int64_t>>();
  v.document_count = j.at("document_count").get<std::int64_t>();
  if (v.terms.size() != v.document_frequencies.size()) {
    throw InvalidArgument("vocabulary terms and frequencies differ in length");
  }
  const auto& f = j.at("filter");
  v.filter.min_fraction = f.at("min_fraction").get<double>();
  v.filter.max_fraction = f.at("max_fraction").get<double>();
  v.filter.remove_stopwords = f.at("remove_stopwords").get<bool>();
  v.reindex();
  return v;
}

}  // namespace sgs::text
