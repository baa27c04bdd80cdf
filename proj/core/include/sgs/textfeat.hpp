#pragma once

// Report-text featurization: tokenization, vocabulary filtering, TF-IDF and
// the ICD-count surrogate.
//
// TF(t, d) = 1 + ln(1 + count(t in d) / |d|), with |d| the number of tokens
// left in d after stopword removal; IDF(t) = ln(N / df(t)).

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <nlohmann/json_fwd.hpp>

namespace sgs::text {

struct Document {
  std::string id;
  std::string text;
  std::map<std::string, std::int64_t> icd_counts;  // pre-windowed upstream
  std::optional<std::uint8_t> label;
};

using Corpus = std::vector<Document>;

// Lowercased (ASCII and Latin-1) tokens split on anything that is not a
// letter or digit; tokens made only of ASCII digits are dropped. Code points
// above U+00FF count as letters.
std::vector<std::string> tokenize(std::string_view text);

// Built-in English stopword list (the common NLTK/Snowball set, stored in
// tokenized form, e.g. "don" and "t" for "don't").
const std::unordered_set<std::string>& english_stopwords();

struct FilterConfig {
  double min_fraction = 0.05;
  double max_fraction = 0.90;
  bool remove_stopwords = true;
};

struct Vocabulary {
  std::vector<std::string> terms;  // lexicographic
  std::vector<std::int64_t> document_frequencies;
  std::int64_t document_count = 0;
  FilterConfig filter;

  std::size_t size() const { return terms.size(); }
  // Position of `term`, or -1.
  std::ptrdiff_t index_of(std::string_view term) const;

 private:
  friend Vocabulary build_vocabulary(const Corpus&, const FilterConfig&);
  friend Vocabulary vocabulary_from_json(const nlohmann::json&);
  void reindex();
  std::unordered_map<std::string, std::size_t> index_;
};

// Tokens of a document after optional stopword removal.
std::vector<std::string> document_tokens(const Document& doc, const FilterConfig& filter);

// Keeps terms with min_fraction * N <= df <= max_fraction * N. Throws
// InvalidArgument on an empty corpus or when nothing survives.
Vocabulary build_vocabulary(const Corpus& corpus, const FilterConfig& filter = {});

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Rows follow corpus order, columns vocabulary order. IDF uses the
// vocabulary's stored document frequencies and document count.
SparseMatrix tfidf_matrix(const Corpus& corpus, const Vocabulary& vocab);

// Z_i = 1 iff the summed counts of codes in `code_set` exceed `threshold`.
std::vector<std::uint8_t> build_icd_surrogate(const Corpus& corpus,
                                              std::span<const std::string> code_set,
                                              std::int64_t threshold = 1);

struct DesignMatrix {
  Eigen::MatrixXd x;
  std::vector<std::string> names;
  Eigen::VectorXd penalty_factors;  // 0 for the surrogate column
  Eigen::Index surrogate_column = -1;
};

// Text features followed by the surrogate as the last column. A term that
// already uses `surrogate_name` pushes the surrogate to name_1, name_2, ...
DesignMatrix assemble_design_matrix(const SparseMatrix& tfidf, const Vocabulary& vocab,
                                    std::span<const std::uint8_t> surrogate,
                                    std::string_view surrogate_name = "z_surrogate");

// JSONL, one object per line: {id, text, icd_counts: {code: count}, label?}.
Corpus read_jsonl(std::istream& in);
void write_jsonl(std::ostream& out, const Corpus& corpus);

// One code per line; '#' starts a comment; blank lines ignored.
std::vector<std::string> read_code_set(std::istream& in);

nlohmann::json to_json(const Vocabulary& vocab);
Vocabulary vocabulary_from_json(const nlohmann::json& j);

}  // namespace sgs::text
