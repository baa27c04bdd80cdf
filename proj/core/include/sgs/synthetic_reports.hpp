#pragma once

// Generator for a radiology-report-like corpus with fracture labels and
// per-document ICD counts. Stands in for clinical text that cannot be
// redistributed; used by tests, benchmarks and the design-comparison demo.

#include <cstdint>
#include <string>
#include <vector>

#include "sgs/textfeat.hpp"

namespace sgs::text {

// The 26 lumbar/vertebral fracture ICD-9 codes also shipped in
// data/lumbar_fracture_icd9.txt.
const std::vector<std::string>& lumbar_fracture_codes();

struct SyntheticCorpusConfig {
  std::int64_t documents = 20000;
  double prevalence = 0.10;
  // Operating characteristics of "more than one fracture code".
  double icd_sensitivity = 0.27;
  double icd_specificity = 0.99;
  // Log-odds shift of the case-associated terms; larger is easier.
  double signal = 1.4;
  std::uint64_t seed = 1;
};

// Documents are labelled; ids are "r000001", ... in generation order.
Corpus synthetic_radiology_corpus(const SyntheticCorpusConfig& config);

}  // namespace sgs::text
