#include "sgs/synthetic_reports.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string_view>

#include <fmt/format.h>

#include "sgs/error.hpp"
#include "sgs/random.hpp"

namespace sgs::text {
namespace {

// Background terms of spine imaging reports.
constexpr std::array<std::string_view, 96> kBackground = {
    "lumbar", "spine", "thoracic", "sacrum", "coccyx", "pelvis", "disc", "discs",
    "space", "spaces", "narrowing", "mild", "moderate", "severe", "degenerative",
    "changes", "facet", "arthropathy", "osteophyte", "osteophytes", "endplate",
    "endplates", "alignment", "lordosis", "kyphosis", "scoliosis", "curvature",
    "levels", "level", "bulge", "protrusion", "herniation", "foraminal", "stenosis",
    "canal", "central", "neural", "foramen", "nerve", "root", "impingement", "marrow",
    "signal", "intensity", "sagittal", "axial", "images", "views", "lateral", "frontal",
    "oblique", "comparison", "prior", "study", "exam", "examination", "technique",
    "history", "pain", "back", "low", "radiating", "leg", "symptoms", "findings",
    "impression", "visualized", "soft", "tissues", "paraspinal", "muscles", "conus",
    "medullaris", "terminates", "cord", "bowel", "gas", "hardware", "postoperative",
    "laminectomy", "fusion", "contrast", "enhancement", "cyst", "renal", "aorta",
    "calcification", "atherosclerotic", "hemangioma", "listhesis", "anterolisthesis",
    "retrolisthesis", "grade", "dessication", "annular", "fissure"};

// Terms more frequent in reports of patients with a fracture.
constexpr std::array<std::string_view, 14> kCaseTerms = {
    "fracture", "compression", "wedge", "height", "loss", "deformity", "acute",
    "chronic", "osteopenia", "osteoporosis", "vertebroplasty", "kyphoplasty",
    "retropulsion", "edema"};

// Terms more frequent in reports without a fracture.
constexpr std::array<std::string_view, 6> kControlTerms = {
    "normal", "unremarkable", "intact", "preserved", "maintained", "negative"};

constexpr std::array<std::string_view, 12> kFiller = {
    "the", "of", "and", "is", "are", "with", "no", "there", "at", "in", "to", "a"};

double logit(double p) { return std::log(p / (1.0 - p)); }
double expit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Term {
  std::string_view word;
  double control_rate;
  double case_rate;
};

std::vector<Term> lexicon(const SyntheticCorpusConfig& cfg) {
  Rng rng = make_rng(cfg.seed, streams::kCorpus, 0);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::log(lo) + uniform01(rng) * (std::log(hi) - std::log(lo)));
  };
  std::vector<Term> terms;
  for (std::string_view w : kBackground) {
    const double a = log_uniform(0.01, 0.6);
    terms.push_back({w, a, a});
  }
  for (std::string_view w : kCaseTerms) {
    const double a = log_uniform(0.02, 0.2);
    const double shift = cfg.signal * (0.5 + uniform01(rng));
    terms.push_back({w, a, expit(logit(a) + shift)});
  }
  for (std::string_view w : kControlTerms) {
    const double a = log_uniform(0.15, 0.5);
    const double shift = cfg.signal * (0.3 + 0.5 * uniform01(rng));
    terms.push_back({w, a, expit(logit(a) - shift)});
  }
  return terms;
}

}  // namespace

const std::vector<std::string>& lumbar_fracture_codes() {
  static const std::vector<std::string> codes = {
      "806.25", "806.26", "806.27", "806.28", "806.29", "806.35", "806.39",
      "806.4",  "806.5",  "806.6",  "806.61", "806.62", "806.69", "806.8",
      "806.9",  "733.13", "805.4",  "805.5",  "805.6",  "805.7",  "805.8",
      "805.9",  "809",    "809.1",  "V54.17", "V54.27"};
  return codes;
}

Corpus synthetic_radiology_corpus(const SyntheticCorpusConfig& cfg) {
  if (cfg.documents < 1) throw InvalidArgument("corpus needs at least one document");
  if (!(cfg.prevalence > 0.0 && cfg.prevalence < 1.0)) {
    throw InvalidArgument("prevalence must lie in (0,1)");
  }
  if (!(cfg.icd_sensitivity >= 0.0 && cfg.icd_sensitivity <= 1.0 &&
        cfg.icd_specificity >= 0.0 && cfg.icd_specificity <= 1.0)) {
    throw InvalidArgument("ICD operating characteristics must lie in [0,1]");
  }
  const std::vector<Term> terms = lexicon(cfg);
  const auto& codes = lumbar_fracture_codes();
  Corpus corpus;
  corpus.reserve(static_cast<std::size_t>(cfg.documents));
  std::vector<std::string_view> words;
  for (std::int64_t d = 0; d < cfg.documents; ++d) {
    Rng rng = make_rng(cfg.seed, streams::kCorpus, static_cast<std::uint64_t>(d) + 1);
    std::poisson_distribution<int> extra_copies(0.5);
    Document doc;
    doc.id = fmt::format("r{:06d}", d + 1);
    const bool is_case = uniform01(rng) < cfg.prevalence;
    doc.label = is_case ? 1 : 0;

    words.clear();
    for (const Term& t : terms) {
      if (uniform01(rng) < (is_case ? t.case_rate : t.control_rate)) {
        const int copies = 1 + extra_copies(rng);
        for (int c = 0; c < copies; ++c) words.push_back(t.word);
      }
    }
    std::shuffle(words.begin(), words.end(), rng);
    std::string text;
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (uniform01(rng) < 0.5) {
        text += kFiller[uniform_index(rng, kFiller.size())];
        text += ' ';
      }
      text += words[k];
      if (uniform01(rng) < 0.1) text += fmt::format(" {} mm", 1 + uniform_index(rng, 20));
      text += (k + 1) % 8 == 0 ? ". " : " ";
    }
    doc.text = text;

    int count = 0;
    const double u = uniform01(rng);
    const double positive = is_case ? cfg.icd_sensitivity : 1.0 - cfg.icd_specificity;
    if (u < positive) {
      count = 2 + std::poisson_distribution<int>(is_case ? 0.7 : 0.3)(rng);
    } else if (uniform01(rng) < (is_case ? 0.3 : 0.015)) {
      count = 1;
    }
    for (int c = 0; c < count; ++c) ++doc.icd_counts[codes[uniform_index(rng, codes.size())]];
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace sgs::text
