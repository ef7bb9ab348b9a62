#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "setsum/aspect.hpp"

namespace setsum {

namespace {

struct TermCounts {
  std::unordered_map<std::string, double> count;
  double total = 0.0;

  void add(std::span<const std::string> tokens) {
    for (const auto& t : tokens) count[t] += 1.0;
    total += static_cast<double>(tokens.size());
  }
  double tf(const std::string& w) const {
    auto it = count.find(w);
    return it == count.end() || total == 0.0 ? 0.0 : it->second / total;
  }
};

}  // namespace

ClarityTable clarity_scores(std::span<const AnnotatedSentence> annotated, std::span<const Sentence> all_sentences,
                            std::span<const std::string> expected_aspects) {
  std::map<std::string, TermCounts> per_aspect;
  for (const std::string& name : expected_aspects) per_aspect[name];
  for (const auto& item : annotated) {
    if (item.aspects.empty()) {
      throw Error(Errc::InvalidArgument, "annotated sentence '" + item.sentence.text + "' has no aspect label");
    }
    for (const auto& a : std::set<std::string>(item.aspects.begin(), item.aspects.end())) {
      per_aspect[a].add(item.sentence.tokens);
    }
  }

  TermCounts corpus;
  std::unordered_map<std::string, double> df;
  for (const auto& s : all_sentences) {
    corpus.add(s.tokens);
    for (const auto& w : std::unordered_set<std::string>(s.tokens.begin(), s.tokens.end())) df[w] += 1.0;
  }
  const auto n_docs = static_cast<double>(all_sentences.size());
  auto idf = [&](const std::string& w) { return std::log((1.0 + n_docs) / (1.0 + df[w])) + 1.0; };

  std::vector<std::string> vocabulary;
  vocabulary.reserve(df.size());
  for (const auto& [w, _] : df) vocabulary.push_back(w);
  std::sort(vocabulary.begin(), vocabulary.end());

  ClarityTable table;
  for (const auto& [aspect, counts] : per_aspect) {
    if (counts.total == 0.0) {
      throw Error(Errc::EmptyAspect, "aspect '" + aspect + "' has no annotated sentences");
    }
    for (const auto& [w, _] : counts.count) {
      if (!df.contains(w)) {
        throw Error(Errc::InvalidArgument, "annotated token '" + w + "' does not occur in the corpus");
      }
    }
    auto& ranked = table[aspect];
    ranked.reserve(vocabulary.size());
    for (const auto& w : vocabulary) {
      const double weight = idf(w);
      const double t_a = counts.tf(w) * weight;
      const double t = corpus.tf(w) * weight;
      const double score = t_a == 0.0 ? 0.0 : t_a * std::log(t_a / t);
      ranked.emplace_back(w, score);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) { return x.second > y.second; });
  }
  return table;
}

}  // namespace setsum
