#include "setsum/synth.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include "setsum/random.hpp"

namespace setsum {

namespace {

constexpr std::array<std::string_view, 4> kTerms = {"FA2017", "SP2018", "FA2018", "SP2019"};
constexpr std::array<std::string_view, 4> kPrefixes = {"honestly", "i think", "in my opinion", "also"};
constexpr double kPrefixProbability = 0.25;
constexpr double kExclaimProbability = 0.2;

std::string pad(int value, int width) {
  std::string s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

std::vector<AspectTemplate> aspects_from_json(const nlohmann::json& j) {
  std::vector<AspectTemplate> out;
  for (const auto& ja : j) {
    out.push_back({ja.at("name").get<std::string>(), ja.at("positive").get<std::vector<std::string>>(),
                   ja.at("negative").get<std::vector<std::string>>()});
  }
  return out;
}

}  // namespace

void SynthTemplates::validate() const {
  for (const auto* list : {&course, &instructor}) {
    if (list->empty()) throw Error(Errc::InvalidTemplate, "no aspect templates for a question");
    for (const auto& t : *list) {
      for (const auto* phrases : {&t.positive, &t.negative}) {
        if (phrases->size() < 2) {
          throw Error(Errc::InvalidTemplate, "aspect '" + t.name + "' needs at least 2 phrases per polarity");
        }
        for (const auto& p : *phrases) {
          if (tokenize(p).empty()) throw Error(Errc::InvalidTemplate, "aspect '" + t.name + "' has an empty phrase");
        }
      }
    }
  }
}

SynthTemplates templates_from_json(const nlohmann::json& j) {
  SynthTemplates t{aspects_from_json(j.at("course")), aspects_from_json(j.at("instructor"))};
  t.validate();
  return t;
}

SynthTemplates load_templates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return templates_from_json(nlohmann::json::parse(in));
}

SyntheticCorpus generate_synthetic(const SynthConfig& config, const SynthTemplates& templates) {
  if (config.n_courses < 1 || config.n_students < 1) {
    throw Error(Errc::InvalidArgument, "n_courses and n_students must be >= 1");
  }
  if (config.min_sentences < 1 || config.max_sentences < config.min_sentences) {
    throw Error(Errc::InvalidArgument, "bad sentence count range");
  }
  templates.validate();

  Rng rng(config.seed);
  SyntheticCorpus out;

  for (int c = 0; c < config.n_courses; ++c) {
    CourseData course;
    course.roster.key = CourseKey{std::string(kTerms[static_cast<std::size_t>(c) % kTerms.size()]),
                                  "COMP" + std::to_string(101 + c / static_cast<int>(kTerms.size()))};
    course.roster.enrollment = std::max(
        config.n_students, static_cast<int>(std::lround(config.n_students / config.submission_rate)));
    const double positivity = rng.uniform(config.min_positivity, config.max_positivity);

    for (int s = 0; s < config.n_students; ++s) {
      SetResponse resp;
      resp.key = course.roster.key;
      resp.response_id = "r" + pad(c, 5) + "-" + pad(s, 4);

      // Comments first so the paired rating can follow their majority polarity.
      std::array<std::optional<bool>, 2> majority_positive;
      for (Question q : {Question::CourseComments, Question::InstructorComments}) {
        const double presence =
            q == Question::CourseComments ? config.course_comment_presence : config.instructor_comment_presence;
        if (!rng.bernoulli(presence)) continue;
        const auto& aspects = templates.for_question(q);
        const int n_sentences = rng.between(config.min_sentences, config.max_sentences);
        std::string text;
        int n_pos = 0;
        for (int k = 0; k < n_sentences; ++k) {
          const auto& aspect = aspects[rng.index(aspects.size())];
          const bool positive = rng.bernoulli(positivity);
          const auto& phrases = positive ? aspect.positive : aspect.negative;
          std::string sentence = phrases[rng.index(phrases.size())];
          if (rng.bernoulli(kPrefixProbability)) {
            sentence = std::string(kPrefixes[rng.index(kPrefixes.size())]) + " " + sentence;
          }
          sentence[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sentence[0])));
          sentence += positive && rng.bernoulli(kExclaimProbability) ? "!" : ".";
          if (!text.empty()) text += ' ';
          text += sentence;
          n_pos += positive ? 1 : 0;
          out.labels.push_back({resp.response_id, q, static_cast<std::size_t>(k), aspect.name, positive});
          ++out.aspect_draws[std::string(short_name(q)) + "/" + aspect.name];
        }
        (q == Question::CourseComments ? resp.course_comment : resp.instructor_comment) = std::move(text);
        majority_positive[q == Question::CourseComments ? 0 : 1] = n_pos * 2 > n_sentences;
      }

      auto draw_rating = [&](std::optional<bool> majority) {
        const bool positive = majority.value_or(rng.bernoulli(positivity));
        return positive ? rng.between(4, 5) : rng.between(1, 3);
      };
      if (rng.bernoulli(config.course_rate_presence)) resp.course_rate = draw_rating(majority_positive[0]);
      if (rng.bernoulli(config.instructor_rate_presence)) resp.instructor_rate = draw_rating(majority_positive[1]);
      if (!resp.course_rate && !resp.instructor_rate && !resp.course_comment && !resp.instructor_comment) {
        resp.course_rate = draw_rating(std::nullopt);
      }
      course.responses.push_back(std::move(resp));
    }
    out.courses.push_back(std::move(course));
  }
  return out;
}

WordEmbeddingTable synthesize_embeddings(const SynthTemplates& templates, std::span<const AspectSet> aspect_sets,
                                         const EmbeddingSynthConfig& config) {
  std::size_t n_directions = 1;
  for (const auto& set : aspect_sets) n_directions += set.aspects.size();
  const Eigen::Index d = config.dimension;
  if (static_cast<Eigen::Index>(n_directions) > d) {
    throw Error(Errc::InvalidArgument, "embedding dimension " + std::to_string(d) + " cannot hold " +
                                           std::to_string(n_directions) + " orthogonal directions");
  }
  Rng rng(config.seed);

  // Orthonormal directions: column 0 is polarity, then one per aspect.
  Matrix gaussian(d, static_cast<Eigen::Index>(n_directions));
  for (Eigen::Index c = 0; c < gaussian.cols(); ++c) {
    for (Eigen::Index r = 0; r < d; ++r) gaussian(r, c) = rng.normal();
  }
  Matrix directions = gaussian;
  for (Eigen::Index c = 0; c < directions.cols(); ++c) {
    for (Eigen::Index p = 0; p < c; ++p) directions.col(c) -= directions.col(p).dot(directions.col(c)) * directions.col(p);
    directions.col(c).normalize();
  }

  std::map<std::string, Vector> aspect_mix;
  Eigen::Index column = 1;
  for (const auto& set : aspect_sets) {
    for (const auto& aspect : set.aspects) {
      for (const auto& seed : aspect.seeds) {
        auto [it, inserted] = aspect_mix.try_emplace(seed.token, Vector::Zero(d));
        it->second += seed.weight * directions.col(column);
      }
      ++column;
    }
  }

  std::set<std::string> positive_words, negative_words, vocabulary;
  for (Question q : {Question::CourseComments, Question::InstructorComments}) {
    for (const auto& t : templates.for_question(q)) {
      for (const auto& p : t.positive) {
        for (auto& w : tokenize(p)) positive_words.insert(w);
      }
      for (const auto& p : t.negative) {
        for (auto& w : tokenize(p)) negative_words.insert(w);
      }
    }
  }
  for (std::string_view prefix : kPrefixes) {
    for (auto& w : tokenize(prefix)) vocabulary.insert(w);
  }
  vocabulary.insert(positive_words.begin(), positive_words.end());
  vocabulary.insert(negative_words.begin(), negative_words.end());
  for (const auto& [w, _] : aspect_mix) vocabulary.insert(w);

  WordEmbeddingTable table(d);
  for (const auto& w : vocabulary) {
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = config.noise * rng.normal();
    if (auto it = aspect_mix.find(w); it != aspect_mix.end()) v += config.aspect_scale * it->second.normalized();
    const bool pos = positive_words.contains(w), neg = negative_words.contains(w);
    if (pos != neg) v += (pos ? 1.0 : -1.0) * config.polarity_scale * directions.col(0);
    table.insert(w, std::move(v));
  }
  return table;
}

nlohmann::json to_json(const SentenceLabel& label) {
  return {{"response_id", label.response_id},
          {"question", short_name(label.question)},
          {"sentence_index", label.sentence_index},
          {"aspect", label.aspect},
          {"polarity", label.positive ? "positive" : "negative"}};
}

SentenceLabel label_from_json(const nlohmann::json& j) {
  SentenceLabel l;
  l.response_id = j.at("response_id").get<std::string>();
  l.question = question_from_string(j.at("question").get<std::string>());
  l.sentence_index = j.at("sentence_index").get<std::size_t>();
  l.aspect = j.at("aspect").get<std::string>();
  l.positive = j.at("polarity").get<std::string>() == "positive";
  return l;
}

std::vector<SentenceLabel> load_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::vector<SentenceLabel> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(label_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

SynthFiles write_synthetic(const std::filesystem::path& dir, const SyntheticCorpus& corpus,
                           const WordEmbeddingTable* embeddings) {
  std::filesystem::create_directories(dir);
  SynthFiles files{dir / "roster.csv", dir / "responses.csv", dir / "labels.jsonl", {}};
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + p.string());
    return out;
  };
  {
    auto out = open(files.roster);
    write_roster_csv(out, corpus.courses);
  }
  {
    auto out = open(files.responses);
    write_responses_csv(out, corpus.courses);
  }
  {
    auto out = open(files.labels);
    for (const auto& l : corpus.labels) out << to_json(l).dump() << '\n';
  }
  if (embeddings) {
    files.embeddings = dir / "embeddings.txt";
    auto out = open(files.embeddings);
    write_embeddings(out, *embeddings);
  }
  return files;
}

}  // namespace setsum
