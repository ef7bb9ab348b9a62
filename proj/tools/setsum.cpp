// setsum command-line driver.

#include <csignal>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "setsum/analytics.hpp"
#include "setsum/aspect.hpp"
#include "setsum/corpus.hpp"
#include "setsum/sentiment.hpp"
#include "setsum/server.hpp"
#include "setsum/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace setsum;

namespace {

const fs::path kDataDir = SETSUM_DATA_DIR;

struct CorpusInputs {
  fs::path dir;
  fs::path embeddings;  // defaults to <dir>/embeddings.txt

  std::vector<CourseData> courses() const { return parse_corpus(dir / "roster.csv", dir / "responses.csv"); }
  fs::path embeddings_file() const { return embeddings.empty() ? dir / "embeddings.txt" : embeddings; }
};

Question open_question(const std::string& name) {
  Question q = question_from_string(name);
  if (!is_open_ended(q)) throw Error(Errc::InvalidArgument, "expected course or instructor");
  return q;
}

std::vector<SetResponse> all_responses(const std::vector<CourseData>& courses) {
  std::vector<SetResponse> out;
  for (const auto& c : courses) out.insert(out.end(), c.responses.begin(), c.responses.end());
  return out;
}

int run_ingest(const fs::path& roster, const fs::path& responses) {
  try {
    const auto courses = parse_corpus(roster, responses);
    json out = json::array();
    for (const auto& c : courses) {
      out.push_back({{"term", c.roster.key.term},
                     {"course_id", c.roster.key.course_id},
                     {"enrollment", c.roster.enrollment},
                     {"responses", c.responses.size()}});
    }
    std::cout << out.dump(2) << '\n';
    return 0;
  } catch (const CorpusError& e) {
    for (const auto& r : e.rows()) {
      const auto& file = r.file == "roster" ? roster.string() : r.file == "responses" ? responses.string() : r.file;
      std::cerr << file << ':' << r.line << ": " << to_string(r.code) << ": " << r.message << '\n';
    }
    return 1;
  }
}

HttpServer* g_server = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Teaching-evaluation comment analytics"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate a roster/responses export");
  fs::path roster_path, responses_path;
  ingest->add_option("--roster", roster_path)->required();
  ingest->add_option("--responses", responses_path)->required();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic corpus");
  SynthConfig synth_config;
  EmbeddingSynthConfig embed_config;
  fs::path synth_out, templates_path = kDataDir / "synth_templates.json";
  fs::path course_specs = kDataDir / "aspects_course.json", instructor_specs = kDataDir / "aspects_instructor.json";
  synth->add_option("--seed", synth_config.seed)->required();
  synth->add_option("--courses", synth_config.n_courses)->required();
  synth->add_option("--students", synth_config.n_students)->required();
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--templates", templates_path);
  synth->add_option("--course-specs", course_specs);
  synth->add_option("--instructor-specs", instructor_specs);
  synth->add_option("--course-comment-rate", synth_config.course_comment_presence);
  synth->add_option("--instructor-comment-rate", synth_config.instructor_comment_presence);
  synth->add_option("--dimension", embed_config.dimension);

  // train-sentiment
  auto* train_sent = app.add_subcommand("train-sentiment", "Train a comment-level sentiment model");
  std::string question_name;
  CorpusInputs inputs;
  fs::path model_out;
  train_sent->add_option("--question", question_name)->required()->check(CLI::IsMember({"course", "instructor"}));
  train_sent->add_option("--in", inputs.dir)->required();
  train_sent->add_option("--embeddings", inputs.embeddings);
  train_sent->add_option("--out", model_out)->required();

  // clarity
  auto* clarity = app.add_subcommand("clarity", "Rank candidate seed words per aspect");
  fs::path annotations_path;
  std::size_t top_n = 10;
  clarity->add_option("--annotations", annotations_path, "JSON lines {text, aspects:[...]}")->required();
  clarity->add_option("--top", top_n);

  // train-aspects
  auto* train_asp = app.add_subcommand("train-aspects", "Train the seed-guided aspect extractor");
  fs::path specs_path;
  std::uint64_t mate_seed = 1;
  train_asp->add_option("--question", question_name)->required()->check(CLI::IsMember({"course", "instructor"}));
  train_asp->add_option("--specs", specs_path)->required();
  train_asp->add_option("--in", inputs.dir)->required();
  train_asp->add_option("--embeddings", inputs.embeddings);
  train_asp->add_option("--out", model_out)->required();
  train_asp->add_option("--seed", mate_seed);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Compute per-course analyses");
  fs::path models_dir, analyses_out, overrides_path;
  unsigned workers = 1;
  analyze->add_option("--in", inputs.dir)->required();
  analyze->add_option("--models", models_dir)->required();
  analyze->add_option("--out", analyses_out)->required();
  analyze->add_option("--workers", workers);
  analyze->add_option("--embeddings", inputs.embeddings);
  analyze->add_option("--sentence-vectors", overrides_path);

  // summarize
  auto* summarize = app.add_subcommand("summarize", "Print per-aspect summaries for one course");
  std::string course_key;
  std::size_t k = kSummarySize;
  summarize->add_option("--course", course_key, "TERM/COURSE_ID")->required();
  summarize->add_option("--question", question_name)->required()->check(CLI::IsMember({"course", "instructor"}));
  summarize->add_option("--k", k);
  summarize->add_option("--in", inputs.dir)->required();
  summarize->add_option("--models", models_dir)->required();
  summarize->add_option("--embeddings", inputs.embeddings);

  // serve
  auto* serve = app.add_subcommand("serve", "Serve stored analyses over HTTP");
  fs::path config_path;
  serve->add_option("--config", config_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return run_ingest(roster_path, responses_path);

    if (*synth) {
      const auto templates = load_templates(templates_path);
      const AspectSet sets[] = {load_aspect_set(course_specs), load_aspect_set(instructor_specs)};
      embed_config.seed = synth_config.seed;
      const auto corpus = generate_synthetic(synth_config, templates);
      const auto table = synthesize_embeddings(templates, sets, embed_config);
      const auto files = write_synthetic(synth_out, corpus, &table);
      std::cout << "wrote " << files.roster << ", " << files.responses << ", " << files.labels << ", "
                << files.embeddings << '\n';
      return 0;
    }

    if (*train_sent) {
      const Question q = open_question(question_name);
      const auto table = load_embeddings(inputs.embeddings_file());
      const auto responses = all_responses(inputs.courses());
      const auto pairs = build_training_pairs(responses, q, table);
      const auto model = train_sentiment(pairs, q);
      save_sentiment_model(model_out, model);
      std::cout << "train=" << pairs.train.size() << " dev=" << pairs.dev.size()
                << " dev_accuracy=" << model.dev_accuracy << '\n';
      return 0;
    }

    if (*clarity) {
      std::ifstream in(annotations_path);
      if (!in) throw Error(Errc::Io, "cannot open " + annotations_path.string());
      std::vector<AnnotatedSentence> annotated;
      std::vector<Sentence> all;
      std::string line;
      while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto j = json::parse(line);
        Sentence s;
        s.text = j.at("text").get<std::string>();
        s.tokens = tokenize(s.text);
        all.push_back(s);
        annotated.push_back({std::move(s), j.at("aspects").get<std::vector<std::string>>()});
      }
      json out = json::object();
      for (const auto& [aspect, ranked] : clarity_scores(annotated, all)) {
        json list = json::array();
        for (std::size_t i = 0; i < std::min(top_n, ranked.size()); ++i) {
          list.push_back({ranked[i].first, ranked[i].second});
        }
        out[aspect] = list;
      }
      std::cout << out.dump(2) << '\n';
      return 0;
    }

    if (*train_asp) {
      const Question q = open_question(question_name);
      const auto specs = load_aspect_set(specs_path);
      if (specs.question != q) throw Error(Errc::InvalidArgument, "spec file is for a different question");
      const auto table = load_embeddings(inputs.embeddings_file());
      std::vector<SentenceVector> vectors;
      for (const auto& s : segment_responses(all_responses(inputs.courses()), q)) {
        vectors.push_back(sentence_embedding(s.tokens, table, s.id));
      }
      MateTrainOptions options;
      options.seed = mate_seed;
      MateTrainReport report;
      const auto model = mate_train(build_aspect_matrix(specs, table, mate_seed), vectors, options, &report);
      save_mate_model(model_out, model);
      std::cout << "sentences=" << vectors.size() << " loss " << report.epoch_loss.front() << " -> "
                << report.epoch_loss.back() << '\n';
      return 0;
    }

    if (*analyze) {
      auto models = load_pipeline_models(models_dir, inputs.embeddings_file());
      if (!overrides_path.empty()) models.sentence_overrides = load_sentence_overrides(overrides_path);
      const auto courses = inputs.courses();
      const auto analyses = analyze_courses(courses, models, workers);
      for (const auto& a : analyses) write_analysis(analyses_out, a);
      std::cout << "analyzed " << analyses.size() << " course(s) into " << analyses_out << '\n';
      return 0;
    }

    if (*summarize) {
      const Question q = open_question(question_name);
      const CourseKey key = parse_course_key(course_key);
      auto models = load_pipeline_models(models_dir, inputs.embeddings_file());
      models.summary_size = k;
      const auto courses = inputs.courses();
      auto it = std::find_if(courses.begin(), courses.end(), [&](const CourseData& c) { return c.roster.key == key; });
      if (it == courses.end()) throw Error(Errc::UnknownCourse, key.str());
      const auto analysis = compute_course_analysis(*it, models);
      const auto& qa = analysis.comments(q);
      json out = {{"term", key.term}, {"course_id", key.course_id}, {"question", short_name(q)}};
      json aspects = json::array();
      for (const auto& s : to_json(qa).at("summaries")) aspects.push_back(s);
      out["summaries"] = aspects;
      std::cout << out.dump(2) << '\n';
      return 0;
    }

    if (*serve) {
      HttpServer server(load_api_config(config_path));
      g_server = &server;
      std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
      });
      const int port = server.bind();
      std::cout << "listening on port " << port << std::endl;
      server.listen();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
