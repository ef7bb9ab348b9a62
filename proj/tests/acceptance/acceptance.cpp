// Prints one PASS/FAIL line per acceptance criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fixture.hpp"
#include "httplib.h"
#include "oracles.hpp"
#include "schema.hpp"
#include "setsum/random.hpp"
#include "setsum/rank.hpp"
#include "setsum/server.hpp"

using namespace setsum;
using namespace setsum::testing;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

double relative_error(const Vector& analytic, const Vector& numeric) {
  const double scale = std::max({analytic.norm(), numeric.norm(), 1e-12});
  return (analytic - numeric).norm() / scale;
}

Vector random_vector(Rng& rng, Eigen::Index n, double lo, double hi) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

// ---------------------------------------------------------------------------

void gradient_check(Outcome& out) {
  const auto start = Clock::now();
  const double h = 1e-5, tol = 1e-4;
  double worst_sentiment = 0, worst_mate = 0;
  Rng rng(2024);

  for (int point = 0; point < 20; ++point) {
    const Eigen::Index d = 8;
    std::vector<SentimentExample> data;
    for (int i = 0; i < 30; ++i) data.push_back({random_vector(rng, d, -1, 1), rng.bernoulli(0.5)});
    const Vector w = random_vector(rng, d, -2, 2);
    const double b = rng.uniform(-1, 1), l2 = 1e-2;
    const auto g = sentiment_gradient(w, b, data, l2);
    Vector analytic(d + 1), numeric(d + 1);
    analytic << g.weights, g.bias;
    for (Eigen::Index i = 0; i < d; ++i) {
      Vector wp = w, wm = w;
      wp[i] += h;
      wm[i] -= h;
      numeric[i] = (sentiment_loss(wp, b, data, l2) - sentiment_loss(wm, b, data, l2)) / (2 * h);
    }
    numeric[d] = (sentiment_loss(w, b + h, data, l2) - sentiment_loss(w, b - h, data, l2)) / (2 * h);
    worst_sentiment = std::max(worst_sentiment, relative_error(analytic, numeric));
  }

  for (int point = 0; point < 20; ++point) {
    const Eigen::Index k = 4, d = 6, n = 10;
    MateModel model;
    model.W = Matrix::NullaryExpr(k, d, [&] { return rng.uniform(-1, 1); });
    model.b = random_vector(rng, k, -0.5, 0.5);
    model.A = Matrix::NullaryExpr(k, d, [&] { return rng.uniform(-1, 1); });
    const Matrix vectors = Matrix::NullaryExpr(n, d, [&] { return rng.uniform(-1, 1); });
    std::vector<MateSample> samples;
    for (Eigen::Index s = 0; s < n; ++s) {
      MateSample sample{s, {}};
      for (int j = 0; j < 4; ++j) sample.negatives.push_back(static_cast<Eigen::Index>(rng.index(n)));
      samples.push_back(sample);
    }
    MateGradient<double> g;
    mate_loss(model, vectors, samples, &g);
    Vector analytic(k * d + k), numeric(k * d + k);
    Eigen::Index at = 0;
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < d; ++c, ++at) {
        auto plus = model, minus = model;
        plus.W(r, c) += h;
        minus.W(r, c) -= h;
        analytic[at] = g.W(r, c);
        numeric[at] = (mate_loss(plus, vectors, samples) - mate_loss(minus, vectors, samples)) / (2 * h);
      }
    }
    for (Eigen::Index r = 0; r < k; ++r, ++at) {
      auto plus = model, minus = model;
      plus.b[r] += h;
      minus.b[r] -= h;
      analytic[at] = g.b[r];
      numeric[at] = (mate_loss(plus, vectors, samples) - mate_loss(minus, vectors, samples)) / (2 * h);
    }
    worst_mate = std::max(worst_mate, relative_error(analytic, numeric));
  }
  const double elapsed = seconds_since(start);
  out.require(worst_sentiment <= tol, "sentiment gradient");
  out.require(worst_mate <= tol, "aspect gradient");
  out.require(elapsed < 10.0, "runtime");
  out.detail << "max rel err sentiment=" << worst_sentiment << " aspect=" << worst_mate << " time=" << elapsed
             << "s";
}

// ---------------------------------------------------------------------------

void normalization_check(Outcome& out) {
  const double tol = 1e-9;
  Rng rng(99);
  double worst_softmax = 0, worst_mean = 0, worst_residual = 0, worst_weights = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Vector logits = random_vector(rng, 1 + static_cast<Eigen::Index>(rng.index(20)), -30, 30);
    worst_softmax = std::max(worst_softmax, std::abs(softmax(logits).sum() - 1.0));
  }
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = 1 + rng.index(40);
    std::vector<SentenceVector> cluster;
    for (std::size_t i = 0; i < n; ++i) {
      cluster.emplace_back("s" + std::to_string(i), random_vector(rng, 12, -1, 1), false);
    }
    const auto c = lexrank(cluster);
    worst_mean = std::max(worst_mean, std::abs(c.scores.mean() - 1.0));
    worst_residual = std::max(worst_residual, c.residual);
  }
  for (Question q : {Question::CourseComments, Question::InstructorComments}) {
    for (const auto& a : shipped_aspects(q).aspects) {
      double sum = 0;
      for (const auto& s : a.seeds) sum += s.weight;
      worst_weights = std::max(worst_weights, std::abs(sum - 1.0));
    }
  }
  out.require(worst_softmax <= tol, "softmax sum");
  out.require(worst_mean <= tol, "centrality mean");
  out.require(worst_residual < 1e-6, "stationarity residual");
  out.require(worst_weights <= tol, "seed weights");
  out.detail << "softmax=" << worst_softmax << " mean=" << worst_mean << " residual=" << worst_residual
             << " weights=" << worst_weights;
}

// ---------------------------------------------------------------------------

Cluster random_cluster(Rng& rng, std::size_t n, bool with_ties) {
  Cluster c;
  c.aspect = "random";
  c.centrality.resize(static_cast<Eigen::Index>(n));
  c.sentiment.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    c.ids.push_back("s" + std::to_string(rng.index(1000)) + "-" + std::to_string(i));
    const auto e = static_cast<Eigen::Index>(i);
    if (with_ties && i > 0 && rng.bernoulli(0.4)) {
      // exact duplicate of an earlier member: every objective term ties
      const auto j = rng.index(i);
      c.vectors.push_back(c.vectors[j]);
      c.centrality[e] = c.centrality[static_cast<Eigen::Index>(j)];
      c.sentiment[e] = c.sentiment[static_cast<Eigen::Index>(j)];
    } else {
      c.vectors.push_back(random_vector(rng, 6, -1, 1));
      c.centrality[e] = rng.uniform(0.2, 2.0);
      c.sentiment[e] = rng.uniform(0, 1);
    }
  }
  return c;
}

void oracle_check(Outcome& out) {
  Rng rng(31337);
  int clusters = 0, step_mismatch = 0;
  double worst_metric = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = 1 + rng.index(8);
    const auto cluster = random_cluster(rng, n, trial % 3 == 0);
    const std::size_t k = 1 + rng.index(5);
    ++clusters;
    const auto ours = extract_summary(cluster, k);
    if (ours.indices != greedy_oracle(cluster, k)) ++step_mismatch;
    for (const auto* summary : {&ours.indices}) {
      const auto got = score_summary(cluster, *summary);
      const auto want = metric_oracle(cluster, *summary);
      worst_metric = std::max({worst_metric, std::abs(got.centrality - want.centrality),
                               std::abs(got.redundancy - want.redundancy),
                               std::abs(got.sentiment_diff - want.sentiment_diff)});
    }
    const auto base = baseline_topk(cluster, k);
    const auto got = score_summary(cluster, base);
    const auto want = metric_oracle(cluster, base.indices);
    worst_metric = std::max({worst_metric, std::abs(got.centrality - want.centrality),
                             std::abs(got.redundancy - want.redundancy),
                             std::abs(got.sentiment_diff - want.sentiment_diff)});
  }
  out.require(clusters >= 20, "cluster count");
  out.require(step_mismatch == 0, "greedy choice");
  out.require(worst_metric <= 1e-12, "metric");
  out.detail << clusters << " clusters, mismatches=" << step_mismatch << " max metric diff=" << worst_metric;
}

// ---------------------------------------------------------------------------

struct CourseScores {
  double ours_redundancy = 0, base_redundancy = 0;
  double ours_sentiment = 0, base_sentiment = 0;
  double ours_centrality = 0, base_centrality = 0;
  int aspects = 0;
};

void directional_check(Outcome& out) {
  const auto start = Clock::now();
  const auto pipeline = train_pipeline(dense_config(100, 2019));
  const auto analyses = analyze_courses(pipeline.corpus.courses, pipeline.models, 1);
  const double elapsed = seconds_since(start);

  int better_redundancy = 0, better_sentiment = 0, scored = 0;
  double mean_or = 0, mean_br = 0, mean_os = 0, mean_bs = 0, mean_oc = 0, mean_bc = 0;
  for (const auto& a : analyses) {
    CourseScores c;
    for (Question q : {Question::CourseComments, Question::InstructorComments}) {
      for (const auto& s : a.comments(q).summaries) {
        c.ours_redundancy += s.ours_score.redundancy;
        c.base_redundancy += s.baseline_score.redundancy;
        c.ours_sentiment += s.ours_score.sentiment_diff;
        c.base_sentiment += s.baseline_score.sentiment_diff;
        c.ours_centrality += s.ours_score.centrality;
        c.base_centrality += s.baseline_score.centrality;
        ++c.aspects;
      }
    }
    if (c.aspects == 0) continue;
    ++scored;
    const double n = c.aspects;
    better_redundancy += c.ours_redundancy / n < c.base_redundancy / n;
    better_sentiment += c.ours_sentiment / n < c.base_sentiment / n;
    mean_or += c.ours_redundancy / n;
    mean_br += c.base_redundancy / n;
    mean_os += c.ours_sentiment / n;
    mean_bs += c.base_sentiment / n;
    mean_oc += c.ours_centrality / n;
    mean_bc += c.base_centrality / n;
  }
  const double courses = static_cast<double>(analyses.size());
  out.require(analyses.size() == 100 && scored == 100, "course count");
  out.require(mean_or < mean_br, "mean redundancy");
  out.require(mean_os < mean_bs, "mean sentiment diff");
  out.require(better_redundancy >= 0.9 * courses, "redundancy per course");
  out.require(better_sentiment >= 0.9 * courses, "sentiment diff per course");
  out.require(mean_oc <= mean_bc, "centrality");
  out.require(elapsed < 300.0, "runtime");
  out.detail << std::setprecision(4) << "redundancy " << mean_br / courses << " -> " << mean_or / courses << " ("
             << better_redundancy << "/100), sentiment diff " << mean_bs / courses << " -> " << mean_os / courses
             << " (" << better_sentiment << "/100), centrality " << mean_bc / courses << " -> "
             << mean_oc / courses << ", time=" << elapsed << "s";
}

// ---------------------------------------------------------------------------

void recovery_check(Outcome& out) {
  const auto pipeline = train_pipeline(dense_config(20, 555));
  std::map<std::string, const SentenceLabel*> labels;
  for (const auto& l : pipeline.corpus.labels) {
    labels[sentence_id(l.response_id, l.question, l.sentence_index)] = &l;
  }
  std::size_t total = 0, sentiment_hits = 0, aspect_hits = 0, unmatched = 0;
  for (const auto& course : pipeline.corpus.courses) {
    for (Question q : {Question::CourseComments, Question::InstructorComments}) {
      const auto& models = pipeline.models.for_question(q);
      for (const auto& s : segment_responses(course.responses, q)) {
        auto it = labels.find(s.id);
        if (it == labels.end()) {
          ++unmatched;
          continue;
        }
        const auto v = embed_sentence(s, pipeline.models);
        ++total;
        sentiment_hits += is_positive(predict_sentence(models.sentiment, v.vector)) == it->second->positive;
        const auto assignment = assign_aspects(models.mate, v);
        aspect_hits += models.mate.aspect_names[assignment.top()] == it->second->aspect;
      }
    }
  }
  const double sentiment_acc = total ? double(sentiment_hits) / double(total) : 0.0;
  const double aspect_acc = total ? double(aspect_hits) / double(total) : 0.0;
  out.require(unmatched == 0 && total == pipeline.corpus.labels.size(), "segmentation matches sidecar");
  out.require(sentiment_acc >= 0.95, "sentiment accuracy");
  out.require(aspect_acc >= 0.8, "aspect accuracy");
  out.detail << total << " sentences, sentiment acc=" << sentiment_acc << " aspect acc=" << aspect_acc;
}

// ---------------------------------------------------------------------------

std::vector<AnnotatedSentence> toy_annotations(int repeat) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> rows = {
      {"The exams were graded fairly.", {"grading"}},
      {"Grading was slow and unfair.", {"grading"}},
      {"The lectures were clear.", {"lectures"}},
      {"Lectures were slow but the slides helped.", {"lectures"}},
      {"The exams covered the lectures.", {"grading", "lectures"}},
      {"The room was cold.", {}},
  };
  std::vector<AnnotatedSentence> out;
  for (const auto& [text, aspects] : rows) {
    Sentence s;
    s.text = text;
    for (const auto& t : tokenize(text)) {
      for (int r = 0; r < repeat; ++r) s.tokens.push_back(t);
    }
    out.push_back({s, aspects});
  }
  return out;
}

ClarityTable run_toy(int repeat) {
  const auto rows = toy_annotations(repeat);
  std::vector<AnnotatedSentence> annotated;
  std::vector<Sentence> all;
  for (const auto& r : rows) {
    all.push_back(r.sentence);
    if (!r.aspects.empty()) annotated.push_back(r);
  }
  return clarity_scores(annotated, all);
}

void clarity_check(Outcome& out) {
  // Brute-force table computed independently before the implementation.
  const ClarityTable expected = {
      {"grading",
       {{"exams", 0.17072657381090797}, {"and", 0.10409975333882782}, {"covered", 0.10409975333882782},
        {"fairly", 0.10409975333882782}, {"graded", 0.10409975333882782}, {"grading", 0.10409975333882782},
        {"unfair", 0.10409975333882782}, {"but", 0}, {"clear", 0}, {"cold", 0}, {"helped", 0}, {"room", 0},
        {"slides", 0}, {"slow", 0}, {"the", 0}, {"was", 0}, {"lectures", -0.04215798560416241},
        {"were", -0.04215798560416241}}},
      {"lectures",
       {{"lectures", 0.18382274806276042}, {"but", 0.088506644351390079}, {"clear", 0.088506644351390079},
        {"covered", 0.088506644351390079}, {"helped", 0.088506644351390079}, {"slides", 0.088506644351390079},
        {"the", 0.064385320362090978}, {"were", 0.043502275700702461}, {"and", 0}, {"cold", 0}, {"fairly", 0},
        {"graded", 0}, {"grading", 0}, {"room", 0}, {"unfair", 0}, {"was", 0},
        {"exams", -0.0074513670006243473}, {"slow", -0.0074513670006243473}}},
  };
  const auto got = run_toy(1);
  double worst = 0;
  bool same_order = got.size() == expected.size();
  for (const auto& [aspect, ranked] : expected) {
    const auto it = got.find(aspect);
    if (it == got.end() || it->second.size() != ranked.size()) {
      same_order = false;
      continue;
    }
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      same_order = same_order && it->second[i].first == ranked[i].first;
      worst = std::max(worst, std::abs(it->second[i].second - ranked[i].second));
    }
  }
  const auto tripled = run_toy(3);
  bool invariant = tripled.size() == got.size();
  for (const auto& [aspect, ranked] : got) {
    const auto& other = tripled.at(aspect);
    for (std::size_t i = 0; i < ranked.size() && invariant; ++i) invariant = other[i].first == ranked[i].first;
  }
  out.require(same_order, "ranking");
  out.require(worst <= 1e-12, "scores");
  out.require(invariant, "x3 ranking invariance");
  out.detail << "max score diff=" << worst;
}

// ---------------------------------------------------------------------------

void api_check(Outcome& out) {
  TempDir dir("setsum-acceptance");
  const auto pipeline = train_pipeline(dense_config(6, 77));
  for (const auto& a : analyze_courses(pipeline.corpus.courses, pipeline.models, 2)) write_analysis(dir.path(), a);

  ApiConfig config;
  config.data_dir = dir.path();
  config.token = "acceptance-token";
  config.port = 0;
  const Api api(config);
  const std::string auth = "Bearer " + config.token;

  int bodies = 0, schema_failures = 0, containment_checked = 0, containment_failures = 0;
  auto fetch = [&](const std::string& path, const std::string& schema) {
    const auto r = api.handle("GET", path, auth);
    if (r.status != 200) {
      ++schema_failures;
      out.require(false, path + " returned " + std::to_string(r.status));
      return json();
    }
    const auto body = json::parse(r.body);
    const auto errors = validate_schema(load_schema(schema), body);
    ++bodies;
    if (!errors.empty()) {
      ++schema_failures;
      out.require(false, path + errors.front());
    }
    return body;
  };

  fetch("/api/health", "health");
  const auto courses = fetch("/api/courses", "courses");
  for (const auto& c : courses) {
    const std::string base =
        "/api/courses/" + c["term"].get<std::string>() + "/" + c["course_id"].get<std::string>();
    const auto ratings = fetch(base + "/ratings", "ratings");
    for (const char* rq : {"course", "instructor"}) {
      int sum = 0;
      for (const auto& [_, count] : ratings[rq]["histogram"].items()) sum += count.get<int>();
      out.require(sum == ratings[rq]["respondents"].get<int>(), "histogram sum");
    }
    for (const std::string q : {"course", "instructor"}) {
      const auto aspects = fetch(base + "/comments/" + q + "/aspects", "aspects");
      const auto table = fetch(base + "/comments/" + q + "/sentences", "sentences");
      for (const auto& bubble : aspects["bubbles"]) {
        const auto name = bubble["aspect"].get<std::string>();
        const auto summary = fetch(base + "/comments/" + q + "/aspects/" + name + "/summary", "summary");
        for (const auto& s : summary["sentences"]) {
          ++containment_checked;
          if (s["parent_comment"].get<std::string>().find(s["text"].get<std::string>()) == std::string::npos) {
            ++containment_failures;
          }
        }
      }
    }
  }

  // 401 before 404: a missing or wrong token never reveals whether a course exists.
  const std::vector<std::string> probes = {"/api/courses", "/api/courses/NOPE/NOPE/ratings",
                                           "/api/courses/NOPE/NOPE/comments/course/aspects",
                                           "/api/courses/x/y/comments/bogus/aspects", "/api/unknown"};
  int ordering_failures = 0;
  for (const auto& p : probes) {
    for (const std::string header : {"", "Bearer wrong", "Basic abc"}) {
      const auto r = api.handle("GET", p, header);
      const bool ok = r.status == 401 && validate_schema(load_schema("error"), json::parse(r.body)).empty();
      ordering_failures += !ok;
    }
  }
  out.require(api.handle("GET", "/api/courses/NOPE/NOPE/ratings", auth).status == 404, "authorized 404");

  // Same contract over a live socket.
  HttpServer server(config);
  const int port = server.bind();
  std::thread thread([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  const auto live_unauth = client.Get("/api/courses/NOPE/NOPE/ratings");
  const auto live_list = client.Get("/api/courses", {{"Authorization", auth}});
  server.stop();
  thread.join();
  out.require(live_unauth && live_unauth->status == 401, "live 401");
  out.require(live_list && live_list->status == 200 &&
                  validate_schema(load_schema("courses"), json::parse(live_list->body)).empty(),
              "live listing");

  out.require(courses.size() == 6, "course listing");
  out.require(schema_failures == 0, "schemas");
  out.require(containment_checked > 0 && containment_failures == 0, "parent comment containment");
  out.require(ordering_failures == 0, "401 ordering");
  out.detail << bodies << " bodies validated, " << containment_checked << " summary sentences checked";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"gradient correctness", gradient_check},
      {"normalization suite", normalization_check},
      {"oracle equivalence", oracle_check},
      {"directional reproduction", directional_check},
      {"synthetic label recovery", recovery_check},
      {"clarity oracle", clarity_check},
      {"api contract", api_check},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      check(outcome);
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail << "exception: " << e.what();
    }
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << name << "  [" << outcome.detail.str() << "]"
              << std::endl;
  }
  return failures;
}
