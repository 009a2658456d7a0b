#include <doctest.h>

#include "isaid/classify.hpp"
#include "isaid/error.hpp"
#include "isaid/random.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace isaid;
using namespace isaid::classify;

namespace {

SparseVector dense(std::vector<double> v) { return SparseVector::from_dense(v); }

Dataset dataset(const std::vector<std::vector<double>>& rows, const std::vector<std::size_t>& targets,
                std::size_t classes) {
  Dataset d;
  for (const auto& r : rows) d.rows.push_back(dense(r));
  d.targets = targets;
  d.dimension = rows.front().size();
  d.classes = classes;
  return d;
}

double log_sum_exp(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::exp(x);
  return std::log(s);
}

// Floored variances put log-posteriors near -5e8, where one double ulp is ~6e-8.
bool log_close(double got, double want) { return std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)); }

double training_accuracy(const Classifier& clf, const Dataset& d) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    const auto s = clf.scores(d.rows[i]);
    if (argmax(s) == d.targets[i]) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(d.rows.size());
}

// Nonnegative, class-specific blocks plus background noise: separable for
// every kind, including the multinomial models.
Dataset block_data(std::size_t classes, std::size_t per_class, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Dataset d;
  d.dimension = 3 * classes;
  d.classes = classes;
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<double> x(d.dimension, 0.0);
      x[3 * c] = 0.5 + 0.5 * rng.uniform();
      x[3 * c + 1] = 0.5 + 0.5 * rng.uniform();
      for (int k = 0; k < 2; ++k) x[rng.below(d.dimension)] += 0.2 * rng.uniform();
      d.rows.push_back(dense(x));
      d.targets.push_back(c);
    }
  }
  return d;
}

// 200 points in the plane labelled by the side of a line through the origin,
// keeping only points at distance >= 0.5 from it.
Dataset margin_cloud(std::uint64_t seed) {
  SplitMix64 rng(seed);
  const double wx = 0.6;
  const double wy = 0.8;
  Dataset d;
  d.dimension = 2;
  d.classes = 2;
  while (d.rows.size() < 200) {
    const double x = 6.0 * rng.uniform() - 3.0;
    const double y = 6.0 * rng.uniform() - 3.0;
    const double margin = wx * x + wy * y;
    if (std::abs(margin) < 0.5) continue;
    d.rows.push_back(dense({x, y}));
    d.targets.push_back(margin > 0 ? 1 : 0);
  }
  return d;
}

std::unique_ptr<Classifier> trained(const ClassifierSpec& spec, const Dataset& d) {
  auto clf = make_classifier(spec);
  clf->fit(d);
  return clf;
}

corpus::Corpus tiny_corpus(std::size_t per_class, std::uint64_t seed) {
  return corpus::generate_synthetic(corpus::default_isa_specs(4), per_class, 40, seed);
}

}  // namespace

TEST_CASE("classify mnb hand example") {
  const auto d = dataset({{2, 0}, {0, 2}}, {0, 1}, 2);
  const auto clf = trained(ClassifierSpec(Kind::mnb), d);
  const auto s = clf->scores(dense({1, 0}));
  // P(f0|A) = (2+1)/(2+2) = 3/4, P(f0|B) = 1/4, equal priors.
  CHECK(std::exp(s[0]) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::exp(s[1]) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(argmax(s) == 0);
}

TEST_CASE("classify naive Bayes posteriors match closed forms") {
  const std::vector<std::vector<double>> rows{{2, 1, 0}, {1, 0, 3}, {0, 2, 1}, {1, 1, 1}};
  const std::vector<std::size_t> targets{0, 0, 1, 1};
  const auto d = dataset(rows, targets, 2);
  const std::vector<double> q{1, 2, 0};
  const double alpha = 0.5;

  SUBCASE("mnb") {
    auto spec = ClassifierSpec(Kind::mnb);
    spec.set("alpha", alpha);
    const auto s = trained(spec, d)->scores(dense(q));
    // class 0 counts (3,1,3)=7, class 1 counts (1,3,2)=6
    const double c0[] = {3, 1, 3};
    const double c1[] = {1, 3, 2};
    std::vector<double> jll{std::log(0.5), std::log(0.5)};
    for (int j = 0; j < 3; ++j) {
      jll[0] += q[j] * std::log((c0[j] + alpha) / (7 + 3 * alpha));
      jll[1] += q[j] * std::log((c1[j] + alpha) / (6 + 3 * alpha));
    }
    const double z = log_sum_exp(jll);
    CHECK(std::abs(s[0] - (jll[0] - z)) < 1e-9);
    CHECK(std::abs(s[1] - (jll[1] - z)) < 1e-9);
  }

  SUBCASE("cnb") {
    auto spec = ClassifierSpec(Kind::cnb);
    spec.set("alpha", alpha);
    const auto s = trained(spec, d)->scores(dense(q));
    // Complement of class 0 is class 1's counts and vice versa.
    const double comp0[] = {1, 3, 2};
    const double comp1[] = {3, 1, 3};
    std::vector<double> jll{0, 0};
    for (int j = 0; j < 3; ++j) {
      jll[0] -= q[j] * std::log((comp0[j] + alpha) / (6 + 3 * alpha));
      jll[1] -= q[j] * std::log((comp1[j] + alpha) / (7 + 3 * alpha));
    }
    const double z = log_sum_exp(jll);
    CHECK(std::abs(s[0] - (jll[0] - z)) < 1e-9);
    CHECK(std::abs(s[1] - (jll[1] - z)) < 1e-9);
  }

  SUBCASE("gnb") {
    const auto s = trained(ClassifierSpec(Kind::gnb), d)->scores(dense(q));
    // class 0 means (1.5, 0.5, 1.5), variances (0.25, 0.25, 2.25)
    // class 1 means (0.5, 1.5, 1.0), variances (0.25, 0.25, 0)
    const double mu[2][3] = {{1.5, 0.5, 1.5}, {0.5, 1.5, 1.0}};
    const double var[2][3] = {{0.25, 0.25, 2.25}, {0.25, 0.25, 1e-9}};
    std::vector<double> jll{std::log(0.5), std::log(0.5)};
    for (int c = 0; c < 2; ++c) {
      for (int j = 0; j < 3; ++j) {
        const double diff = q[j] - mu[c][j];
        jll[c] += -0.5 * std::log(2 * std::numbers::pi * var[c][j]) - diff * diff / (2 * var[c][j]);
      }
    }
    const double z = log_sum_exp(jll);
    CHECK(log_close(s[0], jll[0] - z));
    CHECK(log_close(s[1], jll[1] - z));
  }

  SUBCASE("gnb nonzero query on a floored variance") {
    // Class 1 has var 1e-9 at coordinate 2 and the query sits on its mean, so
    // the zero-vector baseline and its per-coordinate correction are both ~5e8.
    const std::vector<double> qf{1, 2, 1};
    const auto s = trained(ClassifierSpec(Kind::gnb), d)->scores(dense(qf));
    const double mu[2][3] = {{1.5, 0.5, 1.5}, {0.5, 1.5, 1.0}};
    const double var[2][3] = {{0.25, 0.25, 2.25}, {0.25, 0.25, 1e-9}};
    std::vector<double> jll{std::log(0.5), std::log(0.5)};
    for (int c = 0; c < 2; ++c) {
      for (int j = 0; j < 3; ++j) {
        const double diff = qf[j] - mu[c][j];
        jll[c] += -0.5 * std::log(2 * std::numbers::pi * var[c][j]) - diff * diff / (2 * var[c][j]);
      }
    }
    const double z = log_sum_exp(jll);
    CHECK(log_close(s[0], jll[0] - z));
    CHECK(log_close(s[1], jll[1] - z));
  }
}

TEST_CASE("classify knn k=1 memorizes one-hot points") {
  const auto d = dataset({{1, 0}, {0, 1}}, {0, 1}, 2);
  auto spec = ClassifierSpec(Kind::knn);
  spec.set("k", 1);
  const auto clf = trained(spec, d);
  CHECK(argmax(clf->scores(dense({1, 0}))) == 0);
  CHECK(argmax(clf->scores(dense({0, 1}))) == 1);
}

TEST_CASE("classify exact ties go to the lower label") {
  const std::vector<double> s{0.5, 0.5};
  CHECK(argmax(s) == 0);
  const auto d = dataset({{1, 0}, {0, 1}}, {0, 1}, 2);
  auto spec = ClassifierSpec(Kind::knn);
  spec.set("k", 2);
  const auto scores = trained(spec, d)->scores(dense({1, 1}));
  CHECK(scores[0] == scores[1]);
  CHECK(argmax(scores) == 0);
}

TEST_CASE("classify every kind fits separable data") {
  const auto d = block_data(6, 30, 4);
  for (Kind kind : kAllKinds) {
    CAPTURE(name(kind));
    CHECK(training_accuracy(*trained(ClassifierSpec(kind, 1), d), d) >= 0.99);
  }
}

TEST_CASE("classify linear models separate a margin cloud") {
  const auto d = margin_cloud(17);
  for (Kind kind : {Kind::perceptron, Kind::linear_svm, Kind::softmax_lr}) {
    CAPTURE(name(kind));
    CHECK(training_accuracy(*trained(ClassifierSpec(kind, 2), d), d) >= 0.99);
  }
}

TEST_CASE("classify fitting is deterministic") {
  const auto d = block_data(4, 20, 9);
  for (Kind kind : kAllKinds) {
    CAPTURE(name(kind));
    CHECK(trained(ClassifierSpec(kind, 5), d)->parameters() == trained(ClassifierSpec(kind, 5), d)->parameters());
  }
}

TEST_CASE("classify scale consistency at c = 2") {
  const auto d = block_data(5, 25, 12);
  auto scaled = d;
  for (auto& r : scaled.rows) r.scale(2.0);
  const auto test = block_data(5, 10, 13);

  auto lr = ClassifierSpec(Kind::softmax_lr, 3);
  auto lr2 = lr;
  lr2.set("learning_rate", lr.get("learning_rate") / 4).set("l2", lr.get("l2") * 4);
  auto svm = ClassifierSpec(Kind::linear_svm, 3);
  auto svm2 = svm;
  svm2.set("lambda", svm.get("lambda") * 4);

  for (const auto& [a, b] : {std::pair{lr, lr2}, std::pair{svm, svm2}}) {
    CAPTURE(name(a.kind));
    const auto m1 = trained(a, d);
    const auto m2 = trained(b, scaled);
    for (auto x : test.rows) {
      const auto s1 = m1->scores(x);
      x.scale(2.0);
      CHECK(argmax(s1) == argmax(m2->scores(x)));
    }
  }
}

TEST_CASE("classify spec validation") {
  auto spec = ClassifierSpec(Kind::knn);
  CHECK(spec.get("k") == 3);
  spec.set("k", 0);
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.set("k", 2.5);
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  CHECK_THROWS_AS(ClassifierSpec(Kind::mnb).get("k"), std::invalid_argument);
  auto nb = ClassifierSpec(Kind::mnb);
  nb.set("alpha", -1);
  CHECK_THROWS_AS(nb.validate(), std::invalid_argument);
  CHECK(parse_kind("ptn") == Kind::perceptron);
  CHECK(parse_kind("linear_svm") == Kind::linear_svm);
  CHECK(ClassifierSpec(Kind::softmax_lr).effective().size() == 4);
}

TEST_CASE("classify fit errors") {
  const auto one = corpus::generate_synthetic(corpus::default_isa_specs(1), 5, 40, 1);
  features::FeatureConfig cfg;
  const auto schema = features::FeatureSchema::fit(one, cfg);
  CHECK_THROWS_AS(fit(ClassifierSpec(Kind::mnb), schema, one), DataError);
  const corpus::Corpus unlabeled({{{1, 2}, std::nullopt, "u"}, {{3}, "a", "a"}, {{4}, "b", "b"}});
  CHECK_THROWS_AS(fit(ClassifierSpec(Kind::mnb), schema, unlabeled), DataError);
}

TEST_CASE("classify model round-trip preserves predictions for every kind") {
  const auto train = tiny_corpus(5, 1);
  const auto held_out = tiny_corpus(25, 2);
  for (auto method : {features::Method::tfidf_byte, features::Method::tfidf_char, features::Method::hist_endian_char}) {
    features::FeatureConfig cfg;
    cfg.method = method;
    if (features::is_char(method)) cfg.encoding = codec::Kind::base85;
    const auto schema = features::FeatureSchema::fit(train, cfg);
    for (Kind kind : kAllKinds) {
      CAPTURE(name(kind));
      const auto model = fit(ClassifierSpec(kind, 7), schema, train);
      std::stringstream buf;
      save_model(model, buf);
      const auto loaded = load_model(buf);
      CHECK(loaded.labels() == model.labels());
      CHECK(loaded.schema().dimension() == model.schema().dimension());
      CHECK(loaded.classifier().parameters() == model.classifier().parameters());
      for (const auto& doc : held_out.documents()) {
        const auto a = model.predict(doc);
        const auto b = loaded.predict(doc);
        REQUIRE(a.label == b.label);
        REQUIRE(a.scores == b.scores);
      }
    }
  }
}

TEST_CASE("classify model load rejects version bumps and corruption") {
  const auto train = tiny_corpus(4, 3);
  const auto schema = features::FeatureSchema::fit(train, features::FeatureConfig{});
  std::stringstream buf;
  save_model(fit(ClassifierSpec(Kind::cnb), schema, train), buf);
  const std::string text = buf.str();
  REQUIRE(text.rfind("isaid-model 1.0\n", 0) == 0);

  std::string bumped = text;
  bumped.replace(0, 15, "isaid-model 2.0");
  std::istringstream b(bumped);
  CHECK_THROWS_WITH_AS(load_model(b), doctest::Contains("version"), ModelFormatError);

  std::string flipped = text;
  flipped[text.size() / 2] ^= 0x01;
  std::istringstream f(flipped);
  CHECK_THROWS_WITH_AS(load_model(f), doctest::Contains("checksum"), ModelFormatError);

  std::istringstream truncated(text.substr(0, text.size() / 3));
  CHECK_THROWS_AS(load_model(truncated), ModelFormatError);
  std::istringstream garbage("hello\n");
  CHECK_THROWS_AS(load_model(garbage), ModelFormatError);
}
