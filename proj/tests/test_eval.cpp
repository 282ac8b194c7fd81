#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "symdet/error.hpp"
#include "symdet/eval.hpp"

using namespace symdet;
using doctest::Approx;

namespace {
AxisSegment seg(double ax, double ay, double bx, double by, std::optional<double> score = {}) {
  return {{ax, ay}, {bx, by}, score};
}

// Score-priority greedy written out independently: sort indices by score with
// an insertion sort (stable), then scan groundtruth in index order.
int reference_greedy_tp(const std::vector<AxisSegment>& dets, const std::vector<AxisSegment>& gts,
                        Regime regime, ImageSize size) {
  std::vector<int> order;
  for (int i = 0; i < static_cast<int>(dets.size()); ++i) {
    auto pos = order.begin();
    while (pos != order.end() && *dets[*pos].score >= *dets[i].score) ++pos;
    order.insert(pos, i);
  }
  std::vector<bool> used(gts.size(), false);
  int tp = 0;
  for (int d : order)
    for (std::size_t g = 0; g < gts.size(); ++g)
      if (!used[g] && is_true_positive(dets[d], gts[g], regime, size)) {
        used[g] = true;
        ++tp;
        break;
      }
  return tp;
}
}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("angle between segments") {
    const AxisSegment x = seg(0, 0, 10, 0);
    CHECK(angle_between(x, x) == 0.0);
    CHECK(angle_between(x, seg(5, 5, 5, -5)) == Approx(90.0));
    CHECK(angle_between(x, seg(10, 0, 0, 0)) == Approx(0.0));
    CHECK(angle_between(x, seg(0, 0, 10, 10)) == Approx(45.0));
    CHECK(angle_between(x, seg(0, 0, -10, 10)) == Approx(45.0));
    CHECK_THROWS_AS(angle_between(x, seg(1, 1, 1, 1)), Error);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int k = 0; k < 500; ++k) {
      const AxisSegment a = seg(u(rng), u(rng), u(rng), u(rng));
      const AxisSegment b = seg(u(rng), u(rng), u(rng), u(rng));
      const AxisSegment b_swapped = seg(b.b.x, b.b.y, b.a.x, b.a.y);
      const double g = angle_between(a, b);
      CHECK(g >= 0.0);
      CHECK(g <= 90.0);
      CHECK(std::abs(g - angle_between(b, a)) <= 1e-9);
      CHECK(std::abs(g - angle_between(a, b_swapped)) <= 1e-9);
    }
  }

  TEST_CASE("threshold regimes") {
    CHECK(threshold_regime(Regime::cvpr2011).gamma_degrees == 10.0);
    CHECK(threshold_regime(Regime::cvpr2013).gamma_degrees == 10.0);
    CHECK(threshold_regime(Regime::iccv2017).gamma_degrees == 3.0);
    CHECK(parse_regime("iccv2017").regime == Regime::iccv2017);
    CHECK(parse_regime("CVPR2013").regime == Regime::cvpr2013);
    CHECK_THROWS_AS(parse_regime("cvpr2099"), Error);
    CHECK(all_regimes().size() == 3);

    const AxisSegment gt = seg(0, 0, 0, 40);
    const AxisSegment sc = seg(10, 0, 10, 40);
    CHECK(distance_threshold(sc, gt, Regime::cvpr2011, {}) == Approx(8.0));
    CHECK_FALSE(is_true_positive(sc, gt, Regime::cvpr2011, {}));
    CHECK(is_true_positive(seg(7, 0, 7, 40), gt, Regime::cvpr2011, {}));
    // Strict inequality at the boundary.
    CHECK_FALSE(is_true_positive(seg(8, 0, 8, 40), gt, Regime::cvpr2011, {}));

    const AxisSegment short_sc = seg(5, 15, 5, 25);
    CHECK(distance_threshold(short_sc, gt, Regime::cvpr2013, {}) == Approx(2.0));
    CHECK_FALSE(is_true_positive(short_sc, gt, Regime::cvpr2013, {}));
    CHECK(is_true_positive(short_sc, gt, Regime::cvpr2011, {}));

    CHECK(distance_threshold(sc, gt, Regime::iccv2017, {400, 200}) == Approx(5.0));
    CHECK(is_true_positive(seg(4, 0, 4, 40), gt, Regime::iccv2017, {400, 200}));
    CHECK_FALSE(is_true_positive(seg(5, 0, 5, 40), gt, Regime::iccv2017, {400, 200}));
    CHECK_THROWS_AS(is_true_positive(gt, gt, Regime::iccv2017, {}), Error);

    // 5 degree tilt passes the 10 degree gate but not the 3 degree one.
    const double t = std::tan(5.0 * std::numbers::pi / 180.0) * 20.0;
    const AxisSegment tilted = seg(-t, 0, t, 40);
    CHECK(is_true_positive(tilted, gt, Regime::cvpr2011, {}));
    CHECK_FALSE(is_true_positive(tilted, gt, Regime::iccv2017, {400, 400}));
  }

  TEST_CASE("self match under every regime") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0, 500);
    for (int k = 0; k < 1000; ++k) {
      AxisSegment x = seg(u(rng), u(rng), u(rng), u(rng));
      if (x.length() < 1e-6) continue;
      for (Regime r : all_regimes()) CHECK(is_true_positive(x, x, r, {500, 500}));
    }
  }

  TEST_CASE("matching examples") {
    const AxisSegment gt = seg(0, 0, 0, 40);
    std::vector<AxisSegment> dets{seg(0, 0, 0, 40, 1.0)};
    std::vector<AxisSegment> gts{gt};
    MatchResult m = match(dets, gts, Regime::cvpr2011, {});
    CHECK(m.tp == 1);
    CHECK(m.fp == 0);
    CHECK(m.fn == 0);

    dets.push_back(seg(1, 0, 1, 40, 0.5));
    m = match(dets, gts, Regime::cvpr2011, {});
    CHECK(m.tp == 1);
    CHECK(m.fp == 1);
    REQUIRE(m.matches.size() == 1);
    CHECK(m.matches[0].first == 0);

    std::vector<AxisSegment> three{gt, seg(50, 0, 50, 40), seg(100, 0, 100, 40)};
    m = match({}, three, Regime::cvpr2011, {});
    CHECK(m.tp == 0);
    CHECK(m.fn == 3);
  }

  TEST_CASE("PR curve examples") {
    const std::vector<AxisSegment> gts{seg(0, 0, 0, 40)};
    std::vector<AxisSegment> dets{seg(0, 0, 0, 40, 1.0)};
    auto curve = pr_curve(dets, gts, Regime::cvpr2011, {});
    REQUIRE(curve.size() == 1);
    CHECK(curve[0].threshold == 1.0);
    CHECK(curve[0].precision == 1.0);
    CHECK(curve[0].recall == 1.0);
    CHECK(max_f1(curve) == 1.0);

    dets.push_back(seg(200, 0, 200, 40, 0.5));
    curve = pr_curve(dets, gts, Regime::cvpr2011, {});
    REQUIRE(curve.size() == 2);
    CHECK(curve[1].threshold == 0.5);
    CHECK(curve[1].precision == 0.5);
    CHECK(curve[1].recall == 1.0);

    CHECK_THROWS_AS(pr_curve(dets, {}, Regime::cvpr2011, {}), Error);
    const std::vector<PrPoint> zero{{1.0, 0.0, 0.0}};
    CHECK(max_f1(zero) == 0.0);
    const std::vector<PrPoint> mixed{{1.0, 1.0, 0.5}, {0.5, 0.5, 1.0}};
    CHECK(max_f1(mixed) == Approx(2.0 / 3.0));
  }

  TEST_CASE("greedy matching oracle") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> pos(0, 60), jitter(-4, 4), score(0, 1);
    for (int trial = 0; trial < 2000; ++trial) {
      const int nd = static_cast<int>(rng() % 6), ng = 1 + static_cast<int>(rng() % 5);
      std::vector<AxisSegment> gts, dets;
      for (int g = 0; g < ng; ++g) {
        const double x = pos(rng), y = pos(rng);
        gts.push_back(seg(x, y, x + jitter(rng), y + 30));
      }
      for (int d = 0; d < nd; ++d) {
        const AxisSegment& near = gts[rng() % ng];
        // Coarse scores make ties common.
        const double s = std::round(score(rng) * 4) / 4;
        dets.push_back(seg(near.a.x + jitter(rng), near.a.y + jitter(rng), near.b.x + jitter(rng),
                           near.b.y + jitter(rng), s));
      }
      for (Regime r : all_regimes()) {
        const ImageSize size{200, 160};
        const MatchResult m = match(dets, gts, r, size);
        CHECK(m.tp == reference_greedy_tp(dets, gts, r, size));
        std::vector<std::vector<bool>> ok(nd, std::vector<bool>(ng));
        for (int d = 0; d < nd; ++d)
          for (int g = 0; g < ng; ++g) ok[d][g] = is_true_positive(dets[d], gts[g], r, size);
        CHECK(m.tp <= testing::exhaustive_max_tp(ok));
        CHECK(m.tp + m.fn == ng);
        CHECK(m.tp + m.fp == nd);
        CHECK(m.tp <= std::min(nd, ng));

        const auto curve = pr_curve(dets, gts, r, size);
        for (std::size_t k = 1; k < curve.size(); ++k) {
          CHECK(curve[k].recall >= curve[k - 1].recall);
          CHECK(curve[k].threshold < curve[k - 1].threshold);
        }
        double f1 = 0.0;
        for (const PrPoint& p : curve)
          if (p.precision + p.recall > 0)
            f1 = std::max(f1, 2 * p.precision * p.recall / (p.precision + p.recall));
        CHECK(max_f1(curve) == f1);
      }
    }
  }

  TEST_CASE("dataset evaluation pools images") {
    std::vector<EvalItem> items{
        {"a", {100, 100}, {seg(50, 0, 50, 100, 1.0), seg(10, 0, 10, 100, 0.4)}, {seg(50, 0, 50, 100)}},
        {"b", {100, 100}, {seg(0, 30, 100, 30, 0.8)}, {seg(0, 70, 100, 70), seg(0, 30, 100, 30)}},
        {"c", {100, 100}, {}, {seg(20, 20, 80, 80)}},
    };
    const EvalReport r = evaluate(items, Regime::iccv2017);
    CHECK(r.regime == "ICCV2017");
    CHECK(r.images == 3);
    CHECK(r.groundtruth == 4);
    CHECK(r.tp == 2);
    CHECK(r.fp == 1);
    CHECK(r.fn == 2);
    CHECK(r.top1_tp == 2);
    REQUIRE(r.curve.size() == 3);
    CHECK(r.curve[0].recall == Approx(0.25));
    CHECK(r.curve[1].recall == Approx(0.5));
    CHECK(r.curve[2].precision == Approx(2.0 / 3.0));
    CHECK(r.max_f1 == Approx(2 * (1.0 * 0.5) / 1.5));

    const std::vector<EvalItem> none{{"a", {10, 10}, {}, {seg(0, 0, 5, 5)}}};
    const EvalReport empty = evaluate(none, Regime::cvpr2011);
    CHECK(empty.fn == 1);
    REQUIRE(empty.curve.size() == 1);
    CHECK(empty.curve[0].precision == 1.0);
    CHECK(empty.curve[0].recall == 0.0);
    CHECK(empty.max_f1 == 0.0);
  }
}
