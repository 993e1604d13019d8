#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <nlohmann/json.hpp>
#include <vector>

#include "hetnetsim/fuzzy.hpp"
#include "hetnetsim/rng.hpp"
#include "support.hpp"

using namespace hetnetsim;
using namespace hetnetsim::fuzzy;

namespace {

constexpr std::array<double, 5> kW{0.0625, 0.0791, 0.0211, 0.0981, 0.4991};

// Reference networks read from the fixture.
struct RefNetworks {
  CellCriteria wlan;
  CellCriteria umts;
};

RefNetworks load_refs() {
  const auto j = nlohmann::json::parse(testsupport::slurp(testsupport::source_dir() / "fixtures" / "table3_networks.json"));
  auto read = [&](std::size_t i) {
    const auto& n = j["networks"][i];
    return CellCriteria{n["cost"].get<double>(), n["bandwidth"].get<double>(), n["rss"].get<double>(),
                        n["delay"].get<double>()};
  };
  return {read(0), read(1)};
}

// Independent piecewise-linear evaluation through explicit (x, y) knots.
double interp(const std::vector<std::pair<double, double>>& knots, double x) {
  if (x <= knots.front().first) return knots.front().second;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (x <= knots[i].first) {
      const auto [x0, y0] = knots[i - 1];
      const auto [x1, y1] = knots[i];
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  return knots.back().second;
}

}  // namespace

TEST(Membership, PlateauIsOne) {
  MembershipFunction mf{"m", 0, 2, 4, 6};
  EXPECT_EQ(membership(mf, 3.0), 1.0);
  EXPECT_EQ(membership(mf, 2.0), 1.0);
  EXPECT_EQ(membership(mf, 4.0), 1.0);
}

TEST(Membership, OutsideSupportIsZero) {
  MembershipFunction mf{"m", 0, 2, 4, 6};
  EXPECT_EQ(membership(mf, -0.1), 0.0);
  EXPECT_EQ(membership(mf, 6.1), 0.0);
  EXPECT_EQ(membership(mf, -1e9), 0.0);
}

TEST(Membership, RisingFlankAtOneIsHalf) {
  MembershipFunction mf{"m", 0, 2, 4, 6};
  EXPECT_DOUBLE_EQ(membership(mf, 1.0), 0.5);
}

TEST(Membership, DenseSamplingMatchesKnotInterpolation) {
  MembershipFunction mf{"m", 0, 2, 4, 6};
  const std::vector<std::pair<double, double>> knots{{-1, 0}, {0, 0}, {2, 1}, {4, 1}, {6, 0}, {7, 0}};
  for (int i = 0; i <= 8000; ++i) {
    const double x = -1.0 + 8.0 * i / 8000.0;
    EXPECT_NEAR(membership(mf, x), interp(knots, x), 1e-12) << "x=" << x;
  }
}

TEST(Membership, ShoulderSetsWithCoincidentBreakpoints) {
  MembershipFunction left{"l", 0, 0, 1, 2};
  MembershipFunction right{"r", 1, 2, 3, 3};
  EXPECT_EQ(membership(left, 0.0), 1.0);
  EXPECT_EQ(membership(right, 3.0), 1.0);
  EXPECT_DOUBLE_EQ(membership(left, 1.5) + membership(right, 1.5), 1.0);
}

TEST(MembershipProperty, DegreeAlwaysInUnitInterval) {
  rng::Stream r(1, rng::Domain::Test, 10);
  for (int t = 0; t < 2000; ++t) {
    std::array<double, 4> p{};
    for (auto& v : p) v = -50.0 + 100.0 * r.uniform();
    std::sort(p.begin(), p.end());
    if (r.uniform() < 0.2) p[1] = p[0];
    if (r.uniform() < 0.2) p[2] = p[1];
    MembershipFunction mf{"m", p[0], p[1], p[2], p[3]};
    for (int k = 0; k < 50; ++k) {
      const double x = -60.0 + 120.0 * r.uniform();
      const double d = membership(mf, x);
      ASSERT_GE(d, 0.0);
      ASSERT_LE(d, 1.0);
    }
  }
}

TEST(Fuzzify, WlanReferenceSitsOnBestPlateaus) {
  const auto cfg = default_fuzzy_config();
  const auto f = fuzzify(load_refs().wlan.with_priority(Priority::Ordinary), cfg);
  EXPECT_EQ(f.of(Criterion::Cost), (std::array<double, 3>{1, 0, 0}));       // Economic
  EXPECT_EQ(f.of(Criterion::Bandwidth), (std::array<double, 3>{0, 0, 1}));  // Good
  EXPECT_EQ(f.of(Criterion::Rss), (std::array<double, 3>{0, 0, 1}));        // High
  EXPECT_EQ(f.of(Criterion::Delay), (std::array<double, 3>{1, 0, 0}));      // Low
  EXPECT_EQ(f.clamped_mask, 0);
}

TEST(Fuzzify, UmtsReferenceSitsOnWorstPlateaus) {
  const auto cfg = default_fuzzy_config();
  const auto f = fuzzify(load_refs().umts.with_priority(Priority::Ordinary), cfg);
  EXPECT_EQ(f.of(Criterion::Cost), (std::array<double, 3>{0, 0, 1}));       // Expensive
  EXPECT_EQ(f.of(Criterion::Bandwidth), (std::array<double, 3>{1, 0, 0}));  // Poor
  EXPECT_EQ(f.of(Criterion::Rss), (std::array<double, 3>{1, 0, 0}));        // Low
  EXPECT_EQ(f.of(Criterion::Delay), (std::array<double, 3>{0, 0, 1}));      // High
}

TEST(Fuzzify, CrossoverPointSplitsEvenly) {
  const auto cfg = default_fuzzy_config();
  CriteriaVector v{0.025, 2.0, -15.0, Priority::Ordinary, 13.5};
  const auto f = fuzzify(v, cfg);
  EXPECT_NEAR(f.of(Criterion::Cost)[0], 0.5, 1e-12);
  EXPECT_NEAR(f.of(Criterion::Cost)[1], 0.5, 1e-12);
  EXPECT_NEAR(f.of(Criterion::Bandwidth)[0], 0.5, 1e-12);
  EXPECT_NEAR(f.of(Criterion::Bandwidth)[1], 0.5, 1e-12);
  EXPECT_NEAR(f.of(Criterion::Rss)[1], 0.5, 1e-12);
  EXPECT_NEAR(f.of(Criterion::Rss)[2], 0.5, 1e-12);
  EXPECT_NEAR(f.of(Criterion::Delay)[1], 0.5, 1e-12);
  EXPECT_NEAR(f.of(Criterion::Delay)[2], 0.5, 1e-12);
}

TEST(Fuzzify, PriorityIsCrisp) {
  const auto cfg = default_fuzzy_config();
  for (auto p : kAllPriorities) {
    const auto f = fuzzify(load_refs().wlan.with_priority(p), cfg);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(f.of(Criterion::Priority)[i], i == static_cast<std::size_t>(p) ? 1.0 : 0.0);
  }
}

TEST(Fuzzify, OutOfUniverseValuesClampAndAreFlagged) {
  const auto cfg = default_fuzzy_config();
  CriteriaVector v{5.0, -3.0, 60.0, Priority::Ordinary, 2000.0};
  const auto f = fuzzify(v, cfg);
  EXPECT_EQ(f.clamped_mask, (1u << 0) | (1u << 1) | (1u << 2) | (1u << 4));
  EXPECT_EQ(f.of(Criterion::Cost), (std::array<double, 3>{0, 0, 1}));
  EXPECT_EQ(f.of(Criterion::Bandwidth), (std::array<double, 3>{1, 0, 0}));
  EXPECT_EQ(f.of(Criterion::Rss), (std::array<double, 3>{0, 0, 1}));
  EXPECT_EQ(f.of(Criterion::Delay), (std::array<double, 3>{0, 0, 1}));
}

TEST(FuzzifyProperty, DefaultConfigIsPartitionOfUnity) {
  const auto cfg = default_fuzzy_config();
  rng::Stream r(2, rng::Domain::Test, 0);
  for (auto c : kNumericCriteria) {
    const auto& crit = cfg.numeric(c);
    for (int i = 0; i < 10000; ++i) {
      const double x = crit.lo + (crit.hi - crit.lo) * r.uniform();
      double sum = 0.0;
      for (const auto& mf : crit.sets) {
        const double d = membership(mf, x);
        ASSERT_GE(d, 0.0);
        ASSERT_LE(d, 1.0);
        sum += d;
      }
      ASSERT_NEAR(sum, 1.0, 1e-9) << kCriterionNames[static_cast<std::size_t>(c)] << " x=" << x;
    }
  }
}

TEST(Score, IdenticalInputsScoreIdentically) {
  const auto cfg = default_fuzzy_config();
  CriteriaVector v{0.05, 3.3, -70.0, Priority::HighQoS, 9.0};
  EXPECT_EQ(score_network(v, cfg, RatKind::Lte), score_network(v, cfg, RatKind::Lte));
}

// Hand-computed weighted sums: every numeric criterion of the reference rows
// sits on a plateau, so each term is weight * {0, 1} plus the priority utility.
TEST(Score, ReferenceNetworksMatchHandOracle) {
  const auto cfg = default_fuzzy_config();
  const auto refs = load_refs();
  const double wsum = 0.0625 + 0.0791 + 0.0211 + 0.0981 + 0.4991;
  ASSERT_DOUBLE_EQ(wsum, 0.7599);

  // WLAN is best effort: Insensitive 1, Ordinary 0.5, HighQoS 0.
  const std::array<double, 3> be{1.0, 0.5, 0.0};
  // UMTS is QoS guaranteed: the reverse.
  const std::array<double, 3> qg{0.0, 0.5, 1.0};
  for (auto p : kAllPriorities) {
    const auto i = static_cast<std::size_t>(p);
    const double wlan_oracle = (0.0625 * 1 + 0.0791 * 1 + 0.0211 * 1 + 0.0981 * be[i] + 0.4991 * 1) / wsum;
    const double umts_oracle = (0.0625 * 0 + 0.0791 * 0 + 0.0211 * 0 + 0.0981 * qg[i] + 0.4991 * 0) / wsum;
    EXPECT_NEAR(score_network(refs.wlan.with_priority(p), cfg, RatKind::Wlan80211), wlan_oracle, 1e-12);
    EXPECT_NEAR(score_network(refs.umts.with_priority(p), cfg, RatKind::Umts), umts_oracle, 1e-12);
    EXPECT_GT(wlan_oracle, umts_oracle);
  }
  EXPECT_NEAR(score_network(refs.wlan.with_priority(Priority::Insensitive), cfg, RatKind::Wlan80211), 1.0, 1e-12);
  EXPECT_NEAR(score_network(refs.umts.with_priority(Priority::HighQoS), cfg, RatKind::Umts), 0.0981 / 0.7599, 1e-12);
}

TEST(Score, WeightsMatchFixture) {
  const auto j = nlohmann::json::parse(testsupport::slurp(testsupport::source_dir() / "fixtures" / "table3_networks.json"));
  const auto cfg = default_fuzzy_config();
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(cfg.weights[i], j["weights"][i].get<double>());
    EXPECT_EQ(cfg.weights[i], kW[i]);
  }
}

TEST(Score, AllZeroWeightsIsConfigError) {
  auto cfg = default_fuzzy_config();
  cfg.weights = {0, 0, 0, 0, 0};
  EXPECT_THROW(score_network(load_refs().wlan.with_priority(Priority::Ordinary), cfg), ConfigError);
}

TEST(Score, DelayOnlyWeightsPreferLowerDelay) {
  auto cfg = default_fuzzy_config();
  cfg.weights = {0, 0, 0, 0, 1};
  CriteriaVector fast{0.1, 2.0, -80.0, Priority::Ordinary, 6.0};
  CriteriaVector slow = fast;
  slow.delay = 13.0;
  EXPECT_GT(score_network(fast, cfg), score_network(slow, cfg));
}

TEST(Score, ScoreIsInUnitInterval) {
  const auto cfg = default_fuzzy_config();
  rng::Stream r(3, rng::Domain::Test, 0);
  for (int i = 0; i < 5000; ++i) {
    CriteriaVector v{r.uniform() * 2 - 0.5, r.uniform() * 150 - 10, r.uniform() * 200 - 140,
                     kAllPriorities[r.bits() % 3], r.uniform() * 1200 - 50};
    const double s = score_network(v, cfg, kAllRats[r.bits() % 3]);
    ASSERT_GE(s, 0.0);
    ASSERT_LE(s, 1.0);
  }
}

TEST(ScoreProperty, ImprovingOneCriterionNeverLowersScore) {
  const auto cfg = default_fuzzy_config();
  rng::Stream r(4, rng::Domain::Test, 0);
  for (int i = 0; i < 20000; ++i) {
    CriteriaVector v{r.uniform() * 0.2, r.uniform() * 10, -120 + 160 * r.uniform(), kAllPriorities[r.bits() % 3],
                     r.uniform() * 25};
    const auto rat = kAllRats[r.bits() % 3];
    const double base = score_network(v, cfg, rat);
    auto better = v;
    switch (r.bits() % 4) {
      case 0: better.cost -= r.uniform() * v.cost; break;
      case 1: better.bandwidth += r.uniform() * 5; break;
      case 2: better.rss += r.uniform() * (40 - v.rss); break;
      default: better.delay -= r.uniform() * v.delay; break;
    }
    ASSERT_GE(score_network(better, cfg, rat), base - 1e-15);
  }
}

TEST(Rank, SingleCandidate) {
  const auto cfg = default_fuzzy_config();
  const auto ranked = rank_networks({{"only", load_refs().umts.with_priority(Priority::Ordinary), RatKind::Umts}}, cfg);
  ASSERT_EQ(ranked.size(), 1u);
  EXPECT_EQ(ranked[0].cell_id, "only");
}

TEST(Rank, WlanBeatsUmtsForEveryPriority) {
  const auto cfg = default_fuzzy_config();
  const auto refs = load_refs();
  for (auto p : kAllPriorities) {
    const auto ranked = rank_networks(
        {{"umts", refs.umts.with_priority(p), RatKind::Umts}, {"wlan", refs.wlan.with_priority(p), RatKind::Wlan80211}},
        cfg);
    EXPECT_EQ(ranked.front().cell_id, "wlan");
  }
}

TEST(Rank, TiesBreakByAscendingId) {
  const auto cfg = default_fuzzy_config();
  const auto v = load_refs().wlan.with_priority(Priority::Ordinary);
  const auto ranked = rank_networks({{"b", v, RatKind::Wlan80211}, {"a", v, RatKind::Wlan80211}}, cfg);
  EXPECT_EQ(ranked[0].cell_id, "a");
  EXPECT_EQ(ranked[1].cell_id, "b");
}

TEST(Rank, EmptyInputThrows) { EXPECT_THROW(rank_networks({}, default_fuzzy_config()), EmptyInputError); }

TEST(RankProperty, AffineTransformOfCriterionAndBreakpointsKeepsOrder) {
  const auto base = default_fuzzy_config();
  rng::Stream r(5, rng::Domain::Test, 0);
  for (int t = 0; t < 300; ++t) {
    std::vector<Candidate> cands;
    const auto n = 2 + r.bits() % 5;
    for (std::size_t i = 0; i < n; ++i) {
      cands.push_back({"c" + std::to_string(i),
                       {r.uniform() * 0.15, r.uniform() * 8, -120 + 160 * r.uniform(), kAllPriorities[r.bits() % 3],
                        r.uniform() * 20},
                       kAllRats[r.bits() % 3]});
    }
    const double scale = 0.5 + 3.0 * r.uniform();
    const double shift = -10.0 + 20.0 * r.uniform();
    auto f = [&](double x) { return scale * x + shift; };

    auto cfg = base;
    auto& crit = cfg.delay;
    crit.lo = f(crit.lo);
    crit.hi = f(crit.hi);
    for (auto& mf : crit.sets) mf = {mf.label, f(mf.a), f(mf.b), f(mf.c), f(mf.d)};
    auto moved = cands;
    for (auto& c : moved) c.criteria.delay = f(c.criteria.delay);

    const auto a = rank_networks(cands, base);
    const auto b = rank_networks(moved, cfg);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].cell_id, b[i].cell_id);
      EXPECT_NEAR(a[i].score, b[i].score, 1e-9);
    }
  }
}

TEST(RankProperty, Deterministic) {
  const auto cfg = default_fuzzy_config();
  const auto refs = load_refs();
  std::vector<Candidate> c{{"x", refs.umts.with_priority(Priority::HighQoS), RatKind::Lte},
                           {"y", refs.wlan.with_priority(Priority::HighQoS), RatKind::Wlan80211}};
  EXPECT_EQ(rank_networks(c, cfg), rank_networks(c, cfg));
}

TEST(LoadModel, DisabledIsIdentity) {
  LoadModel m;
  const auto base = load_refs().wlan;
  EXPECT_EQ(under_load(base, 0.7, m), base);
}

TEST(LoadModel, DelayAndBandwidthScaleWithUtilization) {
  LoadModel m{true, 0.95};
  const auto base = load_refs().wlan;
  const auto half = under_load(base, 0.5, m);
  EXPECT_DOUBLE_EQ(half.delay, 2.5);
  EXPECT_DOUBLE_EQ(half.bandwidth, 5.5);
  EXPECT_EQ(half.cost, base.cost);
  const auto capped = under_load(base, 3.0, m);
  EXPECT_NEAR(capped.delay, 1.25 / 0.05, 1e-12);
}
