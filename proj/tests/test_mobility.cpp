#include <gtest/gtest.h>

#include <cmath>

#include "hetnetsim/mobility.hpp"
#include "hetnetsim/rng.hpp"

using namespace hetnetsim;
using namespace hetnetsim::mobility;

namespace {

UserState inside_user(MobilityClass cls = MobilityClass::NonVehicular) {
  UserState s;
  s.mobility_class = cls;
  s.home_hotspot = 0;
  s.region = Region::in(0);
  return s;
}

UserState outside_user(MobilityClass cls = MobilityClass::NonVehicular) {
  auto s = inside_user(cls);
  s.region = Region::outside();
  return s;
}

// Appends a stay of `inside` epochs followed by an exit to the history.
void add_stay(UserState& s, std::int64_t inside) {
  s.history.push({s.epoch, Region::outside(), Region::in(0)});
  s.epoch += inside;
  s.history.push({s.epoch, Region::in(0), Region::outside()});
}

}  // namespace

TEST(EffectiveProbs, NonVehicularIsIdentity) {
  EXPECT_EQ(effective_probs({0.1, 0.2, 1.0}, MobilityClass::NonVehicular), (EffectiveProbs{0.1, 0.2}));
  EXPECT_EQ(effective_probs({0.1, 0.2, 4.0}, MobilityClass::NonVehicular), (EffectiveProbs{0.1, 0.2}));
}

TEST(EffectiveProbs, VehicularScales) {
  const auto e = effective_probs({0.1, 0.2, 4.0}, MobilityClass::Vehicular);
  EXPECT_DOUBLE_EQ(e.p_exit, 0.4);
  EXPECT_DOUBLE_EQ(e.p_enter, 0.8);
}

TEST(EffectiveProbs, VehicularClampsAtOne) {
  EXPECT_EQ(effective_probs({0.3, 0.5, 4.0}, MobilityClass::Vehicular), (EffectiveProbs{1.0, 1.0}));
}

TEST(EffectiveProbsProperty, VehicularDominates) {
  rng::Stream r(1, rng::Domain::Test, 0);
  for (int i = 0; i < 10000; ++i) {
    MobilityParams p{r.uniform(), r.uniform(), 1.0 + 10.0 * r.uniform()};
    const auto v = effective_probs(p, MobilityClass::Vehicular);
    const auto n = effective_probs(p, MobilityClass::NonVehicular);
    ASSERT_GE(v.p_exit, n.p_exit);
    ASSERT_GE(v.p_enter, n.p_enter);
    ASSERT_LE(v.p_exit, 1.0);
    ASSERT_LE(v.p_enter, 1.0);
  }
}

TEST(StepUser, AbsorbingInside) {
  MobilityParams p{0.0, 0.5};
  for (double d : {0.0, 0.3, 0.999999}) EXPECT_TRUE(step_user(inside_user(), p, d).region.inside());
}

TEST(StepUser, CertainEntry) {
  MobilityParams p{0.2, 1.0};
  for (double d : {0.0, 0.5, 0.999999}) EXPECT_EQ(step_user(outside_user(), p, d).region, Region::in(0));
}

TEST(StepUser, StrictThreshold) {
  MobilityParams p{0.3, 0.1};
  EXPECT_FALSE(step_user(inside_user(), p, 0.29).region.inside());
  EXPECT_TRUE(step_user(inside_user(), p, 0.30).region.inside());
}

TEST(StepUser, ThresholdFrequencyOverMillionDraws) {
  MobilityParams p{0.3, 0.1};
  rng::Stream r(11, rng::Domain::Test, 0);
  const int n = 1'000'000;
  int exits = 0;
  for (int i = 0; i < n; ++i) {
    if (!step_user(inside_user(), p, r.uniform()).region.inside()) ++exits;
  }
  EXPECT_NEAR(static_cast<double>(exits) / n, 0.3, 0.005);
}

TEST(StepUser, HistoryAppendedOnlyOnChange) {
  MobilityParams p{0.3, 0.1};
  auto s = step_user(inside_user(), p, 0.9);
  EXPECT_TRUE(s.history.empty());
  EXPECT_EQ(s.epoch, 1);
  s = step_user(s, p, 0.1);
  ASSERT_EQ(s.history.size(), 1u);
  EXPECT_EQ(s.history.back().epoch, 2);
  EXPECT_EQ(s.history.back().from, Region::in(0));
  EXPECT_EQ(s.history.back().to, s.region);
}

TEST(StepUserProperty, DeterministicAndHistoryConsistent) {
  MobilityParams p{0.2, 0.3, 4.0, 5, 8};
  rng::Stream r(12, rng::Domain::Test, 0);
  auto s = inside_user(MobilityClass::Vehicular);
  s.history = TransitionRing(8);
  for (int i = 0; i < 5000; ++i) {
    const double d = r.uniform();
    const auto a = step_user(s, p, d);
    ASSERT_EQ(a, step_user(s, p, d));
    s = a;
    if (!s.history.empty()) {
      ASSERT_EQ(s.history.back().to, s.region);
    }
    for (std::size_t k = 1; k < s.history.size(); ++k) ASSERT_LT(s.history[k - 1].epoch, s.history[k].epoch);
    ASSERT_LE(s.history.size(), 8u);
  }
}

TEST(Stationary, Symmetric) { EXPECT_DOUBLE_EQ(stationary_occupancy({0.1, 0.1}, MobilityClass::NonVehicular), 0.5); }

TEST(Stationary, AbsorbingHotspot) {
  EXPECT_DOUBLE_EQ(stationary_occupancy({0.0, 0.2}, MobilityClass::NonVehicular), 1.0);
}

TEST(Stationary, DegenerateThrows) {
  EXPECT_THROW(stationary_occupancy({0.0, 0.0}, MobilityClass::NonVehicular), DegenerateParametersError);
}

TEST(Stationary, ClosedFormMatchesMillionStepSimulation) {
  MobilityParams p{0.3, 0.1};
  EXPECT_DOUBLE_EQ(stationary_occupancy(p, MobilityClass::NonVehicular), 0.25);
  rng::Stream r(13, rng::Domain::Test, 0);
  auto s = outside_user();
  std::int64_t inside = 0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    s.region = step_user(s, p, r.uniform()).region;
    if (s.region.inside()) ++inside;
  }
  EXPECT_NEAR(static_cast<double>(inside) / n, 0.25, 0.01);
}

TEST(Predict, NeverObservedLeavingStays) {
  MobilityParams p{0.4, 0.1};
  p.min_evidence = 5;
  auto s = inside_user();
  s.history.push({0, Region::outside(), Region::in(0)});
  s.epoch = 40;
  const auto pred = predict_location(s, 100, p);
  EXPECT_EQ(pred.verdict, Verdict::Stay);
  EXPECT_EQ(pred.estimated_leave_probability, 0.0);
  EXPECT_EQ(pred.evidence_count, 40);
}

TEST(Predict, CertainExitLeaves) {
  MobilityParams p{0.0, 0.1};
  p.min_evidence = 5;
  auto s = inside_user();
  for (int i = 0; i < 6; ++i) add_stay(s, 1);
  s.history.push({s.epoch, Region::outside(), Region::in(0)});
  const auto pred = predict_location(s, 1, p);
  EXPECT_EQ(pred.verdict, Verdict::Leave);
  EXPECT_DOUBLE_EQ(pred.estimated_leave_probability, 1.0);
}

// Exhaustive enumeration of the 2^10 exit patterns over ten epochs.
TEST(Predict, GeometricSurvivalMatchesEnumeration) {
  const double p = 0.1;
  double leave = 0.0;
  for (unsigned mask = 0; mask < (1u << 10); ++mask) {
    double prob = 1.0;
    for (int k = 0; k < 10; ++k) prob *= (mask >> k) & 1u ? p : 1.0 - p;
    if (mask != 0) leave += prob;
  }
  EXPECT_NEAR(leave, 0.6513215599, 1e-9);

  MobilityParams params{0.5, 0.1};
  params.min_evidence = 5;
  auto s = inside_user();
  add_stay(s, 10);  // one exit over ten inside epochs: p_hat = 0.1
  s.history.push({s.epoch, Region::outside(), Region::in(0)});
  const auto pred = predict_location(s, 10, params);
  EXPECT_EQ(pred.evidence_count, 10);
  EXPECT_NEAR(pred.estimated_leave_probability, leave, 1e-12);
  EXPECT_EQ(pred.verdict, Verdict::Leave);
}

TEST(Predict, FallsBackToPriorBelowMinEvidence) {
  MobilityParams p{0.1, 0.1};
  p.min_evidence = 5;
  auto s = inside_user();
  add_stay(s, 2);
  s.history.push({s.epoch, Region::outside(), Region::in(0)});
  const auto pred = predict_location(s, 10, p);
  EXPECT_EQ(pred.evidence_count, 2);
  EXPECT_NEAR(pred.estimated_leave_probability, 1.0 - std::pow(0.9, 10), 1e-12);
}

TEST(Predict, VehicularPriorUsesMultiplier) {
  MobilityParams p{0.1, 0.1, 4.0};
  const auto pred = predict_location(inside_user(MobilityClass::Vehicular), 1, p);
  EXPECT_DOUBLE_EQ(pred.estimated_leave_probability, 0.4);
  EXPECT_EQ(pred.verdict, Verdict::Stay);
}

TEST(Predict, TieStays) {
  MobilityParams p{0.5, 0.1};
  const auto pred = predict_location(inside_user(), 1, p);
  EXPECT_DOUBLE_EQ(pred.estimated_leave_probability, 0.5);
  EXPECT_EQ(pred.verdict, Verdict::Stay);
}

TEST(Predict, OutsideIsPreconditionViolation) {
  EXPECT_THROW(predict_location(outside_user(), 5, MobilityParams{}), PreconditionError);
  EXPECT_THROW(predict_location(inside_user(), 0, MobilityParams{}), PreconditionError);
}

TEST(PredictProperty, MonotoneInHorizonAndRate) {
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    for (std::int64_t h = 1; h < 60; ++h) {
      ASSERT_LE(leave_probability(p, h), leave_probability(p, h + 1));
      if (i < 100) {
        ASSERT_LE(leave_probability(p, h), leave_probability((i + 1) / 100.0, h));
      }
    }
  }
}

TEST(TransitionRing, OverwritesOldest) {
  TransitionRing ring(3);
  for (int i = 1; i <= 5; ++i) ring.push({i, Region::outside(), Region::in(0)});
  ASSERT_EQ(ring.size(), 3u);
  EXPECT_EQ(ring[0].epoch, 3);
  EXPECT_EQ(ring[2].epoch, 5);
  EXPECT_EQ(ring.back().epoch, 5);
}
