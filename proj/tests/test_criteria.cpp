#include <gtest/gtest.h>

#include <cmath>

#include "cqmorph/counterexample.hpp"
#include "cqmorph/criteria.hpp"
#include "cqmorph/sampling.hpp"
#include "test_support.hpp"

namespace cqmorph {
namespace {

using testing::diag_pair;

ClassicalPair cpair(std::vector<double> a, std::vector<double> b) {
  return ClassicalPair(ProbVector(std::move(a)), ProbVector(std::move(b)));
}

const ScanEntry* find_entry(const ScanResult& r, const std::string& label) {
  for (const auto& e : r.entries) {
    if (e.label == label) return &e;
  }
  return nullptr;
}

struct SixInstance {
  ClassicalPair from;
  QuantumPair to;
};

SixInstance six_instance() {
  const TriplePoint triple(0.1, 0.3, 0.6);
  const SeparatingPoint pt = find_separating_point(triple, default_counterexample_grid());
  const ClassicalPair from(ProbVector({0.1, 0.3, 0.6}), ProbVector::uniform(3));
  const ClassicalPair to(ProbVector({pt.a, pt.b, 1.0 - pt.a - pt.b}), ProbVector::uniform(3));
  return {from, QuantumPair::diagonal(to)};
}

TEST(ScanFunctions, Order) {
  ScanGrids g{{0.5, 2.0}, {0.7}};
  const auto fns = scan_functions(g);
  std::vector<std::string> labels;
  for (const auto& f : fns) labels.push_back(f.label());
  EXPECT_EQ(labels, (std::vector<std::string>{"resolvent:0", "resolvent:0.5", "resolvent:2",
                                               "power:0.7", "power:1", "square"}));
}

TEST(IsViolation, RelativeTolerance) {
  EXPECT_TRUE(is_violation(0.5, 0.6, 1e-9));
  EXPECT_FALSE(is_violation(0.6, 0.5, 1e-9));
  EXPECT_FALSE(is_violation(1.0, 1.0 + 1e-10, 1e-9));
  EXPECT_FALSE(is_violation(INFINITY, INFINITY, 1e-9));
  EXPECT_TRUE(is_violation(5.0, INFINITY, 1e-9));
  EXPECT_FALSE(is_violation(INFINITY, 5.0, 1e-9));
}

TEST(NecessaryScan, EmbeddedDiagonalHasZeroGaps) {
  const ClassicalPair from = cpair({0.6, 0.3, 0.1}, {0.2, 0.2, 0.6});
  const ScanResult r = necessary_scan(from, QuantumPair::diagonal(from));
  EXPECT_EQ(r.violation_count(), 0u);
  for (const auto& e : r.entries) EXPECT_LE(std::abs(e.gap()), 1e-9) << e.label;
}

TEST(NecessaryScan, ResolventViolationExample) {
  const ScanResult r = necessary_scan(cpair({0.5, 0.5}, {0.5, 0.5}), diag_pair({0.9, 0.1}, {0.5, 0.5}),
                                      ScanGrids{{1.0}, {0.5}});
  const ScanEntry* e = find_entry(r, "resolvent:1");
  ASSERT_NE(e, nullptr);
  EXPECT_NEAR(e->lhs, 0.5, 1e-12);
  EXPECT_NEAR(e->rhs, 0.5 / 2.8 + 0.5 / 1.2, 1e-12);
  EXPECT_NEAR(e->rhs, 0.595238, 1e-6);
  EXPECT_TRUE(e->violated);
  ASSERT_NE(r.worst_violation(), nullptr);
}

TEST(NecessaryScan, CounterexamplePointPasses) {
  const SixInstance six = six_instance();
  const ScanResult r = necessary_scan(six.from, six.to);
  EXPECT_EQ(r.violation_count(), 0u);
}

TEST(SufficientEquality, ReverseTestPair) {
  Rng rng = make_rng(81);
  const QuantumPair to = testing::random_pair(rng, 3, 2, 2);
  EXPECT_TRUE(sufficient_equality(reverse_test(to).q, to));
}

TEST(SufficientEquality, DiagonalEmbedding) {
  const ClassicalPair from = cpair({0.6, 0.3, 0.1}, {0.2, 0.2, 0.6});
  EXPECT_TRUE(sufficient_equality(from, QuantumPair::diagonal(from)));
}

TEST(SufficientEquality, StrictlyMoreInformativeSourceFails) {
  Rng rng = make_rng(82);
  int strict = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const ClassicalPair from(random_prob_vector(rng, 3), random_prob_vector(rng, 3));
    // Depolarize the embedded copy: a strictly noisier image.
    const QuantumPair clean = QuantumPair::diagonal(from);
    const HermitianOp mixed = DensityOp::maximally_mixed(3).op();
    const QuantumPair noisy(DensityOp(0.7 * clean.sigma0.op() + 0.3 * mixed),
                            DensityOp(0.7 * clean.sigma1.op() + 0.3 * mixed));
    if (!sufficient_equality(from, noisy)) ++strict;
  }
  EXPECT_EQ(strict, 20);
}

TEST(SufficientViaReverseTest, FromIsReverseTestPair) {
  Rng rng = make_rng(83);
  const QuantumPair to = testing::random_pair(rng, 3, 3, 2);
  const auto r = sufficient_via_reverse_test(reverse_test(to).q, to);
  ASSERT_EQ(r.status, Verdict::Feasible);
  EXPECT_LE(r.residual, 10 * kFeasibilityTol);
}

TEST(SufficientViaReverseTest, RefinedSource) {
  Rng rng = make_rng(84);
  const QuantumPair to = testing::random_pair(rng, 2, 2, 2);
  const ClassicalPair q = reverse_test(to).q;
  // Split symbol 0 into two halves; merging them back is an explicit P.
  std::vector<double> a{0.5 * q.p0[0], 0.5 * q.p0[0]};
  std::vector<double> b{0.5 * q.p1[0], 0.5 * q.p1[0]};
  for (std::size_t i = 1; i < q.size(); ++i) {
    a.push_back(q.p0[i]);
    b.push_back(q.p1[i]);
  }
  const auto r = sufficient_via_reverse_test(cpair(a, b), to);
  ASSERT_EQ(r.status, Verdict::Feasible);
  EXPECT_LE(reproduction_residual(*r.channel, cpair(a, b), to), 10 * kFeasibilityTol);
}

TEST(SufficientViaReverseTest, UniformSourceIsNotSufficient) {
  const auto r = sufficient_via_reverse_test(cpair({0.5, 0.5}, {0.5, 0.5}), diag_pair({0.9, 0.1}, {0.5, 0.5}));
  EXPECT_EQ(r.status, Verdict::Undetermined);
  EXPECT_FALSE(r.channel.has_value());
}

TEST(Decide, PureTargetStage) {
  const ClassicalPair from = cpair({0.2, 0.3, 0.5}, {0.5, 0.5, 0.0});
  const QuantumPair to = diag_pair({0.6, 0.4}, {1.0, 0.0});
  const auto r = decide(from, to);
  EXPECT_EQ(r.stage, "pure-target");
  EXPECT_EQ(r.status, pure_target_feasible(from, to).status);
  EXPECT_EQ(decide(cpair({0.3, 0.4, 0.3}, {0.5, 0.5, 0.0}), to).status, Verdict::Infeasible);
}

TEST(Decide, CounterexampleRefutedByOracle) {
  const SixInstance six = six_instance();
  const auto r = decide(six.from, six.to);
  EXPECT_EQ(r.status, Verdict::Infeasible);
  EXPECT_EQ(r.stage, "oracle");
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_NE(r.certificate->find("majorization"), std::string::npos);
}

TEST(Decide, ScanStageRefutes) {
  const auto r = decide(cpair({0.5, 0.5}, {0.5, 0.5}), diag_pair({0.9, 0.1}, {0.5, 0.5}));
  EXPECT_EQ(r.status, Verdict::Infeasible);
  EXPECT_EQ(r.stage, "scan");
  EXPECT_TRUE(r.violation.has_value());
}

TEST(Decide, ForwardImagesAccepted) {
  Rng rng = make_rng(85);
  for (int trial = 0; trial < 40; ++trial) {
    const ClassicalPair from(random_prob_vector(rng, 3), random_prob_vector(rng, 3));
    const CQChannel gamma = random_cq_channel(rng, 3, 2, 2);
    const QuantumPair to(DensityOp(gamma.apply(from.p0)), DensityOp(gamma.apply(from.p1)));
    const auto r = decide(from, to);
    ASSERT_EQ(r.status, Verdict::Feasible) << trial;
    ASSERT_TRUE(r.stage == "reverse-test" || r.stage == "oracle") << r.stage;
    ASSERT_LE(reproduction_residual(*r.channel, from, to), 10 * kFeasibilityTol);
  }
}

TEST(Decide, TruncatedIterationsAreUndetermined) {
  Rng rng = make_rng(2);
  const ClassicalPair from(random_prob_vector(rng, 3), random_prob_vector(rng, 3));
  const CQChannel gamma = random_cq_channel(rng, 3, 2, 2);
  const QuantumPair to(DensityOp(gamma.apply(from.p0)), DensityOp(gamma.apply(from.p1)));
  DecideConfig config;
  config.max_iter = 1;
  EXPECT_EQ(decide(from, to, config).status, Verdict::Undetermined);
  EXPECT_EQ(decide(from, to).status, Verdict::Feasible);
}

TEST(Properties, RefutationIsSound) {
  Rng rng = make_rng(86);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
    const int dim = 2 + trial % 2;
    const ClassicalPair from(random_prob_vector(rng, n, 0.2), random_prob_vector(rng, n, 0.2));
    const CQChannel gamma = random_cq_channel(rng, n, dim, 1 + trial % dim);
    const QuantumPair to(DensityOp(gamma.apply(from.p0)), DensityOp(gamma.apply(from.p1)));
    const auto r = decide(from, to);
    ASSERT_NE(r.status, Verdict::Infeasible) << trial << " stage " << r.stage;
    if (r.status == Verdict::Feasible) {
      ASSERT_LE(reproduction_residual(*r.channel, from, to), 10 * kFeasibilityTol) << trial;
    }
  }
}

TEST(Properties, GridRefinementKeepsViolations) {
  Rng rng = make_rng(87);
  const ScanGrids coarse{log_grid(1e-2, 1e2, 5), linear_grid(0.5, 0.9, 3)};
  ScanGrids fine = coarse;
  for (double t : log_grid(3e-2, 3e1, 4)) fine.t.push_back(t);
  for (double s : {0.6, 0.8, 0.95}) fine.s.push_back(s);
  for (int trial = 0; trial < 200; ++trial) {
    const ClassicalPair from(random_prob_vector(rng, 3), random_prob_vector(rng, 3));
    const QuantumPair to = testing::random_pair(rng, 2, 2, 2);
    const ScanResult c = necessary_scan(from, to, coarse);
    const ScanResult f = necessary_scan(from, to, fine);
    for (const auto& e : c.entries) {
      if (!e.violated) continue;
      const ScanEntry* g = find_entry(f, e.label);
      ASSERT_NE(g, nullptr) << e.label;
      ASSERT_TRUE(g->violated);
    }
    ASSERT_GE(f.violation_count(), c.violation_count());
  }
}

TEST(Properties, ReverseTestPairSatisfiesEquality) {
  Rng rng = make_rng(88);
  for (int trial = 0; trial < 500; ++trial) {
    const int dim = 2 + trial % 3;
    const QuantumPair to = testing::random_pair(rng, dim, 1 + (trial / 3) % dim, 1 + trial % dim);
    ASSERT_TRUE(sufficient_equality(reverse_test(to).q, to)) << trial;
  }
}

}  // namespace
}  // namespace cqmorph
