#include <gtest/gtest.h>

#include "dlap/dense.hpp"
#include "dlap/diagonalize.hpp"
#include "dlap/limits.hpp"
#include "dlap/shearer.hpp"

using namespace dlap;

namespace {

Scalar S(const char* text) { return parse_real<Scalar>(text); }

ShearerRun<Scalar> half_star_run(const char* lambda, int k) {
  const Scalar l = S(lambda);
  return generate(l, Scalar(s_star(l).value / 2), k);
}

Scalar radius_of(const ShearerRun<Scalar>& run) {
  const int digits = static_cast<int>(working_digits<Scalar>()) - 5;
  return approximate_radius(run.counts, run.s, Scalar(1), run.lambda,
                            iterations_for_digits(Scalar(run.lambda - 1), digits))
      .midpoint();
}

// Back-node output of the materialized caterpillar at mu, from the general
// tree routine (back node j has vertex id j - 1).
Scalar tree_output(const ShearerRun<Scalar>& run, const Tree& t, std::size_t j, const Scalar& mu) {
  return diagonalize_tree(t, run.s, Scalar(-mu)).outputs[j - 1];
}

}  // namespace

TEST(Generate, OutputsStayInWindow) {
  PrecisionScope scope(60);
  for (const char* l : {"1.5", "5.4", "30"}) {
    for (const char* which : {"half", "star"}) {
      const Scalar lambda = S(l);
      const Scalar star = s_star(lambda).value;
      const Scalar s = std::string(which) == "half" ? Scalar(star / 2) : star;
      const auto run = generate(lambda, s, 25);
      const Scalar& tp = run.params.repelling();
      for (std::size_t j = 0; j < run.k(); ++j) {
        EXPECT_GE(run.counts.counts[j], 0);
        EXPECT_LT(tp - run.params.delta, run.b_trace[j]) << l << ' ' << which << ' ' << j;
        EXPECT_LT(run.b_trace[j], tp) << l << ' ' << which << ' ' << j;
      }
    }
  }
}

// Each count is the largest one keeping the output below theta'.
TEST(Generate, CountsAreMaximal) {
  PrecisionScope scope(60);
  const auto run = half_star_run("5.4", 12);
  for (std::size_t j = 0; j < run.k(); ++j) {
    auto more = run.counts.counts;
    more[j] += 1;
    const ShearerRun<Scalar> probe{run.lambda, run.s, Caterpillar(more), {}, {}, run.params, 0};
    // shifted_walk at eps = 0 reproduces b_j; one extra leaf lifts b_j by delta.
    EXPECT_GE(detail::shifted_walk(probe, j + 1, Scalar(0), [](const Scalar& b) { return b; }),
              run.params.repelling())
        << j;
  }
}

TEST(Generate, PrefixIsStable) {
  PrecisionScope scope(60);
  for (const char* l : {"1.5", "5.4"}) {
    for (int k = 2; k < 20; ++k) {
      const auto a = half_star_run(l, k).counts.counts;
      const auto b = half_star_run(l, k + 1).counts.counts;
      for (int j = 0; j + 1 < k; ++j) EXPECT_EQ(a[j], b[j]) << l << " k=" << k << " j=" << j;
      // The end node carries one extra -s^2, worth less than one leaf.
      EXPECT_LE(std::abs(a[k - 1] - b[k - 1]), 1) << l << " k=" << k;
      EXPECT_GE(a[k - 1], b[k - 1]);
    }
  }
}

TEST(Generate, RadiusIncreasesTowardLambda) {
  PrecisionScope scope(60);
  for (const char* l : {"1.5", "5.4"}) {
    Scalar prev(1);
    for (int k = 2; k <= 14; ++k) {
      const auto run = half_star_run(l, k);
      const Scalar rho = radius_of(run);
      EXPECT_LT(prev, rho) << l << " k=" << k;
      EXPECT_LT(rho, run.lambda) << l << " k=" << k;
      prev = rho;
    }
  }
}

TEST(Generate, RadiusAgreesWithDenseSpectrum) {
  PrecisionScope scope(50);
  const auto run = half_star_run("1.5", 6);
  ASSERT_LE(run.counts.vertex_count(), 64);
  const auto eig = symmetric_eigenvalues(dense_deformed_laplacian(caterpillar_to_tree(run.counts), run.s));
  EXPECT_LT(abs(eig.back() - radius_of(run)), pow10<Scalar>(-30));
}

TEST(Generate, RejectsBadArguments) {
  PrecisionScope scope(50);
  try {
    generate(S("2"), Scalar(0), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate);
  }
  EXPECT_THROW(generate(S("1"), S("0.1"), 5), Error);
  EXPECT_THROW(generate(S("2"), S("0.1"), 1), Error);
  EXPECT_THROW(generate(S("2"), S("0.9"), 5), Error);  // not adapted
}

TEST(Beta, RecurrenceMatchesExplicitSum) {
  PrecisionScope scope(60);
  for (const char* l : {"1.5", "5.4", "2025"}) {
    const auto run = half_star_run(l, 30);
    const auto rec = run.beta_trace;
    const auto sum = beta_explicit(run);
    for (std::size_t j = 0; j < rec.size(); ++j) {
      EXPECT_LT(abs(rec[j] - sum[j]), pow10<Scalar>(-30) * (Scalar(1) + abs(rec[j]))) << l << ' ' << j;
    }
  }
}

TEST(Beta, PositiveIncreasingAndBounded) {
  PrecisionScope scope(60);
  for (const char* l : {"1.5", "5.4", "100"}) {
    const auto run = half_star_run(l, 25);
    ASSERT_GT(convergence_margin(run.s, run.lambda), Scalar(0));
    EXPECT_GT(run.beta_trace[0], Scalar(0));
    for (std::size_t j = 1; j < run.k(); ++j) EXPECT_LT(run.beta_trace[j - 1], run.beta_trace[j]) << l << ' ' << j;
    EXPECT_GE(run.beta_trace.back(), beta_lower_bound(run)) << l;
  }
}

// Oracle: central differences of the general-tree outputs at lambda -/+ h.
TEST(Beta, MatchesFiniteDifferenceOfTreeOutputs) {
  PrecisionScope scope(60);
  const Scalar h = pow10<Scalar>(-20);
  for (const char* l : {"1.5", "5.4"}) {
    const auto run = half_star_run(l, 10);
    const Tree t = caterpillar_to_tree(run.counts);
    for (std::size_t j = 1; j <= run.k(); ++j) {
      const Scalar b0 = tree_output(run, t, j, run.lambda);
      EXPECT_LT(abs(b0 - run.b_trace[j - 1]), pow10<Scalar>(-40)) << l << ' ' << j;
      const Scalar slope =
          (tree_output(run, t, j, Scalar(run.lambda - h)) - tree_output(run, t, j, Scalar(run.lambda + h))) / (2 * h);
      const Scalar fd = slope / -b0;
      EXPECT_LT(abs(fd - run.beta_trace[j - 1]), pow10<Scalar>(-15) * run.beta_trace[j - 1]) << l << ' ' << j;
    }
  }
}

TEST(Epsilon, SandwichedByRadiusAndBeta) {
  PrecisionScope scope(60);
  for (const char* l : {"1.5", "5.4"}) {
    for (int k : {3, 8, 15}) {
      const auto run = half_star_run(l, k);
      const auto eps = epsilon_k(run);
      const Scalar gap = run.lambda - radius_of(run);
      EXPECT_TRUE(eps.certified);
      EXPECT_EQ(eps.chain.size(), static_cast<std::size_t>(k));
      EXPECT_LE(eps.epsilon, Scalar(1) / run.beta_trace.back()) << l << " k=" << k;
      // The last nested root is where the top output vanishes, which is
      // exactly lambda - rho.
      EXPECT_LT(abs(eps.epsilon - gap), pow10<Scalar>(-35) * gap) << l << " k=" << k;
      for (std::size_t j = 1; j < eps.chain.size(); ++j) EXPECT_LE(eps.chain[j], eps.chain[j - 1]);
    }
  }
}

TEST(Epsilon, RejectsPositiveOutputs) {
  PrecisionScope scope(50);
  auto run = half_star_run("5.4", 4);
  run.b_trace[1] = Scalar(1);
  EXPECT_THROW(epsilon_k(run), Error);
  EXPECT_THROW(beta_sequence(run), Error);
}

TEST(Precision, CertifiedFloorRefusesBoundary) {
  PrecisionScope scope(50);
  EXPECT_EQ(detail::certified_floor(S("3.5"), pow10<Scalar>(-40), 1), 3);
  EXPECT_EQ(detail::certified_floor(S("-0.25"), pow10<Scalar>(-40), 1), -1);
  try {
    detail::certified_floor(Scalar(S("3") + pow10<Scalar>(-45)), pow10<Scalar>(-42), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precision);
    EXPECT_GT(e.required_digits(), 50u);
  }
}

TEST(Precision, AdaptiveRetryUsesRequestedDigits) {
  int calls = 0;
  const unsigned used = with_adaptive_precision(40, [&](unsigned P) {
    ++calls;
    require_digits(95, "test");
    EXPECT_EQ(working_digits<Scalar>(), P);
    return P;
  });
  EXPECT_EQ(used, 95u);
  EXPECT_EQ(calls, 2);
  EXPECT_THROW(with_adaptive_precision(40, [](unsigned) -> int { throw Error(ErrorKind::domain, "x"); }), Error);
  EXPECT_THROW(with_adaptive_precision(40, [](unsigned) -> int { require_digits(500, "cap"); return 0; }, 100), Error);
}

TEST(Report, RaisesPrecisionForTinyErrors) {
  const auto rows = convergence_report("5.4", ParameterChoice::parse("auto"), {5, 80}, 50);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].digits, 50u);
  EXPECT_GT(rows[1].digits, 50u);
  EXPECT_LT(rows[1].error_value, 1e-80);
  EXPECT_GT(rows[1].error_value, 0.0);
  EXPECT_EQ(rows[0].k, 5);
  EXPECT_EQ(rows[0].counts.backbone(), 5u);
}

TEST(Report, IsDeterministic) {
  const auto a = convergence_report("1.5", ParameterChoice::parse("star"), {5, 10}, 50);
  const auto b = convergence_report("1.5", ParameterChoice::parse("star"), {5, 10}, 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].counts, b[i].counts);
    EXPECT_EQ(a[i].rho_full, b[i].rho_full);
  }
}

TEST(Choice, ParseAndResolve) {
  PrecisionScope scope(50);
  const Scalar lambda = S("5.4");
  EXPECT_EQ(ParameterChoice::parse("auto").resolve(lambda), s_star(lambda).value / 2);
  EXPECT_EQ(ParameterChoice::parse("half-star").resolve(lambda), s_star(lambda).value / 2);
  EXPECT_EQ(ParameterChoice::parse("star").resolve(lambda), s_star(lambda).value);
  EXPECT_EQ(ParameterChoice::parse("0.25").resolve(lambda), S("0.25"));
  EXPECT_EQ(ParameterChoice::parse("0.25").describe(), "0.25");
  EXPECT_THROW(ParameterChoice::parse("half"), Error);
}
