#include <abd/moments.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace abd;

namespace {

struct Config {
    int n;
    double alpha, rho, x;
};

std::vector<Config> cross_product() {
    std::vector<Config> out;
    for (int n : {5, 10, 20, 50})
        for (double alpha : {0.0, 0.3, 0.7, 1.0})
            for (double rho : {0.5, 1.0, 2.0, 5.0})
                if (n * rho > 2.0)
                    for (double x : {0.0, 0.5, 1.0, 2.0, 4.0})
                        out.push_back({n, alpha, rho, x});
    return out;
}

} // namespace

TEST(RawMomentClosed, Examples) {
    EXPECT_EQ(raw_moment_closed({3, 0.2, 0.8}, 7.0, 0), 1.0);
    EXPECT_NEAR(raw_moment_closed({20, 1.0, 1.0}, 1.0, 1), 21.0 / 19.0, 1e-15);
    EXPECT_NEAR(raw_moment_closed({20, 1.0, 1.0}, 1.0, 2), 502.0 / 342.0, 1e-15);
}

TEST(RawMomentClosed, ReducesToClassicalAtAlphaRhoOne) {
    for (int n : {5, 20, 100})
        for (double x : {0.0, 0.3, 2.5}) {
            const OperatorParams p(n, 1.0, 1.0);
            EXPECT_NEAR(raw_moment_closed(p, x, 1), (n * x + 1.0) / (n - 1.0), 1e-14);
            const double e2 = (n * (n + 1.0) * x * x + 4.0 * n * x + 2.0) / ((n - 1.0) * (n - 2.0));
            EXPECT_NEAR(raw_moment_closed(p, x, 2), e2, 1e-13 * e2);
        }
}

TEST(RawMomentClosed, Errors) {
    EXPECT_THROW(raw_moment_closed({2, 1.0, 0.5}, 1.0, 1), moment_existence_error);
    EXPECT_THROW(raw_moment_closed({4, 1.0, 0.5}, 1.0, 2), moment_existence_error);
    EXPECT_THROW(raw_moment_closed({20, 1.0, 1.0}, 1.0, 3), domain_error);
    EXPECT_THROW(raw_moment_closed({20, 1.0, 1.0}, -1.0, 1), domain_error);
}

TEST(CentralMomentClosed, Examples) {
    EXPECT_NEAR(central_moment_closed({10, 0.5, 2.0}, 1.0, 1), 0.0, 1e-16);
    // mu_2 = A(e_2) - 2x A(e_1) + x^2 = 502/342 - 42/19 + 1 = 88/342.
    EXPECT_NEAR(central_moment_closed({20, 1.0, 1.0}, 1.0, 2), 44.0 / 171.0, 1e-15);
    for (double alpha : {0.0, 0.25, 0.9, 1.0})
        EXPECT_NEAR(central_moment_closed({20, alpha, 1.0}, 0.0, 2), 2.0 / 342.0, 1e-16);
    EXPECT_NEAR(gamma_n({20, 1.0, 1.0}, 1.0), 2.0 / 19.0, 1e-15);
    EXPECT_EQ(delta_n({20, 1.0, 1.0}, 1.0), central_moment_closed({20, 1.0, 1.0}, 1.0, 2));
}

TEST(CentralMomentClosed, ConsistentWithRawMoments) {
    for (const auto& c : cross_product()) {
        const OperatorParams p(c.n, c.alpha, c.rho);
        const double r0 = raw_moment_closed(p, c.x, 0);
        const double r1 = raw_moment_closed(p, c.x, 1);
        const double r2 = raw_moment_closed(p, c.x, 2);
        EXPECT_NEAR(central_moment_closed(p, c.x, 1), r1 - c.x * r0, 1e-12);
        EXPECT_NEAR(central_moment_closed(p, c.x, 2), r2 - 2.0 * c.x * r1 + c.x * c.x * r0,
                    1e-12 * std::max(1.0, r2))
            << c.n << ' ' << c.alpha << ' ' << c.rho << ' ' << c.x;
    }
}

TEST(CentralMomentClosed, Errors) {
    EXPECT_THROW(central_moment_closed({4, 1.0, 0.5}, 1.0, 2), moment_existence_error);
    EXPECT_THROW(central_moment_closed({20, 1.0, 1.0}, 1.0, 3), domain_error);
    EXPECT_THROW(central_moment_closed({20, 1.0, 1.0}, 1.0, 0), domain_error);
}

TEST(MomentClosed, AgreesWithOracleOverCrossProduct) {
    int checked = 0;
    for (const auto& c : cross_product()) {
        const OperatorParams p(c.n, c.alpha, c.rho);
        for (int i = 0; i <= 2; ++i) {
            const auto r = raw_moment_report(p, c.x, i);
            EXPECT_FALSE(r.formula_mismatch()) << "raw " << i << " n=" << c.n << " a=" << c.alpha << " rho=" << c.rho
                                               << " x=" << c.x << " gap=" << r.rel_gap;
            ++checked;
        }
        for (int m = 1; m <= 2; ++m) {
            const auto r = central_moment_report(p, c.x, m);
            EXPECT_FALSE(r.formula_mismatch()) << "central " << m << " n=" << c.n << " a=" << c.alpha
                                               << " rho=" << c.rho << " x=" << c.x << " gap=" << r.rel_gap;
            ++checked;
        }
    }
    EXPECT_GT(checked, 1000);
}

TEST(MomentClosed, LimitsAreApproachedAtRateOneOverN) {
    for (double x : {0.5, 2.0}) {
        std::vector<double> scaled1, scaled2;
        for (int n : {100, 1000, 10000}) {
            const OperatorParams p(n, 0.3, 1.5);
            scaled1.push_back(n * std::fabs(raw_moment_closed(p, x, 1) - x));
            scaled2.push_back(n * std::fabs(raw_moment_closed(p, x, 2) - x * x));
        }
        const double c1 = *std::max_element(scaled1.begin(), scaled1.end());
        const double c2 = *std::max_element(scaled2.begin(), scaled2.end());
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_GT(scaled1[i], 0.5 * c1);
            EXPECT_GT(scaled2[i], 0.5 * c2);
        }
        EXPECT_NEAR(scaled1[2] / scaled1[1], 1.0, 0.01);
        EXPECT_NEAR(scaled2[2] / scaled2[1], 1.0, 0.01);
    }
}

TEST(MomentOracle, Examples) {
    EXPECT_NEAR(raw_moment_oracle({20, 0.4, 1.3}, 2.0, 0), 1.0, 1e-10);
    EXPECT_NEAR(raw_moment_oracle({20, 1.0, 1.0}, 1.0, 1), 21.0 / 19.0, 1e-9);
    const OperatorParams p(7, 0.3, 0.7);
    EXPECT_NEAR(raw_moment_oracle(p, 2.0, 2) / raw_moment_closed(p, 2.0, 2), 1.0, 1e-8);
    EXPECT_NEAR(central_moment_oracle({20, 0.4, 1.3}, 2.0, 0), 1.0, 1e-10);
    EXPECT_NEAR(central_moment_oracle({20, 1.0, 1.0}, 1.0, 2), 44.0 / 171.0, 1e-8);
    EXPECT_GT(central_moment_oracle({20, 1.0, 1.0}, 1.0, 4), 0.0);
}

TEST(MomentOracle, CancellationAtVanishingFirstCentralMoment) {
    EXPECT_LE(std::fabs(central_moment_oracle({10, 0.5, 2.0}, 1.0, 1)), 1e-10);
}

TEST(MomentOracle, Errors) {
    EXPECT_THROW(raw_moment_oracle({4, 1.0, 0.5}, 1.0, 2), moment_existence_error);
    EXPECT_THROW(raw_moment_oracle({20, 1.0, 1.0}, 1.0, -1), domain_error);
    EvalOptions opts;
    opts.k_max = 10;
    EXPECT_THROW(raw_moment_oracle({20, 1.0, 1.0}, 5.0, 1, opts), truncation_cap_error);
}

TEST(MomentReport, RelativeGap) {
    EXPECT_DOUBLE_EQ(relative_gap(1.5, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(relative_gap(0.1, 0.2), 0.1);
    EXPECT_DOUBLE_EQ(relative_gap(220.0, 200.0), 0.1);
    const auto r = central_moment_report({20, 1.0, 1.0}, 1.0, 2);
    EXPECT_EQ(r.kind, MomentReport::Kind::central);
    EXPECT_EQ(r.order, 2);
    EXPECT_NEAR(r.closed_form, 44.0 / 171.0, 1e-15);
    EXPECT_FALSE(r.formula_mismatch());
    MomentReport bad = r;
    bad.rel_gap = 1e-6;
    EXPECT_TRUE(bad.formula_mismatch());
}

TEST(FourthMoment, LeadingTermExamples) {
    EXPECT_NEAR(central_moment4_leading({20, 1.0, 1.0}, 1.0), 40.0 * 400.0 / (19.0 * 18.0 * 17.0 * 16.0), 1e-15);
    EXPECT_NEAR(central_moment4_leading({20, 1.0, 1.0}, 1.0), 0.1719986240110079, 1e-15);
    for (double alpha : {0.0, 0.6})
        EXPECT_EQ(central_moment4_leading({30, alpha, 0.7}, 0.0), 0.0);
    EXPECT_THROW(central_moment4_leading({8, 1.0, 0.5}, 1.0), moment_existence_error);
}

TEST(FourthMoment, OracleConvergesAwayFromLeadingTermLimit) {
    const auto s = fourth_moment_study(1.0, 1.0, 1.0, {500, 1000, 2000});
    EXPECT_DOUBLE_EQ(s.leading_limit, 40.0);
    for (double r : s.successive_ratios())
        EXPECT_NEAR(r, 1.0, 0.05);
    // The true limit at this point is 3 x^2 (rho+1)^2 (1+x)^2 / rho^2 = 48,
    // approached from above at rate 1/n.
    EXPECT_GT(s.scaled_oracle[0], s.scaled_oracle[1]);
    EXPECT_GT(s.scaled_oracle[1], s.scaled_oracle[2]);
    EXPECT_NEAR(s.scaled_oracle.back(), 48.0, 1.0);
    EXPECT_NEAR(s.oracle_to_leading(), 1.2, 0.03);
    EXPECT_DOUBLE_EQ(s.scaled_leading[0], 500.0 * 500.0 * central_moment4_leading({500, 1.0, 1.0}, 1.0));
}

TEST(FourthMoment, OracleMatchesPerTermCentralExpansion) {
    // Expanding (t-x)^4 inside each term avoids the cancellation of the
    // binomial expansion over raw moments.
    const OperatorParams p(20, 1.0, 1.0);
    const double x = 1.0;
    long double mu4 = 0.0L;
    for (int k = 0; k < 400; ++k) {
        const long double w = baskakov_weight(20, k, x);
        long double m[5];
        for (int j = 0; j <= 4; ++j)
            m[j] = kernel_raw_moment(p, k, j);
        const long double c = m[4] - 4.0L * x * m[3] + 6.0L * x * x * m[2] - 4.0L * x * x * x * m[1] + x * x * x * x;
        mu4 += w * c;
    }
    EXPECT_NEAR(central_moment_oracle(p, x, 4) / static_cast<double>(mu4), 1.0, 1e-9);
}
