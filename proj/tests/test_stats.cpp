#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracurv/stats.hpp"

using namespace fracurv;

TEST_CASE("mean and standard error of a small sample") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  const MeanStderr m = mean_stderr(xs);
  CHECK(m.mean == doctest::Approx(2.5));
  // sample variance 5/3, so the error of the mean is sqrt(5/12)
  CHECK(m.stderr_ == doctest::Approx(std::sqrt(5.0 / 12.0)));
  CHECK(m.n == 4);

  const std::vector<double> one = {7.0};
  CHECK(mean_stderr(one).stderr_ == 0.0);
}

TEST_CASE("chi-square tail probabilities at textbook points") {
  CHECK(chi_square_pvalue(0.0, 3) == doctest::Approx(1.0));
  CHECK(chi_square_pvalue(3.841, 1) == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(chi_square_pvalue(5.991, 2) == doctest::Approx(0.05).epsilon(2e-3));
  // dof 2 has the closed form exp(-x/2)
  CHECK(chi_square_pvalue(7.0, 2) == doctest::Approx(std::exp(-3.5)).epsilon(1e-9));
  CHECK(chi_square_pvalue(1.0, 0) == doctest::Approx(1.0));
}

TEST_CASE("contingency test flags dependence and accepts independence") {
  // Strongly diagonal table: rows pick their own column.
  std::vector<std::vector<std::int64_t>> dep = {{90, 10}, {10, 90}};
  CHECK(contingency_test(dep).p < 1e-6);

  // A table drawn from an actually independent joint law.
  std::mt19937_64 gen(5);
  std::vector<std::vector<std::int64_t>> ind(3, std::vector<std::int64_t>(4, 0));
  std::discrete_distribution<int> row({0.2, 0.5, 0.3});
  std::discrete_distribution<int> col({0.1, 0.4, 0.3, 0.2});
  for (int i = 0; i < 20000; ++i) ind[row(gen)][col(gen)] += 1;
  const ContingencyResult res = contingency_test(ind);
  CHECK(res.p > 0.01);
  CHECK(res.dof > 0);
}

TEST_CASE("sparse columns are pooled until expectations are workable") {
  // The last column is nearly empty and must be merged, not trusted.
  std::vector<std::vector<std::int64_t>> table = {{50, 30, 1}, {45, 35, 0}};
  const ContingencyResult res = contingency_test(table);
  CHECK(res.pooled_cols == 2);
  CHECK(res.p > 0.01);
}

TEST_CASE("least squares recovers an exact line") {
  std::vector<double> x, y;
  for (int i = 0; i < 12; ++i) {
    x.push_back(0.3 * i - 1.0);
    y.push_back(2.5 * x.back() - 0.75);
  }
  const OlsFit fit = ols_fit(x, y);
  CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(-0.75).epsilon(1e-10));
  CHECK(fit.slope_stderr == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("least squares slope error brackets a noisy slope") {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> x, y;
  for (int i = 0; i < 200; ++i) {
    x.push_back(i / 40.0);
    y.push_back(1.2 * x.back() + 0.3 + noise(gen));
  }
  const OlsFit fit = ols_fit(x, y);
  CHECK(std::abs(fit.slope - 1.2) < 4 * fit.slope_stderr);
  CHECK(fit.r2 > 0.95);
}
