#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fracurv {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;  // standard error of the mean; 0 for n < 2
  int n = 0;
};

MeanStderr mean_stderr(std::span<const double> xs);

/// Upper-tail probability of a chi-square variable. dof <= 0 yields 1 (a
/// vacuous test carries no evidence).
double chi_square_pvalue(double stat, int dof);

/// Pearson chi-square test on a full contingency table (rows x cols of
/// counts). Columns are pooled smallest-first until every expected cell is at
/// least 5 (or only two columns remain); rows with zero total are dropped.
struct ContingencyResult {
  double stat = 0.0;
  int dof = 0;
  double p = 1.0;
  int pooled_cols = 0;  // column count after pooling
};

ContingencyResult contingency_test(std::vector<std::vector<std::int64_t>> table);

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
};

OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

}  // namespace fracurv
