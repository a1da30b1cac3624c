#include "fracurv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace fracurv {

MeanStderr mean_stderr(std::span<const double> xs) {
  MeanStderr out;
  out.n = static_cast<int>(xs.size());
  if (xs.empty()) return out;
  const double mean =
      std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  out.mean = mean;
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  out.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
  return out;
}

double chi_square_pvalue(double stat, int dof) {
  if (dof <= 0) return 1.0;
  if (!(stat > 0.0)) return 1.0;
  return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

ContingencyResult contingency_test(std::vector<std::vector<std::int64_t>> table) {
  ContingencyResult out;
  // Drop empty rows; they carry no observations.
  std::erase_if(table, [](const std::vector<std::int64_t>& row) {
    return std::accumulate(row.begin(), row.end(), std::int64_t{0}) == 0;
  });
  if (table.empty()) return out;
  const std::size_t rows = table.size();
  for (const auto& row : table)
    if (row.size() != table[0].size())
      throw std::invalid_argument("contingency_test: ragged table");

  // Work on column vectors so pooling is a column merge.
  std::size_t cols = table[0].size();
  std::vector<std::vector<std::int64_t>> colv(cols, std::vector<std::int64_t>(rows));
  for (std::size_t rix = 0; rix < rows; ++rix)
    for (std::size_t c = 0; c < cols; ++c) colv[c][rix] = table[rix][c];
  std::erase_if(colv, [](const std::vector<std::int64_t>& col) {
    return std::accumulate(col.begin(), col.end(), std::int64_t{0}) == 0;
  });

  std::vector<std::int64_t> rowsum(rows, 0);
  std::int64_t total = 0;
  for (const auto& col : colv)
    for (std::size_t rix = 0; rix < rows; ++rix) {
      rowsum[rix] += col[rix];
      total += col[rix];
    }
  if (total == 0) return out;

  auto col_total = [&](const std::vector<std::int64_t>& col) {
    return std::accumulate(col.begin(), col.end(), std::int64_t{0});
  };
  auto min_expected = [&]() {
    double m = 1e300;
    for (const auto& col : colv) {
      const double ct = static_cast<double>(col_total(col));
      for (std::size_t rix = 0; rix < rows; ++rix)
        m = std::min(m, static_cast<double>(rowsum[rix]) * ct /
                            static_cast<double>(total));
    }
    return m;
  };
  // Pool sparse columns until every expected cell reaches the usual 5.
  // One ascending pass: stable-sort by column total (ties keep the
  // caller's column order, which therefore must not leak row information)
  // and grow a pool until its total clears the threshold implied by the
  // smallest row sum. A short tail pool joins its predecessor.
  if (colv.size() > 2 && min_expected() < 5.0) {
    std::stable_sort(colv.begin(), colv.end(), [&](const auto& a, const auto& b) {
      return col_total(a) < col_total(b);
    });
    const std::int64_t min_rowsum =
        *std::min_element(rowsum.begin(), rowsum.end());
    const double need =
        5.0 * static_cast<double>(total) / static_cast<double>(min_rowsum);
    std::vector<std::vector<std::int64_t>> pooled;
    std::vector<std::int64_t> cur(rows, 0);
    std::int64_t cur_total = 0;
    for (const auto& col : colv) {
      for (std::size_t rix = 0; rix < rows; ++rix) cur[rix] += col[rix];
      cur_total += col_total(col);
      if (static_cast<double>(cur_total) >= need) {
        pooled.push_back(cur);
        std::fill(cur.begin(), cur.end(), 0);
        cur_total = 0;
      }
    }
    if (cur_total > 0) {
      if (pooled.empty()) {
        pooled.push_back(cur);
      } else {
        for (std::size_t rix = 0; rix < rows; ++rix)
          pooled.back()[rix] += cur[rix];
      }
    }
    if (pooled.size() >= 2) {
      colv = std::move(pooled);
    } else {
      // Threshold unreachable; keep a 2-column split (largest column vs the
      // rest) so the statistic is still defined, if only approximately.
      std::vector<std::int64_t> rest(rows, 0);
      for (std::size_t c = 0; c + 1 < colv.size(); ++c)
        for (std::size_t rix = 0; rix < rows; ++rix) rest[rix] += colv[c][rix];
      colv = {std::move(rest), colv.back()};
    }
  }
  out.pooled_cols = static_cast<int>(colv.size());

  double stat = 0.0;
  for (const auto& col : colv) {
    const double ct = static_cast<double>(col_total(col));
    for (std::size_t rix = 0; rix < rows; ++rix) {
      const double expected =
          static_cast<double>(rowsum[rix]) * ct / static_cast<double>(total);
      if (expected <= 0.0) continue;
      const double diff = static_cast<double>(col[rix]) - expected;
      stat += diff * diff / expected;
    }
  }
  out.stat = stat;
  out.dof = static_cast<int>((rows - 1) * (colv.size() - 1));
  out.p = chi_square_pvalue(stat, out.dof);
  return out;
}

OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("ols_fit: need two equal-length samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("ols_fit: degenerate abscissae");
  OlsFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += e * e;
  }
  fit.r2 = (syy > 0.0) ? 1.0 - sse / syy : 1.0;
  if (x.size() > 2)
    fit.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
  return fit;
}

}  // namespace fracurv
