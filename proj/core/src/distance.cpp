#include "fracurv/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fracurv {

namespace {

// Above any real squared distance (max 32767^2 on the largest allowed grid)
// yet small enough that it is recognizable; sentinel entries never enter an
// addition, so no overflow can arise from them.
constexpr std::int32_t kFar = 1'200'000'000;
constexpr std::int64_t kLinearFar = 1 << 20;  // per-column "no site" marker

// Lower envelope of the parabolas y -> f(v) + (y - v)^2 over one column,
// evaluated at integer y. f values of kFar mean "no site in this column" and
// contribute no parabola. All arithmetic on crossing points stays in double;
// the final distances are exact integers because sites sit on the lattice.
void envelope_pass(const std::int32_t* f, int n, std::int32_t* out,
                   int* v, double* z) {
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] >= kFar) continue;
    const double fq = static_cast<double>(f[q]);
    while (k >= 0) {
      const double fv = static_cast<double>(f[v[k]]);
      const double s =
          (fq + static_cast<double>(q) * q - (fv + static_cast<double>(v[k]) * v[k])) /
          (2.0 * (q - v[k]));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -std::numeric_limits<double>::infinity();
    } else {
      const double fv = static_cast<double>(f[v[k]]);
      const double s =
          (fq + static_cast<double>(q) * q - (fv + static_cast<double>(v[k]) * v[k])) /
          (2.0 * (q - v[k]));
      ++k;
      v[k] = q;
      z[k] = s;
    }
  }
  if (k < 0) {
    std::fill(out, out + n, kFar);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (j < k && z[j + 1] < q) ++j;
    const std::int64_t d = q - v[j];
    out[q] = static_cast<std::int32_t>(f[v[j]] + d * d);
  }
}

}  // namespace

DistanceField distance_transform(const BinaryMask& mask) {
  const int w = mask.width;
  const int ht = mask.height;
  if (w <= 0 || ht <= 0 || mask.count() == 0) {
    throw std::invalid_argument("distance_transform: mask has no occupied pixel");
  }

  DistanceField field;
  field.width = w;
  field.height = ht;
  field.h = mask.h;
  field.origin = mask.origin;
  field.sq.assign(static_cast<std::size_t>(w) * ht, kFar);

  // Pass 1: per column, linear distance to the nearest occupied pixel,
  // squared. Two scans suffice in one dimension.
  std::vector<std::int64_t> col(static_cast<std::size_t>(ht));
  for (int x = 0; x < w; ++x) {
    std::int64_t run = kLinearFar;
    for (int y = 0; y < ht; ++y) {
      run = mask.test(x, y) ? 0 : std::min<std::int64_t>(run + 1, kLinearFar);
      col[y] = run;
    }
    run = col[ht - 1];
    for (int y = ht - 1; y >= 0; --y) {
      run = std::min<std::int64_t>(col[y], run + 1);
      const std::int64_t d = run;
      field.sq[static_cast<std::size_t>(y) * w + x] =
          d >= kLinearFar ? kFar : static_cast<std::int32_t>(d * d);
    }
  }

  // Pass 2: per row, lower envelope of parabolas seeded by the column
  // distances.
  std::vector<std::int32_t> f(static_cast<std::size_t>(w));
  std::vector<std::int32_t> out(static_cast<std::size_t>(w));
  std::vector<int> v(static_cast<std::size_t>(w));
  std::vector<double> z(static_cast<std::size_t>(w) + 1);
  for (int y = 0; y < ht; ++y) {
    std::int32_t* row = field.sq.data() + static_cast<std::size_t>(y) * w;
    std::copy(row, row + w, f.begin());
    envelope_pass(f.data(), w, out.data(), v.data(), z.data());
    std::copy(out.begin(), out.end(), row);
  }
  return field;
}

BinaryMask parallel_set(const DistanceField& field, double eps) {
  if (!(eps >= 0)) throw std::invalid_argument("parallel_set: eps must be >= 0");
  const double thr = eps / field.h;
  const double thr2 = thr * thr;
  BinaryMask mask(field.width, field.height, field.h, field.origin);
  for (int y = 0; y < field.height; ++y) {
    for (int x = 0; x < field.width; ++x) {
      if (static_cast<double>(field.at(x, y)) <= thr2) mask.set(x, y);
    }
  }
  if (mask.touches_border()) {
    throw std::runtime_error(
        "parallel_set: dilation by eps = " + std::to_string(eps) +
        " reaches the grid border; enlarge the margin");
  }
  return mask;
}

}  // namespace fracurv
