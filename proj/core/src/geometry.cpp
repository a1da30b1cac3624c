#include "fracurv/geometry.hpp"

namespace fracurv {

namespace {

// Wrap into (-pi, pi] so repeated composition keeps angles well conditioned.
double wrap_angle(double a) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  a = std::fmod(a, two_pi);
  if (a <= -3.14159265358979323846) a += two_pi;
  if (a > 3.14159265358979323846) a -= two_pi;
  return a;
}

}  // namespace

Similarity compose2(const Similarity& f, const Similarity& g) {
  // (f o g)(x) = r_f L_f (r_g L_g x + t_g) + t_f.
  // With L = R(theta) M^[reflect] and M the x-axis mirror, the group law is
  //   R(a)M * R(b)    = R(a - b) M      (mirror conjugates the rotation)
  //   R(a)M * R(b)M   = R(a - b)
  //   R(a)  * R(b)M^k = R(a + b) M^k
  Similarity h;
  h.ratio = f.ratio * g.ratio;
  h.reflect = f.reflect != g.reflect;
  h.rotation = wrap_angle(f.reflect ? f.rotation - g.rotation
                                    : f.rotation + g.rotation);
  Vec2 tg = g.translation;
  if (f.reflect) tg.y = -tg.y;
  const double c = std::cos(f.rotation), s = std::sin(f.rotation);
  h.translation = Vec2{c * tg.x - s * tg.y, s * tg.x + c * tg.y} * f.ratio +
                  f.translation;
  return h;
}

Similarity compose(std::span<const Similarity> path) {
  Similarity acc;  // identity
  for (const Similarity& m : path) acc = compose2(acc, m);
  return acc;
}

}  // namespace fracurv
