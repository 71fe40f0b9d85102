#include "lorentzw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "lorentzw/errors.hpp"

namespace lorentzw {

namespace {

// 15-point Kronrod abscissae (positive half; index 7 is the origin) and
// weights; the embedded 7-point Gauss rule lives on the odd indices.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  Vec4 value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment apply_gk15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Vec4 fc = f(c);
  Vec4 kron = fc * kWgk[7];
  Vec4 gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const Vec4 sum = f(c - dx) + f(c + dx);
    kron += sum * kWgk[i];
    if (i % 2 == 1) gauss += sum * kWg[i / 2];
  }
  kron = kron * half;
  gauss = gauss * half;
  return Segment{a, b, kron, max_abs(kron - gauss)};
}

}  // namespace

QuadResult gk15(const Integrand& f, double a, double b) {
  const Segment s = apply_gk15(f, a, b);
  return QuadResult{s.value, s.error, 15};
}

QuadResult integrate(const Integrand& f, double a, double b, double tol,
                     std::size_t max_evals) {
  if (a == b) return QuadResult{Vec4{}, 0.0, 0};
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::priority_queue<Segment> queue;
  Segment first = apply_gk15(f, a, b);
  Vec4 total = first.value;
  double err = first.error;
  queue.push(first);
  std::size_t evals = 15;

  while (err > tol * std::max(1.0, max_abs(total))) {
    if (evals + 30 > max_evals)
      throw QuadratureError("quadrature budget exhausted before reaching tolerance");

    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b)
      throw QuadratureError("quadrature interval underflow before reaching tolerance");
    const Segment left = apply_gk15(f, worst.a, mid);
    const Segment right = apply_gk15(f, mid, worst.b);
    evals += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  return QuadResult{total * sign, err, evals};
}

}  // namespace lorentzw
