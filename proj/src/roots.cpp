#include "fracstab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "fracstab/errors.hpp"
#include "fracstab/number_format.hpp"

namespace fracstab {

namespace {

using cplx = std::complex<double>;

constexpr double kTrim = 1e-14;
constexpr double kClusterRadius = 1e-7;
constexpr double kResidualBound = 1e-8;
constexpr int kMaxSweeps = 500;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Newton {
  cplx ratio;       // P(z) / P'(z); unused when exact
  double value;     // |P| in the evaluation orientation
  double bound;     // sum |a_k| |z|^k in the same orientation
  bool exact_zero;  // P(z) == 0
  bool flat;        // P'(z) == 0
};

// Evaluates P and P' at z. For |z| > 1 the reversed polynomial is used so
// the computation never overflows for large degree.
Newton newton_step(std::span<const double> a, cplx z) {
  const int n = static_cast<int>(a.size()) - 1;
  Newton out{};
  if (std::abs(z) <= 1.0) {
    cplx p = a[n], dp = 0.0;
    double e = std::abs(a[n]);
    const double az = std::abs(z);
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + a[k];
      e = e * az + std::abs(a[k]);
    }
    out.value = std::abs(p);
    out.bound = e;
    out.exact_zero = p == 0.0;
    out.flat = dp == 0.0;
    if (!out.exact_zero && !out.flat) out.ratio = p / dp;
    return out;
  }
  const cplx y = 1.0 / z;
  const double ay = std::abs(y);
  cplx r = a[0], dr = 0.0;
  double e = std::abs(a[0]);
  for (int k = 1; k <= n; ++k) {
    dr = dr * y + r;
    r = r * y + a[k];
    e = e * ay + std::abs(a[k]);
  }
  // P(z) = z^n r(y), P'(z) = z^(n-1) (n r(y) - y r'(y))
  const cplx denom = static_cast<double>(n) * r - y * dr;
  out.value = std::abs(r);
  out.bound = e;
  out.exact_zero = r == 0.0;
  out.flat = denom == 0.0;
  if (!out.exact_zero && !out.flat) out.ratio = z * r / denom;
  return out;
}

double backward_error(std::span<const double> a, cplx z) {
  const Newton nw = newton_step(a, z);
  return nw.bound > 0.0 ? nw.value / nw.bound : 0.0;
}

// Starting points on circles whose radii come from the upper convex hull of
// (k, log|a_k|).
std::vector<cplx> newton_polygon_start(std::span<const double> a) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<int> hull;
  std::vector<double> lg(a.size());
  for (int k = 0; k <= n; ++k)
    lg[k] = a[k] != 0.0 ? std::log(std::abs(a[k])) : -std::numeric_limits<double>::infinity();

  for (int k = 0; k <= n; ++k) {
    if (a[k] == 0.0) continue;
    while (hull.size() >= 2) {
      const int i = hull[hull.size() - 2], j = hull.back();
      // Drop j if it lies on or below the segment i -> k.
      const double cross = (lg[j] - lg[i]) * (k - i) - (lg[k] - lg[i]) * (j - i);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(k);
  }

  constexpr double kSigma = 0.7;
  std::vector<cplx> z;
  z.reserve(n);
  for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
    const int lo = hull[s], hi = hull[s + 1];
    const int m = hi - lo;
    const double radius = std::exp((lg[lo] - lg[hi]) / m);
    for (int j = 0; j < m; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / m + 2.0 * std::numbers::pi * s / n + kSigma;
      z.push_back(std::polar(radius, theta));
    }
  }
  return z;
}

std::vector<cplx> aberth(std::span<const double> a) {
  const int n = static_cast<int>(a.size()) - 1;
  if (n == 1) return {cplx(-a[0] / a[1], 0.0)};

  std::vector<cplx> z = newton_polygon_start(a);
  std::vector<char> done(n, 0);
  int remaining = n;

  for (int sweep = 0; sweep < kMaxSweeps && remaining > 0; ++sweep) {
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const Newton nw = newton_step(a, z[i]);
      if (nw.exact_zero || nw.value <= 4.0 * kEps * nw.bound) {
        done[i] = 1;
        --remaining;
        continue;
      }
      double sr = 0.0, si = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dr = z[i].real() - z[j].real();
        const double di = z[i].imag() - z[j].imag();
        const double m2 = dr * dr + di * di;
        if (m2 == 0.0) continue;
        sr += dr / m2;
        si -= di / m2;
      }
      const cplx sum(sr, si);
      cplx step;
      if (nw.flat) {
        if (sum == 0.0) {
          // Stationary point with no neighbours pulling: nudge deterministically.
          step = cplx(1e-3 * (1.0 + std::abs(z[i])), 1e-3);
        } else {
          step = -1.0 / sum;
        }
      } else {
        step = nw.ratio / (1.0 - nw.ratio * sum);
      }
      z[i] -= step;
      if (std::abs(step) <= 2.0 * kEps * std::abs(z[i])) {
        done[i] = 1;
        --remaining;
      }
    }
  }
  return z;
}

// Real coefficients give conjugate pairs. Each pair gets one shared real part
// so the ordering by real part does not depend on rounding noise.
void pair_conjugates(std::vector<cplx>& z) {
  const std::size_t n = z.size();
  std::vector<char> used(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i] || z[i].imag() <= 0.0) continue;
    std::size_t best = n;
    double best_d = INFINITY;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || z[j].imag() >= 0.0) continue;
      const double d = std::abs(z[j] - std::conj(z[i]));
      if (d < best_d) {
        best = j;
        best_d = d;
      }
    }
    // Only a partner much closer than the distance to the real axis.
    if (best == n || best_d > 0.25 * (z[i].imag() - z[best].imag())) continue;
    used[i] = used[best] = 1;
    const double re = 0.5 * (z[i].real() + z[best].real());
    const double im = 0.5 * (z[i].imag() - z[best].imag());
    z[i] = cplx(re, im);
    z[best] = cplx(re, -im);
  }
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  double scale = 0.0;
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw ValidationError("polynomial coefficient is not finite");
    scale = std::max(scale, std::abs(c));
  }
  if (scale == 0.0) throw ValidationError("polynomial is identically zero");
  while (std::abs(coeffs_.back()) <= kTrim * scale) coeffs_.pop_back();
  if (degree() > kMaxDegree)
    throw DegreeError("polynomial degree " + std::to_string(degree()) + " exceeds D_MAX=" +
                          std::to_string(kMaxDegree),
                      degree());
}

std::complex<double> IntPolynomial::operator()(std::complex<double> w) const {
  cplx p = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) p = p * w + *it;
  return p;
}

int RootSet::count() const noexcept {
  return std::accumulate(roots.begin(), roots.end(), 0, [](int acc, const Root& r) { return acc + r.multiplicity; });
}

RootSet find_roots(const IntPolynomial& p) {
  if (p.degree() < 1) throw ValidationError("root finding needs degree >= 1");

  std::span<const double> c = p.coeffs();
  std::size_t zeros = 0;
  while (c[zeros] == 0.0) ++zeros;

  const double scale = *std::max_element(c.begin(), c.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  std::vector<double> a(c.begin() + static_cast<std::ptrdiff_t>(zeros), c.end());
  for (double& v : a) v /= std::abs(scale);

  std::vector<cplx> z;
  if (a.size() > 1) z = aberth(a);
  pair_conjugates(z);

  double worst = 0.0;
  for (const cplx& w : z) worst = std::max(worst, backward_error(a, w));
  if (!(worst <= kResidualBound))
    throw ConvergenceError("root finder did not converge (degree " + std::to_string(p.degree()) +
                               ", worst residual " + format_double(worst) + ")",
                           worst);
  z.insert(z.end(), zeros, cplx(0.0, 0.0));

  // Single-linkage clustering of nearly coincident roots.
  const std::size_t n = z.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(z[i] - z[j]) <= kClusterRadius) parent[find(i)] = find(j);

  std::vector<cplx> sum(n, 0.0);
  std::vector<int> mult(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[find(i)] += z[i];
    ++mult[find(i)];
  }

  RootSet out;
  out.residual = worst;
  for (std::size_t i = 0; i < n; ++i)
    if (mult[i] > 0) out.roots.push_back({sum[i] / static_cast<double>(mult[i]), mult[i]});
  std::sort(out.roots.begin(), out.roots.end(), [](const Root& x, const Root& y) {
    if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });
  return out;
}

}  // namespace fracstab
