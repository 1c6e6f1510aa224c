#include "oscint/accel.hpp"

#include <algorithm>
#include <cmath>

namespace oscint {

AccelResult wynn_epsilon(const std::vector<cplx>& s) {
  AccelResult r;
  const std::size_t n = s.size();
  if (n == 0) return r;
  r.value = s.back();
  if (n == 1) return r;
  r.error = std::abs(s[n - 1] - s[n - 2]);
  if (n < 3) return r;

  // prev = eps_{k-1}, cur = eps_k; column k has n - k entries.
  std::vector<cplx> prev(n + 1, 0.0);
  std::vector<cplx> cur = s;
  std::vector<cplx> last_even = s;
  bool any_even = false;
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<cplx> next(cur.size() - 1);
    bool broke = false;
    for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
      cplx d = cur[j + 1] - cur[j];
      double scale = std::max(std::abs(cur[j]), std::abs(cur[j + 1]));
      if (std::abs(d) <= 1e-13 * scale || d == 0.0) {
        broke = true;
        break;
      }
      next[j] = prev[j + 1] + 1.0 / d;
    }
    if (broke) {
      if (!any_even && k <= 2) r.unstable = true;
      break;
    }
    if (k % 2 == 0) {
      const std::size_t m = next.size();
      cplx est = next[m - 1];
      double e1 = m >= 2 ? std::abs(next[m - 1] - next[m - 2]) : kInf;
      double e2 = std::abs(est - last_even.back());
      double err = std::max(e1, e2);
      if (m >= 2 && err < r.error) {
        r.value = est;
        r.error = err;
      }
      last_even = next;
      any_even = true;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (cur.size() < 2) break;
  }
  return r;
}

AccelResult euler_average(const std::vector<cplx>& s) {
  AccelResult r;
  if (s.empty()) return r;
  std::vector<cplx> v = s;
  r.value = v.back();
  while (v.size() > 2) {
    for (std::size_t j = 0; j + 1 < v.size(); ++j) v[j] = 0.5 * (v[j] + v[j + 1]);
    v.pop_back();
  }
  if (v.size() == 2) {
    r.value = 0.5 * (v[0] + v[1]);
    r.error = std::abs(v[1] - v[0]);
  } else {
    r.value = v[0];
  }
  return r;
}

AccelResult accelerate(const std::vector<cplx>& s) {
  AccelResult w = wynn_epsilon(s);
  if (!w.unstable) return w;
  AccelResult e = euler_average(s);
  // A sequence that has already converged triggers the instability guard;
  // its own last differences are the honest estimate.
  if (s.size() >= 2) {
    double tail = std::abs(s.back() - s[s.size() - 2]);
    if (tail <= e.error) {
      e.value = s.back();
      e.error = tail;
    }
  }
  e.unstable = true;
  return e;
}

AccelResult aitken(const std::vector<cplx>& s) {
  AccelResult r;
  const std::size_t n = s.size();
  if (n == 0) return r;
  r.value = s.back();
  if (n < 3) {
    if (n == 2) r.error = std::abs(s[1] - s[0]);
    return r;
  }
  cplx a = s[n - 3], b = s[n - 2], c = s[n - 1];
  cplx den = (c - b) - (b - a);
  if (std::abs(den) <= 1e-300 || std::abs(den) <= 1e-14 * std::abs(c)) {
    r.error = std::abs(c - b);
    return r;
  }
  r.value = c - (c - b) * (c - b) / den;
  r.error = std::abs(r.value - c);
  return r;
}

std::vector<cplx> richardson_halving(const std::vector<cplx>& seq) {
  std::vector<cplx> out;
  for (std::size_t k = 1; k < seq.size(); ++k) out.push_back(2.0 * seq[k] - seq[k - 1]);
  return out;
}

}  // namespace oscint
