# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent high-precision derivations of the constants frozen in the C++ tests.

Run: python3 tests/oracles/derive_values.py
"""

import itertools
import math

import mpmath as mp

mp.mp.dps = 40


def zeta_bracket(a, K=200000):
  # partial sum plus integral bounds on the tail: [S + int_{K+1}, S + int_K]
  s = mp.fsum(mp.mpf(k) ** (-a) for k in range(1, K + 1))
  lo = s + mp.mpf(K + 1) ** (1 - a) / (a - 1)
  hi = s + mp.mpf(K) ** (1 - a) / (a - 1)
  return lo, hi


def main():
  for a in (2, 4, 1.5, 3):
    lo, hi = zeta_bracket(mp.mpf(a), 20000 if a != 1.5 else 200000)
    print(f"zeta({a}) in [{mp.nstr(lo, 17)}, {mp.nstr(hi, 17)}]  mpmath={mp.nstr(mp.zeta(a), 17)}")

  z2 = mp.zeta(2)
  print("u_i(u=1,n=2,i=1,a=2) =", mp.nstr(3 + mp.log(z2), 17))

  # squared-GP interval, mu=1 sigma=0.5 u=2 N=4
  s = mp.sqrt(2 * (2 + mp.log(4)))
  U = (1 + mp.mpf("0.5") * s) ** 2
  L = max(mp.mpf(0), 1 - mp.mpf("0.5") * s) ** 2
  print("squared-GP interval U =", mp.nstr(U, 17), " L =", mp.nstr(L, 17))

  # erf identity for the miss probability of X^2 outside (l^2, u^2), X ~ N(3, 1), s = 1
  mu, sig, sv = mp.mpf(3), mp.mpf(1), mp.mpf(1)
  l = max(mp.mpf(0), mu - mp.sqrt(2) * sig * sv)
  u = mu + mp.sqrt(2) * sig * sv
  r2 = mp.sqrt(2) * sig
  miss = (mp.erfc((u - mu) / r2) + mp.erfc((u + mu) / r2) + mp.erf((l - mu) / r2) + mp.erf((l + mu) / r2)) / 2
  print("miss(mu=3,sigma=1,s=1) =", mp.nstr(miss, 17))
  # mu = 0, sigma = 1, s = 1: l = 0, miss = erfc(1)
  print("miss(mu=0,sigma=1,s=1) =", mp.nstr(mp.erfc(1), 17))

  # single chain: d(p_i, p_{i-1}) = 2^{-i}, Gaussian, u=1, a=2, n_i=2^i, depth H = 6
  H = 6
  omega = []
  for h in range(H + 1):
    tot = mp.mpf(0)
    for i in range(h + 1, H + 1):
      ui = 1 + mp.mpf(2) ** i + 2 * mp.log(i) + mp.log(z2)
      tot += mp.sqrt(2 * ui) * mp.mpf(2) ** (-i)
    omega.append(tot)
  print("chain omega =", [mp.nstr(w, 17) for w in omega])
  thr = mp.sqrt(mp.log(2) / 2)
  print("threshold(i=2) =", mp.nstr(thr, 17), " depth =", next(h for h, w in enumerate(omega) if w <= thr))

  # lower-bound functional on the chain with Delta_i = 2^{-i}: sum_{i=0}^{H} 2^{-i/2}
  print("chain functional(root) =", mp.nstr(mp.fsum(mp.mpf(2) ** (-mp.mpf(i) / 2) for i in range(H + 1)), 17))

  # phi example: alpha=2, delta=1, m = ceil(3 e^8), u=1
  m = math.ceil(3 * math.e ** 8)
  print("phi(2,1,m=%d,1) =" % m, mp.nstr((2 / mp.sqrt(2)) * mp.sqrt(mp.log(mp.mpf(m) / 3)) - 2, 17))

  # exhaustive minimum cover of line {0..4} at eps = 1
  pts = range(5)
  best = None
  for r in range(1, 6):
    for c in itertools.combinations(pts, r):
      if all(any(abs(p - q) <= 1 for q in c) for p in pts):
        best = c
        break
    if best:
      break
  print("min cover line(5) eps=1:", best)


if __name__ == "__main__":
  main()
