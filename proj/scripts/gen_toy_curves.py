#!/usr/bin/env python3
"""Search for the toy curves registered in src/curve.cpp and print their parameters.

Two curves are produced:
  toy16 -- prime field p < 2^16, prime group order n with bitlen(n) = 16.
           The order is found by exhaustive point enumeration.
  toy32 -- prime field p < 2^32, prime group order n with bitlen(n) = 32.
           The order is found by baby-step/giant-step search over the Hasse
           interval (exhaustive enumeration is impractical at this size);
           the same BSGS routine is cross-checked against the exhaustive
           count on toy16.

Both curves have cofactor 1 (the full group order is prime), so any finite
point generates the group.  G is chosen as the point with the smallest x
that lies on the curve, taking the smaller of the two y roots.

Run:  python3 scripts/gen_toy_curves.py
"""

import math
import random

from sympy import isprime, nextprime


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> int:
    """Square root mod prime p (p odd). Tonelli-Shanks, small-scale use only."""
    a %= p
    if a == 0:
        return 0
    assert legendre(a, p) == 1
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


class Curve:
    def __init__(self, p, a, b):
        self.p, self.a, self.b = p, a, b

    def on_curve(self, P):
        if P is None:
            return True
        x, y = P
        return (y * y - (x * x * x + self.a * x + self.b)) % self.p == 0

    def add(self, P, Q):
        p = self.p
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2 and (y1 + y2) % p == 0:
            return None
        if P == Q:
            lam = (3 * x1 * x1 + self.a) * pow(2 * y1, p - 2, p) % p
        else:
            lam = (y2 - y1) * pow(x2 - x1, p - 2, p) % p
        x3 = (lam * lam - x1 - x2) % p
        y3 = (lam * (x1 - x3) - y1) % p
        return (x3, y3)

    def mul(self, k, P):
        R = None
        while k > 0:
            if k & 1:
                R = self.add(R, P)
            P = self.add(P, P)
            k >>= 1
        return R


def exhaustive_order(c: Curve) -> int:
    """#E = 1 + sum over x of (#roots of y^2 = f(x)). O(p) time and memory."""
    p = c.p
    residues = set()
    for y in range((p + 1) // 2 + 1):
        residues.add(y * y % p)
    n = 1  # infinity
    for x in range(p):
        f = (x * x * x + c.a * x + c.b) % p
        if f == 0:
            n += 1
        elif f in residues:
            n += 2
    return n


def bsgs_order(c: Curve, tries: int = 8) -> int | None:
    """Group order via BSGS over the Hasse interval [p+1-2sqrt(p), p+1+2sqrt(p)].

    Works when the order of the chosen point exceeds the interval width, which
    holds whenever #E is prime. Returns None when no unique candidate appears.
    """
    p = c.p
    half = math.isqrt(4 * p) + 1
    lo = p + 1 - half
    width = 2 * half + 1
    step = math.isqrt(width) + 1
    rng = random.Random(0xEC)
    for _ in range(tries):
        # random point
        while True:
            x = rng.randrange(p)
            f = (x * x * x + c.a * x + c.b) % p
            if f == 0:
                P = (x, 0)
                break
            if legendre(f, p) == 1:
                y = sqrt_mod(f, p)
                P = (x, y)
                break
        # baby steps: j*P for j in [0, step)
        baby = {}
        R = None
        for j in range(step):
            baby.setdefault(R, j)
            R = c.add(R, P)
        # giant steps: Q = (lo + i*step)*P ; match Q + j*P = O  =>  Q = -(j*P)
        S = c.mul(step, P)
        Q = c.mul(lo, P)
        matches = []
        i = 0
        while lo + i * step <= lo + width:
            target = None if Q is None else (Q[0], (-Q[1]) % p)
            if target in baby:
                m = lo + i * step + baby[target]
                if lo <= m <= lo + width and c.mul(m, P) is None:
                    matches.append(m)
            Q = c.add(Q, S)
            i += 1
        matches = sorted(set(matches))
        if len(matches) == 1:
            return matches[0]
    return None


def pick_generator(c: Curve):
    for x in range(c.p):
        f = (x * x * x + c.a * x + c.b) % c.p
        if f == 0:
            return (x, 0)
        if legendre(f, c.p) == 1:
            y = sqrt_mod(f, c.p)
            return (x, min(y, c.p - y))
    raise RuntimeError("no point found")


def search(bits: int, use_exhaustive: bool):
    """Find (p, a, b, G, n) with p prime < 2^bits and n prime of exactly `bits` bits."""
    p = nextprime(1 << (bits - 1))
    # walk primes upward, trying small (a, b) pairs on each
    while p < (1 << bits):
        for a in range(0, 8):
            for b in range(1, 24):
                if (4 * a * a * a + 27 * b * b) % p == 0:
                    continue
                c = Curve(p, a, b)
                n = exhaustive_order(c) if use_exhaustive else bsgs_order(c)
                if n is None:
                    continue
                if n == p:  # skip anomalous curves
                    continue
                if not ((1 << (bits - 1)) <= n < (1 << bits)):
                    continue
                if not isprime(n):
                    continue
                G = pick_generator(c)
                assert c.on_curve(G)
                assert c.mul(n, G) is None
                # order of G divides prime n and G != O, so <G> is the whole group
                return p, a, b, G, n
        p = nextprime(p)
    raise RuntimeError("search exhausted")


def main():
    # cross-check: BSGS agrees with exhaustive enumeration at 16 bits
    p16, a16, b16, G16, n16 = search(16, use_exhaustive=True)
    c16 = Curve(p16, a16, b16)
    assert bsgs_order(c16) == n16, "BSGS disagrees with exhaustive count"
    print(f"toy16: p={p16:#x} a={a16} b={b16} gx={G16[0]:#x} gy={G16[1]:#x} n={n16:#x}")

    p32, a32, b32, G32, n32 = search(32, use_exhaustive=False)
    print(f"toy32: p={p32:#x} a={a32} b={b32} gx={G32[0]:#x} gy={G32[1]:#x} n={n32:#x}")


if __name__ == "__main__":
    main()
