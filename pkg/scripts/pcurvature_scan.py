#!/usr/bin/env python3
"""Tabulate p-curvatures of d/dz - lam - mu/z over small prime fields.

The z^(-1) residue contributes lam^p - lam = 0, so the scan makes the
constant part the only obstruction: psi = -lam^p = -lam.

Run:  python scripts/pcurvature_scan.py [p ...]
"""

import sys

from skewconnect import (
    Direction,
    DirectionKind,
    LinearSystem,
    Matrix,
    ScalarTower,
    SigmaBase,
    p_curvature,
)


def scan(p):
    t = ScalarTower.prime_field(p, ("z",))
    b = SigmaBase(t, [Direction("z", DirectionKind.IDENTITY)])
    z = t.var("z")
    print(f"p = {p}")
    for lam in range(p):
        for mu in range(p):
            g = t.from_int(lam) + t.from_int(mu) / z
            s = LinearSystem.differential(b, 0, Matrix(t, [[g]]))
            psi = p_curvature(s, 0)
            print(f"  G = {t.canonical_str(g):16}  psi = {t.canonical_str(psi.data[0][0])}")


def main():
    primes = [int(a) for a in sys.argv[1:]] or [3, 5]
    for p in primes:
        scan(p)


if __name__ == "__main__":
    main()
