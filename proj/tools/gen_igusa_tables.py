#!/usr/bin/env python3
"""Regenerates include/isoforge/detail/igusa_tables.hpp.

The Igusa-Clebsch invariants I2, I4, I6 of a binary sextic are isobaric
homogeneous polynomials in its coefficients. Their coefficient tables are
recovered here by exact interpolation against the root-difference
definition on sextics with integer roots.
"""
import itertools
import random
import sys
from fractions import Fraction


def expand(lead, roots):
    poly = [Fraction(lead)]  # ascending coefficients
    for r in roots:
        nxt = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] += c
            nxt[i] -= r * c
        poly = nxt
    return poly


def pair_partitions(items):
    if not items:
        yield []
        return
    first = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for tail in pair_partitions(rest):
            yield [(first, items[i])] + tail


def root_invariants(lead, roots):
    d = lambda i, j: (roots[i] - roots[j]) ** 2
    idx = list(range(6))
    i2 = sum(d(*m[0]) * d(*m[1]) * d(*m[2]) for m in pair_partitions(idx))
    i4 = 0
    i6 = 0
    for tri in itertools.combinations(idx, 3):
        if 0 not in tri:
            continue
        other = [k for k in idx if k not in tri]
        a, b, c = tri
        x, y, z = other
        t = d(a, b) * d(b, c) * d(c, a) * d(x, y) * d(y, z) * d(z, x)
        i4 += t
        for perm in itertools.permutations(other):
            i6 += t * d(a, perm[0]) * d(b, perm[1]) * d(c, perm[2])
    return lead ** 2 * i2, lead ** 4 * i4, lead ** 6 * i6


def monomials(deg):
    out = []
    for e in itertools.product(range(deg + 1), repeat=7):
        if sum(e) == deg and sum(i * k for i, k in enumerate(e)) == 3 * deg:
            out.append(e)
    return out


def solve(rows, rhs):
    n = len(rows[0])
    m = [list(r) + [v] for r, v in zip(rows, rhs)]
    piv_row = 0
    pivots = []
    for col in range(n):
        sel = next((r for r in range(piv_row, len(m)) if m[r][col] != 0), None)
        if sel is None:
            continue
        m[piv_row], m[sel] = m[sel], m[piv_row]
        inv = 1 / m[piv_row][col]
        m[piv_row] = [v * inv for v in m[piv_row]]
        for r in range(len(m)):
            if r != piv_row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[piv_row])]
        pivots.append(col)
        piv_row += 1
    if len(pivots) != n:
        sys.exit("interpolation system is rank deficient")
    for r in range(piv_row, len(m)):
        if m[r][-1] != 0:
            sys.exit("interpolation system is inconsistent")
    return [m[i][-1] for i in range(n)]


def main():
    rng = random.Random(20240611)
    tables = {}
    for which, deg in ((0, 2), (1, 4), (2, 6)):
        mons = monomials(deg)
        rows, rhs = [], []
        while len(rows) < len(mons) + 10:
            roots = rng.sample(range(-12, 13), 6)
            lead = rng.choice([1, -1, 2, 3, -5])
            coeffs = expand(lead, roots)
            rows.append([Fraction(1) * eval_mon(coeffs, e) for e in mons])
            rhs.append(Fraction(root_invariants(lead, roots)[which]))
        sol = solve(rows, rhs)
        for s in sol:
            assert s.denominator == 1
        tables[deg] = [(int(s), e) for s, e in zip(sol, mons) if s != 0]

    out = sys.stdout
    out.write("// Generated by tools/gen_igusa_tables.py. Do not edit.\n")
    out.write("#pragma once\n\n#include <array>\n#include <cstdint>\n\n")
    out.write("namespace isoforge::detail {\n\n")
    out.write("struct IgusaTerm {\n    std::int64_t coeff;\n    std::array<std::uint8_t, 7> exps;  // powers of c0..c6\n};\n\n")
    for deg in (2, 4, 6):
        terms = tables[deg]
        out.write(f"inline constexpr std::array<IgusaTerm, {len(terms)}> kIgusaI{deg}{{{{\n")
        for c, e in terms:
            out.write(f"    {{{c}, {{{', '.join(map(str, e))}}}}},\n")
        out.write("}};\n\n")
    out.write("}  // namespace isoforge::detail\n")


def eval_mon(coeffs, e):
    v = Fraction(1)
    for c, k in zip(coeffs, e):
        v *= c ** k
    return v


if __name__ == "__main__":
    main()
