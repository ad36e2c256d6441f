"""Slow reference computations used to cross-check the main code paths.

Nothing here touches numpy or the echelon code in fp_linalg: plain lists and
textbook loops, so that a bug in the fast path cannot hide in both.
"""

from __future__ import annotations

from typing import Sequence


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    a = [[int(x) % p for x in row] for row in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def matmul_mod_p(a, b, p: int) -> list[list[int]]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % p for col in bt] for row in a]


def nilpotent_type(rho: Sequence[Sequence[int]], p: int) -> list[int]:
    """Jordan type of a nilpotent matrix from ranks of its powers, longest first."""
    n = len(rho)
    ranks = [n]
    power = [[int(i == k) for k in range(n)] for i in range(n)]
    while ranks[-1]:
        power = matmul_mod_p(power, rho, p)
        ranks.append(rank_mod_p(power, p))
        if len(ranks) > n + 1:
            raise ValueError("matrix is not nilpotent")
    ranks += [0]
    out = []
    for k in range(len(ranks) - 2, 0, -1):
        out += [k] * (ranks[k - 1] - 2 * ranks[k] + ranks[k + 1])
    return out


def sigma_type(sigma: Sequence[Sequence[int]], p: int) -> list[int]:
    n = len(sigma)
    rho = [[(sigma[i][k] - (i == k)) % p for k in range(n)] for i in range(n)]
    return nilpotent_type(rho, p)


def element_order(table, x: int) -> int:
    k, y = 1, x
    while y != 0:
        y = int(table[y][x])
        k += 1
    return k


def group_exponent(table) -> int:
    from math import lcm

    out = 1
    for x in range(len(table)):
        out = lcm(out, element_order(table, x))
    return out


def is_central_subset(table, members: Sequence[int]) -> bool:
    n = len(table)
    return all(table[x][g] == table[g][x] for x in members for g in range(n))
