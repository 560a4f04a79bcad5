"""Independent reference implementations used as test oracles.

Nothing here imports the package's arithmetic; products are computed by
carry-less multiplication and long-division reduction, determinants by
Leibniz expansion.
"""

from itertools import permutations


def clmul_mod(a: int, b: int, poly: int, m: int) -> int:
    prod = 0
    for i in range(m):
        if (b >> i) & 1:
            prod ^= a << i
    for d in range(2 * m - 2, m - 1, -1):
        if (prod >> d) & 1:
            prod ^= poly << (d - m)
    return prod


def inv_by_search(a: int, poly: int, m: int) -> int:
    for x in range(1, 1 << m):
        if clmul_mod(a, x, poly, m) == 1:
            return x
    raise ZeroDivisionError(a)


def power(a: int, e: int, poly: int, m: int) -> int:
    out = 1
    for _ in range(e):
        out = clmul_mod(out, a, poly, m)
    return out


def _sign_free_term(mat, perm, poly, m):
    term = 1
    for i, j in enumerate(perm):
        term = clmul_mod(term, mat[i][j], poly, m)
    return term


def leibniz_det(mat, poly: int, m: int) -> int:
    """Characteristic 2: the sign of each permutation is irrelevant."""
    n = len(mat)
    acc = 0
    for perm in permutations(range(n)):
        acc ^= _sign_free_term(mat, perm, poly, m)
    return acc


def is_irreducible_bruteforce(poly: int, m: int) -> bool:
    """No polynomial of degree 1..m-1 divides poly."""
    for d in range(2, 1 << m):
        r = poly
        dd = d.bit_length() - 1
        while r and r.bit_length() - 1 >= dd:
            r ^= d << (r.bit_length() - 1 - dd)
        if r == 0:
            return False
    return True
