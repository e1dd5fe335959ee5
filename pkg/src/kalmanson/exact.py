"""Gauss-Jordan elimination over ``Fraction``."""
from fractions import Fraction


def _to_fractions(a):
    return [[Fraction(x) for x in row] for row in a]


def rank(a) -> int:
    rows = _to_fractions(a)
    if not rows:
        return 0
    r = 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def inverse(a) -> list:
    """Inverse of a square matrix; raises ``ValueError`` if singular."""
    n = len(a)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(_to_fractions(a))]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def matvec(a, v) -> list:
    return [sum((x * y for x, y in zip(row, v) if x), Fraction(0)) for row in a]


def solve(a, b) -> list:
    """Solve ``a x = b`` exactly for square nonsingular ``a``."""
    return matvec(inverse(a), [Fraction(x) for x in b])
