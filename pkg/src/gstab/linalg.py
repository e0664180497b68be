"""Small exact linear algebra over Q or F_p (sparse rows as dicts)."""

from fractions import Fraction


def rank(rows, p):
    """Rank of a list of {column_key: coeff} rows by Gaussian elimination."""
    work = [dict(r) for r in rows if r]
    pivots = {}
    rk = 0
    for row in work:
        while row:
            c = min(row)  # deterministic pivot choice
            if c in pivots:
                pr, pv = pivots[c]
                fac = row[c] * pv
                if p:
                    fac %= p
                for k, v in pr.items():
                    s = row.get(k, 0) - fac * v
                    if p:
                        s %= p
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
            else:
                inv = pow(row[c], -1, p) if p else Fraction(1) / row[c]
                pivots[c] = (row, inv)
                rk += 1
                break
    return rk


def in_span(rows, target, p):
    """True when target lies in the row span."""
    base = [dict(r) for r in rows]
    return rank(base, p) == rank(base + [dict(target)], p)
