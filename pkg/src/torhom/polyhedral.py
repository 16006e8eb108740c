"""Exact rational linear feasibility via Fourier-Motzkin elimination.

Used by fan validation to decide whether two cones overlap outside their
common face.  Systems are tiny (at most a dozen variables), so the classic
doubly-exponential elimination is fine; equalities are removed first by
Gaussian substitution to keep the inequality count down.
"""

from __future__ import annotations

from fractions import Fraction


def _normalize(coeffs, const, strict):
    """Scale so the leading nonzero coefficient (or the constant) is +/-1."""
    lead = next((c for c in coeffs if c), None)
    if lead is None:
        if const == 0:
            return None  # 0 >= 0 / 0 > 0: handled by caller
        scale = abs(const)
    else:
        scale = abs(lead)
    return tuple(c / scale for c in coeffs), const / scale, strict


def feasible(equalities, inequalities, n):
    """Decide solvability over Q of a system of affine constraints.

    ``equalities``: iterable of (coeffs, const) meaning sum(c*x) + const == 0.
    ``inequalities``: iterable of (coeffs, const, strict) meaning
    sum(c*x) + const >= 0 (or > 0 when strict).  ``n`` is the number of
    variables.  Exact rational arithmetic throughout.
    """
    eqs = [([Fraction(c) for c in coeffs], Fraction(const)) for coeffs, const in equalities]
    ineqs = [
        ([Fraction(c) for c in coeffs], Fraction(const), bool(strict))
        for coeffs, const, strict in inequalities
    ]

    # Gaussian elimination of the equalities, substituting into everything.
    pending = eqs
    while pending:
        coeffs, const = pending.pop()
        piv = next((j for j, c in enumerate(coeffs) if c), None)
        if piv is None:
            if const != 0:
                return False
            continue
        pc = coeffs[piv]
        # x_piv = -(const + sum_{j != piv} c_j x_j) / pc
        def substitute(row_coeffs, row_const):
            f = row_coeffs[piv]
            if not f:
                return row_coeffs, row_const
            factor = f / pc
            new_coeffs = [
                rc - factor * c if j != piv else Fraction(0)
                for j, (rc, c) in enumerate(zip(row_coeffs, coeffs))
            ]
            return new_coeffs, row_const - factor * const

        pending = [substitute(c2, k2) for c2, k2 in pending]
        ineqs = [(*substitute(c2, k2), s2) for c2, k2, s2 in ineqs]

    # Fourier-Motzkin on the remaining inequalities.
    active = list(range(n))
    rows = set()
    for coeffs, const, strict in ineqs:
        if all(c == 0 for c in coeffs):
            if const < 0 or (strict and const == 0):
                return False
            continue
        rows.add(_normalize(coeffs, const, strict))
    rows = {r for r in rows if r is not None}

    for var in active:
        pos, neg, rest = [], [], []
        for coeffs, const, strict in rows:
            c = coeffs[var]
            if c > 0:
                pos.append((coeffs, const, strict))
            elif c < 0:
                neg.append((coeffs, const, strict))
            else:
                rest.append((coeffs, const, strict))
        new_rows = set()
        for pcoeffs, pconst, pstrict in pos:
            for ncoeffs, nconst, nstrict in neg:
                a = pcoeffs[var]
                b = -ncoeffs[var]
                coeffs = [b * pc + a * nc for pc, nc in zip(pcoeffs, ncoeffs)]
                const = b * pconst + a * nconst
                strict = pstrict or nstrict
                if all(c == 0 for c in coeffs):
                    if const < 0 or (strict and const == 0):
                        return False
                    continue
                norm = _normalize(coeffs, const, strict)
                if norm is not None:
                    new_rows.add(norm)
        rows = set(rest) | new_rows

    for coeffs, const, strict in rows:
        if const < 0 or (strict and const == 0):
            return False
    return True
