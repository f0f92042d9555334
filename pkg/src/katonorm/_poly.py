"""Dict-based kernels for sparse polynomials over Q(i, sqrt 2).

A polynomial is a plain ``dict`` mapping exponent tuples of length ``2d`` to
nonzero :class:`FieldElement` coefficients.  The first ``d`` exponents belong
to the coordinate-like variables (``q`` or ``xi``), the last ``d`` to the
momentum-like ones (``p`` or ``eta``).  These functions never mutate their
inputs except where the name says ``_into``.
"""
from __future__ import annotations

from .field import FieldElement

Poly = dict


def add_into(acc: Poly, other: Poly, factor=None) -> Poly:
    """``acc += factor * other`` in place; zero coefficients are removed."""
    for mono, coeff in other.items():
        if factor is not None:
            coeff = coeff * factor
        prev = acc.get(mono)
        if prev is None:
            acc[mono] = coeff
        else:
            total = prev + coeff
            if total:
                acc[mono] = total
            else:
                del acc[mono]
    return acc


def add(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    return add_into(dict(p), q)


def sub(p: Poly, q: Poly) -> Poly:
    return add_into(dict(p), neg(q))


def neg(p: Poly) -> Poly:
    return {m: -c for m, c in p.items()}


def scale(p: Poly, factor) -> Poly:
    if isinstance(factor, FieldElement):
        if not factor:
            return {}
        return {m: c * factor for m, c in p.items()}
    if not factor:
        return {}
    return {m: c.scale(factor) for m, c in p.items()}


def mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for ma, ca in p.items():
        for mb, cb in q.items():
            mono = tuple(x + y for x, y in zip(ma, mb))
            coeff = ca * cb
            prev = out.get(mono)
            out[mono] = coeff if prev is None else prev + coeff
    return {m: c for m, c in out.items() if c}


def bracket(p: Poly, q: Poly, d: int) -> Poly:
    """Canonical bracket ``[p, q] = sum_k dp/dx_k dq/dy_k - dp/dy_k dq/dx_k``.

    Both partial-derivative products land on the same monomial for a given
    pair ``k``, so each pair of terms costs one field multiplication.
    """
    out: Poly = {}
    if not p or not q:
        return out
    rng = range(d)
    for ma, ca in p.items():
        for mb, cb in q.items():
            weights = [(k, ma[k] * mb[d + k] - ma[d + k] * mb[k]) for k in rng]
            if not any(w for _, w in weights):
                continue
            base = [x + y for x, y in zip(ma, mb)]
            coeff = ca * cb
            for k, w in weights:
                if not w:
                    continue
                base[k] -= 1
                base[d + k] -= 1
                mono = tuple(base)
                base[k] += 1
                base[d + k] += 1
                term = coeff.scale(w)
                prev = out.get(mono)
                out[mono] = term if prev is None else prev + term
    return {m: c for m, c in out.items() if c}


def degree(mono: tuple) -> int:
    return sum(mono)


def sort_key(mono: tuple):
    """Graded-lexicographic key: total degree first, then the exponent tuple."""
    return (sum(mono), mono)
