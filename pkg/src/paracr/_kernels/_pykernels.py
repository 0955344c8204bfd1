"""Pure-Python graded kernels (the fallback backend).

A graded series is a list ``g`` where ``g[d]`` maps packed exponent keys of
total degree ``d`` to nonzero coefficients.  Exponents are packed 8 bits per
variable, so multiplying monomials is integer addition of keys.
"""

from __future__ import annotations

BITS = 8
MASK = (1 << BITS) - 1


def mul_graded(a: list, b: list, maxdeg: int) -> list:
    """Product of two graded series, keeping degrees ``<= maxdeg``."""
    top = min(maxdeg, len(a) + len(b) - 2)
    if top < 0:
        return []
    out = [dict() for _ in range(top + 1)]
    nb = len(b)
    for da, ha in enumerate(a):
        if not ha or da > top:
            continue
        for db in range(min(nb - 1, top - da) + 1):
            hb = b[db]
            if not hb:
                continue
            acc = out[da + db]
            get = acc.get
            for ka, ca in ha.items():
                for kb, cb in hb.items():
                    k = ka + kb
                    v = get(k)
                    if v is None:
                        acc[k] = ca * cb
                    else:
                        acc[k] = v + ca * cb
    for acc in out:
        zeros = [k for k, v in acc.items() if not v]
        for k in zeros:
            del acc[k]
    return out


def diff_graded(a: list, shift: int) -> list:
    """Partial derivative in the variable whose exponent sits at bit ``shift``."""
    if len(a) <= 1:
        return []
    unit = 1 << shift
    out = [dict() for _ in range(len(a) - 1)]
    for d in range(1, len(a)):
        acc = out[d - 1]
        for k, c in a[d].items():
            e = (k >> shift) & MASK
            if e:
                acc[k - unit] = c * e
    return out
