"""Small scalar search routines shared by the solvers."""

import math

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, a, b, tol=1e-10, max_iter=200):
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``.

    Endpoints are compared against the interior result, so monotone functions
    return their boundary maximizer exactly.
    """
    if b <= a:
        return a, f(a)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    best = (x, f(x))
    for e in (a, b):
        fe = f(e)
        if fe > best[1]:
            best = (e, fe)
    return best


def bisect_max_true(pred, lo, hi, tol=1e-9, max_iter=200):
    """Largest ``t`` in ``[lo, hi]`` with ``pred(t)`` true, for ``pred`` true-then-false.

    ``pred(lo)`` is assumed true. Returns ``(t, probes)``.
    """
    probes = 0
    if pred(hi):
        return hi, 1
    probes += 1
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        probes += 1
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo, probes
