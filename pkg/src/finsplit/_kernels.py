"""Hot loops over bitmask tables.

Every kernel is written once as plain Python over integer sequences.  When
numba is importable and ``FINSPLIT_DISABLE_NUMBA`` is unset, the kernels are
compiled with ``@njit`` and fed ``int64`` arrays; otherwise the same source
runs interpreted on Python lists.  Masks must fit in 62 bits on the compiled
path; callers fall back to the interpreted path for anything wider.
"""

from __future__ import annotations

import os

import numpy as np

MAX_BITS = 62

_disabled = os.environ.get("FINSPLIT_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    from numba import njit as _njit

    ACCELERATED = True

    def jit(fn):
        return _njit(cache=True, nogil=True)(fn)

except ImportError:
    ACCELERATED = False

    def jit(fn):
        return fn


@jit
def closure_of(mask, minopen, n):
    out = 0
    for q in range(n):
        if minopen[q] & mask:
            out |= 1 << q
    return out


@jit
def hull_of(mask, minopen, n):
    out = 0
    for q in range(n):
        if (mask >> q) & 1:
            out |= minopen[q]
    return out


@jit
def ev_fast(fu, cl_fu, z, minopen_y, ny, mutation):
    """Finite-space test for an extended-value set ``z`` given ``f(U_p)``.

    ``mutation`` weakens the test for fault-injection runs: 1 drops the
    cluster conjunct, 2 drops the covering conjunct.
    """
    cluster = (z & ~cl_fu) == 0
    cover = (fu & ~hull_of(z, minopen_y, ny)) == 0
    if mutation == 1:
        cluster = True
    elif mutation == 2:
        cover = True
    return cluster and cover


@jit
def ev_definitional(images, n_images, z, opens_y, ny):
    """Both defining conditions, quantified over every open.

    ``images`` holds ``f(U)`` for each open ``U`` containing the point.
    """
    for y in range(ny):
        if (z >> y) & 1:
            for V in opens_y:
                if (V >> y) & 1:
                    for k in range(n_images):
                        if images[k] & V == 0:
                            return False
    for V in opens_y:
        if z & ~V == 0:
            found = False
            for k in range(n_images):
                if images[k] & ~V == 0:
                    found = True
                    break
            if not found:
                return False
    return True


@jit
def _image(mask, table, n):
    out = 0
    for x in range(n):
        if (mask >> x) & 1:
            out |= 1 << table[x]
    return out


@jit
def sweep_ev_agreement(minopen_x, opens_x, minopen_y, opens_y, mutation):
    """Compare both extended-value tests over every map, point and candidate.

    Returns ``(checks, mismatches, code, point, candidate)`` where the last
    three describe the first mismatch (``-1`` when there is none).  A map is
    encoded in base ``ny`` with the first domain point as the most
    significant digit.
    """
    nx = len(minopen_x)
    ny = len(minopen_y)
    n_opens = len(opens_x)
    nmaps = 1
    for _ in range(nx):
        nmaps *= ny
    table = [0] * nx
    images = [0] * n_opens
    checks = 0
    mismatches = 0
    first_code = -1
    first_p = -1
    first_z = -1
    for code in range(nmaps):
        c = code
        for x in range(nx - 1, -1, -1):
            table[x] = c % ny
            c //= ny
        for p in range(nx):
            u = minopen_x[p]
            k = 0
            for o in opens_x:
                if o & u == u:
                    images[k] = _image(o, table, nx)
                    k += 1
            fu = _image(u, table, nx)
            cl_fu = closure_of(fu, minopen_y, ny)
            for z in range(1, 1 << ny):
                checks += 1
                a = ev_fast(fu, cl_fu, z, minopen_y, ny, mutation)
                b = ev_definitional(images, k, z, opens_y, ny)
                if a != b:
                    mismatches += 1
                    if first_code < 0:
                        first_code = code
                        first_p = p
                        first_z = z
    return checks, mismatches, first_code, first_p, first_z


@jit
def certify_selections(minopen_x, choices, n_choices, targets, points):
    """Check ``s(U_p) ⊆ targets[p]`` for every selection ``s`` and listed ``p``.

    ``choices[x, :n_choices[x]]`` are the admissible values at ``x``.
    Returns ``(selections, failures, first_selection, first_point)``.
    """
    nx = len(minopen_x)
    total = 1
    for x in range(nx):
        total *= n_choices[x]
    digits = [0] * nx
    failures = 0
    first_sel = -1
    first_p = -1
    for s in range(total):
        for p in points:
            u = minopen_x[p]
            t = targets[p]
            ok = True
            for q in range(nx):
                if (u >> q) & 1:
                    if not (t >> choices[q][digits[q]]) & 1:
                        ok = False
                        break
            if not ok:
                failures += 1
                if first_sel < 0:
                    first_sel = s
                    first_p = p
        # advance mixed-radix counter, last point fastest
        x = nx - 1
        while x >= 0:
            digits[x] += 1
            if digits[x] < n_choices[x]:
                break
            digits[x] = 0
            x -= 1
    return total, failures, first_sel, first_p


def as_array(values):
    """Kernel argument: ``int64`` array when compiled, list otherwise."""
    if ACCELERATED:
        return np.asarray(values, dtype=np.int64)
    return [int(v) for v in values]


def as_matrix(rows, width):
    padded = [list(r) + [0] * (width - len(r)) for r in rows]
    if ACCELERATED:
        return np.asarray(padded, dtype=np.int64).reshape(len(rows), width)
    return padded


def fits(*sizes: int) -> bool:
    return all(s <= MAX_BITS for s in sizes)
