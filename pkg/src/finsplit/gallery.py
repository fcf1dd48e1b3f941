"""Desk-scale checks of the infinite examples, in exact rational arithmetic.

Nothing here proves a statement about ``[0, 1]``; each report is a
finite-depth certificate that is consistent with the claim it names.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import BadSize, OutOfRange, UnknownExample
from .splithomeo import ReglueDatum, validate_reglue
from .topology import PointMap, discrete, quotient_space

CONSISTENT = "consistent at depth"
PASS = "pass"
FAIL = "fail"


def rat(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(text: str) -> Fraction:
    return Fraction(text.strip())


@dataclass
class WitnessReport:
    claim: str
    depth: int
    verdict: str
    evidence: list[tuple[str, str, str]]
    summary: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "depth": self.depth,
            "verdict": self.verdict,
            "summary": self.summary,
            "evidence": [list(t) for t in self.evidence],
        }


# ---------------------------------------------------------------------------
# f_weird
#
# x(n, k, i) = 1/n - 1/((n+1) m) with m = (n+1)(k+1) + i, k >= 1, 0 <= i <= n.
# m determines (k, i), and every value lies strictly between 1/(n+1) and 1/n,
# so values are distinct across all (n, k, i) and increase to 1/n in k.


def weird_point(n: int, k: int, i: int) -> Fraction:
    if n < 1 or k < 1 or not 0 <= i <= n:
        raise OutOfRange(f"no sequence point for n={n}, k={k}, i={i}")
    m = (n + 1) * (k + 1) + i
    return Fraction(1, n) - Fraction(1, (n + 1) * m)


def weird_index(q: Fraction) -> tuple[int, int, int] | None:
    """``(n, k, i)`` with ``weird_point(n, k, i) == q``, or ``None``."""
    q = Fraction(q)
    if q <= 0 or q >= 1:
        return None
    n = int(1 / q)  # floor, so q lies in (1/(n+1), 1/n]
    gap = Fraction(1, n) - q
    if gap <= 0:
        return None
    m = 1 / (gap * (n + 1))
    if m.denominator != 1:
        return None
    m = m.numerator
    k, i = divmod(m, n + 1)
    k -= 1
    if k < 1:
        return None
    return n, k, i


def f_weird_eval(q, depth: int) -> tuple[Fraction, Fraction]:
    """``(q, i/n²)`` on the ``i``-th sequence towards ``1/n`` (``n ≤ depth``), else ``(q, 0)``."""
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise OutOfRange(f"{rat(q)} is outside [0, 1]")
    hit = weird_index(q)
    if hit is None or hit[0] > depth:
        return q, Fraction(0)
    n, _, i = hit
    return q, Fraction(i, n * n)


def weird_ball_ok(n: int, x: Fraction) -> bool:
    """Containment in the ball around ``1/(n(n+1))`` of radius ``1/n``.

    The values also sit in the ball around ``1/n`` of radius ``1/(n(n+1))``,
    the other way of reading the same notation; both are checked.
    """
    literal = abs(x - Fraction(1, n * (n + 1))) < Fraction(1, n)
    swapped = abs(x - Fraction(1, n)) < Fraction(1, n * (n + 1))
    return literal and swapped


def f_weird_invariants(N: int, K: int) -> dict:
    """Distinctness and ball containment for every ``x(n, k, i)`` with ``n ≤ N, k ≤ K``."""
    values = []
    outside = []
    for n in range(1, N + 1):
        for k in range(1, K + 1):
            for i in range(n + 1):
                x = weird_point(n, k, i)
                values.append(x)
                if not weird_ball_ok(n, x):
                    outside.append((n, k, i))
    values.sort()
    repeats = sum(1 for a, b in zip(values, values[1:]) if a == b)
    return {
        "generated": len(values),
        "distinct": repeats == 0,
        "contained": not outside,
        "half_hit": weird_index(Fraction(1, 2)) is not None,
    }


def f_weird_star_check(n: int, K: int) -> WitnessReport:
    """Witness ``|f*(1/n)| = n + 1`` with one convergent sequence per value."""
    if n < 1 or K < 1:
        raise OutOfRange("n and K must be positive")
    target = Fraction(1, n)
    evidence = []
    ok = True
    limits = []
    for i in range(n + 1):
        level = Fraction(i, n * n)
        prev_gap = None
        seq_ok = True
        for k in range(1, K + 1):
            x = weird_point(n, k, i)
            gap = target - x
            fx = f_weird_eval(x, n)
            if gap <= 0 or (prev_gap is not None and gap >= prev_gap) or fx != (x, level):
                seq_ok = False
                break
            prev_gap = gap
        limits.append((target, level))
        ok &= seq_ok
        evidence.append(
            (
                f"i={i}, x_{K}={rat(x)}",
                f"f=({rat(fx[0])}, {rat(fx[1])}), gap={rat(gap)}",
                "gap decreasing, value constant" if seq_ok else "FAILED",
            )
        )
    # 1/n itself is not on any sequence, so its own value is the i = 0 level
    own = f_weird_eval(target, n)
    ok &= own == (target, Fraction(0))
    star_size = len(set(limits))
    ok &= star_size == n + 1
    evidence.append((f"1/n={rat(target)}", f"claimed star size {star_size}", f"expected {n + 1}"))
    return WitnessReport(
        "f_weird_star",
        K,
        PASS if ok else FAIL,
        evidence,
        {"n": n, "star_size": star_size, "star": [[rat(a), rat(b)] for a, b in limits]},
    )


# ---------------------------------------------------------------------------
# divergence witnesses


def _cantor(n: int, k: int) -> int:
    return (n + k) * (n + k + 1) // 2 + k


def comb_point(n: int, k: int) -> Fraction:
    """``x_k^n = 1/(π(n, k) + 1)`` with ``π`` the Cantor pairing.

    Injective in ``(n, k)``, inside ``(0, 1/n)``, decreasing to 0 in ``k``.
    """
    return Fraction(1, _cantor(n, k) + 1)


def _one_over_n(N: int) -> WitnessReport:
    values = [Fraction(1, n) for n in range(1, N + 1)]
    decreasing = all(a > b for a, b in zip(values, values[1:]))
    positive = values[-1] > 0
    # every candidate c = 1/m in (0, 1] is left behind: the tail past 2m stays below c/2
    escapes = all(values[min(2 * m, N) - 1] <= Fraction(1, m) / 2 for m in range(1, N // 2 + 1))
    ok = decreasing and positive and escapes
    evidence = [
        ("n=1", rat(values[0]), "start"),
        (f"n={N}", rat(values[-1]), "strictly decreasing" if decreasing else "FAILED"),
        ("limit", "0", "0 is not a point of (0,1]"),
    ]
    return WitnessReport(
        "one_over_n", N, CONSISTENT if ok else FAIL, evidence,
        {"min_value": rat(values[-1]), "strictly_decreasing": decreasing, "escapes_candidates": escapes},
    )


def _quotient_line(N: int) -> WitnessReport:
    # f([1/n]) = n: the class {n, 1/n} is sent to its integer member
    values = [Fraction(n) for n in range(1, N + 1)]
    increasing = all(a < b for a, b in zip(values, values[1:]))
    exceeds = all(values[-1] > M for M in range(N))
    ok = increasing and exceeds
    evidence = [
        ("[1/1]", rat(values[0]), "start"),
        (f"[1/{N}]", rat(values[-1]), f"exceeds {N - 1}" if exceeds else "FAILED"),
    ]
    return WitnessReport(
        "quotient_line", N, CONSISTENT if ok else FAIL, evidence,
        {"max_value": rat(values[-1]), "strictly_increasing": increasing},
    )


def _comb_space(N: int) -> WitnessReport:
    seen = set()
    in_range = True
    right_inverse = True
    for n in range(1, N + 1):
        for k in range(1, N + 1):
            x = comb_point(n, k)
            seen.add(x)
            in_range &= 0 < x < Fraction(1, n)
            # f([(x, 1)]) = (x, 1/n) must lie in the class {(x, 1/j) : 1/j >= x}
            right_inverse &= Fraction(1, n) >= x
    distinct = len(seen) == N * N
    approached = []
    for n in range(1, N + 1):
        # (0, 1/n) is within 1/m of (x_k^n, 1/n) for some k <= N, for every m <= N
        approached.append(all(any(comb_point(n, k) < Fraction(1, m) for k in range(1, N + 1))
                              for m in range(1, N + 1)))
    ok = distinct and in_range and right_inverse and all(approached)
    evidence = [
        ("x_1^1", rat(comb_point(1, 1)), "in (0, 1)"),
        (f"x_{N}^{N}", rat(comb_point(N, N)), f"in (0, 1/{N})" if in_range else "FAILED"),
        ("cluster candidates", str(sum(approached)), f"expected {N}"),
    ]
    return WitnessReport(
        "comb_space", N, CONSISTENT if ok else FAIL, evidence,
        {
            "distinct": distinct,
            "in_range": in_range,
            "right_inverse": right_inverse,
            "cluster_points": sum(approached),
        },
    )


_EXAMPLES = {"one_over_n": _one_over_n, "quotient_line": _quotient_line, "comb_space": _comb_space}


def divergence_witness(example: str, N: int) -> WitnessReport:
    try:
        build = _EXAMPLES[example]
    except KeyError:
        raise UnknownExample(f"unknown example {example!r}; choose from {sorted(_EXAMPLES)}") from None
    if N < 2:
        raise OutOfRange("depth must be at least 2")
    return build(N)


# ---------------------------------------------------------------------------
# circle cut-and-reglue


def circle_reglue_demo(n: int) -> ReglueDatum:
    """Discrete model of cutting one circle into two.

    ``Z`` is two chains ``t0..t(n-1)`` and ``b0..b(n-1)``.  ``pX`` glues the
    right ends and the left ends (one circle), ``pY`` glues each chain's two
    ends (two circles).
    """
    if n < 4 or n % 2:
        raise BadSize(f"n must be even and at least 4, got {n}")
    top = [f"t{j}" for j in range(n)]
    bot = [f"b{j}" for j in range(n)]
    Z = discrete(top + bot, name="two_segments")
    last = n - 1
    x_classes = [[top[0], bot[0]], [top[last], bot[last]]]
    x_classes += [[top[j]] for j in range(1, last)] + [[bot[j]] for j in range(1, last)]
    y_classes = [[top[0], top[last]], [bot[0], bot[last]]]
    y_classes += [[top[j]] for j in range(1, last)] + [[bot[j]] for j in range(1, last)]
    X, pX = quotient_space(Z, x_classes, name="circle")
    Y, pY = quotient_space(Z, y_classes, name="two_circles")
    # right inverse: left ends cut to the bottom chain, right ends to the top
    pick = [bot[0], top[last]] + top[1:last] + bot[1:last]
    pXinv = PointMap(X, Z, tuple(Z.index(z) for z in pick))
    d = ReglueDatum(Z, pX, pY, pXinv)
    report = validate_reglue(d)
    if not report.ok:
        raise BadSize(f"circle model with n={n} failed validation: {report.failed()}")
    return d


def circle_counts(d: ReglueDatum) -> dict:
    return {"Z": d.Z.n, "X": d.X.n, "Y": d.Y.n, "bijective": d.derived.is_bijective}


__all__ = [
    "WitnessReport",
    "circle_counts",
    "circle_reglue_demo",
    "comb_point",
    "divergence_witness",
    "f_weird_eval",
    "f_weird_invariants",
    "f_weird_star_check",
    "parse_rat",
    "rat",
    "weird_index",
    "weird_point",
]
