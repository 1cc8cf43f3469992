"""Integer relations among T-values at rational angles.

The search works on reflection classes ``{r, 1/2 - r}``: every class is
represented by its member in ``(0, 1/4]``, so relations that only swap a value
for its reflection never reach PSLQ.  Those are reported separately as
reflection pairs, as in the appendix list.
"""

from __future__ import annotations

import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import mpmath
from mpmath import mpf

from .errors import DomainError, PrecisionError
from .logtan import t_value
from .numkernel import AngleLike, RationalAngle
from .pslq import pslq_fixed
from .transforms import canonical, multiplication_relation, reflect

DEFAULT_SIZE_CAP = 6
GUARD = 10

Vector = dict[RationalAngle, Fraction]


def min_prec(length: int) -> int:
    """Working heuristic: ``10 * length + 20`` digits for a vector of ``length``."""
    return 10 * length + 20


# --------------------------------------------------------------------------
# single vectors


@dataclass(frozen=True)
class Relation:
    """``sum coefficients[i] * T(angles[i]) = 0`` in canonical form.

    ``angles`` is empty for relations among bare numbers (``find_relation``).
    """

    angles: tuple[RationalAngle, ...]
    coefficients: tuple[int, ...]
    residual: mpf
    prec: int
    kind: str = "linear"

    @property
    def norm(self) -> int:
        return max(abs(c) for c in self.coefficients)

    @property
    def level(self) -> int:
        """Largest denominator among the angles."""
        return max((a.den for a in self.angles), default=0)

    def text(self) -> str:
        return relation_text(self.angles, self.coefficients)

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class Exclusion:
    """No integer relation with max-norm ``<= max_norm`` at this precision."""

    max_norm: int
    norm_bound: float
    prec: int
    note: str = ""


def canonical_coefficients(coeffs: Sequence[int]) -> tuple[int, ...]:
    """Divide out the gcd and make the first nonzero entry positive."""
    g = reduce(math.gcd, (abs(c) for c in coeffs), 0)
    if g == 0:
        raise ValueError("zero coefficient vector")
    out = [c // g for c in coeffs]
    first = next(c for c in out if c)
    if first < 0:
        out = [-c for c in out]
    return tuple(out)


def _residual(values: Sequence[mpf], coeffs: Sequence[int], prec: int) -> mpf:
    with mpmath.workdps(prec + GUARD):
        return abs(mpmath.fsum(c * mpf(v) for c, v in zip(coeffs, values)))


def find_relation(values: Sequence[mpf], prec: int, max_norm: int) -> Relation | Exclusion:
    """PSLQ on ``values``, which must be accurate to ``prec`` digits.

    Returns a :class:`Relation` whose residual is below ``10**(-prec/2)``
    (relative to the largest value) and whose norm is at most ``max_norm``,
    or an :class:`Exclusion`.
    """
    n = len(values)
    if n < 2:
        raise DomainError("need at least two values")
    if prec < min_prec(n):
        raise PrecisionError(f"{n} values need prec >= {min_prec(n)}, got {prec}")
    with mpmath.workdps(prec + GUARD):
        vals = [mpf(v) for v in values]
        scale = max(abs(v) for v in vals)
        if scale == 0:
            raise DomainError("all values vanish")
        threshold = scale * mpf(10) ** (-(prec // 2))
        for i, v in enumerate(vals):
            # A vanishing entry is its own relation; PSLQ cannot normalise it.
            if abs(v) < threshold:
                coeffs = tuple(int(j == i) for j in range(n))
                return Relation((), coeffs, abs(v), prec)
    out = pslq_fixed(vals, prec, max_norm)
    if out.relation is None:
        return Exclusion(max_norm, out.norm_bound, prec)
    coeffs = canonical_coefficients(out.relation)
    residual = _residual(vals, coeffs, prec)
    if residual >= threshold:
        raise PrecisionError(
            f"candidate {coeffs} has residual {mpmath.nstr(residual, 3)}; precision too low"
        )
    if max(abs(c) for c in coeffs) > max_norm:
        return Exclusion(max_norm, out.norm_bound, prec, note=f"smallest relation found has norm {max(abs(c) for c in coeffs)}")
    return Relation((), coeffs, residual, prec)


# --------------------------------------------------------------------------
# the grid of T-values


@dataclass(frozen=True)
class GridClass:
    """One reflection class: ``rep`` in ``(0, 1/4]`` and its grid members."""

    rep: RationalAngle
    members: tuple[RationalAngle, ...]

    @property
    def display(self) -> RationalAngle:
        """Member with the smallest denominator (then the smallest value)."""
        return min(self.members, key=lambda a: (a.den, a.fraction))

    @property
    def level(self) -> int:
        return self.display.den

    def key(self) -> tuple[int, int]:
        return (self.display.den, self.display.num)


@dataclass(frozen=True)
class TGrid:
    max_den: int
    prec: int
    classes: tuple[GridClass, ...]
    values: tuple[mpf, ...]

    @property
    def entries(self) -> list[tuple[RationalAngle, mpf]]:
        return [(c.rep, v) for c, v in zip(self.classes, self.values)]

    def index(self, angle: AngleLike) -> int:
        rep = canonical(angle)
        for i, c in enumerate(self.classes):
            if c.rep == rep:
                return i
        raise KeyError(f"{angle} is not on the grid")

    def family(self, level: int) -> tuple[int, ...]:
        """Classes with a member whose denominator divides ``level``."""
        return tuple(
            i for i, c in enumerate(self.classes) if any(level % a.den == 0 for a in c.members)
        )


def grid_angles(max_den: int) -> list[RationalAngle]:
    """Distinct angles in ``(0, 1/2]`` with denominator at most ``max_den``."""
    seen = {
        RationalAngle.of(Fraction(a, b))
        for b in range(1, max_den + 1)
        for a in range(1, b // 2 + 1)
    }
    return sorted(seen)


def build_grid(max_den: int, prec: int) -> TGrid:
    """One entry per nonzero reflection class, valued at ``prec`` digits."""
    if max_den < 2:
        raise DomainError(f"max_den must be >= 2, got {max_den}")
    groups: dict[RationalAngle, list[RationalAngle]] = defaultdict(list)
    for a in grid_angles(max_den):
        rep = canonical(a)
        if rep.num:
            groups[rep].append(a)
    classes = tuple(
        sorted((GridClass(rep, tuple(ms)) for rep, ms in groups.items()), key=GridClass.key)
    )
    values = tuple(t_value(c.rep, prec + GUARD).value for c in classes)
    return TGrid(max_den, prec, classes, values)


# --------------------------------------------------------------------------
# exact linear algebra over Q


class SpanBasis:
    """Incremental row-echelon basis of rational vectors keyed by angle."""

    def __init__(self) -> None:
        self._rows: list[tuple[RationalAngle, Vector]] = []

    def reduce(self, vec: Mapping[RationalAngle, Fraction]) -> Vector:
        v = {k: Fraction(c) for k, c in vec.items() if c}
        for pivot, row in self._rows:
            c = v.get(pivot)
            if c:
                for k, rc in row.items():
                    nv = v.get(k, Fraction(0)) - c * rc
                    if nv:
                        v[k] = nv
                    else:
                        v.pop(k, None)
        return v

    def contains(self, vec: Mapping[RationalAngle, Fraction]) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Mapping[RationalAngle, Fraction]) -> bool:
        """Add ``vec``; ``False`` if it was already in the span."""
        v = self.reduce(vec)
        if not v:
            return False
        pivot = max(v, key=lambda a: (a.den, a.num))
        inv = 1 / v[pivot]
        v = {k: c * inv for k, c in v.items()}
        # keep the basis fully reduced so membership is a single pass
        rows = []
        for p, row in self._rows:
            c = row.get(pivot)
            if c:
                row = {k: row.get(k, Fraction(0)) - c * v.get(k, Fraction(0)) for k in set(row) | set(v)}
                row = {k: x for k, x in row.items() if x}
            rows.append((p, row))
        rows.append((pivot, v))
        self._rows = rows
        return True

    @property
    def pivots(self) -> list[RationalAngle]:
        return [p for p, _ in self._rows]

    def __len__(self) -> int:
        return len(self._rows)


def class_vector(angles: Iterable[AngleLike], coefficients: Iterable[int | Fraction]) -> Vector:
    """Coefficients folded onto reflection representatives; ``T(0) = 0`` dropped."""
    out: Vector = {}
    for a, c in zip(angles, coefficients):
        rep = canonical(a)
        if rep.num == 0:
            continue
        out[rep] = out.get(rep, Fraction(0)) + Fraction(c)
    return {k: v for k, v in out.items() if v}


def primitive_key(vec: Mapping[RationalAngle, Fraction]) -> tuple[tuple[RationalAngle, int], ...]:
    """Hashable form of ``vec`` scaled to coprime integers, first entry positive."""
    items = sorted((k, v) for k, v in vec.items() if v)
    if not items:
        return ()
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (v.denominator for _, v in items), 1)
    ints = canonical_coefficients([int(v * lcm) for _, v in items])
    return tuple((k, c) for (k, _), c in zip(items, ints))


# --------------------------------------------------------------------------
# discovery


@dataclass
class Discovery:
    grid: TGrid
    relations: list[Relation]
    subsets_tested: int = 0
    failures: list[tuple[tuple[RationalAngle, ...], str]] = field(default_factory=list)
    exclusions: list[tuple[tuple[RationalAngle, ...], Exclusion]] = field(default_factory=list)


def _subset_key(grid: TGrid, subset: tuple[int, ...]) -> tuple:
    keys = sorted((grid.classes[i].key() for i in subset), reverse=True)
    return (keys[0][0], len(subset), keys)


def candidate_subsets(grid: TGrid, size_cap: int) -> list[tuple[int, ...]]:
    """Subsets of each denominator family, in a fixed order.

    A family collects the classes reachable at one denominator level, which
    is where multiplication-formula relations live.  Subsets are ordered by
    level, then size, then the descending class keys.
    """
    seen: set[tuple[int, ...]] = set()
    for level in range(2, grid.max_den + 1):
        fam = grid.family(level)
        for size in range(2, min(size_cap, len(fam)) + 1):
            for sub in combinations(fam, size):
                seen.add(sub)
    return sorted(seen, key=lambda s: _subset_key(grid, s))


def _reflection_relations(grid: TGrid, prec: int) -> list[Relation]:
    out = []
    with mpmath.workdps(prec + GUARD):
        half = RationalAngle(1, 2)
        if grid.max_den >= 2:
            v = t_value(half, prec + GUARD).value
            out.append(Relation((half,), (1,), abs(v), prec, "reflection"))
        for c in grid.classes:
            for a, b in combinations(sorted(c.members), 2):
                va = t_value(a, prec + GUARD).value
                vb = t_value(b, prec + GUARD).value
                out.append(Relation((a, b), (1, -1), abs(va - vb), prec, "reflection"))
    return out


def _as_relation(grid: TGrid, subset: Sequence[int], coeffs: Sequence[int], residual: mpf, prec: int) -> Relation:
    pairs = sorted(
        ((grid.classes[i].display, c) for i, c in zip(subset, coeffs) if c),
        key=lambda p: p[0],
    )
    angles = tuple(a for a, _ in pairs)
    return Relation(angles, canonical_coefficients([c for _, c in pairs]), residual, prec)


def scan_t_relations(
    max_den: int,
    prec: int = 80,
    max_norm: int = 32,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> Discovery:
    """Full discovery run with bookkeeping; see :func:`discover_t_relations`."""
    grid = build_grid(max_den, prec)
    found = _reflection_relations(grid, prec)
    basis = SpanBasis()
    disc = Discovery(grid, [])
    cap = min(size_cap, (prec - 20) // 10)
    for sub in candidate_subsets(grid, size_cap):
        disc.subsets_tested += 1
        angles = tuple(grid.classes[i].rep for i in sub)
        if len(sub) > cap:
            disc.failures.append((angles, f"prec {prec} below {min_prec(len(sub))}"))
            continue
        try:
            out = find_relation([grid.values[i] for i in sub], prec, max_norm)
        except PrecisionError as exc:
            disc.failures.append((angles, str(exc)))
            continue
        if isinstance(out, Exclusion):
            continue
        vec = {a: Fraction(c) for a, c in zip(angles, out.coefficients) if c}
        if basis.add(vec):
            found.append(_as_relation(grid, sub, out.coefficients, out.residual, prec))
    # Within each family, nothing small may remain once the pivots are removed.
    for level in range(2, max_den + 1):
        rest = [i for i in grid.family(level) if grid.classes[i].rep not in basis.pivots]
        if len(rest) < 2 or len(rest) > cap:
            continue
        out = find_relation([grid.values[i] for i in rest], prec, max_norm)
        angles = tuple(grid.classes[i].rep for i in rest)
        if isinstance(out, Exclusion):
            disc.exclusions.append((angles, out))
        else:
            disc.failures.append((angles, f"unexpected residual relation {out.coefficients}"))
    disc.relations = sorted(found, key=_relation_order)
    return disc


def _relation_order(rel: Relation) -> tuple:
    return (rel.level, rel.kind != "reflection", [(a.den, a.num) for a in rel.angles], rel.coefficients)


def discover_t_relations(
    max_den: int,
    prec: int = 80,
    max_norm: int = 32,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> list[Relation]:
    """Linear relations among ``T(a/b)``, ``b <= max_den``, up to reflection.

    Reflection pairs (and ``T(1/2) = 0``) come first within each level;
    the others are the relations PSLQ finds on the reflection classes, kept
    only when they enlarge the span of those already found.
    """
    return scan_t_relations(max_den, prec, max_norm, size_cap).relations


def global_exclusion(disc: Discovery, max_norm: int = 32, prec: int | None = None) -> Exclusion | Relation:
    """PSLQ over every non-pivot class at once.

    Each found relation eliminates one class (its pivot); the remaining values
    should admit no small relation.  Needs ``10 * len + 20`` digits.
    """
    grid = disc.grid
    basis = SpanBasis()
    for rel in disc.relations:
        if rel.kind != "reflection":
            basis.add(class_vector(rel.angles, rel.coefficients))
    rest = [i for i, c in enumerate(grid.classes) if c.rep not in basis.pivots]
    prec = prec or min_prec(len(rest))
    values = [t_value(grid.classes[i].rep, prec + GUARD).value for i in rest]
    return find_relation(values, prec, max_norm)


def soundness_ratio(rel: Relation) -> mpf:
    """Residual at ``prec`` over residual at ``2 * prec`` (``inf`` if exact).

    The first residual is floored at the rounding unit ``10**-prec``: rounded
    values sometimes cancel exactly, and a residual below that unit carries
    no information.
    """
    p2 = 2 * rel.prec
    with mpmath.workdps(p2 + GUARD):
        vals = [t_value(a, p2 + GUARD).value for a in rel.angles]
        r2 = abs(mpmath.fsum(c * v for c, v in zip(rel.coefficients, vals)))
        if r2 == 0:
            return mpmath.inf
        return max(rel.residual, mpf(10) ** -rel.prec) / r2


# --------------------------------------------------------------------------
# text and records


def relation_text(angles: Sequence[RationalAngle], coefficients: Sequence[int]) -> str:
    parts = []
    for a, c in zip(angles, coefficients):
        if not c:
            continue
        body = f"T({a})" if abs(c) == 1 else f"{abs(c)} T({a})"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts or ["0"]) + " = 0"


def relation_record(rel: Relation) -> dict:
    return {
        "kind": rel.kind,
        "angles": [str(a) for a in rel.angles],
        "coefficients": list(rel.coefficients),
        "norm": rel.norm,
        "residual": mpmath.nstr(rel.residual, 5),
        "text": rel.text(),
    }


# --------------------------------------------------------------------------
# the appendix list

APPENDIX: tuple[tuple[str, str], ...] = (
    ("refl1", "T(1/2) = 0"),
    ("refl2", "T(1/3) = T(1/6)"),
    ("refl3", "T(1/8) = T(3/8)"),
    ("mult9a", "3T(4/9) = T(1/3)+T(2/9)-3T(1/9)"),
    ("refl4", "T(2/10) = T(3/10)"),
    ("refl5", "T(1/10) = T(2/5)"),
    ("refl6", "T(1/12) = T(5/12)"),
    ("mult3a", "2T(1/4) = 3T(1/12)"),
    ("refl7", "T(3/14) = T(4/14)"),
    ("refl8", "T(5/14) = T(1/7)"),
    ("refl9", "T(1/14) = T(3/7)"),
    ("mult5a", "3T(2/5) = -3T(1/15)+T(1/5)+3T(4/15)"),
    ("mult5b", "3T(7/15) = -3T(2/15)+3T(1/5)+T(2/5)"),
    ("tough", "15T(1/15) = 15T(2/15)-5T(1/5)+9T(1/3)-10T(2/5)"),
    ("refl10", "T(3/16) = T(5/16)"),
    ("refl11", "T(1/16) = T(7/16)"),
    ("refl12", "T(2/9) = T(5/18)"),
    ("refl13", "T(1/9) = T(7/18)"),
    ("refl14", "T(1/18) = T(4/9)"),
    ("mult18", "3T(1/18)= 3T(5/18)+T(1/3)-3T(7/18)"),
    ("refl15", "T(3/20) = T(7/20)"),
    ("relf16", "T(1/20) = T(9/20)"),
    ("mult20", "5T(3/20) = 5T(1/20)+2T(1/4)=5T(7/20)"),
)

# Entries as printed that are not true relations, with the repair used.
APPENDIX_CORRECTIONS: dict[str, tuple[str, str]] = {
    "mult20": (
        "5T(3/20) = 5T(1/20)+2T(1/4)",
        "second '=' is a misprint; T(3/20) = T(7/20) is refl15",
    ),
    "mult9a": (
        "3T(4/9) = T(1/3)+3T(2/9)-3T(1/9)",
        "printed coefficient of T(2/9) is 1; m=3, r=1/9 gives 3 (then equal to mult18)",
    ),
}

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*T\((\d+)/(\d+)\)")


def _parse_side(text: str) -> list[tuple[int, Fraction]]:
    text = text.strip()
    if text == "0":
        return []
    terms = []
    pos = 0
    for m in _TERM.finditer(text):
        if text[pos:m.start()].strip():
            raise ValueError(f"cannot parse {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        terms.append((sign * coef, Fraction(int(m.group(3)), int(m.group(4)))))
        pos = m.end()
    if text[pos:].strip() or not terms:
        raise ValueError(f"cannot parse {text!r}")
    return terms


def parse_relation(text: str) -> tuple[tuple[RationalAngle, ...], tuple[int, ...]]:
    """``"3T(4/9) = T(1/3)+T(2/9)"`` to angles and integer coefficients.

    Only the first ``=`` is used.  Repeated angles are merged and the
    result is put in canonical form, angles in increasing order.
    """
    lhs, rhs = text.split("=")[:2]
    acc: dict[RationalAngle, int] = {}
    for sign, side in ((1, lhs), (-1, rhs)):
        for c, f in _parse_side(side):
            a = RationalAngle.of(f)
            acc[a] = acc.get(a, 0) + sign * c
    items = sorted((a, c) for a, c in acc.items() if c)
    angles = tuple(a for a, _ in items)
    return angles, canonical_coefficients([c for _, c in items])


def appendix_relations(corrected: bool = True) -> list[tuple[str, tuple[RationalAngle, ...], tuple[int, ...]]]:
    out = []
    for label, text in APPENDIX:
        if corrected and label in APPENDIX_CORRECTIONS:
            text = APPENDIX_CORRECTIONS[label][0]
        out.append((label, *parse_relation(text)))
    return out


def relation_class_key(angles: Sequence[RationalAngle], coefficients: Sequence[int]) -> tuple:
    """Key identifying a relation modulo scaling and reflection substitutions.

    Pure reflection identities (zero after folding) keep their raw angle set.
    """
    vec = class_vector(angles, coefficients)
    if vec:
        return ("linear", primitive_key(vec))
    return ("reflection", tuple(sorted(angles)))


# --------------------------------------------------------------------------
# derivations from the reflection and multiplication formulas


@dataclass(frozen=True)
class MultInstance:
    m: int
    r: RationalAngle
    vector: tuple[tuple[RationalAngle, Fraction], ...]
    reflected: tuple[RationalAngle, ...] = ()

    def sort_key(self) -> tuple[int, int, int, int]:
        # Instances r and 1/m - r fold to the same vector; prefer the
        # simpler left side T(mr).
        lhs = RationalAngle.of(self.r.fraction * self.m)
        return (self.m, lhs.den, self.r.den, self.r.num)

    def __str__(self) -> str:
        return f"m={self.m}, r={self.r}"


@dataclass(frozen=True)
class Derivation:
    """``+-relation = sum weight * instance`` after folding by reflection.

    Each instance is the vanishing sum ``T(mr) - rhs``; the weights are
    scaled so the first is positive.
    """

    steps: tuple[tuple[Fraction, MultInstance], ...]
    reflections: tuple[tuple[RationalAngle, RationalAngle], ...]

    @property
    def explained(self) -> bool:
        return True

    def describe(self) -> str:
        parts = [f"{w} x [multiplication {inst}]" for w, inst in self.steps]
        parts += [f"reflection T({a}) = T({b})" for a, b in self.reflections]
        return "; ".join(parts)


@dataclass(frozen=True)
class Unexplained:
    reason: str

    @property
    def explained(self) -> bool:
        return False

    def describe(self) -> str:
        return f"unexplained: {self.reason}"


def multiplication_instances(max_den: int) -> list[MultInstance]:
    """Multiplication-formula instances whose classes all lie on the grid.

    Ordered by :meth:`MultInstance.sort_key`.
    """
    reps = {canonical(a) for a in grid_angles(max_den)}
    out = []
    seen_r: set[tuple[int, RationalAngle]] = set()
    for m in range(3, max_den + 1, 2):
        for b in range(2, 4 * max_den + 1):
            for a in range(1, b // (2 * m) + 1):
                if math.gcd(a, b) != 1:
                    continue
                r = RationalAngle(a, b)
                if (m, r) in seen_r:
                    continue
                seen_r.add((m, r))
                rel = multiplication_relation(m, r)
                if rel.is_zero():
                    continue
                if not all(ang in reps for ang in rel.angles):
                    continue
                raw = multiplication_relation(m, r, normalize=False)
                reflected = tuple(ang for ang in raw.angles if canonical(ang) != ang)
                out.append(MultInstance(m, r, tuple((ang, c) for c, ang in rel.terms), reflected))
    out.sort(key=MultInstance.sort_key)
    return out


def _solve_combination(target: Vector, insts: Sequence[MultInstance]) -> list[Fraction] | None:
    """Exact weights with ``sum w_i inst_i = target``, or ``None``."""
    keys = sorted(set(target) | {a for inst in insts for a, _ in inst.vector})
    cols = [dict(inst.vector) for inst in insts]
    # augmented matrix rows = angles
    rows = [[c.get(k, Fraction(0)) for c in cols] + [target.get(k, Fraction(0))] for k in keys]
    ncol = len(insts)
    piv_cols = []
    r = 0
    for col in range(ncol):
        p = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(col)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    if len(piv_cols) < ncol:
        return None  # dependent instances; a smaller combination exists
    w = [Fraction(0)] * ncol
    for i, col in enumerate(piv_cols):
        w[col] = rows[i][-1]
    return w


def _merge(*groups: tuple[tuple[RationalAngle, RationalAngle], ...]) -> tuple[tuple[RationalAngle, RationalAngle], ...]:
    return tuple(sorted({pair for g in groups for pair in g}))


def explain_relation(rel: Relation, max_den: int | None = None, max_steps: int = 4) -> Derivation | Unexplained:
    """Derive ``rel`` from reflection and multiplication instances (``m <= max_den``).

    Searches combinations of increasing size, so the first derivation found
    uses as few multiplication instances as possible.
    """
    if not rel.angles:
        return Unexplained("relation has no angles")
    max_den = max_den or max(rel.level, 3)
    reflections = tuple(
        (a, canonical(a)) for a in rel.angles if canonical(a) != a
    )
    target = class_vector(rel.angles, rel.coefficients)
    if not target:
        if rel.angles == (RationalAngle(1, 2),):
            return Derivation((), ((RationalAngle(1, 2), RationalAngle(0, 1)),))
        return Derivation((), reflections)
    insts = multiplication_instances(max_den)
    # only instances connected to the target's classes can contribute
    support = set(target)
    useful: list[MultInstance] = []
    changed = True
    pool = list(insts)
    while changed:
        changed = False
        for inst in pool:
            if inst in useful:
                continue
            if any(a in support for a, _ in inst.vector):
                useful.append(inst)
                support |= {a for a, _ in inst.vector}
                changed = True
    useful.sort(key=MultInstance.sort_key)
    for size in range(1, max_steps + 1):
        for combo in combinations(useful, size):
            w = _solve_combination(target, combo)
            if w is not None:
                # a relation equal to zero has no preferred sign
                if w[0] < 0:
                    w = [-x for x in w]
                used = {a for inst in combo for a in inst.reflected}
                extra = tuple((a, canonical(a)) for a in sorted(used))
                return Derivation(tuple(zip(w, combo)), _merge(reflections, extra))
    return Unexplained(f"no combination of at most {max_steps} multiplication instances")
