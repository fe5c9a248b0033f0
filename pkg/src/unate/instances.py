"""Generators for the hard and control function families.

Every generator is pure and evaluated lazily per query unless it is
table-backed by construction.  Square roots in threshold comparisons are
handled exactly by squaring, so the generators are bit-exact for every d.

Descriptors give each family a canonical one-line text form,
``family key=value ...``; dimension sets are comma lists (``S=0,1``) and a
nested descriptor is a quoted string (``inner='parity_sum_h d=2 S=0 T=1'``).
"""

from __future__ import annotations

import math
import shlex
from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import (
    CapacityError,
    Domain,
    FunctionOracle,
    Orientation,
    Point,
    RandomSource,
    TruthTable,
    Value,
)
from .exact import is_unate

#: Table-backed generators refuse beyond this size.
RANDOM_TABLE_CAP = 1 << 16

FAMILIES = (
    "parity_sum_h",
    "truncated_hprime",
    "padded",
    "boolean_hard_fi",
    "random_unate",
    "anti_unate",
    "explicit_table",
)


def _check_subset(d: int, dims: Iterable[int], label: str) -> frozenset[int]:
    s = frozenset(dims)
    if any(not 0 <= i < d for i in s):
        raise ValueError(f"{label} must be a subset of 0..{d - 1}, got {sorted(s)}")
    return s


def gen_parity_sum_h(d: int, s_dims: Iterable[int], t_dims: Iterable[int]) -> FunctionOracle:
    """h(x) = 2|x| + chi_S(x) + chi_T(x) on the hypercube.

    chi_A(x) = (-1)^(sum of x_i over A).  Unate when S and T are disjoint;
    far from unate when they intersect (with |S|, |T| >= 2).
    """
    s = tuple(_check_subset(d, s_dims, "S"))
    t = tuple(_check_subset(d, t_dims, "T"))

    def h(x: Point) -> int:
        chi_s = -1 if sum(x[i] for i in s) & 1 else 1
        chi_t = -1 if sum(x[i] for i in t) & 1 else 1
        return 2 * sum(x) + chi_s + chi_t

    return FunctionOracle(Domain(2, d), h, name=f"parity_sum_h d={d}")


def _ceil_sqrt(v: int) -> int:
    r = math.isqrt(v)
    return r if r * r == v else r + 1


def gen_truncated_hprime(d: int, s_dims: Iterable[int], t_dims: Iterable[int]) -> FunctionOracle:
    """h with its tails clamped to constants outside the central Hamming band.

    Low weights (|x| < d/2 - 3 sqrt(d)) map to an integer just below every
    mid-band value of h, high weights to one just above; for non-square d
    the irrational clamp levels are rounded outward so the range stays
    integral and the ordering against the mid band is preserved.
    """
    base = gen_parity_sum_h(d, s_dims, t_dims)
    ceil6 = _ceil_sqrt(36 * d)  # ceil(6 sqrt d)
    lo_val = d - 2 - ceil6
    hi_val = d + 2 + ceil6

    def hp(x: Point) -> int:
        w = sum(x)
        gap = d - 2 * w
        if gap > 0 and gap * gap > 36 * d:  # |x| < d/2 - 3 sqrt d
            return lo_val
        if gap < 0 and gap * gap > 36 * d:  # |x| > d/2 + 3 sqrt d
            return hi_val
        return base(x)

    return FunctionOracle(Domain(2, d), hp, name=f"truncated_hprime d={d}")


def gen_boolean_hard_fi(d: int, i: int) -> FunctionOracle:
    """The Boolean hard family: clamped tails around a two-coordinate parity.

    Value 1 above the band |x| > d/2 + sqrt(d), value 0 below it, and
    x_i xor x_{i + d/2} inside.  Requires even d and 0 <= i < d/2.
    """
    if d < 2 or d % 2:
        raise ValueError(f"d must be even and >= 2, got {d}")
    if not 0 <= i < d // 2:
        raise ValueError(f"i must be in 0..{d // 2 - 1}, got {i}")
    j = i + d // 2

    def fi(x: Point) -> int:
        gap = 2 * sum(x) - d
        if gap > 0 and gap * gap > 4 * d:  # |x| > d/2 + sqrt d
            return 1
        if gap < 0 and gap * gap > 4 * d:  # |x| < d/2 - sqrt d
            return 0
        return x[i] ^ x[j]

    return FunctionOracle(Domain(2, d), fi, name=f"boolean_hard_fi d={d} i={i}")


def gen_padded(g: FunctionOracle, d: int) -> FunctionOracle:
    """Extend g to d dimensions by ignoring the new ones.

    Each outer query makes exactly one query to g, so g's counter tracks
    the inner query complexity.
    """
    m = g.domain.d
    if d < m:
        raise ValueError(f"cannot pad a {m}-dimensional function down to {d}")
    if d == m:
        return FunctionOracle(g.domain, g, name=g.name or "padded")

    def h(x: Point) -> Value:
        return g(x[:m])

    return FunctionOracle(Domain(g.domain.n, d), h, name=f"padded d={d} of {g.name}")


def gen_anti_unate(n: int, d: int) -> FunctionOracle:
    """Coordinate-sum parity: every dependent dimension both rises and falls.

    A lazily evaluated far-from-unate control that exists for every (n, d).
    """
    domain = Domain(n, d)

    def f(x: Point) -> int:
        return sum(x) & 1

    return FunctionOracle(domain, f, name=f"anti_unate n={n} d={d}")


def gen_random_unate(
    n: int, d: int, r: int, seed: int
) -> tuple[TruthTable, Orientation]:
    """A random unate table plus the orientation it is monotone under.

    Draws random values, closes them upward into a monotone table (each
    point takes the maximum draw at or below it), then flips each
    coordinate according to a random orientation.  The result is verified
    unate before it is returned.
    """
    domain = Domain(n, d)
    size = domain.size()
    if size > RANDOM_TABLE_CAP:
        raise CapacityError(f"random table size {size} exceeds the cap {RANDOM_TABLE_CAP}")
    if r < 1:
        raise ValueError(f"range size must be >= 1, got {r}")
    rng = RandomSource(seed, 0).rng()
    draws = [rng.randrange(r) for _ in range(size)]
    strides = domain.strides()
    mono = list(draws)
    for idx in range(size):
        rem = idx
        m = mono[idx]
        for k in range(d):
            c = rem % n
            rem //= n
            if c > 0:
                below = mono[idx - strides[k]]
                if below > m:
                    m = below
        mono[idx] = m
    down = frozenset(k for k in range(d) if rng.randrange(2))
    orientation = Orientation.from_down_set(d, down)
    values = [0] * size
    for idx, p in enumerate(domain.iter_points()):
        flipped = tuple(n - 1 - c if k in down else c for k, c in enumerate(p))
        values[idx] = mono[domain.point_to_index(flipped)]
    table = TruthTable(domain, values)
    assert is_unate(table), "random unate construction produced a non-unate table"
    return table, orientation


# ---------------------------------------------------------------------------
# Descriptors


@dataclass(frozen=True)
class InstanceDescriptor:
    """A named function family plus its parameters, with a canonical text form."""

    family: str
    params: Mapping[str, str]

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; known: {', '.join(FAMILIES)}")
        object.__setattr__(self, "params", dict(self.params))

    _CANONICAL_ORDER = ("n", "d", "r", "i", "S", "T", "seed", "inner", "path")

    def text(self) -> str:
        def key_rank(k: str) -> tuple[int, str]:
            try:
                return (self._CANONICAL_ORDER.index(k), k)
            except ValueError:
                return (len(self._CANONICAL_ORDER), k)

        parts = [self.family]
        for k in sorted(self.params, key=key_rank):
            parts.append(f"{k}={shlex.quote(self.params[k])}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.text()


def parse_descriptor(text: str) -> InstanceDescriptor:
    try:
        tokens = shlex.split(text)
    except ValueError as exc:
        raise ValueError(f"bad descriptor {text!r}: {exc}") from exc
    if not tokens:
        raise ValueError("empty descriptor")
    family, *rest = tokens
    params: dict[str, str] = {}
    for tok in rest:
        key, sep, value = tok.partition("=")
        if not sep or not key:
            raise ValueError(f"bad descriptor token {tok!r}; expected key=value")
        if key in params:
            raise ValueError(f"duplicate key {key!r} in descriptor")
        params[key] = value
    return InstanceDescriptor(family, params)


def _param_int(desc: InstanceDescriptor, key: str) -> int:
    try:
        return int(desc.params[key])
    except KeyError:
        raise ValueError(f"{desc.family} needs parameter {key}") from None
    except ValueError:
        raise ValueError(f"{desc.family}: parameter {key}={desc.params[key]!r} is not an integer") from None


def _param_dims(desc: InstanceDescriptor, key: str) -> list[int]:
    try:
        raw = desc.params[key]
    except KeyError:
        raise ValueError(f"{desc.family} needs parameter {key}") from None
    if raw == "":
        return []
    try:
        return [int(tok) for tok in raw.split(",")]
    except ValueError:
        raise ValueError(f"{desc.family}: parameter {key}={raw!r} is not a comma list of integers") from None


def materialize(desc: InstanceDescriptor | str) -> FunctionOracle:
    """Build the oracle a descriptor names.  Raises ValueError on bad params."""
    if isinstance(desc, str):
        desc = parse_descriptor(desc)
    fam = desc.family
    if fam == "parity_sum_h":
        return gen_parity_sum_h(_param_int(desc, "d"), _param_dims(desc, "S"), _param_dims(desc, "T"))
    if fam == "truncated_hprime":
        return gen_truncated_hprime(_param_int(desc, "d"), _param_dims(desc, "S"), _param_dims(desc, "T"))
    if fam == "boolean_hard_fi":
        return gen_boolean_hard_fi(_param_int(desc, "d"), _param_int(desc, "i"))
    if fam == "padded":
        if "inner" not in desc.params:
            raise ValueError("padded needs parameter inner")
        inner = materialize(parse_descriptor(desc.params["inner"]))
        return gen_padded(inner, _param_int(desc, "d"))
    if fam == "random_unate":
        table, _ = gen_random_unate(
            _param_int(desc, "n"), _param_int(desc, "d"), _param_int(desc, "r"), _param_int(desc, "seed")
        )
        return table.as_oracle(name=str(desc))
    if fam == "anti_unate":
        return gen_anti_unate(_param_int(desc, "n"), _param_int(desc, "d"))
    if fam == "explicit_table":
        try:
            path = desc.params["path"]
        except KeyError:
            raise ValueError("explicit_table needs parameter path") from None
        return TruthTable.load(path).as_oracle(name=f"table:{path}")
    raise AssertionError(f"unhandled family {fam}")  # pragma: no cover
