"""Hypergrid domains, query-counted oracles, and exact-value plumbing.

Conventions shared by the whole package:

* Coordinates are 0-based: a point of the side-``n`` grid in ``d``
  dimensions is a tuple of ``d`` integers from ``{0, ..., n-1}``.
* Dimension indices are 0-based as well: ``{0, ..., d-1}``.
* Values are exact (``int`` or ``fractions.Fraction``).  Equality and
  ordering of values are decided exactly; nothing in the package compares
  values with a tolerance.
* The canonical point order is the odometer order: coordinate 0 varies
  fastest, so the index of a point is ``sum(coords[i] * n**i)``.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, TextIO, Union

Point = tuple[int, ...]
Value = Union[int, Fraction]

#: Hard limit on n**d so indices stay within native index arithmetic.
MAX_DOMAIN_SIZE = 2**62


class CapacityError(Exception):
    """An exact computation would exceed its documented size cap."""


def ceil_log2(n: int) -> int:
    """Smallest k with 2**k >= n, for n >= 1."""
    if n < 1:
        raise ValueError(f"ceil_log2 needs n >= 1, got {n}")
    return (n - 1).bit_length()


@dataclass(frozen=True)
class Domain:
    """The hypergrid {0, ..., n-1}^d.

    ``n = 2`` is the hypercube; no code path in the package special-cases it.
    """

    n: int
    d: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"side length must be >= 2, got {self.n}")
        if self.d < 1:
            raise ValueError(f"dimension count must be >= 1, got {self.d}")
        if self.n**self.d > MAX_DOMAIN_SIZE:
            raise ValueError(f"domain size {self.n}**{self.d} exceeds the index cap")

    def size(self) -> int:
        return self.n**self.d

    def strides(self) -> tuple[int, ...]:
        """stride[i] = n**i, the index weight of coordinate i."""
        out = []
        s = 1
        for _ in range(self.d):
            out.append(s)
            s *= self.n
        return tuple(out)

    def index_to_point(self, idx: int) -> Point:
        """Odometer decode: coordinate 0 varies fastest."""
        if not 0 <= idx < self.size():
            raise ValueError(f"index {idx} out of range for {self}")
        coords = []
        for _ in range(self.d):
            idx, c = divmod(idx, self.n)
            coords.append(c)
        return tuple(coords)

    def point_to_index(self, point: Sequence[int]) -> int:
        """Odometer encode; inverse of index_to_point."""
        if len(point) != self.d:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.d}")
        idx = 0
        s = 1
        for c in point:
            if not 0 <= c < self.n:
                raise ValueError(f"coordinate {c} out of range [0, {self.n})")
            idx += c * s
            s *= self.n
        return idx

    def contains(self, point: Sequence[int]) -> bool:
        return len(point) == self.d and all(0 <= c < self.n for c in point)

    def iter_points(self) -> Iterator[Point]:
        """All points in odometer order."""
        n, d = self.n, self.d
        coords = [0] * d
        for _ in range(self.size()):
            yield tuple(coords)
            for i in range(d):
                coords[i] += 1
                if coords[i] < n:
                    break
                coords[i] = 0

    def random_point(self, rng: random.Random) -> Point:
        return tuple(rng.randrange(self.n) for _ in range(self.d))


class Direction(Enum):
    UP = "up"
    DOWN = "down"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.UP else -1

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class Orientation:
    """A direction (up/down) for each dimension in a set T.

    ``dirs`` maps a dimension index to its direction and is defined on
    exactly the members of T.
    """

    dirs: Mapping[int, Direction]

    def __post_init__(self) -> None:
        object.__setattr__(self, "dirs", dict(self.dirs))
        for dim, direction in self.dirs.items():
            if not isinstance(dim, int) or dim < 0:
                raise ValueError(f"bad dimension index {dim!r}")
            if not isinstance(direction, Direction):
                raise ValueError(f"bad direction {direction!r} for dimension {dim}")

    @classmethod
    def all_up(cls, d: int) -> "Orientation":
        return cls({i: Direction.UP for i in range(d)})

    @classmethod
    def from_down_set(cls, d: int, down: Iterable[int]) -> "Orientation":
        down = set(down)
        return cls({i: (Direction.DOWN if i in down else Direction.UP) for i in range(d)})

    @property
    def dims(self) -> frozenset[int]:
        return frozenset(self.dirs)

    @property
    def down_set(self) -> frozenset[int]:
        return frozenset(i for i, b in self.dirs.items() if b is Direction.DOWN)

    def direction(self, dim: int) -> Direction:
        return self.dirs[dim]

    def covers_exactly(self, d: int) -> bool:
        return self.dims == frozenset(range(d))


class FunctionOracle:
    """Query-counted access to a function Point -> Value.

    Evaluation must be pure: the same point always yields the same value.
    The counter increments by exactly one per call; it can be read and
    reset.  The evaluation map may be shared across workers, but the
    counter is plain instance state, so concurrent trials should each wrap
    their own oracle instance.
    """

    __slots__ = ("domain", "name", "query_count", "_func")

    def __init__(self, domain: Domain, func: Callable[[Point], Value], name: str = ""):
        self.domain = domain
        self._func = func
        self.name = name
        self.query_count = 0

    def __call__(self, point: Point) -> Value:
        self.query_count += 1
        return self._func(point)

    def reset_query_count(self) -> None:
        self.query_count = 0

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        label = self.name or "oracle"
        return f"<FunctionOracle {label} on n={self.domain.n} d={self.domain.d}>"


def _check_dims(d: int, dims: Iterable[int]) -> list[int]:
    out = sorted(dims)
    if len(set(out)) != len(out):
        raise ValueError(f"duplicate dimensions in {out}")
    if out and (out[0] < 0 or out[-1] >= d):
        raise ValueError(f"dimensions {out} out of range for d={d}")
    return out


def concat(d: int, dims: Iterable[int], z: Sequence[int], w: Sequence[int]) -> Point:
    """Merge two partial points into a full point of dimension d.

    ``z`` assigns the dimensions in ``dims`` (listed in increasing order);
    ``w`` assigns the complement (also in increasing order).
    """
    t = _check_dims(d, dims)
    if len(z) != len(t):
        raise ValueError(f"z has {len(z)} coordinates for {len(t)} dimensions")
    if len(w) != d - len(t):
        raise ValueError(f"w has {len(w)} coordinates for {d - len(t)} dimensions")
    out: list[int] = [-1] * d
    for dim, c in zip(t, z):
        out[dim] = c
    it = iter(w)
    for i in range(d):
        if out[i] < 0:
            out[i] = next(it)
    return tuple(out)


def restrict(f: FunctionOracle, dims: Iterable[int], w: Sequence[int]) -> FunctionOracle:
    """The restriction f_w: keep the dimensions in ``dims``, pin the rest to w.

    The result is an oracle over [n]^|dims| whose queries are forwarded
    through ``concat``; query accounting charges the parent oracle (and the
    child keeps its own count of forwarded calls).
    """
    t = _check_dims(f.domain.d, dims)
    if not t:
        raise ValueError("restriction must keep at least one dimension")
    if len(w) != f.domain.d - len(t):
        raise ValueError(f"w has {len(w)} coordinates for {f.domain.d - len(t)} pinned dimensions")
    d = f.domain.d
    # Full-point template with the pinned coordinates already in place.
    template: list[int] = [-1] * d
    for dim in t:
        template[dim] = -2  # placeholder for kept dims
    wi = iter(w)
    for i in range(d):
        if template[i] == -1:
            template[i] = next(wi)

    def eval_restricted(z: Point) -> Value:
        p = list(template)
        for dim, c in zip(t, z):
            p[dim] = c
        return f(tuple(p))

    sub = FunctionOracle(Domain(f.domain.n, len(t)), eval_restricted,
                         name=f"{f.name}|w" if f.name else "restricted")
    return sub


def hamming_tail_probability(d: int) -> Fraction:
    """Pr over uniform x in {0,1}^d that | |x| - d/2 | > 3*sqrt(d), exactly.

    The comparison is made in integers: | |x| - d/2 | > 3*sqrt(d) iff
    (2k - d)^2 > 36 d for k = |x|.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    hits = sum(math.comb(d, k) for k in range(d + 1) if (2 * k - d) ** 2 > 36 * d)
    return Fraction(hits, 2**d)


@dataclass(frozen=True)
class RandomSource:
    """Deterministic randomness: (seed, stream_id) fixes the whole stream.

    Distinct stream ids give statistically independent streams (the state
    is derived by hashing), so trials can run in parallel and still
    reproduce bit-identically.
    """

    seed: int
    stream_id: int = 0

    def rng(self) -> random.Random:
        digest = hashlib.sha256(f"unate:{self.seed}:{self.stream_id}".encode()).digest()
        return random.Random(int.from_bytes(digest[:16], "big"))


def _normalize_value(v: Value) -> Value:
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else v
    if isinstance(v, int):
        return v
    raise TypeError(f"values must be int or Fraction, got {type(v).__name__}")


def _format_value(v: Value) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return str(v)


def _parse_value(token: str) -> Value:
    if "/" in token:
        return _normalize_value(Fraction(token))
    return int(token)


class TruthTable:
    """A dense value table over a domain, stored in odometer order.

    Integer-valued Fractions are normalized to int on construction, so the
    text representation of a table is canonical.
    """

    __slots__ = ("domain", "values")

    def __init__(self, domain: Domain, values: Sequence[Value]):
        if len(values) != domain.size():
            raise ValueError(f"expected {domain.size()} values, got {len(values)}")
        self.domain = domain
        self.values = [_normalize_value(v) for v in values]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.domain == other.domain and self.values == other.values

    def __getitem__(self, point: Sequence[int]) -> Value:
        return self.values[self.domain.point_to_index(point)]

    def value_at(self, idx: int) -> Value:
        return self.values[idx]

    def distinct_values(self) -> list[Value]:
        return sorted(set(self.values))

    @classmethod
    def from_function(cls, domain: Domain, func: Callable[[Point], Value]) -> "TruthTable":
        return cls(domain, [func(p) for p in domain.iter_points()])

    @classmethod
    def from_oracle(cls, f: FunctionOracle) -> "TruthTable":
        """Materialize an oracle; this queries every point once."""
        return cls(f.domain, [f(p) for p in f.domain.iter_points()])

    def as_oracle(self, name: str = "") -> FunctionOracle:
        values = self.values
        strides = self.domain.strides()

        def lookup(p: Point) -> Value:
            idx = 0
            for c, s in zip(p, strides):
                idx += c * s
            return values[idx]

        return FunctionOracle(self.domain, lookup, name=name or "table")

    def write(self, fp: TextIO) -> None:
        fp.write(f"hypergrid {self.domain.n} {self.domain.d}\n")
        for v in self.values:
            fp.write(_format_value(v) + "\n")

    def save(self, path: str) -> None:
        with open(path, "w", encoding="ascii", newline="\n") as fp:
            self.write(fp)

    @classmethod
    def read(cls, fp: TextIO) -> "TruthTable":
        header = fp.readline().split()
        if len(header) != 3 or header[0] != "hypergrid":
            raise ValueError("bad header: expected 'hypergrid <n> <d>'")
        domain = Domain(int(header[1]), int(header[2]))
        values: list[Value] = []
        for lineno, line in enumerate(fp, start=2):
            token = line.strip()
            if not token:
                continue
            try:
                values.append(_parse_value(token))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"line {lineno}: bad value {token!r}") from exc
        if len(values) != domain.size():
            raise ValueError(f"expected {domain.size()} values, found {len(values)}")
        return cls(domain, values)

    @classmethod
    def load(cls, path: str) -> "TruthTable":
        with open(path, "r", encoding="ascii") as fp:
            return cls.read(fp)
