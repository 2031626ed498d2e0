"""Exact linear algebra over prime fields F_p.

Matrices are dense numpy ``int64`` arrays holding canonical residues in
``[0, p)``.  Products of two residues must fit in 63 bits, which caps the
modulus at ``MAX_MODULUS``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_MODULUS = 3_037_000_493  # largest prime with p*p < 2**63


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def check_prime(p: int) -> int:
    """Return ``p`` if it is a usable prime modulus, else raise ValueError."""
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise TypeError(f"modulus must be an integer, got {p!r}")
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > MAX_MODULUS:
        raise ValueError(f"modulus {p} too large for int64 elimination")
    return p


@dataclass(frozen=True)
class PrimeFieldElement:
    """An element of F_p stored as its canonical representative."""

    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, PrimeFieldElement):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElement(-self.value, self.p)

    def __pow__(self, e: int):
        return PrimeFieldElement(pow(self.value, e, self.p), self.p)

    def inverse(self) -> PrimeFieldElement:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return PrimeFieldElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * PrimeFieldElement(o, self.p).inverse()

    def __eq__(self, other):
        if isinstance(other, PrimeFieldElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def _rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` mod p (copy) and its pivot columns."""
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


@dataclass(frozen=True, eq=False)
class PrimeFieldMatrix:
    """Immutable dense matrix over F_p."""

    entries: np.ndarray
    p: int
    _rref_cache: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        p = check_prime(self.p)
        arr = np.array(self.entries, dtype=np.int64)
        if arr.ndim != 2:
            if arr.size == 0:
                arr = arr.reshape(0, 0)
            else:
                raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
        arr = arr % p
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "p", p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> PrimeFieldMatrix:
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> PrimeFieldMatrix:
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int, cols: int | None = None) -> PrimeFieldMatrix:
        if len(rows) == 0:
            return cls.zeros(0, cols or 0, p)
        return cls(np.array(rows, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def __matmul__(self, other: PrimeFieldMatrix) -> PrimeFieldMatrix:
        if not isinstance(other, PrimeFieldMatrix):
            return NotImplemented
        if other.p != self.p:
            raise ValueError(f"mixed moduli {self.p} and {other.p}")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return PrimeFieldMatrix(_matmul_mod(self.entries, other.entries, self.p), self.p)

    def __eq__(self, other):
        if not isinstance(other, PrimeFieldMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.p, self.shape, self.entries.tobytes()))

    def __repr__(self):
        return f"PrimeFieldMatrix(p={self.p}, shape={self.shape},\n{self.entries})"

    def to_lists(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.entries]

    def is_zero(self) -> bool:
        return not self.entries.any()

    def is_square(self) -> bool:
        return self.rows == self.cols

    def rref(self) -> tuple[np.ndarray, list[int]]:
        if not self._rref_cache:
            self._rref_cache.append(_rref(self.entries, self.p))
        red, piv = self._rref_cache[0]
        return red.copy(), list(piv)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullity(self) -> int:
        return self.cols - self.rank()

    def kernel(self) -> list[np.ndarray]:
        return kernel(self)

    def power(self, e: int) -> PrimeFieldMatrix:
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        result = PrimeFieldMatrix.identity(self.rows, self.p)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def apply(self, vec: Iterable[int]) -> np.ndarray:
        v = np.asarray(list(vec), dtype=np.int64) % self.p
        return _matmul_mod(self.entries, v.reshape(-1, 1), self.p).ravel()

    def kron(self, other: PrimeFieldMatrix) -> PrimeFieldMatrix:
        if other.p != self.p:
            raise ValueError(f"mixed moduli {self.p} and {other.p}")
        return PrimeFieldMatrix(np.kron(self.entries, other.entries) % self.p, self.p)


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # Chunk the inner dimension so partial sums never overflow int64.
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    step = max(1, (2**63 - 1) // ((p - 1) ** 2 + 1) - 1)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(0, a.shape[1], step):
        out = (out + a[:, k:k + step] @ b[k:k + step]) % p
    return out


def rref_basis(vectors: Sequence[Sequence[int]] | np.ndarray, p: int, dim: int) -> np.ndarray:
    """Row-reduced basis of the span of ``vectors`` (each of length ``dim``)."""
    arr = np.asarray(vectors, dtype=np.int64).reshape(-1, dim)
    red, piv = _rref(arr, p)
    return red[: len(piv)]


def kernel(m: PrimeFieldMatrix) -> list[np.ndarray]:
    """Basis of ``{v : m v = 0}``, returned in reduced row echelon form.

    Identical inputs always yield identical output.
    """
    red, piv = m.rref()
    n = m.cols
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-red[i, f]) % m.p
        basis.append(v)
    if not basis:
        return []
    return list(rref_basis(basis, m.p, n))


def _digits(n: int, p: int) -> list[int]:
    out = []
    while n:
        n, r = divmod(n, p)
        out.append(r)
    return out


@lru_cache(maxsize=64)
def _factorials_mod(p: int) -> tuple[int, ...]:
    f = [1] * p
    for i in range(1, p):
        f[i] = f[i - 1] * i % p
    return tuple(f)


def multinomial_mod_p(parts: Sequence[int], p: int) -> PrimeFieldElement:
    """``(sum parts)! / prod(parts!)`` mod p, computed digit by digit in base p.

    By Lucas' theorem the coefficient factors over base-p digit positions and
    vanishes as soon as adding the parts produces a carry.
    """
    p = check_prime(p)
    parts = [int(x) for x in parts]
    if not parts:
        raise ValueError("parts must be nonempty")
    if any(x < 0 for x in parts):
        raise ValueError("parts must be nonnegative")
    digit_lists = [_digits(x, p) for x in parts]
    width = max((len(d) for d in digit_lists), default=0)
    fact = _factorials_mod(p) if p < 1_000_000 else None
    result = 1
    for pos in range(width):
        ds = [d[pos] if pos < len(d) else 0 for d in digit_lists]
        s = sum(ds)
        if s >= p:
            return PrimeFieldElement(0, p)
        if fact is not None:
            num, den = fact[s], 1
            for x in ds:
                den = den * fact[x] % p
        else:
            num = _fact_mod(s, p)
            den = 1
            for x in ds:
                den = den * _fact_mod(x, p) % p
        result = result * num * pow(den, -1, p) % p
    return PrimeFieldElement(result, p)


def _fact_mod(n: int, p: int) -> int:
    r = 1
    for i in range(2, n + 1):
        r = r * i % p
    return r


@dataclass(frozen=True)
class KernelChain:
    """Kernel dimensions of successive composites of a chain of maps.

    ``dims[i]`` is the nullity of the composite of the first ``i + 1`` maps.
    ``full_at`` is the number of steps after which the kernel is the whole
    source space, if that happened.
    """

    dims: tuple[int, ...]
    ambient: int
    stabilized: bool = False
    full_at: int | None = None

    def __post_init__(self):
        if any(b < a for a, b in zip(self.dims, self.dims[1:])):
            raise ValueError(f"kernel dimensions must be nondecreasing: {self.dims}")
        if self.full_at is not None and self.dims[self.full_at - 1] != self.ambient:
            raise ValueError("full_at does not match dims")

    @property
    def steps(self) -> int:
        return len(self.dims)

    def nullity(self, e: int) -> int:
        """Nullity after ``e`` steps (0 for the empty composite)."""
        if e == 0:
            return 0
        return self.dims[e - 1]


def iterate_kernel_chain(maps: Sequence[PrimeFieldMatrix], max_e: int) -> KernelChain:
    """Track ``dim ker(maps[e-1] @ ... @ maps[0])`` for ``e = 1 .. max_e``.

    Stops early once the kernel fills the source space.
    """
    if not maps:
        raise ValueError("need at least one map")
    for i, (a, b) in enumerate(zip(maps, maps[1:])):
        if a.rows != b.cols:
            raise ValueError(f"map {i} has {a.rows} rows but map {i + 1} has {b.cols} columns")
    ambient = maps[0].cols
    steps = min(max_e, len(maps))
    dims: list[int] = []
    full_at = None
    composite = None
    for e in range(steps):
        composite = maps[e] if composite is None else maps[e] @ composite
        dims.append(composite.nullity())
        if dims[-1] == ambient:
            full_at = e + 1
            break
    same_endo = maps[0].is_square() and all(m == maps[0] for m in maps[1:steps])
    stabilized = full_at is not None or (
        same_endo and len(dims) >= 2 and dims[-1] == dims[-2]
    )
    return KernelChain(tuple(dims), ambient, stabilized, full_at)


def endo_nilpotence_index(m: PrimeFieldMatrix) -> int | None:
    """Least ``e`` with ``m**e == 0``, or None if ``m`` is not nilpotent.

    A nilpotent ``D x D`` matrix satisfies ``m**D == 0``, so at most ``D``
    powers are examined.  The empty matrix has index 0.
    """
    if not m.is_square():
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    d = m.rows
    if d == 0:
        return 0
    power = m
    prev_rank = d
    for e in range(1, d + 1):
        if power.is_zero():
            return e
        # rank drops strictly until stabilisation (Fitting)
        if power.rank() == prev_rank:
            return None
        prev_rank = power.rank()
        power = power @ m
    return None


def fitting_data(m: PrimeFieldMatrix) -> tuple[int, int]:
    """Return ``(stable_nullity, hsl)`` for a square matrix.

    ``stable_nullity`` is ``dim ker m**D``; ``hsl`` is the least ``e`` with
    ``ker m**e == ker m**D`` (0 when ``m`` is injective).
    """
    if not m.is_square():
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    d = m.rows
    nulls = [0]
    power = None
    for _ in range(d):
        power = m if power is None else power @ m
        nulls.append(power.nullity())
        if nulls[-1] == nulls[-2]:
            break
    stable = nulls[-1]
    return stable, nulls.index(stable)
