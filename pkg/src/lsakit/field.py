"""Exact scalars and dense linear algebra over Q and prime fields.

Elements are stored "raw" inside numpy arrays: :class:`fractions.Fraction`
objects (object dtype) over Q, and residues in ``[0, p)`` (int64) over F_p.
Every array operation goes through :meth:`FieldSpec.reduce` so the stored
values stay canonical.  Linear maps are stored as matrices whose column ``j``
is the image of basis vector ``j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import DivisionByZero, FieldMismatch, NoSolution, NotInvertible, ParseError

MAX_PRIME = 65521


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``kind="rational"``) or F_p (``kind="prime"``)."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "rational":
            if self.p is not None:
                raise ValueError("the rational field takes no modulus")
        elif self.kind == "prime":
            if not isinstance(self.p, int) or not _is_prime(self.p) or self.p > MAX_PRIME:
                raise ValueError(f"prime field needs a prime 2 <= p <= {MAX_PRIME}, got {self.p!r}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("rational")

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls("prime", p)

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        """Parse ``rational``/``Q`` or ``prime:P``/``F_P``."""
        t = text.strip()
        if t.lower() in ("rational", "rationals", "q"):
            return cls.rationals()
        for prefix in ("prime:", "F_", "GF"):
            if t.startswith(prefix):
                try:
                    return cls.prime(int(t[len(prefix):]))
                except ValueError as exc:
                    raise ParseError(str(exc), "field") from None
        raise ParseError(f"cannot parse field {text!r}", "field")

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    def __str__(self):
        return f"F_{self.p}" if self.is_prime else "Q"

    def to_json(self) -> dict:
        return {"kind": "prime", "p": self.p} if self.is_prime else {"kind": "rational"}

    @classmethod
    def from_json(cls, obj, location="field") -> FieldSpec:
        if not isinstance(obj, dict):
            raise ParseError("field must be an object", location)
        extra = set(obj) - {"kind", "p"}
        if extra:
            raise ParseError(f"unknown keys {sorted(extra)}", location)
        try:
            if obj.get("kind") == "prime":
                return cls.prime(obj.get("p"))
            if obj.get("kind") == "rational" and "p" not in obj:
                return cls.rationals()
        except ValueError as exc:
            raise ParseError(str(exc), location) from None
        raise ParseError(f"bad field {obj!r}", location)

    # -- raw scalars ------------------------------------------------------

    @property
    def zero(self):
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_prime else Fraction(1)

    @property
    def size(self) -> int | None:
        return self.p if self.is_prime else None

    def __call__(self, value):
        """Coerce an int, Fraction, decimal string, or Scalar to a canonical raw element."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"{value.field} element used in {self}")
            return value.value
        if isinstance(value, str):
            return self.parse_scalar(value)
        if isinstance(value, np.ndarray) and value.ndim == 0:
            value = value[()]
        if isinstance(value, (bool, np.bool_)):
            value = int(value)
        if isinstance(value, np.integer):
            value = int(value)
        if isinstance(value, int):
            return value % self.p if self.is_prime else Fraction(value)
        if isinstance(value, Fraction):
            if not self.is_prime:
                return value
            if value.denominator % self.p == 0:
                raise DivisionByZero(f"denominator of {value} vanishes in {self}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        raise TypeError(f"cannot interpret {value!r} as an element of {self}")

    def parse_scalar(self, text: str):
        try:
            return self(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad scalar {text!r}: {exc}") from None

    def format(self, x) -> str:
        if self.is_prime:
            return str(int(x))
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def add(self, a, b):
        return (a + b) % self.p if self.is_prime else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.is_prime else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.is_prime else a * b

    def neg(self, a):
        return (-a) % self.p if self.is_prime else -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in {self}")
        return pow(int(a), -1, self.p) if self.is_prime else 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self) -> range:
        if not self.is_prime:
            raise ValueError("the rationals cannot be enumerated")
        return range(self.p)

    # -- arrays ---------------------------------------------------------

    @property
    def dtype(self):
        return np.int64 if self.is_prime else object

    def array(self, data) -> np.ndarray:
        """Canonical array from nested sequences of ints/Fractions/strings."""
        raw = np.array(data, dtype=object)
        out = np.empty(raw.shape, dtype=object)
        for idx in np.ndindex(raw.shape):
            out[idx] = self(raw[idx])
        return out.astype(np.int64) if self.is_prime else out

    def zeros(self, shape) -> np.ndarray:
        if self.is_prime:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def reduce(self, arr):
        if self.is_prime:
            arr = np.asarray(arr, dtype=np.int64)
            if self.p == 2:
                # two's complement makes this correct for negatives too
                return arr & 1
            return arr % self.p
        return arr

    def convert(self, arr, source: FieldSpec) -> np.ndarray:
        """Map an array over ``source`` into this field (Q -> F_p reduces)."""
        if source == self:
            return arr
        if source.is_prime:
            raise FieldMismatch(f"cannot map {source} into {self}")
        return self.array(arr)

    def ein(self, spec: str, *ops) -> np.ndarray:
        """``np.einsum`` with implicit leading batch axes, reduced into the field.

        At most two operands, so int64 intermediates stay below (p-1)^2 * n.
        """
        if len(ops) > 2:
            raise ValueError("contract at most two operands at a time")
        ins, out = spec.split("->")
        full = ",".join("..." + s for s in ins.split(",")) + "->..." + out
        return self.reduce(np.einsum(full, *ops))

    def times(self, a, b):
        """Elementwise (broadcast) product, reduced."""
        return self.reduce(np.multiply(a, b))

    def check_array(self, arr, location="array"):
        if self.is_prime:
            if np.asarray(arr).dtype != np.int64:
                raise FieldMismatch(f"{location}: expected residues of {self}")
        elif np.asarray(arr).dtype != object:
            raise FieldMismatch(f"{location}: expected rationals")


QQ = FieldSpec.rationals()


@dataclass(frozen=True)
class Scalar:
    """A field element in canonical form, with operator overloading."""

    field: FieldSpec
    value: object

    @classmethod
    def of(cls, field: FieldSpec, value) -> Scalar:
        return cls(field, field(value))

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        return self.field(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return Scalar(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def inverse(self) -> Scalar:
        return Scalar(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"Scalar({self.field}, {self})"


def scalar_arith(op: str, a: Scalar, b: Scalar | None = None):
    """Dispatch a named field operation (``add``, ``inv``, ``eq``, ...)."""
    if b is not None and a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    unary = {"neg": lambda: -a, "inv": a.inverse}
    binary = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
        "eq": lambda: a == b,
    }
    if op in unary:
        return unary[op]()
    if op in binary:
        if b is None:
            raise TypeError(f"{op} needs two operands")
        return binary[op]()
    raise ValueError(f"unknown operation {op!r}")


# -- dense linear algebra -------------------------------------------------


def _rows(F: FieldSpec, M) -> list[list]:
    M = np.asarray(M)
    return [[F(M[i, j]) for j in range(M.shape[1])] for i in range(M.shape[0])]


def rref(F: FieldSpec, M) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; pivots taken as the first nonzero entry in column order."""
    R = _rows(F, M)
    nrows = len(R)
    ncols = len(R[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if R[i][c] != 0), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = F.inv(R[r][c])
        R[r] = [F.mul(inv, v) for v in R[r]]
        for i in range(nrows):
            if i != r and R[i][c] != 0:
                factor = R[i][c]
                R[i] = [F.sub(v, F.mul(factor, w)) for v, w in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return R, pivots


def mat_rank(F: FieldSpec, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def nullspace(F: FieldSpec, M) -> list[np.ndarray]:
    M = np.asarray(M)
    ncols = M.shape[1]
    if M.shape[0] == 0:
        return [F.eye(ncols)[:, j] for j in range(ncols)]
    R, pivots = rref(F, M)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = F.zeros(ncols)
        v[free] = F.one
        for row, pc in enumerate(pivots):
            v[pc] = F.neg(R[row][free])
        basis.append(v)
    return basis


def mat_solve(F: FieldSpec, A, b) -> tuple[np.ndarray, list[np.ndarray]]:
    """Solve ``A v = b`` exactly: one particular solution plus a kernel basis.

    Raises :class:`NoSolution` for an inconsistent system.
    """
    A = np.asarray(A)
    b = np.asarray(b)
    F.check_array(A, "A")
    F.check_array(b, "b")
    rows, cols = A.shape
    if b.shape != (rows,):
        raise ValueError(f"right-hand side has shape {b.shape}, expected ({rows},)")
    aug = np.concatenate([A, b.reshape(rows, 1)], axis=1) if rows else F.zeros((0, cols + 1))
    kernel = nullspace(F, A) if rows else [F.eye(cols)[:, j] for j in range(cols)]
    solution = F.zeros(cols)
    if rows == 0:
        return solution, kernel
    R, pivots = rref(F, aug)
    if cols in pivots:
        raise NoSolution("inconsistent system")
    for row, pc in enumerate(pivots):
        solution[pc] = R[row][cols]
    return solution, kernel


def mat_invert(F: FieldSpec, A) -> np.ndarray:
    A = np.asarray(A)
    F.check_array(A, "A")
    n, m = A.shape
    if n != m:
        raise ValueError("only square matrices can be inverted")
    if n == 0:
        return F.zeros((0, 0))
    R, pivots = rref(F, np.concatenate([A, F.eye(n)], axis=1))
    if pivots[:n] != list(range(n)):
        raise NotInvertible(f"matrix has rank < {n}")
    return F.array([row[n:] for row in R])


def mat_mul(F: FieldSpec, A, B) -> np.ndarray:
    return F.ein("ij,jk->ik", A, B)


def is_invertible(F: FieldSpec, A) -> bool:
    A = np.asarray(A)
    return A.shape[0] == A.shape[1] and mat_rank(F, A) == A.shape[0]


def digits(F: FieldSpec, start: int, stop: int, width: int) -> np.ndarray:
    """Base-p digit rows for indices ``start..stop-1``, most significant digit first.

    Row ``k`` is the ``start + k``-th tuple of F_p^width in lexicographic order.
    """
    idx = np.arange(start, stop, dtype=np.int64)
    powers = F.p ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % F.p


def all_matrices(F: FieldSpec, rows: int, cols: int) -> np.ndarray:
    """Every rows x cols matrix over F_p, lexicographic in row-major entries."""
    count = F.p ** (rows * cols)
    return digits(F, 0, count, rows * cols).reshape(count, rows, cols)


def general_linear_group(F: FieldSpec, n: int) -> np.ndarray:
    """All invertible n x n matrices over F_p, in lexicographic order."""
    mats = all_matrices(F, n, n)
    keep = [k for k in range(len(mats)) if mat_rank(F, mats[k]) == n]
    return mats[keep]


def gl_order(p: int, n: int) -> int:
    order = 1
    for k in range(n):
        order *= p**n - p**k
    return order


def iter_vectors(F: FieldSpec, n: int) -> Iterator[tuple]:
    return itertools.product(F.elements(), repeat=n)


def as_vector(F: FieldSpec, coords: Sequence) -> np.ndarray:
    return F.array(list(coords))
