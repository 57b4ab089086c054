"""Projective linear algebra over a dual exact/float scalar.

Scalars are plain Python numbers: ``fractions.Fraction`` (or ``int``) in
exact mode, ``float`` in float mode.  The mode tag is the type itself.
Matrices and points carry their scalars in numpy arrays -- ``object`` dtype
for exact entries, ``float64`` for floats -- so that ``@`` threads exact
arithmetic through compositions without rounding.

Everything here is a value: construction copies, arrays are frozen, and all
operations are pure, so instances are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DEFAULT_TOL = 1e-9

# condition-number ceiling before float inversion is refused
COND_LIMIT = 1e13


class DimensionMismatch(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


class ExactModeError(ValueError):
    """Raised when an operation only defined in float mode gets exact input."""


def is_exact(x) -> bool:
    """True for scalars that support +,-,*,/ without rounding."""
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def parse_scalar(s):
    """JSON scalar decoding: strings "p/q" are exact, ints exact, floats float."""
    if isinstance(s, str):
        return Fraction(s)
    if isinstance(s, bool):
        raise ValueError(f"not a scalar: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, float):
        return s
    raise ValueError(f"not a scalar: {s!r}")


def scalar_to_json(x):
    """JSON scalar encoding: exact as "p/q" strings, floats as numbers."""
    if is_exact(x):
        return str(Fraction(x))
    return float(x)


def _coerce_entries(rows) -> np.ndarray:
    """Nested sequence -> frozen numpy array, object/Fraction or float64."""
    arr = np.array(rows, dtype=object)
    flat = arr.ravel()
    if all(is_exact(x) for x in flat):
        out = np.array([[Fraction(x) for x in row] for row in arr.reshape(arr.shape[0], -1)],
                       dtype=object).reshape(arr.shape)
    else:
        out = np.array(rows, dtype=np.float64)
    out.setflags(write=False)
    return out


def _coerce_vector(coords) -> np.ndarray:
    arr = list(coords)
    if all(is_exact(x) for x in arr):
        out = np.array([Fraction(x) for x in arr], dtype=object)
    else:
        out = np.array([float(x) for x in arr], dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """Point of projective n-space: n+1 homogeneous coordinates, not all zero.

    Two points are equal iff their coordinate vectors are proportional by a
    nonzero scalar; use :func:`proj_equiv`, not ``==``.
    """

    coords: np.ndarray

    def __init__(self, coords):
        vec = _coerce_vector(coords)
        if vec.shape[0] < 2:
            raise ValueError("projective point needs at least 2 coordinates")
        if all(x == 0 for x in vec):
            raise ValueError("projective point cannot be the zero vector")
        object.__setattr__(self, "coords", vec)

    @property
    def n(self) -> int:
        return self.coords.shape[0] - 1

    @property
    def exact(self) -> bool:
        return self.coords.dtype == object

    def chart(self) -> np.ndarray:
        """Affine-chart coordinates (divide by last entry), length n.

        Raises if the point lies on the hyperplane at infinity of the chart.
        """
        last = self.coords[-1]
        if last == 0:
            raise ValueError("point is outside the affine chart (last coordinate zero)")
        return np.array([c / last for c in self.coords[:-1]],
                        dtype=object if self.exact else np.float64)

    def to_float(self) -> "ProjPoint":
        return ProjPoint([float(c) for c in self.coords])

    def __repr__(self):
        return f"ProjPoint({list(self.coords)})"


@dataclass(frozen=True, eq=False)
class ProjMap:
    """Invertible (n+1)x(n+1) matrix regarded up to nonzero global scale."""

    entries: np.ndarray

    def __init__(self, entries):
        mat = _coerce_entries(entries)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"projective map must be square, got shape {mat.shape}")
        if mat.shape[0] < 2:
            raise ValueError("projective map must be at least 2x2")
        object.__setattr__(self, "entries", mat)

    @classmethod
    def identity(cls, n: int, exact: bool = True) -> "ProjMap":
        size = n + 1
        if exact:
            rows = [[Fraction(1) if i == j else Fraction(0) for j in range(size)]
                    for i in range(size)]
            return cls(rows)
        return cls(np.eye(size))

    @classmethod
    def diagonal(cls, diag) -> "ProjMap":
        d = list(diag)
        rows = [[d[i] if i == j else 0 for j in range(len(d))] for i in range(len(d))]
        return cls(rows)

    @property
    def n(self) -> int:
        return self.entries.shape[0] - 1

    @property
    def exact(self) -> bool:
        return self.entries.dtype == object

    def to_float(self) -> "ProjMap":
        return ProjMap(np.array(self.entries, dtype=np.float64))

    def __matmul__(self, other):
        if isinstance(other, ProjMap):
            return compose(self, other)
        if isinstance(other, ProjPoint):
            return act(self, other)
        return NotImplemented

    def __repr__(self):
        return f"ProjMap(n={self.n}, exact={self.exact})"


def matrix_to_json(m: ProjMap) -> list:
    """Row-major nested lists; exact entries as "p/q" strings, floats as numbers."""
    return [[scalar_to_json(x) for x in row] for row in m.entries]


def matrix_from_json(rows) -> ProjMap:
    return ProjMap([[parse_scalar(x) for x in row] for row in rows])


def compose(a: ProjMap, b: ProjMap) -> ProjMap:
    """Matrix product a.b; acts as 'apply b, then a'."""
    if a.n != b.n:
        raise DimensionMismatch(f"cannot compose maps of dimension {a.n} and {b.n}")
    return ProjMap(a.entries @ b.entries)


def det(a: ProjMap):
    """Determinant in the matrix's own arithmetic."""
    if not a.exact:
        return float(np.linalg.det(a.entries))
    return _exact_det(a.entries)


def _exact_det(mat: np.ndarray) -> Fraction:
    m = [list(row) for row in mat]
    size = len(m)
    result = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        result *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, size):
            if m[r][col] != 0:
                factor = m[r][col] * inv
                for c in range(col, size):
                    m[r][c] -= factor * m[col][c]
    return result


def _exact_inverse(mat: np.ndarray) -> np.ndarray:
    """Gauss-Jordan over Fraction; raises SingularMatrix on zero determinant."""
    size = mat.shape[0]
    m = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(size)]
         for i, row in enumerate(mat)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix("matrix is singular (exact determinant zero)")
        m[col], m[pivot] = m[pivot], m[col]
        inv = Fraction(1) / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(size):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    out = np.array([row[size:] for row in m], dtype=object)
    return out


def inverse(a: ProjMap) -> ProjMap:
    if a.exact:
        return ProjMap(_exact_inverse(a.entries))
    cond = np.linalg.cond(a.entries)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMatrix(
            f"matrix is numerically singular (condition estimate {cond:.3e})")
    return ProjMap(np.linalg.inv(a.entries))


def act(a: ProjMap, p: ProjPoint) -> ProjPoint:
    """Apply the map to a point; float results are renormalized by their
    largest-magnitude entry for stability."""
    if a.n != p.n:
        raise DimensionMismatch(f"map dimension {a.n} != point dimension {p.n}")
    vec = a.entries @ p.coords
    if a.exact and p.exact:
        if all(x == 0 for x in vec):
            raise SingularMatrix("map sent a point to zero; matrix not invertible")
        return ProjPoint(vec)
    vec = np.asarray(vec, dtype=np.float64)
    scale = np.max(np.abs(vec))
    if scale == 0 or not np.isfinite(scale):
        raise SingularMatrix("map sent a point to zero or overflowed")
    return ProjPoint(vec / scale)


def _flatten(x) -> np.ndarray:
    if isinstance(x, ProjMap):
        return x.entries.ravel()
    if isinstance(x, ProjPoint):
        return x.coords
    raise TypeError(f"expected ProjMap or ProjPoint, got {type(x).__name__}")


def proj_equiv(a, b, tol: float = DEFAULT_TOL) -> bool:
    """True iff a and b are proportional by a nonzero scalar.

    Exact inputs are compared by cross-multiplication; float inputs are
    normalized by their largest-magnitude entry and compared within tol.
    """
    if type(a) is not type(b):
        raise TypeError("proj_equiv compares two maps or two points")
    va, vb = _flatten(a), _flatten(b)
    if va.shape != vb.shape:
        raise DimensionMismatch("shapes differ")
    if va.dtype == object and vb.dtype == object:
        ia = next((i for i, x in enumerate(va) if x != 0), None)
        ib = next((i for i, x in enumerate(vb) if x != 0), None)
        if ia != ib:
            return False
        if ia is None:
            return True
        return all(va[ia] * vb[j] == vb[ia] * va[j] for j in range(len(va)))
    fa = np.asarray(va, dtype=np.float64)
    fb = np.asarray(vb, dtype=np.float64)
    idx = int(np.argmax(np.abs(fa)))
    max_b = np.max(np.abs(fb))
    if max_b == 0:
        return bool(np.max(np.abs(fa)) == 0)
    if abs(fb[idx]) < tol * max_b:
        return False
    return bool(np.max(np.abs(fa / fa[idx] - fb / fb[idx])) <= tol)


@dataclass(frozen=True)
class EigenPair:
    value: complex
    vector: np.ndarray          # unit-normalized, complex
    multiplicity: int           # algebraic, from clustering
    residual: float             # ||A v - lambda v||_2


def eigen(a: ProjMap, tol: float = DEFAULT_TOL) -> list[EigenPair]:
    """Eigenvalues (|.|-descending) with eigenvectors and residuals.

    Float mode only: exact eigenvalues of the matrices treated here are read
    off their triangular forms instead of computed.
    """
    if a.exact:
        raise ExactModeError(
            "eigenanalysis runs in float mode only; convert with .to_float() "
            "or read eigenvalues off the triangular form")
    mat = a.entries
    try:
        values, vectors = np.linalg.eig(mat)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(f"eigenvalue iteration failed: {exc}") from exc
    order = np.argsort(-np.abs(values), kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    scale = max(np.max(np.abs(values)), 1.0)
    mults = []
    for lam in values:
        mults.append(int(np.sum(np.abs(values - lam) <= tol * scale)))
    out = []
    for k, lam in enumerate(values):
        v = vectors[:, k]
        v = v / np.linalg.norm(v)
        res = float(np.linalg.norm(mat @ v - lam * v))
        out.append(EigenPair(complex(lam), v, mults[k], res))
    return out
