"""Classification of bent rectangular cusp groups.

Starting data is a rectangular cusp shape: one positive constant b_i per
generator (i = 2..n) and a nonnegative bending parameter s_i per slot.  The
standard generators are commuting unipotent translations; bending multiplies
generator i by the diagonal one-parameter centralizer with mu_i = exp(s_i)
in position i.

A bent generator acquires the eigenvalue mu_i, with new eigenvector in the
plane of coordinates {1, i}.  The normalizing change of basis fixes the
first coordinate, sends that eigenvector to the i-th basis vector, and acts
dually on the corresponding covectors; conjugating by it reduces each bent
generator to a sparse normal form whose corner entry is the exact rational

    -b_i^2 (mu_i + 1) / (2 (mu_i - 1))

while unbent generators are untouched.  Dividing the corner by -s_i gives
the cusp-parameter entry for that slot,

    a_i = b_i^2 (mu_i + 1) / (2 (mu_i - 1) s_i),

so the bent group sits inside the model translation group for the parameter
collecting the a_i (sorted non-increasing); its type equals the number of
nonzero bending parameters.  Note a_i blows up as s_i -> 0+: the inverted
parameters 1/a_i extend continuously by 0 across type changes, which is why
sweeps report both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .cusp_models import CuspParameter, ModelDomain, leaf_coordinate, leaf_point
from .projlin import (
    DEFAULT_TOL,
    ProjMap,
    act,
    compose,
    inverse,
    is_exact,
    matrix_to_json,
    scalar_to_json,
)

# smallest nonzero bending parameter classified in float mode; below this the
# new eigenvector degenerates and callers should supply exact mu instead
MIN_BEND_FLOAT = 1e-8


class PatternMismatch(ValueError):
    """Conjugated generators failed to match the expected normal form."""

    def __init__(self, message: str, residual):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class RectangularCuspData:
    """Cusp-shape constants b_2..b_n (> 0) and bending parameters s_2..s_n
    (>= 0), with optional exact multipliers mu_i = exp(s_i)."""

    n: int
    b: tuple
    s: tuple
    mu: tuple

    def __init__(self, n: int, b, s=None, mu=None):
        if n < 2:
            raise ValueError("need dimension n >= 2")
        b = tuple(b)
        if len(b) != n - 1:
            raise ValueError(f"need {n - 1} shape constants, got {len(b)}")
        if any(x <= 0 for x in b):
            raise ValueError("shape constants must be positive")
        if s is None and mu is None:
            raise ValueError("supply bending parameters s, multipliers mu, or both")
        if s is None:
            s = tuple(math.log(float(m)) for m in mu)
        else:
            s = tuple(s)
        if len(s) != n - 1:
            raise ValueError(f"need {n - 1} bending parameters, got {len(s)}")
        if any(x < 0 for x in s):
            raise ValueError("bending parameters must be nonnegative")
        if mu is None:
            mu = tuple(1 if x == 0 else math.exp(float(x)) for x in s)
        else:
            mu = tuple(mu)
            if len(mu) != n - 1:
                raise ValueError(f"need {n - 1} multipliers, got {len(mu)}")
            if any(m <= 0 for m in mu):
                raise ValueError("multipliers must be positive")
            for k, (m, x) in enumerate(zip(mu, s)):
                if abs(float(m) - math.exp(float(x))) > 1e-12 * max(1.0, float(m)):
                    raise ValueError(
                        f"mu_{k+2} = {m} inconsistent with exp(s_{k+2}) = {math.exp(float(x))}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "mu", mu)

    @property
    def exact(self) -> bool:
        return all(is_exact(x) for x in self.b + self.mu)

    def bent_slots(self) -> list[int]:
        """0-based slots with nonzero bending (generator index = slot + 2)."""
        return [k for k in range(self.n - 1) if self.mu[k] != 1]


@dataclass(frozen=True)
class ClassifiedCusp:
    psi: CuspParameter
    type: int
    conjugator: ProjMap
    residual: object

    def to_json(self) -> dict:
        return {
            "psi": [scalar_to_json(x) for x in self.psi.psi],
            "type": self.type,
            "residual": scalar_to_json(self.residual),
            "conjugator": matrix_to_json(self.conjugator),
        }


def _zero_one(exact: bool):
    return (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)


def standard_cusp_generators(data: RectangularCuspData) -> list[ProjMap]:
    """Unbent generators: unipotent, pairwise commuting, generator i
    translating by b_i along coordinate i."""
    n = data.n
    zero, one = _zero_one(all(is_exact(x) for x in data.b))
    out = []
    for k, b in enumerate(data.b):
        i = k + 1                      # matrix index of coordinate i = k + 2
        rows = [[zero] * (n + 1) for _ in range(n + 1)]
        for j in range(n + 1):
            rows[j][j] = one
        rows[0][i] = b
        rows[i][n] = b
        rows[0][n] = b * b / 2
        out.append(ProjMap(rows))
    return out


def bent_cusp_generators(data: RectangularCuspData) -> list[ProjMap]:
    """Generators after bending: the diagonal factor with mu_i in position i
    times the standard generator."""
    n = data.n
    zero, one = _zero_one(data.exact)
    out = []
    for k, g in enumerate(standard_cusp_generators(data)):
        mu = data.mu[k]
        if mu == 1:
            out.append(g)
            continue
        diag = [one] * (n + 1)
        diag[k + 1] = mu
        out.append(compose(ProjMap.diagonal(diag), g))
    return out


def _check_float_guard(data: RectangularCuspData) -> None:
    if data.exact:
        return
    for k in data.bent_slots():
        if abs(float(data.s[k])) < MIN_BEND_FLOAT:
            raise ValueError(
                f"bending parameter s_{k+2} = {data.s[k]} is below {MIN_BEND_FLOAT}; "
                "float classification is ill-conditioned there, supply exact mu instead")


def normalizing_matrix(data: RectangularCuspData) -> ProjMap:
    """Change of basis fixing e_1 that carries each bent generator's new
    eigenvector to its own basis vector (and dually); identity on unbent
    coordinates."""
    _check_float_guard(data)
    n = data.n
    zero, one = _zero_one(data.exact)
    rows = [[zero] * (n + 1) for _ in range(n + 1)]
    for j in range(n + 1):
        rows[j][j] = one
    for k in data.bent_slots():
        b, mu = data.b[k], data.mu[k]
        denom = mu - one
        rows[0][k + 1] = -b / denom
        rows[k + 1][n] = mu * b / denom
    return ProjMap(rows)


def _normalizing_inverse(data: RectangularCuspData) -> ProjMap:
    """Closed-form inverse of the normalizing matrix.

    Writing A = I + C with C supported on row 1 (bent columns) and the last
    column (bent rows), C^3 = 0, so A^{-1} = I - C + C^2 and C^2 is the
    single corner entry sum(alpha_k * delta_k).  The generic float inverse
    would needlessly refuse this matrix for tiny bending parameters.
    """
    n = data.n
    zero, one = _zero_one(data.exact)
    rows = [[zero] * (n + 1) for _ in range(n + 1)]
    for j in range(n + 1):
        rows[j][j] = one
    corner = zero
    for k in data.bent_slots():
        b, mu = data.b[k], data.mu[k]
        denom = mu - one
        alpha = -b / denom
        delta = mu * b / denom
        rows[0][k + 1] = -alpha
        rows[k + 1][n] = -delta
        corner = corner + alpha * delta
    rows[0][n] = corner
    return ProjMap(rows)


def expected_corner(b, mu):
    """Corner entry of the normal form of a bent generator."""
    return -b * b * (mu + 1) / (2 * (mu - 1))


def cusp_parameter_entry(b, mu, s) -> float:
    """Cusp-parameter value contributed by a bent slot: -corner / s."""
    return float(expected_corner(float(b), float(mu))) / -float(s)


def _expected_normal_form(data: RectangularCuspData, k: int) -> ProjMap:
    n = data.n
    zero, one = _zero_one(data.exact)
    rows = [[zero] * (n + 1) for _ in range(n + 1)]
    for j in range(n + 1):
        rows[j][j] = one
    mu = data.mu[k]
    if mu == 1:
        b = data.b[k]
        rows[0][k + 1] = b
        rows[k + 1][n] = b
        rows[0][n] = b * b / 2
    else:
        rows[k + 1][k + 1] = mu
        rows[0][n] = expected_corner(data.b[k], mu)
    return ProjMap(rows)


def _pattern_residual(got: ProjMap, want: ProjMap):
    """Entrywise deviation, scaled by the expected matrix's magnitude: the
    normal form's corner grows like 1/s, so an absolute comparison would
    drown legitimate matches for small bending parameters."""
    if got.exact and want.exact:
        return max((abs(x - y) for x, y in
                    zip(got.entries.ravel(), want.entries.ravel())), default=Fraction(0))
    fg = np.asarray(got.to_float().entries, dtype=np.float64)
    fw = np.asarray(want.to_float().entries, dtype=np.float64)
    scale = max(1.0, float(np.max(np.abs(fw))))
    return float(np.max(np.abs(fg - fw))) / scale


def conjugate_and_match(data: RectangularCuspData,
                        tol: float = DEFAULT_TOL) -> ClassifiedCusp:
    """Conjugate the bent generators into normal form, verify the pattern,
    and read off the cusp parameter.

    Exact data must match exactly (zero residual); float data must match
    within tol.  The conjugator composes the normalizing change of basis
    with the coordinate permutation sorting the parameter non-increasing.
    """
    _check_float_guard(data)
    n = data.n
    gens = bent_cusp_generators(data)
    a_mat = normalizing_matrix(data)
    a_inv = _normalizing_inverse(data)
    residual = Fraction(0) if data.exact else 0.0
    conjugated = []
    for k, g in enumerate(gens):
        got = compose(compose(a_mat, g), a_inv)
        want = _expected_normal_form(data, k)
        diff = _pattern_residual(got, want)
        residual = max(residual, diff)
        conjugated.append(got)
    if data.exact:
        if residual != 0:
            raise PatternMismatch(
                f"exact conjugation failed to reach the normal form (residual {residual})",
                residual)
    elif residual > tol:
        raise PatternMismatch(
            f"conjugated generators miss the normal form by {residual:.3e} > {tol:.1e}",
            residual)

    bent = data.bent_slots()
    avals = {k: cusp_parameter_entry(data.b[k], data.mu[k], data.s[k]) for k in bent}
    sorted_bent = sorted(bent, key=lambda k: -avals[k])
    order = sorted_bent + [k for k in range(n - 1) if k not in bent]
    psi = CuspParameter([avals[k] for k in sorted_bent] + [0.0] * (n - len(bent)))

    perm = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    perm[0][0] = Fraction(1)
    perm[n][n] = Fraction(1)
    for new, old in enumerate(order):
        perm[1 + new][1 + old] = Fraction(1)
    p_mat = ProjMap(perm)
    return ClassifiedCusp(psi, len(bent), compose(p_mat, a_mat), residual)


@dataclass(frozen=True)
class LeafInvarianceReport:
    trials: int
    max_drift: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_drift <= self.tol


def leaf_invariance_check(data: RectangularCuspData, trials: int = 200,
                          tol: float = DEFAULT_TOL,
                          rng: Optional[np.random.Generator] = None) -> LeafInvarianceReport:
    """Random leaf points stay on their leaf under every conjugated
    generator; reports the maximum leaf-coordinate drift."""
    rng = rng or np.random.default_rng(0)
    classified = conjugate_and_match(data, tol=max(tol, 1e-9))
    psi = CuspParameter([float(x) for x in classified.psi.psi])
    dom = ModelDomain(psi)
    t = psi.type
    conj = classified.conjugator.to_float()
    conj_inv = inverse(conj)
    gens = [compose(compose(conj, g.to_float()), conj_inv)
            for g in bent_cusp_generators(data)]
    max_drift = 0.0
    for _ in range(trials):
        c = float(rng.uniform(0.0, 3.0))
        coords = [float(rng.uniform(0.2, 3.0)) for _ in range(t)] + \
                 [float(rng.uniform(-2.0, 2.0)) for _ in range(psi.n - 1 - t)]
        p = leaf_point(dom, c, coords)
        g = gens[rng.integers(len(gens))]
        c2, _ = leaf_coordinate(dom, act(g, p))
        max_drift = max(max_drift, abs(float(c2) - c))
    return LeafInvarianceReport(trials, max_drift, tol)


def equivalent_parameters(psi: CuspParameter, psi2: CuspParameter,
                          tol: float = DEFAULT_TOL) -> bool:
    """True iff the parameters differ by a positive scalar."""
    if psi.n != psi2.n:
        raise ValueError(f"dimension mismatch: {psi.n} vs {psi2.n}")
    a, b = psi.psi, psi2.psi
    if all(is_exact(x) for x in a + b):
        if any((x == 0) != (y == 0) for x, y in zip(a, b)):
            return False
        pairs = [(x, y) for x, y in zip(a, b) if x != 0]
        if not pairs:
            return True
        x0, y0 = pairs[0]
        return all(x * y0 == y * x0 for x, y in pairs)
    fa = np.asarray([float(x) for x in a])
    fb = np.asarray([float(x) for x in b])
    na, nb = fa.max(initial=0.0), fb.max(initial=0.0)
    if na == 0.0 or nb == 0.0:
        return bool(na == nb)
    return bool(np.max(np.abs(fa / na - fb / nb)) <= tol)


def classify_h_form(gens: Sequence[ProjMap], tol: float = DEFAULT_TOL) -> ClassifiedCusp:
    """Read the cusp parameter off generators already presented in the model
    block form (leading diagonal block, trailing translation block).

    The diagonal slots and corner entries of the generators give one linear
    equation per generator for the parameter; a least-squares solve recovers
    it.  The reported residual combines the block-pattern deviation and the
    equation misfit.  This is deliberately narrow: it classifies groups in
    (or numerically near) the model form, not arbitrary matrix groups.
    """
    if not gens:
        raise ValueError("need at least one generator")
    size = gens[0].entries.shape[0]
    n = size - 1
    mats = []
    for g in gens:
        m = np.asarray(g.to_float().entries, dtype=np.float64)
        if m.shape != (size, size):
            raise ValueError("generators must share one dimension")
        if abs(m[n, n]) < tol * np.max(np.abs(m)):
            raise ValueError("generator has no usable normalization entry")
        mats.append(m / m[n, n])
    log_slots = sorted({i for m in mats for i in range(1, n)
                        if abs(m[i, i] - 1.0) > tol})
    t = len(log_slots)
    if log_slots != list(range(1, t + 1)):
        raise ValueError(
            f"diagonal slots {[(i + 1) for i in log_slots]} are not the leading block; "
            "conjugate the group into model coordinate order first")
    residual = 0.0
    rows_log, rhs = [], []
    for m in mats:
        expected = np.eye(size)
        for i in log_slots:
            expected[i, i] = m[i, i]
            if m[i, i] <= 0:
                raise ValueError(f"nonpositive diagonal entry at slot {i + 1}")
        v = m[t + 1:n, n].copy()
        expected[t + 1:n, n] = v
        expected[0, t + 1:n] = v
        expected[0, n] = m[0, n]
        residual = max(residual, float(np.max(np.abs(m - expected))))
        rows_log.append([math.log(m[i, i]) for i in log_slots])
        rhs.append(0.5 * float(np.dot(v, v)) - m[0, n])
    if residual > math.sqrt(tol):
        raise PatternMismatch(
            f"generators deviate from the model block form by {residual:.3e}", residual)
    if t == 0:
        psi_vals = []
    else:
        sol, res2, _, _ = np.linalg.lstsq(np.asarray(rows_log), np.asarray(rhs), rcond=None)
        if res2.size:
            residual = max(residual, float(math.sqrt(res2[0])))
        if np.min(sol) < -math.sqrt(tol):
            raise ValueError(f"solved parameter has a negative entry: {sol}")
        psi_vals = [max(float(x), 0.0) for x in sol]
    order = sorted(range(t), key=lambda k: -psi_vals[k]) + list(range(t, n - 1))
    perm = [[Fraction(0)] * size for _ in range(size)]
    perm[0][0] = Fraction(1)
    perm[n][n] = Fraction(1)
    for new, old in enumerate(order):
        perm[1 + new][1 + old] = Fraction(1)
    psi = CuspParameter(sorted(psi_vals, reverse=True) + [0.0] * (n - t))
    return ClassifiedCusp(psi, psi.type, ProjMap(perm), residual)


# ---------------------------------------------------------------------------
# common-flag triangularization and simultaneous diagonalization


@dataclass(frozen=True)
class TriangularizationResult:
    status: str                       # "true" | "false" | "ambiguous"
    conjugator: Optional[ProjMap]
    residual: Optional[float]
    note: str = ""


def _real_eigenspaces(mat: np.ndarray, tol: float):
    """Clustered real eigenvalues with orthonormal null-space bases.

    Returns (spaces, borderline): borderline marks shaky rank or cluster
    decisions so callers can report ambiguity instead of guessing.
    """
    m = mat.shape[0]
    vals = np.linalg.eigvals(mat)
    scale = max(float(np.max(np.abs(vals))), 1.0)
    ctol = max(tol, 1e-12) * scale * 100
    borderline = False
    real_vals = []
    for lam in vals:
        if abs(lam.imag) > ctol:
            if abs(lam.imag) < 10 * ctol:
                borderline = True
            continue
        real_vals.append(lam.real)
    clusters = []
    for lam in sorted(real_vals):
        if clusters and abs(lam - clusters[-1][-1]) <= ctol:
            clusters[-1].append(lam)
        else:
            clusters.append([lam])
    spaces = []
    for cluster in clusters:
        lam = float(np.mean(cluster))
        shifted = mat - lam * np.eye(m)
        _, svals, vt = np.linalg.svd(shifted)
        null_tol = max(tol, 1e-10) * max(svals[0], 1.0)
        dim = int(np.sum(svals <= null_tol))
        if dim == 0:
            borderline = True
            continue
        dropped = svals[m - dim - 1] if m - dim - 1 >= 0 else None
        if dropped is not None and dropped < 10 * null_tol:
            borderline = True
        spaces.append(vt[m - dim:].T)
    return spaces, borderline


def _intersect(basis_a: np.ndarray, basis_b: np.ndarray, tol: float):
    stacked = np.hstack([basis_a, -basis_b])
    _, svals, vt = np.linalg.svd(stacked)
    null_tol = max(tol, 1e-10) * max(svals[0], 1.0)
    dim = int(np.sum(svals <= null_tol))
    if stacked.shape[1] > len(svals):
        dim += stacked.shape[1] - len(svals)
    if dim == 0:
        return None
    coeffs = vt[-dim:].T
    vecs = basis_a @ coeffs[:basis_a.shape[1]]
    q, _ = np.linalg.qr(vecs)
    return q[:, :dim]


def _common_eigenvector(mats: list[np.ndarray], tol: float):
    spaces, borderline = _real_eigenspaces(mats[0], tol)
    candidates = spaces
    for mat in mats[1:]:
        spaces, bl = _real_eigenspaces(mat, tol)
        borderline |= bl
        merged = []
        for basis in candidates:
            for other in spaces:
                common = _intersect(basis, other, tol)
                if common is not None:
                    merged.append(common)
        candidates = merged
        if not candidates:
            return None, borderline
    # prefer the axis-aligned choice (ties broken toward the lowest axis) so
    # already-triangular input keeps its own flag
    best = None                            # (-score, axis, vec)
    for basis in candidates:
        scores = np.linalg.norm(basis, axis=1)
        for axis in np.argsort(-scores):
            axis = int(axis)
            vec = basis @ basis[axis, :]
            norm = np.linalg.norm(vec)
            if norm == 0:
                continue
            key = (-round(float(scores[axis]), 9), axis)
            if best is None or key < best[0]:
                best = (key, vec / norm)
            break
    return (None if best is None else best[1]), borderline


def upper_triangular_check(gens: Sequence[ProjMap],
                           tol: float = DEFAULT_TOL) -> TriangularizationResult:
    """Greedy common-flag search: find a common eigenvector, quotient,
    recurse.  Ambiguity (shaky numerical rank decisions, or a conjugator
    that verifies only loosely) is a first-class result, never a guess."""
    mats = [np.asarray(g.to_float().entries, dtype=np.float64) for g in gens]
    if not mats:
        raise ValueError("need at least one generator")
    m = mats[0].shape[0]
    mats = [mat / np.max(np.abs(mat)) for mat in mats]
    basis_total = np.eye(m)
    current = [mat.copy() for mat in mats]
    borderline_any = False
    for level in range(m - 1):
        size = m - level
        vec, borderline = _common_eigenvector(current, tol)
        borderline_any |= borderline
        if vec is None:
            status = "ambiguous" if borderline else "false"
            return TriangularizationResult(
                status, None, None,
                f"no common eigenvector at flag level {level}")
        stacked = np.hstack([vec.reshape(-1, 1), np.eye(size)])
        q, _ = np.linalg.qr(stacked)
        q = q[:, :size]
        if np.dot(q[:, 0], vec) < 0:
            q[:, 0] = -q[:, 0]
        block = np.eye(m)
        block[level:, level:] = q
        basis_total = basis_total @ block
        current = [q.T @ mat @ q for mat in current]
        current = [mat[1:, 1:] for mat in current]
    conj = basis_total.T                  # rows: conj . g . conj^{-1} is triangular
    residual = 0.0
    for mat in mats:
        tri = conj @ mat @ basis_total
        lower = np.tril(tri, -1)
        residual = max(residual, float(np.max(np.abs(lower)) / np.max(np.abs(tri))))
    if residual <= tol:
        status = "true"
    elif residual <= math.sqrt(tol) or borderline_any:
        status = "ambiguous"
    else:
        status = "false"
    return TriangularizationResult(status, ProjMap(conj), residual,
                                   "verified by explicit conjugation")


def diagonalize_commuting(gens: Sequence[ProjMap], tol: float = DEFAULT_TOL,
                          rng: Optional[np.random.Generator] = None,
                          max_tries: int = 10):
    """Simultaneous eigenbasis of pairwise commuting generators via a random
    linear combination, verified by explicit conjugation.

    Returns (conjugator, residual) or (None, best_residual) when no basis
    was found after the retries.
    """
    from .bending import commute_check  # local import to avoid a cycle

    if not gens:
        raise ValueError("need at least one generator")
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not commute_check(gens[i].to_float(), gens[j].to_float(),
                                 max(tol, 1e-9)):
                raise ValueError(f"generators {i} and {j} do not commute")
    rng = rng or np.random.default_rng(0)
    mats = [np.asarray(g.to_float().entries, dtype=np.float64) for g in gens]
    mats = [mat / np.max(np.abs(mat)) for mat in mats]
    m = mats[0].shape[0]
    best = math.inf
    for _ in range(max_tries):
        coeffs = rng.normal(size=len(mats))
        combo = sum(c * mat for c, mat in zip(coeffs, mats))
        vals, vecs = np.linalg.eig(combo)
        if not np.all(np.isfinite(vecs)):
            continue
        cond = np.linalg.cond(vecs)
        if cond > 1e12:
            continue
        vinv = np.linalg.inv(vecs)
        residual = 0.0
        for mat in mats:
            w = vinv @ mat @ vecs
            off = w - np.diag(np.diag(w))
            residual = max(residual, float(np.max(np.abs(off)) / np.max(np.abs(w))))
        best = min(best, residual)
        if residual <= tol:
            if np.max(np.abs(vecs.imag)) <= tol * np.max(np.abs(vecs.real)):
                vecs = vecs.real
            return ProjMap(np.linalg.inv(vecs)), residual
    return None, best


def diagonalizable_check(gens: Sequence[ProjMap], tol: float = DEFAULT_TOL,
                         rng: Optional[np.random.Generator] = None) -> bool:
    """True iff a simultaneous eigenbasis makes every generator diagonal to
    tol (generators must pairwise commute)."""
    conj, _ = diagonalize_commuting(gens, tol, rng)
    return conj is not None
