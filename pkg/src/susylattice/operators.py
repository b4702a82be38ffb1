"""Dense complex-matrix toolkit and the model-independent super-structure.

Everything here works on explicit matrices: fermion mode operators built by
the Jordan-Wigner construction, (anti)commutators, Hermitian matrix
functions, and the decomposition of a nilpotent supercharge Q into the
package (P0, eta, F, G_alpha, paired spectrum).
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import sparse

# Dense matrices only; 2^14 is the largest Fock dimension we ever touch.
MAX_MODES = 14

# Eigenvalues of H below KERNEL_CUT * ||H|| count as exact zeros.
KERNEL_CUT = 1e-9

# Gaps below CLUSTER_TOL * (1 + |lambda|) merge into one multiplet.
CLUSTER_TOL = 1e-8

NILPOTENCY_TOL = 1e-12


class DimensionError(ValueError):
    """Requested construction exceeds the dense feasibility bound."""


class NilpotencyError(ValueError):
    """Supercharge candidate is not nilpotent."""


class OperatorMatrix:
    """Immutable dense complex square matrix with an optional Hermiticity tag.

    Parameters
    ----------
    mat : array_like
        Square complex matrix.
    hermitian : bool or None
        If True, Hermiticity is checked at construction (to 1e-12 relative).
        None means "unknown".
    label : str
        Free-text name used in error messages and reports.
    """

    __slots__ = ("mat", "hermitian", "label")

    def __init__(self, mat, hermitian=None, label=""):
        m = np.array(mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if hermitian:
            scale = max(1.0, np.abs(m).max())
            if np.abs(m - m.conj().T).max() > 1e-12 * scale:
                raise ValueError(f"matrix {label!r} tagged Hermitian is not")
        m.flags.writeable = False
        object.__setattr__(self, "mat", m)
        object.__setattr__(self, "hermitian", hermitian)
        object.__setattr__(self, "label", label)

    def __setattr__(self, name, value):
        raise AttributeError("OperatorMatrix is immutable")

    @property
    def dim(self):
        return self.mat.shape[0]

    @property
    def dag(self):
        return OperatorMatrix(self.mat.conj().T, hermitian=self.hermitian,
                              label=self.label + "^dag" if self.label else "")

    def __matmul__(self, other):
        return OperatorMatrix(self.mat @ _as_array(other))

    def __rmatmul__(self, other):
        return OperatorMatrix(_as_array(other) @ self.mat)

    def __add__(self, other):
        return OperatorMatrix(self.mat + _as_array(other))

    __radd__ = __add__

    def __sub__(self, other):
        return OperatorMatrix(self.mat - _as_array(other))

    def __rsub__(self, other):
        return OperatorMatrix(_as_array(other) - self.mat)

    def __mul__(self, scalar):
        return OperatorMatrix(self.mat * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return OperatorMatrix(-self.mat)

    def norm(self):
        """Spectral norm (largest singular value)."""
        return float(np.linalg.norm(self.mat, 2))

    def fro(self):
        """Frobenius norm; cheap residual measure."""
        return float(np.linalg.norm(self.mat))

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"<OperatorMatrix{tag} dim={self.dim}>"


def _as_array(x):
    return x.mat if isinstance(x, OperatorMatrix) else np.asarray(x)


@dataclass(frozen=True)
class LatticeSpec:
    """Finite fermion lattice: n_sites sites with n_flavors modes per site.

    Mode enumeration is site-major, flavor-minor: mode index = site * n_flavors
    + flavor. The Jordan-Wigner sign string follows this order.
    """

    n_sites: int
    n_flavors: int = 1

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be positive")
        if self.n_flavors not in (1, 2, 3):
            raise ValueError("n_flavors must be 1, 2 or 3")

    @property
    def modes(self):
        return self.n_sites * self.n_flavors

    @property
    def dim(self):
        return 2 ** self.modes

    def mode_index(self, site, flavor=0):
        if not (0 <= site < self.n_sites and 0 <= flavor < self.n_flavors):
            raise ValueError(f"mode ({site},{flavor}) outside lattice")
        return site * self.n_flavors + flavor


@lru_cache(maxsize=None)
def sparse_annihilators(modes):
    """Sparse Jordan-Wigner annihilation operators for `modes` fermion modes.

    Mode k carries the sign string on all modes left of it; the single-mode
    block sends |1> to |0> (upper-right entry 1 in the (|0>,|1>) basis).
    """
    if modes > MAX_MODES:
        raise DimensionError(
            f"{modes} modes exceed the dense bound of {MAX_MODES}")
    z = sparse.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex))
    lower = sparse.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    eye2 = sparse.identity(2, dtype=complex, format="csr")
    ops = []
    for k in range(modes):
        acc = sparse.identity(1, dtype=complex, format="csr")
        for j in range(modes):
            if j < k:
                factor = z
            elif j == k:
                factor = lower
            else:
                factor = eye2
            acc = sparse.kron(acc, factor, format="csr")
        ops.append(acc)
    return tuple(ops)


def fermion_ops(spec):
    """Annihilation operators for every mode of `spec`, in mode order.

    The returned dense matrices satisfy the CAR exactly up to round-off:
    {a_m, a_n^dag} = delta_mn, {a_m, a_n} = 0.
    """
    return [OperatorMatrix(a.toarray(), label=f"a_{k}")
            for k, a in enumerate(sparse_annihilators(spec.modes))]


def bracket(a, b, kind="commutator"):
    """AB -+ BA for kind in {"commutator", "anticommutator"}."""
    am, bm = _as_array(a), _as_array(b)
    if am.shape != bm.shape:
        raise ValueError(f"dimension mismatch: {am.shape} vs {bm.shape}")
    if kind == "commutator":
        return OperatorMatrix(am @ bm - bm @ am)
    if kind == "anticommutator":
        return OperatorMatrix(am @ bm + bm @ am)
    raise ValueError(f"unknown bracket kind {kind!r}")


def _require_hermitian(m, what):
    scale = max(1.0, np.abs(m).max())
    if np.abs(m - m.conj().T).max() > 1e-10 * scale:
        raise ValueError(f"{what} must be Hermitian")


def hermitian_function(g, fn):
    """Apply a scalar function to a Hermitian matrix via eigendecomposition."""
    gm = _as_array(g)
    _require_hermitian(gm, "matrix-function argument")
    vals, vecs = np.linalg.eigh(gm)
    return OperatorMatrix((vecs * fn(vals)) @ vecs.conj().T)


def unitary_flow(g, s, a):
    """Conjugate `a` by exp(isG): the one-parameter automorphism of G.

    G must be Hermitian; the conjugation preserves the spectrum of `a`.
    """
    gm, am = _as_array(g), _as_array(a)
    if gm.shape != am.shape:
        raise ValueError("generator and operator dimensions differ")
    _require_hermitian(gm, "flow generator")
    if not np.isfinite(s):
        raise ValueError("flow parameter must be finite")
    vals, vecs = np.linalg.eigh(gm)
    phases = np.exp(1j * s * vals)
    u = (vecs * phases) @ vecs.conj().T
    return OperatorMatrix(u @ am @ u.conj().T)


def psd_sqrt(h):
    """Positive square root of a Hermitian PSD matrix.

    Eigenvalues in [-1e-10, 0) are clamped to zero; a materially negative
    eigenvalue (below -1e-6 * ||H||) is an error.
    """
    hm = _as_array(h)
    _require_hermitian(hm, "psd_sqrt argument")
    vals, vecs = np.linalg.eigh(hm)
    scale = max(vals[-1], 0.0) if len(vals) else 0.0
    floor = -1e-6 * max(scale, 1e-300)
    if vals[0] < min(floor, -1e-10):
        raise ValueError(f"materially negative eigenvalue {vals[0]:.3e}")
    vals = np.clip(vals, 0.0, None)
    return OperatorMatrix((vecs * np.sqrt(vals)) @ vecs.conj().T,
                          hermitian=True)


def spectrum(h):
    """Ascending (eigenvalue, multiplicity) pairs of a Hermitian matrix.

    Eigenvalues closer than CLUSTER_TOL * (1 + |lambda|) merge into one entry;
    the reported value is the cluster mean.
    """
    hm = _as_array(h)
    _require_hermitian(hm, "spectrum argument")
    vals = np.linalg.eigvalsh(hm)
    return cluster_eigenvalues(vals)


def cluster_eigenvalues(vals, tol=CLUSTER_TOL):
    """Group a sorted eigenvalue array into (value, multiplicity) clusters."""
    vals = np.sort(np.asarray(vals, dtype=float))
    out = []
    i = 0
    while i < len(vals):
        j = i + 1
        while j < len(vals) and vals[j] - vals[j - 1] <= tol * (1 + abs(vals[j])):
            j += 1
        out.append((float(vals[i:j].mean()), j - i))
        i = j
    return out


def gauge_charge(q, alpha):
    """The Hermitian family G_alpha = e^{i alpha} Q + e^{-i alpha} Q^dag."""
    qm = _as_array(q)
    return OperatorMatrix(np.exp(1j * alpha) * qm
                          + np.exp(-1j * alpha) * qm.conj().T,
                          hermitian=True, label=f"G_{alpha:g}")


def nilpotency_residual(q):
    """||Q^2||_F / ||Q||_F^2; zero matrices count as nilpotent."""
    qm = _as_array(q)
    nq = np.linalg.norm(qm)
    if nq == 0.0:
        return 0.0
    return float(np.linalg.norm(qm @ qm) / nq ** 2)


@dataclass(frozen=True)
class SuperDecomposition:
    """The structure extracted from a nilpotent supercharge.

    Attributes
    ----------
    q, h : OperatorMatrix
        The supercharge and H = Q Q^dag + Q^dag Q.
    p0 : OperatorMatrix
        Orthogonal projector onto ker H.
    eta : OperatorMatrix
        Q / sqrt(H) on the range of 1 - P0; the collective Clifford mode.
    f : OperatorMatrix
        [eta, eta^dag]; generates the gauge rotation of G.
    paired_spectrum : tuple
        (E, multiplicity) for the strictly positive eigenvalues of H.
    alpha : float
        The gauge angle the decomposition was requested at.
    """

    q: OperatorMatrix
    h: OperatorMatrix
    p0: OperatorMatrix
    eta: OperatorMatrix
    f: OperatorMatrix
    paired_spectrum: tuple
    alpha: float = 0.0

    def g_alpha(self, alpha=None):
        return gauge_charge(self.q, self.alpha if alpha is None else alpha)

    def gauge_rotate(self, alpha):
        """Conjugate G_0 by exp(i alpha F / 2); equals G_alpha.

        The half-angle is forced by F eta = eta, eta F = -eta: conjugation by
        exp(i t F) multiplies the odd part of G by exp(2 i t).
        """
        u = hermitian_function(self.f, lambda v: np.exp(1j * alpha / 2 * v))
        return OperatorMatrix(u.mat @ self.g_alpha(0.0).mat @ u.mat.conj().T)


def super_decompose(q, alpha=0.0, check=True):
    """Decompose a nilpotent Q into (P0, eta, F, paired spectrum).

    Raises NilpotencyError when ||Q^2|| > 1e-12 ||Q||^2 and ValueError when a
    structural invariant fails at its stated tolerance (`check=True`).
    """
    qm = _as_array(q)
    res = nilpotency_residual(qm)
    if res > NILPOTENCY_TOL:
        raise NilpotencyError(f"Q^2 residual {res:.3e} exceeds 1e-12")
    h = qm @ qm.conj().T + qm.conj().T @ qm
    vals, vecs = np.linalg.eigh(h)
    hnorm = max(vals[-1], 0.0)
    cut = KERNEL_CUT * max(hnorm, 1e-300)
    kernel = vals < cut
    p0 = (vecs[:, kernel]) @ (vecs[:, kernel]).conj().T
    inv_sqrt = np.where(kernel, 0.0, 1.0 / np.sqrt(np.where(kernel, 1.0, vals)))
    eta = qm @ ((vecs * inv_sqrt) @ vecs.conj().T)
    f = eta @ eta.conj().T - eta.conj().T @ eta
    paired = tuple(cluster_eigenvalues(vals[~kernel]))
    dec = SuperDecomposition(
        q=OperatorMatrix(qm, label="Q"),
        h=OperatorMatrix(h, hermitian=True, label="H"),
        p0=OperatorMatrix(p0, hermitian=True, label="P0"),
        eta=OperatorMatrix(eta, label="eta"),
        f=OperatorMatrix(f, hermitian=True, label="F"),
        paired_spectrum=paired,
        alpha=alpha,
    )
    if check:
        verify_decomposition(dec, alpha)
    return dec


def verify_decomposition(dec, alpha=0.0):
    """Check every structural invariant of a SuperDecomposition.

    - eta eta^dag + eta^dag eta = 1 - P0 (to 1e-10)
    - strictly positive H eigenvalues have even multiplicity
    - the G spectrum on range(1 - P0) is +-sqrt(E) with matched multiplicities
    - G_alpha^2 = H for the requested alpha and for alpha in {0, pi/2}
    """
    n = dec.h.dim
    eye = np.eye(n)
    eta, p0 = dec.eta.mat, dec.p0.mat
    ccr = eta @ eta.conj().T + eta.conj().T @ eta - (eye - p0)
    if np.abs(ccr).max() > 1e-10:
        raise ValueError(f"eta CAR residual {np.abs(ccr).max():.3e}")
    for e_val, mult in dec.paired_spectrum:
        if mult % 2:
            raise ValueError(
                f"positive eigenvalue {e_val:.6g} has odd multiplicity {mult}")
    hnorm = max(float(np.linalg.norm(dec.h.mat, 2)), 1e-300)
    g0 = gauge_charge(dec.q, 0.0).mat
    gvals = np.linalg.eigvalsh(g0)
    nonzero = gvals[np.abs(gvals) > np.sqrt(KERNEL_CUT * hnorm)]
    pos = cluster_eigenvalues(nonzero[nonzero > 0])
    neg = cluster_eigenvalues(-nonzero[nonzero < 0])
    if len(pos) != len(neg):
        raise ValueError("G spectrum not symmetric about zero")
    for (vp, mp), (vn, mn) in zip(pos, neg):
        if mp != mn or abs(vp - vn) > 1e-8 * (1 + abs(vp)):
            raise ValueError("G eigenvalues +-sqrt(E) do not match")
    for a in {alpha, 0.0, np.pi / 2}:
        g = gauge_charge(dec.q, a).mat
        if np.abs(g @ g - dec.h.mat).max() > 1e-10 * (1 + hnorm):
            raise ValueError(f"G_alpha^2 != H at alpha={a:g}")
