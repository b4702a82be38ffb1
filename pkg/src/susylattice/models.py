"""Concrete supercharge models on the full fermionic Fock space.

Builders for the one-, two- and three-flavor lattices, the closed-form
supertransformation automorphisms, the non-nilpotent hopping candidate, and
the BCS comparison Hamiltonian.  H is always computed as {Q, Q^dag}; displayed
expansions are treated as checks, not definitions.
"""

import itertools
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .operators import (
    DimensionError,
    LatticeSpec,
    OperatorMatrix,
    gauge_charge,
    hermitian_function,
    nilpotency_residual,
    sparse_annihilators,
)


@dataclass(frozen=True)
class ModelInstance:
    """A named model with its lattice, couplings and built operators."""

    kind: str
    spec: LatticeSpec
    couplings: tuple
    q: OperatorMatrix
    h: OperatorMatrix

    def g_alpha(self, alpha=0.0):
        return gauge_charge(self.q, alpha)


def _check_couplings(z):
    z = tuple(float(v) for v in z)
    if not z or any(v <= 0 for v in z):
        raise ValueError("couplings must be positive reals")
    return z


def _instance(kind, spec, z, q_sparse):
    q = q_sparse.toarray()
    h = q @ q.conj().T + q.conj().T @ q
    return ModelInstance(kind=kind, spec=spec, couplings=z,
                         q=OperatorMatrix(q, label=f"Q[{kind}]"),
                         h=OperatorMatrix(h, hermitian=True,
                                          label=f"H[{kind}]"))


# ---------------------------------------------------------------------------
# baby model and Model I: one flavor per site


def build_baby():
    """Single-mode model Q = a; H = 1 and G_alpha interpolates a + a^dag."""
    return build_model_i([1.0], kind="Baby")


def baby_flow_closed(s, alpha=0.0):
    """Closed form of the single-mode supertransformation of a.

    a(s, alpha) = cos^2(s) a + e^{-2 i alpha} sin^2(s) a^dag
                  + i e^{-i alpha} cos(s) sin(s) (a^dag a - a a^dag)

    The alpha phases are the ones forced by G_alpha = e^{ia} a + e^{-ia} a^dag
    under conjugation exp(isG) a exp(-isG); expanding the BCH series gives
    e^{-2ia} on the a^dag term.
    """
    a = sparse_annihilators(1)[0].toarray()
    ad = a.conj().T
    c, sn = np.cos(s), np.sin(s)
    return OperatorMatrix(c * c * a + np.exp(-2j * alpha) * sn * sn * ad
                          + 1j * np.exp(-1j * alpha) * c * sn * (ad @ a - a @ ad))


def build_model_i(z, kind="ModelI"):
    """Q = sum_i z_i a_i on a one-flavor lattice; H = (sum z_i^2) * 1."""
    z = _check_couplings(z)
    n = len(z)
    if n > 10:
        raise DimensionError("Model I supports at most 10 sites")
    spec = LatticeSpec(n, 1)
    ops = sparse_annihilators(spec.modes)
    q = sum(zi * ai for zi, ai in zip(z, ops))
    return _instance(kind, spec, z, q)


def model_i_flow_closed(k, s, z):
    """Closed form a_k(s) = (a_k - z_k/2G) e^{-2isG} + z_k/2G for Model I.

    G is invertible because G^2 = sum z_i^2 > 0.
    """
    model = build_model_i(z)
    g = model.g_alpha(0.0)
    a_k = sparse_annihilators(model.spec.modes)[k].toarray()
    g_inv = hermitian_function(g, lambda v: 1.0 / v).mat
    exp_m2isg = hermitian_function(g, lambda v: np.exp(-2j * s * v)).mat
    shift = 0.5 * z[k] * g_inv
    return OperatorMatrix((a_k - shift) @ exp_m2isg + shift)


# ---------------------------------------------------------------------------
# Model II: spin-up and spin-down fermions per site


def build_model_ii(z):
    """Q = sum_i z_i n_up,i a_down,i; H = sum_i z_i^2 n_up,i.

    Every H eigenvalue is at least 2^N-fold degenerate: the down-spin factor
    is untouched by H.
    """
    z = _check_couplings(z)
    n = len(z)
    if n > 6:
        raise DimensionError("Model II supports at most 6 sites")
    spec = LatticeSpec(n, 2)
    ops = sparse_annihilators(spec.modes)
    q = None
    for i, zi in enumerate(z):
        up = ops[spec.mode_index(i, 0)]
        dn = ops[spec.mode_index(i, 1)]
        term = zi * (up.conj().T @ up @ dn)
        q = term if q is None else q + term
    return _instance("ModelII", spec, z, q)


def model_ii_flow_closed(k, s, z):
    """Closed forms of the Model II supertransformation at site k.

    up:   a_up,k(s)   = a_up,k exp(-is(G - (a_dn,k + a_dn,k^dag) z_k)) exp(-isG)
    down: a_dn,k(s)   = a_dn,k exp(-2isG) + z_k n_up,k phi(G),
          phi(x) = (1 - exp(-2isx)) / (2x), extended by phi(0) = is.
    """
    model = build_model_ii(z)
    spec = model.spec
    ops = sparse_annihilators(spec.modes)
    up = ops[spec.mode_index(k, 0)].toarray()
    dn = ops[spec.mode_index(k, 1)].toarray()
    g = model.g_alpha(0.0)
    shifted = g.mat - z[k] * (dn + dn.conj().T)
    exp_isg = hermitian_function(g, lambda v: np.exp(-1j * s * v)).mat
    exp_shift = hermitian_function(OperatorMatrix(shifted, hermitian=True),
                                   lambda v: np.exp(-1j * s * v)).mat
    a_up_s = up @ exp_shift @ exp_isg

    def phi(x):
        x = np.asarray(x, dtype=float)
        small = np.abs(x) < 1e-12
        safe = np.where(small, 1.0, x)
        return np.where(small, 1j * s, (1 - np.exp(-2j * s * safe)) / (2 * safe))

    exp_2isg = hermitian_function(g, lambda v: np.exp(-2j * s * v)).mat
    n_up = up.conj().T @ up
    a_dn_s = dn @ exp_2isg + z[k] * (n_up @ hermitian_function(g, phi).mat)
    return OperatorMatrix(a_up_s), OperatorMatrix(a_dn_s)


# ---------------------------------------------------------------------------
# nilpotency counterexample


def hopping_supercharge(n, z=None, periodic=True):
    """The next-neighbour candidate Q = sum_i z_i n_i a_{i+1} (not nilpotent).

    Site n-1 couples back to site 0 when periodic.
    """
    if z is None:
        z = (1.0,) * n
    z = _check_couplings(z)
    spec = LatticeSpec(n, 1)
    ops = sparse_annihilators(spec.modes)
    q = None
    for i, zi in enumerate(z):
        j = (i + 1) % n
        if j == 0 and not periodic:
            continue
        term = zi * (ops[i].conj().T @ ops[i] @ ops[j])
        q = term if q is None else q + term
    return OperatorMatrix(q.toarray(), label="Q[hopping]")


def nilpotency_check(q):
    """(is_nilpotent, residual) with residual = ||Q^2|| / ||Q||^2."""
    res = nilpotency_residual(q)
    return res <= 1e-12, res


# ---------------------------------------------------------------------------
# Model III: Cooper pairs plus a third flavor


@dataclass(frozen=True)
class PairAlgebraOps:
    """Pair and collective operators of the three-flavor model.

    b_ops are the pair annihilators b_i = a_i^1 a_i^2; m_n and eta_n the
    collective modes (1/sqrt N) sum b_k and (1/sqrt N) sum a^3_k.  The
    projector selects the sector where every site's pair occupation is locked
    (both constituents empty or both filled); only there is {b, b^dag} = 1.
    """

    b_ops: tuple
    a3_ops: tuple
    m_n: OperatorMatrix
    eta_n: OperatorMatrix
    pair_projector: OperatorMatrix


def _model_iii_sparse(n):
    if n > 4:
        raise DimensionError("Model III supports at most 4 sites (3 flavors)")
    spec = LatticeSpec(n, 3)
    ops = sparse_annihilators(spec.modes)
    b = [ops[spec.mode_index(i, 0)] @ ops[spec.mode_index(i, 1)]
         for i in range(n)]
    a3 = [ops[spec.mode_index(i, 2)] for i in range(n)]
    m = sum(b) / np.sqrt(n)
    eta = sum(a3) / np.sqrt(n)
    q = m @ eta
    return spec, b, a3, m, eta, q


def _pair_projector_diag(spec):
    # diagonal of prod_i [(1-n_i1)(1-n_i2) + n_i1 n_i2] in the JW basis;
    # mode k occupation is bit (modes-1-k) of the basis index
    modes = spec.modes
    idx = np.arange(spec.dim)
    diag = np.ones(spec.dim)
    for i in range(spec.n_sites):
        b1 = (idx >> (modes - 1 - spec.mode_index(i, 0))) & 1
        b2 = (idx >> (modes - 1 - spec.mode_index(i, 1))) & 1
        diag *= (b1 == b2)
    return diag


def build_model_iii_fock(n):
    """Model III on the full Fock space: Q = M_N eta_N, H = {Q, Q^dag}.

    Returns the ModelInstance together with the pair-algebra operators.
    """
    spec, b, a3, m, eta, q = _model_iii_sparse(n)
    inst = _instance("ModelIII", spec, (1.0,) * n, q)
    pair = PairAlgebraOps(
        b_ops=tuple(OperatorMatrix(x.toarray(), label=f"b_{i}")
                    for i, x in enumerate(b)),
        a3_ops=tuple(OperatorMatrix(x.toarray(), label=f"a3_{i}")
                     for i, x in enumerate(a3)),
        m_n=OperatorMatrix(m.toarray(), label="M_N"),
        eta_n=OperatorMatrix(eta.toarray(), label="eta_N"),
        pair_projector=OperatorMatrix(np.diag(_pair_projector_diag(spec)),
                                      hermitian=True, label="P_pair"),
    )
    return inst, pair


def fock_m_norm(n):
    """Spectral norm of M_N = (1/sqrt N) sum_i b_i on the full Fock space.

    Computed from the sparse operator so n = 4 (dimension 4096) never needs
    a dense SVD.
    """
    _, _, _, m, _, _ = _model_iii_sparse(n)
    if m.shape[0] <= 512:
        return float(np.linalg.norm(m.toarray(), 2))
    s = sparse.linalg.svds(m.tocsc(), k=1, return_singular_vectors=False)
    return float(s[0])


def hss_pair_expansion(pair):
    """The displayed expansion M^dag M + eta eta^dag (1 - (2/N) sum b^dag b).

    Valid (and checked) only on the pair sector.
    """
    n = len(pair.b_ops)
    dim = pair.m_n.dim
    num_pairs = sum((bi.dag @ bi).mat for bi in pair.b_ops)
    m, eta = pair.m_n.mat, pair.eta_n.mat
    return OperatorMatrix(m.conj().T @ m
                          + eta @ eta.conj().T @ (np.eye(dim)
                                                  - (2.0 / n) * num_pairs))


def model_iii_symmetric_sector_spectrum(n):
    """Eigenvalues of the Fock-space Model III H on the symmetric pair sector.

    The sector is spanned by the Dicke states in the pair variables tensored
    with {a^3 vacuum, eta_N^dag (a^3 vacuum)}; H leaves it invariant.  Built
    sparsely so n = 4 never materializes a dense 4096^2 matrix.
    """
    spec, b, a3, m, eta, q = _model_iii_sparse(n)
    dim = spec.dim
    vac = np.zeros(dim, dtype=complex)
    vac[0] = 1.0
    b_dag = [x.conj().T.tocsr() for x in b]
    basis = []
    for k in range(n + 1):
        acc = np.zeros(dim, dtype=complex)
        for subset in itertools.combinations(range(n), k):
            v = vac
            for i in subset:
                v = b_dag[i] @ v
            acc = acc + v
        acc /= np.linalg.norm(acc)
        basis.append(acc)
        basis.append(eta.conj().T @ acc)
    bmat = np.column_stack(basis)
    qd = q.conj().T.tocsr()
    h_cols = q @ (qd @ bmat) + qd @ (q @ bmat)
    h_sub = bmat.conj().T @ h_cols
    return np.sort(np.linalg.eigvalsh(h_sub))


# ---------------------------------------------------------------------------
# BCS comparison


@dataclass(frozen=True)
class BcsModel:
    """H_BCS = -M^dag M together with the supersymmetric H_SS it shadows.

    diff_norm is ||H_BCS - (-H_SS)||, the bounded remainder (<= 1) that
    separates the two Hamiltonians.
    """

    n: int
    representation: str
    h_bcs: OperatorMatrix
    h_ss: OperatorMatrix
    diff_norm: float


def build_bcs(n, representation="dicke"):
    """The pairing Hamiltonian -M^dag M in either representation.

    fock: on the 8^n Fock space of Model III (n <= 3 to stay dense).
    dicke: on the collective multiplet tensor Clifford mode, any n.
    """
    if representation == "fock":
        if n > 3:
            raise DimensionError("dense fock BCS limited to 3 sites")
        inst, pair = build_model_iii_fock(n)
        m = pair.m_n.mat
        h_bcs = -(m.conj().T @ m)
        h_ss = inst.h.mat.copy()
    elif representation == "dicke":
        from . import dicke

        ops = dicke.collective_ops(n)
        h_ss = dicke.build_hss_dicke(ops).toarray()
        sp_sm = (ops.s_plus @ ops.s_minus).toarray()
        h_bcs = -np.kron(sp_sm, np.eye(2)) / n
    else:
        raise ValueError(f"unknown representation {representation!r}")
    diff = float(np.linalg.norm(h_bcs + h_ss, 2))
    return BcsModel(n=n, representation=representation,
                    h_bcs=OperatorMatrix(h_bcs, hermitian=True, label="H_BCS"),
                    h_ss=OperatorMatrix(h_ss, hermitian=True, label="H_SS"),
                    diff_norm=diff)
