"""Truncated-Fock Lindblad generators, stationary states and regression propagation.

Density matrices are vectorized row-major (``rho.ravel()``), so that
``vec(A rho B) = kron(A, B.T) vec(rho)``.  Generators up to ``dense_max`` Fock
levels are stored as dense ``N^2 x N^2`` arrays and propagated with the
scaling-and-squaring matrix exponential; larger ones are sparse and only ever
applied to vectors (``expm_multiply``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import DomainError, NonUniqueSteadyState, TruncationError

DENSE_MAX_DIM = 32


def destroy(dim):
    """Truncated annihilation operator: ``sqrt(n)`` on the first superdiagonal."""
    if dim < 2:
        raise DomainError("Fock truncation needs dim >= 2")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def dag(op):
    return op.conj().T


@dataclass(frozen=True)
class TruncatedState:
    """Density matrix on a truncated Fock space.

    ``tail_population`` is the weight of the highest retained level summed over
    the given subsystem dims; large values signal an inadequate truncation.
    """

    rho: np.ndarray
    tail_population: float

    def __post_init__(self):
        rho = self.rho
        if abs(np.trace(rho) - 1.0) > 1e-10:
            raise DomainError(f"state trace {np.trace(rho).real:.12g} != 1")
        if np.max(np.abs(rho - dag(rho))) > 1e-12:
            raise DomainError("state is not Hermitian")
        if np.min(np.linalg.eigvalsh(rho)) < -1e-10:
            raise DomainError("state is not positive semidefinite")

    @property
    def dim(self):
        return self.rho.shape[0]

    def expect(self, op):
        return complex(np.trace(op @ self.rho))


class Liouvillian:
    """Time-independent Lindblad generator acting on row-major vectorized states."""

    def __init__(self, matrix, dim, subsystem_dims=None):
        self.matrix = matrix
        self.dim = dim
        self.subsystem_dims = tuple(subsystem_dims) if subsystem_dims else (dim,)
        self._expm_cache = {}

    @property
    def dense(self):
        return not sp.issparse(self.matrix)

    @property
    def scale(self):
        m = self.matrix
        return float(np.max(np.abs(m.data if sp.issparse(m) else m)))

    def apply(self, vec):
        return self.matrix @ vec

    def propagate(self, vec, tau):
        """``exp(L tau)`` applied to a vector or to the columns of a matrix."""
        if tau < 0:
            raise DomainError("propagation time must be >= 0")
        if tau == 0:
            return np.array(vec, copy=True)
        if self.dense:
            key = float(tau)
            prop = self._expm_cache.get(key)
            if prop is None:
                prop = sla.expm(self.matrix * tau)
                self._expm_cache[key] = prop
            return prop @ vec
        return spla.expm_multiply(self.matrix * tau, vec)


def lindblad_superoperator(hamiltonian, collapse, dense=None):
    """Build ``L rho = -i[H, rho] + sum_k rate_k D[c_k] rho``.

    Parameters
    ----------
    hamiltonian : (N, N) array or None
    collapse : list of (rate, operator)
    dense : bool, optional
        Defaults to dense for ``N <= DENSE_MAX_DIM``.
    """
    ops = [c for _, c in collapse]
    dim = (hamiltonian if hamiltonian is not None else ops[0]).shape[0]
    if dense is None:
        dense = dim <= DENSE_MAX_DIM
    if dense:
        ident = np.eye(dim)
        kron = np.kron
        conv = np.asarray
    else:
        ident = sp.identity(dim, format="csr", dtype=complex)
        kron = lambda a, b: sp.kron(a, b, format="csr")
        conv = sp.csr_matrix
    n2 = dim * dim
    out = np.zeros((n2, n2), dtype=complex) if dense else sp.csr_matrix((n2, n2), dtype=complex)
    if hamiltonian is not None:
        h = conv(hamiltonian)
        out = out - 1j * (kron(h, ident) - kron(ident, h.T))
    for rate, c in collapse:
        if rate < 0:
            raise DomainError("collapse rates must be >= 0")
        if rate == 0:
            continue
        cm = conv(c)
        cdc = conv(dag(c) @ c)
        out = out + rate * (kron(cm, cm.conj()) - 0.5 * kron(cdc, ident) - 0.5 * kron(ident, cdc.T))
    if not dense:
        out = out.tocsc()
    return out


def thermal_tail(n_m, dim):
    """Weight of the top retained level for the truncated geometric distribution."""
    if n_m == 0:
        return 0.0
    r = n_m / (n_m + 1.0)
    return (1.0 - r) * r ** (dim - 1) / (1.0 - r**dim)


def thermal_populations(n_m, dim):
    """Normalized truncated geometric populations with ratio ``n_m / (n_m + 1)``."""
    if n_m == 0:
        p = np.zeros(dim)
        p[0] = 1.0
        return p
    r = n_m / (n_m + 1.0)
    p = r ** np.arange(dim)
    return p / p.sum()


def thermal_liouvillian(gamma_eff, n_m, dim, tail_threshold=1e-4, dense=None):
    """Damped oscillator coupled to a thermal bath of occupation ``n_m``.

    Downward rate ``gamma_eff (n_m + 1)``, upward rate ``gamma_eff n_m``.

    Raises
    ------
    TruncationError
        If the stationary weight of the top level exceeds ``tail_threshold``.
    """
    if dim < 2:
        raise DomainError("dim must be >= 2")
    if not gamma_eff > 0:
        raise DomainError("gamma_eff must be > 0")
    if n_m < 0:
        raise DomainError("n_m must be >= 0")
    tail = thermal_tail(n_m, dim)
    if tail > tail_threshold:
        raise TruncationError(f"dim={dim} too small for n_m={n_m}: tail population {tail:.3g}")
    b = destroy(dim)
    mat = lindblad_superoperator(None, [(gamma_eff * (n_m + 1.0), b), (gamma_eff * n_m, dag(b))], dense=dense)
    return Liouvillian(mat, dim)


def _spectral_gap(liouv: Liouvillian):
    """Second-smallest eigenvalue modulus of the generator."""
    m = liouv.matrix
    n = m.shape[0]
    if n <= 256:
        dense = m.toarray() if sp.issparse(m) else m
        ev = np.sort(np.abs(np.linalg.eigvals(dense)))
        return float(ev[1])
    scale = liouv.scale
    sigma = 1e-6 * scale
    a = sp.csc_matrix(m, dtype=complex)
    v0 = np.ones(n, dtype=complex)
    ev = spla.eigs(a, k=2, sigma=sigma, which="LM", v0=v0, return_eigenvectors=False)
    return float(np.sort(np.abs(ev))[1])


def stationary_state(liouv: Liouvillian, gap_threshold=1e-9, check_gap=True) -> TruncatedState:
    """Normalized null vector of the generator.

    One equation of ``L v = 0`` is replaced by the trace condition and the
    resulting linear system is solved directly.

    Raises
    ------
    NonUniqueSteadyState
        If the spectral gap is below ``gap_threshold`` times the largest
        generator entry.
    """
    dim = liouv.dim
    n2 = dim * dim
    trace_row = np.eye(dim).ravel().astype(complex)
    if check_gap:
        gap = _spectral_gap(liouv)
        if gap < gap_threshold * liouv.scale:
            raise NonUniqueSteadyState(f"spectral gap {gap:.3g} below threshold")
    rhs = np.zeros(n2, dtype=complex)
    rhs[0] = 1.0
    if liouv.dense:
        m = np.array(liouv.matrix, dtype=complex, copy=True)
        m[0, :] = trace_row
        vec = np.linalg.solve(m, rhs)
    else:
        m = sp.vstack([sp.csr_matrix(trace_row), sp.csr_matrix(liouv.matrix)[1:]], format="csc")
        vec = spla.spsolve(m, rhs)
    rho = vec.reshape(dim, dim)
    rho = 0.5 * (rho + dag(rho))
    rho = rho / np.trace(rho).real
    return TruncatedState(rho=rho, tail_population=_tail(rho, liouv.subsystem_dims))


def _tail(rho, dims):
    """Top-level population of each subsystem, summed."""
    pops = np.real(np.diag(rho)).reshape(dims)
    total = 0.0
    for axis, d in enumerate(dims):
        total += float(np.take(pops, d - 1, axis=axis).sum())
    return total


def vec(op):
    return np.asarray(op).ravel()


def unvec(v, dim):
    return np.asarray(v).reshape(dim, dim)


def regression_correlator(liouv: Liouvillian, state: TruncatedState, pre, post, observable, taus):
    """Two-time expectation by the quantum regression theorem.

    Returns ``Tr[O(tau) exp(L tau)(pre rho post)]`` for each delay.  ``pre`` or
    ``post`` may be None (identity).  ``observable`` is an operator or a
    callable ``tau -> operator`` for observables carrying explicit delay
    phases.  Delays must be non-decreasing; propagation is incremental.
    """
    taus = np.asarray(taus, dtype=float)
    if np.any(np.diff(taus) < 0) or np.any(taus < 0):
        raise DomainError("delays must be non-negative and non-decreasing")
    x = state.rho
    if pre is not None:
        x = pre @ x
    if post is not None:
        x = x @ post
    v = vec(x).astype(complex)
    out = np.empty(len(taus), dtype=complex)
    t_prev = 0.0
    dim = liouv.dim
    for i, tau in enumerate(taus):
        v = liouv.propagate(v, tau - t_prev)
        t_prev = tau
        obs = observable(tau) if callable(observable) else observable
        out[i] = np.sum(obs * unvec(v, dim).T)
    return out


def relax(liouv: Liouvillian, rho0, t):
    """Propagate a density matrix for time ``t``."""
    return unvec(liouv.propagate(vec(rho0).astype(complex), t), liouv.dim)


def trace_norm(a):
    """Schatten-1 norm of a Hermitian-or-not matrix."""
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def start_dim(n_m, floor=8):
    """Initial truncation ``max(floor, ceil(10 (n_m + 1)))``."""
    return max(floor, int(math.ceil(10.0 * (n_m + 1.0))))
