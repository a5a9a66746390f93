"""Galerkin models of the local one-particle subspaces K_m of the free scalar field.

A model is spanned over R by the grid vectors

    v_i = omega_m^(-1/2) f_i^        (phi-sector)
    w_j = i omega_m^(1/2) g_j^       (pi-sector)

scaled by h^(d/2) so that the plain inner product of C^(M^d) is the momentum
quadrature. The model subspace lives in C^n, n = n_f + n_g, through the
economic QR factorisation of these vectors.
"""

# pylint: disable=too-many-arguments,too-many-instance-attributes,too-many-locals

from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from qfiso.common import DEFAULT_TOLERANCES, Tolerances, relative_error
from qfiso.errors import InvariantFailure, MassNegative, ModelMismatch
from qfiso.galerkin import BasisSpec, GridSpec, TransformCache
from qfiso.hilbert import ComplexSpace
from qfiso.logger import SUB_LOGGER
from qfiso.quasifree import Symplectomorphism, qdagger_q
from qfiso.standard_subspace import StandardSubspace, from_real_span
from qfiso.types import Sector

LOGGER = SUB_LOGGER('klein_gordon')

SUPPORTED_DIMS = (1, 2, 3, 4)

_DEFAULT_CACHE = TransformCache()


def dispersion(mass: float, momenta: np.ndarray) -> np.ndarray:
    """omega_m(p) = (m^2 + |p|^2)^(1/2) at every row of momenta"""
    return np.sqrt(mass ** 2 + np.sum(np.asarray(momenta) ** 2, axis=-1))


@dataclass(frozen=True, eq=False)
class GalerkinModel:
    """Discretized K_m together with the data it was built from"""
    dim: int
    mass: float
    grid: GridSpec
    basis: BasisSpec
    zero_mean: bool
    transforms: np.ndarray
    omega: np.ndarray
    vectors: np.ndarray
    subspace: StandardSubspace
    flags: List[str] = field(default_factory=list)

    @property
    def phi_vectors(self) -> np.ndarray:
        """v_i on the grid"""
        return self.vectors[:, :self.basis.n_f]

    @property
    def pi_vectors(self) -> np.ndarray:
        """w_j on the grid"""
        return self.vectors[:, self.basis.n_f:]

    def sector_vectors(self, sector: Sector) -> np.ndarray:
        """Grid vectors of one sector"""
        return self.phi_vectors if sector == Sector.PHI else self.pi_vectors

    @property
    def ill_conditioned(self) -> bool:
        """Flagged as infrared divergent or badly conditioned"""
        return bool(self.flags)

    @cached_property
    def grid_basis(self) -> np.ndarray:
        """Re-orthonormal basis of K_m on the grid: vectors @ R^-1"""
        return scipy.linalg.solve_triangular(self.subspace.gram_factor.T, self.vectors.T,
                                             lower=True).T

    def compatible(self, other: 'GalerkinModel') -> bool:
        """Same dimension, grid, basis and zero-mean choice"""
        return (self.dim, self.grid, self.basis, self.zero_mean) == \
            (other.dim, other.grid, other.basis, other.zero_mean)

    def __repr__(self):
        return (f'<{__name__}.GalerkinModel(d={self.dim}, m={self.mass:g}, grid={self.grid},'
                f' basis={self.basis.label}, zero_mean={self.zero_mean})>')


def build_kg_model(dim: int, mass: float, basis_spec: BasisSpec, grid_spec: GridSpec,
                   zero_mean: bool = False, cache: Optional[TransformCache] = None,
                   tol: Tolerances = DEFAULT_TOLERANCES) -> GalerkinModel:
    """Discretized K_m; NotStandard if the test functions are dependent on the grid"""
    if dim not in SUPPORTED_DIMS:
        raise ValueError(f'dimension must be one of {SUPPORTED_DIMS}, got {dim}')
    if mass < 0:
        raise MassNegative(f'mass must be >= 0, got {mass}')
    cache = cache or _DEFAULT_CACHE
    transforms = cache.get(dim, max(basis_spec.n_f, basis_spec.n_g), grid_spec, zero_mean)
    omega = dispersion(mass, grid_spec.nodes(dim))
    scale = np.sqrt(grid_spec.weight(dim))
    phi = scale * transforms[:, :basis_spec.n_f] / np.sqrt(omega)[:, None]
    pi = scale * 1j * transforms[:, :basis_spec.n_g] * np.sqrt(omega)[:, None]
    vectors = np.hstack([phi, pi])

    flags = []
    if mass == 0 and dim == 1 and not zero_mean:
        flags.append('infrared: omega_0^(-1/2) f^ is not square integrable for f with nonzero mean')
    phi_gram = np.real(phi.conj().T @ phi)
    phi_cond = np.linalg.cond(phi_gram)
    if phi_cond > tol.conditioning:
        flags.append(f'phi-sector Gram condition number {phi_cond:.3e}')
    for flag in flags:
        LOGGER.warning('d=%d m=%g grid=%s: %s', dim, mass, grid_spec, flag)

    _, coordinates = scipy.linalg.qr(vectors, mode='economic')
    subspace = from_real_span(ComplexSpace(basis_spec.total), coordinates, tol)
    model = GalerkinModel(dim=dim, mass=float(mass), grid=grid_spec, basis=basis_spec,
                          zero_mean=bool(zero_mean), transforms=transforms, omega=omega,
                          vectors=vectors, subspace=subspace, flags=flags)
    LOGGER.debug('built %r', model)
    return model


def _require_compatible(first: GalerkinModel, second: GalerkinModel):
    if not first.compatible(second):
        raise ModelMismatch(f'{first!r} and {second!r} are discretized differently')


def mass_change_map(model_m: GalerkinModel, model_0: GalerkinModel) -> Symplectomorphism:
    """Q: omega_m^(-1/2) f + i omega_m^(1/2) g -> the same with the second mass.

    Both models share their generators' coefficients, so with generators == B R
    the K-basis matrix is q = R_0 R_m^-1.
    """
    _require_compatible(model_m, model_0)
    r_m = model_m.subspace.gram_factor
    r_0 = model_0.subspace.gram_factor
    matrix = scipy.linalg.solve_triangular(r_m.T, r_0.T, lower=True).T
    return Symplectomorphism(model_m.subspace, model_0.subspace, matrix)


@dataclass(frozen=True, eq=False)
class RealProjection:
    """Orthogonal projection onto the real span of some grid vectors w.r.t. Re<.,.>"""
    vectors: np.ndarray

    @cached_property
    def _frame(self) -> np.ndarray:
        realified = np.vstack([self.vectors.real, self.vectors.imag])
        frame, _ = scipy.linalg.qr(realified, mode='economic')
        size = self.vectors.shape[0]
        return frame[:size] + 1j * frame[size:]

    @property
    def rank(self) -> int:
        """Real dimension of the range"""
        return self.vectors.shape[1]

    def frame(self) -> np.ndarray:
        """Re-orthonormal basis of the range (columns)"""
        return self._frame

    def __call__(self, x: np.ndarray) -> np.ndarray:
        frame = self._frame
        return frame @ np.real(frame.conj().T @ np.asarray(x, dtype=complex))


def projections_phi_pi(model: GalerkinModel) -> Tuple[RealProjection, RealProjection]:
    """(E_phi, E_pi): real projections onto span_R{v_i} and span_R{w_j}.

    E_pi projects onto the pi-sector vectors themselves (i omega^(1/2) g), so that
    the projection onto K_m is E_phi + E_pi.
    """
    return RealProjection(model.phi_vectors), RealProjection(model.pi_vectors)


def projection_onto_model(model: GalerkinModel) -> RealProjection:
    """E_{K_m}"""
    return RealProjection(model.vectors)


def qdq_via_projections(model_m: GalerkinModel, model_0: GalerkinModel) -> np.ndarray:
    """Q^dagger Q = (E_phi (omega_m/omega_0) E_phi + E_pi (omega_0/omega_m) E_pi) on K_m,
    as a matrix in the Re-orthonormal K_m-basis"""
    _require_compatible(model_m, model_0)
    e_phi, e_pi = projections_phi_pi(model_m)
    basis = model_m.grid_basis
    ratio = (model_m.omega / model_0.omega)[:, None]
    image = e_phi(ratio * e_phi(basis)) + e_pi(e_pi(basis) / ratio)
    matrix = np.real(basis.conj().T @ image)
    return (matrix + matrix.T) / 2


def check_qdq_agreement(model_m: GalerkinModel, model_0: GalerkinModel,
                        symplecto: Optional[Symplectomorphism] = None,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Relative Frobenius distance of the projection and Gram routes to Q^dagger Q"""
    symplecto = symplecto or mass_change_map(model_m, model_0)
    gram_route = qdagger_q(symplecto)
    error = relative_error(qdq_via_projections(model_m, model_0), gram_route)
    if error > tol.identity:
        raise InvariantFailure(f'projection and Gram routes to QdQ differ by {error:.3e}'
                               f' for {model_m!r}')
    return error


def sector_orthogonality(model: GalerkinModel,
                         weight: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """(|E_phi E_pi|, |E_phi rho E_pi|) with rho a real grid function (default omega_m)"""
    e_phi, e_pi = projections_phi_pi(model)
    rho = model.omega if weight is None else np.asarray(weight, dtype=float)
    phi, pi = e_phi.frame(), e_pi.frame()
    plain = np.real(phi.conj().T @ pi)
    weighted = np.real(phi.conj().T @ (rho[:, None] * pi))
    return float(np.linalg.norm(plain, 2)), float(np.linalg.norm(weighted, 2))


def delta_pairing(model: GalerkinModel) -> float:
    """max |lambda_k lambda_(n-1-k) - 1| over the ascending spectrum of delta_m"""
    values = model.subspace.modular.eigenvalues
    return float(np.max(np.abs(values * values[::-1] - 1.0)))


def tomita_norm(subspace: StandardSubspace) -> float:
    """|s| = |delta^(1/2)| = sqrt(max spectrum of delta)"""
    return float(np.sqrt(subspace.modular.eigenvalues[-1]))


@dataclass(frozen=True)
class NormProbeRow:
    """One refinement level of the Tomita-norm probe"""
    basis: BasisSpec
    grid: GridSpec
    s_norm: float
    cond_delta: float


def tomita_norm_probe(dim: int, mass: float, levels: Sequence[Tuple[BasisSpec, GridSpec]],
                      zero_mean: bool = False, cache: Optional[TransformCache] = None,
                      tol: Tolerances = DEFAULT_TOLERANCES) -> List[NormProbeRow]:
    """|s_m| of successive discretizations; the family is nested, so refining the
    basis can only increase the norm"""
    if mass <= 0:
        raise MassNegative(f'probe needs a positive mass, got {mass}')
    rows = []
    for basis, grid in levels:
        model = build_kg_model(dim, mass, basis, grid, zero_mean, cache, tol)
        values = model.subspace.modular.eigenvalues
        rows.append(NormProbeRow(basis=basis, grid=grid, s_norm=tomita_norm(model.subspace),
                                 cond_delta=float(values[-1] / values[0])))
        LOGGER.info('|s| probe d=%d m=%g n=%s grid=%s: %.6g', dim, mass, basis.label, grid,
                    rows[-1].s_norm)
    return rows


@dataclass(frozen=True, eq=False)
class TraceProbeRow:
    """Singular values of 1 - Q^dagger Q at one basis size"""
    n_basis: int
    singular_values: np.ndarray

    @property
    def trace_norm(self) -> float:
        """Sum of the singular values"""
        return float(np.sum(self.singular_values))

    @property
    def cumulative_fraction(self) -> np.ndarray:
        """Partial sums divided by the total"""
        total = self.trace_norm
        if total == 0.0:
            return np.zeros_like(self.singular_values)
        return np.cumsum(self.singular_values) / total

    @property
    def tail_fraction(self) -> float:
        """Share of the trace norm beyond the largest n/2 singular values"""
        total = self.trace_norm
        if total == 0.0:
            return 0.0
        return float(np.sum(self.singular_values[self.n_basis // 2:]) / total)


def one_dim_trace_probe(basis_sizes: Sequence[int], mass: float = 1.0,
                        grid: GridSpec = GridSpec(4096, 32.0), reference_mass: float = 0.0,
                        cache: Optional[TransformCache] = None,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> List[TraceProbeRow]:
    """Zero-mean d=1 models: singular values of 1 - Q^dagger Q for each basis size"""
    if mass <= 0:
        raise MassNegative(f'probe needs a positive mass, got {mass}')
    rows = []
    for size in basis_sizes:
        spec = BasisSpec.square(size)
        model_m = build_kg_model(1, mass, spec, grid, True, cache, tol)
        model_0 = build_kg_model(1, reference_mass, spec, grid, True, cache, tol)
        qdq = qdagger_q(mass_change_map(model_m, model_0))
        singular = np.linalg.svd(np.eye(qdq.shape[0]) - qdq, compute_uv=False)
        rows.append(TraceProbeRow(n_basis=size, singular_values=np.sort(singular)[::-1]))
        LOGGER.info('trace probe n=%d: trace norm %.6g, tail %.3g', size,
                    rows[-1].trace_norm, rows[-1].tail_fraction)
    return rows
