"""Exchange amplitudes: four covariant-gauge diagrams at second order, the
first-order Coulomb-gauge integrand, and two discrete oracles on finite mode
registries (operator-route perturbation theory and exact diagonalization).

Two independent code paths compute the same physics on purpose:

* closed-form integrands (diagram_integrand, lorentz_bracket, ...) carry the
  algebra done by hand once;
* the operator route (InteractionOperator + discrete_second_order,
  exact_diagonalization_oracle) builds the coupling from ladder operators and
  displacement elements and must reproduce the closed forms numerically.

Collapsing the two into one would defeat the point: they disagree exactly when
a sign is wrong, which is the dominant failure mode in this calculation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
import scipy.linalg

from .core import SystemParams
from .fock import (
    ModeRegistry,
    OccupationState,
    PolarizationKind,
    StateVector,
)
from .matelem import (
    TWO_PI_CUBED,
    OscillatorId,
    exponential_matrix,
    mode_scale,
)


class PoleError(ValueError):
    """Evaluation exactly on the resonance with no regulator."""


class ResonanceError(RuntimeError):
    """A registry mode sits on the resonance; the discrete sum is ill-defined."""


class OracleError(RuntimeError):
    """Exact-diagonalization self-checks failed (tracking or spectrum reality)."""


# ---------------------------------------------------------------------------
# The four exchange diagrams
# ---------------------------------------------------------------------------

class ExchangeOrder(Enum):
    # The initially excited oscillator emits first; the intermediate state is
    # one photon + both oscillators down.  Resonant at omega_gamma = omega_a.
    RESONANT = "resonant"
    # The ground-state oscillator emits first; the intermediate state has both
    # oscillators up + one photon.  Never resonant for omega_gamma > 0.
    COUNTER_ROTATING = "counter_rotating"


@dataclass(frozen=True)
class DiagramSpec:
    order_type: ExchangeOrder
    photon_kind: PolarizationKind

    def __post_init__(self) -> None:
        if self.photon_kind not in (PolarizationKind.SCALAR, PolarizationKind.LONGITUDINAL):
            raise ValueError("exchange diagrams exist for scalar/longitudinal kinds only")


ALL_DIAGRAMS: tuple[DiagramSpec, ...] = (
    DiagramSpec(ExchangeOrder.RESONANT, PolarizationKind.SCALAR),
    DiagramSpec(ExchangeOrder.RESONANT, PolarizationKind.LONGITUDINAL),
    DiagramSpec(ExchangeOrder.COUNTER_ROTATING, PolarizationKind.SCALAR),
    DiagramSpec(ExchangeOrder.COUNTER_ROTATING, PolarizationKind.LONGITUDINAL),
)


def common_prefactor(params: SystemParams) -> float:
    """q^2 c / (2 eps0 delta_e (2 pi)^3): shared by all four diagram integrands."""
    return (
        params.charge_q**2
        * params.c
        / (2.0 * params.eps0 * params.delta_e * TWO_PI_CUBED)
    )


def diagram_integrand(params: SystemParams, spec: DiagramSpec, k_vector) -> complex:
    """One diagram's d^3k integrand, excluding common_prefactor.

    ((k.d)^2 / k) * phase * exp(-(k.d)^2) * resonance, where the resonant
    order carries phase exp(+i k_x L) and denominator (omega_a - omega_gamma)
    and the counter-rotating order carries exp(-i k_x L) and
    -(omega_b + omega_gamma).  Longitudinal diagrams get the extra factor
    -(omega_a omega_b / omega_gamma^2).
    """
    kx = float(k_vector[0])
    k_norm = math.sqrt(sum(float(c) ** 2 for c in k_vector))
    if k_norm == 0.0:
        raise ValueError("zero wave vector")
    omega = params.c * k_norm
    kd = kx * params.dipole_d
    kl = kx * params.separation_l

    if spec.order_type is ExchangeOrder.RESONANT:
        denom = complex(params.omega_a - omega, params.eta)
        if denom == 0:
            raise PoleError(
                f"on the resonance omega_gamma = omega_a = {params.omega_a} with no regulator"
            )
        phase = cmath.exp(1j * kl)
    else:
        denom = complex(-(params.omega_b + omega), params.eta)
        phase = cmath.exp(-1j * kl)

    value = (kd * kd / k_norm) * phase * math.exp(-kd * kd) / denom
    if spec.photon_kind is PolarizationKind.LONGITUDINAL:
        value *= -(params.omega_a * params.omega_b) / (omega * omega)
    return value


def symmetric_diagram_sum(params: SystemParams, k_vector) -> complex:
    """Average over +-k of the four diagram integrands (common prefactor excluded).

    Real up to rounding; reproduces combined_bracket_form pointwise.
    """
    minus_k = tuple(-float(c) for c in k_vector)
    total = 0.0 + 0.0j
    for spec in ALL_DIAGRAMS:
        total += diagram_integrand(params, spec, k_vector)
        total += diagram_integrand(params, spec, minus_k)
    return 0.5 * total


def lorentz_bracket(params: SystemParams, omega_gamma):
    """The detuning-dependent bracket multiplying the Coulomb-form integrand.

    B(omega) = (1/2) * ((omega_a omega_b - omega^2)/omega)
             * (1/(omega_a - omega) - 1/(omega_b + omega)).
    Equals 1 identically when omega_b = omega_a, and tends to 1 as
    omega -> infinity.  Accepts a scalar or an ndarray of frequencies.
    """
    w = np.asarray(omega_gamma, dtype=float)
    if np.any(w <= 0):
        raise ValueError("omega_gamma must be positive")
    if np.any(w == params.omega_a):
        raise PoleError(f"bracket pole at omega_gamma = omega_a = {params.omega_a}")
    wa, wb = params.omega_a, params.omega_b
    out = 0.5 * ((wa * wb - w * w) / w) * (1.0 / (wa - w) - 1.0 / (wb + w))
    return float(out) if out.ndim == 0 else out


def combined_bracket_form(params: SystemParams, k_vector) -> float:
    """Closed form of symmetric_diagram_sum:
    -2 (k.d)^2 cos(k_x L) exp(-(k.d)^2) B(omega) / (k omega/c)."""
    kx = float(k_vector[0])
    k_norm = math.sqrt(sum(float(c) ** 2 for c in k_vector))
    omega = params.c * k_norm
    kd = kx * params.dipole_d
    bracket = lorentz_bracket(params, omega)
    return (
        -2.0
        * kd
        * kd
        * math.cos(kx * params.separation_l)
        * math.exp(-kd * kd)
        * bracket
        * params.c
        / (k_norm * omega)
    )


def expansion_terms(params: SystemParams, omega_gamma, order: int):
    """Power-series term of lorentz_bracket in the splitting delta_e.

    order 0: 1
    order 1: (1/2) (omega_a^2 + omega^2) / (omega (omega_a + omega)(omega_a - omega)) * (delta_e/hbar)
    order 2: (1/2) (delta_e/hbar)^2 / (omega_a + omega)^2
    The three together equal the bracket up to O(delta_e^3), uniformly away
    from the pole.  Accepts a scalar or an ndarray of frequencies.
    """
    w = np.asarray(omega_gamma, dtype=float)
    if np.any(w <= 0):
        raise ValueError("omega_gamma must be positive")
    wa = params.omega_a
    de = params.delta_e / params.hbar
    if order == 0:
        out = np.ones_like(w)
    elif order == 1:
        if np.any(w == wa):
            raise PoleError(f"first-order term pole at omega_gamma = omega_a = {wa}")
        out = 0.5 * (wa * wa + w * w) / (w * (wa + w) * (wa - w)) * de
    elif order == 2:
        out = 0.5 * de * de / ((wa + w) ** 2) * np.ones_like(w)
    else:
        raise ValueError(f"order must be 0, 1, or 2, got {order}")
    return float(out) if out.ndim == 0 else out


def coulomb_integrand(params: SystemParams, k_vector) -> float:
    """First-order Coulomb-gauge d^3k integrand, full prefactor included:
    -(q^2/(eps0 delta_e (2pi)^3)) ((k.d)^2/k^2) cos(k_x L) exp(-(k.d)^2)."""
    kx = float(k_vector[0])
    k_norm = math.sqrt(sum(float(c) ** 2 for c in k_vector))
    if k_norm == 0.0:
        raise ValueError("zero wave vector")
    kd = kx * params.dipole_d
    return (
        -(params.charge_q**2 / (params.eps0 * params.delta_e * TWO_PI_CUBED))
        * (kd * kd / (k_norm * k_norm))
        * math.cos(kx * params.separation_l)
        * math.exp(-kd * kd)
    )


# ---------------------------------------------------------------------------
# Operator route: the coupling as ladder operators on a registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Vertex:
    mode_index: int
    oscillator: str  # "A" | "B"
    raising: bool
    matrix: np.ndarray  # oscillator-space coefficient matrix, couplings folded in


def _momentum_matrix(dipole_d: float, hbar: float, size: int) -> np.ndarray:
    """p_hat on the lowest `size` levels: (i hbar / 2d)(raise - lower)."""
    out = np.zeros((size, size), dtype=complex)
    for n in range(size - 1):
        out[n + 1, n] = 1j * hbar / (2.0 * dipole_d) * math.sqrt(n + 1)
        out[n, n + 1] = -1j * hbar / (2.0 * dipole_d) * math.sqrt(n + 1)
    return out


class InteractionOperator:
    """The covariant-gauge coupling mapped onto a finite mode registry.

    apply() uses truncated-operator semantics: amplitudes that would leave the
    registry's occupation bounds are projected out, i.e. this is the coupling
    restricted to the kept space.  That projection is exactly what both
    consumers need (second-order projections and truncated-basis
    diagonalization); the strict, loudly-erroring ladder operators remain
    available on StateVector for everything else.

    The quadratic field term of the minimal coupling is omitted: it is
    diagonal in both oscillators, so it cannot connect the singly-excited
    states at this order.
    """

    def __init__(self, params: SystemParams, registry: ModeRegistry, total_photon_cap: int | None = None):
        self.params = params
        self.registry = registry
        self.total_photon_cap = total_photon_cap
        self.vertices = self._build_vertices()

    def _build_vertices(self) -> list[_Vertex]:
        p = self.params
        reg = self.registry
        size = reg.n_max + 1
        pad = reg.n_max + 3  # room for exact operator products before slicing
        vertices: list[_Vertex] = []
        for j, mode in enumerate(reg.modes):
            if mode.kind in (PolarizationKind.TRANSVERSE1, PolarizationKind.TRANSVERSE2):
                raise NotImplementedError(
                    "transverse coupling is outside this engine (identical in both gauges)"
                )
            kx = mode.k_x
            k_norm = mode.omega / p.c
            scale = math.sqrt(reg.weights[j]) * mode_scale(p, mode.omega)
            sign_raise = float(reg.raising_sign(j))
            for osc in (OscillatorId.A, OscillatorId.B):
                if mode.kind is PolarizationKind.SCALAR:
                    coeff = p.charge_q * p.c * scale
                    raise_mat = coeff * sign_raise * exponential_matrix(p, osc, kx, size)
                    lower_mat = coeff * exponential_matrix(p, osc, -kx, size)
                else:
                    # momentum coupling; k_hat . p_hat = (k_x/|k|) p_x
                    mass = p.implied_mass(osc.frequency(p))
                    coeff = -(p.charge_q / (2.0 * mass)) * (kx / k_norm) * scale
                    mom = _momentum_matrix(p.dipole_d, p.hbar, pad)
                    ident = np.eye(pad, dtype=complex)
                    raise_full = exponential_matrix(p, osc, kx, pad) @ (
                        2.0 * mom - p.hbar * kx * ident
                    )
                    lower_full = exponential_matrix(p, osc, -kx, pad) @ (
                        2.0 * mom + p.hbar * kx * ident
                    )
                    raise_mat = coeff * sign_raise * raise_full[:size, :size]
                    lower_mat = coeff * lower_full[:size, :size]
                vertices.append(_Vertex(j, osc.value, True, raise_mat))
                vertices.append(_Vertex(j, osc.value, False, lower_mat))
        return vertices

    def apply(self, state: StateVector) -> StateVector:
        reg = self.registry
        n_levels = reg.n_max + 1
        out: dict[OccupationState, complex] = {}
        for occ, amp in state.terms():
            for v in self.vertices:
                level = occ.level_a if v.oscillator == "A" else occ.level_b
                n_j = occ.photons[v.mode_index]
                if v.raising:
                    if n_j + 1 > reg.p_max:
                        continue  # projected out
                    if self.total_photon_cap is not None and occ.total_photons() + 1 > self.total_photon_cap:
                        continue
                    photon_factor = math.sqrt(n_j + 1)
                    new_count = n_j + 1
                else:
                    if n_j == 0:
                        continue
                    photon_factor = math.sqrt(n_j)
                    new_count = n_j - 1
                photons = (
                    occ.photons[: v.mode_index] + (new_count,) + occ.photons[v.mode_index + 1 :]
                )
                column = v.matrix[:, level]
                for m in range(n_levels):
                    c = column[m]
                    if abs(c) < 1e-300:
                        continue
                    if v.oscillator == "A":
                        new_occ = OccupationState(m, occ.level_b, photons)
                    else:
                        new_occ = OccupationState(occ.level_a, m, photons)
                    out[new_occ] = out.get(new_occ, 0.0) + amp * c * photon_factor
        return StateVector(reg, out)

    def energy_of(self, occ: OccupationState) -> float:
        """Uncoupled energy hbar (omega_a n_a + omega_b n_b + sum omega_j n_j).

        Every kind contributes +hbar omega per quantum here: in the ordinary
        representation the scalar sector's sign lives in the metric, not in
        the diagonal.
        """
        p = self.params
        e = p.omega_a * occ.level_a + p.omega_b * occ.level_b
        for n, mode in zip(occ.photons, self.registry.modes):
            e += mode.omega * n
        return p.hbar * e


# ---------------------------------------------------------------------------
# Discrete second-order amplitude (operator route)
# ---------------------------------------------------------------------------

def discrete_second_order(
    params: SystemParams,
    registry: ModeRegistry,
    operator: InteractionOperator | None = None,
) -> complex:
    """Second-order amplitude of |0_A 1_B, no photons> on a finite registry.

    Sums intermediate states |l> != |n> of H|n> with energy denominators
    (E_n - E_m)(E_n - E_l); equals the Riemann-sum approximation of the four
    diagram integrands when the registry's weights are d^3k volumes.
    """
    if len(registry) == 0:
        return 0.0 + 0.0j
    op = operator or InteractionOperator(params, registry)
    start = StateVector.basis(registry, level_a=1, level_b=0)
    target_occ = OccupationState(0, 1, (0,) * len(registry))
    (start_occ,) = [occ for occ, _ in start.terms()]
    e_n = op.energy_of(start_occ)
    e_m = op.energy_of(target_occ)

    first = op.apply(start)
    weighted: dict[OccupationState, complex] = {}
    for occ, amp in first.terms():
        if occ == start_occ:
            continue  # the printed formula excludes |l> = |n>
        denom = e_n - op.energy_of(occ)
        if abs(denom) < 1e-12 * max(1.0, abs(e_n)):
            hot = [i for i, c in enumerate(occ.photons) if c > 0]
            mode_desc = ", ".join(
                f"mode {i} ({registry.modes[i].kind.value}, omega={registry.modes[i].omega})"
                for i in hot
            )
            raise ResonanceError(
                f"intermediate state degenerate with the start state via {mode_desc}; "
                "move the registry off the resonance"
            )
        weighted[occ] = amp / denom
    psi1 = StateVector(registry, weighted)
    second = op.apply(psi1)
    return second.amplitude(target_occ) / (e_n - e_m)


# ---------------------------------------------------------------------------
# Exact-diagonalization oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OracleResult:
    epsilon_exact: complex
    max_imag_eigenvalue: float  # of the metric-weighted (ordinarily Hermitian) matrix
    tracking_overlap: float  # winning |component| on the start basis state
    dimension: int


def _enumerate_photon_tuples(n_modes: int, per_mode: int, total: int):
    if n_modes == 0:
        yield ()
        return
    for head in range(min(per_mode, total) + 1):
        for tail in _enumerate_photon_tuples(n_modes - 1, per_mode, total - head):
            yield (head,) + tail


def exact_diagonalization_oracle(
    params: SystemParams,
    registry: ModeRegistry,
    total_photon_cap: int = 2,
    reality_tol: float = 1e-10,
) -> OracleResult:
    """Diagonalize the full coupled Hamiltonian on the truncated basis.

    Returns the |0_A 1_B, 0 photons> coefficient of the eigenvector
    continuously connected to |1_A 0_B, 0 photons>, normalized to unit
    coefficient on the latter.

    Self-adjointness under the indefinite metric makes metric-weight times
    matrix Hermitian in the ordinary sense, so a general eigensolve of the
    weighted matrix must return a real spectrum; a non-real eigenvalue there
    beyond reality_tol signals a sign bug in the couplings and raises.  The
    bare matrix is only pseudo-Hermitian, and truncation lets degenerate
    longitudinal/scalar photon levels mix into complex-conjugate pairs; those
    spectator branches are tolerated, but the tracked branch must stay real.
    """
    if len(registry) > 4:
        raise ValueError("oracle is meant for small registries (<= 4 modes)")
    op = InteractionOperator(params, registry, total_photon_cap=total_photon_cap)

    basis: list[OccupationState] = []
    for la in range(registry.n_max + 1):
        for lb in range(registry.n_max + 1):
            for photons in _enumerate_photon_tuples(
                len(registry), min(registry.p_max, total_photon_cap), total_photon_cap
            ):
                basis.append(OccupationState(la, lb, tuple(photons)))
    index = {occ: i for i, occ in enumerate(basis)}
    dim = len(basis)

    h = np.zeros((dim, dim), dtype=complex)
    for j, occ in enumerate(basis):
        h[j, j] = op.energy_of(occ)
        column = op.apply(StateVector.basis(registry, occ.level_a, occ.level_b,
                                            {i: c for i, c in enumerate(occ.photons) if c}))
        for out_occ, amp in column.terms():
            i = index.get(out_occ)
            if i is not None:
                h[i, j] += amp

    sign = registry.scalar_metric_sign
    eta = np.array(
        [float(sign ** registry.scalar_count(occ.photons)) for occ in basis]
    )
    weighted_vals = scipy.linalg.eigvals(eta[:, None] * h)
    scale = max(1.0, float(np.max(np.abs(weighted_vals.real))))
    max_imag = float(np.max(np.abs(weighted_vals.imag)))
    if max_imag > reality_tol * scale:
        raise OracleError(
            f"metric-weighted spectrum not real: max |Im(E)| = {max_imag:.3e} "
            "(self-adjointness under the metric is broken)"
        )

    eigvals, eigvecs = scipy.linalg.eig(h)
    i_start = index[OccupationState(1, 0, (0,) * len(registry))]
    i_target = index[OccupationState(0, 1, (0,) * len(registry))]
    norms = np.linalg.norm(eigvecs, axis=0)
    overlaps = np.abs(eigvecs[i_start, :]) / norms
    order = np.argsort(overlaps)[::-1]
    best, runner = order[0], order[1]
    if params.charge_q != 0 and overlaps[runner] > 0.75 * overlaps[best]:
        raise OracleError(
            "eigenvector tracking ambiguous: two branches overlap the start state "
            f"({overlaps[best]:.3f} vs {overlaps[runner]:.3f}); reduce the coupling"
        )
    if abs(eigvals[best].imag) > reality_tol * scale:
        raise OracleError(
            f"tracked eigenvalue is not real (Im = {eigvals[best].imag:.3e}); "
            "the perturbative branch merged into a complex pair - reduce the coupling"
        )
    vec = eigvecs[:, best]
    epsilon = vec[i_target] / vec[i_start]
    return OracleResult(
        epsilon_exact=complex(epsilon),
        max_imag_eigenvalue=max_imag,
        tracking_overlap=float(overlaps[best]),
        dimension=dim,
    )


def oracle_scaling_exponent(
    params: SystemParams,
    registry: ModeRegistry,
    total_photon_cap: int = 2,
) -> tuple[float, list[tuple[float, float]]]:
    """Fit |eps_pt - eps_exact| ~ q^p across charge q, q/2, q/4.

    Only even orders beyond the second survive (an odd number of photon
    vertices cannot return to the zero-photon sector), so p should be 4.
    Returns (fitted exponent, [(q, residual)] samples).
    """
    samples: list[tuple[float, float]] = []
    for divisor in (1.0, 2.0, 4.0):
        p_q = replace(params, charge_q=params.charge_q / divisor)
        op = InteractionOperator(p_q, registry)
        eps_pt = discrete_second_order(p_q, registry, operator=op)
        eps_ed = exact_diagonalization_oracle(p_q, registry, total_photon_cap).epsilon_exact
        samples.append((p_q.charge_q, abs(eps_pt - eps_ed)))
    (q0, r0), (_, r1), (_, r2) = samples
    if r0 == 0.0 and r1 == 0.0:
        return 4.0, samples  # exact agreement (e.g. q = 0): report the nominal order
    # least-squares slope in log-log across the three points
    qs = np.log([s[0] for s in samples])
    rs = np.log([max(s[1], 1e-300) for s in samples])
    slope = float(np.polyfit(qs, rs, 1)[0])
    return slope, samples
