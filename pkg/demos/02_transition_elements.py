"""Single-vertex matrix elements: closed forms against the grid oracle.

The ground-to-first element of exp(-i k_x x) for a harmonic oscillator is
-(i k_x d) times a Gaussian in k_x d.  The oracle recomputes it by brute-force
Gauss-Hermite quadrature on the real-space wavefunctions, so agreement here
validates every emission/absorption element downstream.
"""

import numpy as np

from gaugepair.core import SystemParams
from gaugepair.matelem import (
    OscillatorId,
    form_factor_oracle,
    gaussian_form_factor,
    longitudinal_absorption,
    longitudinal_emission,
    scalar_absorption,
    scalar_emission,
)

PARAMS = SystemParams()


def main() -> None:
    print("closed form vs quadrature oracle, ground -> first element of exp(-i k_x x)")
    print(f"{'k_x d':>8} {'closed':>24} {'oracle':>24} {'rel err':>10}")
    for kd in (1e-3, 0.1, 0.5, 1.0, 2.0, 3.0):
        k_x = kd / PARAMS.dipole_d
        closed = -1j * kd * gaussian_form_factor(PARAMS, k_x)
        oracle = form_factor_oracle(PARAMS, OscillatorId.A, k_x)
        rel = abs(oracle - closed) / abs(closed)
        print(f"{kd:>8.3f} {closed:>24.15e} {oracle:>24.15e} {rel:>10.2e}")

    k = (0.7, 0.2, -0.4)
    print()
    print(f"conjugation structure of the vertex elements at k = {k}")
    se, sa = scalar_emission(PARAMS, OscillatorId.A, k), scalar_absorption(PARAMS, OscillatorId.A, k)
    le, la = longitudinal_emission(PARAMS, OscillatorId.A, k), longitudinal_absorption(PARAMS, OscillatorId.A, k)
    print(f"  scalar:        absorption = {sa:+.6e}")
    print(f"                -conj(emit)  = {-np.conj(se):+.6e}   (metric adjoint: extra sign)")
    print(f"  longitudinal:  absorption = {la:+.6e}")
    print(f"                +conj(emit)  = {np.conj(le):+.6e}   (ordinary-norm mode: no sign)")

    print()
    print("longitudinal/scalar interference at the emitter")
    print("  emission ratio long/scalar = -(oscillator freq)/(photon freq):")
    print(f"{'|k| c / omega_a':>16} {'measured ratio':>16} {'expected':>12}")
    for scale in (0.5, 1.0, 2.0):
        omega = scale * PARAMS.omega_a
        kv = (omega / PARAMS.c, 0.0, 0.0)
        ratio = (longitudinal_emission(PARAMS, OscillatorId.A, kv)
                 / scalar_emission(PARAMS, OscillatorId.A, kv)).real
        print(f"{scale:>16.2f} {ratio:>+16.6f} {-1.0 / scale:>+12.6f}")
    print("  at |k| c = omega_a the two kinds cancel exactly in the emission sum.")


if __name__ == "__main__":
    main()
