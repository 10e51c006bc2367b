"""Randomized soundness suite over random qubit-qubit measurement models."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import bounds, qalg
from ..errors import DegenerateDenominator, DegenerateVariance, DenominatorVanishes, ZeroVector
from ..model import MeasurementModel, heisenberg_frame, stats

TOL = bounds.SLACK_TOL
DOMINANCE_SAMPLES = 100

CHECKS = (
    "robertson", "ozawa", "branciard", "thm1_random", "thm1_optimal", "thm2",
    "eq21", "eq21_chain", "equality", "dominance", "basis_independence", "product_relation",
)


@dataclass
class VerifyResult:
    seed: int
    trials: int
    evaluated: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 2


def random_model(rng: np.random.Generator, system_dim: int = 2, probe_dim: int = 2) -> MeasurementModel:
    """Haar states and coupling with random Hermitian A, B and M."""
    return MeasurementModel(
        system_state=qalg.haar_random_state(system_dim, rng),
        probe_state=qalg.haar_random_state(probe_dim, rng),
        observable_a=qalg.random_hermitian(system_dim, rng),
        observable_b=qalg.random_hermitian(system_dim, rng),
        estimator_m=qalg.random_hermitian(probe_dim, rng),
        coupling=qalg.random_unitary(system_dim * probe_dim, rng),
    )


def random_orthogonal_state(s, rng) -> np.ndarray:
    while True:
        v = qalg.project_orthogonal(qalg.haar_random_state(s.shape[0], rng), s)
        if np.linalg.norm(v) > 1e-6:
            return qalg.normalize(v)


def rotated_complement_basis(s, rng) -> list[np.ndarray]:
    """A second orthonormal complement of ``s``: the Gram-Schmidt one mixed by a random unitary."""
    q = np.column_stack(qalg.orthonormal_complement_basis(s))
    q = q @ qalg.random_unitary(q.shape[1], rng)
    return [q[:, k] for k in range(q.shape[1])]


def check_trial(model: MeasurementModel, rng: np.random.Generator) -> list[tuple]:
    """Return ``(check, lhs, rhs)`` triples, each asserting lhs >= rhs (or equality)."""
    f = heisenberg_frame(model)
    st = stats(f)
    c = st.c_ab
    total = st.epsilon_a**2 + st.eta_b**2
    w = random_orthogonal_state(f.joint_state, rng)
    thm1_random = bounds.thm1_rhs(f, witness=w)
    eq21 = bounds.eq21_rhs(f)
    out = [
        ("robertson", st.delta_a * st.delta_b, c),
        ("ozawa", bounds.ozawa_lhs(st), c),
        ("branciard", bounds.branciard_lhs(st), c),
        ("thm1_random", total, thm1_random),
        ("thm1_optimal", total, bounds.thm1_rhs(f, witness=bounds.WitnessStrategy.optimal())),
        ("eq21", total, eq21),
        ("eq21_chain", eq21, thm1_random),
    ]
    try:
        out.append(("thm2", bounds.l_new2(f, w), c))
    except DegenerateDenominator:
        pass

    lhs, rhs = bounds.variance_sum_equality_check(f)
    out.append(("equality", -abs(lhs - rhs), 0.0))

    try:
        optimal = bounds.witness_term(f, bounds.optimal_witness(f))
    except ZeroVector:
        optimal = 0.0
    _, sampled = bounds.sampled_witness(f, None, DOMINANCE_SAMPLES, rng)
    out.append(("dominance", optimal, sampled))

    other = bounds.eq21_rhs(f, basis=rotated_complement_basis(f.joint_state, rng))
    out.append(("basis_independence", -abs(eq21 - other), 0.0))

    psi = model.system_state
    try:
        bound = bounds.maccone_pati_bound(model.observable_a, model.observable_b, psi,
                                          random_orthogonal_state(psi, rng))
        out.append(("product_relation", st.delta_a * st.delta_b, bound))
    except (DegenerateVariance, DenominatorVanishes):
        pass
    return out


def verify(seed: int, trials: int) -> VerifyResult:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    result = VerifyResult(seed=seed, trials=trials, evaluated={k: 0 for k in CHECKS})
    for t in range(trials):
        rng = qalg.make_rng(seed, t)
        model = random_model(rng)
        for name, lhs, rhs in check_trial(model, rng):
            result.evaluated[name] += 1
            if lhs - rhs < -TOL:
                result.violations.append({
                    "trial": t,
                    "check": name,
                    "lhs": float(lhs),
                    "rhs": float(rhs),
                    "slack": float(lhs - rhs),
                    "model": model.to_dict(),
                })
    return result


def replay(seed: int, trial: int) -> list[tuple]:
    """Re-run one trial of ``verify(seed, ...)`` exactly."""
    rng = qalg.make_rng(seed, trial)
    return check_trial(random_model(rng), rng)
