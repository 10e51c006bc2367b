"""Indirect measurement models and their Heisenberg-picture evolution.

A model couples a system (state ``psi``, observables ``A`` and ``B``) to a
probe (state ``phi_p``, estimator ``M``) through a unitary ``U`` on
system (x) probe. The joint ordering is always system first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import qalg
from .errors import DimensionMismatch, NonNormalized, UnknownScenario

SCENARIOS = ("fig1", "fig2", "fig3")
FIG3_LAMBDA = 0.01

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli(axis: str) -> np.ndarray:
    try:
        return _PAULI[axis.lower()].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def projector(index: int, d: int) -> np.ndarray:
    """Rank-one projector |index><index| in dimension ``d``."""
    p = np.zeros((d, d), dtype=complex)
    p[index, index] = 1.0
    return p


def basis_state(index: int, d: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[index] = 1.0
    return v


def rotation_unitary(alpha, beta) -> np.ndarray:
    """The qubit unitary [[alpha, -conj(beta)], [beta, alpha]] with u|0> = alpha|0> + beta|1>.

    ``alpha`` must be real; for complex ``alpha`` this matrix is not unitary.
    """
    alpha, beta = complex(alpha), complex(beta)
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > qalg.ATOL:
        raise NonNormalized(f"|alpha|^2 + |beta|^2 = {abs(alpha) ** 2 + abs(beta) ** 2:.12g}")
    if abs(alpha.imag) > qalg.ATOL:
        raise ValueError("alpha must be real")
    a = alpha.real
    return np.array([[a, -beta.conjugate()], [beta, a]], dtype=complex)


def rotated_pauli(u, p) -> np.ndarray:
    u, p = qalg.as_operator(u), qalg.as_operator(p)
    return u @ p @ qalg.dagger(u)


def cnot() -> np.ndarray:
    """P0 (x) I + P1 (x) sigma_x, controlled on the system qubit."""
    return qalg.tensor(projector(0, 2), identity(2)) + qalg.tensor(projector(1, 2), pauli("x"))


@dataclass(frozen=True)
class MeasurementModel:
    system_state: np.ndarray
    probe_state: np.ndarray
    observable_a: np.ndarray
    observable_b: np.ndarray
    estimator_m: np.ndarray
    coupling: np.ndarray

    def __post_init__(self):
        psi = qalg.check_state(self.system_state, "system_state")
        phi = qalg.check_state(self.probe_state, "probe_state")
        a = qalg.check_hermitian(self.observable_a, "observable_a")
        b = qalg.check_hermitian(self.observable_b, "observable_b")
        m = qalg.check_hermitian(self.estimator_m, "estimator_m")
        u = qalg.check_unitary(self.coupling, "coupling")
        ds, dp = psi.shape[0], phi.shape[0]
        if a.shape != (ds, ds) or b.shape != (ds, ds):
            raise DimensionMismatch("observables must act on the system space")
        if m.shape != (dp, dp):
            raise DimensionMismatch("estimator must act on the probe space")
        if u.shape != (ds * dp, ds * dp):
            raise DimensionMismatch("coupling must act on system (x) probe")
        for name, value in (("system_state", psi), ("probe_state", phi), ("observable_a", a),
                            ("observable_b", b), ("estimator_m", m), ("coupling", u)):
            value = value.copy()
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def system_dim(self) -> int:
        return self.system_state.shape[0]

    @property
    def probe_dim(self) -> int:
        return self.probe_state.shape[0]

    def to_dict(self) -> dict:
        """JSON-friendly form; complex entries become ``[re, im]`` pairs."""
        def enc(x):
            return np.stack([x.real, x.imag], axis=-1).tolist()
        return {
            "system_state": enc(self.system_state),
            "probe_state": enc(self.probe_state),
            "observable_a": enc(self.observable_a),
            "observable_b": enc(self.observable_b),
            "estimator_m": enc(self.estimator_m),
            "coupling": enc(self.coupling),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MeasurementModel":
        def dec(x):
            x = np.asarray(x, dtype=float)
            return x[..., 0] + 1j * x[..., 1]
        return cls(**{k: dec(v) for k, v in data.items()})


@dataclass(frozen=True)
class HeisenbergFrame:
    model: MeasurementModel
    joint_state: np.ndarray
    a_in: np.ndarray
    b_in: np.ndarray
    m_in: np.ndarray
    a_out: np.ndarray
    b_out: np.ndarray
    m_out: np.ndarray
    noise_op: np.ndarray = field(repr=False)
    disturbance_op: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.joint_state.shape[0]


def heisenberg_frame(m: MeasurementModel) -> HeisenbergFrame:
    ds, dp = m.system_dim, m.probe_dim
    u = m.coupling
    ud = qalg.dagger(u)
    a_in = qalg.tensor(m.observable_a, identity(dp))
    b_in = qalg.tensor(m.observable_b, identity(dp))
    m_in = qalg.tensor(identity(ds), m.estimator_m)
    a_out = ud @ a_in @ u
    b_out = ud @ b_in @ u
    m_out = ud @ m_in @ u
    return HeisenbergFrame(
        model=m,
        joint_state=np.kron(m.system_state, m.probe_state),
        a_in=a_in, b_in=b_in, m_in=m_in,
        a_out=a_out, b_out=b_out, m_out=m_out,
        noise_op=m_out - a_in,
        disturbance_op=b_out - b_in,
    )


def _rms(op, state) -> float:
    # <op^2> = ||op psi||^2 for Hermitian op
    return float(np.linalg.norm(op @ state))


def epsilon_a(f: HeisenbergFrame) -> float:
    """Root-mean-square noise sqrt(<Psi|(M_out - A_in)^2|Psi>)."""
    return _rms(f.noise_op, f.joint_state)


def eta_b(f: HeisenbergFrame) -> float:
    """Root-mean-square disturbance sqrt(<Psi|(B_out - B_in)^2|Psi>)."""
    return _rms(f.disturbance_op, f.joint_state)


@dataclass(frozen=True)
class NoiseDisturbanceStats:
    epsilon_a: float
    eta_b: float
    delta_a: float
    delta_b: float
    delta_n: float
    delta_d: float
    c_ab: float


def commutator_ab(m: MeasurementModel) -> complex:
    """<psi|[A, B]|psi> on the system state (purely imaginary)."""
    return qalg.expectation(qalg.commutator(m.observable_a, m.observable_b), m.system_state)


def stats(m) -> NoiseDisturbanceStats:
    """Noise, disturbance, standard deviations and C_AB for a model or frame."""
    f = m if isinstance(m, HeisenbergFrame) else heisenberg_frame(m)
    model = f.model
    psi, big_psi = model.system_state, f.joint_state
    return NoiseDisturbanceStats(
        epsilon_a=epsilon_a(f),
        eta_b=eta_b(f),
        delta_a=math.sqrt(qalg.variance(model.observable_a, psi)),
        delta_b=math.sqrt(qalg.variance(model.observable_b, psi)),
        delta_n=math.sqrt(qalg.variance(f.noise_op, big_psi)),
        delta_d=math.sqrt(qalg.variance(f.disturbance_op, big_psi)),
        c_ab=0.5 * abs(commutator_ab(model)),
    )


@dataclass(frozen=True)
class ScenarioParams:
    """State angle/phase for the qubit scenarios, plus the fig3 scale factor."""

    theta: float = 0.0
    phi: float = 0.0
    lam: float = FIG3_LAMBDA

    @property
    def alpha(self) -> complex:
        return complex(math.cos(self.theta))

    @property
    def beta(self) -> complex:
        return math.sin(self.theta) * complex(math.cos(self.phi), math.sin(self.phi))


def scenario_model(name: str, params: ScenarioParams = ScenarioParams()) -> MeasurementModel:
    """Build one of the worked qubit examples.

    All three use the probe in |1>, estimator sigma_x on the probe and CNOT
    coupling. ``fig1`` rotates the observables by u (A = u sx u^+,
    B = u sy u^+, psi = u|0>) while M stays unrotated; ``fig2`` fixes A = sx,
    B = sy with psi = alpha|0> + beta|1>; ``fig3`` is fig2 with A scaled by
    ``params.lam``.
    """
    sx, sy = pauli("x"), pauli("y")
    alpha, beta = params.alpha, params.beta
    if name == "fig1":
        u = rotation_unitary(alpha, beta)
        psi = u @ basis_state(0, 2)
        a, b = rotated_pauli(u, sx), rotated_pauli(u, sy)
    elif name in ("fig2", "fig3"):
        psi = np.array([alpha, beta], dtype=complex)
        a, b = sx, sy
        if name == "fig3":
            a = params.lam * sx
    else:
        raise UnknownScenario(f"unknown scenario {name!r}; expected one of {SCENARIOS}")
    return MeasurementModel(
        system_state=psi,
        probe_state=basis_state(1, 2),
        observable_a=a,
        observable_b=b,
        estimator_m=sx,
        coupling=cnot(),
    )
