"""Error-disturbance inequalities: comparison quantities, bounds and witnesses.

Every inequality here is expressed as ``lhs >= rhs``. The "L-quantities"
(``ozawa_lhs``, ``branciard_lhs``, ``l_new1``, ``l_new2``) are the
left-hand sides that are bounded below by C_AB, so a smaller L-quantity that
still sits above C_AB is the tighter statement.

Sign convention: a sign ``s`` in {+1, -1} stands for the upper/lower branch of
the +-/-+ pairs. The sum-relation sign makes ``s * i <psi|[A,B]|psi>``
nonnegative; the witness overlap it pairs with is ``<Psi|N_A + s i D_B|w>``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import qalg
from .errors import (
    AllSamplesDegenerate,
    DegenerateDenominator,
    DegenerateVariance,
    DenominatorVanishes,
    TightSubstitutionDomain,
    ZeroVector,
)
from .model import (
    HeisenbergFrame,
    MeasurementModel,
    NoiseDisturbanceStats,
    commutator_ab,
    heisenberg_frame,
    stats as model_stats,
)

SLACK_TOL = 1e-9
DENOM_GUARD = 1e-12
WITNESS_ORTH_TOL = 1e-8
DEFAULT_SAMPLES = 1000
_TIE_TOL = 1e-12


# -- signs -------------------------------------------------------------------

def sign_for(commutator_expectation: complex) -> int:
    """+1 if i<[X,Y]> is nonnegative, else -1. Zero resolves to +1."""
    return 1 if (1j * commutator_expectation).real >= -_TIE_TOL else -1


def sum_relation_sign(f: HeisenbergFrame) -> int:
    return sign_for(commutator_ab(f.model))


# -- variance-based relations -------------------------------------------------

def robertson_rhs(st: NoiseDisturbanceStats) -> float:
    return st.c_ab


def ozawa_lhs(st: NoiseDisturbanceStats) -> float:
    return st.epsilon_a * st.eta_b + st.epsilon_a * st.delta_b + st.delta_a * st.eta_b


def _branciard(eps, eta, da, db, c):
    radicand = max(da * da * db * db - c * c, 0.0)
    value = eps**2 * db**2 + eta**2 * da**2 + 2 * eps * eta * math.sqrt(radicand)
    return math.sqrt(max(value, 0.0))


def branciard_lhs(st: NoiseDisturbanceStats) -> float:
    return _branciard(st.epsilon_a, st.eta_b, st.delta_a, st.delta_b, st.c_ab)


def tight_eta(eta: float) -> float:
    """eta * sqrt(1 - eta^2 / 4); eta above 2 is clamped with a warning."""
    if eta > 2.0:
        warnings.warn(TightSubstitutionDomain(f"eta_b = {eta:.12g} > 2 clamped to 2"), stacklevel=2)
        eta = 2.0
    return eta * math.sqrt(max(1.0 - eta * eta / 4.0, 0.0))


def branciard_tight_lhs(st: NoiseDisturbanceStats) -> float:
    return _branciard(st.epsilon_a, tight_eta(st.eta_b), st.delta_a, st.delta_b, st.c_ab)


# -- sum relation with a witness ---------------------------------------------

def commutator_part(f: HeisenbergFrame, sign: Optional[int] = None) -> float:
    """s i<psi|[A,B]|psi> - s i<Psi|[M_out,B_in]|Psi> - s i<Psi|[A_in,B_out]|Psi>."""
    s = sum_relation_sign(f) if sign is None else sign
    big_psi = f.joint_state
    c_ab = commutator_ab(f.model)
    c_mb = qalg.expectation(qalg.commutator(f.m_out, f.b_in), big_psi)
    c_ab_out = qalg.expectation(qalg.commutator(f.a_in, f.b_out), big_psi)
    return float((s * 1j * (c_ab - c_mb - c_ab_out)).real)


def _witness_bra(f: HeisenbergFrame, s: int) -> np.ndarray:
    # <Psi|(N + s i D) as a row vector
    op = f.noise_op + s * 1j * f.disturbance_op
    return f.joint_state.conj() @ op


def _check_witness(f: HeisenbergFrame, w) -> np.ndarray:
    w = qalg.check_state(w, "witness")
    if abs(np.vdot(f.joint_state, w)) > WITNESS_ORTH_TOL:
        raise ValueError("witness is not orthogonal to the joint state")
    return w


def witness_term(f: HeisenbergFrame, w, sign: Optional[int] = None) -> float:
    """|<Psi|N_A + s i D_B|w>|^2 for a unit witness w orthogonal to Psi."""
    s = sum_relation_sign(f) if sign is None else sign
    w = _check_witness(f, w)
    return float(abs(_witness_bra(f, s) @ w) ** 2)


def optimal_witness(f: HeisenbergFrame, sign: Optional[int] = None) -> np.ndarray:
    """The Cauchy-Schwarz saturating witness P_perp (N_A - s i D_B)|Psi>, normalized.

    Raises ZeroVector when (N_A - s i D_B)|Psi> is parallel to |Psi>; every
    witness then gives a zero term.
    """
    s = sum_relation_sign(f) if sign is None else sign
    big_psi = f.joint_state
    v = (f.noise_op - s * 1j * f.disturbance_op) @ big_psi
    return qalg.normalize(qalg.project_orthogonal(v, big_psi))


def project_candidates(f: HeisenbergFrame, candidates) -> np.ndarray:
    """Project candidate states |r> onto the complement of |Psi>.

    The Heisenberg form U^+ (I - U|Psi><Psi|U^+) U |r> is evaluated alongside
    (I - |Psi><Psi|)|r> and the two must agree.
    """
    r = np.atleast_2d(np.asarray(candidates, dtype=complex))
    big_psi = f.joint_state
    u = f.model.coupling
    plain = qalg.project_orthogonal(r, big_psi)
    evolved = qalg.project_orthogonal(r @ u.T, u @ big_psi) @ u.conj()
    if np.max(np.abs(plain - evolved), initial=0.0) > qalg.ATOL:
        raise ArithmeticError("Heisenberg and Schroedinger witness projections disagree")
    return plain


def _normalized_rows(vectors: np.ndarray):
    norms = np.linalg.norm(vectors, axis=1)
    keep = norms > qalg.ZERO_NORM
    if not keep.any():
        raise AllSamplesDegenerate("every witness candidate is parallel to the joint state")
    return vectors[keep] / norms[keep, None]


def best_projected_witness(f: HeisenbergFrame, candidates, sign: Optional[int] = None):
    """(witness, term) maximizing the sum-relation witness term over the candidates."""
    s = sum_relation_sign(f) if sign is None else sign
    witnesses = _normalized_rows(project_candidates(f, candidates))
    values = np.abs(witnesses @ _witness_bra(f, s)) ** 2
    best = int(np.argmax(values))
    return witnesses[best], float(values[best])


def sampled_witness(f: HeisenbergFrame, sign: Optional[int], n: int, rng: np.random.Generator):
    if n < 1:
        raise ValueError("sample count must be >= 1")
    return best_projected_witness(f, qalg.haar_random_states(f.dim, n, rng), sign)


@dataclass(frozen=True)
class WitnessStrategy:
    """How the orthogonal witness state is chosen.

    ``sampled`` maximizes over ``sample_count`` Haar-random candidates drawn
    from ``seed``; ``optimal`` uses the closed-form maximizer; ``explicit``
    uses ``state`` as given.
    """

    kind: str = "sampled"
    sample_count: int = DEFAULT_SAMPLES
    seed: int = 0
    state: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("sampled", "optimal", "explicit"):
            raise ValueError(f"unknown witness kind {self.kind!r}")
        if self.kind == "sampled" and self.sample_count < 1:
            raise ValueError("sampled witness needs sample_count >= 1")
        if self.kind == "explicit":
            if self.state is None:
                raise ValueError("explicit witness needs a state")
            object.__setattr__(self, "state", qalg.check_state(self.state, "witness"))

    @classmethod
    def sampled(cls, n: int = DEFAULT_SAMPLES, seed: int = 0) -> "WitnessStrategy":
        return cls("sampled", sample_count=n, seed=seed)

    @classmethod
    def optimal(cls) -> "WitnessStrategy":
        return cls("optimal")

    @classmethod
    def explicit(cls, state) -> "WitnessStrategy":
        return cls("explicit", state=state)


def _fallback_witness(f: HeisenbergFrame) -> np.ndarray:
    return qalg.orthonormal_complement_basis(f.joint_state)[0]


def thm1_witness(f: HeisenbergFrame, strategy: WitnessStrategy, sign: Optional[int] = None):
    """Resolve a strategy to ``(witness, term)`` for the sum relation."""
    s = sum_relation_sign(f) if sign is None else sign
    if strategy.kind == "explicit":
        w = _check_witness(f, strategy.state)
        return w, witness_term(f, w, s)
    if strategy.kind == "optimal":
        try:
            w = optimal_witness(f, s)
        except ZeroVector:
            w = _fallback_witness(f)
        return w, witness_term(f, w, s)
    return sampled_witness(f, s, strategy.sample_count, qalg.make_rng(strategy.seed, 0))


def thm1_rhs(f: HeisenbergFrame, sign: Optional[int] = None, witness=None) -> float:
    """Right-hand side of the sum relation eps^2 + eta^2 >= ... .

    ``witness`` is a WitnessStrategy or an explicit state; the default is the
    optimal witness.
    """
    s = sum_relation_sign(f) if sign is None else sign
    if witness is None:
        witness = WitnessStrategy.optimal()
    elif not isinstance(witness, WitnessStrategy):
        witness = WitnessStrategy.explicit(witness)
    _, term = thm1_witness(f, witness, s)
    return commutator_part(f, s) + term


def l_new1(f: HeisenbergFrame, w, sign: Optional[int] = None) -> float:
    """Half of eps^2 + eta^2 + s i<[M_out,B_in]> + s i<[A_in,B_out]> - witness term."""
    s = sum_relation_sign(f) if sign is None else sign
    st = model_stats(f)
    big_psi = f.joint_state
    c_mb = qalg.expectation(qalg.commutator(f.m_out, f.b_in), big_psi)
    c_ab_out = qalg.expectation(qalg.commutator(f.a_in, f.b_out), big_psi)
    corrections = (s * 1j * (c_mb + c_ab_out)).real
    return 0.5 * (st.epsilon_a**2 + st.eta_b**2 + corrections - witness_term(f, w, s))


# -- product relation and the witnessed Ozawa form ---------------------------

def maccone_pati_bound(a, b, s, w, sign: Optional[int] = None) -> float:
    """Lower bound on dA * dB from the product-form stronger uncertainty relation.

    ``s`` is the state, ``w`` a unit state orthogonal to it. The sign
    defaults to the one making the numerator s (i/2) <[a,b]> nonnegative.
    """
    a, b = qalg.check_hermitian(a), qalg.check_hermitian(b)
    s, w = qalg.check_state(s), qalg.check_state(w, "witness")
    if abs(np.vdot(s, w)) > WITNESS_ORTH_TOL:
        raise ValueError("witness is not orthogonal to the state")
    da, db = math.sqrt(qalg.variance(a, s)), math.sqrt(qalg.variance(b, s))
    if da <= DENOM_GUARD or db <= DENOM_GUARD:
        raise DegenerateVariance(f"standard deviations {da:.3e}, {db:.3e}")
    c = qalg.expectation(qalg.commutator(a, b), s)
    sg = sign_for(c) if sign is None else sign
    numerator = (sg * 0.5j * c).real
    overlap = np.vdot(s, (a / da + sg * 1j * b / db) @ w)
    denominator = 1.0 - 0.5 * abs(overlap) ** 2
    if denominator <= DENOM_GUARD:
        raise DenominatorVanishes("witness saturates the product relation")
    return numerator / denominator


@dataclass(frozen=True)
class _New2Setup:
    base: float
    bras: tuple
    weights: tuple


def _new2_setup(f: HeisenbergFrame, sign: Optional[int] = None) -> _New2Setup:
    st = model_stats(f)
    for name in ("epsilon_a", "eta_b", "delta_a", "delta_b"):
        value = getattr(st, name)
        if value <= DENOM_GUARD:
            raise DegenerateDenominator(name, value)
    big_psi = f.joint_state
    n_op, d_op = f.noise_op, f.disturbance_op
    # (X, Y, dX, dY, denominator): pairs from -[A,B] = [N,D] + [A,D] + [N,B]
    terms = (
        (n_op, d_op, st.delta_n, st.delta_d, st.epsilon_a * st.eta_b),
        (f.a_in, d_op, st.delta_a, st.delta_d, st.delta_a * st.eta_b),
        (n_op, f.b_in, st.delta_n, st.delta_b, st.epsilon_a * st.delta_b),
    )
    bras, weights = [], []
    for x, y, dx, dy, denominator in terms:
        s = sign_for(qalg.expectation(qalg.commutator(x, y), big_psi)) if sign is None else sign
        bras.append(big_psi.conj() @ (x * dy + s * 1j * y * dx))
        weights.append(0.5 / denominator)
    return _New2Setup(ozawa_lhs(st), tuple(bras), tuple(weights))


def l_new2_subtractions(f: HeisenbergFrame, w, sign: Optional[int] = None) -> tuple:
    """The three subtracted witness terms of L_New^(2), in display order."""
    setup = _new2_setup(f, sign)
    w = _check_witness(f, w)
    return tuple(float(k * abs(bra @ w) ** 2) for bra, k in zip(setup.bras, setup.weights))


def l_new2(f: HeisenbergFrame, w, sign: Optional[int] = None) -> float:
    """Modified Ozawa quantity L_New^(2) at a single shared witness ``w``.

    With ``sign=None`` each subtracted term takes the sign set by its own
    commutator; an explicit sign is applied to all three terms.
    """
    setup = _new2_setup(f, sign)
    return setup.base - sum(l_new2_subtractions(f, w, sign))


def _new2_kernel(setup: _New2Setup) -> np.ndarray:
    return sum(k * np.outer(bra.conj(), bra) for bra, k in zip(setup.bras, setup.weights))


def l_new2_optimal_witness(f: HeisenbergFrame, sign: Optional[int] = None):
    """(witness, L_New^(2)) at the shared witness minimizing L_New^(2).

    The subtracted total is a positive semidefinite quadratic form in the
    witness, so the minimizer is its top eigenvector on the complement of Psi.
    """
    setup = _new2_setup(f, sign)
    q = np.column_stack(qalg.orthonormal_complement_basis(f.joint_state))
    reduced = q.conj().T @ _new2_kernel(setup) @ q
    evals, evecs = np.linalg.eigh((reduced + reduced.conj().T) / 2)
    w = q @ evecs[:, -1]
    return w / np.linalg.norm(w), setup.base - float(evals[-1])


def l_new2_sampled(f: HeisenbergFrame, n: int, rng: np.random.Generator, sign: Optional[int] = None):
    """(witness, L_New^(2)) minimized over ``n`` Haar-random candidates."""
    if n < 1:
        raise ValueError("sample count must be >= 1")
    setup = _new2_setup(f, sign)
    candidates = qalg.haar_random_states(f.dim, n, rng)
    witnesses = _normalized_rows(project_candidates(f, candidates))
    total = sum(k * np.abs(witnesses @ bra) ** 2 for bra, k in zip(setup.bras, setup.weights))
    best = int(np.argmax(total))
    return witnesses[best], setup.base - float(total[best])


# -- completeness relations ---------------------------------------------------

def eq21_rhs(f: HeisenbergFrame, sign: Optional[int] = None, basis=None) -> float:
    """sum-relation commutator part plus the witness term summed over a complete
    orthonormal complement of Psi (default: Gram-Schmidt basis)."""
    s = sum_relation_sign(f) if sign is None else sign
    if basis is None:
        basis = qalg.orthonormal_complement_basis(f.joint_state)
    bra = _witness_bra(f, s)
    return commutator_part(f, s) + float(sum(abs(bra @ e) ** 2 for e in basis))


def variance_sum_equality_check(f: HeisenbergFrame, sign: Optional[int] = None, basis=None):
    """Both sides of dN^2 + dD^2 = s i<[N,D]> + sum_k |<Psi|C + s i D|Psi_k>|^2.

    C and D are the mean-subtracted noise and disturbance operators.
    """
    s = sum_relation_sign(f) if sign is None else sign
    big_psi = f.joint_state
    if basis is None:
        basis = qalg.orthonormal_complement_basis(big_psi)
    n_op, d_op = f.noise_op, f.disturbance_op
    eye = np.eye(f.dim)
    c = n_op - qalg.expectation(n_op, big_psi).real * eye
    d = d_op - qalg.expectation(d_op, big_psi).real * eye
    lhs = qalg.variance(n_op, big_psi) + qalg.variance(d_op, big_psi)
    comm = (s * 1j * qalg.expectation(qalg.commutator(n_op, d_op), big_psi)).real
    bra = big_psi.conj() @ (c + s * 1j * d)
    rhs = comm + float(sum(abs(bra @ e) ** 2 for e in basis))
    return lhs, rhs


# -- aggregate report ---------------------------------------------------------

@dataclass
class BoundReport:
    stats: NoiseDisturbanceStats
    robertson_rhs: float
    ozawa_lhs: float
    branciard_lhs: float
    branciard_tight_lhs: float
    thm1_sum: float
    thm1_rhs: float
    thm1_witness: np.ndarray
    l_new1: float
    l_new2: Optional[float]
    l_new2_witness: Optional[np.ndarray]
    eq21_rhs: float
    slacks: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    absent: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        def vec(v):
            return None if v is None else [[float(z.real), float(z.imag)] for z in v]
        return {
            "stats": vars(self.stats),
            "robertson_rhs": self.robertson_rhs,
            "ozawa_lhs": self.ozawa_lhs,
            "branciard_lhs": self.branciard_lhs,
            "branciard_tight_lhs": self.branciard_tight_lhs,
            "thm1_sum": self.thm1_sum,
            "thm1_rhs": self.thm1_rhs,
            "thm1_witness": vec(self.thm1_witness),
            "l_new1": self.l_new1,
            "l_new2": self.l_new2,
            "l_new2_witness": vec(self.l_new2_witness),
            "eq21_rhs": self.eq21_rhs,
            "slacks": dict(self.slacks),
            "flags": dict(self.flags),
            "absent": dict(self.absent),
            "notes": list(self.notes),
        }


def bound_report(m: MeasurementModel, strategy: WitnessStrategy = WitnessStrategy()) -> BoundReport:
    """Evaluate every relation for one model.

    Explicit and optimal strategies share one witness between the sum relation and
    L_New^(2); the sampled strategy draws each from its own sub-stream of
    ``strategy.seed``.
    """
    f = heisenberg_frame(m)
    st = model_stats(f)
    s = sum_relation_sign(f)
    notes = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TightSubstitutionDomain)
        brt = branciard_tight_lhs(st)
    if caught:
        notes.append("branciard_tight: eta_b > 2 clamped to 2")

    witness, term = thm1_witness(f, strategy, s)
    thm1 = commutator_part(f, s) + term
    thm1_sum = st.epsilon_a**2 + st.eta_b**2

    absent = {}
    new2 = new2_witness = None
    try:
        if strategy.kind == "sampled":
            new2_witness, new2 = l_new2_sampled(f, strategy.sample_count, qalg.make_rng(strategy.seed, 1))
        else:
            new2_witness, new2 = witness, l_new2(f, witness)
    except DegenerateDenominator as exc:
        absent["thm2"] = str(exc)

    report = BoundReport(
        stats=st,
        robertson_rhs=robertson_rhs(st),
        ozawa_lhs=ozawa_lhs(st),
        branciard_lhs=branciard_lhs(st),
        branciard_tight_lhs=brt,
        thm1_sum=thm1_sum,
        thm1_rhs=thm1,
        thm1_witness=witness,
        l_new1=l_new1(f, witness, s),
        l_new2=new2,
        l_new2_witness=new2_witness,
        eq21_rhs=eq21_rhs(f, s),
        absent=absent,
        notes=notes,
    )
    c = st.c_ab
    slacks = {
        "robertson": st.delta_a * st.delta_b - c,
        "ozawa": report.ozawa_lhs - c,
        "branciard": report.branciard_lhs - c,
        "branciard_tight": report.branciard_tight_lhs - c,
        "thm1": thm1_sum - thm1,
        "new1": report.l_new1 - c,
        "eq21": thm1_sum - report.eq21_rhs,
    }
    if new2 is not None:
        slacks["thm2"] = new2 - c
    report.slacks = slacks
    report.flags = {k: v >= -SLACK_TOL for k, v in slacks.items()}
    return report
