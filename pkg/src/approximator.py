"""Iterative compilation of a leakage-free entangling gate

The map U -> U D U^-1 D U D^-2 contracts the off-diagonal part of the
V = span{|NC>, |tt>} block of U toward zero while leaving diagonal blocks
untouched. Starting from the V-preserving words D = (s2 s1 s1 s2)^3 and
U_0 = s3, the limit is diagonal, hence leakage-free, and entangling.

The iteration runs in floating point on the V and V_perp blocks separately,
with a polar re-projection onto the unitary group after every step. The braid word is tracked alongside as a
WordSketch since its length grows roughly threefold per step.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from src.braid import BraidWord, WordSketch
from src.config import get_approximation_config, settings
from src.gate_analysis import (
    GateReport,
    diagonal_entangling_gap,
    fixed_states,
    is_entangling_diagonal,
    is_leakage_free,
    preserves_v,
)
from src.monitoring import MetricsCollector
from src.representation import V_INDICES, V_PERP_INDICES, Backend, default_representation
from src.utils import PerformanceMonitor

logger = logging.getLogger(__name__)

DEFAULT_D_WORD = BraidWord(6, (2, 1, 1, 2) * 3)
DEFAULT_U_WORD = BraidWord(6, (3,))


class PreconditionError(ValueError):
    """Hypotheses of the contraction bound do not hold"""


class ConvergenceError(RuntimeError):
    """Iteration did not reach the tolerance; carries the full trace"""

    def __init__(self, message: str, trace: Sequence["IterationState"]):
        super().__init__(message)
        self.trace = list(trace)


@dataclass(frozen=True)
class DiagonalGate:
    """gamma * diag(exp(-i theta/2), exp(i theta/2))"""

    theta: float
    gamma: complex = 1.0

    def __post_init__(self):
        if not -np.pi <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [-pi, pi], got {self.theta}")

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "DiagonalGate":
        d0, d1 = complex(m[0, 0]), complex(m[1, 1])
        theta = float(np.angle(d1 / d0))
        gamma = d0 * np.exp(1j * theta / 2)
        return cls(theta=theta, gamma=complex(gamma / abs(gamma)))

    def matrix(self) -> np.ndarray:
        half = self.theta / 2
        return self.gamma * np.diag([np.exp(-1j * half), np.exp(1j * half)])


@dataclass
class IterationState:
    k: int
    matrix: np.ndarray
    word: WordSketch
    b: float
    a: complex
    epsilon: float

    @property
    def v_block(self) -> np.ndarray:
        return v_block(self.matrix)

    @property
    def word_length(self) -> int:
        return self.word.length

    def to_json(self) -> Dict:
        return {
            "k": self.k,
            "b": self.b,
            "a_re": self.a.real,
            "a_im": self.a.imag,
            "word_len": self.word_length,
            "epsilon": self.epsilon,
        }


@dataclass
class CompilationResult:
    word: WordSketch
    gate: np.ndarray
    report: GateReport
    trace: List[IterationState]
    theta: float
    epsilon: float
    limit: Dict = field(default_factory=dict)
    d_word: Optional[BraidWord] = None
    u_word: Optional[BraidWord] = None
    # mean milliseconds per matrix_step / word_step
    timings: Dict[str, float] = field(default_factory=dict)


def v_block(m: np.ndarray) -> np.ndarray:
    if m.shape == (2, 2):
        return m
    return m[np.ix_(V_INDICES, V_INDICES)]


def perp_block(m: np.ndarray) -> np.ndarray:
    return m[np.ix_(V_PERP_INDICES, V_PERP_INDICES)]


def embed_blocks(v: np.ndarray, v_perp: np.ndarray) -> np.ndarray:
    """5x5 matrix with v on V, v_perp on V_perp and zeros elsewhere"""
    m = np.zeros((5, 5), dtype=complex)
    m[np.ix_(V_INDICES, V_INDICES)] = v
    m[np.ix_(V_PERP_INDICES, V_PERP_INDICES)] = v_perp
    return m


def project_unitary(m: np.ndarray) -> np.ndarray:
    """Nearest unitary in Frobenius norm (polar factor)"""
    w, _, vh = np.linalg.svd(m)
    return w @ vh


def iterate_step(u: np.ndarray, d: np.ndarray, trailing_inverse: bool = True) -> np.ndarray:
    """U D U^-1 D U D^-2, or U D U^-1 D U without the trailing factor"""
    if isinstance(d, DiagonalGate):
        d = d.matrix()
    u_inv = u.conj().T
    out = u @ d @ u_inv @ d @ u
    if trailing_inverse:
        d_inv = d.conj().T
        out = out @ d_inv @ d_inv
    return project_unitary(out)


def word_step(
    w: Union[BraidWord, WordSketch],
    d: Union[BraidWord, WordSketch],
    trailing_inverse: bool = True,
    window: Optional[int] = None,
    max_letters: Optional[int] = None,
) -> Union[BraidWord, WordSketch]:
    """w d w^-1 d w d^-2, freely reduced"""
    if isinstance(w, BraidWord) and isinstance(d, BraidWord):
        out = w * d * w.inverse() * d * w
        return out * (d.inverse() ** 2) if trailing_inverse else out
    window = window or settings.word_window
    max_letters = max_letters or settings.max_word_letters
    if isinstance(w, BraidWord):
        w = WordSketch.of(w, window)
    if isinstance(d, BraidWord):
        d = WordSketch.of(d, window)
    factors = [d, w.inverse(), d, w]
    if trailing_inverse:
        factors += [d.inverse(), d.inverse()]
    out = w
    for factor in factors:
        out = out.compose(factor, window, max_letters)
    return out


def iterate_unitary(
    u0: np.ndarray, d: Union[np.ndarray, DiagonalGate], steps: int, trailing_inverse: bool = True
) -> List[np.ndarray]:
    """[U_0, U_1, ..., U_steps] for a 2x2 (or any square) unitary"""
    if isinstance(d, DiagonalGate):
        d = d.matrix()
    iterates = [np.asarray(u0, dtype=complex)]
    for _ in range(steps):
        iterates.append(iterate_step(iterates[-1], d, trailing_inverse))
    return iterates


def off_diagonal(u: np.ndarray) -> float:
    return float(abs(v_block(u)[0, 1]))


def check_contraction_hypotheses(theta: float, delta: float) -> None:
    if not abs(theta) < np.pi / 2:
        raise PreconditionError(f"|theta| must be below pi/2, got {theta}")
    if theta == 0:
        raise PreconditionError("theta must be nonzero")
    if not 0 <= delta < 1:
        raise PreconditionError(f"Off-diagonal magnitude must lie in [0, 1), got {delta}")


def contraction_bound(theta: float, delta: float, literal: bool = False) -> float:
    """Supremum over |b| <= delta of the per-step factor |(2 - 2cos theta)(1 - |b|^2) - 1|

    With `literal`, the second branch is taken without its absolute value.
    """
    check_contraction_hypotheses(theta, delta)
    c = 2.0 - 2.0 * np.cos(theta)
    edge = c * (1.0 - delta**2) - 1.0
    return float(max(abs(1.0 - 2.0 * np.cos(theta)), edge if literal else abs(edge)))


def su2_lift(word: BraidWord) -> np.ndarray:
    """rho_3 image with each letter scaled by exp(+-i pi/10) to determinant one"""
    m = default_representation().evaluate(word, Backend.FLOAT)
    return m * np.exp(1j * np.pi / 10 * word.exponent_sum)


def rotation_axis(u: np.ndarray) -> np.ndarray:
    """Unit Bloch axis n of U ~ cos(t/2) I - i sin(t/2) n.sigma"""
    su = u / np.sqrt(np.linalg.det(u))
    alpha, beta = su[0, 0], su[0, 1]
    n = np.array([-beta.imag, -beta.real, -alpha.imag])
    norm = np.linalg.norm(n)
    if norm < 1e-15:
        return np.array([0.0, 0.0, 1.0])
    n = n / norm
    return n if n[2] >= 0 else -n


def check_density_witnesses() -> Dict:
    """Two SU(2) elements from squared generators, with irrational rotation angles, that do not commute"""
    u1 = su2_lift(BraidWord(3, (1, 1, 2, 2, 2, 2)))
    u2 = su2_lift(BraidWord(3, (1, 1, 2, 2, 2, 2, 2, 2)))
    real_parts = [float(np.trace(u).real / 2) for u in (u1, u2)]
    expected = [(-2 + np.sqrt(5)) / 2, (-3 + np.sqrt(5)) / 2]
    commutator = u1 @ u2 @ u1.conj().T @ u2.conj().T
    phase = np.exp(1j * np.angle(np.trace(commutator)))
    distance = float(np.linalg.norm(commutator - phase * np.eye(2)))
    passed = (
        all(abs(r - e) < 1e-12 for r, e in zip(real_parts, expected)) and distance > 1e-6
    )
    return {
        "real_parts": real_parts,
        "expected_real_parts": expected,
        "commutator_distance": distance,
        "passed": passed,
    }


def _check_v_preserving(word: BraidWord, role: str) -> None:
    exact = default_representation().evaluate(word, Backend.EXACT)
    if not preserves_v(exact):
        raise PreconditionError(f"{role} word '{word}' does not preserve V = span{{|NC>, |tt>}}")


def limit_report(gate: np.ndarray) -> Dict:
    diag = np.diag(gate)
    lambdas = diag[1:]
    return {
        "phases": [float(x) for x in np.angle(diag)],
        "u55": [float(gate[4, 4].real), float(gate[4, 4].imag)],
        "diagonal_gap": diagonal_entangling_gap(lambdas),
    }


def compile_entangler(
    d_word: BraidWord = DEFAULT_D_WORD,
    u_word: BraidWord = DEFAULT_U_WORD,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    trailing_inverse: bool = True,
    max_word_letters: Optional[int] = None,
    window: Optional[int] = None,
    metrics: Optional[MetricsCollector] = None,
) -> CompilationResult:
    """Iterate U_0 = rho_6(u_word) against D = rho_6(d_word) until the V-block is diagonal"""
    defaults = get_approximation_config()
    tol = defaults["tol"] if tol is None else tol
    max_iter = defaults["max_iter"] if max_iter is None else max_iter
    max_word_letters = max_word_letters or defaults["max_word_letters"]
    window = window or defaults["word_window"]
    monitor = PerformanceMonitor()

    _check_v_preserving(d_word, "Diagonal")
    _check_v_preserving(u_word, "Initial")
    representation = default_representation()
    d = representation.evaluate(d_word, Backend.FLOAT)
    u = representation.evaluate(u_word, Backend.FLOAT)
    d_v = v_block(d)
    if abs(d_v[0, 1]) > settings.leakage_tolerance or abs(d_v[1, 0]) > settings.leakage_tolerance:
        raise PreconditionError(f"V-block of '{d_word}' is not diagonal")
    theta = DiagonalGate.from_matrix(d_v).theta
    delta = off_diagonal(u)
    epsilon = contraction_bound(theta, delta)
    logger.info(f"Compiling from theta={theta:.6f}, b0={delta:.12f}, epsilon={epsilon:.6f}")

    # Both words preserve V exactly, so the blocks are iterated separately
    # and the cross entries stay exactly zero.
    u_v, u_perp = v_block(u), perp_block(u)
    d_perp = perp_block(d)
    u = embed_blocks(u_v, u_perp)

    d_sketch = WordSketch.of(d_word, window)
    word = WordSketch.of(u_word, window)
    trace: List[IterationState] = []
    for k in range(max_iter + 1):
        b = off_diagonal(u)
        state = IterationState(k=k, matrix=u, word=word, b=b, a=complex(u[0, 0]), epsilon=epsilon)
        trace.append(state)
        if k > 0 and metrics is not None:
            metrics.record_iteration(b)
        logger.debug(f"k={k} b={b:.3e} word_len={word.length}")
        if b < tol:
            break
        if k == max_iter:
            logger.error(f"No convergence after {max_iter} iterations, b={b:.3e}")
            raise ConvergenceError(
                f"Off-diagonal {b:.3e} still above tolerance {tol:.1e} after {max_iter} iterations",
                trace,
            )
        with monitor.timed("matrix_step"):
            u_v = iterate_step(u_v, d_v, trailing_inverse)
            u_perp = iterate_step(u_perp, d_perp, trailing_inverse)
            u = embed_blocks(u_v, u_perp)
        with monitor.timed("word_step"):
            word = word_step(word, d_sketch, trailing_inverse, window, max_word_letters)

    lambdas = np.diag(u)[1:]
    leakage_free = is_leakage_free(u)
    report = GateReport(
        leakage_free=leakage_free,
        entangling=is_entangling_diagonal(lambdas) if leakage_free else None,
        fixed_states=fixed_states(u),
        preserves_v=preserves_v(u),
    )
    result = CompilationResult(
        word=word,
        gate=u,
        report=report,
        trace=trace,
        theta=theta,
        epsilon=epsilon,
        limit=limit_report(u),
        d_word=d_word,
        u_word=u_word,
        timings=monitor.get_summary(),
    )
    logger.info(
        f"Converged in {len(trace) - 1} iterations; word length {word.length}, "
        f"diagonal gap {result.limit['diagonal_gap']:.6f}"
    )
    return result


def emit_word(result: CompilationResult, path: Union[str, Path]) -> None:
    """Write the straight-line program for the final word, and the word itself if materialised"""
    steps = len(result.trace) - 1
    lines = [
        f"# w_0 = {result.u_word}",
        f"# d = {result.d_word}",
        "# w_{k+1} = w_k d w_k^-1 d w_k d^-2, freely reduced",
        f"# k = {steps}",
        f"# length(w_{steps}) = {result.word.length}",
    ]
    if result.word.is_explicit:
        lines.append(str(result.word.to_word()))
    else:
        lines.append("# word not materialised: longer than the explicit-word limit")
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text("\n".join(lines) + "\n")
    logger.info(f"Wrote word program to {target}")
