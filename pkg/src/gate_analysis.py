"""Gate classification: leakage, entanglement, fixed states and V-preservation

Functions accept either an ExactMatrix (exact backend, zero tolerance) or a
numpy array (float backend, tolerances from settings).
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, model_validator

from src.config import settings
from src.number_field import ONE, FieldElement
from src.representation import (
    COMPUTATIONAL_INDICES,
    V_INDICES,
    V_PERP_INDICES,
    ExactMatrix,
    FloatMatrix,
    format_complex,
    swap_gate,
)
from src.utils import hash_value

logger = logging.getLogger(__name__)

Matrix = Union[ExactMatrix, FloatMatrix]

_SWAP_FLOAT = swap_gate().to_numpy()


class GateAnalysisError(ValueError):
    """Gate does not meet the precondition of an analysis"""


class LeakageError(GateAnalysisError):
    pass


class NonUnitaryError(GateAnalysisError):
    pass


class SubspaceNotPreservedError(GateAnalysisError):
    pass


class GateReport(BaseModel):
    """Classification of a 5x5 six-anyon gate"""

    leakage_free: bool
    entangling: Optional[bool] = None
    fixed_states: List[int] = []
    preserves_v: bool = False
    blocks: Optional[Dict[str, List[List[str]]]] = None

    @model_validator(mode="after")
    def check_entangling_defined(self) -> "GateReport":
        if (self.entangling is not None) != self.leakage_free:
            raise ValueError("entangling is defined exactly when the gate is leakage-free")
        return self


def _is_exact(m: Matrix) -> bool:
    return isinstance(m, ExactMatrix)


def _tol(value: Optional[float], default: float) -> float:
    return default if value is None else value


def is_leakage_free(m: Matrix, tol: Optional[float] = None) -> bool:
    """|M_00| = 1, i.e. |NC> is mapped to itself up to phase"""
    if _is_exact(m):
        return m[0, 0].abs_sq() == ONE
    return bool(abs(m[0, 0]) >= 1.0 - _tol(tol, settings.leakage_tolerance))


def restrict_to_vc(m: Matrix, tol: Optional[float] = None) -> Matrix:
    """4x4 block on the computational subspace |11>, |1t>, |t1>, |tt>"""
    if not is_leakage_free(m, tol):
        raise LeakageError("Gate leaks out of the computational subspace")
    if _is_exact(m):
        return m.submatrix(COMPUTATIONAL_INDICES)
    return m[1:, 1:]


def _check_unitary(u: Matrix, tol: Optional[float] = None) -> None:
    if _is_exact(u):
        if not u.is_unitary():
            raise NonUnitaryError("Matrix is not unitary")
        return
    residual = float(np.linalg.norm(u @ u.conj().T - np.eye(u.shape[0])))
    if residual > _tol(tol, settings.unitarity_tolerance):
        raise NonUnitaryError(f"Unitarity residual {residual:.3e} exceeds tolerance")


def realign(u: Matrix) -> Matrix:
    """R[(x,x'),(y,y')] = U[(x,y),(x',y')]; its rank is the operator-Schmidt rank"""
    if _is_exact(u):
        return ExactMatrix(
            [
                [u[2 * x + y, 2 * xp + yp] for y in range(2) for yp in range(2)]
                for x in range(2)
                for xp in range(2)
            ]
        )
    return u.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)


def _exact_rank_one(r: ExactMatrix) -> bool:
    n = r.shape[0]
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                for m in range(j + 1, n):
                    if r[i, j] * r[k, m] != r[i, m] * r[k, j]:
                        return False
    return True


def schmidt_second_value(u: FloatMatrix) -> float:
    return float(np.linalg.svd(realign(u), compute_uv=False)[1])


def is_product(u: Matrix, tol: Optional[float] = None) -> bool:
    """U = A (x) B for some one-qubit A, B"""
    if _is_exact(u):
        return _exact_rank_one(realign(u))
    return schmidt_second_value(u) < _tol(tol, settings.entangling_tolerance)


def is_entangling(u: Matrix, tol: Optional[float] = None) -> bool:
    """False iff U is A (x) B or SWAP (A (x) B)"""
    _check_unitary(u)
    swap = swap_gate() if _is_exact(u) else _SWAP_FLOAT
    return not (is_product(u, tol) or is_product(swap @ u, tol))


def diagonal_entangling_gap(lambdas: Sequence[complex]) -> float:
    l0, l1, l2, l3 = (complex(x) for x in lambdas)
    return abs(l3 * l0 - l1 * l2)


def is_entangling_diagonal(lambdas: Sequence, tol: Optional[float] = None) -> bool:
    """diag(l0, l1, l2, l3) entangles iff l3 * l0 != l1 * l2"""
    if len(lambdas) != 4:
        raise GateAnalysisError(f"Expected 4 diagonal phases, got {len(lambdas)}")
    if all(isinstance(x, FieldElement) for x in lambdas):
        l0, l1, l2, l3 = lambdas
        return l3 * l0 != l1 * l2
    return diagonal_entangling_gap(lambdas) > _tol(tol, settings.entangling_tolerance)


def fixes_state_up_to_phase(m: Matrix, index: int, tol: Optional[float] = None) -> bool:
    if _is_exact(m):
        n = m.shape[0]
        return not m[index, index].is_zero and all(
            m[i, index].is_zero for i in range(n) if i != index
        )
    return bool(abs(m[index, index]) >= 1.0 - _tol(tol, settings.leakage_tolerance))


def fixed_states(m: Matrix, tol: Optional[float] = None) -> List[int]:
    return [i for i in range(m.shape[0]) if fixes_state_up_to_phase(m, i, tol)]


def _cross_entries(m: Matrix) -> List:
    return [m[i, j] for i in V_INDICES for j in V_PERP_INDICES] + [
        m[j, i] for i in V_INDICES for j in V_PERP_INDICES
    ]


def preserves_v(m: Matrix, tol: Optional[float] = None) -> bool:
    """Block-diagonal with respect to span{|NC>, |tt>} and its complement"""
    if _is_exact(m):
        return all(x.is_zero for x in _cross_entries(m))
    limit = _tol(tol, settings.leakage_tolerance)
    return all(abs(x) < limit for x in _cross_entries(m))


def v_blocks(m: Matrix, tol: Optional[float] = None) -> Tuple[Matrix, Matrix]:
    """(2x2 block on V, 3x3 block on V-perp)"""
    if not preserves_v(m, tol):
        raise SubspaceNotPreservedError("Gate mixes V = span{|NC>, |tt>} with its complement")
    if _is_exact(m):
        return m.submatrix(V_INDICES), m.submatrix(V_PERP_INDICES)
    return m[np.ix_(V_INDICES, V_INDICES)], m[np.ix_(V_PERP_INDICES, V_PERP_INDICES)]


def _block_strings(m: Matrix) -> List[List[str]]:
    if _is_exact(m):
        return [[x.serialize() for x in row] for row in m.entries]
    return [[format_complex(complex(x)) for x in row] for row in m]


def classify(m: Matrix, tol: Optional[float] = None, include_blocks: bool = False) -> GateReport:
    leakage_free = is_leakage_free(m, tol)
    entangling = is_entangling(restrict_to_vc(m, tol)) if leakage_free else None
    keeps_v = preserves_v(m, tol)
    blocks = None
    if include_blocks and keeps_v:
        v, v_perp = v_blocks(m, tol)
        blocks = {"V": _block_strings(v), "V_perp": _block_strings(v_perp)}
    return GateReport(
        leakage_free=leakage_free,
        entangling=entangling,
        fixed_states=fixed_states(m, tol),
        preserves_v=keeps_v,
        blocks=blocks,
    )


def phase_invariant_key(m: ExactMatrix) -> str:
    """Hash of M_ij * conj(M_i0j0), (i0, j0) the first nonzero entry

    This is a slice of M (x) conj(M); it is unchanged by a global phase on M
    and determines M up to that phase.
    """
    pivot = next(x for row in m.entries for x in row if not x.is_zero).conj()
    text = ";".join((x * pivot).serialize() for row in m.entries for x in row)
    return hash_value(text)
