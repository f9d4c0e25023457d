"""Fibonacci category data and the braid-group representations rho_3 and rho_6

Six-anyon basis order (indices 0..4): |NC>, |11>, |1t>, |t1>, |tt>.
The computational block 1..4 is the two-qubit space with A (x) B laid out as
(a_ij B), so basis state |xy> sits at index 1 + 2x + y.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.braid import BraidWord
from src.number_field import ONE, PHI_INV, SQRT_PHI_INV, ZERO, FieldElement

logger = logging.getLogger(__name__)

FloatMatrix = np.ndarray

BASIS_LABELS = ("NC", "11", "1t", "t1", "tt")
V_INDICES = (0, 4)
V_PERP_INDICES = (1, 2, 3)
COMPUTATIONAL_INDICES = (1, 2, 3, 4)


class RepresentationError(ValueError):
    """Unsupported strand count, bad generator or mismatched dimensions"""


class Label(str, Enum):
    ONE = "1"
    TAU = "tau"


def fuse(a: Union[str, Label], b: Union[str, Label]) -> Tuple[Label, ...]:
    """Admissible outcomes of fusing two Fibonacci labels"""
    a, b = Label(a), Label(b)
    if a is Label.ONE:
        return (b,)
    if b is Label.ONE:
        return (a,)
    return (Label.ONE, Label.TAU)


def fusion_space_dim(n: int, total: Union[str, Label] = Label.TAU) -> int:
    """Number of fusion trees of n tau anyons with the given total charge"""
    if n < 0:
        raise RepresentationError(f"Anyon count must be non-negative, got {n}")
    counts = {Label.ONE: 1, Label.TAU: 0}
    for _ in range(n):
        counts = {
            Label.ONE: counts[Label.TAU],
            Label.TAU: counts[Label.ONE] + counts[Label.TAU],
        }
    return counts[Label(total)]


def _coerce(value) -> FieldElement:
    return value if isinstance(value, FieldElement) else FieldElement(value)


class ExactMatrix:
    """Immutable matrix over Q(zeta_10)(sqrt(phi^-1))"""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[Iterable]):
        rows = tuple(tuple(_coerce(x) for x in row) for row in entries)
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise RepresentationError("Matrix rows must be non-empty and of equal length")
        self.entries = rows

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence) -> "ExactMatrix":
        n = len(values)
        return cls([[values[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    def __getitem__(self, index: Tuple[int, int]) -> FieldElement:
        i, j = index
        return self.entries[i][j]

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        rows, inner = self.shape
        if inner != other.shape[0]:
            raise RepresentationError(f"Cannot multiply {self.shape} by {other.shape}")
        cols = other.shape[1]
        out: List[Tuple[FieldElement, ...]] = []
        for row in self.entries:
            acc: List[Optional[FieldElement]] = [None] * cols
            for k, a in enumerate(row):
                if a.is_zero:
                    continue
                for j, b in enumerate(other.entries[k]):
                    if b.is_zero:
                        continue
                    term = a * b
                    acc[j] = term if acc[j] is None else acc[j] + term
            out.append(tuple(ZERO if x is None else x for x in acc))
        return ExactMatrix(out)

    def __mul__(self, scalar) -> "ExactMatrix":
        if isinstance(scalar, ExactMatrix):
            return NotImplemented
        scalar = _coerce(scalar)
        return ExactMatrix([[x * scalar for x in row] for row in self.entries])

    __rmul__ = __mul__

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise RepresentationError(f"Cannot add {self.shape} and {other.shape}")
        return ExactMatrix(
            [[x + y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + other * -1

    def dagger(self) -> "ExactMatrix":
        rows, cols = self.shape
        return ExactMatrix([[self.entries[i][j].conj() for i in range(rows)] for j in range(cols)])

    def is_unitary(self) -> bool:
        rows, cols = self.shape
        return rows == cols and self @ self.dagger() == ExactMatrix.identity(rows)

    def submatrix(self, rows: Sequence[int], cols: Optional[Sequence[int]] = None) -> "ExactMatrix":
        cols = rows if cols is None else cols
        return ExactMatrix([[self.entries[i][j] for j in cols] for i in rows])

    def direct_sum(self, other: "ExactMatrix") -> "ExactMatrix":
        r1, c1 = self.shape
        r2, c2 = other.shape
        top = [list(row) + [ZERO] * c2 for row in self.entries]
        bottom = [[ZERO] * c1 + list(row) for row in other.entries]
        return ExactMatrix(top + bottom)

    def tensor(self, other: "ExactMatrix") -> "ExactMatrix":
        """Kronecker product laid out as (a_ij B)"""
        r1, c1 = self.shape
        r2, c2 = other.shape
        return ExactMatrix(
            [
                [self.entries[i][j] * other.entries[k][m] for j in range(c1) for m in range(c2)]
                for i in range(r1)
                for k in range(r2)
            ]
        )

    def permuted(self, perm: Sequence[int]) -> "ExactMatrix":
        """P M P^T for the permutation matrix sending basis i to perm[i]"""
        n = self.shape[0]
        inverse = [0] * n
        for i, p in enumerate(perm):
            inverse[p] = i
        return ExactMatrix([[self.entries[inverse[i]][inverse[j]] for j in range(n)] for i in range(n)])

    def is_diagonal(self) -> bool:
        return all(
            x.is_zero for i, row in enumerate(self.entries) for j, x in enumerate(row) if i != j
        )

    def diagonal_entries(self) -> Tuple[FieldElement, ...]:
        return tuple(self.entries[i][i] for i in range(min(self.shape)))

    def to_numpy(self) -> FloatMatrix:
        return np.array([[x.to_complex() for x in row] for row in self.entries], dtype=complex)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"ExactMatrix({self.shape[0]}x{self.shape[1]})"

    def __str__(self) -> str:
        return format_exact(self)


def direct_sum(*blocks: ExactMatrix) -> ExactMatrix:
    result = blocks[0]
    for block in blocks[1:]:
        result = result.direct_sum(block)
    return result


def tensor(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a.tensor(b)


def swap_gate() -> ExactMatrix:
    """Two-qubit SWAP: exchanges |1t> and |t1>"""
    perm = (0, 2, 1, 3)
    return ExactMatrix([[ONE if j == perm[i] else ZERO for j in range(4)] for i in range(4)])


@dataclass(frozen=True)
class FibData:
    """F- and R-symbols of the Fibonacci category"""

    F: ExactMatrix
    R1: FieldElement
    Rtau: FieldElement

    @classmethod
    def standard(cls) -> "FibData":
        F = ExactMatrix([[PHI_INV, SQRT_PHI_INV], [SQRT_PHI_INV, -PHI_INV]])
        # R^{tt}_1 = exp(-4 pi i/5) = z^6, R^{tt}_t = exp(3 pi i/5) = z^3
        return cls(F=F, R1=FieldElement.zeta_power(6), Rtau=FieldElement.zeta_power(3))

    @property
    def R(self) -> ExactMatrix:
        return ExactMatrix.diagonal([self.R1, self.Rtau])

    @property
    def FRF(self) -> ExactMatrix:
        return self.F @ self.R @ self.F

    fuse = staticmethod(fuse)
    fusion_space_dim = staticmethod(fusion_space_dim)


class Backend(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


class FibonacciRepresentation:
    """Generator tables for rho_3 and rho_6 and word evaluation"""

    def __init__(self, data: Optional[FibData] = None):
        self.data = data or FibData.standard()
        R, FRF = self.data.R, self.data.FRF
        rtau = ExactMatrix([[self.data.Rtau]])
        eye2 = ExactMatrix.identity(2)
        self._rho3: Dict[str, Tuple[ExactMatrix, ExactMatrix]] = {"L": (R, FRF), "R": (FRF, R)}
        sigma3 = direct_sum(rtau, R, FRF).permuted((3, 1, 2, 0, 4))
        self._rho6: Tuple[ExactMatrix, ...] = (
            rtau.direct_sum(R.tensor(eye2)),
            rtau.direct_sum(FRF.tensor(eye2)),
            sigma3,
            rtau.direct_sum(eye2.tensor(FRF)),
            rtau.direct_sum(eye2.tensor(R)),
        )
        self._exact: Dict[int, Dict[int, ExactMatrix]] = {
            3: self._letter_table(self._rho3["L"]),
            6: self._letter_table(self._rho6),
        }
        self._float: Dict[int, Dict[int, FloatMatrix]] = {
            n: {letter: m.to_numpy() for letter, m in table.items()}
            for n, table in self._exact.items()
        }

    @staticmethod
    def _letter_table(generators: Sequence[ExactMatrix]) -> Dict[int, ExactMatrix]:
        table: Dict[int, ExactMatrix] = {}
        for i, g in enumerate(generators, start=1):
            table[i] = g
            table[-i] = g.dagger()
        return table

    def rho3(self, generator: int, basis: str = "L") -> ExactMatrix:
        if basis not in self._rho3:
            raise RepresentationError(f"Unknown one-qubit basis {basis!r}; use 'L' or 'R'")
        if generator not in (1, 2):
            raise RepresentationError(f"B_3 has generators 1 and 2, got {generator}")
        return self._rho3[basis][generator - 1]

    def rho6(self, index: int) -> ExactMatrix:
        if not 1 <= index <= 5:
            raise RepresentationError(f"B_6 has generators 1..5, got {index}")
        return self._rho6[index - 1]

    def _check_strands(self, strands: int) -> None:
        if strands not in self._exact:
            raise RepresentationError(f"Only 3 and 6 strands are represented, got {strands}")

    def letter_matrices(self, strands: int, backend: Union[str, Backend] = Backend.EXACT) -> Dict:
        """Letter -> generator image, inverses included"""
        self._check_strands(strands)
        if Backend(backend) is Backend.EXACT:
            return self._exact[strands]
        return self._float[strands]

    def evaluate(
        self, word: BraidWord, backend: Union[str, Backend] = Backend.EXACT
    ) -> Union[ExactMatrix, FloatMatrix]:
        """Ordered product of generator images, left to right"""
        table = self.letter_matrices(word.strands, backend)
        dim = 2 if word.strands == 3 else 5
        if Backend(backend) is Backend.EXACT:
            result = ExactMatrix.identity(dim)
            for letter in word.letters:
                result = result @ table[letter]
            return result
        out = np.eye(dim, dtype=complex)
        for letter in word.letters:
            out = out @ table[letter]
        return out


@lru_cache(maxsize=1)
def default_representation() -> FibonacciRepresentation:
    return FibonacciRepresentation()


def rho3(generator: int, basis: str = "L") -> ExactMatrix:
    return default_representation().rho3(generator, basis)


def rho6(index: int) -> ExactMatrix:
    return default_representation().rho6(index)


def evaluate(word: BraidWord, backend: Union[str, Backend] = Backend.EXACT):
    return default_representation().evaluate(word, backend)


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def format_exact(m: ExactMatrix) -> str:
    cells = [[str(x) for x in row] for row in m.entries]
    width = max(len(c) for row in cells for c in row)
    return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def format_float(m: FloatMatrix) -> str:
    cells = [[format_complex(complex(x)) for x in row] for row in m]
    width = max(len(c) for row in cells for c in row)
    return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)
