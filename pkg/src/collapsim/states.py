"""Density matrices, Hamiltonians, and pairwise collapse-rate matrices over a
labeled finite basis.

All three matrix types are immutable value objects: arrays are copied on
construction and marked read-only, so instances are safe to share across
threads.  DensityMatrix deliberately does not enforce its physical
invariants at construction; `validate` reports defects so that integrators
can monitor drifting states instead of crashing on them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Defect tolerances: roughly 100x double-precision accumulation over the
# longest integration exercised by the test suite.
HERMITICITY_TOL = 1e-12   # absolute, on max |rho - rho^H|
TRACE_TOL = 1e-10         # absolute, on |tr(rho) - 1|
PSD_TOL = 1e-10           # smallest eigenvalue >= -PSD_TOL

STATEKIT_SCHEMA_ID = "statekit/1"


@dataclass(frozen=True)
class BasisLabel:
    name: str
    index: int


def make_basis(*names: str) -> tuple[BasisLabel, ...]:
    """Basis labels with contiguous indices 0..N-1; names must be unique."""
    if not names:
        raise ValueError("basis needs at least one label")
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate basis names in {names}")
    return tuple(BasisLabel(name, i) for i, name in enumerate(names))


def basis_names(basis: tuple[BasisLabel, ...]) -> list[str]:
    return [label.name for label in basis]


def index_of(basis: tuple[BasisLabel, ...], label: BasisLabel | str | int) -> int:
    """Resolve a label, name, or raw index against a basis."""
    if isinstance(label, BasisLabel):
        label = label.name
    if isinstance(label, str):
        for entry in basis:
            if entry.name == label:
                return entry.index
        raise ValueError(f"label '{label}' not in basis {basis_names(basis)}")
    idx = int(label)
    if not 0 <= idx < len(basis):
        raise ValueError(f"index {idx} out of range for basis of size {len(basis)}")
    return idx


def _frozen(matrix, dtype) -> np.ndarray:
    arr = np.array(matrix, dtype=dtype)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def _check_shape(basis, elements) -> None:
    if len(basis) != elements.shape[0]:
        raise ValueError(
            f"basis size {len(basis)} does not match matrix shape {elements.shape}")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Complex matrix over a labeled basis, nominally Hermitian, unit-trace,
    and positive semidefinite (see `validate`)."""

    basis: tuple[BasisLabel, ...]
    elements: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "elements", _frozen(self.elements, np.complex128))
        _check_shape(self.basis, self.elements)

    @property
    def dim(self) -> int:
        return self.elements.shape[0]

    def element(self, i: BasisLabel | str | int, j: BasisLabel | str | int) -> complex:
        return complex(self.elements[index_of(self.basis, i), index_of(self.basis, j)])

    def to_json(self) -> dict:
        return {
            "schema": STATEKIT_SCHEMA_ID,
            "kind": "density_matrix",
            "basis": basis_names(self.basis),
            "elements": _complex_to_pairs(self.elements),
        }


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Hermitian matrix over a labeled basis; elements in joules."""

    basis: tuple[BasisLabel, ...]
    elements: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "elements", _frozen(self.elements, np.complex128))
        _check_shape(self.basis, self.elements)
        defect = float(np.max(np.abs(self.elements - self.elements.conj().T)))
        norm = float(np.max(np.abs(self.elements)))
        if norm > 0.0 and defect > 1e-12 * norm:
            raise ValueError(f"Hamiltonian is not Hermitian (defect {defect:.3e})")

    @classmethod
    def zero(cls, basis: tuple[BasisLabel, ...]) -> "Hamiltonian":
        return cls(basis, np.zeros((len(basis), len(basis)), dtype=np.complex128))

    def to_json(self) -> dict:
        return {
            "schema": STATEKIT_SCHEMA_ID,
            "kind": "hamiltonian",
            "basis": basis_names(self.basis),
            "unit": "J",
            "elements": _complex_to_pairs(self.elements),
        }


@dataclass(frozen=True, eq=False)
class CollapseRateMatrix:
    """Symmetric matrix of pairwise decay rates 1/tau_ij in 1/s.

    Rate 0.0 is the exact representation of tau = infinity, so the
    no-collapse limit needs no sentinel arithmetic; the diagonal is
    identically 0 (a state never decoheres against itself).
    """

    basis: tuple[BasisLabel, ...]
    rates: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rates", _frozen(self.rates, np.float64))
        _check_shape(self.basis, self.rates)
        if not np.array_equal(self.rates, self.rates.T):
            raise ValueError("rate matrix must be exactly symmetric")
        if np.any(np.diagonal(self.rates) != 0.0):
            raise ValueError("rate matrix diagonal must be exactly zero")
        if np.any(self.rates < 0.0):
            raise ValueError("rates must be nonnegative")

    @classmethod
    def zero(cls, basis: tuple[BasisLabel, ...]) -> "CollapseRateMatrix":
        return cls(basis, np.zeros((len(basis), len(basis))))

    @property
    def max_rate(self) -> float:
        return float(np.max(self.rates)) if self.rates.size else 0.0

    def to_json(self) -> dict:
        return {
            "schema": STATEKIT_SCHEMA_ID,
            "kind": "collapse_rate_matrix",
            "basis": basis_names(self.basis),
            "unit": "1/s",
            "rates": self.rates.tolist(),
        }


@dataclass(frozen=True)
class TraceDefect:
    defect: float


@dataclass(frozen=True)
class HermiticityDefect:
    defect: float


@dataclass(frozen=True)
class PositivityDefect:
    min_eigenvalue: float


def validate(rho: DensityMatrix, *, hermiticity_tol: float = HERMITICITY_TOL,
             trace_tol: float = TRACE_TOL, psd_tol: float = PSD_TOL) -> list:
    """Measure the three density-matrix invariants; one entry per violation.

    Diagnostic only: accepts any square complex matrix with a basis and
    never raises.
    """
    m = rho.elements
    violations = []
    herm = float(np.max(np.abs(m - m.conj().T)))
    if herm > hermiticity_tol:
        violations.append(HermiticityDefect(herm))
    trace = float(abs(np.trace(m) - 1.0))
    if trace > trace_tol:
        violations.append(TraceDefect(trace))
    # Eigenvalues of the Hermitian part; meaningful even when slightly
    # non-Hermitian since the defect is reported separately above.
    lo = float(np.min(np.linalg.eigvalsh((m + m.conj().T) / 2.0)))
    if lo < -psd_tol:
        violations.append(PositivityDefect(lo))
    return violations


def pure_state(amplitudes, basis: tuple[BasisLabel, ...]) -> DensityMatrix:
    """|psi><psi| from amplitudes over the basis, normalizing psi."""
    psi = np.asarray(amplitudes, dtype=np.complex128)
    if psi.ndim != 1 or psi.size != len(basis):
        raise ValueError(
            f"expected {len(basis)} amplitudes, got shape {psi.shape}")
    norm = float(np.linalg.norm(psi))
    if norm == 0.0:
        raise ValueError("amplitudes must not all be zero")
    psi = psi / norm
    return DensityMatrix(basis, np.outer(psi, psi.conj()))


def coherence_visibility(rho: DensityMatrix, i: BasisLabel | str | int,
                         j: BasisLabel | str | int) -> float:
    """Interference contrast 2|rho_ij| of the (i, j) coherence."""
    ii, jj = index_of(rho.basis, i), index_of(rho.basis, j)
    if ii == jj:
        raise ValueError(f"visibility needs two distinct labels, got '{i}' twice")
    return 2.0 * float(abs(rho.elements[ii, jj]))


def _complex_to_pairs(matrix: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def _pairs_to_complex(pairs) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in pairs],
                    dtype=np.complex128)


def from_json(doc: dict):
    """Rebuild a statekit value from its JSON form."""
    if doc.get("schema") != STATEKIT_SCHEMA_ID:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    basis = make_basis(*doc["basis"])
    kind = doc.get("kind")
    if kind == "density_matrix":
        return DensityMatrix(basis, _pairs_to_complex(doc["elements"]))
    if kind == "hamiltonian":
        return Hamiltonian(basis, _pairs_to_complex(doc["elements"]))
    if kind == "collapse_rate_matrix":
        return CollapseRateMatrix(basis, np.array(doc["rates"], dtype=np.float64))
    raise ValueError(f"unknown statekit kind {kind!r}")
