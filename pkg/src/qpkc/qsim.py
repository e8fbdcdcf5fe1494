"""Sparse state-vector simulation over named bit registers.

A basis label is one integer holding every register side by side; the first
register of the layout occupies the most significant bits. Gates used by the
protocols are classical reversible maps (XOR oracles and their uncomputation)
plus Hadamard layers on short registers, so a dictionary of nonzero
amplitudes stays small.

Mixed states live in :class:`DensityMatrix`, stored densely over the sorted
list of basis labels that carry weight (its support) rather than the full
``2^width`` space.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import sqrt
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import DimensionError, RedundancyError, SeparabilityError
from .gf2 import BitWord

__all__ = [
    "RegisterLayout",
    "PureState",
    "CipherEnsemble",
    "DensityMatrix",
    "apply_xor_oracle",
    "apply_uncompute",
    "apply_hadamard",
    "measure_register",
    "ensemble_to_density",
    "hermitian_eig",
    "fidelity",
    "trace_distance",
    "overlap",
]

PRUNE = 1e-12
NORM_TOL = 1e-9
MAX_DENSE_DIM = 1 << 10


@dataclass(frozen=True)
class RegisterLayout:
    registers: tuple[tuple[str, int], ...]

    def __post_init__(self):
        regs = tuple((str(n), int(w)) for n, w in self.registers)
        object.__setattr__(self, "registers", regs)
        names = [n for n, _ in regs]
        if len(set(names)) != len(names):
            raise DimensionError(f"duplicate register names in {names}")
        if any(w < 1 for _, w in regs):
            raise DimensionError("register widths must be >= 1")

    @classmethod
    def of(cls, *registers: tuple[str, int]) -> "RegisterLayout":
        return cls(tuple(registers))

    @cached_property
    def width(self) -> int:
        return sum(w for _, w in self.registers)

    @cached_property
    def _slots(self) -> dict[str, tuple[int, int]]:
        slots, shift = {}, self.width
        for name, w in self.registers:
            shift -= w
            slots[name] = (shift, w)
        return slots

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.registers)

    def __contains__(self, name: str) -> bool:
        return name in self._slots

    def slot(self, name: str) -> tuple[int, int]:
        """``(shift, width)`` of a register."""
        try:
            return self._slots[name]
        except KeyError:
            raise KeyError(f"no register {name!r} in {self.names}") from None

    def width_of(self, name: str) -> int:
        return self.slot(name)[1]

    def get(self, label: int, name: str) -> int:
        shift, w = self.slot(name)
        return (label >> shift) & ((1 << w) - 1)

    def set(self, label: int, name: str, value: int) -> int:
        shift, w = self.slot(name)
        mask = ((1 << w) - 1) << shift
        return (label & ~mask) | (value << shift)

    def compose(self, values: Mapping[str, int]) -> int:
        label = 0
        for name, w in self.registers:
            v = int(values.get(name, 0))
            if not 0 <= v < 1 << w:
                raise DimensionError(f"value {v} does not fit register {name!r} of width {w}")
            label = (label << w) | v
        return label

    def split(self, label: int) -> dict[str, int]:
        return {name: self.get(label, name) for name in self.names}

    def to_json(self) -> list:
        return [[n, w] for n, w in self.registers]


@dataclass(frozen=True)
class PureState:
    """Unit-norm superposition; ``amplitudes`` maps basis labels to complex numbers."""

    layout: RegisterLayout
    amplitudes: Mapping[int, complex] = field(repr=False)

    def __post_init__(self):
        amps = {int(k): complex(v) for k, v in self.amplitudes.items() if abs(v) >= PRUNE}
        limit = 1 << self.layout.width
        if any(not 0 <= k < limit for k in amps):
            raise DimensionError("basis label outside the layout")
        norm = sum(abs(a) ** 2 for a in amps.values())
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm^2 is {norm}, expected 1")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, layout: RegisterLayout, **values: int) -> "PureState":
        return cls(layout, {layout.compose(values): 1.0})

    @classmethod
    def from_register(cls, name: str, width: int, amps: Mapping[int, complex], normalize: bool = False) -> "PureState":
        """Single-register state ``sum_x amps[x] |x>``."""
        layout = RegisterLayout.of((name, width))
        if normalize:
            scale = sqrt(sum(abs(a) ** 2 for a in amps.values()))
            amps = {k: v / scale for k, v in amps.items()}
        return cls(layout, dict(amps))

    @property
    def width(self) -> int:
        return self.layout.width

    def __len__(self) -> int:
        return len(self.amplitudes)

    def terms(self) -> Iterator[tuple[BitWord, complex]]:
        for label in sorted(self.amplitudes):
            yield BitWord(self.width, label), self.amplitudes[label]

    def values(self, name: str) -> set[int]:
        """Distinct contents of one register across all terms."""
        return {self.layout.get(label, name) for label in self.amplitudes}

    def register_amplitudes(self) -> dict[tuple[int, ...], complex]:
        """Amplitudes keyed by per-register value tuples in layout order."""
        names = self.layout.names
        return {tuple(self.layout.get(k, n) for n in names): a for k, a in self.amplitudes.items()}

    def extend(self, name: str, width: int, value: int = 0) -> "PureState":
        """Append a fresh register holding the basis value ``value``."""
        if not 0 <= value < 1 << width:
            raise DimensionError(f"value {value} does not fit {width} bits")
        layout = RegisterLayout(self.layout.registers + ((name, width),))
        return PureState(layout, {(k << width) | value: a for k, a in self.amplitudes.items()})

    def discard(self, name: str) -> tuple[int, "PureState"]:
        """Factor out a register that holds the same value in every term."""
        vals = self.values(name)
        if len(vals) != 1:
            raise SeparabilityError(f"register {name!r} is entangled (values {sorted(vals)[:8]})")
        value = vals.pop()
        layout = RegisterLayout(tuple(r for r in self.layout.registers if r[0] != name))
        amps = {}
        for k, a in self.amplitudes.items():
            parts = self.layout.split(k)
            del parts[name]
            amps[layout.compose(parts)] = a
        return value, PureState(layout, amps)

    def drop_zero(self, name: str) -> "PureState":
        value, state = self.discard(name)
        if value != 0:
            raise SeparabilityError(f"register {name!r} holds {value}, expected 0")
        return state

    def rename(self, mapping: Mapping[str, str]) -> "PureState":
        layout = RegisterLayout(tuple((mapping.get(n, n), w) for n, w in self.layout.registers))
        return PureState(layout, self.amplitudes)

    def reorder(self, names: Sequence[str]) -> "PureState":
        if sorted(names) != sorted(self.layout.names):
            raise DimensionError("reorder must name every register exactly once")
        layout = RegisterLayout(tuple((n, self.layout.width_of(n)) for n in names))
        return PureState(layout, {layout.compose(self.layout.split(k)): a for k, a in self.amplitudes.items()})

    def tensor(self, other: "PureState") -> "PureState":
        layout = RegisterLayout(self.layout.registers + other.layout.registers)
        w = other.width
        return PureState(layout, {
            (k1 << w) | k2: a1 * a2
            for k1, a1 in self.amplitudes.items()
            for k2, a2 in other.amplitudes.items()
        })

    def inner(self, other: "PureState") -> complex:
        """``<self|other>``."""
        if self.layout != other.layout:
            raise DimensionError("states have different layouts")
        return sum(a.conjugate() * other.amplitudes.get(k, 0) for k, a in self.amplitudes.items())

    def to_json(self) -> dict:
        return {
            "layout": self.layout.to_json(),
            "terms": [
                {"basis": word.to_string(), "re": amp.real, "im": amp.imag}
                for word, amp in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PureState":
        layout = RegisterLayout(tuple((n, w) for n, w in obj["layout"]))
        amps: dict[int, complex] = {}
        for term in obj["terms"]:
            word = BitWord.from_string(term["basis"])
            if word.width != layout.width:
                raise DimensionError("basis string width does not match layout")
            amps[word.value] = complex(term["re"], term["im"])
        return cls(layout, amps)


def overlap(a: PureState, b: PureState) -> float:
    """Pure-state fidelity ``|<a|b>|``."""
    return abs(a.inner(b))


def _check_oracle_args(s: PureState, sources: Sequence[str], target: str) -> None:
    if target in sources:
        raise DimensionError(f"target {target!r} is also a source")
    for name in (*sources, target):
        s.layout.slot(name)


def apply_xor_oracle(
    s: PureState, fn: Callable[..., int], sources: Sequence[str], target: str
) -> PureState:
    """``|x>|y> -> |x>|y XOR fn(x)>``; ``fn`` receives the source register values in order."""
    _check_oracle_args(s, sources, target)
    layout = s.layout
    shift, w = layout.slot(target)
    limit = 1 << w
    cache: dict[tuple[int, ...], int] = {}
    out: dict[int, complex] = {}
    for label, amp in s.amplitudes.items():
        args = tuple(layout.get(label, n) for n in sources)
        v = cache.get(args)
        if v is None:
            v = int(fn(*args))
            if not 0 <= v < limit:
                raise DimensionError(f"oracle output {v} does not fit target {target!r} of width {w}")
            cache[args] = v
        out[label ^ (v << shift)] = amp
    return PureState(layout, out)


def apply_uncompute(
    s: PureState, fn: Callable[..., int], sources: Sequence[str], target: str
) -> PureState:
    """Clear ``target`` where it provably equals ``fn(sources)`` in every term."""
    _check_oracle_args(s, sources, target)
    layout = s.layout
    for label in s.amplitudes:
        expected = int(fn(*(layout.get(label, n) for n in sources)))
        actual = layout.get(label, target)
        if actual != expected:
            raise RedundancyError(
                f"register {target!r} holds {actual} but its sources give {expected}"
            )
    return PureState(layout, {layout.set(label, target, 0): a for label, a in s.amplitudes.items()})


def apply_hadamard(s: PureState, register: str) -> PureState:
    """``H`` on every qubit of ``register``."""
    layout = s.layout
    shift, w = layout.slot(register)
    scale = 1.0 / sqrt(1 << w)
    out: dict[int, complex] = {}
    for label, amp in s.amplitudes.items():
        x = layout.get(label, register)
        base = layout.set(label, register, 0)
        for y in range(1 << w):
            sign = -1.0 if bin(x & y).count("1") & 1 else 1.0
            key = base | (y << shift)
            out[key] = out.get(key, 0) + sign * scale * amp
    return PureState(layout, out)


def measure_register(
    s: PureState, register: str, rng: np.random.Generator
) -> tuple[BitWord, PureState]:
    """Born-rule measurement of one register; returns outcome and the collapsed state."""
    layout = s.layout
    w = layout.width_of(register)
    probs: dict[int, float] = {}
    for label, amp in s.amplitudes.items():
        v = layout.get(label, register)
        probs[v] = probs.get(v, 0.0) + abs(amp) ** 2
    outcomes = sorted(probs)
    weights = np.array([probs[v] for v in outcomes])
    cum = np.cumsum(weights / weights.sum())
    idx = min(int(np.searchsorted(cum, rng.random(), side="right")), len(outcomes) - 1)
    outcome = outcomes[idx]
    scale = 1.0 / sqrt(probs[outcome])
    kept = {k: a * scale for k, a in s.amplitudes.items() if layout.get(k, register) == outcome}
    return BitWord(w, outcome), PureState(layout, kept)


def outcome_probabilities(s: PureState, register: str) -> dict[int, float]:
    probs: dict[int, float] = {}
    for label, amp in s.amplitudes.items():
        v = s.layout.get(label, register)
        probs[v] = probs.get(v, 0.0) + abs(amp) ** 2
    return probs


@dataclass(frozen=True)
class CipherEnsemble:
    """``sum_r p_r |psi_r><psi_r|`` kept as its defining list."""

    entries: tuple[tuple[float, BitWord, PureState], ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("empty ensemble")
        if any(p <= 0 for p, _, _ in entries):
            raise ValueError("ensemble probabilities must be positive")
        if abs(sum(p for p, _, _ in entries) - 1.0) > NORM_TOL:
            raise ValueError("ensemble probabilities must sum to 1")
        layouts = {st.layout for _, _, st in entries}
        if len(layouts) != 1:
            raise DimensionError("ensemble states must share one layout")

    @property
    def layout(self) -> RegisterLayout:
        return self.entries[0][2].layout

    def __len__(self) -> int:
        return len(self.entries)


class DensityMatrix:
    """Dense density matrix over an explicit support of basis labels."""

    def __init__(self, basis: Iterable[int], matrix, layout: RegisterLayout | None = None):
        self.basis = tuple(int(b) for b in basis)
        mat = np.array(matrix, dtype=complex)
        d = len(self.basis)
        if mat.shape != (d, d):
            raise DimensionError(f"matrix shape {mat.shape} does not match support size {d}")
        if d > MAX_DENSE_DIM:
            raise DimensionError(f"dense dimension {d} exceeds {MAX_DENSE_DIM}")
        if len(set(self.basis)) != d:
            raise DimensionError("repeated basis label")
        if d and np.max(np.abs(mat - mat.conj().T)) > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > NORM_TOL:
            raise ValueError(f"density matrix trace is {np.trace(mat).real}")
        self.matrix = (mat + mat.conj().T) / 2
        self.matrix.setflags(write=False)
        self.layout = layout

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def from_state(cls, s: PureState) -> "DensityMatrix":
        basis = sorted(s.amplitudes)
        vec = np.array([s.amplitudes[k] for k in basis])
        return cls(basis, np.outer(vec, vec.conj()), s.layout)

    @cached_property
    def eig(self) -> tuple[np.ndarray, np.ndarray]:
        vals, vecs = hermitian_eig(self.matrix)
        if vals.size and vals[0] < -1e-9:
            raise ValueError(f"density matrix has negative eigenvalue {vals[0]}")
        return vals, vecs

    def embed(self, basis: Sequence[int]) -> np.ndarray:
        """Matrix re-expressed over a superset of the support."""
        index = {b: i for i, b in enumerate(basis)}
        rows = [index[b] for b in self.basis]
        out = np.zeros((len(basis), len(basis)), dtype=complex)
        out[np.ix_(rows, rows)] = self.matrix
        return out

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


def ensemble_to_density(e: CipherEnsemble) -> DensityMatrix:
    basis = sorted({k for _, _, st in e.entries for k in st.amplitudes})
    if len(basis) > MAX_DENSE_DIM:
        raise DimensionError(f"ensemble support {len(basis)} exceeds dense bound {MAX_DENSE_DIM}")
    index = {b: i for i, b in enumerate(basis)}
    rho = np.zeros((len(basis), len(basis)), dtype=complex)
    for p, _, st in e.entries:
        vec = np.zeros(len(basis), dtype=complex)
        for k, a in st.amplitudes.items():
            vec[index[k]] = a
        rho += p * np.outer(vec, vec.conj())
    return DensityMatrix(basis, rho, e.layout)


def hermitian_eig(
    m, tol: float = 1e-14, max_sweeps: int = 60
) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver for Hermitian matrices.

    Returns ascending real eigenvalues and unitary ``V`` (eigenvectors as
    columns) with ``m = V diag(w) V^H``. Sweeps stop once the off-diagonal
    Frobenius norm falls below ``tol`` times the Frobenius norm of ``m``.
    """
    a = np.array(m.matrix if isinstance(m, DensityMatrix) else m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError("hermitian_eig needs a square matrix")
    n = a.shape[0]
    scale = float(np.sqrt(np.sum(np.abs(a) ** 2)))
    if n and np.max(np.abs(a - a.conj().T)) > 1e-10 * max(1.0, scale):
        raise ValueError("matrix is not Hermitian")
    a = (a + a.conj().T) / 2
    v = np.eye(n, dtype=complex)
    if n < 2 or scale == 0.0:
        return np.real(np.diag(a)).copy(), v
    threshold = tol * scale
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = float(np.sqrt(np.sum(np.abs(a[offdiag]) ** 2)))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= threshold * 1e-3 / n:
                    continue
                u = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                # U = diag(1, conj(u)) @ [[c, s], [-s, c]]
                uc = u.conjugate()
                colp, colq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * colp - s * uc * colq
                a[:, q] = s * colp + c * uc * colq
                rowp, rowq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rowp - s * u * rowq
                a[q, :] = s * rowp + c * u * rowq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * uc * vq
                v[:, q] = s * vp + c * uc * vq
    else:
        off = float(np.sqrt(np.sum(np.abs(a[offdiag]) ** 2)))
        if off > threshold:
            raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps (off = {off:.3e})")
    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _as_density(x) -> DensityMatrix:
    if isinstance(x, DensityMatrix):
        return x
    if isinstance(x, PureState):
        return DensityMatrix.from_state(x)
    if isinstance(x, CipherEnsemble):
        return ensemble_to_density(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a density matrix")


def _joint_basis(rho: DensityMatrix, sigma: DensityMatrix) -> list[int]:
    if rho.layout is not None and sigma.layout is not None and rho.layout.width != sigma.layout.width:
        raise DimensionError("density matrices act on different register widths")
    basis = sorted(set(rho.basis) | set(sigma.basis))
    if len(basis) > MAX_DENSE_DIM:
        raise DimensionError(f"joint support {len(basis)} exceeds {MAX_DENSE_DIM}")
    return basis


# eigenvalues of a unit-trace matrix below this are treated as exact zeros
_RANK_CUT = 1e-12


def _sqrt_factor(rho: DensityMatrix, basis: Sequence[int]) -> np.ndarray:
    """``A`` with ``A A^H = rho`` embedded in ``basis``; columns = nonzero eigenpairs."""
    vals, vecs = rho.eig
    keep = vals > _RANK_CUT
    index = {b: i for i, b in enumerate(basis)}
    out = np.zeros((len(basis), int(keep.sum())), dtype=complex)
    out[[index[b] for b in rho.basis], :] = vecs[:, keep] * np.sqrt(vals[keep])
    return out


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``Tr sqrt(sqrt(rho) sigma sqrt(rho))`` (not squared).

    With ``rho = A A^H`` and ``sigma = B B^H`` from the eigendecompositions
    this equals the sum of singular values of ``A^H B``, read off the
    eigenvalues of ``(A^H B)(A^H B)^H``.
    """
    rho, sigma = _as_density(rho), _as_density(sigma)
    basis = _joint_basis(rho, sigma)
    a = _sqrt_factor(rho, basis)
    b = _sqrt_factor(sigma, basis)
    x = a.conj().T @ b
    if x.size == 0:
        return 0.0
    vals, _ = hermitian_eig(x @ x.conj().T)
    f = float(np.sum(np.sqrt(np.clip(vals, 0.0, None))))
    return min(max(f, 0.0), 1.0)


def trace_distance(rho, sigma) -> float:
    """``1/2 sum |lambda_i(rho - sigma)|``."""
    rho, sigma = _as_density(rho), _as_density(sigma)
    basis = _joint_basis(rho, sigma)
    vals, _ = hermitian_eig(rho.embed(basis) - sigma.embed(basis))
    d = 0.5 * float(np.sum(np.abs(vals)))
    return min(max(d, 0.0), 1.0)
