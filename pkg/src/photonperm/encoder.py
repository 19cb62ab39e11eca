"""Embedding bounded matrices into linear-optical unitaries.

A square matrix A is rescaled by its largest singular value and dilated to a
2n x 2n unitary whose top-left block is A/s. The block matrix K used for
subgraph ranking and the mesh synthesis of a unitary into two-mode rotations
live here as well.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from photonperm import numkernel

UNITARITY_TOL = 1e-10
MESH_TOL = 1e-8
ZERO_MATRIX_TOL = 1e-12


@dataclass(frozen=True)
class EncodedCircuit:
    """A mode unitary plus the rescaling bookkeeping needed to decode permanents."""

    unitary: np.ndarray
    scale: float
    photon_count: int
    mode_count: int

    @property
    def input_pattern(self) -> tuple[int, ...]:
        """One photon in each of the first ``photon_count`` modes."""
        n, m = self.photon_count, self.mode_count
        return (1,) * n + (0,) * (m - n)


def rescale(a, s: float | None = None) -> tuple[np.ndarray, float]:
    """Return (A/s, s) with s defaulting to the largest singular value.

    A zero matrix gets s = 1 by convention. A user-supplied s must not be
    below sigma_max(A).
    """
    mat = numkernel.as_square_matrix(a)
    if mat.shape[0] == 0:
        raise ValueError("cannot rescale an empty matrix")
    sigma = numkernel.spectral_norm(mat)
    if s is None:
        s = sigma if sigma >= ZERO_MATRIX_TOL else 1.0
    else:
        if s <= 0:
            raise ValueError(f"scale must be positive, got {s}")
        if s < sigma - 1e-10:
            raise ValueError(
                f"scale {s} is below the largest singular value {sigma}"
            )
    return mat / s, float(s)


def dilate(a_s) -> np.ndarray:
    """Unitary dilation of a norm-bounded matrix.

    Blocks: [[A_s, sqrt(I - A_s A_s^dag)], [sqrt(I - A_s^dag A_s), -A_s^dag]].
    Fails loudly if the defect matrices are not PSD or the result misses the
    unitarity tolerance.
    """
    mat = numkernel.as_square_matrix(a_s)
    n = mat.shape[0]
    factors = numkernel.svd(mat)
    sigma = factors.singular_values
    if sigma.size and sigma[0] > 1 + 1e-10:
        raise ValueError(f"spectral norm {sigma[0]} exceeds 1; rescale first")
    # sqrt(I - A A^dag) = W C W^dag and sqrt(I - A^dag A) = V C V^dag with
    # C = diag(sqrt(1 - sigma^2)); one factorization for both blocks keeps
    # the intertwining identity A sqrt(I - A^dag A) = sqrt(I - A A^dag) A
    # exact to rounding, which the two separate psd_sqrt calls do not.
    defects = 1.0 - sigma**2
    if defects.size and defects.min() < -numkernel.PSD_CLAMP:
        raise ValueError(
            f"defect matrix is not PSD (min eigenvalue {defects.min():.3e})"
        )
    c = np.sqrt(np.clip(defects, 0.0, None))
    top_right = (factors.w * c) @ factors.w.conj().T
    bottom_left = (factors.v * c) @ factors.v.conj().T
    unitary = np.block([[mat, top_right], [bottom_left, -mat.conj().T]])
    defect = np.abs(unitary.conj().T @ unitary - np.eye(2 * n)).max()
    if defect > UNITARITY_TOL:
        raise ValueError(f"dilation unitarity defect {defect:.3e} above tolerance")
    return unitary


def encode(a, s: float | None = None) -> EncodedCircuit:
    """Rescale then dilate: n-photon, 2n-mode circuit with top-left block A/s."""
    a_s, scale = rescale(a, s)
    unitary = dilate(a_s)
    n = a_s.shape[0]
    return EncodedCircuit(
        unitary=unitary, scale=scale, photon_count=n, mode_count=2 * n
    )


def build_subgraph_block(
    a, candidates: Sequence[Sequence[int]]
) -> tuple[np.ndarray, tuple[int, ...], list[tuple[int, ...]]]:
    """Stacked block matrix K for ranking candidate vertex subsets.

    Block row j (rows j*k..j*k+k-1, columns 0..k-1) holds A restricted to
    candidate j; everything else is zero. Returns (K, input pattern over
    2kJ modes, per-candidate output patterns).
    """
    mat = numkernel.as_square_matrix(a)
    n_vertices = mat.shape[0]
    if not candidates:
        raise ValueError("need at least one candidate subset")
    k = len(candidates[0])
    if k < 1:
        raise ValueError("candidate subsets must be non-empty")
    big_j = len(candidates)
    size = k * big_j
    block = np.zeros((size, size), dtype=np.complex128)
    for j, subset in enumerate(candidates):
        if len(subset) != k:
            raise ValueError(
                f"candidate {j} has size {len(subset)}, expected {k}"
            )
        if len(set(subset)) != k:
            raise ValueError(f"candidate {j} contains duplicate vertices")
        if any(v < 0 or v >= n_vertices for v in subset):
            raise ValueError(f"candidate {j} has vertices outside 0..{n_vertices - 1}")
        block[j * k : (j + 1) * k, 0:k] = mat[np.ix_(list(subset), list(subset))]
    modes = 2 * size
    input_pattern = tuple(1 if i < k else 0 for i in range(modes))
    outputs = [
        tuple(1 if j * k <= i < (j + 1) * k else 0 for i in range(modes))
        for j in range(big_j)
    ]
    return block, input_pattern, outputs


@dataclass(frozen=True)
class MeshDecomposition:
    """Two-mode rotation sequence plus a trailing per-mode phase layer.

    ``recompose`` multiplies the elements in stored order and then the phase
    diagonal: U = E_1 @ E_2 @ ... @ E_K @ diag(exp(i*phases)).
    """

    mode_count: int
    elements: list[tuple[int, int, float, float]] = field(default_factory=list)
    phases: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _rotation(m: int, p: int, q: int, theta: float, phi: float) -> np.ndarray:
    """Two-mode rotation on modes (p, q): [[cos, e^{i phi} sin], [-e^{-i phi} sin, cos]]."""
    out = np.eye(m, dtype=np.complex128)
    c, s = np.cos(theta), np.sin(theta)
    out[p, p] = c
    out[p, q] = np.exp(1j * phi) * s
    out[q, p] = -np.exp(-1j * phi) * s
    out[q, q] = c
    return out


def decompose_mesh(u) -> MeshDecomposition:
    """Factor a unitary into adjacent-mode Givens rotations plus final phases.

    Triangular (Givens-QR) scheme: at most m(m-1)/2 elements.
    """
    mat = numkernel.as_square_matrix(u)
    m = mat.shape[0]
    defect = np.abs(mat.conj().T @ mat - np.eye(m)).max() if m else 0.0
    if defect > MESH_TOL:
        raise ValueError(f"input is not unitary (defect {defect:.3e})")
    work = mat.copy()
    applied: list[tuple[int, int, float, float]] = []
    for col in range(m - 1):
        for row in range(m - 1, col, -1):
            b = work[row, col]
            if abs(b) < 1e-14:
                continue
            a = work[row - 1, col]
            if abs(a) > 1e-14:
                theta = float(np.arctan2(abs(b), abs(a)))
                phi = float(np.angle(a) - np.angle(b))
            else:
                theta = np.pi / 2
                phi = float(-np.angle(b))
            # G @ work zeroes work[row, col]; G acts on rows (row-1, row)
            work = _rotation(m, row - 1, row, theta, phi) @ work
            applied.append((row - 1, row, theta, phi))
    phases = np.angle(np.diag(work))
    # G_K ... G_1 U = D, so U = G_1^dag ... G_K^dag D and G(theta, phi)^dag
    # equals G(-theta, phi); keep application order.
    elements = [(p, q, -theta, phi) for (p, q, theta, phi) in applied]
    return MeshDecomposition(mode_count=m, elements=elements, phases=phases)


def recompose_mesh(dec: MeshDecomposition) -> np.ndarray:
    m = dec.mode_count
    out = np.diag(np.exp(1j * dec.phases)).astype(np.complex128)
    for p, q, theta, phi in reversed(dec.elements):
        out = _rotation(m, p, q, theta, phi) @ out
    return out


def circuit_to_json(circuit: EncodedCircuit) -> str:
    """Serialize as {"m", "re", "im", "scale", "n"} with full double precision."""
    return json.dumps(
        {
            "m": circuit.mode_count,
            "re": circuit.unitary.real.tolist(),
            "im": circuit.unitary.imag.tolist(),
            "scale": circuit.scale,
            "n": circuit.photon_count,
        }
    )


def circuit_from_json(text: str) -> EncodedCircuit:
    doc = json.loads(text)
    unitary = np.asarray(doc["re"], dtype=float) + 1j * np.asarray(doc["im"], dtype=float)
    m = int(doc["m"])
    if unitary.shape != (m, m):
        raise ValueError(f"unitary shape {unitary.shape} does not match m={m}")
    return EncodedCircuit(
        unitary=unitary,
        scale=float(doc["scale"]),
        photon_count=int(doc["n"]),
        mode_count=m,
    )
