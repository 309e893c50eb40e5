"""Block parametrization of U(2n).

Every U ∈ U(2n) can be written as
½ · diag(A, B) · [[I+Z, I−Z], [I−Z, I+Z]] · diag(I, C) with A, B, C, Z ∈ U(n).
Applied recursively this maps 4^k unimodular numbers onto U(2^k).
"""

import logging

import numpy as np
from typing_extensions import Any, Sequence

from .errors import DimensionError, ValidationError
from .linalg import (
    ComplexArray,
    UnitaryMatrix,
    polar_decompose,
    sign1_array,
    square_array,
)
from .lowdim import u2_from_phases, u2_params
from .results import BlockDecomposition, DyadicTree, U2Params

logger = logging.getLogger(__name__)


def _blocks(a: Any, b: Any, c: Any, z: Any) -> tuple[ComplexArray, ...]:
    arrays = tuple(square_array(m) for m in (a, b, c, z))
    sizes = {m.shape[0] for m in arrays}
    if len(sizes) != 1:
        raise DimensionError(f"blocks must share one size, got sizes {sorted(sizes)}")
    return arrays


def _compose(a: ComplexArray, b: ComplexArray, c: ComplexArray, z: ComplexArray) -> ComplexArray:
    eye = np.eye(a.shape[0])
    return 0.5 * np.block(
        [
            [a @ (eye + z), a @ (eye - z) @ c],
            [b @ (eye - z), b @ (eye + z) @ c],
        ]
    )


def block2n_synthesize(a: Any, b: Any, c: Any, z: Any) -> UnitaryMatrix:
    """½ [[A(I+Z), A(I−Z)C], [B(I−Z), B(I+Z)C]].

    With 1×1 blocks this is `u2_from_phases(a, b, c, z)`.

    Raises:
        DimensionError: the blocks differ in size.
    """
    return UnitaryMatrix(_compose(*_blocks(a, b, c, z)))


def block2n_decompose(matrix: Any) -> BlockDecomposition:
    """Find A, B, C, Z ∈ U(n) with U = block2n_synthesize(A, B, C, Z).

    Writes U = [[X, Y], [X′, Y′]] and takes the polar decompositions
    X = S_X U_X, Y = S_Y U_Y. Then C* = i U_Y* U_X, A = (S_X + i S_Y) U_X,
    B = X′ + Y′C*, and Z is the lower-right block of 𝔉 V 𝔉 for
    V = diag(A*, B*) U diag(I, C*) and 𝔉 = [[I, I], [I, −I]]/√2.
    Singular X or Y get the polar factor closest to the identity on their
    null space.

    ???+ Example
        ```python
        parts = block2n_decompose(np.eye(4))
        parts.C.entries  # -i times the identity
        ```

    Raises:
        DimensionError: the size of U is odd.
    """
    u = square_array(matrix)
    size = u.shape[0]
    if size % 2:
        raise DimensionError(f"block decomposition needs an even size, got {size}")
    n = size // 2
    x, y = u[:n, :n], u[:n, n:]
    x_low, y_low = u[n:, :n], u[n:, n:]

    px, py = polar_decompose(x), polar_decompose(y)
    ux, uy = px.unitary.entries, py.unitary.entries
    c_star = 1j * uy.conj().T @ ux
    a = (px.psd.entries + 1j * py.psd.entries) @ ux
    b = x_low + y_low @ c_star

    eye = np.eye(n)
    zero = np.zeros((n, n))
    v = (
        np.block([[a.conj().T, zero], [zero, b.conj().T]])
        @ u
        @ np.block([[eye, zero], [zero, c_star]])
    )
    fourier = np.block([[eye, eye], [eye, -eye]]) / np.sqrt(2)
    z = (fourier @ v @ fourier)[n:, n:]
    c = c_star.conj().T

    error = float(np.max(np.abs(_compose(a, b, c, z) - u)))
    logger.debug(f"Block decomposition of size {size}, reconstruction {error:.3e}")
    return BlockDecomposition(
        A=UnitaryMatrix(a, tolerance=1e-8),
        B=UnitaryMatrix(b, tolerance=1e-8),
        C=UnitaryMatrix(c, tolerance=1e-8),
        Z=UnitaryMatrix(z, tolerance=1e-8),
        reconstruction_error=error,
    )


def _quadruple(values: Sequence[complex], name: str) -> tuple[complex, complex, complex, complex]:
    if len(values) != 4:
        raise ValidationError(f"{name} needs four phases, got {len(values)}")
    p0, p1, p2, p3 = (complex(v) for v in values)
    for v in (p0, p1, p2, p3):
        if abs(abs(v) - 1.0) > 1e-12:
            raise ValidationError(f"{name} has a non-unimodular entry {v}")
    return p0, p1, p2, p3


def _u2(values: Sequence[complex], name: str) -> ComplexArray:
    p0, p1, p2, p3 = _quadruple(values, name)
    return np.asarray(u2_from_phases(p1, p2, p3, p0).entries)


def u4_from_phases(
    a: Sequence[complex],
    b: Sequence[complex],
    c: Sequence[complex],
    z: Sequence[complex],
) -> UnitaryMatrix:
    """A U(4) matrix from 16 phases.

    Each quadruple (p₀, p₁, p₂, p₃) gives the U(2) block
    ½ [[p₁(1+p₀), p₁p₃(1−p₀)], [p₂(1−p₀), p₂p₃(1+p₀)]], and the four blocks
    are composed by `block2n_synthesize`.
    """
    return block2n_synthesize(_u2(a, "a"), _u2(b, "b"), _u2(c, "c"), _u2(z, "z"))


def u4_entries(
    a: Sequence[complex],
    b: Sequence[complex],
    c: Sequence[complex],
    z: Sequence[complex],
) -> ComplexArray:
    """The sixteen entries of `u4_from_phases`, each written out as a polynomial."""
    a0, a1, a2, a3 = _quadruple(a, "a")
    b0, b1, b2, b3 = _quadruple(b, "b")
    c0, c1, c2, c3 = _quadruple(c, "c")
    z0, z1, z2, z3 = _quadruple(z, "z")
    h, q = 0.5, 0.25

    # the four entries of (I ± Z) that appear below
    plus_11 = 1 + h * z1 * (1 + z0)
    minus_11 = 1 - h * z1 * (1 + z0)
    plus_22 = 1 + h * z2 * z3 * (1 + z0)
    minus_22 = 1 - h * z2 * z3 * (1 + z0)
    z21 = z2 * (1 - z0)
    z12 = z1 * z3 * (1 - z0)

    u = np.empty((4, 4), dtype=np.complex128)
    u[0, 0] = h * (q * a1 * a3 * (1 - a0) * z21 + h * a1 * (1 + a0) * plus_11)
    u[1, 0] = h * (q * a2 * a3 * (1 + a0) * z21 + h * a2 * (1 - a0) * plus_11)
    u[2, 0] = h * (-q * b1 * b3 * (1 - b0) * z21 + h * b1 * (1 + b0) * minus_11)
    u[3, 0] = h * (-q * b2 * b3 * (1 + b0) * z21 + h * b2 * (1 - b0) * minus_11)

    u[0, 1] = h * (q * a1 * (1 + a0) * z12 + h * a1 * a3 * (1 - a0) * plus_22)
    u[1, 1] = h * (q * a2 * (1 - a0) * z12 + h * a2 * a3 * (1 + a0) * plus_22)
    u[2, 1] = h * (-q * b1 * (1 + b0) * z12 + h * b1 * b3 * (1 - b0) * minus_22)
    u[3, 1] = h * (-q * b2 * (1 - b0) * z12 + h * b2 * b3 * (1 + b0) * minus_22)

    top_1 = -q * a1 * a3 * (1 - a0) * z21 + h * a1 * (1 + a0) * minus_11
    top_2 = -q * a1 * (1 + a0) * z12 + h * a1 * a3 * (1 - a0) * minus_22
    second_1 = -q * a2 * a3 * (1 + a0) * z21 + h * a2 * (1 - a0) * minus_11
    second_2 = -q * a2 * (1 - a0) * z12 + h * a2 * a3 * (1 + a0) * minus_22
    third_1 = q * b1 * b3 * (1 - b0) * z21 + h * b1 * (1 + b0) * plus_11
    third_2 = q * b1 * (1 + b0) * z12 + h * b1 * b3 * (1 - b0) * plus_22
    fourth_1 = q * b2 * b3 * (1 + b0) * z21 + h * b2 * (1 - b0) * plus_11
    fourth_2 = q * b2 * (1 - b0) * z12 + h * b2 * b3 * (1 + b0) * plus_22

    for row, (first, second) in enumerate(
        [(top_1, top_2), (second_1, second_2), (third_1, third_2), (fourth_1, fourth_2)]
    ):
        u[row, 2] = h * (h * c1 * (1 + c0) * first + h * c2 * (1 - c0) * second)
        u[row, 3] = h * (h * c1 * c3 * (1 - c0) * first + h * c2 * c3 * (1 + c0) * second)
    return u


def dyadic_decompose(matrix: Any) -> DyadicTree:
    """Split a U(2^k) matrix recursively into blocks down to single phases."""
    u = square_array(matrix)
    size = u.shape[0]
    if size & (size - 1):
        raise DimensionError(f"size must be a power of two, got {size}")
    if size == 1:
        return DyadicTree(size=1, phase=complex(sign1_array(u[0])[0]))
    parts = block2n_decompose(u)
    return DyadicTree(
        size=size,
        children=tuple(
            dyadic_decompose(part.entries) for part in (parts.A, parts.B, parts.C, parts.Z)
        ),
    )


def dyadic_synthesize(tree: DyadicTree) -> UnitaryMatrix:
    """Rebuild the U(2^k) matrix of a DyadicTree."""
    return UnitaryMatrix(_synthesize_node(tree), tolerance=1e-8)


def _synthesize_node(tree: DyadicTree) -> ComplexArray:
    if tree.size == 1:
        return np.array([[tree.phase]], dtype=np.complex128)
    a, b, c, z = (_synthesize_node(child) for child in tree.children)
    return _compose(a, b, c, z)


def dyadic_from_phases(phases: Sequence[complex]) -> DyadicTree:
    """The DyadicTree whose `flatten()` is `phases` (length 4^k)."""
    values = np.asarray(phases, dtype=np.complex128)
    count = values.shape[0]
    if count == 1:
        return DyadicTree(size=1, phase=complex(values[0]))
    if count < 4 or count % 4:
        raise DimensionError(f"the number of phases must be a power of four, got {count}")
    quarter = count // 4
    children = tuple(dyadic_from_phases(values[i * quarter : (i + 1) * quarter]) for i in range(4))
    return DyadicTree(size=2 * children[0].size, children=children)


def _quadruple_of(params: U2Params) -> tuple[complex, complex, complex, complex]:
    return (params.z, params.a, params.b, params.c)


def u4_params(matrix: Any) -> dict[str, tuple[complex, complex, complex, complex]]:
    """Sixteen phases (a, b, c, z quadruples) with `u4_from_phases(**result)` = U."""
    u = square_array(matrix)
    if u.shape[0] != 4:
        raise DimensionError(f"expected a 4x4 matrix, got {u.shape[0]}x{u.shape[1]}")
    parts = block2n_decompose(u)
    return {
        name: _quadruple_of(u2_params(block.entries))
        for name, block in (("a", parts.A), ("b", parts.B), ("c", parts.C), ("z", parts.Z))
    }
