"""Construction of flipped-orthogonal conjugate-symmetric (FOCS) bases.

Starting from per-block Jordan chains, the basis is assembled as a product
of four factors, each of which keeps the conjugate-symmetry intact while
moving the Gram matrix one step closer to its canonical sip form:

1. symmetrize: real-block chains (already sip-reduced) and pair blocks
   ``[L | gamma conj(L)]`` are stacked into the chain factor; the Gram then
   has the anti-triangular Hankel pair-block shape,
2. phase: a diagonal factor rotates each pair-block Gram anchor onto the
   positive real axis,
3. scale: a scalar factor per pair block normalizes the anchor to 1,
4. flip correction: a unit-triangular Toeplitz factor per pair block zeroes
   the sub-anti-diagonal Gram entries via a finite inverse-square-root
   series, landing the Gram exactly on the sip form.

Every factor beyond the first commutes with the Jordan form, so the product
remains a Jordan basis throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chains import BlockChain, ChainSet, fit_chain_to, jordan_chains, reduce_real_chain
from .errors import (
    NotRealError,
    NotUnitTriangularError,
    PureImaginaryAnchorError,
    SingularBasisError,
    StructureMismatchError,
)
from .linalg import (
    DEFAULT_TOL,
    RCOND_FLOOR,
    affiliation_residuals,
    mat_norm,
    rcond,
    require_finite,
)
from .structure import (
    PAIR,
    REAL,
    JordanSpec,
    conjugate_symmetry_fit,
    h_selfadjoint_residual,
    jordan_form,
    sip_form,
)

ROLE_RAW_CHAIN = "raw-chain"
ROLE_FO = "fo"
ROLE_FOCS = "focs"
ROLE_RC = "rc"

#: Anchors with |Re g0| below this fraction of |g0| are rejected as purely imaginary.
ANCHOR_TOL = 1e-10

#: Cold-start chains are pre-rotated when the prospective anchor is this close
#: to the imaginary axis.
PHASE_GUARD = 0.1

#: Relative scale for structural zero-pattern assertions on Gram matrices.
STRUCT_RTOL = 1e-8


@dataclass(frozen=True)
class GramAnchor:
    """Anti-diagonal Gram entry of one pair block, split into polar pieces.

    ``r = |g0|``, ``s = |Re g0|``, ``phi = arg g0`` in (-pi, pi].
    """

    g0: complex
    r: float
    s: float
    phi: float
    block_index: int

    @classmethod
    def from_g0(cls, g0: complex, block_index: int,
                anchor_tol: float = ANCHOR_TOL) -> "GramAnchor":
        r = abs(g0)
        s = abs(g0.real)
        if r == 0.0:
            raise PureImaginaryAnchorError(
                f"pair block {block_index} has zero Gram anchor",
                block_index=block_index)
        if s <= anchor_tol * r:
            raise PureImaginaryAnchorError(
                f"pair block {block_index} Gram anchor {g0:.6e} is numerically "
                "purely imaginary; the phase step divides by |Re g0|",
                block_index=block_index)
        return cls(complex(g0), float(r), float(s), float(np.angle(g0)), block_index)


@dataclass(frozen=True)
class Certificate:
    """Residuals certifying a canonical basis against its target pair."""

    similarity: float
    congruence: float
    cs_residual: float | None = None
    max_imag: float | None = None


@dataclass(frozen=True)
class CanonicalBasis:
    """An invertible basis matrix tagged with its role and certificates.

    ``eps`` lists the computed sign characteristic per block (None on pair
    blocks).  ``gamma`` is the fitted conjugate-symmetry scalar where the
    role implies one.
    """

    matrix: np.ndarray
    role: str
    gamma: complex | None
    cert: Certificate
    eps: tuple[int | None, ...]


@dataclass(frozen=True)
class PipelineTrace:
    """All four factors and intermediate Grams of one basis construction."""

    chain_factor: np.ndarray      # Z1
    phase_factor: np.ndarray      # Z2
    scale_factor: np.ndarray      # Z3
    flip_factor: np.ndarray       # Z4
    gram_raw: np.ndarray
    gram_phased: np.ndarray
    gram_scaled: np.ndarray
    basis: np.ndarray
    gamma: complex


def _inv_sqrt_coefficients(count: int) -> list[Fraction]:
    """Binomial series coefficients of ``(1 + x)^(-1/2)``: 1, -1/2, 3/8, ..."""
    coeffs = [Fraction(1)]
    for k in range(1, count):
        coeffs.append(coeffs[-1] * Fraction(-(2 * k - 1), 2 * k))
    return coeffs


def toeplitz_inv_sqrt(g3: np.ndarray, *, tol: float = STRUCT_RTOL) -> np.ndarray:
    """Unit lower-triangular Toeplitz ``F`` with ``F @ F @ g3 = I``.

    ``g3`` must be unit lower triangular; writing ``g3 = I + E`` with ``E``
    strictly lower triangular (hence nilpotent), ``F`` is the binomial series
    of ``(1 + E)^(-1/2)`` truncated by nilpotency, so the defining identity
    holds as a finite polynomial identity in ``E``.  Exact inputs (object
    arrays of Fractions) are processed in exact arithmetic.

    Raises
    ------
    NotUnitTriangularError
        If the diagonal deviates from 1 or the upper part from 0 beyond
        ``tol`` (exactly, for exact inputs).
    """
    g3 = np.atleast_2d(np.asarray(g3))
    p = g3.shape[0]
    if g3.shape != (p, p):
        raise ValueError("g3 must be square")
    exact = g3.dtype == object

    if exact:
        if any(g3[i, i] != 1 for i in range(p)):
            raise NotUnitTriangularError("diagonal is not exactly 1")
        if any(g3[i, j] != 0 for i in range(p) for j in range(i + 1, p)):
            raise NotUnitTriangularError("upper part is not exactly 0")
        ident = np.array([[Fraction(int(i == j)) for j in range(p)]
                          for i in range(p)], dtype=object)
    else:
        g3 = require_finite(g3, "g3")
        scale = max(1.0, float(np.max(np.abs(g3))))
        if np.max(np.abs(np.diag(g3) - 1.0)) > tol * scale:
            raise NotUnitTriangularError("diagonal deviates from 1 beyond tolerance")
        if p > 1 and np.max(np.abs(np.triu(g3, 1))) > tol * scale:
            raise NotUnitTriangularError("upper part deviates from 0 beyond tolerance")
        ident = np.eye(p, dtype=g3.dtype)

    e = np.tril(g3, -1)
    coeffs = _inv_sqrt_coefficients(p)
    f = ident.copy()
    ek = ident.copy()
    for k in range(1, p):
        ek = ek @ e
        c = coeffs[k] if exact else float(coeffs[k])
        f = f + c * ek
    return f


def phase_step(anchor: GramAnchor, p: int) -> np.ndarray:
    """Diagonal 2p x 2p factor rotating the pair-block anchor onto the
    positive real axis: ``diag(e^{-i phi/2} sqrt(s/r) I, e^{+i phi/2} sqrt(s/r) I)``."""
    if anchor.s <= 0.0:
        raise PureImaginaryAnchorError(block_index=anchor.block_index)
    amp = np.sqrt(anchor.s / anchor.r)
    a = amp * np.exp(-0.5j * anchor.phi)
    b = amp * np.exp(+0.5j * anchor.phi)
    out = np.zeros((2 * p, 2 * p), dtype=complex)
    out[:p, :p] = a * np.eye(p)
    out[p:, p:] = b * np.eye(p)
    return out


def scale_step(anchor: GramAnchor, p: int) -> np.ndarray:
    """Scalar 2p x 2p factor ``(1/sqrt(s)) I`` normalizing the anchor to 1."""
    if anchor.s <= 0.0:
        raise PureImaginaryAnchorError(block_index=anchor.block_index)
    return np.eye(2 * p, dtype=complex) / np.sqrt(anchor.s)


def flip_step(gram_pair_block: np.ndarray, *, tol: float = STRUCT_RTOL) -> np.ndarray:
    """Unit-Toeplitz 2p x 2p factor zeroing sub-anti-diagonal Gram entries.

    The lower-left part ``G2`` of the pair-block Gram (anti-triangular
    Hankel with unit anti-diagonal) is flipped into a unit lower-triangular
    Toeplitz matrix; its inverse square root ``F`` then satisfies
    ``F_up^T G2 F_up = sip`` with ``F_up = F^T``, and the block factor is
    ``diag(F_up, conj(F_up))``.
    """
    gram_pair_block = np.asarray(gram_pair_block)
    if gram_pair_block.shape[0] % 2:
        raise ValueError("pair-block Gram must have even size")
    p = gram_pair_block.shape[0] // 2
    g2 = gram_pair_block[p:, :p]
    f = toeplitz_inv_sqrt(g2 @ np.fliplr(np.eye(p)), tol=tol)
    f_up = f.T
    out = np.zeros((2 * p, 2 * p), dtype=complex)
    out[:p, :p] = f_up
    out[p:, p:] = np.conj(f_up)
    return out


def symmetrize_step(chains: ChainSet, reduced: dict[int, np.ndarray],
                    gamma: complex, *,
                    rcond_floor: float = RCOND_FLOOR) -> np.ndarray:
    """Assemble the chain factor from reduced real chains and symmetrized
    pair blocks ``[L | gamma conj(L)]``.

    Raises
    ------
    SingularBasisError
        When the assembled factor fails the conditioning check.
    """
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    cols = []
    for i, bc in enumerate(chains.chains):
        if bc.block.kind == REAL:
            cols.append(reduced[i].astype(complex))
        else:
            l = bc.matrix
            cols.append(np.concatenate([l, gamma * np.conj(l)], axis=1))
    z1 = np.concatenate(cols, axis=1)
    rc = rcond(z1)
    if rc < rcond_floor:
        raise SingularBasisError(f"chain basis is numerically singular (rcond={rc:.3e})")
    return z1


def _pair_sub_block(gram: np.ndarray, off: int, p: int) -> np.ndarray:
    """Lower-left p x p part of the pair block at ``off`` (conjugate-chain
    against chain inner products)."""
    return gram[off + p:off + 2 * p, off:off + p]


def _anchor_from_gram(gram: np.ndarray, off: int, p: int, block_index: int,
                      anchor_tol: float) -> GramAnchor:
    z = _pair_sub_block(gram, off, p)
    g0 = complex(np.mean(np.diag(np.fliplr(z))))
    return GramAnchor.from_g0(g0, block_index, anchor_tol)


def _check_gram_structure(gram: np.ndarray, spec: JordanSpec,
                          eps: dict[int, int], stol: float) -> None:
    """Verify the post-symmetrize Gram shape: block diagonal, signed sip on
    real blocks, zero diagonal sub-blocks and anti-triangular Hankel
    cross part on pair blocks."""
    leak = gram.copy()
    for off, b in spec.offsets():
        w = b.width
        leak[off:off + w, off:off + w] = 0.0
    if mat_norm(leak) > stol:
        raise StructureMismatchError(
            f"Gram is not block diagonal (leak {mat_norm(leak):.3e} > {stol:.3e})")
    for i, (off, b) in enumerate(spec.offsets()):
        blk = gram[off:off + b.width, off:off + b.width]
        if b.kind == REAL:
            target = eps[i] * np.fliplr(np.eye(b.size))
            dev = mat_norm(blk - target)
            if dev > stol:
                raise StructureMismatchError(
                    f"real block {i} Gram deviates from signed sip by {dev:.3e}")
            continue
        p = b.size
        x, u = blk[:p, :p], blk[p:, p:]
        y, z = blk[:p, p:], blk[p:, :p]
        if mat_norm(x) > stol or mat_norm(u) > stol:
            raise StructureMismatchError(
                f"pair block {i} Gram has nonzero diagonal sub-blocks")
        if mat_norm(y - z.conj().T) > stol:
            raise StructureMismatchError(
                f"pair block {i} Gram is not Hermitian across halves")
        for r in range(p):
            for c in range(p):
                if r + c < p - 1 and abs(z[r, c]) > stol:
                    raise StructureMismatchError(
                        f"pair block {i} Gram has mass above the anti-diagonal")
                if r + 1 < p and c >= 1 and abs(z[r, c] - z[r + 1, c - 1]) > stol:
                    raise StructureMismatchError(
                        f"pair block {i} Gram is not Hankel")


def focs_basis(a: np.ndarray, h: np.ndarray, spec: JordanSpec,
               gamma: complex = 1.0, *,
               anchor: np.ndarray | None = None,
               tol: float = DEFAULT_TOL,
               struct_rtol: float = STRUCT_RTOL,
               guard: float = PHASE_GUARD,
               anchor_tol: float = ANCHOR_TOL,
               rank_rtol: float | None = None,
               drift_radius: float | None = None,
               norm: str = "spectral") -> tuple[CanonicalBasis, PipelineTrace]:
    """Construct a gamma-FOCS basis of the real h-selfadjoint matrix ``a``.

    The returned basis takes ``(a, h)`` to the canonical pair of ``spec``
    and its pair blocks satisfy ``second_half = gamma' conj(first_half)``
    with ``|gamma'| = |gamma|`` (for cold starts ``gamma'`` equals ``gamma``
    up to roundoff).  The trace carries the four factors and intermediate
    Grams for factor-wise diagnostics.

    Parameters
    ----------
    anchor : ndarray, optional
        Reference basis to anchor the chains to.  Each block chain is
        recombined (least squares over chain-preserving mixes) to be as
        close as possible to the corresponding columns of ``anchor`` before
        the pipeline runs.  With an anchor from the same pipeline at a
        nearby pair, all correction factors stay near the identity.
    guard : float
        Cold-start only: when the prospective Gram anchor of a pair block
        lies within this fraction of the imaginary axis, that block's chain
        is pre-rotated by ``e^{i pi/4}``, moving the anchor decisively off the
        axis.  The rotation is a chain relabeling; anchors that are still
        degenerate afterwards raise :class:`PureImaginaryAnchorError`.
    """
    a = require_finite(a, "a")
    h = require_finite(h, "h")
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    gamma = complex(gamma)

    # the conjugate-symmetric synthesis needs conj(chain) to be the chain of
    # the conjugate eigenvalue, which holds for real pairs only
    for name, m in (("a", a), ("h", h)):
        if np.iscomplexobj(m):
            imag = float(np.max(np.abs(m.imag))) if m.size else 0.0
            if imag > struct_rtol * max(1.0, mat_norm(m, norm)):
                raise NotRealError(
                    f"{name} has imaginary part {imag:.3e}; the "
                    "conjugate-symmetric construction needs a real pair")
    a = np.real(a)
    h = np.real(h)

    pre = h_selfadjoint_residual(a, h, norm=norm)
    pre_tol = struct_rtol * max(1.0, mat_norm(a, norm) * mat_norm(h, norm))
    if pre > pre_tol:
        raise StructureMismatchError(
            f"pair is not h-selfadjoint (residual {pre:.3e} > {pre_tol:.3e})")

    kwargs = {}
    if rank_rtol is not None:
        kwargs["rank_rtol"] = rank_rtol
    if drift_radius is not None:
        kwargs["drift_radius"] = drift_radius
    chains = jordan_chains(a, spec, **kwargs)

    prepared = []
    reduced: dict[int, np.ndarray] = {}
    eps: dict[int, int] = {}
    for i, bc in enumerate(chains.chains):
        mat = bc.matrix
        if anchor is not None:
            target = anchor[:, bc.offset:bc.offset + bc.block.size]
            mat = fit_chain_to(mat, target)
            if bc.block.kind == REAL:
                mat = np.real(mat)
        if bc.block.kind == REAL:
            red, sign = reduce_real_chain(mat, h)
            if sign != bc.block.sign:
                raise StructureMismatchError(
                    f"block {i}: computed sign characteristic {sign:+d} "
                    f"contradicts declared {bc.block.sign:+d}")
            reduced[i] = red
            eps[i] = sign
        elif anchor is None and guard > 0.0:
            # prospective anchor; rotate the chain off the degenerate axis
            z = (gamma * np.conj(mat)).conj().T @ h @ mat
            g0 = complex(np.mean(np.diag(np.fliplr(z))))
            if abs(g0) > 0.0 and abs(g0.real) < guard * abs(g0):
                mat = mat * np.exp(0.25j * np.pi)
        prepared.append(BlockChain(bc.block, bc.offset, mat))

    chain_set = ChainSet(spec, tuple(prepared))

    z1 = symmetrize_step(chain_set, reduced, gamma)
    n_dim = spec.total_size
    stol = struct_rtol * max(1.0, mat_norm(h, norm) * mat_norm(z1, norm) ** 2)

    gram0 = z1.conj().T @ h @ z1
    _check_gram_structure(gram0, spec, eps, stol)

    z2 = np.eye(n_dim, dtype=complex)
    z3 = np.eye(n_dim, dtype=complex)
    for i, (off, b) in enumerate(spec.offsets()):
        if b.kind != PAIR:
            continue
        anc = _anchor_from_gram(gram0, off, b.size, i, anchor_tol)
        z2[off:off + b.width, off:off + b.width] = phase_step(anc, b.size)
        z3[off:off + b.width, off:off + b.width] = scale_step(anc, b.size)

    gram1 = z2.conj().T @ gram0 @ z2
    for i, (off, b) in enumerate(spec.offsets()):
        if b.kind != PAIR:
            continue
        anc1 = _anchor_from_gram(gram1, off, b.size, i, anchor_tol)
        if abs(anc1.g0.imag) > stol or anc1.g0.real <= 0.0:
            raise StructureMismatchError(
                f"pair block {i} anchor {anc1.g0:.3e} not real positive after phase step")

    gram2 = z3.conj().T @ gram1 @ z3
    z4 = np.eye(n_dim, dtype=complex)
    for i, (off, b) in enumerate(spec.offsets()):
        if b.kind != PAIR:
            continue
        anc2 = _anchor_from_gram(gram2, off, b.size, i, anchor_tol)
        if abs(anc2.g0 - 1.0) > stol:
            raise StructureMismatchError(
                f"pair block {i} anchor {anc2.g0:.3e} not unit after scale step")
        blk = gram2[off:off + b.width, off:off + b.width]
        z4[off:off + b.width, off:off + b.width] = flip_step(blk, tol=struct_rtol)

    basis_mat = z1 @ z2 @ z3 @ z4
    p_target = sip_form(spec)
    gram_final = z4.conj().T @ gram2 @ z4
    final_dev = mat_norm(gram_final - p_target, norm)
    if final_dev > stol:
        raise StructureMismatchError(
            f"final Gram deviates from sip form by {final_dev:.3e}")

    sim, cong = affiliation_residuals(a, h, basis_mat, jordan_form(spec),
                                      p_target, norm=norm)
    if max(sim, cong) > tol * max(1.0, mat_norm(h, norm)):
        raise StructureMismatchError(
            f"constructed basis misses its certificate gate: similarity "
            f"{sim:.3e}, congruence {cong:.3e} vs tol {tol:.1e}")
    gamma_out, cs_res, _ = conjugate_symmetry_fit(basis_mat, spec, norm=norm)
    has_pairs = any(b.kind == PAIR for b in spec.blocks)
    if has_pairs and abs(abs(gamma_out) - abs(gamma)) > 1e-8 * abs(gamma):
        raise StructureMismatchError(
            f"conjugate-symmetry scalar drifted in modulus: requested "
            f"|{gamma}| = {abs(gamma):.6g}, got {abs(gamma_out):.6g}")
    eps_tuple = tuple(eps.get(i) for i in range(len(spec.blocks)))
    basis = CanonicalBasis(
        matrix=basis_mat, role=ROLE_FOCS, gamma=gamma_out,
        cert=Certificate(similarity=sim, congruence=cong, cs_residual=cs_res),
        eps=eps_tuple)
    trace = PipelineTrace(
        chain_factor=z1, phase_factor=z2, scale_factor=z3, flip_factor=z4,
        gram_raw=gram0, gram_phased=gram1, gram_scaled=gram2,
        basis=basis_mat, gamma=gamma_out)
    return basis, trace
