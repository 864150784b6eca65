"""Stability experiments: generate, perturb, re-canonize, measure.

An :class:`Instance` is a seeded h-selfadjoint pair with its reference
canonical basis.  Perturbations act on the generating similarity (and, in
weak mode, on the eigenvalues), then rebuild the pair, so the Jordan
structure is preserved exactly by construction rather than approximately by
hope.  Re-canonization anchors the fresh basis to the reference one at the
chain level; per-delta deviation ratios then estimate the Lipschitz
constant empirically.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from statistics import median

import numpy as np

from .errors import (
    AmbiguousMatchError,
    CanonError,
    DeltaUnreachableError,
    KindMismatchError,
    RetryExhaustedError,
)
from .linalg import mat_norm, refined_inverse
from .pipeline import CanonicalBasis, Certificate, PipelineTrace, focs_basis
from .rc import rc_basis
from .structure import (
    PAIR,
    REAL,
    BlockSpec,
    JordanSpec,
    conjugate_symmetry_fit,
    mixing_matrix_inv,
    real_jordan_form,
    sip_form,
)

MODE_STRICT = "strict"
MODE_WEAK = "weak"
KIND_FOCS = "focs"
KIND_RC = "rc"

#: Largest perturbation magnitude the experiments accept.
DELTA_MAX = 0.05

#: Eigenvalue clustering radius is this multiple of the trial delta.
CLUSTER_RADIUS_FACTOR = 10.0

#: Median ratios across delta decades may spread by at most this factor.
SPREAD_LIMIT = 10.0

#: Selfadjointness quality required of generated and perturbed pairs.
SELFADJ_TOL = 1e-12


@dataclass(frozen=True)
class Instance:
    """A generated pair with its reference basis; the unit of experiment.

    ``w`` is the generating similarity; it is reconstructible from
    ``(spec, seed)``, so deserialized instances may leave it None.
    """

    spec: JordanSpec
    a0: np.ndarray
    h0: np.ndarray
    t0: CanonicalBasis
    seed: int
    w: np.ndarray | None = None

    @property
    def kind(self) -> str:
        return self.t0.role


@dataclass(frozen=True)
class PerturbedPair:
    """One structure-preserving perturbation of an instance.

    ``spec`` carries the true (possibly eigenvalue-shifted) structure the
    pair was rebuilt from; in strict mode it is the instance spec itself.
    """

    a: np.ndarray
    h: np.ndarray
    spec: JordanSpec


def validate_experiment_spec(spec: JordanSpec) -> None:
    """Reject structures the experiments do not cover.

    Eigenvalues must be nonzero (stability is studied for invertible
    matrices) and pairwise distinct across blocks, counting conjugates.
    """
    eigs: list[complex] = []
    for b in spec.blocks:
        if abs(b.lam) <= 1e-12:
            raise ValueError(
                f"eigenvalue {b.lam} is numerically zero; generated matrices "
                "must be invertible")
        eigs.append(b.lam)
        if b.kind == PAIR:
            eigs.append(complex(np.conj(b.lam)))
    for i in range(len(eigs)):
        for j in range(i + 1, len(eigs)):
            if eigs[i] == eigs[j]:
                raise ValueError(
                    f"blocks share the eigenvalue {eigs[i]}; one block per "
                    "distinct eigenvalue is required")


def _rebuild_pair(w: np.ndarray, jr: np.ndarray,
                  p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Real pair ``(w jr w^-1, w^-T p w^-1)`` from a generating similarity.

    Both products share one refined inverse and the Gram side is symmetrized
    exactly, keeping the selfadjointness defect at the rounding floor.
    """
    v = refined_inverse(w)
    a = w @ jr @ v
    h = v.T @ p @ v
    return a, (h + h.T) / 2.0


def _selfadj_defect(a: np.ndarray, h: np.ndarray) -> float:
    return mat_norm(h @ a - a.T @ h)


def _draw_similarity(spec: JordanSpec, seed: int, *,
                     cond_limit: float,
                     max_draws: int,
                     selfadj_tol: float,
                     w_override: np.ndarray | None = None
                     ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Seeded draw of the generating similarity and its rebuilt pair.

    Draws are rejected until the condition number is under ``cond_limit``
    and the rebuilt pair passes the selfadjointness gate, so the procedure
    is a pure function of ``(spec, seed)``.
    """
    n = spec.total_size
    jr = real_jordan_form(spec)
    p = sip_form(spec)
    rng = np.random.default_rng(seed)
    for _ in range(max_draws):
        w = w_override if w_override is not None else rng.uniform(-1.0, 1.0, (n, n))
        if np.linalg.cond(w) >= cond_limit:
            if w_override is not None:
                raise RetryExhaustedError("w_override fails the conditioning gate")
            continue
        a0, h0 = _rebuild_pair(w, jr, p)
        if _selfadj_defect(a0, h0) > selfadj_tol:
            if w_override is not None:
                raise RetryExhaustedError("w_override fails the quality gate")
            continue
        return w, a0, h0
    raise RetryExhaustedError(f"no acceptable similarity in {max_draws} draws")


def generate_instance(spec: JordanSpec, seed: int, *,
                      kind: str = KIND_FOCS,
                      gamma: complex = 1.0,
                      cond_limit: float = 100.0,
                      max_draws: int = 100,
                      selfadj_tol: float = SELFADJ_TOL,
                      w_override: np.ndarray | None = None) -> Instance:
    """Draw a seeded instance: a random well-conditioned similarity applied
    to the real canonical pair, plus the cold reference basis of the
    requested kind.  Deterministic in ``seed``.

    ``w_override`` bypasses the random draw (test hook) but still passes the
    conditioning and quality gates.
    """
    validate_experiment_spec(spec)
    if kind not in (KIND_FOCS, KIND_RC):
        raise ValueError(f"unknown kind {kind!r}")
    w, a0, h0 = _draw_similarity(spec, seed, cond_limit=cond_limit,
                                 max_draws=max_draws, selfadj_tol=selfadj_tol,
                                 w_override=w_override)
    if kind == KIND_RC:
        t0, _ = rc_basis(a0, h0, spec)
    else:
        t0, _ = focs_basis(a0, h0, spec, gamma)
    if max(t0.cert.similarity, t0.cert.congruence) > 1e-10:
        raise RetryExhaustedError(
            f"reference basis residuals {t0.cert} exceed the instance gate")
    return Instance(spec=spec, a0=a0, h0=h0, t0=t0, seed=int(seed), w=w)


def _generating_similarity(inst: Instance, *,
                           cond_limit: float = 100.0,
                           max_draws: int = 100,
                           selfadj_tol: float = SELFADJ_TOL) -> np.ndarray:
    if inst.w is not None:
        return inst.w
    w, _, _ = _draw_similarity(inst.spec, inst.seed, cond_limit=cond_limit,
                               max_draws=max_draws, selfadj_tol=selfadj_tol)
    return w


def _shift_spec(spec: JordanSpec, shifts: list[complex]) -> JordanSpec:
    blocks = []
    for b, eta in zip(spec.blocks, shifts):
        if b.kind == REAL:
            blocks.append(BlockSpec(REAL, b.lam.real + eta.real, b.size, b.sign))
        else:
            blocks.append(BlockSpec(PAIR, b.lam + eta, b.size))
    return JordanSpec(tuple(blocks))


def perturb_instance(inst: Instance, delta: float, mode: str, seed: int, *,
                     eig_frac: float = 0.1,
                     max_bisect: int = 60,
                     selfadj_tol: float = SELFADJ_TOL,
                     max_redraws: int = 5,
                     norm: str = "spectral") -> PerturbedPair:
    """Structure-preserving perturbation with measured input at most ``delta``.

    A random bump is added to the generating similarity; weak mode also
    shifts each block eigenvalue by at most ``eig_frac * delta`` (conjugate
    pairs symmetrically).  The bump and shifts are rescaled together, one
    linear correction followed by halving, until
    ``||a - a0|| + ||h - h0|| <= delta``.  ``delta = 0`` short-circuits to
    the unperturbed pair.  Deterministic in ``seed``.

    Raises
    ------
    DeltaUnreachableError
        When ``max_bisect`` halvings cannot fit the perturbation under
        ``delta``.
    RetryExhaustedError
        When no redraw of the bump reaches the selfadjointness quality gate.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if mode not in (MODE_STRICT, MODE_WEAK):
        raise ValueError(f"unknown mode {mode!r}")
    if delta == 0.0:
        return PerturbedPair(inst.a0.copy(), inst.h0.copy(), inst.spec)

    n = inst.spec.total_size
    w0 = _generating_similarity(inst)
    p = sip_form(inst.spec)
    rng = np.random.default_rng(seed)

    best: tuple[float, PerturbedPair] | None = None
    for _ in range(max_redraws):
        dw = rng.uniform(-1.0, 1.0, (n, n))
        dw /= mat_norm(dw)
        shifts: list[complex] = [0.0j] * len(inst.spec.blocks)
        if mode == MODE_WEAK:
            shifts = []
            for b in inst.spec.blocks:
                mag = eig_frac * delta * rng.uniform(0.0, 1.0)
                if b.kind == REAL:
                    shifts.append(complex(mag * rng.choice([-1.0, 1.0]), 0.0))
                else:
                    ang = rng.uniform(0.0, 2.0 * np.pi)
                    shifts.append(mag * complex(np.cos(ang), np.sin(ang)))

        def build(t: float) -> tuple[PerturbedPair, float]:
            # eigenvalue shifts scale with t but never beyond their cap
            spec_t = _shift_spec(inst.spec, [min(t, 1.0) * s for s in shifts])
            a, h = _rebuild_pair(w0 + t * dw, real_jordan_form(spec_t), p)
            measured = (mat_norm(a - inst.a0, norm)
                        + mat_norm(h - inst.h0, norm))
            return PerturbedPair(a, h, spec_t), measured

        t = min(1.0, delta)
        pair, measured = build(t)
        if measured > 0.0:
            t *= 0.75 * delta / measured
            pair, measured = build(t)
        steps = 0
        while measured > delta:
            if steps >= max_bisect:
                raise DeltaUnreachableError(
                    f"could not fit perturbation under {delta:.3e} in "
                    f"{max_bisect} halvings")
            t *= 0.5
            steps += 1
            pair, measured = build(t)

        defect = _selfadj_defect(pair.a, pair.h)
        if defect <= selfadj_tol:
            return pair
        if best is None or defect < best[0]:
            best = (defect, pair)

    assert best is not None
    defect, pair = best
    if defect <= 10.0 * selfadj_tol:
        return pair
    raise RetryExhaustedError(
        f"perturbed pair quality {defect:.3e} exceeds {10 * selfadj_tol:.3e}")


def _cluster_spectrum(eigs: np.ndarray, radius: float) -> list[np.ndarray]:
    """Single-linkage clusters of spectrum points at the given radius."""
    m = len(eigs)
    parent = list(range(m))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            if abs(eigs[i] - eigs[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return [eigs[idx] for idx in groups.values()]


def match_eigenvalues(spec0: JordanSpec, a: np.ndarray, *,
                      cluster_radius: float,
                      ratio_limit: float = 2.0
                      ) -> tuple[tuple[complex, ...], JordanSpec]:
    """Match the spec eigenvalues onto the computed spectrum of ``a``.

    The spectrum is clustered by single linkage at ``cluster_radius`` and
    each cluster replaced by its mean (which cancels the rounding scatter of
    defective eigenvalues).  Each spec eigenvalue then takes its nearest
    kind-compatible cluster.  Returns the matched eigenvalue per block and
    the spec with eigenvalues replaced.

    Raises
    ------
    AmbiguousMatchError
        When cluster counts contradict the spec, a second-nearest candidate
        is closer than ``ratio_limit`` times the nearest, or two blocks claim
        one cluster.
    KindMismatchError
        When a real eigenvalue would have to match a nonreal cluster or a
        pair eigenvalue a real one.
    """
    eigs = np.linalg.eigvals(np.asarray(a))
    clusters = _cluster_spectrum(eigs, cluster_radius)
    reps = [complex(np.mean(c)) for c in clusters]

    expected = sum(1 if b.kind == REAL else 2 for b in spec0.blocks)
    if len(reps) != expected:
        raise AmbiguousMatchError(
            f"{len(reps)} spectrum clusters for {expected} expected eigenvalues")

    real_reps = [(i, r) for i, r in enumerate(reps) if abs(r.imag) <= cluster_radius]
    used: set[int] = set()
    matched: list[complex] = []
    for bi, b in enumerate(spec0.blocks):
        if b.kind == REAL:
            candidates = real_reps
        else:
            half = np.sign(b.lam.imag)
            candidates = [(i, r) for i, r in enumerate(reps)
                          if abs(r.imag) > cluster_radius and np.sign(r.imag) == half]
        if not candidates:
            raise KindMismatchError(
                f"no {b.kind} spectrum cluster available for block {bi}")
        dists = sorted((abs(r - b.lam), i, r) for i, r in candidates)
        d1, i1, r1 = dists[0]
        if len(dists) > 1 and dists[1][0] < ratio_limit * d1:
            raise AmbiguousMatchError(
                f"block {bi}: second-nearest cluster at {dists[1][0]:.3e} vs "
                f"nearest {d1:.3e} violates the distance-ratio rule")
        if i1 in used:
            raise AmbiguousMatchError(f"two blocks claim the cluster at {r1}")
        used.add(i1)
        matched.append(complex(r1.real, 0.0) if b.kind == REAL else r1)

    return tuple(matched), _shift_spec(
        spec0, [m - b.lam for m, b in zip(matched, spec0.blocks)])


def _block_gauge(n_mat: np.ndarray, t0_mat: np.ndarray, spec: JordanSpec,
                 continuous_phase: bool) -> np.ndarray:
    """Residual gauge toward the reference basis.

    Real blocks take the sign minimizing the block distance.  Pair blocks
    take a global per-block phase ``e^{i theta}`` on both halves, which is
    the residual freedom preserving the canonical Gram (it drifts the
    conjugate-symmetry scalar by ``e^{2i theta}``, leaving its modulus
    alone).  With ``continuous_phase`` off, the phase is restricted to the
    signs, which also pin the scalar exactly (required for real bases).
    """
    d = np.eye(spec.total_size, dtype=complex)
    for off, b in spec.offsets():
        w = b.width
        nb = n_mat[:, off:off + w]
        tb = t0_mat[:, off:off + w]
        if b.kind == REAL:
            if np.linalg.norm(nb - tb) > np.linalg.norm(nb + tb):
                d[off:off + w, off:off + w] = -np.eye(w)
            continue
        if continuous_phase:
            z = np.trace(tb[:, :b.size].conj().T @ nb[:, :b.size])
            theta = 0.0 if z == 0 else -float(np.angle(z))
            d[off:off + w, off:off + w] = np.exp(1j * theta) * np.eye(w)
        else:
            if np.linalg.norm(nb - tb) > np.linalg.norm(nb + tb):
                d[off:off + w, off:off + w] = -np.eye(w)
    return d


def anchored_canonize(a: np.ndarray, h: np.ndarray, spec: JordanSpec,
                      t0: CanonicalBasis, *,
                      kind: str | None = None,
                      gamma: complex | None = None,
                      weak: bool = False,
                      cluster_radius: float | None = None,
                      delta_hint: float | None = None
                      ) -> tuple[CanonicalBasis, PipelineTrace, tuple[complex, ...] | None]:
    """Canonical basis of ``(a, h)`` chosen near the reference ``t0``.

    The block chains are anchored to the reference at extraction (least
    squares over chain-preserving recombinations) and the residual gauge is
    resolved toward it afterwards, so the output converges to ``t0`` as the
    pair approaches the reference pair.  Weak mode first matches the spec
    eigenvalues onto the spectrum of ``a``.

    Returns the basis, the pipeline trace (gauge already applied to the
    chain factor and basis), and the matched eigenvalues (weak mode only).
    """
    kind = kind or t0.role
    if kind not in (KIND_FOCS, KIND_RC):
        raise ValueError(f"unsupported reference role {kind!r}")

    matches: tuple[complex, ...] | None = None
    work_spec = spec
    if weak:
        if cluster_radius is None:
            if delta_hint is None:
                raise ValueError("weak mode needs cluster_radius or delta_hint")
            # the radius tracks the perturbation scale but may not undercut
            # the eigensolver's scatter for a defective block of size p,
            # which is of order (eps ||a||)^(1/p)
            p_max = max(b.size for b in spec.blocks)
            scatter = (np.finfo(float).eps * max(1.0, mat_norm(a))) ** (1.0 / p_max)
            cluster_radius = max(CLUSTER_RADIUS_FACTOR * delta_hint, 10.0 * scatter)
        matches, work_spec = match_eigenvalues(spec, a, cluster_radius=cluster_radius)

    if kind == KIND_RC:
        anchor_focs = t0.matrix @ mixing_matrix_inv(spec)
        basis, trace = rc_basis(a, h, work_spec, anchor=anchor_focs)
        gauge = _block_gauge(basis.matrix, t0.matrix, work_spec,
                             continuous_phase=False)
        gauge_r = np.real(gauge)
        new_mat = basis.matrix @ gauge_r
    else:
        anchor = t0.matrix
        basis, trace = focs_basis(a, h, work_spec, gamma or t0.gamma or 1.0,
                                  anchor=anchor)
        gauge = _block_gauge(basis.matrix, t0.matrix, work_spec,
                             continuous_phase=True)
        new_mat = basis.matrix @ gauge

    gamma_out, cs_res, _ = conjugate_symmetry_fit(
        new_mat @ mixing_matrix_inv(work_spec) if kind == KIND_RC else new_mat,
        work_spec)
    basis = CanonicalBasis(
        matrix=new_mat, role=basis.role,
        gamma=basis.gamma if kind == KIND_RC else gamma_out,
        cert=Certificate(similarity=basis.cert.similarity,
                         congruence=basis.cert.congruence,
                         cs_residual=cs_res,
                         max_imag=basis.cert.max_imag),
        eps=basis.eps)
    trace = PipelineTrace(
        chain_factor=trace.chain_factor @ gauge,
        phase_factor=trace.phase_factor,
        scale_factor=trace.scale_factor,
        flip_factor=trace.flip_factor,
        gram_raw=trace.gram_raw,
        gram_phased=trace.gram_phased,
        gram_scaled=trace.gram_scaled,
        basis=trace.basis @ gauge,
        gamma=basis.gamma if basis.gamma is not None else trace.gamma)
    return basis, trace, matches


@dataclass(frozen=True)
class TrialRecord:
    delta: float
    index: int
    input: float
    output: float | None
    ratio: float | None
    z_devs: tuple[float, float, float, float] | None
    status: str
    matches: tuple[complex, ...] | None = None
    true_eigs: tuple[complex, ...] | None = None


@dataclass(frozen=True)
class DeltaStats:
    delta: float
    n_ok: int
    ratio_min: float | None
    ratio_median: float | None
    ratio_max: float | None


@dataclass(frozen=True)
class StabilityReport:
    """Per-delta trial records with the empirical Lipschitz summary.

    ``k_hat`` is the largest observed deviation ratio; ``boundedness_flag``
    reports whether the per-delta median ratios stay within
    :data:`SPREAD_LIMIT` of each other across the delta decades.
    """

    seed: int
    kind: str
    mode: str
    deltas: tuple[float, ...]
    trials: tuple[TrialRecord, ...]
    per_delta: tuple[DeltaStats, ...]
    k_hat: float
    median_spread: float | None
    factor_spreads: tuple[float | None, float | None, float | None, float | None]
    boundedness_flag: bool


def _run_trial(inst: Instance, delta: float, delta_index: int, trial_index: int,
               mode: str, kind: str, norm: str) -> TrialRecord:
    seed = np.random.SeedSequence([abs(int(inst.seed)), delta_index, trial_index])
    trial_seed = int(seed.generate_state(1)[0])
    try:
        pair = perturb_instance(inst, delta, mode, trial_seed, norm=norm)
        measured = (mat_norm(pair.a - inst.a0, norm)
                    + mat_norm(pair.h - inst.h0, norm))
        if measured == 0.0:
            return TrialRecord(delta, trial_index, 0.0, 0.0, None, None,
                               status="degenerate")
        basis, trace, matches = anchored_canonize(
            pair.a, pair.h, inst.spec, inst.t0, kind=kind,
            weak=(mode == MODE_WEAK), delta_hint=delta)
        out = mat_norm(basis.matrix - inst.t0.matrix, norm)
        t0_focs = (inst.t0.matrix @ mixing_matrix_inv(inst.spec)
                   if inst.kind == KIND_RC else inst.t0.matrix)
        eye = np.eye(inst.spec.total_size)
        z_devs = (
            mat_norm(trace.chain_factor - t0_focs, norm),
            mat_norm(trace.phase_factor - eye, norm),
            mat_norm(trace.scale_factor - eye, norm),
            mat_norm(trace.flip_factor - eye, norm),
        )
        true_eigs = tuple(b.lam for b in pair.spec.blocks) if mode == MODE_WEAK else None
        return TrialRecord(delta, trial_index, float(measured), float(out),
                           float(out / measured), z_devs, status="ok",
                           matches=matches, true_eigs=true_eigs)
    except CanonError as exc:
        return TrialRecord(delta, trial_index, float("nan"), None, None, None,
                           status=exc.code)


def estimate_lipschitz(inst: Instance, deltas: list[float],
                       trials_per_delta: int, *,
                       mode: str = MODE_STRICT,
                       kind: str | None = None,
                       jobs: int = 1,
                       delta_max: float = DELTA_MAX,
                       spread_limit: float = SPREAD_LIMIT,
                       norm: str = "spectral") -> StabilityReport:
    """Run the perturbation experiment and aggregate the deviation ratios.

    Trials are independent and seeded from ``(instance seed, delta index,
    trial index)``; results are identical for any ``jobs`` count.  Per-trial
    failures are recorded in the trial status, not raised.
    """
    if trials_per_delta < 1:
        raise ValueError("trials_per_delta must be >= 1")
    if not deltas:
        raise ValueError("need at least one delta")
    if any(d > delta_max for d in deltas):
        raise ValueError(f"deltas must stay below delta_max={delta_max}")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be strictly decreasing")
    if mode not in (MODE_STRICT, MODE_WEAK):
        raise ValueError(f"unknown mode {mode!r}")
    kind = kind or inst.kind
    if kind != inst.kind:
        raise ValueError(
            f"requested kind {kind!r} but the instance reference basis has "
            f"role {inst.kind!r}")

    tasks = [(inst, d, di, ti, mode, kind, norm)
             for di, d in enumerate(deltas) for ti in range(trials_per_delta)]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_trial_star, tasks, chunksize=4))
    else:
        records = [_trial_star(t) for t in tasks]
    records.sort(key=lambda r: (deltas.index(r.delta), r.index))

    per_delta = []
    medians = []
    factor_medians: list[list[float]] = [[], [], [], []]
    k_hat = 0.0
    for d in deltas:
        ratios = [r.ratio for r in records
                  if r.delta == d and r.status == "ok" and r.ratio is not None]
        if ratios:
            k_hat = max(k_hat, max(ratios))
            per_delta.append(DeltaStats(d, len(ratios), min(ratios),
                                        median(ratios), max(ratios)))
            medians.append(median(ratios))
            for k in range(4):
                devs = [r.z_devs[k] / r.input for r in records
                        if r.delta == d and r.status == "ok" and r.z_devs]
                factor_medians[k].append(median(devs))
        else:
            per_delta.append(DeltaStats(d, 0, None, None, None))

    def spread(vals: list[float]) -> float | None:
        if not vals:
            return None
        lo, hi = min(vals), max(vals)
        if hi == 0.0:
            # identically zero medians (factors that are exactly identity,
            # e.g. on all-real structures) count as perfectly flat
            return 1.0
        return float("inf") if lo == 0.0 else hi / lo

    med_spread = spread(medians)
    f_spreads = tuple(spread(v) for v in factor_medians)
    bounded = (med_spread is not None and med_spread < spread_limit
               and len(medians) == len(deltas))
    return StabilityReport(
        seed=inst.seed, kind=kind, mode=mode, deltas=tuple(deltas),
        trials=tuple(records), per_delta=tuple(per_delta),
        k_hat=float(k_hat), median_spread=med_spread,
        factor_spreads=f_spreads, boundedness_flag=bool(bounded))


def _trial_star(args) -> TrialRecord:
    return _run_trial(*args)
