"""JSON and CSV codecs for every file format the package reads or writes.

All floating-point values round-trip at full precision (Python's ``repr``
is exact for doubles), so writing the same object twice produces identical
bytes.
"""

from __future__ import annotations

import json

import numpy as np

from .harness import Instance, StabilityReport
from .linalg import matrix_from_json, matrix_to_json
from .pipeline import CanonicalBasis, Certificate, PipelineTrace
from .structure import PAIR, REAL, BlockSpec, JordanSpec


def _complex_to_json(z: complex | None):
    if z is None:
        return None
    z = complex(z)
    return [z.real, z.imag]


def _complex_from_json(obj) -> complex | None:
    if obj is None:
        return None
    if isinstance(obj, (int, float)):
        return complex(obj)
    re, im = obj
    return complex(re, im)


def spec_to_json(spec: JordanSpec) -> dict:
    blocks = []
    for b in spec.blocks:
        if b.kind == REAL:
            blocks.append({"kind": "real", "lambda": b.lam.real,
                           "size": b.size, "sign": b.sign})
        else:
            blocks.append({"kind": "pair", "lambda": [b.lam.real, b.lam.imag],
                           "size": b.size})
    return {"blocks": blocks}


def spec_from_json(obj: dict) -> JordanSpec:
    try:
        raw_blocks = obj["blocks"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed spec object: {exc}") from exc
    blocks = []
    for rb in raw_blocks:
        kind = rb.get("kind")
        if kind == "real":
            blocks.append(BlockSpec(REAL, float(rb["lambda"]), int(rb["size"]),
                                    int(rb["sign"])))
        elif kind == "pair":
            lam = rb["lambda"]
            blocks.append(BlockSpec(PAIR, complex(lam[0], lam[1]), int(rb["size"])))
        else:
            raise ValueError(f"unknown block kind {kind!r}")
    return JordanSpec(tuple(blocks))


def basis_to_json(basis: CanonicalBasis) -> dict:
    return {
        "matrix": matrix_to_json(basis.matrix),
        "role": basis.role,
        "gamma": _complex_to_json(basis.gamma),
        "residuals": {
            "similarity": basis.cert.similarity,
            "congruence": basis.cert.congruence,
            "cs": basis.cert.cs_residual,
            "max_imag": basis.cert.max_imag,
        },
        "eps": list(basis.eps),
    }


def basis_from_json(obj: dict) -> CanonicalBasis:
    try:
        res = obj.get("residuals", {})
        return CanonicalBasis(
            matrix=matrix_from_json(obj["matrix"]),
            role=str(obj["role"]),
            gamma=_complex_from_json(obj.get("gamma")),
            cert=Certificate(
                similarity=float(res.get("similarity", 0.0)),
                congruence=float(res.get("congruence", 0.0)),
                cs_residual=res.get("cs"),
                max_imag=res.get("max_imag")),
            eps=tuple(obj.get("eps", [])))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed basis object: {exc}") from exc


def instance_to_json(inst: Instance) -> dict:
    return {
        "spec": spec_to_json(inst.spec),
        "A0": matrix_to_json(inst.a0),
        "H0": matrix_to_json(inst.h0),
        "T0": basis_to_json(inst.t0),
        "seed": inst.seed,
    }


def instance_from_json(obj: dict) -> Instance:
    try:
        return Instance(
            spec=spec_from_json(obj["spec"]),
            a0=np.real(matrix_from_json(obj["A0"])),
            h0=np.real(matrix_from_json(obj["H0"])),
            t0=basis_from_json(obj["T0"]),
            seed=int(obj["seed"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed instance object: {exc}") from exc


def trace_to_json(trace: PipelineTrace) -> dict:
    return {
        "chain_factor": matrix_to_json(trace.chain_factor),
        "phase_factor": matrix_to_json(trace.phase_factor),
        "scale_factor": matrix_to_json(trace.scale_factor),
        "flip_factor": matrix_to_json(trace.flip_factor),
        "gram_raw": matrix_to_json(trace.gram_raw),
        "gram_phased": matrix_to_json(trace.gram_phased),
        "gram_scaled": matrix_to_json(trace.gram_scaled),
        "basis": matrix_to_json(trace.basis),
        "gamma": _complex_to_json(trace.gamma),
    }


def _fmt_complex(z: complex) -> str:
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}j"


def report_csv_lines(report: StabilityReport) -> list[str]:
    """CSV rows for a stability report.

    Base columns are fixed; weak mode appends one matched-eigenvalue column
    per spec block.
    """
    n_blocks = 0
    for r in report.trials:
        if r.matches is not None:
            n_blocks = len(r.matches)
            break
    header = "delta,trial,input,output,ratio,z1_dev,z2_dev,z3_dev,z4_dev,status"
    if report.mode == "weak":
        header += "," + ",".join(f"matched_{k}" for k in range(n_blocks))
    lines = [header]

    def num(x) -> str:
        return "" if x is None or (isinstance(x, float) and np.isnan(x)) else repr(float(x))

    for r in report.trials:
        z = r.z_devs or (None, None, None, None)
        row = [num(r.delta), str(r.index), num(r.input), num(r.output),
               num(r.ratio), num(z[0]), num(z[1]), num(z[2]), num(z[3]), r.status]
        if report.mode == "weak":
            matched = [_fmt_complex(m) for m in (r.matches or ())]
            matched += [""] * (n_blocks - len(matched))
            row += matched
        lines.append(",".join(row))
    return lines


def report_summary_json(report: StabilityReport) -> dict:
    """Full nested JSON form of a stability report."""
    return {
        "seed": report.seed,
        "kind": report.kind,
        "mode": report.mode,
        "deltas": list(report.deltas),
        "k_hat": report.k_hat,
        "median_spread": report.median_spread,
        "factor_spreads": list(report.factor_spreads),
        "boundedness_flag": report.boundedness_flag,
        "per_delta": [
            {"delta": s.delta, "n_ok": s.n_ok, "ratio_min": s.ratio_min,
             "ratio_median": s.ratio_median, "ratio_max": s.ratio_max}
            for s in report.per_delta
        ],
        "trials": [
            {"delta": t.delta, "trial": t.index,
             "input": None if np.isnan(t.input) else t.input,
             "output": t.output, "ratio": t.ratio,
             "z_devs": list(t.z_devs) if t.z_devs else None,
             "status": t.status,
             "matches": [_complex_to_json(m) for m in t.matches] if t.matches else None,
             "true_eigs": [_complex_to_json(m) for m in t.true_eigs] if t.true_eigs else None}
            for t in report.trials
        ],
    }


def dumps(obj: dict) -> str:
    """Deterministic JSON text used for every file the package writes."""
    return json.dumps(obj, indent=1, sort_keys=False)
