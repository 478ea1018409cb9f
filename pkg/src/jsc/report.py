"""Report serialisation.

Machine format: a JSON document tagged ``"schema": "jsc-report/1"`` whose
floats are written with 17 significant digits, so ``parse_report`` rebuilds
every report bit-for-bit.  Human format: aligned plain-text tables.

Document layout::

    {
      "schema": "jsc-report/1",
      "tool_version": "...",
      "kind": "<report class name>",
      "job": {...resolved job parameters...},
      "report": {...report fields...}
    }
"""

from __future__ import annotations

import dataclasses
import json
import math
import types
import typing
from typing import Any

from . import __version__
from .bounds import BoundReport, Interval, TraceSequence
from .checks import ConeCheckReport, VerifyReport
from .errors import ValidationError
from .kronlift import KronReport, TraceKronCheck
from .perturb import PerturbationReport
from .subradius import SubradiusReport

SCHEMA = "jsc-report/1"
REPORT_TYPES = {cls.__name__: cls for cls in (
    BoundReport, KronReport, TraceSequence, SubradiusReport, PerturbationReport,
    ConeCheckReport, VerifyReport, TraceKronCheck)}


def _fmt_float(v: float) -> str:
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    s = f"{v:.17g}"
    if not any(c in s for c in ".eEn"):
        s += ".0"
    return s


def _dump(obj: Any, indent: int) -> str:
    pad = "  " * indent
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        obj = {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)}
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(int(obj))
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {_dump(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) and not dataclasses.is_dataclass(v)
               for v in obj):
            return "[" + ", ".join(_dump(v, indent + 1) for v in obj) + "]"
        items = [pad + "  " + _dump(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if hasattr(obj, "item"):  # numpy scalar
        return _dump(obj.item(), indent)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_document(report, job: dict | None = None) -> dict:
    return {"schema": SCHEMA, "tool_version": __version__,
            "kind": type(report).__name__, "job": job or {}, "report": report}


def emit_report(report, fmt: str = "machine", job: dict | None = None) -> str:
    if fmt == "machine":
        return _dump(to_document(report, job), 0) + "\n"
    if fmt == "human":
        return render_human(report, job)
    raise ValidationError(f"unknown output format {fmt!r}")


def _decode(hint, value):
    if value is None:
        return None
    origin = typing.get_origin(hint)
    if origin in (typing.Union, types.UnionType):
        args = [a for a in typing.get_args(hint) if a is not type(None)]
        return _decode(args[0], value) if len(args) == 1 else value
    if dataclasses.is_dataclass(hint):
        return _from_dict(hint, value)
    if origin is list:
        (arg,) = typing.get_args(hint) or (Any,)
        return [_decode(arg, v) for v in value]
    if origin is dict:
        args = typing.get_args(hint)
        return {k: _decode(args[1], v) for k, v in value.items()} if args else dict(value)
    if hint is float:
        return float(value)
    if hint is int:
        return int(value)
    return value


def _from_dict(cls, data: dict):
    hints = typing.get_type_hints(cls)
    kwargs = {f.name: _decode(hints[f.name], data[f.name])
              for f in dataclasses.fields(cls) if f.name in data}
    return cls(**kwargs)


def parse_document(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValidationError(f"unsupported schema {doc.get('schema')!r}")
    return doc


def parse_report(text: str):
    """Rebuild the report object from a machine-format document."""
    doc = parse_document(text)
    try:
        cls = REPORT_TYPES[doc["kind"]]
    except KeyError:
        raise ValidationError(f"unknown report kind {doc.get('kind')!r}") from None
    return _from_dict(cls, doc["report"])


# ---------------------------------------------------------------- human format

def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def table(headers, rows) -> str:
    cells = [[_cell(v) for v in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h)
              for i, h in enumerate(headers)]
    lines = ["  ".join(h.rjust(w) if i < len(headers) - 1 else h
                       for i, (h, w) in enumerate(zip(headers, widths)))]
    lines.append("  ".join("-" * w for w in widths))
    for r in cells:
        lines.append("  ".join(c.rjust(w) if i < len(r) - 1 else c
                               for i, (c, w) in enumerate(zip(r, widths))))
    return "\n".join(lines)


def _iv(iv: Interval) -> str:
    s = f"[{iv.lower:.12g}, {iv.upper:.12g}]"
    return s + " (collapsed)" if iv.collapsed else s


def render_human(report, job: dict | None = None) -> str:
    out = []
    if job:
        out.append("job: " + " ".join(f"{k}={v}" for k, v in job.items()))
    render = _RENDERERS.get(type(report))
    if render is None:
        raise ValidationError(f"no human renderer for {type(report).__name__}")
    out.append(render(report))
    return "\n".join(out) + "\n"


def _render_bounds(r: BoundReport) -> str:
    rows = []
    for i, t in enumerate(r.t_values):
        rows.append([t, r.products[i], r.lower_jsr_trace[i], r.lower_jsr_rho[i],
                     r.upper_jsr[i], r.upper_sub_rho[i], r.upper_sub_norm[i],
                     f"{r.provenance['lower_jsr_rho'][i]}; {r.provenance['upper_jsr'][i]}"])
    head = ["t", "products", "lo_trace", "lo_rho", "up_norm", "sub_up_rho",
            "sub_up_norm", "provenance"]
    return "\n".join([
        f"joint spectral radius bounds (n={r.n}, m={r.m}, norm={r.norm_kind})",
        table(head, rows),
        f"JSR interval:       {_iv(r.best_interval_jsr)}",
        f"subradius interval: {_iv(r.best_interval_sub)}",
    ])


def _render_kron(r: KronReport) -> str:
    rows = [[k, r.rho_sum[i], r.lower_k[i], r.upper_k[i], f"rho(sum A^(x){k})"]
            for i, k in enumerate(r.k_values)]
    cert = "certified (invariant cone verified)" if r.certified else "NOT certified"
    return "\n".join([f"Kronecker lift bounds (n={r.n}, m={r.m}) - {cert}",
                      table(["k", "rho_sum", "lower_k", "upper_k", "provenance"], rows)])


def _render_trace(r: TraceSequence) -> str:
    rows = [[t, r.s[i], r.r[i]] for i, t in enumerate(r.t_values)]
    prim = {None: "n/a (not nonnegative)", True: f"yes (member {r.primitive_index})",
            False: "no"}[r.primitive_member]
    return "\n".join([
        "max trace and spectral radius roots per length",
        table(["t", "max trace^(1/t)", "max rho^(1/t)"], rows),
        f"primitive member on orthant: {prim}",
        f"window t={r.window[0]}..{r.window[-1]}: trace width {_cell(r.s_width)}, "
        f"rho width {_cell(r.r_width)}, oscillating: {_cell(r.oscillating)}",
    ])


def _render_sub(r: SubradiusReport) -> str:
    return "\n".join([
        f"joint spectral subradius (t_max={r.t_max}, cone={r.cone or 'none'})",
        table(["bound", "value", "provenance"],
              [["lower", r.conic_lower if r.conic_lower is not None else 0.0, r.provenance["lower"]],
               ["upper", r.upper, f"t={r.upper_t}: {r.provenance['upper']}"]]),
        f"interval: {_iv(r.interval)}",
    ])


def _render_perturb(r: PerturbationReport) -> str:
    out = [f"perturbation study (trials={r.trials}, seed={r.seed}, t_max={r.t_max}, "
           f"positive_mode={_cell(r.positive_mode)})",
           f"base JSR interval:       {_iv(r.base_jsr)}",
           f"base subradius interval: {_iv(r.base_sub)}"]
    if r.rows:
        out.append(table(["delta", "hausdorff", "jsr_mid_dev", "jsr_end_dev",
                          "sub_mid_dev", "sub_end_dev"],
                         [[x.delta, x.hausdorff_max, x.jsr_mid_dev, x.jsr_end_dev,
                           x.sub_mid_dev, x.sub_end_dev] for x in r.rows]))
    return "\n".join(out)


def _render_cone(r: ConeCheckReport) -> str:
    out = [f"cone: {r.cone} (pointed={_cell(r.pointed)}, "
           f"full-dimensional={_cell(r.full_dimensional)})",
           table(["member", "invariant", "positive", "primitive_t", "horizon"],
                 [[c.index, c.invariant, c.positive, c.primitive_t, c.horizon]
                  for c in r.members]),
           f"verdict: {r.verdict}"]
    if r.inner_cone is not None:
        out.append(f"inner cone: {r.inner_cone}; embedded={_cell(r.embedded)}; "
                   f"inner invariant={_cell(r.inner_invariant)}; "
                   f"beta estimate={_cell(r.beta_estimate)}")
    if r.column_ratio_c is not None:
        out.append(f"positive set: column ratio c={_cell(r.column_ratio_c)}, "
                   f"beta bound c^2={_cell(r.beta_bound)}, "
                   f"constructed inner cone rays={r.constructed_rays}, "
                   f"invariant={_cell(r.constructed_invariant)}")
    return "\n".join(out)


def _render_verify(r: VerifyReport) -> str:
    return "\n".join([table(["check", "result", "detail"],
                            [[c.name, "PASS" if c.passed else "FAIL", c.detail]
                             for c in r.checks]),
                      f"overall: {'PASS' if r.passed else 'FAIL'}"])


def _render_tk(r: TraceKronCheck) -> str:
    return table(["k", "t", "lhs", "rhs", "holds", "note"],
                 [[r.k, r.t, r.lhs, r.rhs, r.holds, r.reason]])


_RENDERERS = {BoundReport: _render_bounds, KronReport: _render_kron,
              TraceSequence: _render_trace, SubradiusReport: _render_sub,
              PerturbationReport: _render_perturb, ConeCheckReport: _render_cone,
              VerifyReport: _render_verify, TraceKronCheck: _render_tk}
