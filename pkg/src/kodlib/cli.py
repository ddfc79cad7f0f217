"""Command-line front end.

    kodlib COMMAND [FILE]          payload JSON from FILE or stdin
    kodlib request [FILE]          one {"command", "payload", "options"} object
    kodlib --batch FILE            newline-delimited request objects

Exit codes: 0 success, 2 invalid input or unsupported configuration,
3 consistency failure (e.g. a uniqueness violation).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import ConsistencyError, KodlibError, ValidationError
from .four_manifold import FourManifoldModel, cover, kappa_s, model_from_json, model_to_json
from .kodaira_low import (
    KodDim,
    QDivisor,
    SeifertData,
    bundle_kappa_le3,
    kappa_3manifold,
    kappa_disconnected,
    kappa_surface_divisor,
    riemann_hurwitz,
    seifert_kappa,
    surface_bundle_kappa,
)
from .lattice import format_rational
from .lefschetz import LefschetzData, base_divisor, euler_char, k_squared_hyperelliptic, kappa_total
from .surfaces_relative import (
    RelativeTriple,
    adjoint_invariants,
    enumerate_minus_one,
    f_plus,
    fiber_sum_kappa,
    genus,
    gw_stability_warnings,
    kappa_relative,
    relative_minimal_model,
    surface_from_json,
)

COMMANDS = ("dim2", "dim3", "dim4", "relative", "fibersum", "lefschetz", "seifert", "rhurwitz", "cover", "bundle")
DEFAULT_BOUND = 30
EXIT_OK, EXIT_VALIDATION, EXIT_CONSISTENCY = 0, 2, 3


@dataclass
class Report:
    kappa: KodDim
    bound_qualified: bool = False
    trace: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"kappa": str(self.kappa), "bound_qualified": self.bound_qualified,
                "trace": [[k, v] for k, v in self.trace], "warnings": list(self.warnings)}

    def to_text(self) -> str:
        lines = [f"kappa: {self.kappa}"]
        if self.bound_qualified:
            lines.append("bound_qualified: true")
        lines += [f"  {k} = {v}" for k, v in self.trace]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines)


def default_bound() -> int:
    env = os.environ.get("KODLIB_BOUND")
    if env is None:
        return DEFAULT_BOUND
    try:
        return _bound(int(env))
    except ValueError as exc:
        raise ValidationError(f"KODLIB_BOUND must be a positive integer, got {env!r}") from exc


def _bound(b) -> int:
    if isinstance(b, bool) or not isinstance(b, int) or b < 1:
        raise ValidationError(f"bound must be a positive integer, got {b!r}")
    return b


def _fmt(x) -> str:
    if isinstance(x, (KodDim, str)):
        return str(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    return format_rational(x)


def _need(payload, key):
    if not isinstance(payload, dict) or key not in payload:
        raise ValidationError(f"payload needs '{key}'")
    return payload[key]


def _model(obj) -> FourManifoldModel:
    if isinstance(obj, dict) and "manifold" in obj:
        obj = obj["manifold"]
    return model_from_json(obj)


def _triple(obj) -> RelativeTriple:
    return RelativeTriple(_model(_need(obj, "manifold")), surface_from_json(obj.get("surface")))


def _relative_trace(t: RelativeTriple, bound: int, r: Report, tag: str = "") -> None:
    m = t.manifold
    plus = f_plus(t.surface, m)
    r.trace.append((f"{tag}genera", ",".join(str(genus(c, m)) for c in t.surface.components) or "none"))
    r.trace.append((f"{tag}F+ components", str(len(plus))))
    if plus.components:
        r.trace.append((f"{tag}-1 classes enumerated", str(len(enumerate_minus_one(m, bound)))))
        rm = relative_minimal_model(t, bound)
        r.trace.append((f"{tag}relative minimal model", f"{rm.manifold.kind.value}#{rm.manifold.blowups}"))
        inv = adjoint_invariants(rm)
        r.trace.append((f"{tag}(K+F)^2", _fmt(inv.aq)))
        r.trace.append((f"{tag}sign (K+F).omega", str(inv.aw_sign)))
        if m.is_rational:
            r.bound_qualified = True
    r.warnings += [f"{tag}{w}" for w in gw_stability_warnings(t)]


def run(command: str, payload, bound: int | None = None, trace: bool = False) -> Report:
    """Evaluate one request and return its report; raises KodlibError subclasses on failure."""
    bound = default_bound() if bound is None else _bound(bound)
    if command not in COMMANDS:
        raise ValidationError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    r = Report(KodDim.NEG_INF)
    if command == "dim2":
        g = _need(payload, "genus")
        D = QDivisor.from_json(payload.get("divisor") or [])
        r.kappa = kappa_surface_divisor(g, D)
        r.trace.append(("2g-2+c(D)", _fmt(2 * g - 2 + D.degree())))
    elif command == "dim3":
        if isinstance(payload, dict) and "components" in payload:
            ks = [kappa_3manifold(p) for p in payload["components"]]
            r.trace += [(f"component {i}", str(k)) for i, k in enumerate(ks)]
            r.kappa = kappa_disconnected(ks)
        else:
            r.kappa = kappa_3manifold(_need(payload, "pieces"))
    elif command == "dim4":
        m = _model(payload)
        r.kappa = kappa_s(m)
        r.trace.append(("K^2", _fmt(m.ksq())))
        if not m.explicit:
            r.trace.append(("K.omega > 0", _fmt(m.minimal.k_dot_omega_positive)))
        else:
            r.trace.append(("K.omega", _fmt(m.pair(m.canonical, m.omega))))
    elif command == "relative":
        t = _triple(payload)
        r.kappa = kappa_relative(t, bound)
        _relative_trace(t, bound, r)
    elif command == "fibersum":
        t1, t2 = _triple(_need(payload, "first")), _triple(_need(payload, "second"))
        r.kappa = fiber_sum_kappa(t1, t2, bound)
        _relative_trace(t1, bound, r, "first: ")
        _relative_trace(t2, bound, r, "second: ")
    elif command == "lefschetz":
        L = LefschetzData.from_json({k: v for k, v in payload.items()})
        r.kappa = kappa_total(L)
        r.trace.append(("euler characteristic", str(euler_char(L))))
        if L.singular_fibres:
            r.trace.append(("c(D)", _fmt(base_divisor(L).degree())))
        if L.h == 0 and L.g >= 2 and L.hyperelliptic:
            r.trace.append(("K^2", _fmt(k_squared_hyperelliptic(L.g, L.a, L.s))))
    elif command == "seifert":
        s = SeifertData(_need(payload, "base_genus"), tuple(payload.get("multiplicities", ())))
        r.kappa = seifert_kappa(s)
        r.trace.append(("orbifold euler characteristic", _fmt(s.orbifold_euler_characteristic())))
    elif command == "rhurwitz":
        rc = riemann_hurwitz(_need(payload, "N"), _need(payload, "chi_base"), payload.get("indices", []))
        r.kappa = rc.kappa
        r.trace += [("chi_cover", str(rc.chi_cover)), ("c(D)", _fmt(rc.divisor.degree()))]
    elif command == "cover":
        m = _model(_need(payload, "manifold"))
        notes: list = []
        c = cover(m, _need(payload, "n"), notes)
        r.warnings += notes
        r.kappa = kappa_s(c)
        if r.kappa != kappa_s(m):
            raise ConsistencyError("Kodaira dimension changed under a finite cover")
        r.trace.append(("cover", json.dumps(model_to_json(c), sort_keys=True)))
        r.trace.append(("K^2", _fmt(c.ksq())))
    elif command == "bundle":
        if "g_base" in payload:
            r.kappa = surface_bundle_kappa(payload["g_base"], _need(payload, "g_fiber"))
        else:
            r.kappa = bundle_kappa_le3(KodDim.of(_need(payload, "kappa_base")),
                                       KodDim.of(_need(payload, "kappa_fiber")))
    if not trace:
        r.trace = []
    return r


def _error_kind(exc: Exception) -> tuple[str, int]:
    if isinstance(exc, ConsistencyError):
        return "consistency", EXIT_CONSISTENCY
    return "validation", EXIT_VALIDATION


def _evaluate_line(args) -> dict:
    lineno, text, bound, trace = args
    try:
        req = json.loads(text)
    except json.JSONDecodeError as exc:
        return {"line": lineno, "status": "error", "kind": "validation",
                "message": f"malformed JSON at column {exc.colno}: {exc.msg}"}
    try:
        if not isinstance(req, dict):
            raise ValidationError("a request must be a JSON object")
        opts = req.get("options") or {}
        report = run(_need(req, "command"), req.get("payload", {}),
                     opts.get("bound", bound), bool(opts.get("trace", trace)))
        return {"line": lineno, "status": "ok", "report": report.to_json()}
    except (KodlibError, TypeError) as exc:
        kind, _ = _error_kind(exc)
        return {"line": lineno, "status": "error", "kind": kind, "message": str(exc)}


def batch(lines, bound: int | None = None, trace: bool = False, workers: int = 4) -> list[dict]:
    """Evaluate request lines independently; results keep the input order."""
    bound = default_bound() if bound is None else _bound(bound)
    jobs = [(i + 1, ln, bound, trace) for i, ln in enumerate(lines) if ln.strip()]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate_line, jobs))


def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc


def _parse_json(text: str, where: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {where} at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kodlib", description="Kodaira dimensions of manifolds of dimension <= 4.")
    p.add_argument("command", nargs="?", choices=COMMANDS + ("request",), help="what to compute")
    p.add_argument("file", nargs="?", help="JSON payload file (default: stdin)")
    p.add_argument("--bound", type=int, default=None,
                   help=f"-1 class enumeration bound (default {DEFAULT_BOUND}, or $KODLIB_BOUND)")
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.add_argument("--trace", action="store_true", help="list intermediate exact quantities")
    p.add_argument("--batch", metavar="FILE", help="newline-delimited request objects")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    as_json = args.output == "json"
    try:
        bound = default_bound() if args.bound is None else _bound(args.bound)
        if args.batch is not None:
            results = batch(_read(args.batch).splitlines(), bound, args.trace)
            for res in results:
                if as_json:
                    print(dumps(res))
                elif res["status"] == "ok":
                    print(f"line {res['line']}: kappa {res['report']['kappa']}")
                else:
                    print(f"line {res['line']}: error ({res['kind']}): {res['message']}")
            return EXIT_OK
        if args.command is None:
            raise ValidationError("give a command or --batch FILE")
        data = _parse_json(_read(args.file), args.file or "stdin")
        if args.command == "request":
            if not isinstance(data, dict):
                raise ValidationError("a request must be a JSON object")
            opts = data.get("options") or {}
            report = run(_need(data, "command"), data.get("payload", {}),
                         opts.get("bound", bound), bool(opts.get("trace", args.trace)))
        else:
            report = run(args.command, data, bound, args.trace)
    except (KodlibError, TypeError) as exc:
        kind, code = _error_kind(exc)
        if as_json:
            print(dumps({"error": {"kind": kind, "message": str(exc)}}))
        else:
            print(f"error ({kind}): {exc}", file=sys.stderr)
        return code
    print(dumps(report.to_json()) if as_json else report.to_text())
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
