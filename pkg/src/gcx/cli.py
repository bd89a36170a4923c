"""``gcx`` command line front end.

Every subcommand reads one JSON document (``--input FILE`` or ``-`` for
stdin), runs a family of checks and prints a report.  Exit status is 0 when
every check passes, 1 when any check fails and 2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from typing import Callable

import jsonschema

from . import courant, derived, leibniz
from .poly import Poly, as_fraction

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"

COMMANDS = {
    "check-leibniz": ("leibniz", "point-courant"),
    "classify-tensor": ("leibniz", "point-courant", "gen-tangent"),
    "check-courant": ("gen-tangent",),
    "commutant": ("gen-tangent",),
    "derived-bracket": ("cubic-hamiltonian",),
    "homological": ("cubic-hamiltonian",),
    "classify-generator": ("cubic-hamiltonian",),
    "roundtrip-psi": ("cubic-hamiltonian",),
}


class InputError(Exception):
    """Malformed or invalid input; maps to exit status 2."""


@dataclass(frozen=True)
class SpecDocument:
    kind: str
    payload: dict
    degree_bound: int = courant.DEFAULT_DEGREE
    seed: int = 0
    trials: int = 20
    checks: tuple[str, ...] = ()


@dataclass
class CheckResult:
    name: str
    verdict: str
    witnesses: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)
    timing: float | None = None

    def to_json(self, timing: bool = False) -> dict:
        out = {"name": self.name, "verdict": self.verdict, "witnesses": self.witnesses}
        if self.detail:
            out["detail"] = self.detail
        if timing and self.timing is not None:
            out["timing"] = round(self.timing, 6)
        return out


@dataclass
class Report:
    checks: list[CheckResult] = field(default_factory=list)

    def sorted(self) -> list[CheckResult]:
        return sorted(self.checks, key=lambda c: c.name)

    @property
    def exit_code(self) -> int:
        return 1 if any(c.verdict == FAIL for c in self.checks) else 0


# -- parsing ---------------------------------------------------------------------

_SCHEMA = None


def schema() -> dict:
    global _SCHEMA
    if _SCHEMA is None:
        _SCHEMA = json.loads(resources.files("gcx").joinpath("schema.json").read_text())
    return _SCHEMA


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def parse(data: bytes | str) -> SpecDocument:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"parse error at offset {exc.start}: input is not UTF-8") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InputError(f"parse error at offset {exc.pos}: {exc.msg}") from None
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = max(errors, key=lambda e: len(e.absolute_path))
        raise InputError(f"schema error at {_pointer(err.absolute_path)}: {err.message}")
    _validate_shapes(doc)
    opts = doc.get("options", {})
    payload = {k: v for k, v in doc.items() if k not in ("kind", "options")}
    return SpecDocument(doc["kind"], payload, opts.get("degree_bound", courant.DEFAULT_DEGREE),
                        opts.get("seed", 0), opts.get("trials", 20), tuple(opts.get("checks", ())))


def _square(doc: dict, key: str, size: int) -> None:
    mat = doc.get(key)
    if mat is None:
        return
    if len(mat) != size or any(len(row) != size for row in mat):
        raise InputError(f"schema error at /{key}: expected a {size}x{size} matrix")


def _poly_shape(p, n: int, where: str) -> None:
    if isinstance(p, list) and p and isinstance(p[0], list):
        for t, term in enumerate(p):
            if len(term[2]) != n:
                raise InputError(f"schema error at {where}/{t}/2: exponent vector must have length {n}")


def _validate_shapes(doc: dict) -> None:
    kind = doc["kind"]
    if kind in ("leibniz", "point-courant"):
        dim = doc["dim"]
        if "constants" in doc:
            c = doc["constants"]
            if len(c) != dim or any(len(r) != dim or any(len(v) != dim for v in r) for r in c):
                raise InputError(f"schema error at /constants: expected {dim}x{dim}x{dim} array")
        for i, p in enumerate(doc.get("products", [])):
            if p["left"] > dim or p["right"] > dim or len(p["image"]) != dim:
                raise InputError(f"schema error at /products/{i}: index or image length out of range")
        _square(doc, "metric", dim)
        _square(doc, "tensor", dim)
    elif kind == "gen-tangent":
        n = doc["n"]
        for name, blk in doc.get("tensor", {}).items():
            if len(blk) != n or any(len(r) != n for r in blk):
                raise InputError(f"schema error at /tensor/{name}: expected a {n}x{n} block")
            for i, row in enumerate(blk):
                for j, p in enumerate(row):
                    _poly_shape(p, n, f"/tensor/{name}/{i}/{j}")
    elif kind == "cubic-hamiltonian":
        n, m = doc["n"], doc["m"]
        _square(doc, "g", m)
        _square(doc, "tensor", m)
        rho = doc.get("rho")
        if rho is not None and (len(rho) != m or any(len(r) != n for r in rho)):
            raise InputError(f"schema error at /rho: expected {m}x{n} array")
        for i, e in enumerate(doc.get("phi", [])):
            if any(k > m for k in e["abc"]) or len(set(e["abc"])) != 3:
                raise InputError(f"schema error at /phi/{i}/abc: need three distinct indices in 1..{m}")
        for key in ("x", "y"):
            if key in doc and len(doc[key]) != m:
                raise InputError(f"schema error at /{key}: expected {m} components")


# -- building domain objects -------------------------------------------------------

def _algebra(payload: dict) -> leibniz.LeibnizAlgebra:
    dim = payload["dim"]
    c = leibniz.zeros(dim, dim, dim)
    if "constants" in payload:
        c = leibniz.frac_array(payload["constants"], (dim, dim, dim))
    for p in payload.get("products", []):
        for d, v in enumerate(p["image"]):
            c[p["left"] - 1, p["right"] - 1, d] += as_fraction(v)
    metric = payload.get("metric")
    try:
        return leibniz.LeibnizAlgebra(c, None if metric is None else leibniz.frac_array(metric))
    except ValueError as exc:
        raise InputError(f"schema error at /metric: {exc}") from None


def _gen_tensor(payload: dict) -> courant.GenEndomorphism | None:
    if "tensor" not in payload:
        return None
    return courant.GenEndomorphism.from_json(payload["n"], payload["tensor"])


def _cubic(payload: dict) -> derived.CubicHamiltonianData:
    try:
        return derived.CubicHamiltonianData.from_json(payload)
    except ValueError as exc:
        raise InputError(f"schema error at /g: {exc}") from None


def _rat(v: Fraction) -> str:
    return str(v)


def _render(obj):
    if isinstance(obj, Fraction):
        return _rat(obj)
    if isinstance(obj, dict):
        return {k: _render(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_render(v) for v in obj]
    if hasattr(obj, "to_json") and not isinstance(obj, (courant.PolySection, courant.GenEndomorphism)):
        return obj.to_json(str)
    return str(obj)


def _witnesses(ws, limit: int = 5) -> list:
    return [_render(w) for w in ws[:limit]]


# -- check families ---------------------------------------------------------------------

Check = Callable[[SpecDocument], CheckResult]


def _result(name: str, witnesses: list, **detail) -> CheckResult:
    return CheckResult(name, FAIL if witnesses else PASS, _witnesses(witnesses), detail)


def _skip(name: str, reason: str) -> CheckResult:
    return CheckResult(name, SKIPPED, [], {"reason": reason})


def _leibniz_checks(doc: SpecDocument) -> dict[str, Check]:
    L = _algebra(doc.payload)

    def jacobi(_):
        return _result("jacobi", [{"triple": [a + 1, b + 1, c + 1]} for a, b, c in leibniz.jacobi_violations(L)])

    def point_courant(_):
        if L.metric is None:
            return _skip("point-courant", "no metric")
        ws = leibniz.point_courant_violations(L)
        for w in ws:
            for key in ("X", "Y", "Z"):
                w[key] = f"e{w[key] + 1}"
        return _result("point-courant", ws)

    return {"jacobi": jacobi, "point-courant": point_courant}


def _leibniz_tensor_checks(doc: SpecDocument) -> dict[str, Check]:
    L = _algebra(doc.payload)
    N = doc.payload.get("tensor")
    N = None if N is None else leibniz.frac_array(N)

    def classify(_):
        if N is None:
            return _skip("classify", "no tensor")
        rep = leibniz.classify_tensor(L, N)
        ws = [] if rep.cocycle else [{"coboundary-nonzero": True}]
        return CheckResult("classify", PASS if rep.cocycle else FAIL, ws,
                           {"classification": rep.classification,
                            "contracted_jacobi": rep.contracted_jacobi})

    def pencil(d):
        if N is None:
            return _skip("pencil", "no tensor")
        if leibniz.classify_tensor(L, N).classification == leibniz.NEITHER:
            return _skip("pencil", "tensor is neither Nijenhuis nor weak Nijenhuis")
        if "lambdas" in doc.payload:
            lams = [as_fraction(v) for v in doc.payload["lambdas"]]
        else:
            rng = random.Random(d.seed)
            lams = [leibniz.random_rational(rng) for _ in range(max(d.trials, 1))]
        bad = [{"lambda": str(lam)} for lam in lams if not leibniz.jacobi_check(leibniz.pencil(L, N, lam))]
        return _result("pencil", bad, lambdas=[str(v) for v in lams])

    def squared(_):
        if N is None:
            return _skip("squared-contraction", "no tensor")
        ok = leibniz.is_zero(leibniz.squared_contraction_defect(L, N))
        return _result("squared-contraction", [] if ok else [{"identity": "twice-contracted"}])

    def orthogonal_square(_):
        if N is None or L.metric is None:
            return _skip("orthogonal-square", "needs tensor and metric")
        try:
            ws = leibniz.orthogonal_square_violations(L, N)
        except ValueError as exc:
            return _skip("orthogonal-square", str(exc))
        for w in ws:
            w["X"], w["Y"] = f"e{w['X'] + 1}", f"e{w['Y'] + 1}"
        return _result("orthogonal-square", ws)

    return {"classify": classify, "pencil": pencil, "squared-contraction": squared,
            "orthogonal-square": orthogonal_square}


def _courant_tensor_checks(doc: SpecDocument) -> dict[str, Check]:
    N = _gen_tensor(doc.payload)
    dgen = doc.degree_bound

    def classify(d):
        if N is None:
            return _skip("classify", "no tensor")
        res = courant.classify_courant_tensor(N, d.degree_bound)
        return CheckResult("classify", FAIL if res.kind == courant.NONE else PASS,
                           _witnesses(list(res.witnesses)), res.to_json())

    def orthogonal_square(d):
        if N is None:
            return _skip("orthogonal-square", "no tensor")
        try:
            ws = courant.orthogonal_square_violations(N, d.degree_bound)
        except courant.PreconditionError as exc:
            return _skip("orthogonal-square", str(exc))
        return _result("orthogonal-square", ws)

    def squared(d):
        if N is None:
            return _skip("squared-contraction", "no tensor")
        gens = courant.generating_set(N.n, dgen)
        ws = [{"X": str(a), "Y": str(b)} for a, b in product(gens, repeat=2)
              if not courant.squared_contraction_identity(N, a, b)]
        return _result("squared-contraction", ws)

    return {"classify": classify, "orthogonal-square": orthogonal_square, "squared-contraction": squared}


def _courant_checks(doc: SpecDocument) -> dict[str, Check]:
    n = doc.payload["n"]
    N = _gen_tensor(doc.payload)

    def need_tensor(name, fn):
        def run(d):
            if N is None:
                return _skip(name, "no tensor")
            return fn(d)
        return run

    def delta(d):
        D = N + courant.adjoint(N)
        commute, square = courant.delta_violations(D, d.degree_bound)
        return _result("delta", commute + square, commutes=not commute, square_rule=not square)

    return {
        "axioms": lambda d: _result("axioms", courant.axiom_violations(n, d.degree_bound)),
        "jacobi": lambda d: _result("jacobi", courant.jacobi_violations(n, min(d.degree_bound, 1))),
        "anchor-rule": lambda d: _result("anchor-rule", courant.anchor_rule_violations(n, d.degree_bound)),
        "delta": need_tensor("delta", delta),
        "contracted-anchor-rule": need_tensor("contracted-anchor-rule", lambda d: _result(
            "contracted-anchor-rule", courant.contracted_anchor_rule_violations(N, d.degree_bound))),
        "contracted-invariance": need_tensor("contracted-invariance", lambda d: _result(
            "contracted-invariance", courant.contracted_invariance_violations(N, d.degree_bound))),
    }


def _commutant_checks(doc: SpecDocument) -> dict[str, Check]:
    def irreducible(d):
        k = doc.payload.get("coeff_degree", 2)
        res = courant.commutant_solve(doc.payload["n"], k, d.degree_bound)
        ws = [str(t) for t in res.stage2] if res.stage2_dimension != 1 else []
        return CheckResult("irreducible", FAIL if ws else PASS, ws, {
            "stage1_dimension": res.stage1_dimension,
            "stage1_full_dimension": res.stage1_full_dimension,
            "stage2_dimension": res.stage2_dimension,
            "stage2_basis": [str(t) for t in res.stage2]})
    return {"irreducible": irreducible}


def _is_canonical(data: derived.CubicHamiltonianData) -> bool:
    if not data.ctx.n:
        return False
    ref = derived.CubicHamiltonianData.canonical(data.ctx.n)
    return (ref.ctx.m, ref.ctx.g) == (data.ctx.m, data.ctx.g) and ref.rho == data.rho and not data.phi


def _derived_checks(doc: SpecDocument) -> dict[str, Check]:
    data = _cubic(doc.payload)
    psi = derived.build_psi(data)
    ctx = data.ctx

    def axioms(d):
        return _result("axioms", derived.axiom_violations(psi, d.degree_bound, limit=5))

    def jacobi(d):
        ws = derived.jacobi_violations(psi, min(d.degree_bound, 1), limit=5)
        return _result("jacobi", ws)

    def dictionary(d):
        if not _is_canonical(data):
            return _skip("dictionary", "not the canonical chart of TR^n + T*R^n")
        gens = courant.generating_set(ctx.n, d.degree_bound)
        ws = []
        for a, b in product(gens, repeat=2):
            lhs = derived.derived_bracket(psi, derived.lift(a, ctx), derived.lift(b, ctx))
            if lhs != derived.lift(courant.dorfman(a, b), ctx):
                ws.append({"X": str(a), "Y": str(b)})
        return _result("dictionary", ws)

    def evaluate(_):
        if "x" not in doc.payload or "y" not in doc.payload:
            return _skip("evaluate", "no x/y given")
        X = derived.lift_vector(ctx, [Poly.from_json(ctx.n, p) for p in doc.payload["x"]])
        Y = derived.lift_vector(ctx, [Poly.from_json(ctx.n, p) for p in doc.payload["y"]])
        value = derived.unlift_vector(derived.derived_bracket(psi, X, Y))
        return CheckResult("evaluate", PASS, [], {"bracket": [p.to_json() for p in value]})

    return {"axioms": axioms, "jacobi": jacobi, "dictionary": dictionary, "evaluate": evaluate}


def _homological_checks(doc: SpecDocument) -> dict[str, Check]:
    data = _cubic(doc.payload)
    psi = derived.build_psi(data)

    def homological(_):
        sq = derived.poisson_bracket(psi, psi)
        return _result("homological", [] if sq.is_zero() else [{"psi_psi": str(sq)}], psi=str(psi))

    def agreement(d):
        flag = derived.homological_check(psi)
        jac = not derived.jacobi_violations(psi, min(d.degree_bound, 1), limit=1)
        ws = [] if flag == jac else [{"homological": flag, "jacobi": jac}]
        return _result("jacobi-agreement", ws, homological=flag, jacobi=jac)

    return {"homological": homological, "jacobi-agreement": agreement}


def _generator_checks(doc: SpecDocument) -> dict[str, Check]:
    data = _cubic(doc.payload)
    psi = derived.build_psi(data)
    ctx = data.ctx
    M = doc.payload.get("tensor")

    def quadratic():
        return derived.n_to_quadratic(M, ctx)

    def classify(_):
        if M is None:
            return _skip("classify", "no tensor")
        try:
            Q = quadratic()
        except derived.NonOrthogonalError as exc:
            return CheckResult("classify", FAIL, [{"non-orthogonal": [exc.pair[0] + 1, exc.pair[1] + 1]}])
        kind = derived.double_bracket_classify(psi, Q)
        ws = [] if kind != derived.OTHER else [{"double_bracket": str(derived.double_bracket(psi, Q))}]
        return _result("classify", ws, classification=kind, quadratic=str(Q))

    def cocycle(_):
        if M is None:
            return _skip("cocycle", "no tensor")
        if not derived.homological_check(psi):
            return _skip("cocycle", "Hamiltonian is not homological")
        try:
            Q = quadratic()
        except derived.NonOrthogonalError as exc:
            return _skip("cocycle", str(exc))
        flag = derived.weak_nijenhuis_cocycle_check(psi, Q)
        direct = derived.contracted_generator_is_homological(psi, Q)
        ws = [] if flag else [{"cocycle": False}]
        if flag != direct:
            ws.append({"cocycle": flag, "contracted_homological": direct})
        return _result("cocycle", ws, weak_courant_nijenhuis=flag)

    def torsion_identity(d):
        if M is None:
            return _skip("torsion-identity", "no tensor")
        try:
            Q = quadratic()
        except derived.NonOrthogonalError as exc:
            return _skip("torsion-identity", str(exc))
        gens = derived.generating_set(ctx, min(d.degree_bound, 1))
        ws = [{"X": str(X), "Y": str(Y)} for X, Y in product(gens, repeat=2)
              if not derived.torsion_generator_identity(psi, Q, X, Y)]
        return _result("torsion-identity", ws)

    return {"classify": classify, "cocycle": cocycle, "torsion-identity": torsion_identity}


def _roundtrip_checks(doc: SpecDocument) -> dict[str, Check]:
    data = _cubic(doc.payload)
    M = doc.payload.get("tensor")

    def psi_roundtrip(_):
        back = derived.extract_data(derived.build_psi(data))
        ws = []
        if back.rho != data.rho:
            ws.append({"field": "rho"})
        if back.phi != data.phi:
            ws.append({"field": "phi"})
        return _result("psi-roundtrip", ws)

    def quad_roundtrip(_):
        if M is None:
            return _skip("quadratic-roundtrip", "no tensor")
        try:
            Q = derived.n_to_quadratic(M, data.ctx)
        except derived.NonOrthogonalError as exc:
            return CheckResult("quadratic-roundtrip", FAIL, [{"non-orthogonal": [exc.pair[0] + 1, exc.pair[1] + 1]}])
        back = derived.quadratic_to_n(Q)
        same = back == [[as_fraction(v) for v in row] for row in M]
        return _result("quadratic-roundtrip", [] if same else [{"recovered": _render(back)}], quadratic=str(Q))

    return {"psi-roundtrip": psi_roundtrip, "quadratic-roundtrip": quad_roundtrip}


def _families(command: str, doc: SpecDocument) -> tuple[dict[str, Check], list[str]]:
    """Available checks and the default selection for a subcommand."""
    if command == "check-leibniz":
        checks = _leibniz_checks(doc)
        default = ["jacobi"] + (["point-courant"] if "metric" in doc.payload else [])
    elif command == "classify-tensor":
        if doc.kind == "gen-tangent":
            checks = _courant_tensor_checks(doc)
            default = ["classify", "orthogonal-square"]
        else:
            checks = _leibniz_tensor_checks(doc)
            default = ["classify", "pencil", "squared-contraction"] + (["orthogonal-square"] if "metric" in doc.payload else [])
    elif command == "check-courant":
        checks = _courant_checks(doc)
        default = ["axioms", "jacobi", "anchor-rule"] + (
            ["delta", "contracted-anchor-rule", "contracted-invariance"] if "tensor" in doc.payload else [])
    elif command == "commutant":
        checks = _commutant_checks(doc)
        default = ["irreducible"]
    elif command == "derived-bracket":
        checks = _derived_checks(doc)
        default = ["axioms", "jacobi", "dictionary", "evaluate"]
    elif command == "homological":
        checks = _homological_checks(doc)
        default = ["homological", "jacobi-agreement"]
    elif command == "classify-generator":
        checks = _generator_checks(doc)
        default = ["classify", "cocycle", "torsion-identity"]
    elif command == "roundtrip-psi":
        checks = _roundtrip_checks(doc)
        default = ["psi-roundtrip", "quadratic-roundtrip"]
    else:
        raise InputError(f"unknown subcommand {command!r}")
    return checks, default


def default_command(kind: str) -> str:
    return {"leibniz": "check-leibniz", "point-courant": "check-leibniz",
            "gen-tangent": "check-courant", "cubic-hamiltonian": "derived-bracket"}[kind]


def run(doc: SpecDocument, command: str | None = None) -> Report:
    command = command or default_command(doc.kind)
    if doc.kind not in COMMANDS.get(command, ()):
        raise InputError(f"subcommand {command} does not accept documents of kind {doc.kind!r}")
    checks, default = _families(command, doc)
    names = list(doc.checks) or default
    unknown = [c for c in names if c not in checks]
    if unknown:
        raise InputError(f"unknown check(s) {unknown}; available: {sorted(checks)}")
    report = Report()
    for name in sorted(set(names)):
        start = time.perf_counter()
        res = checks[name](doc)
        res.timing = time.perf_counter() - start
        report.checks.append(res)
    return report


def report_render(report: Report, fmt: str = "json", timing: bool = False) -> bytes:
    entries = report.sorted()
    if fmt == "json":
        body = {"checks": [e.to_json(timing) for e in entries]}
        return (json.dumps(body, sort_keys=True, separators=(",", ":")) + "\n").encode()
    if fmt == "text":
        if not entries:
            return b"0 checks\n"
        lines = []
        for e in entries:
            line = f"{e.verdict.upper()} {e.name}"
            if e.detail:
                line += " " + json.dumps(e.detail, sort_keys=True, separators=(",", ":"))
            if e.witnesses:
                line += " witnesses=" + json.dumps(e.witnesses, sort_keys=True, separators=(",", ":"))
            if timing and e.timing is not None:
                line += f" ({e.timing:.3f}s)"
            lines.append(line)
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gcx", description="Exact checks for Courant algebroids and Nijenhuis tensors.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="JSON document, '-' for stdin")
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--seed", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--degree-bound", type=int, dest="degree_bound")
        p.add_argument("--check", action="append", dest="checks", help="run only this check (repeatable)")
        p.add_argument("--timing", action="store_true", help="include wall-clock timings (not deterministic)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.input == "-":
            raw = sys.stdin.buffer.read()
        else:
            with open(args.input, "rb") as fh:
                raw = fh.read()
    except OSError as exc:
        print(f"gcx: cannot read input: {exc}", file=sys.stderr)
        return 2
    try:
        doc = parse(raw)
        overrides = {k: getattr(args, k) for k in ("seed", "trials", "degree_bound") if getattr(args, k) is not None}
        if args.checks:
            overrides["checks"] = tuple(args.checks)
        if overrides:
            doc = SpecDocument(**{**doc.__dict__, **overrides})
        report = run(doc, args.command)
    except InputError as exc:
        print(f"gcx: {exc}", file=sys.stderr)
        return 2
    sys.stdout.buffer.write(report_render(report, args.format, args.timing))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
