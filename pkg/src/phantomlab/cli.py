"""Command-line entry point: ``phantomlab <subcommand> [flags]``.

Input is a JSON document read from ``--file`` or standard input; output is
JSON with sorted keys (or flat text).  Exit codes: 0 success, 1 definite
negative (impure, nonzero obstruction, failed check), 2 input error,
3 unknown or precision exhausted.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from typing import Any, Callable

from . import __version__
from .fgab import FgGroup, GroupMap, IllDefinedMap, NotExact, ShortExact, presentation
from .homalg import ext_class, ext_group, hom_group, realize_extension, six_term
from .padic import (
    DEFAULT_PRECISION,
    PrecisionExhausted,
    SumFamily,
    UnsupportedGroup,
    ValSeq,
    completion_triple,
    w_certificate,
    wbi_check,
)
from .phantom import (
    ChainComplex,
    IndComplex,
    NotAComplex,
    PhantomRep,
    ScalarMap,
    SumPhantom,
    ZeroMap,
    composite_stagewise_check,
    moore_tower,
    nonsplit_certificate,
    phantom_em,
    phantom_group,
    random_phantom_pair,
)
from .purity import METHODS, is_pure, pure_check, random_ses
from .towers import (
    DEFAULT_TRUNCATION,
    Constant,
    CyclicPowers,
    DirectTower,
    HomIntoFamily,
    HomOf,
    InverseConstant,
    InverseTower,
    InverseTruncated,
    Multiplication,
    Truncated,
    UnsupportedTower,
    lim_and_lim1,
    pext_ind,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3


class InputError(ValueError):
    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path


# ---------------------------------------------------------------------------
# schema parsing; every parser takes the JSON path for error messages


def _get(d: Any, key: str, path: str) -> Any:
    if not isinstance(d, dict):
        raise InputError(path, "expected an object")
    if key not in d:
        raise InputError(path, f"missing key {key!r}")
    return d[key]


def _int(x: Any, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(path, f"expected an integer, got {x!r}")
    return x


def _int_list(x: Any, path: str) -> list[int]:
    if not isinstance(x, list):
        raise InputError(path, "expected a list of integers")
    return [_int(v, f"{path}[{i}]") for i, v in enumerate(x)]


def _matrix(x: Any, path: str) -> list[list[int]]:
    if not isinstance(x, list):
        raise InputError(path, "expected a matrix (list of rows)")
    return [_int_list(r, f"{path}[{i}]") for i, r in enumerate(x)]


def parse_group(d: Any, path: str = "$") -> FgGroup:
    """``n`` (cyclic, 0 = Z), ``{"orders": [...]}``, ``{"free_rank", "invariant_factors"}``
    or ``{"relations": [[...]], "generators": n}``."""
    try:
        if isinstance(d, int) and not isinstance(d, bool):
            if d < 0:
                raise InputError(path, "cyclic order must be non-negative")
            return FgGroup.cyclic(d)
        if not isinstance(d, dict):
            raise InputError(path, "expected a group document")
        if "orders" in d:
            orders = _int_list(d["orders"], f"{path}.orders")
            if any(o < 0 for o in orders):
                raise InputError(f"{path}.orders", "orders must be non-negative")
            return FgGroup.from_orders(orders)
        if "relations" in d:
            rel = _matrix(d["relations"], f"{path}.relations")
            n = d.get("generators")
            return presentation(rel, None if n is None else _int(n, f"{path}.generators")).group
        r = _int(d.get("free_rank", 0), f"{path}.free_rank")
        inv = tuple(_int_list(d.get("invariant_factors", []), f"{path}.invariant_factors"))
        return FgGroup(r, inv)
    except InputError:
        raise
    except ValueError as e:
        raise InputError(path, str(e)) from None


def parse_coefficients(d: Any, path: str = "$") -> FgGroup | SumFamily:
    if isinstance(d, dict) and "family" in d:
        f = _get(d, "family", path)
        fp = f"{path}.family"
        try:
            return SumFamily(_int(_get(f, "p", fp), f"{fp}.p"), _int(f.get("alpha", 1), f"{fp}.alpha"),
                             _int(f.get("beta", 0), f"{fp}.beta"))
        except (ValueError, UnsupportedGroup) as e:
            raise InputError(fp, str(e)) from None
    return parse_group(d, path)


def parse_map(m: Any, source: FgGroup, target: FgGroup, path: str) -> GroupMap:
    try:
        return GroupMap(source, target, _matrix(m, path))
    except InputError:
        raise
    except (ValueError, IllDefinedMap, IndexError) as e:
        raise InputError(path, str(e)) from None


def parse_ses(d: Any, path: str = "$") -> ShortExact:
    """``{"sub", "middle", "quot", "incl", "proj"}`` or ``{"class": class document}``."""
    if isinstance(d, dict) and "class" in d:
        return realize_extension(parse_class(d["class"], f"{path}.class"))
    if isinstance(d, dict) and isinstance(d.get("incl"), dict):
        # the shape emitted by ``realize``: maps carry their own source and target
        maps = []
        for key in ("incl", "proj"):
            m, mp = _get(d, key, path), f"{path}.{key}"
            if not isinstance(m, dict):
                raise InputError(mp, "expected a map document")
            src = parse_group(_get(m, "source", mp), f"{mp}.source")
            tgt = parse_group(_get(m, "target", mp), f"{mp}.target")
            maps.append(parse_map(_get(m, "matrix", mp), src, tgt, f"{mp}.matrix"))
        try:
            return ShortExact(*maps)
        except (NotExact, ValueError) as e:
            raise InputError(path, str(e)) from None
    sub =parse_group(_get(d, "sub", path), f"{path}.sub")
    mid = parse_group(_get(d, "middle", path), f"{path}.middle")
    quot = parse_group(_get(d, "quot", path), f"{path}.quot")
    incl = parse_map(_get(d, "incl", path), sub, mid, f"{path}.incl")
    proj = parse_map(_get(d, "proj", path), mid, quot, f"{path}.proj")
    try:
        return ShortExact(incl, proj)
    except NotExact as e:
        raise InputError(path, str(e)) from None


def parse_class(d: Any, path: str = "$"):
    A = parse_group(_get(d, "A", path), f"{path}.A")
    B = parse_group(_get(d, "B", path), f"{path}.B")
    E = ext_group(A, B)
    value = _int_list(d.get("value", [0] * E.group.ngens), f"{path}.value")
    if len(value) != E.group.ngens:
        raise InputError(f"{path}.value", f"Ext({A}, {B}) = {E.group} needs {E.group.ngens} coordinates")
    return E.element(value)


def parse_tower(d: Any, path: str = "$") -> DirectTower:
    tail = _get(d, "tail", path)
    kind = _get(tail, "kind", f"{path}.tail")
    tp = f"{path}.tail"
    prefix_doc = d.get("prefix", [])
    if not isinstance(prefix_doc, list):
        raise InputError(f"{path}.prefix", "expected a list")
    stages = [parse_group(_get(s, "group", f"{path}.prefix[{i}]"), f"{path}.prefix[{i}].group")
              for i, s in enumerate(prefix_doc)]
    try:
        if kind == "prufer":
            t: Any = CyclicPowers(_int(_get(tail, "p", tp), f"{tp}.p"), 1, 0)
        elif kind == "parametrized_cyclic":
            t = CyclicPowers(_int(_get(tail, "p", tp), f"{tp}.p"), _int(tail.get("alpha", 1), f"{tp}.alpha"),
                             _int(tail.get("beta", 0), f"{tp}.beta"))
        elif kind == "constant":
            t = Constant()
        elif kind == "truncated":
            t = Truncated()
        else:
            raise InputError(f"{tp}.kind", f"unknown tail kind {kind!r}")
    except UnsupportedTower as e:
        raise InputError(tp, str(e)) from None
    maps = []
    for i, s in enumerate(prefix_doc):
        if "map" in s:
            nxt = stages[i + 1] if i + 1 < len(stages) else (t.stage(i + 1) if isinstance(t, CyclicPowers) else None)
            if nxt is None:
                raise InputError(f"{path}.prefix[{i}].map", "last stage of a constant tower takes no map")
            maps.append(parse_map(s["map"], stages[i], nxt, f"{path}.prefix[{i}].map"))
    try:
        return DirectTower(tuple(stages), tuple(maps), t)
    except UnsupportedTower as e:
        raise InputError(path, str(e)) from None


def parse_inverse_tower(d: Any, path: str = "$") -> InverseTower:
    kind = _get(d, "kind", path)
    try:
        if kind == "hom":
            T = parse_tower(_get(d, "source", path), f"{path}.source")
            B = parse_coefficients(_get(d, "B", path), f"{path}.B")
            return InverseTower(tail=HomIntoFamily(T, B) if isinstance(B, SumFamily) else HomOf(T, B))
        if kind == "multiplication":
            return InverseTower(tail=Multiplication(_int(_get(d, "p", path), f"{path}.p")))
        if kind in ("constant", "truncated"):
            prefix = _get(d, "prefix", path)
            stages = [parse_group(_get(s, "group", f"{path}.prefix[{i}]"), f"{path}.prefix[{i}].group")
                      for i, s in enumerate(prefix)]
            maps = [parse_map(_get(s, "map", f"{path}.prefix[{i + 1}]"), stages[i + 1], stages[i],
                              f"{path}.prefix[{i + 1}].map") for i, s in enumerate(prefix[1:])]
            tail = InverseConstant() if kind == "constant" else InverseTruncated()
            return InverseTower(tuple(stages), tuple(maps), tail)
    except UnsupportedTower as e:
        raise InputError(path, str(e)) from None
    raise InputError(f"{path}.kind", f"unknown inverse tower kind {kind!r}")


def parse_ind(d: Any, path: str = "$") -> IndComplex:
    kind = _get(d, "kind", path)
    try:
        if kind == "moore":
            return moore_tower(_int(_get(d, "p", path), f"{path}.p"))
        if kind == "resolution":
            return IndComplex.resolution(parse_tower(_get(d, "tower", path), f"{path}.tower"),
                                         _int(d.get("degree", -1), f"{path}.degree"))
        if kind == "constant":
            return IndComplex.constant(ChainComplex.from_dict(_get(d, "complex", path)))
    except (NotAComplex, UnsupportedTower, KeyError, TypeError) as e:
        raise InputError(path, str(e)) from None
    raise InputError(f"{path}.kind", f"unknown ind-complex kind {kind!r}")


def parse_valseq(d: Any, path: str) -> ValSeq:
    try:
        return ValSeq.from_dict(d)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(path, str(e)) from None


# ---------------------------------------------------------------------------
# subcommands; each returns (document, exit code)


def _ses_doc(s: ShortExact) -> dict:
    return s.to_dict()


def cmd_group(doc, a):
    g = parse_group(doc)
    return {"group": g.to_dict(), "text": str(g)}, EXIT_OK


def cmd_hom(doc, a):
    A, B = parse_group(_get(doc, "A", "$"), "$.A"), parse_group(_get(doc, "B", "$"), "$.B")
    H = hom_group(A, B)
    return {"A": str(A), "B": str(B), "group": H.group.to_dict(), "text": str(H.group),
            "basis": [f.matrix for f in H.basis]}, EXIT_OK


def cmd_ext(doc, a):
    A, B = parse_group(_get(doc, "A", "$"), "$.A"), parse_group(_get(doc, "B", "$"), "$.B")
    E = ext_group(A, B)
    return {"A": str(A), "B": str(B), "group": E.group.to_dict(), "text": str(E.group)}, EXIT_OK


def cmd_six_term(doc, a):
    s = parse_ses(_get(doc, "ses", "$"), "$.ses")
    n = _int(_get(doc, "n", "$"), "$.n")
    if n < 1:
        raise InputError("$.n", "n must be positive")
    st = six_term(s, n)
    out = {"n": n, "groups": {k: str(g) for k, g in zip(("nB", "nC", "nA", "B/n", "C/n", "A/n"), st.groups)},
           "maps": [m.matrix for m in st.maps], "exact": st.exact, "is_exact": st.is_exact}
    return out, EXIT_OK if st.is_exact else EXIT_NEGATIVE


def cmd_realize(doc, a):
    u = parse_class(doc)
    return {"ses": _ses_doc(realize_extension(u)), "middle": str(realize_extension(u).middle)}, EXIT_OK


def cmd_class_of(doc, a):
    s = parse_ses(doc)
    u = ext_class(s)
    return {"A": str(s.quot), "B": str(s.sub), "ext": str(u.ext.group), "value": list(u.value.coords),
            "is_zero": u.is_zero()}, EXIT_OK


def cmd_pure(doc, a):
    s = parse_ses(doc)
    if a.method == "all":
        v = is_pure(s, seed=a.seed)
    else:
        v = pure_check(s, a.method, seed=a.seed)
    return {"verdict": v.to_dict()}, EXIT_OK if v.pure else EXIT_NEGATIVE


def _report_exit(status: str) -> int:
    return {"NonzeroWitness": EXIT_NEGATIVE, "Unknown": EXIT_UNKNOWN}.get(status, EXIT_OK)


def cmd_pext(doc, a):
    T = parse_tower(_get(doc, "tower", "$"), "$.tower")
    B = parse_coefficients(_get(doc, "B", "$"), "$.B")
    try:
        r = pext_ind(T, B, truncation=a.truncate, precision=a.precision)
    except UnsupportedTower as e:
        raise InputError("$", str(e)) from None
    return {"report": r.to_dict()}, _report_exit(r.status)


def cmd_lim1(doc, a):
    tower = parse_inverse_tower(_get(doc, "tower", "$"), "$.tower")
    r = lim_and_lim1(tower, truncation=a.truncate, precision=a.precision)
    return {"report": r.to_dict()}, _report_exit(r.status)


def _coeff_and_prime(doc) -> tuple[Any, int | None]:
    B = parse_coefficients(_get(doc, "B", "$"), "$.B")
    p = doc.get("p")
    return B, None if p is None else _int(p, "$.p")


def cmd_complete(doc, a):
    B, p = _coeff_and_prime(doc)
    try:
        return {"completion": completion_triple(B, p, precision=a.precision).to_dict()}, EXIT_OK
    except (UnsupportedGroup, ValueError) as e:
        raise InputError("$", str(e)) from None


def cmd_wbi(doc, a):
    B, p = _coeff_and_prime(doc)
    try:
        r = wbi_check(B, p, precision=a.precision)
    except (UnsupportedGroup, ValueError) as e:
        raise InputError("$", str(e)) from None
    return {"wbi": r.to_dict()}, EXIT_OK


def cmd_certify_w(doc, a):
    B, p = _coeff_and_prime(doc)
    k = _int(doc.get("k", 0), "$.k")
    try:
        c = w_certificate(B, k, p, precision=a.precision)
    except (UnsupportedGroup, ValueError) as e:
        raise InputError("$", str(e)) from None
    return {"certificate": c.to_dict()}, EXIT_OK


def cmd_phantom(doc, a):
    X = parse_ind(_get(doc, "X", "$"), "$.X")
    B = parse_coefficients(_get(doc, "B", "$"), "$.B")
    try:
        r = phantom_group(X, B, truncation=a.truncate, precision=a.precision)
    except UnsupportedTower as e:
        raise InputError("$", str(e)) from None
    return {"phantom": r.to_dict()}, _report_exit(r.pext_result.status)


def cmd_phantom_em(doc, a):
    A = parse_tower(_get(doc, "A", "$"), "$.A")
    B = parse_coefficients(_get(doc, "B", "$"), "$.B")
    k = a.degree if a.degree is not None else _int(doc.get("k", -1), "$.k")
    r = phantom_em(k, A, B, truncation=a.truncate, precision=a.precision)
    return {"phantom_em": r.to_dict()}, _report_exit(r.report.pext_result.status)


def _parse_second(d: Any, path: str):
    kind = _get(d, "kind", path)
    if kind == "scalar":
        return ScalarMap(_int(_get(d, "m", path), f"{path}.m"))
    if kind == "sum_phantom":
        return SumPhantom(parse_group(_get(d, "target", path), f"{path}.target"))
    if kind == "zero":
        return ZeroMap()
    raise InputError(f"{path}.kind", f"unknown map kind {kind!r}")


def cmd_composite_check(doc, a):
    if doc.get("generate"):
        f, g = random_phantom_pair(random.Random(a.seed), precision=a.precision)
    else:
        fd = doc.get("f")
        if fd is None:
            f = None
        else:
            fam = parse_coefficients(_get(fd, "B", "$.f"), "$.f.B")
            if not isinstance(fam, SumFamily):
                raise InputError("$.f.B", "f must land in a family")
            T = parse_tower(fd.get("source", {"tail": {"kind": "prufer", "p": fam.p}}), "$.f.source")
            try:
                f = PhantomRep(T, fam, parse_valseq(_get(fd, "rep", "$.f"), "$.f.rep"))
            except (UnsupportedTower, ValueError) as e:
                raise InputError("$.f", str(e)) from None
        g = _parse_second(_get(doc, "g", "$"), "$.g")
    c = composite_stagewise_check(f, g, truncation=a.truncate)
    out = {"certificate": c.to_dict(), "f": None if f is None else f.to_dict()}
    return out, EXIT_OK if c.ok else EXIT_NEGATIVE


def cmd_nonsplit(doc, a):
    j = a.j if a.j is not None else _int(doc.get("j", 1), "$.j")
    if not 1 <= j <= a.truncate:
        raise InputError("$.j", f"j must lie in [1, {a.truncate}]")
    c = nonsplit_certificate(j, a.truncate)
    return {"certificate": c.to_dict()}, EXIT_OK if c.valid else EXIT_NEGATIVE


def selftest_report(seed: int, cases: int) -> dict:
    """Randomized suites; the report is a pure function of ``(seed, cases)``."""
    rng = random.Random(seed)
    digest = hashlib.sha256()
    suites: dict[str, dict[str, int]] = {}

    def tally(name: str, ok: bool) -> None:
        s = suites.setdefault(name, {"passed": 0, "failed": 0})
        s["passed" if ok else "failed"] += 1

    for _ in range(cases):
        s = random_ses(rng)
        digest.update(json.dumps(s.to_dict(), sort_keys=True).encode())
        u = ext_class(s)
        n = rng.randint(2, 12)
        tally("six_term", six_term(s, n).is_exact)
        tally("purity", is_pure(s, seed=seed).pure == u.is_zero())
        tally("round_trip", ext_class(realize_extension(u)) == u)
    for _ in range(max(1, cases // 5)):
        f, g = random_phantom_pair(rng)
        digest.update(json.dumps(f.to_dict(), sort_keys=True).encode())
        tally("composite", composite_stagewise_check(f, g, truncation=8).ok)
    for p in (2, 3):
        tally("pext", pext_ind(moore_tower(p).tail.tower, SumFamily(p)).status == "NonzeroWitness")
    return {"seed": seed, "cases": cases, "suites": suites, "digest": digest.hexdigest(),
            "ok": all(v["failed"] == 0 for v in suites.values())}


def cmd_selftest(doc, a):
    r = selftest_report(a.seed, a.cases)
    return {"selftest": r}, EXIT_OK if r["ok"] else EXIT_NEGATIVE


COMMANDS: dict[str, tuple[Callable, bool]] = {
    # name -> (handler, needs an input document)
    "group": (cmd_group, True),
    "hom": (cmd_hom, True),
    "ext": (cmd_ext, True),
    "six-term": (cmd_six_term, True),
    "realize": (cmd_realize, True),
    "class-of": (cmd_class_of, True),
    "pure": (cmd_pure, True),
    "pext": (cmd_pext, True),
    "lim1": (cmd_lim1, True),
    "complete": (cmd_complete, True),
    "wbi": (cmd_wbi, True),
    "certify-w": (cmd_certify_w, True),
    "phantom": (cmd_phantom, True),
    "phantom-em": (cmd_phantom_em, True),
    "composite-check": (cmd_composite_check, True),
    "nonsplit": (cmd_nonsplit, False),
    "selftest": (cmd_selftest, False),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="p-adic digits (default 40)")
    common.add_argument("--truncate", type=int, default=None, help="tower truncation level (default 20)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--file", help="read the input document from this file instead of stdin")
    common.add_argument("--format", choices=("json", "text"), default="json")
    parser = argparse.ArgumentParser(prog="phantomlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"phantomlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "pure":
            sp.add_argument("--method", choices=("all",) + METHODS, default="all")
        if name == "phantom-em":
            sp.add_argument("--degree", type=int, default=None)
        if name == "nonsplit":
            sp.add_argument("--j", type=int, default=None)
        if name == "selftest":
            sp.add_argument("--cases", type=int, default=20)
    return parser


def _flatten(d: Any, prefix: str = "") -> list[str]:
    if isinstance(d, dict):
        out = []
        for k in sorted(d):
            out.extend(_flatten(d[k], f"{prefix}.{k}" if prefix else str(k)))
        return out
    return [f"{prefix}: {json.dumps(d, ensure_ascii=False)}"]


def render(doc: dict, fmt: str) -> str:
    if fmt == "text":
        return "\n".join(_flatten(doc)) + "\n"
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _read_input(args, needs: bool, stdin) -> Any:
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    elif needs:
        text = stdin.read()
    else:
        text = ""
    if not text.strip():
        if needs:
            raise InputError("$", "empty input document")
        return {}
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"line {e.lineno} column {e.colno}", e.msg) from None


def run(argv: list[str] | None = None, stdin=None) -> tuple[str, int]:
    """Parse arguments, evaluate, and return ``(output, exit code)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return "", int(e.code or 0) and EXIT_INPUT
    if args.truncate is None:
        args.truncate = 40 if args.command == "nonsplit" else DEFAULT_TRUNCATION
    handler, needs = COMMANDS[args.command]
    if args.precision < 2 or args.truncate < 1:
        doc, code = {"error": "--precision must be >= 2 and --truncate >= 1"}, EXIT_INPUT
    else:
        try:
            data = _read_input(args, needs, sys.stdin if stdin is None else stdin)
            doc, code = handler(data, args)
        except InputError as e:
            doc, code = {"error": str(e), "path": e.path}, EXIT_INPUT
        except OSError as e:
            doc, code = {"error": str(e)}, EXIT_INPUT
        except PrecisionExhausted as e:
            doc, code = {"error": f"precision exhausted: {e}"}, EXIT_UNKNOWN
    doc = {"command": args.command, "precision": args.precision, "truncation": args.truncate, **doc}
    return render(doc, args.format), code


def main(argv: list[str] | None = None) -> int:
    out, code = run(argv)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
