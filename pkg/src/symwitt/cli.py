"""Command-line surface: rings, Pfaffians, symbols, orbits, reports.

Every command prints one canonical JSON object on stdout.  Errors are
structured JSON on stderr.  Exit codes: 0 success, 1 internal error,
2 refuted report verdict, 64 usage error.
"""

import argparse
import json
import os
import re
import sys
from typing import Optional

from .errors import ArtifactError, MalformedSpec
from .rings import Ideal, unit_ideal, zero_ideal
from .matrices import GroupWord, determinant, pfaffian, word_eval
from .polytools import MultiPoly, nagata_transform
from .witt import (
    EquivalenceCertificate,
    make_witt_symbol,
    tilde_lift_alt,
    unipotent_root,
    verify_equivalence,
    witt_product,
)
from .umrows import (
    complete,
    complete_relative,
    theta_matrix,
    tilde_row_lift,
    um_row,
    vaserstein_symbol,
)
from .orbits import (
    REFUTED,
    alt_orbit_partition,
    um_orbit_partition,
    vaserstein_report,
    vdk_product_aligned,
)
from .ringio import (
    canonical_json,
    element_in,
    matrix_from_obj,
    matrix_to_obj,
    parse_ring,
    ring_to_spec,
    vector_from_obj,
    word_from_obj,
    word_to_obj,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that exits 64 on bad usage instead of 2."""

    def error(self, message):
        self.exit(64, f"{self.prog}: error: {message}\n")


def _common(parser):
    parser.add_argument("--config", help="JSON file with default option values")
    parser.add_argument("--seed", type=int, help="recorded in the output")
    return parser


def _need(ns, name):
    val = getattr(ns, name, None)
    if val is None:
        raise UsageError(f"missing --{name.replace('_', '-')}")
    return val


def _ring_of(ns):
    return parse_ring(_need(ns, "ring"))


def _ideal_of(ring, text: Optional[str], required: bool = False) -> Optional[Ideal]:
    if text is None:
        if required:
            raise UsageError("missing --ideal")
        return None
    t = text.strip()
    if t == "unit":
        return unit_ideal(ring)
    if t == "zero":
        return zero_ideal(ring)
    if t.startswith("["):
        gens = [element_in(ring, g) for g in json.loads(t)]
    else:
        gens = [ring.parse(p) for p in t.split(",")]
    return Ideal(ring, gens)


def _json_arg(ns, name):
    text = _need(ns, name)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedSpec(f"--{name} is not valid JSON: {e}")


def _matrix_of(ns, ring, name="matrix"):
    return matrix_from_obj(_json_arg(ns, name), ring)


def _row_of(ns, ring, ideal, name="row"):
    _, coords = vector_from_obj(_json_arg(ns, name), ring)
    return um_row(ring, coords, ideal)


# ---------------------------------------------------------------------------
# handlers: each returns (payload dict, exit code)
# ---------------------------------------------------------------------------

def _h_ring_eval(ns):
    ring = _ring_of(ns)
    op = getattr(ns, "op", None) or "parse"
    args = [ring.parse(a) for a in (ns.args or [])]
    unary = {"parse": lambda a: a, "neg": ring.neg, "inv": ring.inv}
    binary = {"add": ring.add, "sub": ring.sub, "mul": ring.mul}
    if op in unary:
        if len(args) != 1:
            raise UsageError(f"{op} takes one argument")
        out = unary[op](args[0])
    elif op in binary:
        if len(args) != 2:
            raise UsageError(f"{op} takes two arguments")
        out = binary[op](args[0], args[1])
    elif op == "pow":
        if len(args) != 1 or ns.exp is None:
            raise UsageError("pow takes one argument and --exp")
        out = ring.one
        for _ in range(ns.exp):
            out = ring.mul(out, args[0])
    else:
        raise UsageError(f"unknown op {op!r}")
    return {"schema": "ring-eval/1", "ring": ring_to_spec(ring), "op": op,
            "args": [ring.fmt(a) for a in args], "result": ring.fmt(out)}, 0


def _h_ideal_members(ns):
    ring = _ring_of(ns)
    ideal = _ideal_of(ring, _need(ns, "ideal"))
    return {"schema": "ideal-members/1", "ring": ring_to_spec(ring),
            "generators": [ring.fmt(g) for g in ideal.gens],
            "members": [ring.fmt(x) for x in ideal.members()]}, 0


def _h_poly_nagata(ns):
    ring = _ring_of(ns)
    nvars = _need(ns, "nvars")
    f = MultiPoly.parse(ring, nvars, _need(ns, "poly"))
    phi = MultiPoly.parse(ring, nvars, ns.phi) if ns.phi else None
    sub, c, h = nagata_transform(f, phi)
    return {"schema": "nagata/1", "ring": ring_to_spec(ring),
            "phi": sub.phi.fmt(), "exponents": list(sub.exponents),
            "c": ring.fmt(c), "h": h.fmt()}, 0


def _h_mat_pf(ns):
    ring = _ring_of(ns)
    m = _matrix_of(ns, ring)
    return {"schema": "pfaffian/1", "pfaffian": ring.fmt(pfaffian(m))}, 0


def _h_mat_det(ns):
    ring = _ring_of(ns)
    m = _matrix_of(ns, ring)
    return {"schema": "determinant/1",
            "determinant": ring.fmt(determinant(m))}, 0


def _h_word_eval(ns):
    ring = _ring_of(ns)
    obj = _json_arg(ns, "word")
    if isinstance(obj, dict) and "size" not in obj and ns.size is not None:
        obj = dict(obj, size=ns.size)
    if isinstance(obj, list):
        obj = {"size": _need(ns, "size"), "tokens": obj}
    word = word_from_obj(obj, ring)
    return {"schema": "word-eval/1",
            "matrix": matrix_to_obj(word_eval(word))}, 0


def _cert_from_obj(ring, obj) -> EquivalenceCertificate:
    if not isinstance(obj, dict):
        raise MalformedSpec("certificate must be an object")
    t = obj.get("t", 0)
    word = word_from_obj(obj.get("word", obj.get("epsilon")), ring)
    return EquivalenceCertificate(int(t), word)


def _h_witt_verify(ns):
    ring = _ring_of(ns)
    ideal = _ideal_of(ring, ns.ideal, required=True)
    alpha = make_witt_symbol(ideal, _matrix_of(ns, ring, "alpha"))
    beta = make_witt_symbol(ideal, _matrix_of(ns, ring, "beta"))
    cert = _cert_from_obj(ring, _json_arg(ns, "cert"))
    ok = verify_equivalence(alpha, beta, cert)
    return {"schema": "witt-verify/1", "verified": ok}, 0


def _h_witt_product(ns):
    ring = _ring_of(ns)
    ideal = _ideal_of(ring, ns.ideal, required=True)
    x = make_witt_symbol(ideal, _matrix_of(ns, ring, "alpha"))
    y = make_witt_symbol(ideal, _matrix_of(ns, ring, "beta"))
    z = witt_product(x, y)
    return {"schema": "witt-product/1", "matrix": matrix_to_obj(z.rep),
            "witness": list(z.witness.signs)}, 0


def _h_witt_lift(ns):
    ring = _ring_of(ns)
    ideal = _ideal_of(ring, ns.ideal, required=True)
    x = make_witt_symbol(ideal, _matrix_of(ns, ring, "alpha"))
    lifted = tilde_lift_alt(x)
    return {"schema": "witt-lift/1", "matrix": matrix_to_obj(lifted)}, 0


def _h_witt_root(ns):
    ring = _ring_of(ns)
    gamma = _matrix_of(ns, ring)
    delta = unipotent_root(gamma, _need(ns, "m"))
    return {"schema": "witt-root/1", "m": ns.m,
            "matrix": matrix_to_obj(delta)}, 0


def _h_um_complete(ns):
    ring = _ring_of(ns)
    ideal = _ideal_of(ring, ns.ideal)
    row = _row_of(ns, ring, ideal)
    if ideal is None:
        found = complete(row)
        coords = None if found is None else [ring.fmt(x) for x in found]
    else:
        found = complete_relative(row)
        coords = None if found is None else [ring.fmt(x) for x in found.entries]
    return {"schema": "um-complete/1", "completion": coords}, 0


def _h_um_theta(ns):
    ring = _ring_of(ns)
    _, a = vector_from_obj(_json_arg(ns, "a"), ring)
    _, b = vector_from_obj(_json_arg(ns, "b"), ring)
    m = theta_matrix(ring, a, b)
    return {"schema": "um-theta/1", "matrix": matrix_to_obj(m),
            "pfaffian": ring.fmt(pfaffian(m))}, 0


def _h_um_symbol(ns):
    ring = _ring_of(ns)
    ideal = _ideal_of(ring, ns.ideal, required=True)
    row = _row_of(ns, ring, ideal)
    sym = vaserstein_symbol(row)
    return {"schema": "um-symbol/1", "matrix": matrix_to_obj(sym.rep),
            "witness": list(sym.witness.signs),
            "pfaffian": ring.fmt(pfaffian(sym.rep))}, 0


def _h_um_vdk(ns):
    ring = _ring_of(ns)
    ideal = _ideal_of(ring, ns.ideal)
    u = _row_of(ns, ring, ideal, "u")
    v = _row_of(ns, ring, ideal, "v")
    prod = vdk_product_aligned(u, v, depth=ns.conj_depth, bound=ns.bound)
    return {"schema": "um-vdk/1",
            "row": [ring.fmt(x) for x in prod.entries]}, 0


def _h_um_lift(ns):
    ring = _ring_of(ns)
    ideal = _ideal_of(ring, ns.ideal, required=True)
    row = _row_of(ns, ring, ideal)
    lifted = tilde_row_lift(row)
    return {"schema": "um-lift/1", "ring": ring_to_spec(lifted.ring),
            "row": [lifted.ring.fmt(x) for x in lifted.entries]}, 0


def _h_orbit_um(ns):
    ring = _ring_of(ns)
    ideal = _ideal_of(ring, ns.ideal)
    part = um_orbit_partition(ring, _need(ns, "n"), ideal,
                              depth=ns.conj_depth, bound=ns.bound)
    obj = part.to_obj()
    obj["schema"] = "orbit-partition/1"
    obj["ring"] = ring_to_spec(ring)
    return obj, 0


def _h_orbit_alt(ns):
    ring = _ring_of(ns)
    ideal = _ideal_of(ring, ns.ideal)
    part = alt_orbit_partition(ring, ideal, _need(ns, "size"),
                               depth=ns.conj_depth, bound=ns.bound)
    obj = part.to_obj()
    obj["schema"] = "orbit-partition/1"
    obj["ring"] = ring_to_spec(ring)
    return obj, 0


def _h_report_vaserstein(ns):
    ring = _ring_of(ns)
    ideal = _ideal_of(ring, ns.ideal)
    report = vaserstein_report(ring, ideal, levels=ns.stab,
                               depth=ns.conj_depth, bound=ns.bound)
    obj = report.to_obj()
    obj["schema"] = "bijectivity-report/1"
    return obj, 2 if report.verdict == REFUTED else 0


# ---------------------------------------------------------------------------
# wiring
# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    top = _Parser(prog="symwitt", description=__doc__)
    groups = top.add_subparsers(dest="group", required=True, metavar="GROUP")

    def cmd(group_sub, name, handler, **flags):
        p = _common(group_sub.add_parser(name))
        for flag, spec in flags.items():
            p.add_argument(f"--{flag.replace('_', '-')}", dest=flag, **spec)
        p.set_defaults(handler=handler)
        return p

    s = lambda: {"type": str}
    i = lambda: {"type": int}
    multi = {"type": str, "nargs": "*"}

    g_ring = groups.add_parser("ring").add_subparsers(dest="command",
                                                      required=True)
    cmd(g_ring, "eval", _h_ring_eval, ring=s(), op=s(), args=dict(multi),
        exp=i())

    g_ideal = groups.add_parser("ideal").add_subparsers(dest="command",
                                                        required=True)
    cmd(g_ideal, "members", _h_ideal_members, ring=s(), ideal=s())

    g_poly = groups.add_parser("poly").add_subparsers(dest="command",
                                                      required=True)
    cmd(g_poly, "nagata", _h_poly_nagata, ring=s(), nvars=i(), poly=s(),
        phi=s())

    g_mat = groups.add_parser("mat").add_subparsers(dest="command",
                                                    required=True)
    cmd(g_mat, "pf", _h_mat_pf, ring=s(), matrix=s())
    cmd(g_mat, "det", _h_mat_det, ring=s(), matrix=s())

    g_word = groups.add_parser("word").add_subparsers(dest="command",
                                                      required=True)
    cmd(g_word, "eval", _h_word_eval, ring=s(), size=i(), word=s())

    g_witt = groups.add_parser("witt").add_subparsers(dest="command",
                                                      required=True)
    cmd(g_witt, "verify", _h_witt_verify, ring=s(), ideal=s(), alpha=s(),
        beta=s(), cert=s())
    cmd(g_witt, "product", _h_witt_product, ring=s(), ideal=s(), alpha=s(),
        beta=s())
    cmd(g_witt, "lift", _h_witt_lift, ring=s(), ideal=s(), alpha=s())
    cmd(g_witt, "root", _h_witt_root, ring=s(), matrix=s(), m=i())

    g_um = groups.add_parser("um").add_subparsers(dest="command",
                                                  required=True)
    cmd(g_um, "complete", _h_um_complete, ring=s(), ideal=s(), row=s())
    cmd(g_um, "theta", _h_um_theta, ring=s(), a=s(), b=s())
    cmd(g_um, "symbol", _h_um_symbol, ring=s(), ideal=s(), row=s())
    cmd(g_um, "vdk", _h_um_vdk, ring=s(), ideal=s(), u=s(), v=s(),
        conj_depth={"type": int, "default": 1}, bound=i())
    cmd(g_um, "lift", _h_um_lift, ring=s(), ideal=s(), row=s())

    g_orbit = groups.add_parser("orbit").add_subparsers(dest="command",
                                                        required=True)
    cmd(g_orbit, "um", _h_orbit_um, ring=s(), ideal=s(), n=i(),
        conj_depth={"type": int, "default": 1}, bound=i())
    cmd(g_orbit, "alt", _h_orbit_alt, ring=s(), ideal=s(), size=i(),
        conj_depth={"type": int, "default": 1}, bound=i())

    g_report = groups.add_parser("report").add_subparsers(dest="command",
                                                          required=True)
    cmd(g_report, "vaserstein", _h_report_vaserstein, ring=s(), ideal=s(),
        stab={"type": int, "default": 1},
        conj_depth={"type": int, "default": 2}, bound=i())

    # top-level alias used throughout the docs
    p_pf = _common(groups.add_parser("pf"))
    p_pf.add_argument("--ring", type=str)
    p_pf.add_argument("--matrix", type=str)
    p_pf.set_defaults(handler=_h_mat_pf, command="pf")

    return top


def _apply_config(ns):
    if getattr(ns, "config", None) is None:
        return
    try:
        with open(ns.config) as fh:
            conf = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config {ns.config}: {e}")
    if not isinstance(conf, dict):
        raise UsageError("config file must hold a JSON object")
    for key, val in conf.items():
        attr = key.replace("-", "_")
        if getattr(ns, attr, None) is None:
            setattr(ns, attr, val)


_JSON_STR = re.compile(r'"(?:[^"\\]|\\.)*"')


def _colorize(line: str) -> str:
    """ANSI-tint JSON keys (cyan) and string values (green)."""
    out, last = [], 0
    for m in _JSON_STR.finditer(line):
        out.append(line[last:m.start()])
        code = "36" if line[m.end():m.end() + 1] == ":" else "32"
        out.append(f"\x1b[{code}m{m.group(0)}\x1b[0m")
        last = m.end()
    out.append(line[last:])
    return "".join(out)


def _want_color() -> bool:
    # the only environment knob: everything else comes from flags/config
    return os.environ.get("OUTPUT_COLOR", "").lower() in (
        "1", "true", "yes", "always")


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        _apply_config(ns)
        payload, code = ns.handler(ns)
        if getattr(ns, "seed", None) is not None:
            payload["seed"] = ns.seed
        text = canonical_json(payload) + "\n"
        sys.stdout.write(_colorize(text) if _want_color() else text)
        return code
    except UsageError as e:
        sys.stderr.write(f"{parser.prog}: error: {e}\n")
        return 64
    except ArtifactError as e:
        err = {"error": type(e).__name__, "message": str(e)}
        sys.stderr.write(canonical_json(err) + "\n")
        return 1
    except Exception as e:  # internal failure, still structured
        err = {"error": "InternalError", "message": f"{type(e).__name__}: {e}"}
        sys.stderr.write(canonical_json(err) + "\n")
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
