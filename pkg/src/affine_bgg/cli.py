"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction

from . import __version__
from . import linalg as la
from .admissible import (
    CriticalLevelError,
    IntegralSystem,
    _same_integrality,
    enumerate_pr_plus,
    is_admissible_number,
    pr_k_y,
)
from .affine_weyl import AffineWeight
from .bruhat import EnumWindow, OrderKind, StabilityError, covers, geq, height, interval, squares, translation_norm
from .cache import Cache
from .characters import (
    Truncation,
    WindowInsufficient,
    compare,
    contributing_elements,
    euler_character,
    irreducible_character,
    verma_character,
)
from .complexes import CompatibleSignSystem, build_complex, to_dot, to_json, verify_graph
from .parabolic import ParabolicData, borel_weil_index, decompose, is_minimal_rep, levi_levels
from .root_system import build_root_system
from .signs import InconsistentSigns

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 2, 3


class InputError(ValueError):
    pass


class VerificationFailed(RuntimeError):
    def __init__(self, message: str, payload=None):
        super().__init__(message)
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


# -- argument helpers ---------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return la.parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("empty range")
    return lo, hi


def _add_type(p, level=False, level_required=True):
    p.add_argument("--type", required=True, help="Cartan type letter A-G")
    p.add_argument("--rank", required=True, type=int)
    if level:
        p.add_argument("--level", required=level_required, type=_rational, help="rational level p/q")


def _add_window(p, norm=2, delta=2):
    p.add_argument("--window-norm", type=int, default=norm, help="bound on |(alpha_i|mu)|")
    p.add_argument("--window-delta", type=int, default=delta, help="bound on |n| for reflections")


def _root_system(args):
    return build_root_system(args.type, args.rank)


def _system(args, twist=None):
    rs = _root_system(args)
    info = is_admissible_number(args.level, rs)
    if not info:
        raise InputError(f"level {la.fmt(args.level)} is not admissible for {rs.label}")
    system = IntegralSystem(rs, args.level)
    if twist:
        system = system.with_twist(system.ambient.parse(twist))
    return system


def _weight(args, system):
    labels = getattr(args, "weight_labels", None)
    if labels is None:
        return system.vacuum
    rs = system.base
    if len(labels) != rs.rank:
        raise InputError(f"--lambda needs {rs.rank} labels")
    lam = AffineWeight(rs.weight_from_labels(labels), system.level, 0)
    lam = system.ambient.dot(system.twist, lam)
    if not _same_integrality(system.ambient, system, lam):
        raise InputError("the weight does not share the integral root system of the level")
    return lam


# -- commands -------------------------------------------------------------------------


def cmd_rootsys(args):
    return _root_system(args).to_json()


def cmd_weyl(args):
    from .affine_weyl import AffineWeylGroup

    W = AffineWeylGroup(_root_system(args))
    elts = [W.parse(e) for e in args.elt or []]
    if args.word is not None:
        elts.append(W.from_word(args.word))
    if not elts:
        raise InputError("give --elt or --word")
    if args.action == "mult":
        w = W.identity()
        for x in elts:
            w = w * x
    elif len(elts) != 1:
        raise InputError(f"weyl {args.action} takes one element")
    else:
        w = elts[0].inverse() if args.action == "inv" else elts[0]
    out = {"elt": W.format(w), "length": W.length(w), "semi_infinite_length": W.semi_infinite_length(w)}
    if args.twist:
        out["twisted_length"] = W.twisted_length(w, W.parse(args.twist))
    elif args.action == "tlen":
        raise InputError("weyl tlen needs --twist")
    if args.action in ("word", "info"):
        out["reduced_word"] = W.reduced_word(w)
    if args.weight_labels is not None:
        if args.level is None:
            raise InputError("--lambda needs --level")
        lam = AffineWeight(W.rs.weight_from_labels(args.weight_labels), args.level, 0)
        out["dot"] = W.dot(w, lam).to_json()
    return out


def _order(args, W):
    name = {"semi": "semi_infinite", "semi-infinite": "semi_infinite"}.get(args.order, args.order)
    if name == "twisted":
        if not args.twist:
            raise InputError("--order twisted needs --twist")
        return OrderKind.twisted(W.parse(args.twist))
    return OrderKind(name)


def _hasse_dot(W, kind, elements, down) -> str:
    names = {w: f"n{i}" for i, w in enumerate(elements)}
    lines = ["digraph hasse {"]
    for w in elements:
        lines.append(f'  {names[w]} [label="{W.format(w)}\\n({height(W, w, kind)})"];')
    for w in elements:
        for v in down[w]:
            lines.append(f"  {names[w]} -> {names[v]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_bruhat(args):
    from .affine_weyl import AffineWeylGroup

    W = AffineWeylGroup(_root_system(args))
    kind = _order(args, W)
    window = EnumWindow(args.window_norm, args.window_delta)
    if args.action == "leq":
        upper, lower = W.parse(args.upper), W.parse(args.lower)
        return {"upper": W.format(upper), "lower": W.format(lower), "order": kind.kind, "lower_leq_upper": geq(W, upper, lower, kind)}
    if args.action == "covers":
        w = W.parse(args.elt[0])
        res = covers(W, w, kind, window, args.direction)
        return {
            "elt": W.format(w),
            "order": kind.kind,
            "direction": args.direction,
            "window": res.window.to_json(),
            "covers": [W.format(v) for v in res.elements],
        }
    lower, upper = W.parse(args.lower), W.parse(args.upper)
    elements = interval(W, lower, upper, kind, window)
    members = set(elements)
    down = {w: [v for v in covers(W, w, kind, window, "down").elements if v in members] for w in elements}
    if args.format == "dot":
        return _hasse_dot(W, kind, elements, down)
    out = {
        "order": kind.kind,
        "window": window.to_json(),
        "elements": [{"elt": W.format(w), "height": height(W, w, kind)} for w in elements],
        "covers": [[W.format(w), W.format(v)] for w in elements for v in down[w]],
    }
    if args.action == "squares":
        out["squares"] = [[W.format(x) for x in q] for q in squares(down)]
    return out


def cmd_admissible(args):
    rs = _root_system(args)
    if args.action == "check":
        return is_admissible_number(args.level, rs).to_json()
    system = _system(args)
    if args.action == "integral-system":
        out = system.to_json()
        out["relation_problems"] = system.check_relations()
        return out
    if args.action == "enumerate":
        if args.twist:
            y = system.ambient.parse(args.twist)
            entries = pr_k_y(args.level, rs, y)
        else:
            entries = enumerate_pr_plus(args.level, rs)
        return {
            "type": rs.type_letter,
            "rank": rs.rank,
            "level": la.fmt(system.level),
            "twist": args.twist or "e",
            "weights": [{"labels": [la.fmt(x) for x in a.labels(rs)], "weight": a.weight.to_json()} for a in entries],
        }
    raise InputError(f"unknown action {args.action}")


def cmd_parabolic(args):
    rs = _root_system(args)
    data = ParabolicData(rs, args.subset)
    if args.action == "levels":
        if args.level is None:
            raise InputError("--level is required")
        return levi_levels(args.level, data).to_json()
    if args.action == "decompose":
        from .affine_weyl import AffineWeylGroup

        W = AffineWeylGroup(rs)
        if not args.elt:
            raise InputError("missing --elt")
        w = W.parse(args.elt[0])
        u, v = decompose(W, w, data)
        return {
            "elt": W.format(w),
            "u": W.format(u),
            "v": W.format(v),
            "v_minimal": is_minimal_rep(W, v, data),
            "semi_infinite_lengths": [W.semi_infinite_length(x) for x in (w, u, v)],
        }
    system = _system(args)
    res = borel_weil_index(system, system.vacuum, args.subset, args.grade, args.window_norm, args.assume_remark)
    W = system.abstract
    return {
        "grade": res.grade,
        "window_norm": res.window_norm,
        "conditional": res.conditional,
        "entries": [
            {
                "element": W.format(e.element),
                "weight": e.weight.to_json(),
                "restricted": [r.to_json() for r in e.restricted],
                "component_admissible": e.component_admissible,
            }
            for e in res.entries
        ],
    }


def _build(args):
    system = _system(args, args.system_twist)
    lam = _weight(args, system)
    kind = args.kind.replace("-", "_")
    W = system.abstract
    if kind == "two_sided":
        return build_complex(
            system,
            kind,
            weight=lam,
            window=EnumWindow(args.window_norm, args.window_delta),
            grade_range=args.grades,
        )
    twist = W.parse(args.twist) if args.twist else None
    if kind == "one_sided" and twist is not None:
        raise InputError("--twist applies to twisted complexes")
    return build_complex(system, kind, weight=lam, max_length=args.max_length, twist=twist)


def cmd_bgg(args):
    if args.action == "verify":
        try:
            with open(args.file) as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read {args.file}: {exc}") from None
        report = verify_graph(data)
        if report["failures"]:
            raise VerificationFailed("d^2 verification failed", report)
        return report
    if args.action == "signs":
        system = _system(args)
        cs = CompatibleSignSystem(system, args.word, args.max_grade)
        rep = cs.verify()
        W = system.abstract
        out = {
            "word": args.word,
            "twists": [W.format(y) for y in cs.twists],
            "ok": rep["ok"],
            "inherited_edges": rep["inherited_edges"],
            "levels": [
                {
                    "level": i,
                    "edges": [
                        {"from": W.format(a), "to": W.format(b), "sign": s}
                        for (a, b), s in sorted(cs.assignment(i).signs.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key()))
                    ],
                }
                for i in range(cs.levels + 1)
            ],
        }
        if not rep["ok"]:
            raise VerificationFailed("compatible sign system failed verification", out)
        return out
    c = _build(args)
    if args.format == "dot":
        return to_dot(c)
    out = to_json(c)
    if not c.report.ok:
        raise VerificationFailed("d^2 verification failed", out)
    return out


def cmd_char(args):
    system = _system(args)
    lam = _weight(args, system)
    t = Truncation(args.depth, args.offset_window)
    if args.action == "verma":
        return verma_character(system.base, lam, t)
    if args.action == "irr":
        return irreducible_character(system, lam, t)
    needed = contributing_elements(system, lam, t)
    W = system.abstract
    kind = args.kind.replace("-", "_")
    if kind == "one_sided":
        c = build_complex(system, kind, weight=lam, max_length=max(W.length(w) for w in needed))
    else:
        grades = [W.semi_infinite_length(w) for w in needed]
        norm = int(max(translation_norm(W, w) for w in needed))
        c = build_complex(system, kind, weight=lam, window=EnumWindow(norm, args.window_delta), grade_range=(min(grades), max(grades)))
    return euler_character(c, t)


def _char_output(args, series):
    if args.action == "compare":
        return series
    if args.format == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(series.csv_rows())
        return buf.getvalue()
    return series.to_json()


def cmd_char_dispatch(args):
    if args.action == "compare":
        system = _system(args)
        lam = _weight(args, system)
        t = Truncation(args.depth, args.offset_window)
        a = verma_character(system.base, lam, t) if args.first == "verma" else irreducible_character(system, lam, t)
        b = verma_character(system.base, lam, t) if args.second == "verma" else irreducible_character(system, lam, t)
        return compare(a, b).to_json()
    return _char_output(args, cmd_char(args))


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def global_options(suppress: bool) -> _Parser:
        # subcommands repeat the options without defaults, so a value given before the verb survives
        g = _Parser(add_help=False)
        default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g.add_argument("--format", choices=["json", "csv", "dot", "text"], default=default("json"))
        g.add_argument("--cache-dir", default=default(None), help="cache directory (default: $AFFINE_BGG_CACHE_DIR)")
        g.add_argument("--jobs", type=int, default=default(1), help="worker processes (computations currently run in one process)")
        return g

    common = global_options(True)
    parser = _Parser(prog="affine-bgg", description="Affine Weyl group orders, admissible weights and BGG complexes.", parents=[global_options(False)])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("rootsys", parents=[common])
    p.add_argument("action", choices=["show"])
    _add_type(p)

    p = sub.add_parser("weyl", parents=[common])
    p.add_argument("action", choices=["mult", "inv", "len", "tlen", "silen", "word", "info"])
    _add_type(p, level=True, level_required=False)
    p.add_argument("--elt", action="append", help="element such as 't[1,0]*s1s0'; repeat for mult")
    p.add_argument("--word", type=_int_list)
    p.add_argument("--twist")
    p.add_argument("--lambda", dest="weight_labels", type=_int_list)

    p = sub.add_parser("bruhat", parents=[common])
    p.add_argument("action", choices=["leq", "covers", "interval", "squares"])
    _add_type(p)
    p.add_argument("--order", choices=["usual", "twisted", "semi", "semi-infinite"], default="usual")
    p.add_argument("--twist")
    p.add_argument("--upper")
    p.add_argument("--lower")
    p.add_argument("--elt", action="append")
    p.add_argument("--direction", choices=["down", "up"], default="down")
    _add_window(p)

    p = sub.add_parser("admissible", parents=[common])
    p.add_argument("action", choices=["check", "enumerate", "integral-system"])
    _add_type(p, level=True)
    p.add_argument("--twist", help="ambient twist y for Pr_{k,y}")

    p = sub.add_parser("parabolic", parents=[common])
    p.add_argument("action", choices=["levels", "decompose", "borel-weil"])
    _add_type(p, level=True, level_required=False)
    p.add_argument("--S", "--subset", dest="subset", type=_int_list, required=True, help="1-based simple root indices")
    p.add_argument("--elt", action="append")
    p.add_argument("--grade", type=int, default=0)
    p.add_argument("--window-norm", type=int, default=3)
    p.add_argument("--assume-remark", action="store_true", help="allow subsets with more than one root")

    p = sub.add_parser("bgg", parents=[common])
    p.add_argument("action", choices=["build", "verify", "signs"])
    p.add_argument("file", nargs="?")
    p.add_argument("--type")
    p.add_argument("--rank", type=int)
    p.add_argument("--level", type=_rational)
    p.add_argument("--lambda", dest="weight_labels", type=_int_list)
    p.add_argument("--kind", choices=["one-sided", "twisted", "two-sided"], default="one-sided")
    p.add_argument("--grades", type=_range)
    p.add_argument("--max-length", type=int, default=4)
    p.add_argument("--twist", help="abstract twist for twisted complexes")
    p.add_argument("--system-twist", help="ambient twist y of the integral system")
    p.add_argument("--word", type=_int_list, default=[])
    p.add_argument("--max-grade", type=int, default=2)
    _add_window(p, 3, 3)

    p = sub.add_parser("char", parents=[common])
    p.add_argument("action", choices=["verma", "irr", "euler", "compare"])
    _add_type(p, level=True)
    p.add_argument("--lambda", dest="weight_labels", type=_int_list)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--offset-window", type=int, default=2)
    p.add_argument("--kind", choices=["one-sided", "two-sided"], default="one-sided")
    p.add_argument("--window-delta", type=int, default=2)
    p.add_argument("--first", choices=["verma", "irr"], default="verma")
    p.add_argument("--second", choices=["verma", "irr"], default="irr")
    return parser


HANDLERS = {
    "rootsys": cmd_rootsys,
    "weyl": cmd_weyl,
    "bruhat": cmd_bruhat,
    "admissible": cmd_admissible,
    "parabolic": cmd_parabolic,
    "bgg": cmd_bgg,
    "char": cmd_char_dispatch,
}

CACHED = {"bgg", "char", "parabolic"}


def _render(payload, fmt: str) -> str:
    if isinstance(payload, str):
        return payload if payload.endswith("\n") else payload + "\n"
    if fmt == "text" and isinstance(payload, dict):
        return "".join(f"{k}: {v if isinstance(v, str) else json.dumps(v, sort_keys=True)}\n" for k, v in sorted(payload.items()))
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _check_required(args):
    if args.jobs < 1:
        raise InputError("--jobs must be at least 1")
    if args.command == "bgg" and args.action == "verify":
        if not args.file:
            raise InputError("bgg verify needs a file")
        return
    if args.command == "bgg":
        missing = [n for n in ("type", "rank", "level") if getattr(args, n) is None]
        if missing:
            raise InputError("missing " + ", ".join("--" + m for m in missing))
        if args.action == "build" and args.kind == "two-sided" and args.grades is None:
            raise InputError("two-sided complexes need --grades")
    if args.command == "bruhat":
        need = ("elt",) if args.action == "covers" else ("upper", "lower")
        if any(not getattr(args, n) for n in need):
            raise InputError("missing " + ", ".join("--" + n for n in need))


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--level -1/2`` into ``--level=-1/2`` so argparse does not read a flag."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and re.match(r"-\d", tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(stderr)
            return EXIT_INPUT
        _check_required(args)
        handler = HANDLERS[args.command]
        cache = Cache.from_env(args.cache_dir) if args.command in CACHED else None
        if cache is not None and not (args.command == "bgg" and args.action == "verify"):
            config = {k: (la.fmt(v) if isinstance(v, Fraction) else (list(v) if isinstance(v, tuple) else v)) for k, v in sorted(vars(args).items()) if k not in ("cache_dir", "jobs")}
            payload = cache.get_or_compute(config, lambda: handler(args))
        else:
            payload = handler(args)
        stdout.write(_render(payload, args.format))
        return EXIT_OK
    except VerificationFailed as exc:
        if exc.payload is not None:
            stdout.write(_render(exc.payload, "json"))
        print(f"verification failed: {exc}", file=stderr)
        return EXIT_VERIFY
    except (InconsistentSigns, StabilityError) as exc:
        print(f"verification failed: {exc}", file=stderr)
        return EXIT_VERIFY
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (InputError, CriticalLevelError, WindowInsufficient, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
