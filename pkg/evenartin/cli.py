from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from . import __version__
from .config import LOG_LEVEL_SET, Settings, apply_settings, default_config_path, load_settings, with_overrides
from .errors import ArtinError
from .graph import ArtinGraph, ValidationReport, load_graph, parse_graph_text, validate
from .intersection import intersect_many, intersect_with_trace, replay_trace
from .kernels import covertex_expand, covertex_rewrite, kernel_rewrite, vertex_kernel_graph, window_graph
from .parabolic import ParabolicSubgroup, member
from .testkit import run_selftest, sample_soundness
from .word_problem import amalgam_reduce, is_equal, is_trivial
from .words import format_word, parse_word, retraction_image

log = logging.getLogger(__name__)


def print_json(obj: object) -> None:
    print(json.dumps(obj, ensure_ascii=False, indent=2))


def emit(args: argparse.Namespace, out: dict[str, Any], text: str) -> None:
    if getattr(args, "json", False):
        print_json(out)
    else:
        print(text)


def cfg_path_arg(args: argparse.Namespace) -> Path | None:
    raw = getattr(args, "config", None) or getattr(args, "global_config", None)
    return Path(raw) if raw else None


def cli_error_hint(msg: str) -> str:
    m = (msg or "").lower()
    if "no such file" in m:
        return "Pass the path of a graph file with `vertex <name>` and `edge <u> <v> <label>` lines."
    if "triangle" in m and "labels" in m:
        return "In every triangle at most one label may exceed 2."
    if "labels must be even" in m:
        return "Only even labels (2, 4, 6, ...) are supported."
    if "outside the graph" in m or "unknown vertex" in m or "no image" in m:
        return "Every generator in a word or support must be a vertex of the graph."
    if "exceeds the cap" in m:
        return "Raise the cap with `--max-len` or `max_syllables` in the config file."
    if "budget" in m:
        return "Raise `oracle_budget` in the config file or shorten the words."
    return ""


def parse_support(text: str) -> frozenset[str]:
    return frozenset(s.strip() for s in str(text or "").split(",") if s.strip())


def parse_group(graph: ArtinGraph, text: str) -> ParabolicSubgroup:
    """`<conjugator>|<support>`, e.g. `x a^-1|a,b`."""
    conj, sep, support = str(text).partition("|")
    if not sep:
        raise ArtinError(f"expected `<conjugator>|<support>`, got {text!r}")
    return ParabolicSubgroup(graph, parse_word(conj, graph), parse_support(support))


def _describe(P: ParabolicSubgroup) -> str:
    support = ",".join(sorted(P.support)) or "∅"
    return f"conjugator: {format_word(P.conjugator)}\nsupport: {support}"


def setup(args: argparse.Namespace) -> Settings:
    settings = with_overrides(
        load_settings(cfg_path_arg(args)),
        max_syllables=getattr(args, "max_len", None),
        log_level=getattr(args, "log_level", None),
    )
    apply_settings(settings)
    logging.basicConfig(level=getattr(logging, settings.log_level), stream=sys.stderr)
    logging.getLogger("evenartin").setLevel(getattr(logging, settings.log_level))
    return settings


def cmd_validate(args: argparse.Namespace) -> int:
    res = validate(parse_graph_text(Path(args.graph).read_text(encoding="utf-8")))
    if isinstance(res, ValidationReport):
        out = {"ok": False, "result": "invalid", **res.as_dict()}
        emit(args, out, "\n".join(str(v) for v in res.violations))
        return 1
    emit(args, {"ok": True, "result": "valid even FC", "graph": res.as_dict()}, "valid even FC")
    return 0


def cmd_eq(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    same = is_equal(graph, parse_word(args.u, graph), parse_word(args.v, graph))
    result = "equal" if same else "not equal"
    emit(args, {"ok": True, "result": result}, result)
    return 0


def cmd_triv(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    trivial = is_trivial(graph, parse_word(args.word, graph))
    result = "trivial" if trivial else "not trivial"
    emit(args, {"ok": True, "result": result}, result)
    return 0


def cmd_member(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    P = ParabolicSubgroup(graph, parse_word(args.conj, graph), parse_support(args.support))
    inside = member(P, parse_word(args.word, graph))
    result = "member" if inside else "not a member"
    emit(args, {"ok": True, "result": result, **P.as_dict()}, result)
    return 0


def cmd_intersect(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    P = ParabolicSubgroup(graph, parse_word(args.p_conj, graph), parse_support(args.p_support))
    Q = ParabolicSubgroup(graph, parse_word(args.q_conj, graph), parse_support(args.q_support))
    R, trace = intersect_with_trace(P, Q)
    out: dict[str, Any] = {"ok": True, "result": "intersection", **R.as_dict()}
    if args.trace:
        out["trace"] = trace
    text = _describe(R)
    if args.verify:
        problems = sample_soundness(P, Q, R, seed=args.seed, samples=args.samples)
        replayed = replay_trace(P, Q, trace)
        out["verified"] = replayed and not problems
        out["problems"] = problems
        out["ok"] = bool(out["verified"])
        text += f"\nverified: {str(out['verified']).lower()}"
    emit(args, out, text)
    return 0 if out["ok"] else 1


def cmd_intersect_many(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    groups = [parse_group(graph, g) for g in args.group]
    if not groups:
        raise ArtinError("pass at least one --group")
    trace: list[dict[str, Any]] = []
    R = intersect_many(groups, trace=trace)
    out: dict[str, Any] = {"ok": True, "result": "intersection", **R.as_dict()}
    if args.trace:
        out["trace"] = trace
    emit(args, out, _describe(R))
    return 0


def cmd_kernel(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    ctx = vertex_kernel_graph(graph, args.vertex)
    out: dict[str, Any] = {"ok": True, "result": "kernel"}
    if args.rewrite:
        rewritten = kernel_rewrite(ctx, parse_word(args.rewrite, graph))
        out["rewrite"] = format_word(rewritten)
    out.update(ctx.as_dict())
    delta = window_graph(ctx)
    lines = [f"hypothesis ({ctx.hypothesis}) at {ctx.x}", delta.as_text().rstrip()]
    lines += [f"sigma {u} = {format_word(ctx.sigma(u))}" for u in sorted(ctx.k)]
    if out["free"]:
        lines.append(f"free of rank {len(delta)}")
    if "rewrite" in out:
        lines.append(f"rewrite: {out['rewrite']}")
    emit(args, out, "\n".join(lines))
    return 0


def cmd_retract(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    image = retraction_image(parse_word(args.word, graph), parse_support(args.support), graph)
    emit(args, {"ok": True, "result": format_word(image)}, format_word(image))
    return 0


def cmd_factor(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    fac = amalgam_reduce(graph, args.vertex, parse_word(args.word, graph))
    lines = [f"{b.tag}: {format_word(b.word)}" for b in fac.blocks]
    emit(args, {"ok": True, "result": "factorization", **fac.as_dict()}, "\n".join(lines))
    return 0


def cmd_covertex(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    letters = covertex_rewrite(graph, args.vertex, parse_word(args.word, graph))
    lines = [f"({format_word(l.conjugator)}) {args.vertex}^{l.exponent}" for l in letters]
    expanded = format_word(covertex_expand(graph, args.vertex, letters))
    out = {"ok": True, "result": [l.as_dict() for l in letters], "expanded": expanded}
    emit(args, out, "\n".join(lines) or "1")
    return 0


def cmd_selftest(args: argparse.Namespace) -> int:
    report = run_selftest(args.settings, seed=args.seed, vertices=args.vertices, length=args.len, cases=args.cases)
    out = {"ok": bool(report["ok"]), "result": "selftest", **report}
    text = (
        f"oracle agree={report['oracle']['agree']} disagree={report['oracle']['disagree']} "
        f"unknown={report['oracle']['unknown']}\n"
        f"intersect sound={report['intersect']['sound']} unsound={report['intersect']['unsound']}\n"
        f"raag agree={report['raag']['agree']} disagree={report['raag']['disagree']}"
    )
    emit(args, out, text)
    return 0 if report["ok"] else 1


def cmd_config_path(args: argparse.Namespace) -> int:
    print_json({"ok": True, "config_path": str(cfg_path_arg(args) or default_config_path())})
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="print a JSON object instead of text")
    p.add_argument("--config", help="path to evenartin config json")
    p.add_argument("--log-level", choices=sorted(LOG_LEVEL_SET), help="logging level on stderr")
    p.add_argument("--max-len", type=int, help="cap on the syllable count of any word")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="evenartin", description="parabolic subgroups of even FC-type Artin groups")
    p.add_argument("--version", action="version", version=f"evenartin {__version__}")
    p.add_argument("--config", dest="global_config", help="path to evenartin config json")
    sub = p.add_subparsers(dest="cmd", required=True)

    p_validate = sub.add_parser("validate", help="check that a graph file is even and of FC type")
    p_validate.add_argument("graph")
    _add_common(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_eq = sub.add_parser("eq", help="decide whether two words are equal")
    p_eq.add_argument("graph")
    p_eq.add_argument("u")
    p_eq.add_argument("v")
    _add_common(p_eq)
    p_eq.set_defaults(func=cmd_eq)

    p_triv = sub.add_parser("triv", help="decide whether a word is trivial")
    p_triv.add_argument("graph")
    p_triv.add_argument("word")
    _add_common(p_triv)
    p_triv.set_defaults(func=cmd_triv)

    p_member = sub.add_parser("member", help="membership in a parabolic subgroup")
    p_member.add_argument("graph")
    p_member.add_argument("word")
    p_member.add_argument("--conj", default="1", help="conjugator word")
    p_member.add_argument("--support", default="", help="comma-separated vertices")
    _add_common(p_member)
    p_member.set_defaults(func=cmd_member)

    p_intersect = sub.add_parser("intersect", help="intersect two parabolic subgroups")
    p_intersect.add_argument("graph")
    p_intersect.add_argument("--p-conj", default="1")
    p_intersect.add_argument("--p-support", default="")
    p_intersect.add_argument("--q-conj", default="1")
    p_intersect.add_argument("--q-support", default="")
    p_intersect.add_argument("--trace", action="store_true", help="include the reduction trace")
    p_intersect.add_argument("--verify", action="store_true", help="replay the trace and sample membership")
    p_intersect.add_argument("--seed", type=int, default=0)
    p_intersect.add_argument("--samples", type=int, default=50)
    _add_common(p_intersect)
    p_intersect.set_defaults(func=cmd_intersect)

    p_many = sub.add_parser("intersect-many", help="intersect a list of parabolic subgroups")
    p_many.add_argument("graph")
    p_many.add_argument("--group", action="append", default=[], help="`<conjugator>|<support>`, repeatable")
    p_many.add_argument("--trace", action="store_true")
    _add_common(p_many)
    p_many.set_defaults(func=cmd_intersect_many)

    p_kernel = sub.add_parser("kernel", help="show the graph presenting the kernel of the retraction onto a vertex")
    p_kernel.add_argument("graph")
    p_kernel.add_argument("--vertex", required=True)
    p_kernel.add_argument("--rewrite", default="", help="word to rewrite into the kernel graph")
    _add_common(p_kernel)
    p_kernel.set_defaults(func=cmd_kernel)

    p_retract = sub.add_parser("retract", help="retraction image of a word")
    p_retract.add_argument("graph")
    p_retract.add_argument("word")
    p_retract.add_argument("--support", default="")
    _add_common(p_retract)
    p_retract.set_defaults(func=cmd_retract)

    p_factor = sub.add_parser("factor", help="reduced factorization over st(x) and V - {x}")
    p_factor.add_argument("graph")
    p_factor.add_argument("word")
    p_factor.add_argument("--vertex", required=True)
    _add_common(p_factor)
    p_factor.set_defaults(func=cmd_factor)

    p_covertex = sub.add_parser("covertex", help="free basis letters in the kernel of the retraction off a vertex")
    p_covertex.add_argument("graph")
    p_covertex.add_argument("word")
    p_covertex.add_argument("--vertex", required=True)
    _add_common(p_covertex)
    p_covertex.set_defaults(func=cmd_covertex)

    p_selftest = sub.add_parser("selftest", help="compare the solver with the brute-force oracle")
    p_selftest.add_argument("--seed", type=int)
    p_selftest.add_argument("--vertices", type=int)
    p_selftest.add_argument("--len", type=int)
    p_selftest.add_argument("--cases", type=int)
    _add_common(p_selftest)
    p_selftest.set_defaults(func=cmd_selftest)

    p_cfg = sub.add_parser("config-path", help="print the config file location")
    _add_common(p_cfg)
    p_cfg.set_defaults(func=cmd_config_path)

    return p


def main(argv: list[str] | None = None) -> int:
    raw_argv = list(argv) if argv is not None else sys.argv[1:]
    args = build_parser().parse_args(raw_argv)
    try:
        args.settings = setup(args)
        log.info("%s started", args.cmd)
        code = args.func(args)
        log.info("%s finished with exit code %d", args.cmd, code)
        return code
    except Exception as exc:
        hint = cli_error_hint(str(exc))
        out: dict[str, object] = {"ok": False, "error": str(exc)}
        if isinstance(exc, ArtinError):
            out["code"] = exc.code
        if hint:
            out["hint"] = hint
        print_json(out)
        return 1


if __name__ == "__main__":
    sys.exit(main())
