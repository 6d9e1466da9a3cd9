"""Command-line front end.

Exit status: 0 all claims pass, 1 some claim failed, 2 usage/parse/I-O
error, 3 a cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import cayley, structure, verifier
from .corpus import resolve_gens
from .dsl import parse_corpus, parse_group_spec
from .errors import CayleyLabError, FormatError, LimitError, ParseError, PreconditionError
from .groups import DEFAULT_ORDER_CAP, construct
from .serialize import TOOL_VERSION, report_dict, serialize, to_jsonable

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    format: str = "text"
    cap_elements: int = DEFAULT_ORDER_CAP
    cap_power: int = cayley.POWER_SET_CAP
    cap_subgroups: int = structure.SUBGROUP_CAP
    seed: int = 0
    output: str | None = None
    threads: int = 1

    def __post_init__(self):
        if min(self.cap_elements, self.cap_power, self.cap_subgroups) <= 0:
            raise ValueError("caps must be positive")


def _positive(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _parse_range(text):
    if ".." in text:
        a, b = text.split("..", 1)
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in text.split(",")]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--output", help="write to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--cap-elements", type=_positive, default=None)
    common.add_argument("--cap-power", type=_positive, default=cayley.POWER_SET_CAP)
    common.add_argument("--cap-subgroups", type=_positive, default=structure.SUBGROUP_CAP)

    p = argparse.ArgumentParser(prog="cayleylab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=TOOL_VERSION)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("diameter", parents=[common], help="ball profile and diameter")
    d.add_argument("--group", required=True)
    d.add_argument("--gens", default="standard")

    g = sub.add_parser("growth", parents=[common], help="exact power sizes and growth witness")
    g.add_argument("--group", required=True)
    g.add_argument("--gens", default="standard")
    g.add_argument("--max-n", type=_positive, default=10)
    g.add_argument("--theta", type=Fraction, default=Fraction(5))
    g.add_argument("--delta", type=Fraction, default=Fraction(1, 4))

    s = sub.add_parser("structure", parents=[common], help="subgroups, classes, best abelian section")
    s.add_argument("--group", required=True)
    s.add_argument("--subgroups", action="store_true")
    s.add_argument("--classes", action="store_true")
    s.add_argument("--best-section", action="store_true")

    v = sub.add_parser("verify", parents=[common], help="check one claim on one instance")
    v.add_argument("--claim", required=True, choices=verifier.CLAIMS)
    v.add_argument("--group", required=True)
    v.add_argument("--gens", default="standard")
    v.add_argument("--theta", type=Fraction, default=Fraction(5))
    v.add_argument("--delta", type=Fraction, default=Fraction(1, 4))
    v.add_argument("--index-cap", type=_positive, default=2)

    w = sub.add_parser("sweep", parents=[common], help="run claims over a corpus file")
    w.add_argument("--corpus", required=True)
    w.add_argument("--claims", default=",".join(c for c in verifier.CLAIMS if c != "SCALING"))
    w.add_argument("--samples", type=_positive, default=8)

    c = sub.add_parser("scaling", parents=[common], help="diameters along a family")
    c.add_argument("--family", required=True, type=str.upper, choices=sorted(verifier.FAMILIES))
    c.add_argument("--range", required=True, dest="params", type=_parse_range,
                   help="a..b or a comma list")
    return p


def _emit(cfg, payload: bytes):
    if cfg.output:
        Path(cfg.output).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def _group_and_gens(args):
    G = construct(parse_group_spec(args.group))
    return G, resolve_gens(G, args.gens)


def _cmd_diameter(args, cfg):
    G, S = _group_and_gens(args)
    prof = cayley.ball_profile(G, S)
    if cfg.format == "text":
        _emit(cfg, f"{'INFINITE' if prof.diameter == cayley.INFINITE else prof.diameter}\n".encode())
    else:
        _emit(cfg, serialize(prof, cfg.format))
    return EXIT_OK


def _cmd_growth(args, cfg):
    G, S = _group_and_gens(args)
    prof = cayley.power_profile(G, S, args.max_n, cfg.cap_power)
    report = verifier.check_bt_hypothesis(G, S, args.theta, args.delta)
    _emit(cfg, serialize([prof, report], cfg.format))
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_structure(args, cfg):
    G = construct(parse_group_spec(args.group))
    out = {"group": G.id, "order": G.order}
    show_all = not (args.subgroups or args.classes or args.best_section)
    if args.subgroups or show_all:
        subs = structure.all_subgroups(G, cfg.cap_subgroups)
        out["subgroups"] = [
            {"order": H.order, "index": H.index, "normal": H.is_normal,
             "abelianization": H.abelianization_order,
             "class": H.nilpotency_class if H.nilpotency_class is not None else "NOT_NILPOTENT",
             "generators": [k.hex() for k in H.generator_keys]} for H in subs]
    if args.classes or show_all:
        cd = structure.conjugacy_classes(G)
        out["classes"] = {"count": cd.count, "sizes": list(cd.sizes),
                          "representatives": [k.hex() for k in cd.representatives]}
    if args.best_section or show_all:
        best, H = structure.best_abelian_section(G)
        out["best_section"] = {"max_ab": best, "order": H.order,
                               "class": H.nilpotency_class,
                               "generators": [k.hex() for k in H.generator_keys],
                               "invariants": structure.abelian_invariants(H)}
    if cfg.format == "text":
        lines = [f"{G.id}: order {G.order}"]
        for key, val in out.items():
            if key not in ("group", "order"):
                lines.append(f"{key}: {val}")
        _emit(cfg, ("\n".join(lines) + "\n").encode())
    else:
        _emit(cfg, serialize(out, "json"))
    return EXIT_OK


def _cmd_verify(args, cfg):
    G = construct(parse_group_spec(args.group))
    claim = args.claim
    if claim == "SCALING":
        raise PreconditionError("use the scaling subcommand for SCALING")
    if claim in ("CONJ_BOUND", "NILP2"):
        reports = [verifier.check_conjugacy_bound(G) if claim == "CONJ_BOUND"
                   else verifier.check_lemma_nilp2(G)]
    elif claim == "NORMAL_SET" and args.gens == "standard":
        reports = [verifier.check_normal_set(G, S) for S in verifier.class_sets(G)]
    else:
        S = resolve_gens(G, args.gens)
        reports = verifier.run_claim(claim, G, [S], args.theta, args.delta, args.index_cap)
    _emit(cfg, serialize(reports if len(reports) != 1 else reports[0], cfg.format))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _sweep_one(job):
    entry, claims, seed, samples = job
    return verifier.run_corpus([entry], claims, seed, samples)


def _cmd_sweep(args, cfg):
    try:
        entries = parse_corpus(Path(args.corpus).read_text())
    except OSError as exc:
        raise FormatError(f"cannot read corpus {args.corpus}: {exc}") from None
    claims = [c.strip().upper() for c in args.claims.split(",") if c.strip()]
    bad = [c for c in claims if c not in verifier.CLAIMS]
    if bad:
        raise ParseError(f"unknown claim(s) {bad}")
    jobs = [(e, claims, cfg.seed, args.samples) for e in entries]
    if cfg.threads > 1 and len(jobs) > 1:
        from multiprocessing import Pool
        with Pool(cfg.threads) as pool:
            parts = pool.map(_sweep_one, jobs)
    else:
        parts = [_sweep_one(j) for j in jobs]
    reports = [r for part in parts for r in part]
    summary = verifier.summarize(reports)
    if cfg.format == "json":
        doc = {"tool-version": TOOL_VERSION, "seed": cfg.seed, "claims": claims,
               "summary": summary, "reports": to_jsonable(reports)}
        _emit(cfg, (json.dumps(doc, sort_keys=True, indent=1) + "\n").encode())
    else:
        text = serialize(reports, "text").decode()
        text += f"summary: {summary}\n"
        _emit(cfg, text.encode())
    if summary["limit_errors"]:
        return EXIT_CAP
    return EXIT_OK if summary["failed"] == 0 else EXIT_FAIL


def _cmd_scaling(args, cfg):
    rows = verifier.scaling_experiment(args.family, args.params)
    report = verifier.check_scaling(args.family, rows)
    if cfg.format == "json":
        _emit(cfg, serialize({"rows": [r.__dict__ for r in rows],
                              "report": report_dict(report)}, "json"))
    else:
        _emit(cfg, serialize(rows, "csv"))
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {"diameter": _cmd_diameter, "growth": _cmd_growth, "structure": _cmd_structure,
            "verify": _cmd_verify, "sweep": _cmd_sweep, "scaling": _cmd_scaling}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = RunConfig(args.format, args.cap_elements or DEFAULT_ORDER_CAP, args.cap_power,
                    args.cap_subgroups, args.seed, args.output, args.threads)
    saved = os.environ.get("CAYLEYLAB_CAP_ELEMENTS")
    if args.cap_elements:
        # groups read the cap at construction; sweep workers inherit it
        os.environ["CAYLEYLAB_CAP_ELEMENTS"] = str(args.cap_elements)
    try:
        return COMMANDS[args.command](args, cfg)
    except LimitError as exc:
        print(f"cayleylab: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (CayleyLabError, ValueError) as exc:
        print(f"cayleylab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if saved is None:
            os.environ.pop("CAYLEYLAB_CAP_ELEMENTS", None)
        else:
            os.environ["CAYLEYLAB_CAP_ELEMENTS"] = saved


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
