"""Command-line front end.

Exit codes: 0 ok, 1 usage, 2 parse, 3 group larger than the cap,
4 mathematical precondition violated (H not in G, missing M(G)=0 assertion...).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import obstruction as ob
from .fixtures import (
    INDEX_NAMES,
    SYL2_NAMES,
    FixtureError,
    export_fixtures,
    load_subgroup_table,
    verify_fixtures,
)
from .permcore import (
    DEFAULT_CAP,
    GroupTooLarge,
    NotInGroup,
    Permutation,
    PermutationParseError,
    Subgroup,
    fingerprint,
    group_from_generators,
    read_generator_file,
    subgroup_from_generators,
    sylow_p,
)

SCHEMA_VERSION = "1"
M11_SCHUR = "M(M11) = 0: GroupCohomology(MathieuGroup(11), 3) = [ ] in GAP"

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CAP, EXIT_MATH = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- inputs -----------------------------------------------------------------

class Context:
    """Resolved group, subgroup and candidate decomposition groups."""

    def __init__(self, args):
        self.args = args
        self.fixture = None
        if args.fixture:
            if args.fixture.lower() != "m11":
                raise UsageError(f"unknown fixture {args.fixture!r} (only 'm11')")
            if args.group:
                raise UsageError("--fixture and --group are exclusive")
            self.fixture = load_subgroup_table(args.cap)
            self.group = self.fixture.group
        elif args.group:
            gens = read_generator_file(_read(args.group))
            if not gens:
                raise PermutationParseError(f"{args.group}: no generators")
            self.group = group_from_generators(gens, cap=args.cap)
        else:
            raise UsageError("one of --fixture or --group is required")
        self.schur = args.schur_trivial or (M11_SCHUR if self.fixture else None)

    def label(self, S: Subgroup) -> str:
        """GAP-style label; repeated fixture labels get their (1)/(2) suffix."""
        if self.fixture:
            for c in self.fixture.classes:
                if c.subgroup == S:
                    shared = sum(d.label == c.label for d in self.fixture.classes) > 1
                    return c.name if shared else c.label
        return fingerprint(S).label

    def subgroup_arg(self, text: str) -> Subgroup:
        """A fixture class key, or a generator file of elements of G."""
        if self.fixture and not os.path.isfile(text):
            try:
                return self.fixture.lookup(text).subgroup
            except KeyError as e:
                raise UsageError(str(e.args[0])) from None
        gens = read_generator_file(_read(text))
        if any(g.degree > self.group.degree for g in gens):
            raise NotInGroup(f"{text}: moves points beyond degree {self.group.degree}")
        gens = [Permutation(tuple(g.images) + tuple(range(g.degree, self.group.degree)))
                for g in gens]
        return subgroup_from_generators(self.group, gens)

    def subgroup(self) -> Subgroup:
        key = self.args.cls or self.args.subgroup
        if not key:
            raise UsageError("a subgroup is required (--class or --subgroup)")
        if self.args.cls and self.args.subgroup:
            raise UsageError("--class and --subgroup are exclusive")
        if self.args.cls and not self.fixture:
            raise UsageError("--class needs --fixture")
        return self.subgroup_arg(key)

    def places(self) -> list[Subgroup]:
        return [self.subgroup_arg(p) for p in self.args.place or []]

    def classes(self):
        """Candidate decomposition groups: all fixture classes, or the --place inputs."""
        if self.fixture and not self.args.place:
            return ([c.subgroup for c in self.fixture.classes],
                    [c.cid for c in self.fixture.classes],
                    [self.label(c.subgroup) for c in self.fixture.classes])
        subs = self.places()
        return subs, list(range(1, len(subs) + 1)), [self.label(s) for s in subs]


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise PermutationParseError(f"cannot read {path}: {e.strerror}") from None


# -- serialization ------------------------------------------------------------

def subgroup_json(S: Subgroup, label: str) -> dict:
    return {"order": S.order, "generators": [str(p) for p in S.gen_perms()], "label": label}


def _inv(v) -> list[int]:
    return [int(d) for d in v]


def analyze_json(ctx: Context, rep: ob.ObstructionReport) -> dict:
    t, f = rep.counts()
    by_id = {c.cid: c for c in rep.per_class}
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "analyze",
        "group": subgroup_json(rep.group.whole, ctx.label(rep.group.whole)),
        "subgroup": subgroup_json(rep.subgroup, ctx.label(rep.subgroup)),
        "ker_psi1": _inv(rep.ker_psi1.invariants),
        "dnr": _inv(rep.dnr.invariants),
        "unramified_obstruction": _inv(rep.unramified_obs),
        "h1": None if rep.h1_invariants is None else _inv(rep.h1_invariants),
        "schur_assertion": ctx.schur,
        "classes": [{
            "id": c.cid,
            "label": c.label,
            "subgroup": subgroup_json(c.gv, c.label),
            "verdict": c.verdict,
            "uniform": c.uniform,
            "orbit_reps": len(c.orbit),
            "orbit_true": sum(o.full for o in c.orbit),
        } for c in rep.per_class],
        "counts": {"true": t, "false": f},
        "minimal_true": [{"id": i, "label": by_id[i].label} for i in rep.minimal_true],
    }


def scenario_json(ctx: Context, H: Subgroup, places: Sequence[Subgroup],
                  rep: ob.ScenarioReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "scenario",
        "group": subgroup_json(ctx.group.whole, ctx.label(ctx.group.whole)),
        "subgroup": subgroup_json(H, ctx.label(H)),
        "places": [subgroup_json(P, ctx.label(P)) for P in places],
        "strict": rep.strict,
        "obstruction": _inv(rep.obs_invariants),
        "hnp_holds": rep.hnp_holds,
        "sha": _inv(rep.sha_invariants),
        "a_t": _inv(rep.at_invariants),
        "h1": _inv(rep.h1_invariants),
        "tamagawa": str(rep.tamagawa),
        "schur_assertion": ctx.schur,
    }


def _inv_md(v) -> str:
    return "0" if not v else " x ".join(f"Z/{d}Z" for d in v)


def analyze_md(d: dict) -> str:
    h1 = "n/a (no M(G)=0 assertion)" if d["h1"] is None else _inv_md(d["h1"])
    out = [f"# First obstruction for H = {d['subgroup']['label']} "
           f"(order {d['subgroup']['order']}) in G = {d['group']['label']}", "",
           f"- Ker psi1: {_inv_md(d['ker_psi1'])}",
           f"- Dnr: {_inv_md(d['dnr'])}",
           f"- H^1: {h1}",
           f"- decomposition-group classes: {d['counts']['true']} true, {d['counts']['false']} false",
           "- minimal true classes: " + (", ".join(m["label"] for m in d["minimal_true"]) or "none"),
           "", "| id | Gv | order | verdict | orbit reps | uniform |",
           "|---|---|---|---|---|---|"]
    for c in d["classes"]:
        out.append(f"| {c['id']} | {c['label']} | {c['subgroup']['order']} | "
                   f"{str(c['verdict']).lower()} | {c['orbit_reps']} | {str(c['uniform']).lower()} |")
    return "\n".join(out) + "\n"


def minimal_md(d: dict) -> str:
    names = ", ".join(m["label"] for m in d["minimal_true"]) or "none"
    return f"Minimal true decomposition groups for H = {d['subgroup']['label']}: {names}\n"


def scenario_md(d: dict) -> str:
    places = ", ".join(p["label"] for p in d["places"]) or "unramified only"
    return "\n".join([
        f"# Scenario for H = {d['subgroup']['label']}, places: {places}", "",
        f"- HNP holds: {'yes' if d['hnp_holds'] else 'no'}",
        f"- obstruction{' (strict, Dnr excluded)' if d['strict'] else ''}: {_inv_md(d['obstruction'])}",
        f"- Sha(T): {_inv_md(d['sha'])}",
        f"- A(T): {_inv_md(d['a_t'])}",
        f"- H^1: {_inv_md(d['h1'])}",
        f"- Tamagawa number: {d['tamagawa']}",
    ]) + "\n"


def tables_json(ctx: Context, jobs: int) -> dict:
    fs = ctx.fixture
    h1s = ob.h1_table(fs.group, [c.subgroup for c in fs.proper], ctx.schur, jobs=jobs)
    rows = []
    for c, h1 in zip(fs.proper, h1s):
        syl = fingerprint(sylow_p(fs.group, 2, c.subgroup)).label
        rows.append({"id": c.cid, "H": ctx.label(c.subgroup), "syl2": SYL2_NAMES.get(syl, syl),
                     "order": c.subgroup.order, "index": fs.group.order // c.subgroup.order,
                     "h1": _inv(h1)})
    return {"schema_version": SCHEMA_VERSION, "kind": "tables",
            "table1": [r for r in rows if not r["h1"]],
            "table2": [r for r in rows if r["h1"]],
            "schur_assertion": ctx.schur}


def tables_md(d: dict) -> str:
    head = ["| H | Syl2(H) | \\|H\\| | n | H1 |", "|---|---|---|---|---|"]
    out = []
    for n, key, what in ((1, "table1", "H^1 = 0"), (2, "table2", "H^1 = Z/2Z")):
        out += [f"Table {n}: proper subgroups H of G with {what}", ""] + head
        for r in d[key]:
            out.append(f"| {r['H']} | {r['syl2']} | {r['order']} | {r['index']} | "
                       f"{'Z/2Z' if r['h1'] == [2] else _inv_md(r['h1'])} |")
        out.append("")
    pairs = "; ".join(f"{k} = {v}" for k, v in INDEX_NAMES.items())
    out.append(f"Names follow GAP's StructureDescription; index-based equivalents: {pairs}. "
               "Superscripts (1), (2) separate non-conjugate classes with the same structure.")
    return "\n".join(out) + "\n"


# -- verbs --------------------------------------------------------------------

def _analysis(ctx: Context):
    H = ctx.subgroup()
    subs, ids, labels = ctx.classes()
    return ob.classify_decomposition_groups(ctx.group, H, subs, ids, labels,
                                            schur_trivial=ctx.schur, jobs=ctx.args.jobs)


def run_analyze(ctx: Context):
    d = analyze_json(ctx, _analysis(ctx))
    return d, analyze_md


def run_minimal(ctx: Context):
    full = analyze_json(ctx, _analysis(ctx))
    d = {"schema_version": SCHEMA_VERSION, "kind": "minimal"}
    d.update((k, full[k]) for k in ("group", "subgroup", "minimal_true"))
    return d, minimal_md


def run_scenario(ctx: Context):
    H = ctx.subgroup()
    places = ctx.places()
    rep = ob.evaluate_scenario(ctx.group, H, places, ctx.schur, strict=ctx.args.strict)
    return scenario_json(ctx, H, places, rep), scenario_md


def run_tables(ctx: Context):
    if not ctx.fixture:
        raise UsageError("tables needs --fixture m11")
    return tables_json(ctx, ctx.args.jobs), tables_md


def run_verify(ctx: Context):
    if not ctx.fixture:
        raise UsageError("verify-fixtures needs --fixture m11")
    rep = verify_fixtures(ctx.fixture, strict=False)
    if ctx.args.export:
        os.makedirs(ctx.args.export, exist_ok=True)
        for name, text in sorted(export_fixtures(ctx.fixture).items()):
            with open(os.path.join(ctx.args.export, name), "w", encoding="utf-8") as fh:
                fh.write(text)
    d = {"schema_version": SCHEMA_VERSION, "kind": "verify", "ok": rep.ok,
         "summary": rep.summary(),
         "checks": [{"name": n, "ok": ok, "detail": det} for n, ok, det in rep.checks]}
    return d, lambda d: d["summary"] + "\n" + "".join(
        f"FAILED {c['name']}: {c['detail']}\n" for c in d["checks"] if not c["ok"])


VERBS = {"analyze": run_analyze, "minimal": run_minimal, "scenario": run_scenario,
         "tables": run_tables, "verify-fixtures": run_verify}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--fixture", metavar="NAME", help="built-in group (m11)")
    common.add_argument("--group", metavar="PATH", help="generator file for G")
    common.add_argument("--format", choices=("json", "md"),
                        help="output format (default: md for tables, json otherwise)")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum |G| to enumerate")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--schur-trivial", metavar="TEXT",
                        help="assert M(G) = 0, with provenance (implied for m11)")
    sub_opts = _Parser(add_help=False)
    sub_opts.add_argument("--class", dest="cls", metavar="ID", help="fixture class id or label")
    sub_opts.add_argument("--subgroup", metavar="PATH", help="generator file for H")
    sub_opts.add_argument("--place", action="append", metavar="PATH_OR_CLASS",
                          help="decomposition group (repeatable)")

    p = _Parser(prog="hnpobs", description="First obstruction to the Hasse norm principle")
    verbs = p.add_subparsers(dest="verb", parser_class=_Parser)
    verbs.required = True
    for name in ("analyze", "minimal"):
        verbs.add_parser(name, parents=[common, sub_opts])
    sc = verbs.add_parser("scenario", parents=[common, sub_opts])
    sc.add_argument("--strict", action="store_true", help="leave Dnr out of the reported obstruction")
    verbs.add_parser("tables", parents=[common])
    vf = verbs.add_parser("verify-fixtures", parents=[common])
    vf.add_argument("--export", metavar="DIR", help="also write fixture generator files")
    return p


def render(d: dict, fmt: str, md) -> str:
    if fmt == "json":
        return json.dumps(d, indent=2, ensure_ascii=False) + "\n"
    return md(d)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.format is None:
            args.format = "md" if args.verb == "tables" else "json"
        if args.verb in ("tables", "verify-fixtures") and not args.fixture and not args.group:
            args.fixture = "m11"
        for attr in ("cls", "subgroup", "place", "strict", "export"):
            if not hasattr(args, attr):
                setattr(args, attr, None)
        if args.cap < 1 or args.jobs < 1:
            raise UsageError("--cap and --jobs must be positive")
        ctx = Context(args)
        d, md = VERBS[args.verb](ctx)
        text = render(d, args.format, md)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PermutationParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except GroupTooLarge as e:
        print(f"group too large: {e}", file=sys.stderr)
        return EXIT_CAP
    except (NotInGroup, ob.NotASubgroup, ob.SchurAssertionMissing, FixtureError, ValueError) as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return EXIT_MATH
    sys.stdout.buffer.write(text.encode("utf-8"))
    sys.stdout.flush()
    return EXIT_OK

