"""Command-line front end.

Every command builds a :class:`Report` and prints it as a text table or as
``key=value`` records. Exit status: 0 when every verdict passes, 1 on a
verification failure, 2 on usage or input errors.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field
from importlib.resources import files
from pathlib import Path

import click

from . import formulas as fm
from . import posetcode as pc
from . import prooftree as pt
from . import rules as rl
from . import suite as st
from . import witness as wt
from .errors import IndepError
from .fileformats import parse_function_set, parse_triple, parse_triples
from .funcset import FunctionSet
from .independence import prob_indep, prob_scan_table, scan_table, set_indep, uniform_measure
from .triples import DEFAULT_MAX_ATTRS, TripleSet, trivial_mask

PASSING = {"holds", "pass", "ok", "accepted", "none-found", "built", "incomparable", "disjoint", "found", "confirmed", "derived", "info"}


@dataclass(frozen=True)
class Record:
    rule: str
    instance: str
    verdict: str
    witness: str = "-"

    @property
    def passed(self) -> bool:
        return self.verdict in PASSING


def _quote(v: str) -> str:
    return json.dumps(v, ensure_ascii=False) if (not v or any(c in v for c in ' "=\t')) else v


@dataclass
class Report:
    command: str
    records: list[Record] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, rule: str, instance: str, verdict: str, witness: str = "-"):
        self.records.append(Record(rule, instance, verdict, witness))

    def render_records(self) -> str:
        lines = [" ".join(f"{k}={_quote(getattr(r, k))}" for k in ("rule", "instance", "verdict", "witness")) for r in self.records]
        return "\n".join(lines)

    def render_text(self) -> str:
        out = [self.command]
        if self.records:
            wr = max(len(r.rule) for r in self.records)
            wi = max(len(r.instance) for r in self.records)
            for r in self.records:
                line = f"  {r.verdict.upper():<12} {r.rule:<{wr}}  {r.instance:<{wi}}"
                if r.witness != "-":
                    line += f"  {r.witness}"
                out.append(line.rstrip())
        out += [f"  {n}" for n in self.notes]
        out.append(f"  result: {'PASS' if self.ok else 'FAIL'} ({self.seconds:.2f}s)")
        return "\n".join(out)


def _emit(ctx: click.Context, report: Report):
    fmt = ctx.find_root().params.get("format") or ctx.obj.get("format", "text")
    click.echo(report.render_records() if fmt == "records" else report.render_text())
    ctx.exit(0 if report.ok else 1)


def _read(path: str) -> str:
    """A file path, or the name of a bundled data file."""
    p = Path(path)
    if p.exists():
        return p.read_text()
    bundled = files("indepkit").joinpath("data").joinpath(path)
    if bundled.is_file():
        return bundled.read_text()
    raise click.BadParameter(f"no such file: {path}")


def _load_set(path: str) -> FunctionSet:
    return parse_function_set(_read(path))


class _Group(click.Group):
    """Turns library input errors into usage errors (exit 2)."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except IndepError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(2)


def _timed(command: str):
    def deco(fn):
        def wrapper(*args, **kwargs):
            ctx = click.get_current_context()
            start = time.perf_counter()
            report = fn(*args, **kwargs)
            report.seconds = time.perf_counter() - start
            _emit(ctx, report)

        wrapper.__name__ = fn.__name__
        wrapper.__doc__ = fn.__doc__
        return wrapper

    return deco


@click.group(cls=_Group)
@click.option("--format", "format", type=click.Choice(["text", "records"]), default="text", help="Report rendering.")
@click.pass_context
def cli(ctx, format):
    """Verify set and probabilistic independence claims on finite models."""
    ctx.ensure_object(dict)
    ctx.obj["format"] = format


# -- indep -----------------------------------------------------------------------------------


@cli.group(cls=_Group)
def indep():
    """Evaluate independence triples on a function set."""


@indep.command("eval")
@click.option("--set", "set_path", required=True, help="Function-set file.")
@click.option("--triple", required=True, help='Triple as "X | Y | Z".')
@click.option("--prob", is_flag=True, help="Use the uniform measure on the set.")
@_timed("indep eval")
def indep_eval(set_path, triple, prob):
    """Exit 0 iff the triple holds."""
    sigma = _load_set(set_path)
    t = parse_triple(sigma.attrs, triple)
    held = prob_indep(uniform_measure(sigma), t) if prob else set_indep(sigma, t)
    rep = Report("indep eval")
    rep.add("prob" if prob else "set", str(t), "holds" if held else "fails")
    return rep


@indep.command("scan")
@click.option("--set", "set_path", required=True)
@click.option("--prob", is_flag=True)
@click.option("--max-attrs", default=DEFAULT_MAX_ATTRS, show_default=True)
@_timed("indep scan")
def indep_scan(set_path, prob, max_attrs):
    """List every nontrivial triple that holds (one orientation each)."""
    sigma = _load_set(set_path)
    table = prob_scan_table(uniform_measure(sigma), max_attrs) if prob else scan_table(sigma, max_attrs)
    held = TripleSet.from_table(sigma.attrs, table & ~trivial_mask(len(sigma.attrs)))
    rep = Report("indep scan")
    for t in held:
        rep.add("prob" if prob else "set", str(t), "holds")
    rep.notes.append(f"{len(held)} nontrivial triples hold")
    return rep


# -- rules -----------------------------------------------------------------------------------


@cli.group(cls=_Group)
def rules():
    """Check rules against function sets or triple families."""


@rules.command("check")
@click.option("--rule", "rule_names", multiple=True, required=True, help="Rule name; repeatable.")
@click.option("--set", "set_path", help="Function-set file (semantic check).")
@click.option("--triples", "triples_path", help="Triple family file (closure check).")
@click.option("--prob", is_flag=True, help="Check the uniform measure instead of the set.")
@click.option("--max-attrs", default=DEFAULT_MAX_ATTRS, show_default=True)
@click.option("--limit", type=int, default=None, help="Stop after this many violations per rule.")
@_timed("rules check")
def rules_check(rule_names, set_path, triples_path, prob, max_attrs, limit):
    """Exit 1 if any instance has true premises and a false conclusion."""
    if bool(set_path) == bool(triples_path):
        raise click.UsageError("give exactly one of --set or --triples")
    schemas = [rl.get_rule(r) for r in rule_names]
    rep = Report("rules check")
    for r in schemas:
        if triples_path:
            attrs, ts = parse_triples(_read(triples_path))
            viol = rl.check_closure(TripleSet(attrs, ts), [r], max_attrs, limit)
        elif prob:
            viol = rl.check_rule_prob(r, uniform_measure(_load_set(set_path)), max_attrs, limit)
        else:
            viol = rl.check_rule_semantic(r, _load_set(set_path), max_attrs, limit)
        for v in viol:
            binding = " ".join(f"{k}={''.join(a) or '-'}" for k, a in v.binding().items())
            rep.add(r.name, v.render(), "violated", binding)
        if not viol:
            rep.add(r.name, "all instances", "pass")
    return rep


@rules.command("search")
@click.option("--rule", required=True)
@click.option("--max-attrs", default=4, show_default=True)
@click.option("--max-members", default=4, show_default=True)
@click.option("--budget", type=int, default=None, help="Candidates to examine before giving up.")
@click.option("--start", default=0, show_default=True, help="Resume cursor from an earlier search.")
@_timed("rules search")
def rules_search(rule, max_attrs, max_members, budget, start):
    """Exit 1 if a counterexample to the rule is found."""
    res = rl.search(rule, max_attrs, max_members, budget, start)
    rep = Report("rules search")
    name = rl.get_rule(rule).name
    if res.sigma is not None:
        rows = " ".join("".join(str(v) for v in r) for r in res.sigma.rows)
        rep.add(name, f"{','.join(res.sigma.attrs.names)}: {rows}", "counterexample", res.violation.render())
    else:
        exhausted = budget is not None and res.examined >= budget
        rep.add(name, f"max-attrs={max_attrs} max-members={max_members}", "none-found", "budget exhausted" if exhausted else "-")
    rep.notes.append(f"examined {res.examined}, resume with --start {res.cursor}")
    return rep


# -- witness -----------------------------------------------------------------------------------


@cli.group(cls=_Group)
def witness():
    """Build and verify broken-loop witnesses."""


@witness.command("build")
@click.option("--n", "n", type=int, required=True)
@click.option("--i", "i", type=int, required=True)
@_timed("witness build")
def witness_build(n, i):
    plan = wt.build_witness(wt.LoopSpec(n, i))
    rep = Report("witness build")
    for label, layer in zip(plan.labels, plan.layers.layers):
        rep.add("layer", label, "built", f"{len(layer)} members")
    rep.notes.append(f"{len(plan)} layers over {' '.join(plan.spec.attrs.names)}")
    return rep


@witness.command("verify")
@click.option("--n", "n", type=int, required=True)
@click.option("--i", "i", type=int, required=True)
@click.option("--drop", default=None, help="Remove the layer with this label first.")
@click.option("--max-attrs", default=DEFAULT_MAX_ATTRS, show_default=True)
@_timed("witness verify")
def witness_verify(n, i, drop, max_attrs):
    """Exit 0 iff the held nontrivial triples are exactly the preserved loop."""
    plan = wt.build_witness(wt.LoopSpec(n, i))
    if drop:
        plan = plan.without(drop)
    report = wt.verify_witness(plan, max_attrs=max_attrs)
    rep = Report("witness verify")
    for t in report.spurious:
        rep.add("spurious", str(t), "fails")
    for t in report.missing:
        rep.add("missing", str(t), "fails")
    if report.ok:
        rep.add("witness", f"n={n} i={i}", "ok", f"{len(report.held)} preserved triples")
    rep.notes.append(report.summary())
    return rep


# -- prooftree -----------------------------------------------------------------------------------


@cli.group(cls=_Group)
def prooftree():
    """Check and search universal proof trees."""


@prooftree.command("check")
@click.option("--example", type=click.Choice(sorted(pt.EXAMPLES)), required=True)
@click.option("--triple", default=None, help="Check this conclusion instead of the example's.")
@_timed("prooftree check")
def prooftree_check(example, triple):
    """Exit 0 iff the example's tree derives the conclusion."""
    ex = pt.EXAMPLES[example]()
    concl = parse_triple(ex.root.attrs, triple) if triple else ex.conclusion
    res = pt.check_derivation(ex.premises, concl, ex.root)
    rep = Report("prooftree check")
    rep.add(ex.name, str(concl), "accepted" if res.ok else "rejected", res.reason or "-")
    rep.notes.append("rows: " + " ".join(ex.rendered()))
    return rep


@prooftree.command("search")
@click.option("--triples", "triples_path", required=True, help="Premise family file.")
@click.option("--max-nodes", default=4, show_default=True)
@click.option("--triple", default=None, help="Exit 0 iff this triple is derived.")
@_timed("prooftree search")
def prooftree_search(triples_path, max_nodes, triple):
    attrs, prem = parse_triples(_read(triples_path))
    found = pt.search_derivations(prem, max_nodes)
    rep = Report("prooftree search")
    premset = TripleSet(attrs, prem)
    if triple:
        t = parse_triple(attrs, triple)
        rep.add("target", str(t), "found" if t in found else "not-found")
    for t in found:
        rep.add("premise" if t in premset else "derived", str(t), "info")
    return rep


# -- poset -----------------------------------------------------------------------------------------


@cli.group(cls=_Group)
def poset():
    """Multiset codings of finite orders."""


@poset.command("antichain")
@click.option("--n", "n", type=int, required=True)
@_timed("poset antichain")
def poset_antichain(n):
    """Exit 0 iff the 2^n labels are pairwise incomparable."""
    labs = pc.encode_antichain(n)
    rep = Report("poset antichain")
    for k, lab in enumerate(labs):
        clash = [str(o) for o in labs if o != lab and (pc.label_leq(o, lab) or pc.label_leq(lab, o))]
        rep.add(f"code {k}", str(lab), "comparable" if clash else "incomparable", ", ".join(clash) or "-")
    return rep


@poset.command("pyramid")
@click.option("--n", "n", type=int, required=True)
@click.option("--extend/--no-extend", default=True, help="Also run the extension argument.")
@_timed("poset pyramid")
def poset_pyramid(n, extend):
    pyr = pc.build_pyramid(n)
    rep = Report("poset pyramid")
    for k in range(n):
        rep.add(f"level {k}", "  ".join(str(nd.label) for nd in pyr.level(k)), "built")
    same = pc.induced_order(list(pyr.nodes)).same_as(pyr.intended)
    rep.add("order", "induced vs intended", "ok" if same else "mismatch")
    if extend and n >= 3:
        er = pc.check_extension_failure(n)
        via = ", ".join(f"{nid}={lab}" for nid, lab in er.second.spurious) or "-"
        rep.add("extension", f"first {er.first.label}, second {er.second.label}", "confirmed" if er.failure_confirmed else "not-confirmed", via)
        rep.notes.append(f"{len(er.alternatives)} alternative labels out of {er.searched} searched")
    return rep


def _parse_order(spec: str) -> pc.IntendedOrder:
    kind, _, arg = spec.partition(":")
    if kind == "antichain":
        return pc.antichain_order(int(arg))
    if kind == "chain":
        return pc.chain_order(int(arg))
    if kind == "not-isomorph":
        return pc.not_isomorph_order()
    if kind == "family":
        return pc.subset_code_order(arg.split(","))
    raise click.BadParameter(f"unknown order {spec!r} (antichain:N, chain:N, not-isomorph, family:abc,ab,...)")


@poset.command("minlabel")
@click.option("--order", "order_spec", required=True, help="antichain:N, chain:N, not-isomorph or family:S1,S2,...")
@click.option("--mode", type=click.Choice(["sets", "multisets"]), default="sets", show_default=True)
@click.option("--max-atoms", default=6, show_default=True)
@_timed("poset minlabel")
def poset_minlabel(order_spec, mode, max_atoms):
    """Smallest atom count that labels the order exactly."""
    order = _parse_order(order_spec)
    k = pc.min_label_bruteforce(order, mode, max_atoms)
    rep = Report("poset minlabel")
    if k is None:
        rep.add(mode, order_spec, "not-found", f"none with <= {max_atoms} atoms")
    else:
        lab = next(pc.iter_labelings(order, mode, k))
        shown = " ".join(f"{v}={pc.render_label(l)}" for v, l in lab.items())
        rep.add(mode, order_spec, "found", f"{k} atoms: {shown}")
    return rep


# -- formulas ----------------------------------------------------------------------------------------


@cli.group(cls=_Group)
def formulas():
    """Pairwise-disjoint formula families."""


@formulas.command("family")
@click.option("--n", "n", type=int, default=32, show_default=True, help="Family size.")
@_timed("formulas family")
def formulas_family(n):
    fam = fm.phi_family(n)
    rep = Report("formulas family")
    for i, f in enumerate(fam):
        clash = [j for j, g in enumerate(fam) if j != i and not fm.conj_disjoint(f, g)]
        rep.add(f"phi_{i}", str(f), "overlaps" if clash else "disjoint", ",".join(map(str, clash)) or "-")
    return rep


# -- suite -----------------------------------------------------------------------------------------


@cli.group(cls=_Group)
def suite():
    """Acceptance suites."""


@suite.command("run")
@click.option("--only", default=None, help="Comma-separated check numbers.")
@click.option("--seed", default=st.DEFAULT_SEED, show_default=True)
@click.option("--workers", default=1, show_default=True, help="Process-pool size.")
@_timed("suite run")
def suite_run(only, seed, workers):
    """Run the acceptance checks; exit 0 iff all pass within their limits."""
    try:
        numbers = [int(k) for k in only.split(",")] if only else None
    except ValueError:
        raise click.BadParameter("--only takes comma-separated integers") from None
    if numbers and any(k not in st.CHECKS for k in numbers):
        raise click.BadParameter(f"checks are numbered 1..{len(st.CHECKS)}")
    rep = Report("suite run")
    for res in st.run_suite(numbers, seed, workers):
        verdict = "pass" if res.passed else "fail"
        if res.passed and not res.in_time:
            verdict = "slow"
        rep.add(f"check {res.number}", res.name, verdict, res.detail)
    return rep


def main(argv=None):
    return cli.main(args=argv if argv is not None else sys.argv[1:], prog_name="indepkit")


if __name__ == "__main__":
    main()
