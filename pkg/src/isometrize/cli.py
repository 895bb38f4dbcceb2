"""Command line front end.

Exit status: 0 when every reported verdict passes (undecided verdicts are
reported as qualified but do not fail), 2 when a checked property fails, 1 on
operational errors such as unreadable documents.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import catalog, corpus
from .covers import Development, is_development, is_star_refinement
from .document import Bundle, load_document
from .errors import (BudgetExceeded, IsometrizeError, NotHomeomorphism, ParseError, RejectedInstance, SearchBudget,
                     UnknownCommand, ValidationError)
from .gauge import (au_distance, au_oracle, crevasse_partition, gauge_axioms_check, is_proper_gauge, verify_lemma_3_4,
                    verify_sandwich, verify_theorem_3_3)
from .horizon import (family_check, family_equiregularity, family_gauge_properness, family_near_properness,
                      family_tunnel_properness, verify_theorem_3_7_family)
from .invariance import (PipelineTrace, equiregularity_check, exhaustion_decomposition, is_invariant_cover,
                         is_invariant_gauge, near_properness_check, stone_star_refine)
from .pipelines import metrize, near_properness_from_gauge, proper_metrize, proper_metrize_family, single_metrize
from .report import emit_report, plain
from .space import hypothesis_report, validate_instance
from .tunnels import (g_saturate_tunnels, is_invariant_tunnel_system, is_proper_tunnel_system, tunnel_distance,
                      validate_tunnel_system, verify_theorem_3_6, verify_theorem_3_7)
from .verdict import Status, Verdict, combine

COMMANDS = ("validate", "au", "tunnel", "check", "metrize", "proper-metrize", "single-metrize", "verify", "example")
THEOREMS = ("thm2.1", "lem3.4", "thm3.3", "thm3.6", "thm3.7", "lem4.3", "lem5.1", "prop5.2", "thm1.1", "thm1.3")
OPERATIONAL = (ParseError, ValidationError, UnknownCommand, BudgetExceeded, SearchBudget, RejectedInstance,
               NotHomeomorphism)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UnknownCommand(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="isometrize", description="Exact checks for invariant gauges and metrization pipelines.")
    p.add_argument("command", help=", ".join(COMMANDS))
    p.add_argument("target", nargs="?", help="theorem id for verify, example name for example")
    p.add_argument("--instance", metavar="PATH")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--cap", type=int, default=None, help="group enumeration cap for documents")
    p.add_argument("--format", choices=("human", "machine"), default="machine")
    p.add_argument("--emit-matrix", action="store_true")
    p.add_argument("--emit-trace", metavar="PATH")
    p.add_argument("--check", default=None, help="single property for example: " + ", ".join(catalog.CHECK_KEYS))
    p.add_argument("--count", type=int, default=None, help="corpus size for verify without an instance")
    p.add_argument("--seed", type=int, default=None)
    return p


# -- helpers ---------------------------------------------------------------------------


def _bundle(args) -> Bundle:
    if not args.instance:
        raise ValidationError("this command needs --instance PATH", witness={"field": "--instance"})
    b = load_document(args.instance)
    if args.cap is not None and b.group.generators and not b.group.windowed and b.group.cap != args.cap:
        from .space import enumerate_group

        gens = [g for g in b.group.generators if g != tuple(range(b.inst.n))]
        b = Bundle(b.inst, enumerate_group(b.inst, gens, args.cap), b.covers, b.developments, b.gauges, b.tunnels,
                   b.exhaustion, b.targets, b.family)
    return b


def _matrix(g) -> list:
    return plain(g.values)


def _write_trace(args, trace: Optional[PipelineTrace]):
    if args.emit_trace and trace is not None:
        with open(args.emit_trace, "wb") as fh:
            fh.write(emit_report({"trace": trace.as_dict()}, "machine"))
        return args.emit_trace
    return None


def _development(b: Bundle, depth: Optional[int]) -> Development:
    dev = b.first("developments")
    if depth is not None:
        dev = Development(dev.levels[:depth])
    return dev


# -- commands --------------------------------------------------------------------------


def cmd_validate(args) -> dict:
    b = _bundle(args)
    rep = validate_instance(b.inst)
    verdicts = {"instance": Verdict.of(rep.valid, rep.as_dict(), "instance invalid")}
    out = {"instance": rep, "group": {"elements": len(b.group), "complete": b.group.complete, "cap": b.group.cap}}
    if not b.inst.windowed:
        out["hypotheses"] = hypothesis_report(b.inst, b.group)
    for name, g in sorted(b.gauges.items()):
        verdicts[f"gauge:{name}"] = gauge_axioms_check(g, b.inst)
    for name, d in sorted(b.developments.items()):
        verdicts[f"development:{name}"] = is_development(d)
    for name, t in sorted(b.tunnels.items()):
        if b.gauges:
            verdicts[f"tunnels:{name}"] = validate_tunnel_system(b.first("gauges"), t)
    if b.exhaustion is not None:
        verdicts["exhaustion"] = exhaustion_decomposition(b.inst, b.exhaustion).checks
    return {"verdicts": verdicts, "outputs": out}


def cmd_au(args) -> dict:
    b = _bundle(args)
    dev = _development(b, args.depth)
    rho = au_distance(dev, b.inst.n, check=False)
    verdicts = {"development": is_development(dev), "sandwich": verify_sandwich(rho, dev),
                "axioms": gauge_axioms_check(rho, b.inst)}
    out = {"depth": dev.depth, "weights": {str(k): v for k, v in sorted(_weights(dev).items())}}
    if args.emit_matrix:
        out["matrix"] = _matrix(rho)
    return {"verdicts": verdicts, "outputs": out}


def _weights(dev):
    from .gauge import au_weights

    w = au_weights(dev)
    return {tuple(sorted(s)): v for s, v in zip(w.members, w.weights)}


def cmd_tunnel(args) -> dict:
    b = _bundle(args)
    rho, T = b.first("gauges"), b.first("tunnels")
    valid = validate_tunnel_system(rho, T)
    verdicts = {"tunnel_system": valid}
    out = {"lambda0": T.lambda0}
    if valid.failed:
        return {"verdicts": verdicts, "outputs": out}
    sigma = tunnel_distance(rho, T)
    verdicts["theorem3.6"] = verify_theorem_3_6(rho, T, sigma)
    verdicts["tunnels_proper"] = is_proper_tunnel_system(T, b.inst)
    if args.emit_matrix:
        out["matrix"] = _matrix(sigma)
    return {"verdicts": verdicts, "outputs": out}


def cmd_check(args) -> dict:
    b = _bundle(args)
    if b.family is not None:
        fam = b.family
        verdicts = {"equiregular": family_equiregularity(fam), "nearly_proper": family_near_properness(fam)}
        if all("rho" in h.aux for h in fam):
            verdicts["rho_invariant"] = family_check(fam, lambda h: is_invariant_gauge(h.group, h.aux["rho"]))
            verdicts["rho_proper"] = family_gauge_properness(fam, lambda h: h.aux["rho"])
        if all("tunnels" in h.aux for h in fam):
            verdicts["tunnels_proper"] = family_tunnel_properness(fam, lambda h: h.aux["tunnels"])
        return {"verdicts": verdicts, "outputs": {"family": fam.name, "horizons": [h.m for h in fam]}}
    eq, _ = equiregularity_check(b.inst, b.group)
    verdicts = {"equiregular": eq, "nearly_proper": near_properness_check(b.inst, b.group)}
    for name, g in sorted(b.gauges.items()):
        verdicts[f"gauge:{name}:invariant"] = is_invariant_gauge(b.group, g)
        verdicts[f"gauge:{name}:proper"] = is_proper_gauge(g, b.inst)
    for name, c in sorted(b.covers.items()):
        verdicts[f"cover:{name}:invariant"] = is_invariant_cover(b.group, c)
    for name, t in sorted(b.tunnels.items()):
        verdicts[f"tunnels:{name}:invariant"] = is_invariant_tunnel_system(b.group, t)
        verdicts[f"tunnels:{name}:proper"] = is_proper_tunnel_system(t, b.inst)
    return {"verdicts": verdicts, "outputs": {"hypotheses": hypothesis_report(b.inst, b.group)}}


def cmd_metrize(args) -> dict:
    b = _bundle(args)
    trace = PipelineTrace()
    fam = metrize(b.inst, b.group, b.targets, depth=args.depth or 4, trace=trace)
    verdicts = {f"gauge{i}:invariant": is_invariant_gauge(b.group, g) for i, g in enumerate(fam)}
    out = {"targets": [t["target"] for t in fam.tags], "separating": fam.separating()}
    if args.emit_matrix:
        out["gauges"] = [_matrix(g) for g in fam]
    return {"verdicts": verdicts, "outputs": out, "trace": _write_trace(args, trace)}


def cmd_proper_metrize(args) -> dict:
    b = _bundle(args)
    if b.family is not None:
        fm = proper_metrize_family(b.family, depth=args.depth or 3)
        verdicts = dict(fm.verdicts)
        verdicts["pipeline"] = Verdict.of(fm.succeeded, {m: getattr(r, "code", None) for m, r in fm.results.items()},
                                          "pipeline failed at some horizon")
        out = {"horizons": sorted(fm.results)}
        if args.emit_matrix and fm.succeeded:
            out["tau"] = {str(m): _matrix(r.tau) for m, r in sorted(fm.results.items())}
        return {"verdicts": verdicts, "outputs": out}
    trace = PipelineTrace()
    pm = proper_metrize(b.inst, b.group, b.exhaustion, depth=args.depth or 4, trace=trace)
    verdicts = dict(pm.verdicts)
    for i, g in enumerate(pm.family):
        verdicts[f"gauge{i}:proper"] = is_proper_gauge(g, b.inst)
        verdicts[f"gauge{i}:invariant"] = is_invariant_gauge(b.group, g)
        verdicts[f"gauge{i}:converse"] = near_properness_from_gauge(b.inst, b.group, g)
    out = {"tunnels": pm.tunnels, "crevasses": len(crevasse_partition(pm.sigma).blocks)}
    if args.emit_matrix:
        out["sigma"], out["tau"] = _matrix(pm.sigma), _matrix(pm.tau)
        out["gauges"] = [_matrix(g) for g in pm.family]
    return {"verdicts": verdicts, "outputs": out, "trace": _write_trace(args, trace)}


def cmd_single_metrize(args) -> dict:
    b = _bundle(args)
    if b.gauges:
        gauges = [b.gauges[k] for k in sorted(b.gauges)]
    else:
        gauges = list(metrize(b.inst, b.group, b.targets, depth=args.depth or 4))
    rho = single_metrize(gauges)
    verdicts = {"axioms": gauge_axioms_check(rho, b.inst, metric=True), "invariant": is_invariant_gauge(b.group, rho)}
    out = {"matrix": _matrix(rho)} if args.emit_matrix else {}
    return {"verdicts": verdicts, "outputs": out}


def cmd_example(args) -> dict:
    if not args.target:
        raise UnknownCommand("example needs a name: " + ", ".join(catalog.EXAMPLES))
    try:
        rep = catalog.run_example(args.target)
    except KeyError as exc:
        raise UnknownCommand(exc.args[0]) from None
    if args.check:
        key = catalog.CHECK_KEYS.get(args.check)
        if key is None or key not in rep.observed:
            avail = sorted(k for k, v in catalog.CHECK_KEYS.items() if v in rep.observed)
            raise UnknownCommand(f"example {args.target} has no check {args.check!r}; available: {', '.join(avail)}")
        detail = rep.checks.get("near_proper") if key == "nearly_proper" else None
        status = Status(rep.observed[key])
        witness = detail.witness if detail is not None else None
        if args.target == "ex1.1" and key == "nearly_proper" and status is Status.FAIL:
            witness = {"C": [0, 1], "probe": witness}
        v = Verdict(status, witness, note=detail.note if detail is not None else "")
        return {"verdicts": {args.check: v}, "outputs": {"example": rep.name, "expected": rep.expected.get(key)}}
    verdict = Verdict.of(rep.matches, {k: rep.observed.get(k) for k in rep.expected
                                       if rep.observed.get(k) != rep.expected[k]}, "documented verdicts not reproduced")
    return {"verdicts": {"reproduced": verdict}, "outputs": rep.as_dict()}


# -- verify ----------------------------------------------------------------------------


def _tally(rows: list) -> Verdict:
    v = combine(rows)
    fails = sum(r.failed for r in rows)
    return Verdict(v.status, v.witness, v.qualified, f"{len(rows)} cases, {fails} failed", {"cases": len(rows)})


def verify(theorem: str, b: Optional[Bundle] = None, count: Optional[int] = None, seed: Optional[int] = None) -> dict:
    """Run one verification suite, on the given bundle or on the seeded corpus."""
    import random

    rng = random.Random(seed if seed is not None else 2024)
    n = count
    if theorem in ("thm2.1", "lem3.4", "thm3.3"):
        if b is not None:
            devs = [(b.developments[k], b.inst) for k in sorted(b.developments)]
        else:
            from .space import SpaceInstance

            devs = []
            for _ in range(n or 200):
                d = corpus.random_three_development(rng)
                k = len(d[d.depth])
                devs.append((d, SpaceInstance(k, tuple(frozenset([p]) for p in range(k)))))
        rows = []
        for d, inst in devs:
            rho = au_distance(d, inst.n, check=False)
            if theorem == "thm2.1":
                rows.append(verify_sandwich(rho, d))
            elif theorem == "lem3.4":
                rows.append(verify_lemma_3_4(rho, d))
            else:
                rows.append(verify_theorem_3_3(d, inst, rho))
        if theorem == "thm2.1" and b is None:
            oracle = []
            for _ in range(n or 200):
                d = corpus.random_development(rng)
                k = max(max(s) for c in d.levels for s in c) + 1
                members = len({s for c in d.levels for s in c})
                oracle.append(Verdict.of(au_distance(d, k, check=False) == au_oracle(d, members, k), None,
                                         "recursion and chain enumeration disagree"))
            return {"suite": _tally(rows), "oracle": _tally(oracle)}
        return {"suite": _tally(rows)}
    if theorem == "thm3.6":
        cases = [(b.first("gauges"), b.first("tunnels"))] if b else [
            (c.rho, c.tunnels) for c in corpus.gauge_tunnel_corpus(n or 200, seed if seed is not None else 36)]
        return {"suite": _tally([verify_theorem_3_6(r, t) for r, t in cases])}
    if theorem == "thm3.7":
        if b is not None:
            if b.family is not None:
                return {"suite": verify_theorem_3_7_family(b.family)}
            return {"suite": verify_theorem_3_7(b.first("gauges"), b.first("tunnels"), None, b.inst)}
        rows, table = [], {}
        for case in corpus.theorem_3_7_grid():
            v = verify_theorem_3_7_family(case.family)
            d = v.details
            match = (d["rho_proper"].status is Status.PASS) == case.rho_proper and (
                d["tunnels_proper"].status is Status.PASS) == case.tunnels_proper
            row = combine([v, Verdict.of(match, case.family.name, "grid design not reproduced")])
            rows.append(row)
            table.setdefault(case.quadrant, []).append(d["sigma_proper"].status.value)
        return {"suite": _tally(rows), "sigma_proper_by_quadrant": {k: sorted(set(v)) for k, v in table.items()}}
    if theorem == "lem4.3":
        cases = [(b.inst, b.group, b.first("gauges"), b.first("tunnels"))] if b else corpus.lemma_4_3_corpus(
            n or 100, seed if seed is not None else 43)
        rows = []
        for inst, G, rho, T in cases:
            S = g_saturate_tunnels(G, rho, T, inst)
            rows.append(combine([validate_tunnel_system(rho, S), is_invariant_tunnel_system(G, S),
                                 is_proper_tunnel_system(S, inst),
                                 Verdict.of(g_saturate_tunnels(G, rho, S, inst) == S, None, "not idempotent")]))
        out = {"suite": _tally(rows)}
        if b is None:
            fam_rows = []
            for fam in corpus.lemma_4_3_families():
                sat = {h.m: g_saturate_tunnels(h.group, h.aux["rho"], h.aux["tunnels"]) for h in fam}
                fam_rows.append(combine([
                    family_check(fam, lambda h: validate_tunnel_system(h.aux["rho"], sat[h.m])),
                    family_check(fam, lambda h: is_invariant_tunnel_system(h.group, sat[h.m])),
                    family_tunnel_properness(fam, lambda h: sat[h.m])]))
            out["families"] = _tally(fam_rows)
        return out
    if theorem == "lem5.1":
        if b is not None:
            cases = [(b.inst, b.group, b.covers[k]) for k in sorted(b.covers)]
        else:
            cases = [(c.inst, c.group, u) for c, u in corpus.equiregular_corpus(n or 100, seed if seed is not None else 51)]
        rows = []
        for inst, G, u in cases:
            try:
                w = stone_star_refine(inst, G, u)
                rows.append(combine([is_star_refinement(w, u), is_invariant_cover(G, w)]))
            except IsometrizeError as exc:
                rows.append(Verdict.fail({"code": exc.code, "message": str(exc)}))
        return {"suite": _tally(rows)}
    if theorem == "prop5.2":
        cases = [(b.inst, b.exhaustion)] if b else corpus.exhaustion_corpus(n or 50, seed if seed is not None else 52)
        rows = []
        for inst, D in cases:
            try:
                rows.append(exhaustion_decomposition(inst, D).checks)
            except IsometrizeError as exc:
                rows.append(Verdict.fail({"code": exc.code, "message": str(exc)}))
        return {"suite": _tally(rows)}
    if theorem in ("thm1.1", "thm1.3"):
        cases = [(b.inst, b.group)] if b and b.family is None else []
        fams = [b.family] if b and b.family is not None else []
        if b is None:
            cases = [(c.inst, c.group) for c in corpus.coherence_corpus(n or 60, seed if seed is not None else 11)]
            fams = [c.family for c in corpus.proper_family_corpus()] if theorem == "thm1.3" else []
        rows = [coherence_1_1(i, G) if theorem == "thm1.1" else coherence_1_3(i, G) for i, G in cases]
        rows += [family_coherence_1_3(f) for f in fams]
        return {"suite": _tally(rows)}
    raise UnknownCommand(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")


def coherence_1_1(inst, G, depth: int = 4) -> Verdict:
    eq, _ = equiregularity_check(inst, G)
    try:
        fam = metrize(inst, G, depth=depth)
    except IsometrizeError as exc:
        return Verdict.of(eq.status is not Status.PASS, {"stage": getattr(exc, "stage", exc.code)},
                          "metrize failed on an equiregular instance")
    if eq.status is not Status.PASS:
        return Verdict.fail({"equiregular": eq.status.value}, "metrize succeeded without equiregularity")
    rows = []
    for g, tag in zip(fam.gauges, fam.tags):
        x, u = tag["target"]
        rows.append(is_invariant_gauge(G, g))
        rows.append(Verdict.of(g.ball(x, catalog.HALF) <= frozenset(u), {"x": x}, "half ball escapes the target"))
    return combine(rows)


def coherence_1_3(inst, G, depth: int = 4) -> Verdict:
    eq, _ = equiregularity_check(inst, G)
    near = near_properness_check(inst, G)
    both = eq.status is Status.PASS and near.status is Status.PASS
    try:
        pm = proper_metrize(inst, G, depth=depth)
    except IsometrizeError as exc:
        return Verdict.of(not both, {"stage": getattr(exc, "stage", exc.code)}, "pipeline failed although both checks pass")
    if not both:
        return Verdict.fail({"equiregular": eq.status.value, "near": near.status.value}, "pipeline succeeded anyway")
    rows = []
    for g in pm.family:
        rows += [is_proper_gauge(g, inst), is_invariant_gauge(G, g), near_properness_from_gauge(inst, G, g)]
    return combine(rows)


def family_coherence_1_3(fam, depth: int = 3) -> Verdict:
    eq, near = family_equiregularity(fam), family_near_properness(fam)
    both = eq.status is Status.PASS and near.status is Status.PASS
    fm = proper_metrize_family(fam, depth)
    if fm.succeeded != both:
        return Verdict.fail({"family": fam.name, "succeeded": fm.succeeded}, "pipeline disagrees with the checks")
    return Verdict.ok(fam.name)


def cmd_verify(args) -> dict:
    if args.target not in THEOREMS:
        raise UnknownCommand(f"verify needs one of {', '.join(THEOREMS)}")
    b = _bundle(args) if args.instance else None
    return {"verdicts": verify(args.target, b, args.count, args.seed), "outputs": {
        "theorem": args.target, "source": "instance" if b else "corpus"}}


HANDLERS = {
    "validate": cmd_validate, "au": cmd_au, "tunnel": cmd_tunnel, "check": cmd_check, "metrize": cmd_metrize,
    "proper-metrize": cmd_proper_metrize, "single-metrize": cmd_single_metrize, "verify": cmd_verify,
    "example": cmd_example,
}


def run_command(argv: list) -> tuple:
    """Parse ``argv`` and return ``(report, exit status, format)``."""
    fmt = "machine"
    echo = {"argv": list(argv)}
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        echo["command"] = args.command
        handler = HANDLERS.get(args.command)
        if handler is None:
            raise UnknownCommand(f"unknown command {args.command!r}; choose from {', '.join(COMMANDS)}")
        body = handler(args)
    except OPERATIONAL as exc:
        return {"command": echo, "error": _error(exc)}, 1, fmt
    except IsometrizeError as exc:
        return {"command": echo, "error": _error(exc)}, 2, fmt
    except OSError as exc:
        return {"command": echo, "error": {"code": "IO_ERROR", "message": f"{exc.strerror}: {exc.filename}"}}, 1, fmt
    report = {"command": echo}
    report.update({k: v for k, v in body.items() if v is not None})
    failed = any(_status_of(v) is Status.FAIL for v in _leaves(body.get("verdicts", {})))
    return report, 2 if failed else 0, fmt


def _error(exc: IsometrizeError) -> dict:
    out = {"code": exc.code, "message": str(exc)}
    if getattr(exc, "stage", None):
        out["stage"] = exc.stage
    if exc.witness is not None:
        out["witness"] = exc.witness
    return out


def _leaves(verdicts: dict):
    for v in verdicts.values():
        if isinstance(v, dict):
            yield from _leaves(v)
        else:
            yield v


def _status_of(v):
    return v.status if isinstance(v, Verdict) else None


def main(argv: Optional[list] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    report, status, fmt = run_command(argv)
    sys.stdout.buffer.write(emit_report(report, fmt))
    sys.stdout.flush()
    return status


if __name__ == "__main__":
    raise SystemExit(main())
