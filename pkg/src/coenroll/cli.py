"""Command-line entry point: ``coenroll <command> [options]``.

Exit codes: 0 success, 2 usage error, 3 data error, 4 infeasible operation.
Results go to ``--out`` (or stdout); a one-line summary goes to stderr.
"""

from __future__ import annotations

import argparse
import io
import sys
import warnings

from . import __version__
from .centrality import Mode, betweenness, pivotal_course_tally, pivotal_students
from .enrollment import EnrollmentDataset, Scope, filter_in_person, load_prefix_map, parse_enrollment, subset, write_enrollment
from .errors import CoenrollError, DataWarning
from .intervention import (
    QUINTILES,
    compare,
    enrollment_quintiles,
    remove_sections_by_size,
    scalpel,
    two_pass_scalpel,
)
from .layout import layout_fr
from .metrics import component_reports, full_report, reachability_curve
from .projection import build_graph
from .report import (
    FORMATS,
    atomic_write,
    fmt,
    render_centrality,
    render_comparison,
    render_component_reports,
    render_curve,
    render_layout,
    render_metrics,
    render_plan,
    render_tally,
)
from .synthgen import generate, load_config


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# helpers


def _emit(args, text: str) -> str:
    if args.out:
        atomic_write(args.out, text)
        return args.out
    sys.stdout.write(text)
    return "stdout"


def _summary(line: str) -> None:
    print(line, file=sys.stderr)


def _load(path, args) -> EnrollmentDataset:
    prefix_map = load_prefix_map(args.prefix_map) if args.prefix_map else None
    d = parse_enrollment(path, prefix_map=prefix_map, strict=args.strict)
    if not args.keep_online:
        d = filter_in_person(d)
    return d


def _scoped(args) -> tuple[EnrollmentDataset, str]:
    d = _load(args.input, args)
    if args.scope:
        try:
            scope = Scope.parse(args.scope)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return subset(d, scope), scope.label()
    return d, "all"


# --------------------------------------------------------------------------
# commands


def cmd_generate(args) -> None:
    cfg = load_config(args.config)
    if args.seed is not None:
        import dataclasses

        cfg = dataclasses.replace(cfg, seed=args.seed)
    d = generate(cfg)
    buf = io.StringIO()
    write_enrollment(d, buf)
    where = _emit(args, buf.getvalue())
    _summary(
        f"generate: {cfg.name} seed={cfg.seed}: {d.n_students} students, {d.n_sections} sections, "
        f"{d.n_enrollments} enrollments -> {where}"
    )


def cmd_metrics(args) -> None:
    d, label = _scoped(args)
    g = build_graph(d)
    if args.per_component:
        reports = component_reports(g, workers=args.threads)
        where = _emit(args, render_component_reports(reports, args.format, label))
        _summary(f"metrics [{label}]: {len(reports)} components of size >= 2 -> {where}")
        return
    r = full_report(g, workers=args.threads)
    where = _emit(args, render_metrics(r, args.format, label))
    _summary(
        f"metrics [{label}]: {r.nodes_full} nodes, LCC {fmt(r.pct_in_largest_component)}%, "
        f"l_G={fmt(r.avg_geodesic)}, diameter={fmt(r.diameter)} -> {where}"
    )


def cmd_curve(args) -> None:
    if args.kmax < 1:
        raise UsageError("--kmax must be >= 1")
    d, label = _scoped(args)
    g = build_graph(d)
    curve = reachability_curve(g, args.kmax, workers=args.threads)
    where = _emit(args, render_curve(curve, args.format, label))
    _summary(f"curve [{label}]: k=1..{args.kmax}, rho(kmax)={fmt(curve.rho[-1])}, limit={fmt(curve.limit)} -> {where}")


def cmd_centrality(args) -> None:
    d, label = _scoped(args)
    g = build_graph(d)
    res = betweenness(g, args.mode, workers=args.threads)
    where = _emit(args, render_centrality(res, args.format))
    top = res.node_ids[res.ranking[0]] if g.n else "-"
    _summary(f"centrality [{label}] {res.mode.value}: {g.n} students, top {top} -> {where}")


def cmd_pivotal(args) -> None:
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    d, label = _scoped(args)
    g = build_graph(d)
    p = pivotal_students(g, args.mode, args.k, workers=args.threads)
    tally = pivotal_course_tally(d, p)
    where = _emit(args, render_tally(tally, args.format, p))
    lead = f"{tally[0][0]} ({tally[0][1]})" if tally else "-"
    _summary(f"pivotal [{label}] {p.mode.value}: {len(p.student_ids)} students, {len(tally)} courses, top {lead} -> {where}")


def _write_plan(args, plan) -> str:
    path = args.plan or (f"{args.out}.plan.json" if args.out else None)
    text = render_plan(plan, "structured" if path is None or path.endswith(".json") else args.format)
    if path is None:
        sys.stdout.write(text)
        return "stdout"
    atomic_write(path, text)
    return path


def _write_after(args, after) -> str:
    buf = io.StringIO()
    write_enrollment(after, buf)
    if args.out:
        atomic_write(args.out, buf.getvalue())
        return args.out
    return "(not written)"


def cmd_intervene_size(args) -> None:
    d = _load(args.input, args)
    if (args.threshold is None) == (args.quintile is None):
        raise UsageError("give exactly one of --threshold or --quintile")
    if args.quintile is not None:
        if args.quintile not in QUINTILES:
            raise UsageError(f"--quintile must be one of {QUINTILES}")
        threshold = enrollment_quintiles(d)[QUINTILES.index(args.quintile)]
    else:
        threshold = args.threshold
    after, plan = remove_sections_by_size(d, threshold)
    where = _write_after(args, after)
    plan_where = _write_plan(args, plan)
    _summary(
        f"intervene-size: threshold {fmt(threshold)} removed {plan.removed_section_count} of {plan.sections_before} "
        f"sections ({fmt(100 * plan.removed_share)}%), dropped {plan.students_dropped} students -> {where}, plan {plan_where}"
    )


def cmd_intervene_scalpel(args) -> None:
    d = _load(args.input, args)
    if args.two_pass:
        after, plan = two_pass_scalpel(
            d, args.mode, args.k, args.c, args.graduate_courses, args.undergraduate_courses, workers=args.threads
        )
    else:
        after, plan = scalpel(d, args.mode, args.k, args.c, analysis_scope=args.analysis_scope, workers=args.threads)
    where = _write_after(args, after)
    plan_where = _write_plan(args, plan)
    _summary(
        f"intervene-scalpel: {len(plan.removed_course_codes)} courses, {plan.removed_section_count} of "
        f"{plan.sections_before} sections ({fmt(100 * plan.removed_share)}%) -> {where}, plan {plan_where}"
    )


def cmd_compare(args) -> None:
    before = _load(args.before, args)
    after = before if args.after == args.before else _load(args.after, args)
    cmp = compare(before, after, k=args.k, pairs_scope=args.pairs_scope, workers=args.threads)
    where = _emit(args, render_comparison(cmp, args.format))
    _summary(
        f"compare: l_G {fmt(cmp.before.avg_geodesic)} -> {fmt(cmp.after.avg_geodesic)}, pairs within {args.k} "
        f"{fmt(cmp.pairs_within_before)}% -> {fmt(cmp.pairs_within_after)}% -> {where}"
    )


def cmd_layout(args) -> None:
    if args.iterations < 0:
        raise UsageError("--iterations must be >= 0")
    d, label = _scoped(args)
    g = build_graph(d)
    b = betweenness(g, args.mode, workers=args.threads).normalized
    lay = layout_fr(g, args.iterations, args.seed if args.seed is not None else 0, b)
    where = _emit(args, render_layout(lay))
    _summary(f"layout [{label}]: {g.n} nodes, {args.iterations} iterations -> {where}")


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--threads", type=int, default=1, help="worker threads for all-source traversals")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--prefix-map", help="two-column prefix,school file (default: shipped table)")
    common.add_argument("--strict", action="store_true", help="reject duplicate rows and unknown prefixes")
    common.add_argument("--keep-online", action="store_true", help="do not drop online sections on load")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--in", dest="input", required=True, help="enrollment file")
    data.add_argument("--scope", help="population selector: career=GR, rank=FR, level=5,6, school=ECS")

    mode = argparse.ArgumentParser(add_help=False)
    mode.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.UNWEIGHTED.value)

    plan = argparse.ArgumentParser(add_help=False)
    plan.add_argument("--plan", help="plan document path (default: <out>.plan.json)")

    p = argparse.ArgumentParser(prog="coenroll", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"coenroll {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("generate", parents=[common], help="write a synthetic enrollment file")
    s.add_argument("--config", default="utd-like-2k", help="shipped config name or config file path")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("metrics", parents=[common, data], help="small-world metric report")
    s.add_argument("--per-component", action="store_true", help="one report per component instead of the LCC")
    s.set_defaults(func=cmd_metrics)

    s = sub.add_parser("curve", parents=[common, data], help="reachability density rho(k)")
    s.add_argument("--kmax", type=int, default=18)
    s.set_defaults(func=cmd_curve)

    s = sub.add_parser("centrality", parents=[common, data, mode], help="betweenness of every student")
    s.set_defaults(func=cmd_centrality)

    s = sub.add_parser("pivotal", parents=[common, data, mode], help="courses taken by the top-K students")
    s.add_argument("--k", type=int, default=100)
    s.set_defaults(func=cmd_pivotal)

    s = sub.add_parser("intervene-size", parents=[common, plan], help="move sections at or above a size online")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--threshold", type=float)
    s.add_argument("--quintile", type=int, help="use the 20/40/60/80 enrollment quintile threshold")
    s.set_defaults(func=cmd_intervene_size)

    s = sub.add_parser("intervene-scalpel", parents=[common, plan, mode], help="move the pivotal students' top courses online")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--k", type=int, default=100)
    s.add_argument("--c", type=int, default=25)
    s.add_argument("--analysis-scope", help="pick pivotal students within this population only")
    s.add_argument("--two-pass", action="store_true")
    s.add_argument("--graduate-courses", type=int, default=5)
    s.add_argument("--undergraduate-courses", type=int, default=5)
    s.set_defaults(func=cmd_intervene_scalpel)

    s = sub.add_parser("compare", parents=[common], help="before/after metric table")
    s.add_argument("--before", required=True)
    s.add_argument("--after", required=True)
    s.add_argument("--k", type=int, default=4)
    s.add_argument("--pairs-scope", choices=("all", "lcc"), default="all")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("layout", parents=[common, data, mode], help="Fruchterman-Reingold coordinates")
    s.add_argument("--iterations", type=int, default=50)
    s.set_defaults(func=cmd_layout)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads < 1:
        _summary(f"coenroll {args.command}: error: --threads must be >= 1")
        return 2
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DataWarning)
            args.func(args)
    except UsageError as exc:
        _summary(f"coenroll {args.command}: error: {exc}")
        return 2
    except CoenrollError as exc:
        _summary(f"coenroll {args.command}: {type(exc).__name__}: {exc}")
        return exc.exit_code
    except (OSError, ValueError) as exc:
        _summary(f"coenroll {args.command}: {type(exc).__name__}: {exc}")
        return 3
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
