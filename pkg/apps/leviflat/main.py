"""Leviflat CLI application main module."""

import re
from pathlib import Path
from typing import Any, Callable, Collection, Dict, Optional, Tuple

import typer
from rich.console import Console

from shared.config import init_config
from shared.logging import get_logger, setup_logging
from shared.utils import canonical_json, save_json, timed

from .errors import BudgetExceededError, LeviflatError, ModelFileError, ParseError
from .foliation import (
    first_integral_report,
    icomp_singular_locus,
    is_integrable,
    level_set_report,
    restrict_to_hyperplane,
    singular_locus,
    tangency_witnesses,
    web_from_family,
)
from .hermitian import HermitianPoly, split_real
from .levicheck import LeafFamily, check_levi_foliation, cr_tangent, multi_leaf_detector
from .modelfile import LEVEL_CURVE_CONTEXT, ModelFile, load_model
from .models import CommandReport, Status
from .parser import iter_names, parse_expr, parse_point, parse_poly, parse_rational_function
from .polycore import VarContext
from .segre import classify_point, degenerate_locus, segre_variety
from .suite import run_example

app = typer.Typer(
    name="leviflat",
    help="Exact verification of Levi-flat varieties, Segre varieties and foliations",
    add_completion=False,
)
console = Console()
logger = get_logger(__name__)

EXIT_CODES = {
    Status.VERIFIED: 0,
    Status.REFUTED: 1,
    Status.INPUT_ERROR: 2,
    Status.BUDGET_EXCEEDED: 3,
}

Outcome = Tuple[bool, Dict[str, Any], Dict[str, Any]]


class _State:
    pretty: bool = False
    output: Optional[Path] = None


state = _State()

ModelOption = typer.Option(..., "--model", "-m", help="Model file (.lf) or built-in name")
AtOption = typer.Option(..., "--at", help="Comma-separated point, e.g. '0,1,1,0'")


def _dump(report: Any) -> Dict[str, Any]:
    return report.model_dump(mode="json")


def _emit(report: CommandReport) -> None:
    data = report.model_dump(mode="json")
    if state.output is not None:
        save_json(data, state.output)
    if state.pretty:
        console.print_json(canonical_json(data))
    else:
        typer.echo(canonical_json(data))
    raise typer.Exit(EXIT_CODES[report.status])


def _run(command: str, inputs: Dict[str, Any], body: Callable[[Dict[str, float]], Outcome]) -> None:
    """Run a command body and write its JSON envelope; the exit code follows the status."""
    timings: Dict[str, float] = {}
    certificates: Dict[str, Any] = {}
    try:
        with timed(timings, "total"):
            verified, result, certificates = body(timings)
        status = Status.VERIFIED if verified else Status.REFUTED
    except BudgetExceededError as exc:
        status = Status.BUDGET_EXCEEDED
        result = {"error": str(exc), "budget": exc.budget, "processed": exc.processed}
    except ParseError as exc:
        status = Status.INPUT_ERROR
        result = {"error": exc.message, "line": exc.line, "column": exc.column, "type": "ParseError"}
    except (LeviflatError, ValueError) as exc:
        status = Status.INPUT_ERROR
        result = {"error": str(exc), "type": type(exc).__name__}
    _emit(
        CommandReport(
            command=command,
            status=status,
            inputs=inputs,
            result=result,
            certificates=certificates,
            timings=timings,
        )
    )


def _load(model: str) -> ModelFile:
    return load_model(Path(model))


def _context_for(src: str, exclude: Collection[str] = ()) -> VarContext:
    """A two-block context holding every variable of ``src`` not in ``exclude``.

    Names ``z<k>`` give the contiguous block ``z1..zN`` (or ``z0..zN``);
    other names are used in sorted order.
    """
    names = sorted({v.name for v in iter_names(parse_expr(src))} - set(exclude))
    numbered = [re.fullmatch(r"z(\d+)", name) for name in names]
    if names and all(numbered):
        indices = [int(m.group(1)) for m in numbered if m]
        start = 0 if min(indices) == 0 else 1
        names = [f"z{k}" for k in range(start, max(indices) + 1)]
    return VarContext.create(len(names), conjugates=True, names=names)


@app.callback()
def callback(
    pretty: bool = typer.Option(False, "--pretty", help="Render the report with rich"),
    budget: Optional[int] = typer.Option(None, "--budget", help="S-pair budget per Groebner run"),
    order: Optional[str] = typer.Option(None, "--order", help="Term order: grevlex or lex"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for sampled points"),
    output: Optional[Path] = typer.Option(
        None, "--output", "-o", help="Also write the report to this file"
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log to stderr"),
) -> None:
    """Exact computations on Levi-flat models. Reports are JSON on stdout."""
    config = init_config()
    groebner = config.groebner.model_dump()
    sampling = config.sampling.model_dump()
    if budget is not None:
        groebner["s_pair_budget"] = budget
    if order is not None:
        groebner["term_order"] = order
    if seed is not None:
        sampling["seed"] = seed
    try:
        config = init_config(
            groebner=groebner,
            sampling=sampling,
            hermitian=config.hermitian.model_dump(),
        )
    except ValueError as exc:
        typer.echo(
            canonical_json(
                CommandReport(
                    command="configure",
                    status=Status.INPUT_ERROR,
                    result={"error": str(exc), "type": "ValidationError"},
                ).model_dump(mode="json")
            )
        )
        raise typer.Exit(EXIT_CODES[Status.INPUT_ERROR])
    setup_logging(
        level="DEBUG" if verbose else config.log_level,
        log_file=config.log_file,
        format_string=config.log_format,
        console=verbose,
    )
    state.pretty = pretty
    state.output = output


@app.command()
def complexify(
    expr: str = typer.Option(..., "--expr", "-e", help="Expression in z and ~z"),
) -> None:
    """Complexify an expression: ~zk becomes wk."""

    def body(timings: Dict[str, float]) -> Outcome:
        ctx = _context_for(expr)
        p = HermitianPoly.of(parse_poly(expr, ctx))
        parts = split_real(p)
        result = {
            "complexified": str(p.body),
            "real": p.is_real,
            "real_generators": [str(q.body) for q in parts],
        }
        return True, result, {}

    _run("complexify", {"expr": expr}, body)


@app.command()
def icomp(model: str = ModelOption) -> None:
    """Intrinsic complexification of a model."""

    def body(timings: Dict[str, float]) -> Outcome:
        H = _load(model).model
        with timed(timings, "icomp"):
            ideal = H.icomp
            dim = ideal.dimension()
        expected = H.levi_dimension + 1 if H.levi_dimension is not None else None
        certificates: Dict[str, Any] = {}
        if H.cone is not None:
            certificates["cone"] = {"kinds": list(H.cone.kinds), "degrees": list(H.cone.degrees)}
        with timed(timings, "singular locus"):
            certificates["singular_locus"] = _dump(icomp_singular_locus(H))
        result = {
            "ideal": [str(g) for g in ideal.generators],
            "dimension": dim,
            "expected_dimension": expected,
        }
        return expected is None or dim == expected, result, certificates

    _run("icomp", {"model": model}, body)


@app.command()
def segre(model: str = ModelOption, at: str = AtOption) -> None:
    """Segre variety of a point of the intrinsic complexification."""

    def body(timings: Dict[str, float]) -> Outcome:
        H = _load(model).model
        report = segre_variety(H, parse_point(at))
        return report.contains_point, _dump(report), {}

    _run("segre", {"model": model, "at": at}, body)


@app.command()
def classify(model: str = ModelOption, at: str = AtOption) -> None:
    """Classify a point as Segre ordinary or degenerate."""

    def body(timings: Dict[str, float]) -> Outcome:
        H = _load(model).model
        return True, _dump(classify_point(H, parse_point(at))), {}

    _run("classify", {"model": model, "at": at}, body)


@app.command("sd-locus")
def sd_locus(model: str = ModelOption) -> None:
    """Segre degenerate locus and its codimension."""

    def body(timings: Dict[str, float]) -> Outcome:
        report = degenerate_locus(_load(model).model)
        return report.codim_at_least_two, _dump(report), {}

    _run("sd-locus", {"model": model}, body)


def _foliation_of(mf: ModelFile):
    if mf.foliation is None:
        raise ModelFileError("the model file has no [fields] or [forms] section")
    return mf.foliation


@app.command()
def tangent(model: str = ModelOption) -> None:
    """Is the model's foliation tangent to the Levi-flat set?"""

    def body(timings: Dict[str, float]) -> Outcome:
        mf = _load(model)
        F = _foliation_of(mf)
        with timed(timings, "tangency"):
            witnesses = tangency_witnesses(F, mf.model)
        certificates = {
            "integrable": is_integrable(F),
            "singular_locus": _dump(singular_locus(F)),
        }
        result = {"tangent": not witnesses, "witnesses": [_dump(w) for w in witnesses]}
        return not witnesses, result, certificates

    _run("tangent", {"model": model}, body)


@app.command("first-integral")
def first_integral(
    model: str = ModelOption,
    expr: Optional[str] = typer.Option(None, "--expr", "-e", help="num / den"),
) -> None:
    """Check a rational first integral of the foliation on the intrinsic complexification."""

    def body(timings: Dict[str, float]) -> Outcome:
        mf = _load(model)
        F = _foliation_of(mf)
        zctx = mf.model.z_context
        if expr is not None:
            num, den = parse_rational_function(expr, zctx)
        elif mf.first_integral is not None:
            num, den = mf.first_integral
        else:
            raise ModelFileError("no first integral given")
        report = first_integral_report(num, den, F, mf.model.icomp)
        return report.first_integral, _dump(report), {}

    _run("first-integral", {"model": model, "expr": expr}, body)


@app.command("level-set")
def level_set(
    model: str = ModelOption,
    expr: Optional[str] = typer.Option(None, "--expr", "-e", help="Level curve in u and ~u"),
) -> None:
    """Check that the model lies in the preimage of a real curve under its first integral."""

    def body(timings: Dict[str, float]) -> Outcome:
        mf = _load(model)
        if mf.first_integral is None:
            raise ModelFileError("the model file has no [first-integral] section")
        if expr is not None:
            curve = parse_poly(expr, LEVEL_CURVE_CONTEXT)
        elif mf.level_curve is not None:
            curve = mf.level_curve
        else:
            raise ModelFileError("no level curve given")
        num, den = mf.first_integral
        report = level_set_report(mf.model, num, den, curve)
        return report.contained, _dump(report), {}

    _run("level-set", {"model": model, "expr": expr}, body)


@app.command()
def web(
    model: Optional[str] = typer.Option(None, "--model", "-m", help="Model file with [leaves]"),
    expr: Optional[str] = typer.Option(None, "--expr", "-e", help="Family polynomial"),
    parameter: str = typer.Option("c", "--parameter", "-p", help="Family parameter"),
) -> None:
    """Implicit web equation of a one-parameter family of hypersurfaces."""

    def body(timings: Dict[str, float]) -> Outcome:
        if expr is not None:
            if model is None:
                zctx = _context_for(expr, exclude={parameter}).z_only()
            else:
                zctx = _load(model).model.z_context
            family = LeafFamily.parse(zctx, [expr], parameter).generators[0]
            name = parameter
        else:
            if model is None:
                raise ModelFileError("give --model or --expr")
            mf = _load(model)
            if mf.family is None:
                raise ModelFileError("the model file has no [leaves] section")
            family = mf.family.generators[0]
            name = mf.family.parameter
        with timed(timings, "resultant"):
            report = web_from_family(family, name)
        return True, _dump(report), {}

    _run("web", {"model": model, "expr": expr, "parameter": parameter}, body)


@app.command()
def cr(model: str = ModelOption, at: str = AtOption) -> None:
    """CR tangent space of the model at a point."""

    def body(timings: Dict[str, float]) -> Outcome:
        report = cr_tangent(_load(model).model, parse_point(at))
        return report.regular, _dump(report), {}

    _run("cr", {"model": model, "at": at}, body)


@app.command("check-levi")
def check_levi(model: str = ModelOption) -> None:
    """Check the model's leaf family at its [samples]."""

    def body(timings: Dict[str, float]) -> Outcome:
        mf = _load(model)
        if mf.family is None or not mf.samples:
            raise ModelFileError("check-levi needs [leaves] and [samples] sections")
        report = check_levi_foliation(mf.model, mf.family, mf.samples)
        return report.passed, _dump(report), {}

    _run("check-levi", {"model": model}, body)


@app.command()
def multileaf(model: str = ModelOption, at: str = AtOption) -> None:
    """Leaves of the family through a point; verified when at least two pass through it."""

    def body(timings: Dict[str, float]) -> Outcome:
        mf = _load(model)
        if mf.family is None:
            raise ModelFileError("the model file has no [leaves] section")
        report = multi_leaf_detector(mf.model, mf.family, parse_point(at))
        return report.real_root_count >= 2, _dump(report), {}

    _run("multileaf", {"model": model, "at": at}, body)


@app.command()
def restrict(
    model: str = ModelOption,
    expr: str = typer.Option(..., "--expr", "-e", help="Linear hyperplane equation"),
) -> None:
    """Restrict the foliation (or the intrinsic complexification) to a hyperplane."""

    def body(timings: Dict[str, float]) -> Outcome:
        mf = _load(model)
        h = parse_poly(expr, mf.model.z_context)
        target: Any = mf.foliation if mf.foliation is not None else mf.model.icomp
        _, report = restrict_to_hyperplane(target, h)
        verified = report.generic if report.generic is not None else True
        return verified, _dump(report), {}

    _run("restrict", {"model": model, "expr": expr}, body)


@app.command()
def example(name: str = typer.Argument(..., help="ex1, ex2 or ex3-circle")) -> None:
    """Run a built-in example pipeline."""

    def body(timings: Dict[str, float]) -> Outcome:
        report = run_example(name)
        return report.passed, _dump(report), {}

    _run("example", {"name": name}, body)


def main() -> None:
    """Main entry point."""
    app()


if __name__ == "__main__":
    main()
