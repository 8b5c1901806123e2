"""Built-in example pipelines run by ``leviflat example``."""

from typing import Any, Callable, Dict, List, Sequence, Tuple

from shared.logging import get_logger

from .errors import BudgetExceededError, LeviflatError, ModelFileError
from .foliation import (
    first_integral_report,
    is_integrable,
    level_set_report,
    singular_locus,
    tangency_witnesses,
    web_from_family,
)
from .groebner import Ideal
from .levicheck import check_levi_foliation, frozen_branch_fields, multi_leaf_detector
from .modelfile import BUILTIN_MODELS, ModelFile, builtin_path, load_model
from .models import Check, SuiteReport
from .parser import parse_point, parse_poly, parse_polys
from .polycore import GaussianRational
from .segre import degenerate_locus, verify_leaf

logger = get_logger(__name__)

Step = Tuple[str, Callable[[ModelFile], Tuple[bool, Dict[str, Any]]]]


def _dump(report: Any) -> Dict[str, Any]:
    return report.model_dump(mode="json")


def _ideal(mf: ModelFile, src: str) -> Ideal:
    zctx = mf.model.z_context
    return Ideal(zctx, parse_polys(src, zctx))


def _equal_ideal(mf: ModelFile, actual: Ideal, src: str) -> Tuple[bool, Dict[str, Any]]:
    expected = _ideal(mf, src)
    return actual.equals(expected), {
        "computed": [str(g) for g in actual.generators],
        "expected": [str(g) for g in expected.generators],
    }


def _icomp_is(src: str) -> Callable[[ModelFile], Tuple[bool, Dict[str, Any]]]:
    return lambda mf: _equal_ideal(mf, mf.model.icomp, src)


def _degenerate_codim(mf: ModelFile) -> Tuple[bool, Dict[str, Any]]:
    report = degenerate_locus(mf.model)
    return report.codim_at_least_two, _dump(report)


def _leaves_verified(samples: Sequence[Tuple[str, str]]) -> Callable[[ModelFile], Tuple[bool, Dict[str, Any]]]:
    def step(mf: ModelFile) -> Tuple[bool, Dict[str, Any]]:
        assert mf.family is not None
        detail: Dict[str, Any] = {}
        ok = True
        for value, point in samples:
            report = verify_leaf(mf.model, mf.family.at(GaussianRational(value)), parse_point(point))
            detail[value] = _dump(report)
            ok = ok and report.passed
        return ok, detail

    return step


def _multileaf(point: str, roots: Sequence[str]) -> Callable[[ModelFile], Tuple[bool, Dict[str, Any]]]:
    def step(mf: ModelFile) -> Tuple[bool, Dict[str, Any]]:
        assert mf.family is not None
        report = multi_leaf_detector(mf.model, mf.family, parse_point(point))
        expected = sorted(GaussianRational(r).re for r in roots)
        found = sorted(r.re for r in report.rational_roots)
        return report.real_root_count == len(roots) and found == expected, _dump(report)

    return step


def _levi_samples(mf: ModelFile) -> Tuple[bool, Dict[str, Any]]:
    assert mf.family is not None
    report = check_levi_foliation(mf.model, mf.family, mf.samples)
    return report.passed, _dump(report)


# example 1 --------------------------------------------------------------------


def _ex1_complexify(mf: ModelFile) -> Tuple[bool, Dict[str, Any]]:
    H = mf.model
    expected = parse_poly("w3*z2 - w2*z3", H.context)
    body = H.inputs[0]
    return body == expected, {"complexified": str(body)}


def _ex1_degenerate(mf: ModelFile) -> Tuple[bool, Dict[str, Any]]:
    report = degenerate_locus(mf.model)
    ok, detail = _equal_ideal(mf, report.ideal, "z2, z3, z4")
    detail["codim"] = report.codim
    return ok and report.codim == 2, detail


def _ex1_integrable(mf: ModelFile) -> Tuple[bool, Dict[str, Any]]:
    assert mf.foliation is not None
    return is_integrable(mf.foliation), {}


def _ex1_singular(mf: ModelFile) -> Tuple[bool, Dict[str, Any]]:
    assert mf.foliation is not None
    report = singular_locus(mf.foliation)
    ok, detail = _equal_ideal(mf, report.ideal, "z2, z3")
    detail["codim"] = report.codim
    return ok and report.codim == 2, detail


def _ex1_tangent(mf: ModelFile) -> Tuple[bool, Dict[str, Any]]:
    assert mf.foliation is not None
    witnesses = tangency_witnesses(mf.foliation, mf.model)
    return not witnesses, {"witnesses": [_dump(w) for w in witnesses]}


def _ex1_first_integral(mf: ModelFile) -> Tuple[bool, Dict[str, Any]]:
    assert mf.foliation is not None and mf.first_integral is not None
    num, den = mf.first_integral
    report = first_integral_report(num, den, mf.foliation, mf.model.icomp)
    return report.first_integral and not report.constant, _dump(report)


def _ex1_level_set(mf: ModelFile) -> Tuple[bool, Dict[str, Any]]:
    assert mf.first_integral is not None and mf.level_curve is not None
    num, den = mf.first_integral
    report = level_set_report(mf.model, num, den, mf.level_curve)
    return report.contained, _dump(report)


# example 2 --------------------------------------------------------------------


def _ex2_web(mf: ModelFile) -> Tuple[bool, Dict[str, Any]]:
    assert mf.family is not None
    report = web_from_family(mf.family.generators[0], mf.family.parameter)
    return report.order == 2, _dump(report)


def _ex2_frozen_branches(mf: ModelFile) -> Tuple[bool, Dict[str, Any]]:
    assert mf.family is not None
    detail: Dict[str, Any] = {}
    ok = True
    for value in ("0", "1", "-2"):
        candidate = frozen_branch_fields(mf.family, GaussianRational(value))
        witnesses = tangency_witnesses(candidate, mf.model)
        detail[value] = {"tangent": not witnesses, "witnesses": len(witnesses)}
        ok = ok and bool(witnesses)
    return ok, detail


PIPELINES: Dict[str, List[Step]] = {
    "ex1": [
        ("complexification", _ex1_complexify),
        ("intrinsic complexification", _icomp_is("z4")),
        ("degenerate locus", _ex1_degenerate),
        ("integrability", _ex1_integrable),
        ("singular locus", _ex1_singular),
        ("tangency", _ex1_tangent),
        ("first integral", _ex1_first_integral),
        ("level set", _ex1_level_set),
        ("Levi foliation samples", _levi_samples),
        ("single leaf", _multileaf("0, 1, 5, 0", ["5"])),
    ],
    "ex2": [
        ("intrinsic complexification", _icomp_is("z4")),
        (
            "leaves",
            _leaves_verified(
                [
                    ("0", "0, i, 1, 0"),
                    ("1", "-1-i, i, 1, 0"),
                    ("-2", "-4+2*i, i, 1, 0"),
                    ("1/3", "-1/9-1/3*i, i, 1, 0"),
                ]
            ),
        ),
        ("web", _ex2_web),
        ("two leaves", _multileaf("-2, 1, 1, 0", ["-2", "1"])),
        ("no single foliation", _ex2_frozen_branches),
        ("degenerate locus", _degenerate_codim),
        ("Levi foliation samples", _levi_samples),
    ],
    "ex3-circle": [
        ("intrinsic complexification", _icomp_is("z0*z3 - z1*z2")),
        (
            "leaves",
            _leaves_verified(
                [("1/2", "3/5+4/5*i, 1, i, 4/5+3/5*i"), ("-1/2", "3/5-4/5*i, 1, i, -4/5+3/5*i")]
            ),
        ),
        ("two leaves", _multileaf("3/5, 1, 0, 0", ["-1/2", "1/2"])),
        ("degenerate locus", _degenerate_codim),
        ("Levi foliation samples", _levi_samples),
    ],
}


def run_example(name: str) -> SuiteReport:
    """Run one built-in pipeline; failing steps are recorded, budget overruns propagate."""
    if name not in BUILTIN_MODELS:
        raise ModelFileError(f"unknown example {name!r}; choose from {', '.join(BUILTIN_MODELS)}")
    mf = load_model(builtin_path(name))
    report = SuiteReport(example=name)
    for label, step in PIPELINES[name]:
        try:
            passed, detail = step(mf)
        except BudgetExceededError:
            raise
        except LeviflatError as exc:
            passed, detail = False, {"error": str(exc)}
        if not passed:
            logger.warning("example %s: step '%s' failed", name, label)
        report.checks.append(Check(name=label, passed=passed, detail=detail))
    return report
