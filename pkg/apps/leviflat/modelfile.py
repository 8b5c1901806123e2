"""Loading of ``.lf`` model files.

A model file has a header of ``key = value`` lines (``N`` coordinates, Levi
dimension ``n``, ``names``, ``name``; keys are case-sensitive) followed by bracketed sections::

    N = 4
    n = 2
    names = z1, z2, z3, z4

    [generators]
    ~z3*z2 - ~z2*z3
    z4

    [forms]
    z2*dz3 - z3*dz2

Known sections: ``generators``, ``fields``, ``forms``, ``leaves`` (first line
``parameter = c``), ``first-integral`` (``num / den``), ``level-curve`` (in
``u`` and ``~u``) and ``samples`` (``parameter | point``). ``#`` starts a
comment.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from shared.logging import get_logger

from .errors import ConeError, ModelFileError, ParseError
from .foliation import FoliationPresentation, parse_field, parse_one_form
from .hermitian import LeviFlatModel, certify_cone
from .levicheck import LeafFamily
from .parser import parse_constant, parse_point, parse_poly, parse_polys, parse_rational_function
from .polycore import GaussianRational, Polynomial, VarContext

logger = get_logger(__name__)

FIXTURES_DIR = Path(__file__).parent / "fixtures"
BUILTIN_MODELS = ("ex1", "ex2", "ex3-circle")
SECTIONS = (
    "generators",
    "fields",
    "forms",
    "leaves",
    "first-integral",
    "level-curve",
    "samples",
)
LEVEL_CURVE_CONTEXT = VarContext(1, 1, (), ("u",))

Line = Tuple[int, str]
Sample = Tuple[GaussianRational, List[GaussianRational]]


@dataclass
class ModelFile:
    """A parsed model file: the model plus its optional attachments."""

    name: str
    model: LeviFlatModel
    foliation: Optional[FoliationPresentation] = None
    family: Optional[LeafFamily] = None
    first_integral: Optional[Tuple[Polynomial, Polynomial]] = None
    level_curve: Optional[Polynomial] = None
    samples: List[Sample] = field(default_factory=list)


def _strip(raw: str) -> str:
    return raw.split("#", 1)[0].strip()


def _split(text: str) -> Tuple[Dict[str, Line], Dict[str, List[Line]]]:
    header: Dict[str, Line] = {}
    sections: Dict[str, List[Line]] = {}
    current: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ModelFileError(f"malformed section header {line!r}", lineno)
            current = line[1:-1].strip().lower()
            if current not in SECTIONS:
                raise ModelFileError(f"unknown section [{current}]", lineno)
            if current in sections:
                raise ModelFileError(f"section [{current}] appears twice", lineno)
            sections[current] = []
        elif current is None:
            if "=" not in line:
                raise ModelFileError(f"expected 'key = value' in the header, got {line!r}", lineno)
            key, value = (part.strip() for part in line.split("=", 1))
            header[key] = (lineno, value)
        else:
            sections[current].append((lineno, line))
    return header, sections


def _int(header: Dict[str, Line], key: str, required: bool) -> Optional[int]:
    if key not in header:
        if required:
            raise ModelFileError(f"header is missing '{key}'")
        return None
    lineno, value = header[key]
    try:
        number = int(value)
    except ValueError:
        raise ModelFileError(f"'{key}' must be an integer, got {value!r}", lineno) from None
    if number < 0:
        raise ModelFileError(f"'{key}' must be non-negative", lineno)
    return number


def _at(lineno: int, exc: ParseError) -> ParseError:
    return ParseError(exc.message, lineno + exc.line - 1, exc.column)


def _parse_lines(lines: List[Line], parse) -> List:
    results = []
    for lineno, line in lines:
        try:
            results.append(parse(line))
        except ParseError as exc:
            raise _at(lineno, exc) from exc
    return results


def parse_model(text: str, name: str = "model") -> ModelFile:
    """Parse model file text; syntax errors carry file line numbers."""
    header, sections = _split(text)
    N = _int(header, "N", True)
    assert N is not None
    # lowercase 'n' is the Levi dimension
    levi = _int(header, "n", False)
    names = None
    if "names" in header:
        lineno, value = header["names"]
        names = tuple(part.strip() for part in value.split(",") if part.strip())
        if len(names) != N:
            raise ModelFileError(f"{len(names)} names given for N = {N}", lineno)
    if "name" in header:
        name = header["name"][1]
    try:
        zctx = VarContext.create(N, names=names)
    except ValueError as exc:
        raise ModelFileError(str(exc)) from exc
    ctx = zctx.full()

    if "generators" not in sections:
        raise ModelFileError("a model file needs a [generators] section")
    generators: List[Polynomial] = []
    for polys in _parse_lines(sections["generators"], lambda line: parse_polys(line, ctx)):
        generators.extend(polys)
    try:
        cone = certify_cone(generators)
    except ConeError:
        cone = None
        logger.debug("model %s is not a projective cone", name)
    model = LeviFlatModel(ctx, generators, levi, name, cone)
    result = ModelFile(name=name, model=model)

    if "fields" in sections and "forms" in sections:
        raise ModelFileError("give either [fields] or [forms], not both")
    if "fields" in sections:
        fields = _parse_lines(sections["fields"], lambda line: parse_field(line, zctx))
        result.foliation = FoliationPresentation(zctx, fields=fields)
    if "forms" in sections:
        forms = _parse_lines(sections["forms"], lambda line: parse_one_form(line, zctx))
        result.foliation = FoliationPresentation(zctx, forms=forms)

    if "leaves" in sections:
        result.family = _parse_family(sections["leaves"], zctx)

    if "first-integral" in sections:
        lines = sections["first-integral"]
        if len(lines) != 1:
            raise ModelFileError("[first-integral] holds exactly one 'num / den' line", lines[0][0])
        result.first_integral = _parse_lines(
            lines, lambda line: parse_rational_function(line, zctx)
        )[0]

    if "level-curve" in sections:
        lines = sections["level-curve"]
        if len(lines) != 1:
            raise ModelFileError("[level-curve] holds exactly one expression", lines[0][0])
        result.level_curve = _parse_lines(
            lines, lambda line: parse_poly(line, LEVEL_CURVE_CONTEXT)
        )[0]

    if "samples" in sections:
        result.samples = _parse_lines(sections["samples"], _parse_sample)
    return result


def _parse_family(lines: List[Line], zctx: VarContext) -> LeafFamily:
    lineno, first = lines[0]
    key, sep, value = first.partition("=")
    if not sep or key.strip().lower() != "parameter" or not value.strip():
        raise ModelFileError("[leaves] starts with 'parameter = <name>'", lineno)
    parameter = value.strip()
    ctx = zctx.with_aux((parameter,))
    gens: List[Polynomial] = []
    for polys in _parse_lines(lines[1:], lambda line: parse_polys(line, ctx)):
        gens.extend(polys)
    if not gens:
        raise ModelFileError("[leaves] lists no equations", lineno)
    return LeafFamily(ctx, tuple(gens), parameter)


def _parse_sample(line: str) -> Sample:
    value, sep, point = line.partition("|")
    if not sep:
        raise ParseError("a sample is written 'parameter | point'")
    return parse_constant(value.strip()), parse_point(point.strip())


def builtin_path(name: str) -> Path:
    if name not in BUILTIN_MODELS:
        raise ModelFileError(f"unknown built-in model {name!r}; choose from {', '.join(BUILTIN_MODELS)}")
    return FIXTURES_DIR / f"{name}.lf"


def load_model(path: Path) -> ModelFile:
    """Load a model from ``path``; a bare built-in name such as ``ex1`` also works."""
    if not path.exists() and str(path) in BUILTIN_MODELS:
        path = builtin_path(str(path))
    if not path.exists():
        raise ModelFileError(f"model file {path} does not exist")
    logger.info("loading model file %s", path)
    return parse_model(path.read_text(encoding="utf-8"), name=path.stem)
