"""Pydantic report models returned by the verification operations."""

from enum import Enum
from typing import Annotated, Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, computed_field

from .groebner import Ideal
from .hermitian import HermitianPoly
from .polycore import GaussianRational, Polynomial

SCHEMA_VERSION = "1.0"

Exact = Annotated[GaussianRational, PlainSerializer(str, return_type=str)]
PolyText = Annotated[Polynomial, PlainSerializer(str, return_type=str)]
HermitianText = Annotated[HermitianPoly, PlainSerializer(str, return_type=str)]
IdealText = Annotated[
    Ideal,
    PlainSerializer(lambda ideal: [str(g) for g in ideal.generators], return_type=List[str]),
]


class Classification(str, Enum):
    """Segre classification of a point."""

    ORDINARY = "ordinary"
    DEGENERATE = "degenerate"


class Status(str, Enum):
    """Outcome of a command."""

    VERIFIED = "verified"
    REFUTED = "refuted"
    INPUT_ERROR = "input-error"
    BUDGET_EXCEEDED = "budget-exceeded"


class Report(BaseModel):
    """Base for exact-valued reports."""

    model_config = ConfigDict(arbitrary_types_allowed=True)


class Witness(Report):
    """A failed check together with the nonzero remainder proving it."""

    label: str
    remainder: PolyText


class SegreResult(Report):
    point: List[Exact]
    ideal: IdealText
    dimension: Optional[int]
    codim_in_icomp: int
    classification: Classification
    contains_point: bool


class ClassificationReport(Report):
    classification: Classification
    codim: int


class DegenerateLocusReport(Report):
    ideal: IdealText
    coefficients: List[PolyText] = Field(default_factory=list)
    dimension: Optional[int]
    icomp_dimension: Optional[int]
    codim: int
    codim_at_least_two: bool

    @computed_field  # type: ignore[misc]
    @property
    def is_empty(self) -> bool:
        return self.dimension is None


class LeafReport(Report):
    leaf: IdealText
    point: List[Exact]
    in_real_set: bool
    in_segre: bool
    dimension: Optional[int]
    expected_dimension: Optional[int]
    dimension_ok: bool
    witnesses: List[Witness] = Field(default_factory=list)

    @computed_field  # type: ignore[misc]
    @property
    def passed(self) -> bool:
        return self.in_real_set and self.in_segre and self.dimension_ok


class CRReport(Report):
    """The complex tangent space of the model at a point.

    ``cr_dimension`` is the dimension of the kernel of the holomorphic
    differentials, which equals the Levi dimension ``n`` at regular points of a
    Levi-flat model. The ``n + 1`` count of the intrinsic complexification that
    contains the leaves is reported separately as ``intrinsic_dimension``.
    """

    point: List[Exact]
    cr_dimension: int = Field(
        description="N minus the rank of the holomorphic Jacobian; n at regular points"
    )
    intrinsic_dimension: int = Field(
        description="cr_dimension + 1, the dimension of the intrinsic complexification"
    )
    jacobian_rank: int
    real_jacobian_rank: int
    regular: bool
    kernel: List[List[Exact]] = Field(default_factory=list)


class SingularLocusReport(Report):
    ideal: IdealText
    dimension: Optional[int]
    ambient_dimension: int
    codim: int
    codim_at_least_two: bool


class FirstIntegralReport(Report):
    first_integral: bool
    constant: bool
    witnesses: List[Witness] = Field(default_factory=list)


class LevelSetReport(Report):
    contained: bool
    cleared: List[HermitianText]
    remainders: List[PolyText]


class WebReport(Report):
    equation: PolyText
    order: int
    parameter: str


class RestrictionReport(Report):
    solved_variable: str
    substitution: PolyText
    generators: List[str]
    singular_locus: Optional[SingularLocusReport] = None
    generic: Optional[bool] = None


class MultiLeafReport(Report):
    point: List[Exact]
    parameter: str
    parameter_polynomial: PolyText
    real_root_count: int
    rational_roots: List[Exact] = Field(default_factory=list)
    leaves: List[IdealText] = Field(default_factory=list)


class SampleReport(Report):
    parameter: Exact
    point: List[Exact]
    on_model: bool
    on_leaf: bool
    leaf_dimension: Optional[int] = None
    expected_dimension: Optional[int] = None
    tangent_matches_cr: bool = False
    leaf: Optional[LeafReport] = None
    errors: List[str] = Field(default_factory=list)

    @computed_field  # type: ignore[misc]
    @property
    def passed(self) -> bool:
        return (
            not self.errors
            and self.on_model
            and self.on_leaf
            and self.leaf_dimension == self.expected_dimension
            and self.tangent_matches_cr
            and self.leaf is not None
            and self.leaf.passed
        )


class LeviCheckReport(Report):
    levi_dimension: Optional[int]
    samples: List[SampleReport] = Field(default_factory=list)

    @computed_field  # type: ignore[misc]
    @property
    def passed(self) -> bool:
        return bool(self.samples) and all(s.passed for s in self.samples)


class CommandReport(BaseModel):
    """The JSON envelope written by every CLI command."""

    schema_version: str = SCHEMA_VERSION
    command: str
    status: Status
    inputs: Dict[str, Any] = Field(default_factory=dict)
    result: Dict[str, Any] = Field(default_factory=dict)
    certificates: Dict[str, Any] = Field(default_factory=dict)
    timings: Dict[str, float] = Field(default_factory=dict)


class Check(BaseModel):
    """One named step of a built-in example pipeline."""

    name: str
    passed: bool
    detail: Dict[str, Any] = Field(default_factory=dict)


class SuiteReport(BaseModel):
    example: str
    checks: List[Check] = Field(default_factory=list)

    @computed_field  # type: ignore[misc]
    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)
