"""Pytest configuration and fixtures."""

import random
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Callable, Generator

import pytest

from apps.leviflat.hermitian import LeviFlatModel
from apps.leviflat.modelfile import ModelFile, builtin_path, load_model
from apps.leviflat.polycore import GaussianRational, Polynomial, VarContext
from shared.config import LeviflatConfig, init_config


@pytest.fixture(scope="session")
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)


@pytest.fixture(autouse=True)
def test_config(temp_dir: Path) -> LeviflatConfig:
    """A fresh configuration for every test."""
    return init_config(
        app_name="leviflat-test",
        logs_dir=temp_dir / "logs",
        log_level="DEBUG",
    )


@pytest.fixture
def rng() -> random.Random:
    """Deterministic randomness for property tests."""
    return random.Random(20240601)


@pytest.fixture
def random_poly(rng: random.Random) -> Callable[..., Polynomial]:
    """Seeded random polynomials with Gaussian rational coefficients."""

    def make(ctx: VarContext, terms: int = 3, degree: int = 2) -> Polynomial:
        data = {}
        for _ in range(terms):
            m = [0] * ctx.size
            for _ in range(rng.randint(0, degree)):
                m[rng.randrange(ctx.size)] += 1
            data[tuple(m)] = GaussianRational(
                Fraction(rng.randint(-5, 5), rng.randint(1, 3)), rng.randint(-2, 2)
            )
        return Polynomial(ctx, data)

    return make


@pytest.fixture
def ctx3() -> VarContext:
    """z1, z2, z3 without conjugates."""
    return VarContext.create(3)


@pytest.fixture
def ctx2_full() -> VarContext:
    """z1, z2 with the mirror block w1, w2."""
    return VarContext.create(2, conjugates=True)


@pytest.fixture
def ctx4_full() -> VarContext:
    return VarContext.create(4, conjugates=True)


@pytest.fixture(scope="session")
def ex1_file() -> ModelFile:
    """The first built-in example, loaded once per session."""
    return load_model(builtin_path("ex1"))


@pytest.fixture(scope="session")
def ex2_file() -> ModelFile:
    return load_model(builtin_path("ex2"))


@pytest.fixture(scope="session")
def ex3_file() -> ModelFile:
    return load_model(builtin_path("ex3-circle"))


@pytest.fixture
def ex1(ex1_file: ModelFile) -> LeviFlatModel:
    return ex1_file.model


@pytest.fixture
def ex2(ex2_file: ModelFile) -> LeviFlatModel:
    return ex2_file.model


@pytest.fixture
def ex3(ex3_file: ModelFile) -> LeviFlatModel:
    return ex3_file.model


@pytest.fixture
def model_file(temp_dir: Path) -> Path:
    """A small model file on disk: Im z2 = 0, z3 = 0 in C^3."""
    path = temp_dir / "trivial.lf"
    path.write_text(
        "N = 3\n"
        "n = 1\n"
        "\n"
        "[generators]\n"
        "z2 - ~z2   # imaginary part\n"
        "z3\n"
        "\n"
        "[fields]\n"
        "1, 0, 0\n",
        encoding="utf-8",
    )
    return path
