from __future__ import annotations

import os
import random

import hypothesis
import pytest

from pell_pke.field import FieldContext, gen_context

hypothesis.settings.register_profile("pell", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "pell"))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240517)


@pytest.fixture(scope="session")
def f11() -> FieldContext:
    return FieldContext.from_prime(11)


@pytest.fixture(scope="session")
def f13() -> FieldContext:
    return FieldContext.from_prime(13)


@pytest.fixture(scope="session")
def f23() -> FieldContext:
    return FieldContext.from_prime(23)


@pytest.fixture(scope="session")
def ctx128() -> FieldContext:
    return gen_context(128, random.Random(128))


@pytest.fixture(scope="session")
def ctx256() -> FieldContext:
    return gen_context(256, random.Random(256))
