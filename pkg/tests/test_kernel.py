import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from rauzy import kernel
from rauzy.induction import backward_orbit
from rauzy.numeric import PRECISION_LADDER

from conftest import BASIS, independent_surface, saddle_ac, surfaces

BACKENDS = kernel.backends()
needs_both = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernel not built")


def test_fallback_is_always_available():
    assert "python" in BACKENDS
    assert kernel.BACKEND in BACKENDS


def test_environment_forces_python():
    env = dict(os.environ, RAUZY_PURE_PYTHON="1")
    proc = subprocess.run([sys.executable, "-c", "from rauzy import kernel; print(kernel.BACKEND)"],
                          capture_output=True, text=True, env=env)
    assert proc.stdout.strip() == "python"


@needs_both
@given(st.lists(st.integers(-10**30, 10**30), min_size=5, max_size=5))
@settings(max_examples=200)
def test_combination_sign_agrees(coeffs):
    bounds = BASIS.bounds_table(["1", "sqrt2", "sqrt3", "sqrt5", "sqrt7"])
    results = {name: m.combination_sign(coeffs, bounds, PRECISION_LADDER) for name, m in BACKENDS.items()}
    assert len(set(results.values())) == 1


def log_lines(surface, steps, backend):
    return backward_orbit(surface, steps, 25, backend=backend).to_jsonl()


@needs_both
def test_backends_agree_on_examples():
    for s in (saddle_ac(), independent_surface()):
        assert log_lines(s, 400, BACKENDS["python"]) == log_lines(s, 400, BACKENDS["cython"])


@needs_both
@given(surfaces(irrational=True))
@settings(max_examples=30, deadline=None)
def test_backends_agree_on_random_surfaces(s):
    assert log_lines(s, 80, BACKENDS["python"]) == log_lines(s, 80, BACKENDS["cython"])
