import os
import subprocess
import sys

import numpy as np
import pytest

from rotinv import kernels
from rotinv.kernels import reference


def random_case(rng, k, n):
    h = rng.normal(size=(k, n, n))
    g = rng.choice([-1.0, 1.0], size=n)
    u = rng.normal(size=n)
    v = rng.normal(size=n)
    return np.ascontiguousarray(h), g, u, v


class TestReferenceKernels:
    def test_word_value_against_direct_product(self):
        rng = np.random.default_rng(0)
        h, _, _, _ = random_case(rng, 4, 5)
        direct = np.trace(h[0] @ h[1] @ h[2] @ h[3])
        assert np.isclose(reference.word_value(h), direct, rtol=1e-13)

    def test_sandwich_value_against_direct_product(self):
        rng = np.random.default_rng(1)
        h, g, u, v = random_case(rng, 3, 4)
        direct = u @ h[0] @ h[1] @ h[2] @ (g * v)
        assert np.isclose(reference.sandwich_value(u, h, g, v), direct, rtol=1e-13)

    def test_empty_sandwich(self):
        rng = np.random.default_rng(2)
        h, g, u, v = random_case(rng, 0, 4)
        assert np.isclose(reference.sandwich_value(u, h, g, v), u @ (g * v), rtol=1e-14)
        du, dv, dt = reference.sandwich_grads(u, h, g, v)
        assert np.allclose(du, g * v)
        assert np.allclose(dv, g * u)
        assert dt.shape == (0, 4, 4)

    def test_word_grads_match_finite_differences(self):
        rng = np.random.default_rng(3)
        h, g, _, _ = random_case(rng, 3, 4)
        grads = reference.word_grads(h, g)
        eps = 1e-7
        for i in range(3):
            for p in range(4):
                for q in range(4):
                    # perturb T_i[p, q], i.e. H_i[p, q] scaled by g[p]
                    hp = h.copy()
                    hp[i, p, q] += eps * g[p]
                    hm = h.copy()
                    hm[i, p, q] -= eps * g[p]
                    fd = (reference.word_value(hp) - reference.word_value(hm)) / (2 * eps)
                    assert abs(grads[i, p, q] - fd) <= 1e-6 * max(1.0, abs(fd))


@pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled backend not built")
class TestBackendParity:
    @pytest.mark.parametrize("k", [0, 1, 2, 5])
    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_all_four_entry_points_agree(self, k, n):
        rng = np.random.default_rng(100 * k + n)
        h, g, u, v = random_case(rng, k, n)
        if k > 0:
            assert np.isclose(
                kernels.word_value(h), reference.word_value(h), rtol=1e-13, atol=1e-13
            )
            assert np.allclose(
                kernels.word_grads(h, g), reference.word_grads(h, g), rtol=1e-13, atol=1e-13
            )
        assert np.isclose(
            kernels.sandwich_value(u, h, g, v),
            reference.sandwich_value(u, h, g, v),
            rtol=1e-13,
            atol=1e-13,
        )
        du_c, dv_c, dt_c = kernels.sandwich_grads(u, h, g, v)
        du_r, dv_r, dt_r = reference.sandwich_grads(u, h, g, v)
        assert np.allclose(du_c, du_r, rtol=1e-13, atol=1e-13)
        assert np.allclose(dv_c, dv_r, rtol=1e-13, atol=1e-13)
        assert np.allclose(dt_c, dt_r, rtol=1e-13, atol=1e-13)

    def test_read_only_inputs_accepted(self):
        rng = np.random.default_rng(9)
        h, g, u, v = random_case(rng, 2, 3)
        for arr in (h, g, u, v):
            arr.setflags(write=False)
        assert np.isfinite(kernels.sandwich_value(u, h, g, v))
        assert np.isfinite(kernels.word_value(h))


class TestBackendSelection:
    def test_environment_variable_forces_reference(self):
        code = (
            "import rotinv.kernels as k; print(k.BACKEND); "
            "print(k.word_value.__module__)"
        )
        env = dict(os.environ, ROTINV_PURE_PYTHON="1")
        out = subprocess.run(
            [sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True
        )
        lines = out.stdout.split()
        assert lines[0] == "reference"
        assert lines[1].endswith("reference")

    def test_results_identical_across_backends_end_to_end(self):
        # full pipeline comparison through a subprocess with the fallback
        code = (
            "import json, rotinv\n"
            "from rotinv import MetricSignature, SystemSpec, verify_basis, theorem2_basis\n"
            "spec = SystemSpec(4, MetricSignature.euclidean(4), n_vectors=2, n_antisymmetric=2)\n"
            "print(verify_basis(spec, theorem2_basis(4), trials=8, seed=3).to_json())\n"
        )
        results = {}
        for backend, extra_env in (("compiled", {}), ("reference", {"ROTINV_PURE_PYTHON": "1"})):
            env = dict(os.environ, **extra_env)
            out = subprocess.run(
                [sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True
            )
            results[backend] = out.stdout
        assert results["compiled"] == results["reference"]
