#!/usr/bin/env python3
"""Smoke test for the qstft_py extension module.

Builds the cdylib with cargo if needed, loads it, and exercises the main
surface: group structure, the analysis/synthesis pair, inversion, the
multiplier operators, and an in-process suite run.
"""

import json
import math
import pathlib
import random
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    lib = ROOT / "target" / "debug" / "libqstft_py.so"
    if not lib.exists():
        print("building qstft-py ...")
        subprocess.run(
            ["cargo", "build", "-p", "qstft-py"], cwd=ROOT, check=True
        )
    stage = pathlib.Path(tempfile.mkdtemp(prefix="qstft-py-"))
    shutil.copy2(lib, stage / "qstft_py.so")
    sys.path.insert(0, str(stage))
    import qstft_py

    return qstft_py


def rel_dist(a, b):
    scale = max(max(abs(x) for x in a), max(abs(x) for x in b), 1e-14)
    return max(abs(x - y) for x, y in zip(a, b)) / scale


def main():
    qstft = load_module()
    rng = random.Random(20260811)

    def rand_vec(n):
        out = []
        while len(out) < n:
            re, im = rng.uniform(-1, 1), rng.uniform(-1, 1)
            if re * re + im * im <= 1.0:
                out.append(complex(re, im))
        return out

    # group structure
    ctx = qstft.Context([6], [[3]])
    assert ctx.order == 6
    assert ctx.subgroup_order == 2
    assert ctx.quotient_size == 3
    assert ctx.dual_size == 6
    assert ctx.coset_reps() == [[0], [1], [2]]
    assert ctx.annihilator() == [[0], [2], [4]]
    assert abs(ctx.character([1], [3]) - complex(-1, 0)) < 1e-14
    print("group structure: ok")

    # error paths
    try:
        qstft.Context([0])
        raise AssertionError("zero factor must be rejected")
    except ValueError:
        pass
    try:
        ctx.analyze([1.0] * 5, [1.0] * 3)
        raise AssertionError("wrong length must be rejected")
    except ValueError:
        pass
    print("error paths: ok")

    # energy identity and inversion
    f = rand_vec(ctx.order)
    g = rand_vec(ctx.quotient_size)
    coeffs = ctx.analyze(f, g)
    assert len(coeffs) == ctx.dual_size * ctx.quotient_size
    cell_w = (1.0 / ctx.order) * 1.0
    lhs = math.sqrt(sum(abs(c) ** 2 for c in coeffs) * cell_w)
    rhs = math.sqrt(sum(abs(x) ** 2 for x in f)) * math.sqrt(
        sum(abs(x) ** 2 for x in g)
    )
    assert abs(lhs - rhs) <= 1e-10 * rhs, (lhs, rhs)
    back = ctx.reconstruct(f, g, g)
    assert rel_dist(back, f) < 1e-10
    print("energy identity and inversion: ok")

    # unit-symbol multiplier acts as the identity
    ones = [complex(1, 0)] * (ctx.dual_size * ctx.quotient_size)
    mf = ctx.multiplier_apply(ones, g, f)
    assert rel_dist(mf, f) < 1e-10
    print("unit-symbol multiplier: ok")

    # two-wavelet apply agrees with its matrix
    sigma = rand_vec(ctx.dual_size * ctx.quotient_size)
    u = rand_vec(ctx.order)
    v = rand_vec(ctx.order)
    pf = ctx.two_wavelet_apply(sigma, u, v, g, f)
    m = ctx.two_wavelet_matrix(sigma, u, v, g)
    via_matrix = [sum(m[i][j] * f[j] for j in range(ctx.order)) for i in range(ctx.order)]
    assert rel_dist(pf, via_matrix) < 1e-12
    s_inf = ctx.two_wavelet_schatten_norm(sigma, u, v, g, float("inf"))
    s_1 = ctx.two_wavelet_schatten_norm(sigma, u, v, g, 1.0)
    assert 0.0 < s_inf <= s_1 * (1 + 1e-12)
    print("two-wavelet operator: ok")

    # directional context on the 4x4 plane
    line = qstft.Context.line(4, (1, 1))
    assert line.order == 16
    assert line.subgroup_order == 4
    img = rand_vec(line.order)
    win = rand_vec(line.quotient_size)
    back = line.reconstruct(img, win, win)
    assert rel_dist(back, img) < 1e-10
    print("directional transform: ok")

    # in-process suite run
    report = json.loads(
        qstft.run_suite(
            json.dumps(
                {
                    "groups": [{"factors": [4], "subgroup": [[2]]}],
                    "suites": ["weil", "inversion", "trace"],
                    "seed": 3,
                    "cases": 2,
                    "trials": 50,
                }
            )
        )
    )
    assert report["summary"]["pass"] is True
    assert report["summary"]["total"] > 0
    print(f"suite run: ok ({report['summary']['total']} checks)")

    try:
        qstft.run_suite("{\"groups\": [], \"suites\": [\"weil\"]}")
        raise AssertionError("empty groups must be rejected")
    except ValueError:
        pass
    print("suite config validation: ok")

    print("smoke test passed")


if __name__ == "__main__":
    main()
