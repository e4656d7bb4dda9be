#!/usr/bin/env python3
"""Smoke test for the parabose_py extension module.

Builds nothing itself: compile the module first with

    cargo build -p parabose-py --release

then run

    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def locate_cdylib() -> Path:
    names = ["libparabose_py.so", "parabose_py.dll", "libparabose_py.dylib"]
    for profile in ("release", "debug"):
        for name in names:
            candidate = REPO / "target" / profile / name
            if candidate.exists():
                return candidate
    sys.exit(
        "parabose_py cdylib not found; build it with "
        "`cargo build -p parabose-py --release`"
    )


def import_module():
    lib = locate_cdylib()
    stage = Path(tempfile.mkdtemp(prefix="parabose_py_"))
    shutil.copy2(lib, stage / "parabose_py.so")
    sys.path.insert(0, str(stage))
    import parabose_py

    return parabose_py


def approx(x, y, tol=1e-12):
    assert abs(x - y) <= tol * max(1.0, abs(x), abs(y)), f"{x} != {y} (tol {tol})"


def main():
    pb = import_module()

    # canonical ground state: Gaussian, 1/pi at the origin
    r = pb.wn(0, pb.ParaParam(0.5), 0.0, 0.0)
    approx(r.value, 1.0 / math.pi)
    assert r.status == "Exact"

    # ground state at a = 3/2 equals the canonical first excited state
    a32 = pb.ParaParam.half_integer(1)
    assert a32.half_integer_m == 1
    for r2 in (0.0, 0.5, 1.0, 4.0):
        approx(pb.wn(0, a32, math.sqrt(r2), 0.0).value, pb.canonical_wn(1, math.sqrt(r2), 0.0))

    # the two closed forms agree
    for n in range(6):
        v29 = pb.wn(n, a32, 1.2, -0.4, formula="a29").value
        v31 = pb.wn(n, a32, 1.2, -0.4, formula="a31").value
        approx(v29, v31, 1e-9)

    # collapsed polynomial form, m = 1 at r^2 = 1: e^{-1}/pi
    approx(pb.w0_polynomial(1, 1.0, 0.0).value, math.exp(-1.0) / math.pi)

    # convergence guard classification
    a08 = pb.ParaParam(0.8)
    assert pb.convergence_guard(2, a08) == "NotGuaranteed"
    assert pb.convergence_guard(3, a08) == "Converged"
    assert pb.convergence_guard(0, a32) == "Exact"
    try:
        pb.wn(2, a08, 1.0, 0.0)
    except ValueError:
        pass
    else:
        sys.exit("expected the convergence guard to refuse n=2, a=0.8")
    assert pb.wn(2, a08, 1.0, 0.0, allow_unguaranteed=True, rel_tol=1e-6,
                 max_terms=20000).status == "NotGuaranteed"

    # matrix elements: three routes agree; <0|X^4|0> = (a)_2 at t = 1
    a13 = pb.ParaParam(1.3)
    for route in ("j", "s", "recurrence"):
        approx(pb.matelem_diag(0, 2, a13, 1.0, route=route), 1.3 * 2.3, 1e-10)
    off = pb.matelem_offdiag(0, 1, 1, a32, 1.0, 0.0)
    approx(off.real, -math.sqrt(6.0) / 2.0)
    approx(off.imag, 0.0)

    # exponential element routes agree
    e1 = pb.exp_diag(1, a32, 2.0, route="a28").value
    e2 = pb.exp_diag(1, a32, 2.0, route="series").value
    approx(e1, -0.4043537731417556, 1e-12)
    approx(e1, e2, 1e-11)

    # wave functions: canonical ground state at the origin is pi^{-1/4}
    value, diverged = pb.wavefn(0, pb.ParaParam(0.5), 0.0)
    approx(value, math.pi ** -0.25)
    assert not diverged
    value, diverged = pb.wavefn(0, pb.ParaParam(0.3), 0.0)
    assert diverged and math.isinf(value)
    assert abs(pb.waveeq_residual(2, pb.ParaParam(1.5), 0.8)) < 1e-6

    # special-function kernels
    approx(pb.rising_factorial(3.0, 2), 12.0)
    approx(pb.laguerre(1, 0.0, 2.5), 1.0 - 2.5)
    approx(pb.hermite(2, 0.7), 4 * 0.7**2 - 2)
    approx(pb.hyp1f1(1.3, 1.3, 1.0).value, math.e, 1e-12)

    # defining-integral oracle round trip at modest resolution
    w_quad = pb.wigner_quadrature(2, a32, 1.0, 0.0, nodes_per_axis=120)
    approx(w_quad, pb.wn(2, a32, 1.0, 0.0).value, 1e-8)

    # one fast verification suite end to end
    failures = [name for (name, _, _, ok) in pb.run_checks("specfun") if not ok]
    assert not failures, f"specfun checks failed: {failures}"

    print("parabose_py smoke test: all checks passed")


if __name__ == "__main__":
    main()
