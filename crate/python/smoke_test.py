#!/usr/bin/env python3
"""Smoke test for the secrecy_bounds_py extension module.

Builds the cdylib if needed, imports it from a scratch directory, and
checks a handful of values frozen against high-precision references, plus
the sign conventions and certification behaviour downstream code relies
on. Exits nonzero on the first failure.
"""

import math
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[1]
LIB = ROOT / "target" / "release" / "libsecrecy_bounds_py.so"


def import_module():
    if shutil.which("cargo") is not None:
        subprocess.run(
            ["cargo", "build", "--release", "-p", "secrecy-bounds-py"],
            cwd=ROOT,
            check=True,
        )
    elif not LIB.exists():
        sys.exit(f"cargo is unavailable and {LIB} does not exist")
    scratch = tempfile.mkdtemp(prefix="secrecy_bounds_py_")
    shutil.copy2(LIB, pathlib.Path(scratch) / "secrecy_bounds_py.so")
    sys.path.insert(0, scratch)
    import secrecy_bounds_py

    return secrecy_bounds_py


def close(got, want, tol=1e-12):
    return abs(got - want) <= tol


def main():
    sb = import_module()

    uniform2 = sb.Distribution.uniform(2)
    bsc01 = sb.Channel.binary_symmetric(0.1)

    h = sb.entropy(sb.Distribution([0.9, 0.1]))
    assert close(h, 0.3250829733914482), f"entropy of (0.9, 0.1) drifted: {h}"

    mi = sb.mutual_information(uniform2, bsc01)
    assert close(mi, 0.3680642071684971), f"uniform-input BSC(0.1) information drifted: {mi}"

    cap = sb.capacity(bsc01)
    assert cap["gap"] <= 1e-10, f"capacity gap not certified: {cap['gap']}"
    assert close(cap["value"], mi, 1e-9), "BSC capacity must sit at the uniform input"

    p = sb.psi(0.5, bsc01, uniform2)
    f = sb.phi(0.5, bsc01, uniform2)
    assert close(p, 0.22490046096410807), f"psi at rho 0.5 drifted: {p}"
    assert close(f, 0.24734812091805358), f"phi at rho 0.5 drifted: {f}"
    assert p <= f, "the hashed moment must not exceed the Gallager moment"

    m = sb.phi_max(0.5, bsc01)
    assert m["value"] >= f - 1e-12, "the phi maximum cannot sit below the uniform value"
    assert m["gap"] <= 1e-8, f"phi maximisation gap not certified: {m['gap']}"

    pa = sb.pa_bound(2, bsc01, rho=0.5)
    assert close(pa["value"], 2.5043961347997645), f"fixed-tilt pa bound drifted: {pa['value']}"
    assert pa["formula"] == "pa-uniform-hash", pa["formula"]
    assert "vacuous" in pa["flags"], "2.5 nats on a 1-bit secret certifies nothing"

    opt = sb.pa_bound(2, bsc01)
    assert opt["value"] <= pa["value"] + 1e-12, "optimised tilt lost to a fixed one"
    assert 0.0 < opt["rho"] <= 1.0, f"optimised tilt out of range: {opt['rho']}"

    res = sb.resolvability(2, 1, 2, bsc01, rho=0.5)
    assert close(res["value"], 2.5612496949731395), f"resolvability drifted: {res['value']}"
    assert pa["value"] <= res["value"], "the psi route must not exceed the phi route"

    size = sb.achievable_secret_size(8, 8, bsc01, 4, 0.1)
    assert close(size, 2.2866262546856836, 1e-6), f"achievable size drifted: {size}"

    fam = sb.HashFamily(4, 2)
    assert fam.member_count() == (16 - 1) * (16 - 2), "surjective 2x4 matrix count"
    report = fam.verify_two_universal()
    assert report["member_count"] == fam.member_count()
    assert report["max_collision"] <= report["threshold"] == 0.25

    ident = sb.LinearHash(2, [0b10, 0b01])
    assert ident.apply(0b11) == 0b11, "identity rows must map a word to itself"
    assert len(fam.members()) == fam.member_count()

    # Degraded BSC pair: the secrecy gap at the trivial outer/inner chain.
    chain = sb.MarkovChain(
        sb.Distribution.uniform(1),
        sb.Channel([[0.5, 0.5]]),
        sb.Channel.identity(2),
        sb.Channel.binary_symmetric(0.05),
        sb.Channel.binary_symmetric(0.14),
    )
    info = chain.informations()
    gap = info["vy_given_u"] - info["vz_given_u"]
    assert close(gap, 0.20644824171806594), f"degraded-BSC gap drifted: {gap}"

    inside = sb.certify_strong(chain, 0.0, gap - 1e-6)
    assert inside["certified"], "a rate 1e-6 inside the gap must certify"
    assert min(inside["residuals"].values()) >= -1e-9

    outside = sb.certify_strong(chain, 0.0, gap + 1e-3)
    assert not outside["certified"], "a rate above the gap must be rejected"
    assert "secrecy_gap" in outside["violations"]

    decaying = sb.leakage_exponent(chain, 0.3, 0.3 + info["vz_given_u"] + 0.05)
    assert decaying["exponent"] < 0, "redundancy above I(V;Z|U) must force decay"
    stuck = sb.leakage_exponent(chain, 0.3, 0.3)
    assert stuck["exponent"] >= -1e-9, "zero redundancy cannot certify decay"

    r1p = 0.3 + info["vz_given_u"] + 0.05
    rc8 = sb.random_coding_bound(chain, 0.3, r1p, decaying["rho"], 8)
    rc16 = sb.random_coding_bound(chain, 0.3, r1p, decaying["rho"], 16)
    assert rc8["formula"] == "random-coding"
    assert rc16["value"] < rc8["value"], "a negative exponent must shrink the bound with blocklength"
    assert close(rc16["value"], math.exp(16 * decaying["exponent"]) / decaying["rho"], 1e-9), \
        "the blocklength bound must exponentiate the per-letter exponent"

    # With identical branches no private rate survives, so the frontier
    # collapses onto the common-rate axis.
    points = sb.region_sweep(bsc01, bsc01, "strong", restarts=20)
    assert points, "the sweep must return at least the corner points"
    assert max(pt["r1"] for pt in points) == 0.0, "identical branches admit no secrecy"
    assert max(pt["r0"] for pt in points) > 0.36, "the common rate must reach capacity"

    print(f"ok: {LIB.name} passed all smoke checks")


if __name__ == "__main__":
    main()
