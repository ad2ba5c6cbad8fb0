"""Smoke test for the compiled bindings; exits nonzero on the first failure."""

import sys

import yangian


def main() -> int:
    so3, so4, sp2, sp4 = (yangian.Metric(k, n) for k, n in [("so", 3), ("so", 4), ("sp", 2), ("sp", 4)])
    assert (so4.eps, sp2.eps) == (1, -1)
    assert so4.beta == "1" and sp2.beta == "2"

    assert yangian.verify_ybe(so4).is_zero
    assert all(r.is_zero for r in yangian.verify_structural(sp4))

    spinor = yangian.Rep.spinor(so4)
    assert yangian.check_linear(spinor).all_zero()
    assert yangian.verify_rll(spinor).is_zero
    assert spinor.casimir() == "3/4"

    fundamental = yangian.check_linear(yangian.Rep.fundamental(so3))
    c13 = fundamental.get("C.1.3")
    assert c13 is not None and not c13.is_zero and c13.witness is not None

    js = yangian.Rep.js(sp2)
    assert yangian.check_lie_resolution(js, relation="derived").all_zero()
    assert not yangian.check_lie_resolution(js).all_zero()
    matrix = yangian.check_lie_resolution(js, backend="matrix", relation="derived")
    assert matrix.all_zero()

    assert yangian.check_quadratic(yangian.Rep.r_quadratic(so3)).all_zero()

    c, proportional, central = yangian.center_function(spinor)
    assert c == "(u^2 - u - 3/4)" and proportional.is_zero and central.is_zero

    assert yangian.char_poly(3, so4) == ["3", "-1/2*m2 + 2", "-1/2*m2"]
    assert yangian.char_poly(2, sp2) == ["2", "-m2"]

    original, flipped, derived = yangian.decompose_free(yangian.Metric("so", 2))
    assert derived.is_zero and not original.is_zero and not flipped.is_zero

    again = yangian.Rep.from_text(spinor.to_text())
    assert yangian.check_linear(again).all_zero()

    try:
        yangian.Metric("sp", 3)
    except ValueError:
        pass
    else:
        raise AssertionError("odd symplectic dimension accepted")

    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
