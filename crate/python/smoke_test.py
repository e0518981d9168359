"""Smoke test for the nctheta extension module.

Build and install first:
    cd crates/python && maturin build --release -o dist && pip install dist/nctheta-*.whl
then run:
    python python/smoke_test.py
"""

import cmath
import math

import nctheta


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main():
    # theta(0 | i) = sum_n exp(-pi n^2)
    expected = sum(math.exp(-math.pi * n * n) for n in range(-10, 11))
    assert close(nctheta.theta([[1j]], [0j]), expected, 1e-14)

    z = [0.2 + 0.1j]
    assert nctheta.e_nc(0, 3, [1], z, theta=0.0) == nctheta.e_comm(0, 3, [1], z)

    line = nctheta.LabelTriple(0, 1, 3)
    tensor = line.structure_tensor()
    assert tensor.shape == (1, 2, 3)
    assert close(tensor.get([0], [0], [0]).real, 1.0000000130248243, 1e-9)
    assert close(line.c_mirror([0], [1], [1]), tensor.get([0], [1], [1]).real, 1e-10)
    report = line.verify_addition(samples=5)
    assert report["pass"], report

    diagonal = nctheta.preset("sec5")
    deformed = nctheta.LabelTriple(*diagonal, theta=0.3)
    assert deformed.structure_tensor().shape == (2, 2, 9)
    assert deformed.verify_addition(samples=3)["pass"]

    quiver = nctheta.Quiver(diagonal)
    assert sorted(w for _, _, w in quiver.arrows) == [2, 2, 9]
    assert nctheta.hom_dim(diagonal[0], diagonal[2]) == 9
    assert nctheta.hom_dim(diagonal[0], [[-2, 0], [0, 2]]) == 0
    assert len(nctheta.coset_representatives([[2, 1], [1, 2]])) == 3

    theta12 = 0.3
    f = nctheta.FourierPolynomial({(1, 0): 1.0})
    g = nctheta.FourierPolynomial({(0, 1): 1.0})
    phase = f.star(g, theta=theta12).terms()[(1, 1)]
    assert close(phase, cmath.exp(1j * math.pi * theta12), 1e-14)
    assert nctheta.star_engine_check(theta12, cases=2)["pass"]
    assert nctheta.check_associativity(nctheta.preset("line4"))["status"] == "pass"

    try:
        nctheta.LabelTriple([[1, 0], [0, -4]], [[2, 0], [0, -3]], [[4, 0], [0, -1]], theta=0.3)
    except nctheta.NcThetaError as err:
        assert err.args[0] == "not_compatible"
    else:
        raise AssertionError("incompatible labels accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
