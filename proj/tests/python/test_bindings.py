import cmath
import math

import pytest

widomlab = pytest.importorskip("widomlab")

TWO = [(-1.0, -0.3), (0.3, 1.0)]


def test_symmetric_harmonic_measure():
    assert widomlab.harmonic_measure(TWO, arc=(0.3, 1.0)) == pytest.approx(0.5, abs=1e-12)
    assert widomlab.harmonic_measure(TWO) == pytest.approx(1.0, abs=1e-12)
    # a pole on E is rejected
    with pytest.raises(widomlab.DomainError):
        widomlab.harmonic_measure(TWO, pole=0.5)


def test_single_interval_green():
    # G for [-1, 1] is log|x + sqrt(x^2 - 1)|
    x = 2.0
    [g] = widomlab.green([(-1.0, 1.0)], [x])
    assert g == pytest.approx(math.log(x + math.sqrt(x * x - 1)), rel=1e-10)
    eq = widomlab.equilibrium(TWO)
    assert eq["critical_points"] == pytest.approx([0.0], abs=1e-12)
    assert eq["widom_sum"] == pytest.approx(widomlab.green(TWO, [0.0])[0], rel=1e-10)


def test_validation_errors():
    with pytest.raises(widomlab.ValidationError):
        widomlab.normalize_bands([(1.0, 0.0)])
    with pytest.raises(widomlab.Error):
        widomlab.Reflectionless(TWO, [2.0])
    with pytest.raises(widomlab.ValidationError):
        widomlab.build_sc({"sc": {"depht": 1}})


def test_reflectionless():
    f = widomlab.Reflectionless(TWO, [0.1])
    assert f.mass() + f.atom_mass() == pytest.approx(1.0, abs=1e-10)
    z = 0.2 + 0.5j
    assert f(z).imag > 0
    assert f(z.conjugate()) == pytest.approx(f(z).conjugate(), rel=1e-12)
    assert f.density(0.5) > 0

    g = widomlab.Reflectionless([(0.5, 1.0), (1.5, 2.0), (3.0, 4.5)], [1.2, 2.0], anchor=0.0)
    assert 0 < g.atom_mass() < 1
    assert g.mass() + g.atom_mass() == pytest.approx(1.0, abs=1e-8)
    assert cmath.isfinite(g(1.0 + 1e-3j))


def test_homogeneity():
    r = widomlab.is_homogeneous([(0.0, 1.0), (2.0, 3.0)], 0.4)
    assert r["holds"]
    assert r["worst_ratio"] == pytest.approx(0.5, rel=1e-9)


def test_constructions_match_cli_shape():
    sc = widomlab.build_sc({"sc": {"depth": 1}})
    assert len(sc["segments"]) == 5
    assert sc["mass_checks_passed"]
    pm = widomlab.build_pointmass({"pointmass": {"depth": 2}})
    assert [s["n"] for s in pm["steps"]] == [1, 2]
    rep = widomlab.verify(["AC1"])
    assert rep["all_passed"]
    assert widomlab.suite_ids("closed-forms") == ["AC1", "AC2", "AC3"]
