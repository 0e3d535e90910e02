"""Shape catalog: measures, validation, serialization."""

import numpy as np
import pytest

import dropcap as dc
from dropcap.errors import ValidationError

import oracles


BALL3 = dc.Ball((0.0, 0.0, 0.0), 1.0)


def test_closed_form_measures():
    assert dc.perimeter(BALL3) == pytest.approx(4.0 * np.pi, rel=1e-14)
    assert dc.volume(BALL3) == pytest.approx(4.0 * np.pi / 3.0, rel=1e-14)
    disk = dc.Ball((1.0, -2.0), 2.0)
    assert dc.perimeter(disk) == pytest.approx(4.0 * np.pi, rel=1e-14)
    assert dc.volume(disk) == pytest.approx(4.0 * np.pi, rel=1e-14)
    ann = dc.Annulus((0.0, 0.0, 0.0), 0.5, 1.0)
    assert dc.perimeter(ann) == pytest.approx(4.0 * np.pi * (1.0 + 0.25), rel=1e-14)
    assert dc.volume(ann) == pytest.approx(4.0 * np.pi / 3.0 * (1 - 0.125), rel=1e-14)
    box = dc.Box((0.0, 0.0, 0.0), (1.0, 0.5, 0.25))
    assert dc.volume(box) == pytest.approx(2.0 * 1.0 * 0.5, rel=1e-14)
    assert dc.perimeter(box) == pytest.approx(2 * (2 * 1 + 2 * 0.5 + 1 * 0.5), rel=1e-14)


def test_union_measures_add():
    u = dc.UnionOfBalls((dc.Ball((0, 0, 0), 1.0), dc.Ball((5, 0, 0), 0.5)))
    assert dc.volume(u) == pytest.approx(4 * np.pi / 3 * (1 + 0.125), rel=1e-14)
    assert dc.perimeter(u) == pytest.approx(4 * np.pi * (1 + 0.25), rel=1e-14)


def test_regular_polygon_perimeter_matches_oracle():
    for m in (3, 4, 6, 12):
        R = np.sqrt(2.0 * np.pi / (m * np.sin(2.0 * np.pi / m)))
        ang = 2.0 * np.pi * np.arange(m) / m
        poly = dc.ConvexPolygon2D(
            tuple((R * np.cos(a), R * np.sin(a)) for a in ang)
        )
        assert dc.volume(poly) == pytest.approx(np.pi, rel=1e-12)
        assert dc.perimeter(poly) == pytest.approx(
            oracles.regular_polygon_perimeter(m), rel=1e-12
        )


def test_validation_rejects_bad_inputs():
    with pytest.raises(ValidationError):
        dc.Ball((0.0, 0.0, 0.0), -1.0)
    with pytest.raises(ValidationError):
        dc.Annulus((0.0, 0.0, 0.0), 1.0, 0.5)
    with pytest.raises(ValidationError):
        dc.UnionOfBalls((dc.Ball((0, 0, 0), 1.0), dc.Ball((1, 0, 0), 1.0)))
    with pytest.raises(ValidationError):
        dc.Box((0.0, 0.0), (1.0, 0.0))
    with pytest.raises(ValidationError):  # clockwise square
        dc.ConvexPolygon2D(((0, 0), (0, 1), (1, 1), (1, 0)))
    with pytest.raises(ValidationError):  # profile touches zero
        dc.NearlySpherical(modes=((0, 0, 1.0),), eps=-4.0)


def test_nearly_spherical_ball_limit():
    s = dc.NearlySpherical(modes=((2, 0, 1.0),), eps=0.0)
    assert dc.perimeter(s) == pytest.approx(4.0 * np.pi, rel=1e-13)
    assert dc.volume(s) == pytest.approx(4.0 * np.pi / 3.0, rel=1e-13)
    assert dc.symmetric_difference_to_unit_ball(s) == pytest.approx(0.0, abs=1e-13)


def test_renormalize_restores_unit_volume():
    s = dc.NearlySpherical(modes=((2, 0, 1.0), (3, 1, -0.4)), eps=0.12)
    r = dc.renormalize_to_unit_volume(s)
    assert dc.volume(r) == pytest.approx(4.0 * np.pi / 3.0, rel=1e-12)
    assert dc.perimeter(r) >= 4.0 * np.pi - 1e-12  # isoperimetry


def test_json_roundtrip_every_variant():
    shapes = [
        BALL3,
        dc.Ball((1.0, 2.0), 0.5),
        dc.Annulus((0.0, 0.0, 0.0), 0.5, 1.0),
        dc.UnionOfBalls((dc.Ball((0, 0, 0), 1.0), dc.Ball((4, 0, 0), 0.5))),
        dc.Box((0.0, 0.0, 0.0), (1.0, 1.0, 2.0)),
        dc.ConvexPolygon2D(((0, 0), (1, 0), (1, 1), (0, 1))),
        dc.NearlySpherical(modes=((2, 0, 0.8), (3, -2, 0.1)), eps=0.1),
    ]
    for s in shapes:
        t = dc.shape_from_json(dc.shape_to_json(s))
        assert type(t) is type(s)
        assert dc.volume(t) == pytest.approx(dc.volume(s), rel=1e-14)
        assert dc.dim_of(t) == dc.dim_of(s)


def test_unknown_variant_rejected():
    with pytest.raises(ValidationError):
        dc.shape_from_dict({"variant": "pyramid"})
    with pytest.raises(ValidationError):
        dc.shape_from_dict({"variant": "ball", "center": [0, 0, 0]})


def test_dim_of():
    assert dc.dim_of(BALL3) == 3
    assert dc.dim_of(dc.Ball((0.0, 0.0), 1.0)) == 2
    assert dc.dim_of(dc.ConvexPolygon2D(((0, 0), (1, 0), (0, 1)))) == 2
