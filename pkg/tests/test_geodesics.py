import json
import math
import warnings
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orbizeta.errors import (AuditFailure, DiscretenessWarning, EmptySpectrumError, InvariantViolation,
                             ParseError)
from orbizeta.geodesics import (GeodesicRecord, GroupPresentation, LengthSpectrum, enumerate_classes,
                                generate_spectrum, hyperbolic_translation, load_group, load_spectrum,
                                octagon_group, parse_spectrum, save_spectrum, spectrum_to_json, systole,
                                translation_length)

DEMO_DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def _quiet(fn, *args, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DiscretenessWarning)
        return fn(*args, **kw)


# --------------------------------------------------------------------------
# records and JSON


@st.composite
def spectra(draw):
    prims = sorted(draw(st.lists(st.floats(0.05, 5.0, allow_nan=False), max_size=8)))
    recs = []
    for p in prims:
        n = draw(st.integers(1, 3))
        eig = draw(st.one_of(st.none(), st.lists(
            st.builds(complex, st.floats(-2, 2), st.floats(-2, 2)), min_size=1, max_size=3)))
        recs.append(GeodesicRecord(n * p, p, n, draw(st.integers(1, 4)), eig))
    recs.sort(key=lambda r: r.length)
    top = max((r.length for r in recs), default=0.0)
    return LengthSpectrum(tuple(recs), top + draw(st.floats(0, 3)))


@given(spectra())
def test_json_round_trip_bit_exact(spec):
    text = spectrum_to_json(spec)
    back = parse_spectrum(text)
    assert back.records == spec.records
    assert back.l_max == spec.l_max
    assert spectrum_to_json(back) == text


def test_save_load_file(tmp_path):
    spec = LengthSpectrum((GeodesicRecord(1.5, 1.5), GeodesicRecord(3.0, 1.5, 2, 2)), 4.0)
    path = tmp_path / "s.json"
    save_spectrum(spec, path)
    first = path.read_bytes()
    save_spectrum(load_spectrum(path), path)
    assert path.read_bytes() == first


def test_empty_file_is_empty_spectrum(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("")
    spec = load_spectrum(path)
    assert len(spec) == 0 and spec.l_max == 0.0


def test_power_record_consistency():
    ok = parse_spectrum(json.dumps({"records": [{"length": 2.0, "primitive_length": 1.0, "n_gamma": 2}]}))
    assert ok.records[0].n_gamma == 2
    with pytest.raises(InvariantViolation):
        parse_spectrum(json.dumps({"records": [{"length": 2.0, "primitive_length": 1.1, "n_gamma": 2}]}))


def test_invariant_violation_reports_record_index():
    doc = {"records": [{"length": 1.0, "primitive_length": 1.0},
                       {"length": 2.0, "primitive_length": 1.0, "n_gamma": 2},
                       {"length": -1.0, "primitive_length": 1.0}]}
    with pytest.raises(InvariantViolation) as exc:
        parse_spectrum(json.dumps(doc))
    assert exc.value.index == 2


@pytest.mark.parametrize("text", [
    "{not json",
    "[]",
    json.dumps({"records": [{"length": "1.0", "primitive_length": 1.0}]}),
    json.dumps({"records": [{"primitive_length": 1.0}]}),
    json.dumps({"records": [{"length": 1.0, "primitive_length": 1.0, "colour": 3}]}),
    json.dumps({"records": [{"length": 1.0, "primitive_length": 1.0, "n_gamma": 1.5}]}),
    json.dumps({"records": [{"length": 1.0, "primitive_length": 1.0, "rho_eigenvalues": [[1.0]]}]}),
    json.dumps({"records": [], "extra": 1}),
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_spectrum(text)


def test_unsorted_records_rejected():
    with pytest.raises(InvariantViolation) as exc:
        LengthSpectrum((GeodesicRecord(2.0, 2.0), GeodesicRecord(1.0, 1.0)), 3.0)
    assert exc.value.index == 1


def test_record_above_l_max_rejected():
    with pytest.raises(InvariantViolation):
        LengthSpectrum((GeodesicRecord(2.0, 2.0),), 1.0)


def test_trace_uses_powers_of_primitive_eigenvalues():
    r = GeodesicRecord(3.0, 1.0, 3, 1, (1j, -1))
    assert r.trace() == complex(-1j - 1)
    assert GeodesicRecord(1.0, 1.0).trace(dim=4) == 4


def test_growth_exponent():
    spec = LengthSpectrum((GeodesicRecord(2.0, 2.0, 1, 1, (math.e, 0.5)),), 2.0)
    assert spec.growth_exponent() == pytest.approx(0.5)
    assert LengthSpectrum((GeodesicRecord(2.0, 2.0),), 2.0).growth_exponent() == 0.0


def test_truncated():
    spec = LengthSpectrum(tuple(GeodesicRecord(float(k), float(k)) for k in range(1, 6)), 5.0)
    t = spec.truncated(3.0)
    assert [r.length for r in t] == [1.0, 2.0, 3.0] and t.l_max == 3.0


def test_systole():
    spec = LengthSpectrum((GeodesicRecord(1.5, 1.5), GeodesicRecord(2.0, 1.0, 2)), 2.0)
    assert systole(spec) == 1.0
    with pytest.raises(EmptySpectrumError):
        systole(LengthSpectrum())


# --------------------------------------------------------------------------
# groups


def test_generator_validation():
    with pytest.raises(InvariantViolation):
        GroupPresentation((np.eye(3),))
    with pytest.raises(InvariantViolation):
        GroupPresentation((2 * np.eye(2),))
    with pytest.raises(InvariantViolation):
        GroupPresentation((np.eye(2),), ("ab",))


def test_load_group_errors(tmp_path):
    p = tmp_path / "g.json"
    p.write_text('{"generators": [[[1, 0], [0]]]}')
    with pytest.raises(ParseError):
        load_group(p)
    p.write_text('{"gens": []}')
    with pytest.raises(ParseError):
        load_group(p)


def test_octagon_relator_is_identity():
    grp = octagon_group()
    m = grp.word_matrix(grp.relators[0])
    assert min(np.max(np.abs(m - np.eye(2))), np.max(np.abs(m + np.eye(2)))) < 1e-10


def test_demo_group_files_load():
    tri = load_group(DEMO_DATA / "triangle_237_group.json")
    for w in tri.relators:
        m = tri.word_matrix(w)
        assert min(np.max(np.abs(m - np.eye(2))), np.max(np.abs(m + np.eye(2)))) < 1e-10


def test_translation_length():
    assert translation_length(np.trace(hyperbolic_translation(1.7))) == pytest.approx(1.7, rel=1e-14)
    assert translation_length(-2 * math.cosh(0.4)) == pytest.approx(0.8, rel=1e-14)


# --------------------------------------------------------------------------
# enumeration


def test_cyclic_group_powers():
    grp = GroupPresentation((hyperbolic_translation(1.0),))
    spec = generate_spectrum(grp, 4.5)
    assert [(r.n_gamma, r.class_count) for r in spec] == [(k, 2) for k in range(1, 5)]
    for k, r in enumerate(spec, start=1):
        assert r.length == pytest.approx(k, rel=1e-12)
        assert r.primitive_length == pytest.approx(1.0, rel=1e-12)


def test_octagon_systole_and_first_class_count(octagon_spectrum_6):
    # systole of the regular octagon surface: 2 arccosh(1 + sqrt 2)
    sys = 2 * math.acosh(1 + math.sqrt(2))
    assert systole(octagon_spectrum_6) == pytest.approx(sys, rel=1e-12)
    first = octagon_spectrum_6.records[0]
    assert first.n_gamma == 1 and first.class_count % 2 == 0


def test_octagon_audit_margins_agree(octagon_spectrum_6):
    grp = octagon_group()
    ref = _quiet(generate_spectrum, grp, 4.5, 1)
    for margin in (2, 3):
        other = _quiet(generate_spectrum, grp, 4.5, margin)
        assert [(r.n_gamma, r.class_count) for r in other] == [(r.n_gamma, r.class_count) for r in ref]
        assert all(abs(a.length - b.length) <= 1e-12 for a, b in zip(ref, other))


def test_conjugation_invariance(octagon_spectrum_6):
    h = np.array([[2.0, 0.3], [0.5, 0.575]])
    h /= math.sqrt(np.linalg.det(h))
    other = _quiet(generate_spectrum, octagon_group().conjugated(h), 6.0, 1)
    assert len(other) == len(octagon_spectrum_6)
    for a, b in zip(octagon_spectrum_6, other):
        assert (a.n_gamma, a.class_count) == (b.n_gamma, b.class_count)
        assert abs(a.length - b.length) <= 1e-9


def test_monotone_in_l_max(octagon_spectrum_6):
    small = _quiet(generate_spectrum, octagon_group(), 5.0, 1)
    big = octagon_spectrum_6.truncated(5.0)
    assert [(r.n_gamma, r.class_count) for r in small] == [(r.n_gamma, r.class_count) for r in big]


def test_inverse_closure_even_class_counts(octagon_spectrum_6):
    # no element of a surface group is conjugate to its inverse
    assert all(r.class_count % 2 == 0 for r in octagon_spectrum_6)


def test_power_records_match_primitives(octagon_spectrum_6):
    prims = {round(r.primitive_length, 8): r.class_count for r in octagon_spectrum_6.primitives}
    for r in octagon_spectrum_6:
        if r.n_gamma > 1:
            assert prims[round(r.primitive_length, 8)] == r.class_count


def test_enumerate_classes_words_reproduce_lengths():
    grp = octagon_group()
    census = enumerate_classes(grp, 4, 5.0)
    for c in census.classes:
        tr = float(np.trace(grp.word_matrix(c.word)))
        assert translation_length(tr) == pytest.approx(c.length, rel=1e-10)


def test_triangle_group_elliptic_orders():
    grp = load_group(DEMO_DATA / "triangle_237_group.json")
    spec = _quiet(generate_spectrum, grp, 3.0, 1, elliptic_orders=(2, 3, 7))
    assert len(spec) > 0
    with pytest.raises(InvariantViolation):
        _quiet(generate_spectrum, grp, 3.0, 1, elliptic_orders=(2, 3, 8))


def test_triangle_group_undeclared_elliptics_warn():
    grp = load_group(DEMO_DATA / "triangle_237_group.json")
    with pytest.warns(DiscretenessWarning):
        generate_spectrum(grp, 2.0, 1)


def test_audit_failure_when_depth_too_small():
    with pytest.raises(AuditFailure):
        _quiet(generate_spectrum, octagon_group(), 6.0, 1, max_depth=3)


def test_bad_arguments():
    with pytest.raises(ValueError):
        generate_spectrum(octagon_group(), 3.0, 0)
    with pytest.raises(ValueError):
        generate_spectrum(octagon_group(), -1.0)
