from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logtangent.errors import DomainError, PrecisionError
from logtangent.logtan import t_value
from logtangent.numkernel import RationalAngle
from logtangent.pslq import pslq_fixed
from logtangent.relations import (
    APPENDIX,
    APPENDIX_CORRECTIONS,
    Derivation,
    Exclusion,
    Relation,
    appendix_relations,
    build_grid,
    canonical_coefficients,
    discover_t_relations,
    explain_relation,
    find_relation,
    parse_relation,
    relation_class_key,
    relation_record,
    relation_text,
    scan_t_relations,
)
from oracles import sqrt_oracle, t_tanh_sinh

A = RationalAngle.of


def t_oracle(r, digits):
    return t_tanh_sinh(Fraction(r), digits)


@pytest.fixture(scope="module")
def disc20():
    return scan_t_relations(20, 80, 32)


def keys(rels):
    return {relation_class_key(r.angles, r.coefficients) for r in rels}


def test_find_relation_mult3a():
    vals = [t_oracle("1/4", 70), t_oracle("1/12", 70)]
    rel = find_relation(vals, 60, 32)
    assert rel.coefficients == (2, -3)


def test_find_relation_tough():
    rs = ["1/15", "2/15", "1/5", "1/3", "2/5"]
    vals = [t_oracle(r, 90) for r in rs]
    rel = find_relation(vals, 80, 32)
    assert rel.coefficients == (15, -15, 5, -9, 10)
    assert rel.norm == 15


def test_find_relation_duplicate():
    x = sqrt_oracle(7, 60)
    assert find_relation([x, x], 50, 5).coefficients == (1, -1)


def test_find_relation_exclusion():
    vals = [sqrt_oracle(2, 70), sqrt_oracle(3, 70), mpmath.pi]
    with mpmath.workdps(70):
        vals[2] = +mpmath.pi
    out = find_relation(vals, 60, 100)
    assert isinstance(out, Exclusion) and out.norm_bound > 100


def test_find_relation_preconditions():
    with pytest.raises(PrecisionError):
        find_relation([mpmath.mpf(1)] * 5, 60, 10)
    with pytest.raises(DomainError):
        find_relation([mpmath.mpf(1)], 60, 10)


def test_pslq_cube_root():
    with mpmath.workdps(60):
        c = mpmath.cbrt(2)
        out = pslq_fixed([c**3, c**2, c, mpmath.mpf(1)], 50, 10)
    assert canonical_coefficients(out.relation) == (1, 0, 0, -2)


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.integers(-20, 20), min_size=3, max_size=3).filter(any),
    st.integers(1, 20),
    st.integers(0, 10**6),
)
def test_agrees_with_mpmath_pslq(coeffs, last, seed):
    # x4 = -(c . x) / last, so (c..., last) is a relation
    with mpmath.workdps(70):
        base = [mpmath.sqrt(seed + 2 + 3 * k) * mpmath.log(k + 5) for k in range(3)]
        x4 = -mpmath.fsum(c * x for c, x in zip(coeffs, base)) / last
        vals = base + [x4]
        ref = mpmath.pslq(vals, maxcoeff=100, maxsteps=10**5)
    rel = find_relation(vals, 60, 100)
    assert isinstance(rel, Relation)
    assert rel.coefficients == canonical_coefficients(ref)
    assert rel.coefficients == canonical_coefficients(list(coeffs) + [last])


def test_grid_classes():
    grid = build_grid(6, 40)
    got = {str(c.rep): sorted(str(m) for m in c.members) for c in grid.classes}
    # 2/5 sits in the class of 1/10, whose own denominator is off the grid
    assert got == {"1/6": ["1/3", "1/6"], "1/4": ["1/4"], "1/5": ["1/5"], "1/10": ["2/5"]}
    assert all(Fraction(c.rep.num, c.rep.den) <= Fraction(1, 4) for c in grid.classes)
    assert len({c.key for c in grid.classes}) == len(grid.classes)


def test_discover_small():
    assert [r.text() for r in discover_t_relations(2, 60)] == ["T(1/2) = 0"]
    texts = [r.text() for r in discover_t_relations(6, 60)]
    assert texts == ["T(1/2) = 0", "T(1/6) - T(1/3) = 0"]


def test_discover_twelve():
    rels = discover_t_relations(12, 80)
    want = [parse_relation(t) for t in ("2T(1/4) = 3T(1/12)", "T(1/3) = T(1/6)", "T(1/8) = T(3/8)", "T(1/12) = T(5/12)")]
    got = {(r.angles, r.coefficients) for r in rels}
    for w in want:
        assert w in got


def test_discover_nine_and_printed_mult9a():
    rels = discover_t_relations(9, 80)
    fixed = parse_relation(APPENDIX_CORRECTIONS["mult9a"][0])
    assert relation_class_key(*fixed) in keys(rels)
    # the printed version is not a relation at all
    printed = parse_relation(dict(APPENDIX)["mult9a"])
    with mpmath.workdps(40):
        res = mpmath.fsum(c * t_oracle(a.fraction, 30) for a, c in zip(*printed))
    assert abs(res) > 1


def test_discover_twenty_matches_appendix(disc20):
    found = keys(disc20.relations)
    appendix = {relation_class_key(a, c) for _, a, c in appendix_relations()}
    assert found == appendix
    assert not disc20.failures
    assert len(disc20.relations) == 22


def test_every_relation_is_explained(disc20):
    for rel in disc20.relations:
        assert explain_relation(rel).explained, rel.text()


def test_soundness(disc20):
    from logtangent.relations import soundness_ratio

    for rel in disc20.relations:
        if rel.kind == "linear":
            assert soundness_ratio(rel) >= mpmath.mpf(10) ** (rel.prec // 2)


def test_relation_invariants(disc20):
    for rel in disc20.relations:
        assert rel.coefficients == canonical_coefficients(rel.coefficients)
        assert rel.residual < mpmath.mpf(10) ** (-rel.prec + 10)


def test_explain_mult3a():
    rel = Relation((A("1/12"), A("1/4")), (3, -2), mpmath.mpf(0), 60)
    d = explain_relation(rel)
    assert isinstance(d, Derivation)
    assert [(s.m, str(s.r)) for _, s in d.steps] == [(3, "1/12")]


def test_explain_tough():
    angles, coeffs = parse_relation(dict(APPENDIX)["tough"])
    d = explain_relation(Relation(angles, coeffs, mpmath.mpf(0), 80))
    got = [(s.m, str(s.r), w) for w, s in d.steps]
    assert got == [
        (3, "1/15", Fraction(5, 2)),
        (3, "2/15", Fraction(-5, 2)),
        (5, "1/15", Fraction(3, 2)),
    ]


def test_explain_reflection():
    rel = Relation((A("1/8"), A("3/8")), (1, -1), mpmath.mpf(0), 60, kind="reflection")
    d = explain_relation(rel)
    assert d.explained and not d.steps and len(d.reflections) == 1


def test_relation_text_and_record():
    angles, coeffs = parse_relation(dict(APPENDIX)["tough"])
    text = relation_text(angles, coeffs)
    assert text == "15 T(1/15) - 15 T(2/15) + 5 T(1/5) - 9 T(1/3) + 10 T(2/5) = 0"
    rec = relation_record(Relation(angles, coeffs, mpmath.mpf("1e-90"), 80))
    assert rec["norm"] == 15 and rec["text"] == text


def test_appendix_table():
    assert len(APPENDIX) == 23
    assert [label for label, *_ in appendix_relations()][-1] == "mult20"
    angles, coeffs = appendix_relations()[-1][1:]
    with mpmath.workdps(50):
        res = mpmath.fsum(c * t_value(a, 40).value for a, c in zip(angles, coeffs))
    assert abs(res) < mpmath.mpf("1e-35")
    with pytest.raises(ValueError):
        parse_relation("3T(1/3) = junk")


@pytest.mark.slow
def test_global_exclusion(disc20):
    from logtangent.relations import global_exclusion

    out = global_exclusion(disc20, 32)
    assert isinstance(out, Exclusion) and out.norm_bound > 32
