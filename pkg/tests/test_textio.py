"""Text format: cycle parsing, group building, hom resolution, errors."""

from __future__ import annotations

import numpy as np
import pytest

from covercalc import BuildLimits, same_group
from covercalc.errors import OrderCapExceeded, ParseError, UnknownReference
from covercalc.textio import (
    evaluate_word,
    hom_from_generator_images,
    parse_source,
    realize_declarations,
)

INTRO = """
# split and non-split covers of the two-element group
group C2
gen t = (1 2)

group V4
gen a = (1 2)
gen b = (3 4)

group C4
gen a = (1 2 3 4)

hom eta0 : V4 -> C2
a -> t
b -> 1

hom eta1 : C4 -> C2
a -> t
"""


def load(text):
    return realize_declarations(*parse_source(text))


def test_intro_objects():
    groups, homs = load(INTRO)
    assert set(groups) == {"C2", "V4", "C4"}
    assert set(homs) == {"eta0", "eta1"}
    assert groups["C2"].order == 2
    assert groups["V4"].order == 4
    assert groups["C4"].order == 4
    assert len(groups) + len(homs) == 5


def test_homs_resolve_correctly():
    groups, homs = load(INTRO)
    eta0, eta1 = homs["eta0"], homs["eta1"]
    assert eta0.is_surjective() and eta1.is_surjective()
    assert len(eta0.kernel().elements) == 2
    assert len(eta1.kernel().elements) == 2
    # eta1's source has an element of order 4, eta0's does not
    assert max(groups["C4"].element_orders()) == 4
    assert max(groups["V4"].element_orders()) == 2


def test_multi_cycle_generator():
    groups, _ = load("group D\ngen r = (1 2 3 4)\ngen s = (1 2)(3 4)\n")
    assert groups["D"].order == 8


def test_points_may_be_comma_separated():
    groups, _ = load("group C3\ngen g = (1, 2, 3)\n")
    assert groups["C3"].order == 3


def test_word_evaluation():
    groups, _ = load(INTRO)
    c4 = groups["C4"]
    gen = c4.generators[0]
    assert evaluate_word(c4, "a a", 1) == int(c4.mul[gen, gen])
    assert evaluate_word(c4, "a^2", 1) == int(c4.mul[gen, gen])
    assert evaluate_word(c4, "a^-1", 1) == int(c4.inv[gen])
    assert evaluate_word(c4, "1", 1) == 0
    assert evaluate_word(c4, "a^4", 1) == 0


def test_word_errors():
    groups, _ = load(INTRO)
    c4 = groups["C4"]
    with pytest.raises(ParseError):
        evaluate_word(c4, "z", 3)
    with pytest.raises(ParseError):
        evaluate_word(c4, "a^", 3)


@pytest.mark.parametrize(
    "text",
    [
        "group X\ngen a = (1 1)",  # repeated point in a cycle
        "group X\ngen a = (1 2)(2 3)",  # point in two cycles
        "group X\ngen a = (1 2",  # unclosed cycle
        "group X\ngen a = (0 1)",  # points are 1-based
        "gen a = (1 2)",  # no header
        "group X\ngen a = (1 2)\ngen a = (3 4)",  # duplicate label
        "group X\ngen a = (1 2)\n\ngroup X\ngen b = (1 2)",  # duplicate name
        "group X\nnonsense line",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        load(text)


def test_parse_error_carries_position():
    try:
        load("group X\ngen a = (1 1)\n")
    except ParseError as err:
        assert err.line == 2
        assert err.column >= 1
    else:  # pragma: no cover
        pytest.fail("expected ParseError")


def test_unknown_group_reference():
    with pytest.raises(UnknownReference):
        load("hom f : A -> B\n")


def test_non_homomorphism_rejected():
    bad = INTRO + "\nhom f : V4 -> C4\na -> a\nb -> 1\n"
    with pytest.raises(ParseError):
        load(bad)


def test_missing_generator_image_rejected():
    bad = INTRO + "\nhom f : V4 -> C2\na -> t\n"
    with pytest.raises(ParseError):
        load(bad)


def test_non_generating_image_set_is_fine_if_total():
    # mapping both generators to the identity is the trivial hom
    text = INTRO + "\nhom z : V4 -> C2\na -> 1\nb -> 1\n"
    _, homs = load(text)
    assert (homs["z"].image == 0).all()


def test_order_cap_respected():
    decls = parse_source("group S\ngen a = (1 2 3 4 5)\ngen b = (1 2)\n")
    with pytest.raises(OrderCapExceeded):
        realize_declarations(*decls, limits=BuildLimits(order_cap=30))


def test_known_groups_are_referencable_but_not_shadowable():
    groups, _ = load(INTRO)
    decls = parse_source("hom f : C4 -> C2\na -> t\n")
    _, homs = realize_declarations(*decls, known_groups=groups)
    assert homs["f"].is_surjective()
    with pytest.raises(ParseError):
        realize_declarations(
            *parse_source("group C4\ngen x = (1 2)\n"), known_groups=groups
        )


def test_hom_from_generator_images_direct():
    groups, _ = load(INTRO)
    v4, c2 = groups["V4"], groups["C2"]
    g0, g1 = v4.generators
    t = c2.generators[0]
    hom = hom_from_generator_images(v4, c2, {g0: t, g1: t})
    assert hom.is_surjective()
    assert len(hom.kernel().elements) == 2
    with pytest.raises(ParseError):
        hom_from_generator_images(v4, c2, {g0: t})  # not a generating set


def test_same_table_groups_interoperate():
    groups_a, homs_a = load(INTRO)
    groups_b, homs_b = load(INTRO)
    assert same_group(groups_a["C2"], groups_b["C2"])
    assert np.array_equal(homs_a["eta1"].image, homs_b["eta1"].image)
