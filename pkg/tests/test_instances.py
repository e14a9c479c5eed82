import pytest
from hypothesis import given
from hypothesis import strategies as st

from asymlin import (
    PROFILES,
    InputError,
    InstanceError,
    ParseError,
    enumerate_v_rep,
    generate_instances,
    parse_instance,
    serialize_instance,
    unit_ball,
)

from conftest import FIXTURES


def test_u_fixture():
    inst = parse_instance((FIXTURES / "u_space.txt").read_text())
    u = inst.build()["u"]
    assert u((3,)) == 3


def test_empty_file_is_valid():
    inst = parse_instance("asymlin/1\n")
    assert inst.spaces == {} and inst.directives == []


def test_bad_rational_names_token():
    with pytest.raises(ParseError) as err:
        parse_instance("asymlin/1\nspace u 1\n  3/0\nend\n")
    assert "3/0" in str(err.value) and (err.value.line, err.value.col) == (3, 3)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "asymlin/2\n",
        "asymlin/1\nspace u 1\n 1\n",
        "asymlin/1\nspace u 2\n 1\nend\n",
        "asymlin/1\ncheck eval u [1]\n",
        "asymlin/1\nfoo\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_instance(text)


def test_semantic_errors_name_the_key():
    with pytest.raises(InstanceError) as err:
        parse_instance("asymlin/1\nlinear A p p\n 1\nend\n").build()
    assert "A" in str(err.value)
    with pytest.raises(InstanceError) as err:
        parse_instance("asymlin/1\nspace u 1\n 1\n 0\nend\nlinear A u u\n 1 2\nend\n").build()
    assert "linear A" in str(err.value)


@given(st.sampled_from(PROFILES), st.integers(0, 50))
def test_round_trip(profile, seed):
    for inst in generate_instances(seed, profile, count=3):
        text = serialize_instance(inst)
        again = parse_instance(text, name=inst.name)
        assert serialize_instance(again) == text
        assert again.spaces == inst.spaces and again.bilinear == inst.bilinear


def test_generation_is_deterministic():
    a = [serialize_instance(i) for i in generate_instances(0, "symmetric-bounded", 10)]
    b = [serialize_instance(i) for i in generate_instances(0, "symmetric-bounded", 10)]
    assert a == b
    with pytest.raises(InputError):
        generate_instances(0, "nope")


def test_asymmetric_profile_has_recession_rays():
    for inst in generate_instances(3, "asymmetric-unbounded", 10):
        p = inst.build()["p"]
        assert enumerate_v_rep(unit_ball(p)).rays


def test_mixed_profile_norms_are_valid():
    for inst in generate_instances(1, "mixed", 100):
        inst.build()  # AsymNorm validation runs on construction
