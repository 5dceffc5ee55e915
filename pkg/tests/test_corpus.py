import pytest

from ordertypes.corpus import GENERATORS, CorpusSpec, generate
from ordertypes.errors import InvalidInput
from ordertypes.geometry import interior_points, is_convex_position, is_cup_or_cap


@pytest.mark.parametrize("gen", GENERATORS)
def test_generators_are_valid_and_deterministic(gen):
    spec = CorpusSpec(15, 3, 7, gen, seed=42)
    a, b = generate(spec), generate(spec)
    assert a == b
    assert all(3 <= len(P) <= 7 for P in a)
    if gen in ("cup", "cap"):
        assert all(is_cup_or_cap(P) for P in a)
    if gen == "convex":
        assert all(is_convex_position(P) for P in a)
    if gen == "wheel":
        assert all(len(interior_points(P)) == (1 if len(P) >= 4 else 0) for P in a)


def test_seeds_differ():
    assert generate(CorpusSpec(5, 5, 5, seed=1)) != generate(CorpusSpec(5, 5, 5, seed=2))


def test_spec_validation():
    with pytest.raises(InvalidInput):
        CorpusSpec(1, 0, 3)
    with pytest.raises(InvalidInput):
        CorpusSpec(1, 4, 3)
    with pytest.raises(InvalidInput):
        CorpusSpec(1, 3, 4, "spiral")
    with pytest.raises(InvalidInput):
        CorpusSpec(-1, 3, 4)
