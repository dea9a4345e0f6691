import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from forge import oracle as O
from forge.pauli import DimensionError, PauliString
from forge.stabilizer import (
    StabilizerTableau,
    TableauError,
    canonicalize,
    from_graph,
    group_equal,
    in_group,
    rref,
)

T = StabilizerTableau.from_strings
BELL = T(["XX", "ZZ"])
GHZ4 = T(["XXXX", "ZZII", "IZZI", "IIZZ"])


class TestValidate:
    def test_bell_is_valid(self):
        assert BELL.validate() is BELL and BELL.full_rank

    @pytest.mark.parametrize(
        "gens, message",
        [
            (["XI", "ZI"], "anticommute"),
            (["XX", "XX"], "dependent"),
            (["iXX"], "non-Hermitian"),
        ],
    )
    def test_rejects(self, gens, message):
        with pytest.raises(TableauError, match=message):
            T(gens).validate()

    def test_rejects_unknown_role(self):
        with pytest.raises(TableauError):
            T(["XX", "ZZ"], roles=["input", "sideways"])

    def test_dimension_checked(self):
        with pytest.raises(DimensionError):
            StabilizerTableau((PauliString.from_str("XX"),), 3)


class TestGroupEquality:
    def test_generator_products_do_not_matter(self):
        assert group_equal(BELL, T(["XX", "-YY"]))

    def test_sign_matters(self):
        assert not group_equal(BELL, T(["XX", "-ZZ"]))

    def test_size_mismatch(self):
        with pytest.raises(DimensionError):
            group_equal(BELL, GHZ4)

    def test_in_group(self):
        assert in_group(PauliString.from_str("YY"), BELL.generators) == -1
        assert in_group(PauliString.from_str("XZ"), BELL.generators) is None

    def test_canonical_form_is_idempotent(self):
        c = canonicalize(GHZ4)
        assert canonicalize(c) == c and group_equal(c, GHZ4)


class TestGraphTableau:
    def test_edge(self):
        t = from_graph([[0, 1], [1, 0]])
        assert [str(g) for g in t.generators] == ["+XZ", "+ZX"]

    @pytest.mark.parametrize("adj", [[[0, 1], [0, 0]], [[1, 0], [0, 0]]])
    def test_rejects_bad_adjacency(self, adj):
        with pytest.raises(TableauError):
            from_graph(adj)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(2, 5).flatmap(lambda n: st.lists(st.booleans(), min_size=n * n, max_size=n * n).map(
        lambda bits: np.triu(np.array(bits, dtype=int).reshape(n, n), 1))))
    def test_matches_dense_graph_state(self, upper):
        adj = upper + upper.T
        t = from_graph(adj).validate()
        s = O.graph_state(adj)
        assert all(O.expectation_ok(g, s) for g in t.generators)


class TestSerialization:
    def test_json_round_trip(self):
        t = T(["-ZYI", "-ZIY", "-XZZ"], roles=["output", "input", "input"])
        assert StabilizerTableau.from_json(t.to_json()) == t

    def test_permute_keeps_group(self):
        t = T(["-ZYI", "-ZIY", "-XZZ"])
        back = t.permute([2, 0, 1]).permute([1, 2, 0])
        assert group_equal(back, t)

    def test_rref_drops_dependent_rows(self):
        rows = rref(BELL.generators + (PauliString.from_str("-YY"),), 2)
        assert len(rows) == 2
