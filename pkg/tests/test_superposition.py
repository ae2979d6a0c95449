import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcasim.superposition import (
    NormalizationError,
    Superposition,
    Tolerance,
    accumulate,
)

R = 1.0 / math.sqrt(2.0)


def bell() -> Superposition:
    return Superposition({"00": R, "11": R})


amplitudes = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)
labels = st.text(alphabet="abc01", min_size=1, max_size=4)
superpositions = st.dictionaries(labels, amplitudes, min_size=0, max_size=6).map(Superposition)


class TestTolerance:
    def test_defaults(self):
        tol = Tolerance()
        assert tol.eps_norm == 1e-9 and tol.eps_unitary == 1e-9 and tol.eps_drop == 1e-14

    @pytest.mark.parametrize("bad", [
        dict(eps_norm=0.0), dict(eps_unitary=-1e-9), dict(eps_drop=0.0),
        dict(eps_norm=1e-15),  # violates eps_drop < eps_norm
    ])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            Tolerance(**bad)


class TestNormSq:
    def test_balanced_pair(self):
        assert Superposition({"0": R, "1": R}).norm_sq() == pytest.approx(1.0, abs=1e-12)

    def test_empty_is_zero(self):
        assert Superposition().norm_sq() == 0.0

    def test_mixed_components(self):
        # 0.6^2 + |0.8i|^2 = 0.36 + 0.64
        s = Superposition({"x": 0.6, "y": 0.8j})
        assert s.norm_sq() == pytest.approx(1.0, abs=1e-12)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Superposition({"x": complex(float("nan"), 0)})
        with pytest.raises(ValueError):
            Superposition({"x": complex(float("inf"), 0)})


class TestInnerProduct:
    def test_orthogonal_basis_states(self):
        assert Superposition.basis("0").inner_product(Superposition.basis("1")) == 0

    def test_self_product_is_one(self):
        s = bell()
        assert s.inner_product(s) == pytest.approx(1.0, abs=1e-12)

    def test_conjugate_linear_in_first(self):
        a = Superposition({"0": 1j})
        b = Superposition({"0": 1.0})
        assert a.inner_product(b) == pytest.approx(-1j)

    def test_tensor_factorization(self):
        # <v1 x u1 | v2 x u2> = <v1|v2> <u1|u2>, both sides computed separately
        import random

        rng = random.Random(7)

        def rand_qubit():
            return [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in "01"]

        for _ in range(25):
            v1, v2, u1, u2 = (rand_qubit() for _ in range(4))
            joint1 = Superposition(
                {f"{i}{j}": v1[i] * u1[j] for i in (0, 1) for j in (0, 1)}
            )
            joint2 = Superposition(
                {f"{i}{j}": v2[i] * u2[j] for i in (0, 1) for j in (0, 1)}
            )
            lhs = joint1.inner_product(joint2)
            rhs = sum(v1[i].conjugate() * v2[i] for i in (0, 1)) * sum(
                u1[j].conjugate() * u2[j] for j in (0, 1)
            )
            assert abs(lhs - rhs) < 1e-12

    @given(superpositions)
    @settings(max_examples=100)
    def test_self_inner_product_equals_norm(self, s):
        ip = s.inner_product(s)
        assert abs(ip.imag) < 1e-12
        assert abs(ip.real - s.norm_sq()) < 1e-12


class TestMeasure:
    def test_bell_first_bit(self):
        outcomes = bell().measure(lambda label: label[0])
        assert [tag for tag, _, _ in outcomes] == ["0", "1"]
        by_tag = {tag: (p, post) for tag, p, post in outcomes}
        assert by_tag["0"][0] == pytest.approx(0.5, abs=1e-12)
        assert by_tag["0"][1] == Superposition.basis("00")
        assert by_tag["1"][1] == Superposition.basis("11")

    def test_product_state_first_bit_certain(self):
        s = Superposition({"00": R, "01": R})
        outcomes = s.measure(lambda label: label[0])
        assert len(outcomes) == 1
        tag, p, post = outcomes[0]
        assert tag == "0" and p == pytest.approx(1.0, abs=1e-12)
        assert all(abs(post[l] - s[l]) < 1e-12 for l in s)

    def test_identity_partition(self):
        outcomes = Superposition.basis("1").measure(lambda label: label)
        assert outcomes[0][0] == "1" and outcomes[0][1] == pytest.approx(1.0)

    def test_rejects_unnormalized(self):
        with pytest.raises(NormalizationError):
            Superposition({"0": 0.5}).measure(lambda label: label)

    def test_rejects_zero_vector(self):
        with pytest.raises(NormalizationError):
            Superposition().measure(lambda label: label)

    @given(superpositions.filter(lambda s: s.norm_sq() > 1e-6))
    @settings(max_examples=100)
    def test_completeness(self, s):
        s = s.normalized()
        outcomes = s.measure(lambda label: label[0])
        assert sum(p for _, p, _ in outcomes) == pytest.approx(1.0, abs=1e-9)
        for _, _, post in outcomes:
            assert post.norm_sq() == pytest.approx(1.0, abs=1e-9)


class TestPrune:
    def test_drops_negligible_terms(self):
        s = Superposition({"0": 1.0, "1": 1e-20})
        assert s.prune().labels() == ["0"]

    def test_fixed_point(self):
        s = Superposition({"0": 1.0})
        assert s.prune() == s

    @given(superpositions)
    @settings(max_examples=100)
    def test_idempotent(self, s):
        once = s.prune()
        assert once.prune() == once

    @given(superpositions)
    @settings(max_examples=100)
    def test_norm_change_bounded(self, s):
        tol = Tolerance()
        dropped = len(s) - len(s.prune(tol))
        assert abs(s.norm_sq() - s.prune(tol).norm_sq()) <= dropped * tol.eps_drop + 1e-15


class TestSerialization:
    def test_sorted_by_label(self):
        s = Superposition({"b": 1j, "a": 0.5})
        terms = s.to_json_terms()
        assert [t["label"] for t in terms] == ["a", "b"]
        assert terms[1] == {"label": "b", "re": 0.0, "im": 1.0}

    def test_round_trip(self):
        s = Superposition({"x": 0.6, "y": 0.8j})
        assert Superposition.from_json_terms(s.to_json_terms()) == s


class TestAccumulate:
    def test_cancelling_pair_vanishes(self):
        s = accumulate([("0", 0.5), ("0", -0.5), ("1", 1.0)])
        assert s.labels() == ["1"]

    def test_merges_duplicates(self):
        s = accumulate([("0", 0.25), ("0", 0.75)])
        assert s["0"] == pytest.approx(1.0)
