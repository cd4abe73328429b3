"""Words, substitutions, columns, primitivity, and fixed points."""

from __future__ import annotations

import random

import pytest

from substdyn import (
    Alphabet,
    ColumnMap,
    PreconditionError,
    ResourceLimitError,
    Substitution,
    WORD_BUDGET,
    apply,
    column_sets,
    first_letter_cycle,
    fixed_point_prefix,
    has_coincidence,
    incidence_matrix,
    is_primitive,
    power,
    random_primitive_substitution,
)

from conftest import EXAMPLE_RULES, example
from oracles import (
    brute_apply,
    brute_column_sets,
    brute_fixed_point,
    brute_is_primitive,
    brute_power,
)


def as_string(subst: Substitution, word) -> str:
    return "".join(subst.alphabet.letters[s] for s in word)


class TestConstruction:
    def test_from_strings_round_trip(self, example_name):
        subst = example(example_name)
        rendered = dict(
            line.split(" -> ") for line in subst.rule_strings()
        )
        assert rendered == EXAMPLE_RULES[example_name]

    def test_token_sequences_equal_compact_strings(self):
        compact = Substitution.from_strings({"a": "ab", "b": "ba"})
        spelled = Substitution.from_strings({"a": ("a", "b"), "b": ("b", "a")})
        assert compact == spelled

    def test_multicharacter_letters(self):
        subst = Substitution.from_strings({"01": ("01", "02"), "02": ("02", "01")})
        assert subst.length_k == 2
        assert subst.rule_strings() == ["01 -> 01 02", "02 -> 02 01"]

    def test_unequal_lengths_rejected(self):
        with pytest.raises(ValueError):
            Substitution.from_strings({"a": "ab", "b": "a"})

    def test_unknown_letter_rejected(self):
        with pytest.raises(ValueError):
            Substitution.from_strings({"a": "az", "b": "aa"})

    def test_alphabet_membership(self):
        alpha = Alphabet(["a", "b"])
        assert "a" in alpha and "z" not in alpha
        assert alpha.index("b") == 1
        assert len(alpha) == 2


class TestApplicationAndPowers:
    def test_apply_matches_oracle(self, example_name):
        subst = example(example_name)
        rules = EXAMPLE_RULES[example_name]
        word = tuple(range(subst.alphabet.size)) * 3
        expected = brute_apply(rules, as_string(subst, word))
        assert as_string(subst, apply(subst, word)) == expected

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_power_matches_iterated_oracle(self, example_name, n):
        subst = example(example_name)
        powered = power(subst, n)
        oracle = brute_power(EXAMPLE_RULES[example_name], n)
        assert powered.length_k == subst.length_k**n
        for letter in subst.alphabet.letters:
            idx = subst.alphabet.index(letter)
            assert as_string(subst, powered.rules[idx]) == oracle[letter]

    def test_power_rejects_n_below_one(self):
        with pytest.raises(ValueError):
            power(example("e1"), 0)
        with pytest.raises(ValueError):
            power(example("e1"), -1)

    def test_incidence_column_sums_equal_length(self, example_subst):
        m = incidence_matrix(example_subst)
        assert all(s == example_subst.length_k for s in m.column_sums())


class TestColumns:
    def test_columns_read_positions(self):
        subst = example("e4")  # 0 -> 010, 1 -> 102, 2 -> 201
        assert subst.column(0).mapping == (0, 1, 2)
        assert subst.column(1).mapping == (1, 0, 0)
        assert subst.column(2).mapping == (0, 2, 1)
        with pytest.raises(ValueError):
            subst.column(3)

    def test_compose_order(self):
        # compose(inner) applies inner first: (f . g)(x) = f(g(x))
        f = ColumnMap((1, 0, 2))
        g = ColumnMap((2, 2, 0))
        assert f.compose(g).mapping == tuple(f(g(x)) for x in range(3))

    def test_identity_and_constant(self):
        ident = ColumnMap.identity(3)
        assert ident.mapping == (0, 1, 2)
        assert not ident.is_constant
        assert ColumnMap((1, 1, 1)).is_constant

    def test_column_sets_match_oracle(self, example_name):
        subst = example(example_name)
        got = {
            frozenset(subst.alphabet.letters[s] for s in fs)
            for fs in column_sets(subst)
        }
        assert got == brute_column_sets(EXAMPLE_RULES[example_name])

    def test_coincidence_verdicts(self):
        assert has_coincidence(example("e5"))
        assert has_coincidence(example("e1"))
        assert not has_coincidence(example("thue_morse"))


class TestPrimitivity:
    def test_examples_are_primitive(self, example_subst):
        assert is_primitive(example_subst)

    def test_reducible_substitution(self):
        # b never reaches a
        subst = Substitution.from_strings({"a": "ab", "b": "bb"})
        assert not is_primitive(subst)

    def test_periodic_irreducible_substitution(self):
        # irreducible but 2-periodic: phi^n(a) alternates between {b} and {a}
        subst = Substitution.from_strings({"a": "bb", "b": "aa"})
        assert not is_primitive(subst)

    def test_cyclic_non_primitive(self):
        subst = Substitution.from_strings({"a": "b", "b": "a"})
        assert not is_primitive(subst)

    def test_matches_oracle_on_random_draws(self):
        rng = random.Random(20260814)
        letters = "abcd"
        for _ in range(200):
            size = rng.randint(2, 4)
            k = rng.randint(1, 3)
            rules = {
                letters[i]: "".join(rng.choice(letters[:size]) for _ in range(k))
                for i in range(size)
            }
            subst = Substitution.from_strings(rules)
            assert is_primitive(subst) == brute_is_primitive(rules)


class TestFixedPoints:
    def test_prefix_matches_oracle(self, example_name):
        subst = example(example_name)
        seed_idx, _ = first_letter_cycle(subst)
        seed = subst.alphabet.letters[seed_idx]
        got = as_string(subst, fixed_point_prefix(subst, 2000))
        assert got == brute_fixed_point(EXAMPLE_RULES[example_name], seed, 2000)

    def test_prefix_is_fixed_under_substitution(self, example_subst):
        # every worked example has a first letter fixed by phi, so p = 1
        n = 500
        prefix = fixed_point_prefix(example_subst, n)
        assert apply(example_subst, prefix)[:n] == prefix

    def test_seed_on_two_cycle(self):
        subst = Substitution.from_strings({"0": "10", "1": "00"})
        seed, p = first_letter_cycle(subst)
        assert (seed, p) == (0, 2)
        prefix = fixed_point_prefix(subst, 8)
        # fixed point of phi^2, which maps 0 -> 0010 and 1 -> 1010
        assert prefix == tuple(int(c) for c in "00100010")

    def test_fixed_seed(self):
        seed, p = first_letter_cycle(example("period_doubling"))
        assert (seed, p) == (0, 1)

    def test_requires_primitive(self):
        subst = Substitution.from_strings({"a": "ab", "b": "bb"})
        with pytest.raises(PreconditionError):
            fixed_point_prefix(subst, 10)

    def test_budget(self):
        with pytest.raises(ResourceLimitError):
            fixed_point_prefix(example("e1"), WORD_BUDGET + 1)

    def test_random_substitutions_have_fixed_prefixes(self):
        # the prefix is fixed by phi^p where p is the seed's cycle length
        rng = random.Random(7)
        for _ in range(25):
            subst = random_primitive_substitution(rng)
            _, p = first_letter_cycle(subst)
            prefix = fixed_point_prefix(subst, 200)
            assert apply(power(subst, p), prefix)[:200] == prefix
