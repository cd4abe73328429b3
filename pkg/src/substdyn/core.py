"""Words, constant-length substitutions, column maps and column sets.

Letters are arbitrary text tokens.  Internally every letter is a dense
index ``0 .. size-1`` into an :class:`Alphabet` and words are tuples of
such indices; all hot loops run on indices and only rendering touches
the tokens again.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import PreconditionError, ResourceLimitError
from .matrices import CountMatrix

#: Longest word any operation is allowed to materialize (symbols).
WORD_BUDGET = 1 << 26

Word = tuple[int, ...]


class Alphabet:
    """An ordered, duplicate-free set of letter tokens.

    The ordering is fixed at construction and is what every matrix row,
    column and report key is indexed by.
    """

    __slots__ = ("letters", "_index")

    def __init__(self, letters: Iterable[str]):
        self.letters: tuple[str, ...] = tuple(letters)
        if not self.letters:
            raise ValueError("alphabet must not be empty")
        self._index = {tok: i for i, tok in enumerate(self.letters)}
        if len(self._index) != len(self.letters):
            raise ValueError("alphabet letters must be distinct")

    @property
    def size(self) -> int:
        return len(self.letters)

    def index(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise ValueError(f"letter {token!r} is not in the alphabet") from None

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.letters)!r})"


@dataclass(frozen=True)
class ColumnMap:
    """A total map letter -> letter, stored as a tuple indexed by letter."""

    mapping: tuple[int, ...]

    def __call__(self, letter: int) -> int:
        return self.mapping[letter]

    def compose(self, inner: "ColumnMap") -> "ColumnMap":
        """self after inner: ``(self . inner)(a) = self(inner(a))``."""
        return ColumnMap(tuple(self.mapping[v] for v in inner.mapping))

    def image(self, letters: frozenset[int]) -> frozenset[int]:
        return frozenset(self.mapping[a] for a in letters)

    @property
    def is_constant(self) -> bool:
        return len(set(self.mapping)) == 1

    @staticmethod
    def identity(size: int) -> "ColumnMap":
        return ColumnMap(tuple(range(size)))


@dataclass(frozen=True)
class ColumnFamily:
    """All image sets of the full alphabet under iterated column maps.

    ``sets`` is recorded in breadth-first discovery order (the full
    alphabet first) so that reports are reproducible.
    """

    sets: tuple[frozenset[int], ...]

    def __contains__(self, s: frozenset[int]) -> bool:
        return s in set(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    @property
    def has_singleton(self) -> bool:
        return any(len(s) == 1 for s in self.sets)


class Substitution:
    """A constant-length substitution: one length-k image word per letter."""

    __slots__ = ("alphabet", "rules", "length_k")

    def __init__(self, alphabet: Alphabet, rules: Sequence[Word]):
        if len(rules) != alphabet.size:
            raise ValueError("need exactly one rule per letter")
        rules = tuple(tuple(r) for r in rules)
        lengths = {len(r) for r in rules}
        if len(lengths) != 1:
            raise ValueError("rules do not share a common length")
        k = lengths.pop()
        if k < 1:
            raise ValueError("rule length must be at least 1")
        for r in rules:
            for sym in r:
                if not 0 <= sym < alphabet.size:
                    raise ValueError(f"rule symbol {sym} out of range")
        self.alphabet = alphabet
        self.rules = rules
        self.length_k = k

    @classmethod
    def from_strings(cls, rules: Mapping[str, Sequence[str] | str]) -> "Substitution":
        """Build from ``{letter: image}``.

        The image may be a sequence of letter tokens or, when every
        letter is a single character, a plain string like ``"aac"``.
        """
        alphabet = Alphabet(rules.keys())
        compact_ok = all(len(tok) == 1 for tok in alphabet.letters)
        indexed = []
        for letter in alphabet.letters:
            image = rules[letter]
            if isinstance(image, str) and compact_ok:
                image = tuple(image)
            indexed.append(tuple(alphabet.index(tok) for tok in image))
        return cls(alphabet, indexed)

    def column(self, i: int) -> ColumnMap:
        """The i-th column map, sending each letter to position i of its image."""
        if not 0 <= i < self.length_k:
            raise ValueError(f"column index {i} out of range")
        return ColumnMap(tuple(rule[i] for rule in self.rules))

    def columns(self) -> list[ColumnMap]:
        return [self.column(i) for i in range(self.length_k)]

    def word_to_tokens(self, word: Word) -> list[str]:
        return [self.alphabet.letters[a] for a in word]

    def rule_strings(self) -> list[str]:
        """Human-readable rules, compact when all tokens are single chars."""
        toks = self.alphabet.letters
        joiner = "" if all(len(t) == 1 for t in toks) else " "
        return [
            f"{toks[a]} -> {joiner.join(toks[b] for b in rule)}"
            for a, rule in enumerate(self.rules)
        ]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Substitution)
            and self.alphabet == other.alphabet
            and self.rules == other.rules
        )

    def __hash__(self) -> int:
        return hash((self.alphabet, self.rules))

    def __repr__(self) -> str:
        return f"Substitution<{'; '.join(self.rule_strings())}>"


def apply(subst: Substitution, word: Word) -> Word:
    """Apply the substitution to a word by concatenating rule images."""
    size = subst.alphabet.size
    out: list[int] = []
    for sym in word:
        if not 0 <= sym < size:
            raise ValueError(f"symbol {sym} not in the alphabet")
        out.extend(subst.rules[sym])
    return tuple(out)


def _apply_prefix(subst: Substitution, word: Sequence[int], limit: int) -> list[int]:
    # Like apply() but stops once `limit` output symbols exist; used by the
    # fixed-point generator so intermediate words never exceed the budget.
    out: list[int] = []
    for sym in word:
        out.extend(subst.rules[sym])
        if len(out) >= limit:
            break
    return out[:limit]


def power(subst: Substitution, n: int) -> Substitution:
    """The substitution phi^n, of length k^n."""
    if n < 1:
        raise ValueError("power requires n >= 1")
    if subst.length_k**n > WORD_BUDGET:
        raise ResourceLimitError(
            f"phi^{n} has rule length {subst.length_k}^{n}, over the "
            f"{WORD_BUDGET}-symbol budget"
        )
    rules = list(subst.rules)
    for _ in range(n - 1):
        rules = [apply(subst, r) for r in rules]
    return Substitution(subst.alphabet, rules)


def incidence_matrix(subst: Substitution) -> CountMatrix:
    """Matrix whose entry (a, b) counts occurrences of a in phi(b)."""
    size = subst.alphabet.size
    entries = [[0] * size for _ in range(size)]
    for b, rule in enumerate(subst.rules):
        for a in rule:
            entries[a][b] += 1
    return CountMatrix.from_rows(entries)


def is_primitive(subst: Substitution) -> bool:
    """True iff some power of the incidence matrix is entrywise positive.

    Uses boolean matrix squaring: it is enough to test one power at or
    above the Wielandt bound (n-1)^2 + 1, since a primitive matrix stays
    positive from its first positive power onwards.
    """
    n = subst.alphabet.size
    # adjacency as bit rows: bit b of row[a] set iff b occurs in phi(a)
    rows = [0] * n
    for a, rule in enumerate(subst.rules):
        for b in rule:
            rows[a] |= 1 << b
    full = (1 << n) - 1
    bound = (n - 1) ** 2 + 1

    def bool_square(m: list[int]) -> list[int]:
        out = [0] * n
        for i in range(n):
            acc = 0
            bits = m[i]
            while bits:
                j = (bits & -bits).bit_length() - 1
                acc |= m[j]
                bits &= bits - 1
            out[i] = acc
        return out

    exponent = 1
    while exponent < bound:
        rows = bool_square(rows)
        exponent *= 2
    return all(r == full for r in rows)


def column_sets(subst: Substitution) -> ColumnFamily:
    """Closure of {alphabet} under images of the k column maps (BFS order)."""
    cols = subst.columns()
    start = frozenset(range(subst.alphabet.size))
    seen = {start}
    order = [start]
    queue = [start]
    while queue:
        current = queue.pop(0)
        for col in cols:
            img = col.image(current)
            if img not in seen:
                seen.add(img)
                order.append(img)
                queue.append(img)
    return ColumnFamily(tuple(order))


def has_coincidence(subst: Substitution) -> bool:
    """True iff some iterated column map is constant (a singleton column set)."""
    return column_sets(subst).has_singleton


def first_letter_cycle(subst: Substitution) -> tuple[int, int]:
    """Seed letter and cycle length for fixed-point generation.

    Follows the first-letter map a -> phi(a)[0], returns the least letter
    (in alphabet order) lying on a cycle together with its cycle length p;
    phi^p then has a one-sided fixed point starting at that letter.
    """
    first = [rule[0] for rule in subst.rules]
    on_cycle: list[int] = []
    for a in range(subst.alphabet.size):
        # iterate far enough to land on the eventual cycle
        x = a
        for _ in range(subst.alphabet.size):
            x = first[x]
        cycle = {x}
        y = first[x]
        while y != x:
            cycle.add(y)
            y = first[y]
        if a in cycle:
            on_cycle.append(a)
    seed = min(on_cycle)
    p = 1
    x = first[seed]
    while x != seed:
        x = first[x]
        p += 1
    return seed, p


def fixed_point_prefix(subst: Substitution, n_symbols: int) -> Word:
    """First n symbols of the canonical one-sided fixed point.

    The seed is the least letter on a first-letter cycle and the fixed
    point is that of phi^p where p is the seed's cycle length, making
    the result deterministic for every primitive substitution.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    if n_symbols > WORD_BUDGET:
        raise ResourceLimitError(
            f"prefix of {n_symbols} symbols exceeds the {WORD_BUDGET}-symbol budget"
        )
    if not is_primitive(subst):
        raise PreconditionError("fixed_point_prefix requires a primitive substitution")
    if subst.length_k == 1:
        # phi^p fixes the seed letter; the "fixed point" is that letter repeated
        seed, _ = first_letter_cycle(subst)
        return (seed,) * n_symbols
    seed, p = first_letter_cycle(subst)
    prefix: list[int] = [seed]
    while len(prefix) < n_symbols:
        for _ in range(p):
            prefix = _apply_prefix(subst, prefix, n_symbols)
    return tuple(prefix[:n_symbols])
