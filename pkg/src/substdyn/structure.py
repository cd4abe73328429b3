"""Height and pure base of a constant-length substitution.

A substitution can hide a purely cyclic factor: the positions at which the
initial letter of a fixed point recurs may all share a common divisor h
coprime to the length k.  Recoding the fixed point into blocks of length h
(read at positions divisible by h) removes that factor; the induced
substitution on blocks is the pure base, and it always has height 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Alphabet, Substitution, Word, apply, fixed_point_prefix, is_primitive
from .errors import InternalError, PreconditionError

_MAX_HEIGHT_ROUNDS = 8
_BLOCK_SCAN_LIMIT = 4096  # blocks read off the prefix before closure takes over


def _require_primitive(subst: Substitution, op: str) -> None:
    if not is_primitive(subst):
        raise PreconditionError(f"{op} requires a primitive substitution")


def height(subst: Substitution) -> int:
    """Largest h coprime to the length dividing all return times of x_0.

    Return positions are read off fixed-point prefixes of length k^r for
    r = 2, 3, ...; their gcd can only shrink as the prefix grows, so we
    stop once it agrees across two successive rounds (or hits 1).
    """
    _require_primitive(subst, "height")
    k = subst.length_k
    if k == 1:
        return 1
    previous = 0
    for r in range(2, _MAX_HEIGHT_ROUNDS + 1):
        prefix = fixed_point_prefix(subst, k**r)
        g = 0
        for pos in range(1, len(prefix)):
            if prefix[pos] == prefix[0]:
                g = math.gcd(g, pos)
        if g == 1 or (g > 0 and g == previous):
            break
        previous = g
    else:
        raise InternalError("return-time gcd did not stabilize; prefix cap too small")
    h = g
    while (d := math.gcd(h, k)) > 1:
        h //= d
    if h > min(k, subst.alphabet.size):
        raise InternalError(f"height {h} exceeds min(k, alphabet size); bug upstream")
    return h


@dataclass(frozen=True)
class PureBaseResult:
    """Outcome of purification.

    ``decoding`` sends each block letter back to the h original letters it
    stands for; for height 1 it is the identity on single letters.
    """

    height_h: int
    block_alphabet: Alphabet
    pure_base: Substitution
    decoding: dict[str, tuple[str, ...]]
    original: Substitution

    def decode_word(self, word: Word) -> tuple[str, ...]:
        """Flatten a word over block letters into original letters."""
        out: list[str] = []
        for b in word:
            out.extend(self.decoding[self.block_alphabet.letters[b]])
        return tuple(out)


def pure_base(subst: Substitution) -> PureBaseResult:
    """Induced substitution on h-blocks at positions divisible by h.

    Blocks are named by joining their letters (with ``|`` between multi-
    character letters) and ordered by first occurrence in the fixed-point
    prefix, then by closure discovery.  The image of a block is the image
    of its letters chopped into k consecutive h-blocks.
    """
    _require_primitive(subst, "pure_base")
    h = height(subst)
    alphabet = subst.alphabet
    if h == 1:
        decoding = {a: (a,) for a in alphabet.letters}
        return PureBaseResult(1, alphabet, subst, decoding, subst)

    k = subst.length_k
    scan_symbols = min(k**_MAX_HEIGHT_ROUNDS, _BLOCK_SCAN_LIMIT) * h
    prefix = fixed_point_prefix(subst, scan_symbols)

    blocks: list[Word] = []
    seen: dict[Word, int] = {}

    def intern(block: Word) -> int:
        if block not in seen:
            seen[block] = len(blocks)
            blocks.append(block)
        return seen[block]

    for i in range(len(prefix) // h):
        intern(tuple(prefix[i * h : (i + 1) * h]))

    cap = alphabet.size**h
    rules: list[Word] = []
    cursor = 0
    while cursor < len(blocks):
        if len(blocks) > cap:
            raise InternalError("block closure exceeded the |alphabet|^h bound")
        image = apply(subst, blocks[cursor])
        rules.append(tuple(intern(tuple(image[j * h : (j + 1) * h])) for j in range(k)))
        cursor += 1

    single = all(len(a) == 1 for a in alphabet.letters)
    joiner = "" if single else "|"
    names = tuple(joiner.join(alphabet.letters[v] for v in block) for block in blocks)
    block_alphabet = Alphabet(names)
    induced = Substitution(block_alphabet, tuple(rules))
    decoding = {
        name: tuple(alphabet.letters[v] for v in block)
        for name, block in zip(names, blocks)
    }
    try:
        induced_height = height(induced)
    except PreconditionError as exc:
        # happens only when the fixed point is periodic and phi permutes the
        # block phases; such degenerate systems fall outside the analysis
        raise InternalError(
            "purification produced a non-primitive block substitution "
            "(the fixed point is periodic)"
        ) from exc
    if induced_height != 1:
        raise InternalError("pure base failed to have height 1")
    return PureBaseResult(h, block_alphabet, induced, decoding, subst)
