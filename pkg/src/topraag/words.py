"""Words in a right-angled Artin group and their canonical forms.

A word is a tuple of letters (generator, +1/-1).  The canonical form of a
word is the ShortLex-least element of its shuffle class after it has been
made shuffle-reduced: we cancel every inverse pair separated only by letters
commuting with it, then bubble adjacent commuting letters into the least
lexicographic order until nothing moves.  Two canonical words are equal in
the group iff they are equal as tuples.
"""

from __future__ import annotations

from .errors import GraphMismatch, NotAJoinFactor, UnknownGenerator, WordLengthCap
from .graphs import Graph

Letter = tuple[str, int]
Word = tuple[Letter, ...]

WORD_LENGTH_CAP = 10_000


def parse_word(text: str) -> Word:
    """Parse whitespace-separated tokens like "s t^-1 s" into a word."""
    letters = []
    for tok in text.split():
        if "^" in tok:
            gen, _, exp = tok.partition("^")
            n = int(exp)
        else:
            gen, n = tok, 1
        if n == 0:
            continue
        sign = 1 if n > 0 else -1
        letters.extend([(gen, sign)] * abs(n))
    return tuple(letters)


def format_word(w: Word) -> str:
    if not w:
        return ""
    return " ".join(g if e == 1 else f"{g}^-1" for g, e in w)


def check_letters(g: Graph, w: Word) -> None:
    for gen, e in w:
        if gen not in g._adj:
            raise UnknownGenerator(f"letter {gen!r} is not a vertex of the graph")
        if e not in (1, -1):
            raise UnknownGenerator(f"letter exponent must be +1/-1, got {e}")


def exponent(w: Word) -> int:
    return sum(e for _, e in w)


def is_balanced(relators) -> bool:
    """True iff every relator has exponent sum zero."""
    return all(exponent(r) == 0 for r in relators)


def free_invert(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def _letter_key(g: Graph, letter: Letter):
    order = g.order
    gen, e = letter
    return (order[gen], 0 if e == 1 else 1)


def _shuffle_reduce(g: Graph, w: list[Letter]) -> list[Letter]:
    # Cancel (x, x^-1) pairs whenever every letter between them commutes
    # with x; repeat until no such pair remains.
    changed = True
    while changed:
        changed = False
        for i in range(len(w)):
            gi, ei = w[i]
            for j in range(i + 1, len(w)):
                gj, ej = w[j]
                if gj == gi:
                    if ej == -ei:
                        del w[j]
                        del w[i]
                        changed = True
                    break
                if not g.adjacent(gi, gj):
                    break
            if changed:
                break
    return w


def _lex_least(g: Graph, w: list[Letter]) -> list[Letter]:
    # Greedy extraction of the ShortLex-least member of the shuffle class:
    # repeatedly emit the least letter that commutes with everything still
    # pending to its left.  Plain adjacent bubbling to a fixpoint is NOT
    # enough: a word can be locally swap-minimal without being least (e.g.
    # over the 4-cycle a-b-c-d the words "a^-1 c^-1 a b" and "a^-1 b c^-1 a"
    # are both bubble-fixed but equal in the group).
    pending = list(w)
    out = []
    while pending:
        best = 0
        for i in range(len(pending)):
            gen_i = pending[i][0]
            blocked = any(
                pending[j][0] == gen_i or not g.adjacent(pending[j][0], gen_i)
                for j in range(i)
            )
            if blocked:
                continue
            if _letter_key(g, pending[i]) < _letter_key(g, pending[best]):
                best = i
        out.append(pending.pop(best))
    return out


def normal_form(g: Graph, w: Word) -> Word:
    if len(w) > WORD_LENGTH_CAP:
        raise WordLengthCap(f"word of length {len(w)} exceeds cap {WORD_LENGTH_CAP}")
    check_letters(g, w)
    letters = _shuffle_reduce(g, list(w))
    return tuple(_lex_least(g, letters))


def multiply(g: Graph, w1: Word, w2: Word) -> Word:
    return normal_form(g, tuple(w1) + tuple(w2))


def invert(g: Graph, w: Word) -> Word:
    return normal_form(g, free_invert(w))


def single(gen: str, e: int = 1) -> Word:
    return ((gen, e),)


def power(g: Graph, gen: str, n: int) -> Word:
    return normal_form(g, ((gen, 1 if n > 0 else -1),) * abs(n))


def parabolic_project(g: Graph, t_subset, w: Word) -> Word:
    """Delete letters outside T; valid when T and its complement commute."""
    keep = set(t_subset)
    unknown = keep - set(g.vertices)
    if unknown:
        raise UnknownGenerator(f"unknown vertices in T: {sorted(unknown)}")
    rest = set(g.vertices) - keep
    for a in keep:
        for b in rest:
            if not g.adjacent(a, b):
                raise NotAJoinFactor(
                    f"[T, S-T] != 1: {a!r} and {b!r} are not adjacent"
                )
    sub = g.induced(keep)
    return normal_form(sub, tuple(l for l in w if l[0] in keep))


def shuffle_class(g: Graph, w: Word, cap: int = 200_000) -> set[Word]:
    """Every word reachable by swaps of adjacent commuting letters and by
    cancelling adjacent inverse pairs.  Brute-force oracle for small words."""
    check_letters(g, w)
    seen = {tuple(w)}
    frontier = [tuple(w)]
    while frontier:
        cur = frontier.pop()
        for i in range(len(cur) - 1):
            a, b = cur[i], cur[i + 1]
            if a[0] == b[0] and a[1] == -b[1]:
                nxt = cur[:i] + cur[i + 2 :]
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
            elif a[0] != b[0] and g.adjacent(a[0], b[0]):
                nxt = cur[:i] + (b, a) + cur[i + 2 :]
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        if len(seen) > cap:
            raise WordLengthCap("shuffle class exploded past the oracle cap")
    return seen


def normal_form_bruteforce(g: Graph, w: Word) -> Word:
    """Oracle: ShortLex-least member of the full shuffle class."""
    cls = shuffle_class(g, w)
    shortest = min(len(x) for x in cls)
    candidates = [x for x in cls if len(x) == shortest]
    return min(candidates, key=lambda x: [_letter_key(g, l) for l in x])


def require_same_graph(g1: Graph, g2: Graph) -> None:
    if g1 != g2:
        raise GraphMismatch("words live over different graphs")
