"""Thue-Morse bits, cube-freeness, and level decoration of sentences.

Decorating every letter with the Thue-Morse bit of its level makes page
codes position-aware: two decorated sentences sharing a long identical
tail must have equal lengths, because a shifted match inside the
sequence would exhibit a cube www, which the sequence never contains.
"""
from __future__ import annotations

import random
from typing import Sequence

from qtrees.diary import (
    STOP,
    encode,
    is_stop,
    letter_count,
)
from qtrees.reporting import CheckResult, INCONCLUSIVE, PASS


def mt_prefix(n: int) -> tuple[int, ...]:
    """First n bits, by iterating the substitution 0 -> 01, 1 -> 10 from 0."""
    if n < 0:
        raise ValueError("length must be nonnegative")
    bits = [0]
    while len(bits) < n:
        bits = [b for x in bits for b in (x, 1 - x)]
    return tuple(bits[:n])


class _Bits:
    """Grow-on-demand view of the sequence."""

    def __init__(self):
        self._bits = list(mt_prefix(64))

    def __getitem__(self, i: int) -> int:
        while i >= len(self._bits):
            self._bits = [b for x in self._bits for b in (x, 1 - x)]
        return self._bits[i]


_BITS = _Bits()


def mt_bit(i: int) -> int:
    if i < 0:
        raise ValueError("sequence index must be nonnegative")
    return _BITS[i]


def is_cube_free(bits: Sequence[int]) -> bool:
    """True iff no substring has the shape www with w nonempty.

    Exhaustive over (start, period): a cube with period p exists exactly
    when bits[i] == bits[i+p] holds for 2p consecutive positions.
    """
    n = len(bits)
    for p in range(1, n // 3 + 1):
        run = 0
        for i in range(n - p):
            if bits[i] == bits[i + p]:
                run += 1
                if run >= 2 * p:
                    return False
            else:
                run = 0
    return True


# ---------------------------------------------------------------------------
# Decoration


def letter_levels(sentence: Sequence) -> list[int]:
    """Level per token: the first letter has level 1 (0 for a leading stop
    sign); levels increment on letters and stay put on stop signs."""
    levels = []
    lv = 0
    for tok in sentence:
        if not is_stop(tok):
            lv += 1
        levels.append(lv)
    return levels


def decorate(sentence: Sequence) -> tuple:
    """Replace each token by (token, bit-of-its-level)."""
    out = []
    for tok, lv in zip(sentence, letter_levels(sentence)):
        base = STOP if is_stop(tok) else tok
        out.append((base, mt_bit(lv)))
    return tuple(out)


def strip(decorated: Sequence) -> tuple:
    out = []
    for tok in decorated:
        if not (isinstance(tok, tuple) and len(tok) == 2):
            raise ValueError(f"not a decorated token: {tok!r}")
        out.append(tok[0])
    return tuple(out)


def decoration_is_valid(decorated: Sequence) -> bool:
    """Do the bits match the Thue-Morse bit of every token's level?"""
    plain = strip(decorated)
    return decorate(plain) == tuple(decorated)


def sentence_length(decorated: Sequence) -> int:
    """Level of the last letter: stop signs do not count."""
    return letter_count(decorated)


def tail_from(sentence: Sequence, start: int) -> tuple:
    """All tokens from position start on."""
    return tuple(sentence[start:])


def common_tail_letters(alpha: Sequence, beta: Sequence) -> int:
    """Letters (stop signs ignored) in the longest identical token suffix."""
    i, j = len(alpha), len(beta)
    letters = 0
    while i > 0 and j > 0 and alpha[i - 1] == beta[j - 1]:
        if not is_stop(alpha[i - 1]):
            letters += 1
        i -= 1
        j -= 1
    return letters


# ---------------------------------------------------------------------------
# Synchronization checks


def synchronize_check(alpha: Sequence, beta: Sequence, l: int) -> str:
    """Decorated sentences with identical tails of >= l letters and lengths
    within l/2 of each other must have equal lengths.  Returns "pass",
    "fail", or "inconclusive" when the hypotheses do not hold."""
    if not (decoration_is_valid(alpha) and decoration_is_valid(beta)):
        return INCONCLUSIVE
    la, lb = sentence_length(alpha), sentence_length(beta)
    if common_tail_letters(alpha, beta) < l or 2 * abs(la - lb) > l:
        return INCONCLUSIVE
    return PASS if la == lb else "fail"


def check_synchronization(trials: int = 4000, seed: int = 0,
                          max_len: int = 160) -> CheckResult:
    """Randomized search for shifted identical decorated tails.

    A counterexample would be lengths L != L' within l/2 whose level windows
    carry identical bit patterns of length l; any hit exhibits a cube in the
    sequence.  Single-word sentences realize every (L, L', l) combination,
    so the search runs directly on bit windows.
    """
    res = CheckResult("mt-synchronization", PASS)
    rng = random.Random(seed)
    for _ in range(trials):
        L = rng.randint(2, max_len)
        shift = rng.randint(0, max(1, L // 3))
        Lp = L + shift
        l = rng.randint(max(1, 2 * shift), min(L, max_len))
        if 2 * shift > l:
            continue
        res.checked += 1
        window = [mt_bit(L - i) for i in range(l)]
        window_p = [mt_bit(Lp - i) for i in range(l)]
        if shift != 0 and window == window_p:
            res.add_violation({"L": L, "L'": Lp, "tail": l})
    return res


def check_equal_diaries(kappa: int, n: int, trials: int = 300,
                        seed: int = 0, alphabet=("a", "b")) -> CheckResult:
    """Randomized instances of the letter-identification property.

    Generate decorated sentences without empty words, encode, and compare
    letters of equal level across sentence pairs with equal diaries; under
    the hypotheses (at least p >= 3 stop signs behind the letters, tails at
    most n*(p-2), page capacity kappa >= 5n+1, word offsets within 2) the
    letters must coincide.  Pairs are drawn from diary-collision buckets of
    the random corpus; the verdict is inconclusive if none qualify.
    """
    res = CheckResult(f"mt-equal-diaries-k{kappa}", PASS)
    if kappa < 5 * n + 1:
        res.status = INCONCLUSIVE
        res.notes = f"page capacity {kappa} below 5n+1 = {5 * n + 1}"
        return res
    rng = random.Random(seed)
    buckets: dict = {}
    for _ in range(trials):
        words = []
        for _ in range(rng.randint(3, 8)):
            wl = rng.randint(1, 4)
            words.append(tuple(rng.choice(alphabet) for _ in range(wl)))
        plain = tuple(t for w in words for t in (*w, STOP))
        deco = decorate(plain)
        buckets.setdefault(encode(deco, kappa), []).append(deco)
    qualifying = 0
    for group in buckets.values():
        for i, alpha in enumerate(group):
            for beta in group[i + 1:]:
                qualifying += _compare_equal_level_letters(
                    alpha, beta, kappa, n, res)
    # every sentence trivially pairs with itself
    for group in buckets.values():
        for alpha in group:
            qualifying += _compare_equal_level_letters(
                alpha, alpha, kappa, n, res)
    res.checked = qualifying
    if qualifying == 0:
        res.status = INCONCLUSIVE
    return res


def _word_index_of(sentence: Sequence, pos: int) -> int:
    """1-based index of the word containing the token at pos."""
    return 1 + sum(1 for t in sentence[:pos] if is_stop(t))


def _compare_equal_level_letters(alpha, beta, kappa: int, n: int,
                                 res: CheckResult) -> int:
    """Check hypothesis-satisfying letter pairs of equal level; returns how
    many qualified."""
    la = letter_levels(alpha)
    lb = letter_levels(beta)
    pos_a = {la[i]: i for i in range(len(alpha)) if not is_stop(alpha[i])}
    pos_b = {lb[i]: i for i in range(len(beta)) if not is_stop(beta[i])}
    count = 0
    for lv, ia in pos_a.items():
        ib = pos_b.get(lv)
        if ib is None:
            continue
        m_a = _word_index_of(alpha, ia)
        m_b = _word_index_of(beta, ib)
        if abs(m_a - m_b) > 2:
            continue
        stops_behind_a = sum(1 for t in alpha[ia:] if is_stop(t))
        stops_behind_b = sum(1 for t in beta[ib:] if is_stop(t))
        p = min(stops_behind_a, stops_behind_b)
        if p < 3:
            continue
        tail = max(letter_count(alpha[ia:]), letter_count(beta[ib:]))
        if tail > n * (p - 2):
            continue
        count += 1
        if alpha[ia] != beta[ib]:
            res.add_violation({
                "level": lv,
                "a": alpha[ia],
                "a'": beta[ib],
                "words": (m_a, m_b),
            })
    return count


# ---------------------------------------------------------------------------
# The long-journey collision: a periodic sentence whose undecorated diary
# forgets how many periods there were, while decorated diaries differ.


def long_journey_pair(word: Sequence = ("b", "a", "a", "a", "a", "a", "a"),
                      k: int = 30, n_stops: int = 2
                      ) -> tuple[tuple, tuple]:
    """Sentences word^k s^n and word^(k+1) s^n (the extra stop signs
    terminate empty words)."""

    def build(reps: int) -> tuple:
        toks = list(word) * reps
        toks.append(STOP)
        toks.extend([STOP] * (n_stops - 1))
        return tuple(toks)

    return build(k), build(k + 1)
