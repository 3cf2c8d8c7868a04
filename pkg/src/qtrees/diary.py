"""Fixed-capacity page codec for token sentences.

A sentence is a flat token sequence whose words are terminated by stop
signs.  Encoding walks the words left to right; for each word it emits
one page holding the last ``kappa`` not-yet-recorded tokens before the
word's stop sign, written in reverse, or everything that is left plus a
terminal marker when fewer remain.  Decoding inverts this as far as the
information allows: the result is a slotted sentence whose slots stand
for arbitrary unrecorded prefixes, and the set of sentences obtained by
filling the slots is exactly the preimage of the diary.

Tokens are opaque hashables.  A stop sign is either the plain marker
``s`` or a pair ``(s, bit)`` carrying a decoration bit; everything else
is a letter.
"""
from __future__ import annotations

from typing import Optional, Sequence

STOP = "s"
STAR = "*"
SLOT = "_"

Token = object
Sentence = tuple
Page = tuple
Diary = tuple
# Slotted sentence: tuple of units (has_slot, word_tokens)
Slotted = tuple


class InconsistentDiary(ValueError):
    """No sentence can produce this diary."""

    def __init__(self, page_index: int, reason: str):
        super().__init__(f"page {page_index + 1}: {reason}")
        self.page_index = page_index


def is_stop(tok) -> bool:
    return tok == STOP or (isinstance(tok, tuple) and len(tok) == 2
                           and tok[0] == STOP)


def words_and_stops(sentence: Sequence) -> tuple[list[tuple], list]:
    """Split a well-formed sentence into its words and their stop tokens."""
    words: list[tuple] = []
    stops: list = []
    cur: list = []
    for tok in sentence:
        if tok == STAR:
            raise ValueError("terminal marker cannot appear in a sentence")
        if is_stop(tok):
            words.append(tuple(cur))
            stops.append(tok)
            cur = []
        else:
            cur.append(tok)
    if cur:
        raise ValueError("sentence must end with a stop sign")
    return words, stops


def word_count(sentence: Sequence) -> int:
    return sum(1 for tok in sentence if is_stop(tok))


def letter_count(sentence: Sequence) -> int:
    """Sentence length: stop signs are ignored."""
    return sum(1 for tok in sentence if not is_stop(tok))


# ---------------------------------------------------------------------------
# Encoding


def encode_segments(words: Sequence, stops: Sequence, kappa: int):
    """Core paging rule on pre-split words.

    Words, stops and the returned pages/rest all share the type of the
    inputs (tuples of tokens, or plain strings of single-character tokens
    with "s" as the stop sign); string inputs keep the hot path at slicing
    speed for exhaustive sweeps.
    """
    if kappa < 1:
        raise ValueError("page capacity must be at least 1")
    as_str = isinstance(stops, str) or (len(stops) > 0
                                        and isinstance(stops[0], str)
                                        and isinstance(words[0], str))
    star = STAR if as_str else (STAR,)
    rest = "" if as_str else ()
    pages = []
    for word, stop in zip(words, stops):
        base = rest + word
        size = len(base)
        if size >= kappa:
            pages.append(base[size - kappa:][::-1])
            rest = base[: size - kappa]
        else:
            pages.append(base[::-1] + star)
            rest = "" if as_str else ()
        rest = rest + (stop if as_str else (stop,))
    return tuple(pages), rest


def encode_with_rest(sentence: Sequence, kappa: int) -> tuple[Diary, tuple]:
    """Return (diary, rest).  The rest is everything never written to a
    page, always retaining the final stop sign."""
    if kappa < 1:
        raise ValueError("page capacity must be at least 1")
    if len(sentence) == 0:
        return (), ()
    words, stops = words_and_stops(sentence)
    return encode_segments(words, tuple(stops), kappa)


def encode(sentence: Sequence, kappa: int) -> Diary:
    return encode_with_rest(sentence, kappa)[0]


def rest_sentence(sentence: Sequence, kappa: int) -> tuple:
    return encode_with_rest(sentence, kappa)[1]


def page_is_valid(page: Sequence, kappa: int) -> bool:
    """A page has exactly kappa tokens, or fewer followed by the terminal
    marker (which may stand alone)."""
    if len(page) == kappa and STAR not in page:
        return True
    return (
        0 < len(page) <= kappa
        and page[-1] == STAR
        and STAR not in page[:-1]
    )


# ---------------------------------------------------------------------------
# Reconstruction


def decode(diary: Sequence, kappa: int) -> tuple[Slotted, tuple]:
    """Invert the page codec; returns the slotted sentence together with the
    pending-stop structure.

    The decoder mirrors the encoder's leftover text as a list of pending
    stop signs; each pending stop may "own" a slotted unit whose hidden
    prefix sits right before it.  A page either starts a new slotted word
    (no stop sign visible), or shows the new word completely together with
    the text around the most recent pending stops: complete segments close
    their owners' slots, the oldest (window-cut) segment only extends its
    owner, and a terminal marker proves the whole leftover was shown,
    closing everything.
    """
    units: list[tuple[bool, tuple]] = []
    # pending stop signs, oldest first; each value is the index of the
    # slotted unit whose unrecorded prefix precedes the stop, or None
    pending: list[Optional[int]] = []

    for idx, page in enumerate(diary):
        if not page_is_valid(page, kappa):
            raise InconsistentDiary(idx, "malformed page")
        has_star = page[-1] == STAR
        body = page[:-1] if has_star else page
        pi = tuple(body[::-1])  # natural reading order
        segs: list[list] = [[]]
        for tok in pi:
            if is_stop(tok):
                segs.append([])
            else:
                segs[-1].append(tok)
        new_word = tuple(segs[-1])
        shown = segs[:-1]  # segments before each visible pending stop
        p = len(shown)

        if p == 0:
            if has_star:
                if idx > 0:
                    raise InconsistentDiary(
                        idx, "terminal page must reach back to a stop sign")
                units.append((False, new_word))
                pending.append((0, None))
            else:
                units.append((True, new_word))
                pending.append((len(units) - 1, len(units) - 1))
            continue

        if p > len(pending):
            raise InconsistentDiary(idx, "page shows stop signs that are "
                                         "not pending")
        if has_star and p != len(pending):
            raise InconsistentDiary(
                idx, "terminal page must show every pending stop sign")

        visible = pending[len(pending) - p:]
        # complete segments (all but the oldest) close their owners
        for seg, (_, owner) in zip(shown[1:], visible[1:]):
            if owner is None:
                if seg:
                    raise InconsistentDiary(
                        idx, "text shown before a fully recorded word")
            else:
                units[owner] = (False, tuple(seg) + units[owner][1])
        # the oldest visible segment is cut by the window: it extends its
        # owner, whose slot stays open unless the page was terminal
        first_owner = visible[0][1]
        if first_owner is None:
            if shown[0]:
                raise InconsistentDiary(
                    idx, "text shown before a fully recorded word")
            carried = None
        else:
            units[first_owner] = (not has_star,
                                  tuple(shown[0]) + units[first_owner][1])
            carried = None if has_star else first_owner
        del pending[len(pending) - p:]
        units.append((False, new_word))
        pending.append((len(units) - 1, carried))

    return tuple(units), tuple(pending)


def reconstruct(diary: Sequence, kappa: int) -> Slotted:
    return decode(diary, kappa)[0]


# ---------------------------------------------------------------------------
# Slotted sentences


def is_honest(slotted: Slotted) -> bool:
    return all(not has_slot for has_slot, _ in slotted)


def slot_count(slotted: Slotted) -> int:
    return sum(1 for has_slot, _ in slotted if has_slot)


def fill_slots(slotted: Slotted, fillers: Sequence[Sequence],
               stop_token=STOP) -> Sentence:
    """Concrete sentence obtained by writing the given words into the slots
    in order."""
    fillers = list(fillers)
    if len(fillers) != slot_count(slotted):
        raise ValueError(
            f"need {slot_count(slotted)} filler words, got {len(fillers)}")
    out: list = []
    fi = 0
    for has_slot, word in slotted:
        if has_slot:
            out.extend(fillers[fi])
            fi += 1
        out.extend(word)
        out.append(stop_token)
    return tuple(out)


def extract_fillers(slotted: Slotted, sentence: Sequence) -> Optional[list[tuple]]:
    """Filler words witnessing membership; None when the sentence does not
    match the slotted pattern."""
    try:
        words, _ = words_and_stops(sentence)
    except ValueError:
        return None
    if len(words) != len(slotted):
        return None
    fillers: list[tuple] = []
    for word, (has_slot, shown) in zip(words, slotted):
        if has_slot:
            if len(word) < len(shown) or \
                    (len(shown) and word[-len(shown):] != shown):
                return None
            fillers.append(word[: len(word) - len(shown)])
        elif word != shown:
            return None
    return fillers


def membership(slotted: Slotted, sentence: Sequence) -> bool:
    return extract_fillers(slotted, sentence) is not None


def rest_of_member(slotted: Slotted, sentence: Sequence,
                   stop_token=STOP) -> tuple:
    """The member's slot fillers as a sentence; the bare stop sign when the
    pattern is honest."""
    fillers = extract_fillers(slotted, sentence)
    if fillers is None:
        raise ValueError("sentence is not a member of the slotted class")
    if not fillers:
        return (stop_token,)
    out: list = []
    for w in fillers:
        out.extend(w)
        out.append(stop_token)
    return tuple(out)


def member_rest(slotted: Slotted, pending: Sequence, sentence: Sequence
                ) -> tuple:
    """Token-exact leftover of a member: for each pending stop sign, the
    member's unrecorded prefix of the owning word followed by the member's
    actual stop token.  Matches the encoder's rest on every member."""
    fillers = extract_fillers(slotted, sentence)
    if fillers is None:
        raise ValueError("sentence is not a member of the slotted class")
    filler_by_unit: dict[int, tuple] = {}
    fi = 0
    for i, (has_slot, _) in enumerate(slotted):
        if has_slot:
            filler_by_unit[i] = fillers[fi]
            fi += 1
    _, stops = words_and_stops(sentence)
    out: list = []
    for word_idx, owner in pending:
        if owner is not None:
            out.extend(filler_by_unit[owner])
        out.append(stops[word_idx])
    return tuple(out)


# ---------------------------------------------------------------------------
# Text syntax: tokens separated by spaces, `s` stop sign, `*` terminal
# marker, `_` slot.


def parse_sentence(text: str) -> Sentence:
    return tuple(text.split())


def format_sentence(sentence: Sequence) -> str:
    return " ".join(_token_str(t) for t in sentence)


def format_diary(diary: Sequence) -> str:
    return "".join("(" + "".join(_token_str(t) for t in page) + ")"
                   for page in diary)


def format_slotted(slotted: Slotted) -> str:
    parts = []
    for has_slot, word in slotted:
        toks = ([SLOT] if has_slot else []) + [_token_str(t) for t in word]
        parts.append(" ".join(toks + [STOP]))
    return " ".join(parts)


def _token_str(tok) -> str:
    if isinstance(tok, tuple) and len(tok) == 2:
        base, bit = tok
        if isinstance(base, frozenset):
            base = "{" + ",".join(str(x) for x in sorted(base)) + "}"
        return f"{base}/{bit}"
    return str(tok)
