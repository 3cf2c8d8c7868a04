"""Levelled trees: directed posets with strictly monotone level functions.

Color trees order covering elements by certificate inclusion; an edge
joins an element to its maximal-level proper ancestor.  Word trees over
an alphabet never get materialized: the vertex set is "all finite
sequences" and the generation distance only needs common prefixes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from qtrees.coverings import CoveringElement, CoveringSequence
from qtrees.reporting import CheckResult, PASS


@dataclass
class LevelledTree:
    """Rooted tree with integer levels strictly increasing away from the
    root along ancestor chains."""

    root: str
    parent: dict[str, Optional[str]]
    level: dict[str, int]
    children: dict[str, tuple[str, ...]] = field(default_factory=dict)
    _paths: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.children:
            kids: dict[str, list[str]] = {u: [] for u in self.parent}
            for u, p in self.parent.items():
                if p is not None:
                    kids[p].append(u)
            self.children = {u: tuple(sorted(v)) for u, v in kids.items()}

    def vertices(self) -> list[str]:
        return sorted(self.parent)

    def root_path(self, u: str) -> tuple[str, ...]:
        """Vertices from the root down to u, inclusive."""
        cached = self._paths.get(u)
        if cached is not None:
            return cached
        path = []
        cur: Optional[str] = u
        while cur is not None:
            path.append(cur)
            cur = self.parent[cur]
        out = tuple(reversed(path))
        self._paths[u] = out
        return out

    def depth(self, u: str) -> int:
        """Generations between u and the root."""
        return len(self.root_path(u)) - 1

    def lca(self, u: str, v: str) -> str:
        pu, pv = self.root_path(u), self.root_path(v)
        last = pu[0]
        for a, b in zip(pu, pv):
            if a != b:
                break
            last = a
        return last

    def generation_distance(self, u: str, v: str) -> int:
        """Path length through the youngest common ancestor."""
        w = self.lca(u, v)
        return self.depth(u) + self.depth(v) - 2 * self.depth(w)

    def lowest_segment_vertex(self, u: str, v: str) -> str:
        """Minimum-level vertex on the unique path: the youngest common
        ancestor (one of the ends when u, v are comparable)."""
        return self.lca(u, v)

    def is_ancestor(self, anc: str, u: str) -> bool:
        return anc in self.root_path(u)


@dataclass
class ColorTree:
    color: int
    tree: LevelledTree
    elements: dict[str, CoveringElement]
    by_level: dict[int, tuple[str, ...]]

    def level_vertices(self, i: int) -> tuple[str, ...]:
        return self.by_level.get(i, ())

    def max_valence(self) -> int:
        t = self.tree
        return max(
            len(t.children[u]) + (0 if t.parent[u] is None else 1)
            for u in t.parent
        )


def build_color_tree(seq: CoveringSequence, color: int) -> ColorTree:
    """Parent of U = the certificate-inclusion ancestor of maximal level.

    Separation makes the candidate set per level at most one element, and
    guarantees condition (+): elements sharing a descendant are nested.
    """
    elements = {e.uid: e for e in seq.color_elements(color)}
    by_level: dict[int, list[str]] = {}
    for e in elements.values():
        by_level.setdefault(e.level, []).append(e.uid)
    levels = sorted(by_level)
    if levels[0] != 0 or len(by_level[0]) != 1:
        raise ValueError("color family must have a unique level-0 root")
    root = by_level[0][0]

    parent: dict[str, Optional[str]] = {root: None}
    level_map = {uid: elements[uid].level for uid in elements}
    for uid, e in elements.items():
        if uid == root:
            continue
        found = None
        for j in range(e.level - 1, -1, -1):
            for cand_uid in by_level.get(j, ()):
                cand = elements[cand_uid]
                if cand.region.contains_region(e.region):
                    found = cand_uid
                    break
            if found:
                break
        if found is None:
            raise ValueError(
                f"covering element {uid} has no ancestor: separation violated")
        parent[uid] = found

    tree = LevelledTree(root=root, parent=parent, level=level_map)
    _assert_levelled(tree)
    return ColorTree(
        color=color,
        tree=tree,
        elements=elements,
        by_level={j: tuple(sorted(v)) for j, v in by_level.items()},
    )


def _assert_levelled(tree: LevelledTree) -> None:
    for u, p in tree.parent.items():
        if p is not None and tree.level[u] <= tree.level[p]:
            raise ValueError(f"level not strictly monotone at edge ({u},{p})")


def check_color_tree(seq: CoveringSequence, ct: ColorTree, k0: int) -> CheckResult:
    """Structural invariants: strict monotonicity along root paths, depth
    bounded by level - k0, condition (+) via nested-or-disjoint regions,
    and incomparable pairs meeting strictly below both levels."""
    res = CheckResult(f"tree-structure-c{ct.color}", PASS)
    t = ct.tree
    for u in t.vertices():
        res.checked += 1
        path = t.root_path(u)
        for a, b in zip(path, path[1:]):
            if t.level[a] >= t.level[b]:
                res.add_violation({"vertex": u, "edge": (a, b),
                                   "reason": "level not increasing"})
        if t.depth(u) > t.level[u] - k0:
            res.add_violation({"vertex": u, "depth": t.depth(u),
                               "level": t.level[u],
                               "reason": "depth exceeds level - k0"})
    uids = t.vertices()
    for i, u in enumerate(uids):
        for v in uids[i + 1:]:
            ru, rv = ct.elements[u].region, ct.elements[v].region
            nested = ru.contains_region(rv) or rv.contains_region(ru)
            if ru.meets_region(rv) and not nested:
                res.add_violation({"pair": (u, v),
                                   "reason": "overlapping incomparable regions"})
            if not nested:
                w = t.lowest_segment_vertex(u, v)
                if w in (u, v):
                    continue
                if t.level[w] >= min(t.level[u], t.level[v]):
                    res.add_violation({"pair": (u, v), "meet": w,
                                       "reason": "meet not strictly below"})
    return res


# ---------------------------------------------------------------------------
# Word trees


def word_distance(u: Sequence, v: Sequence) -> int:
    """Generation distance in the tree of finite sequences: both lengths
    minus twice the common prefix."""
    common = 0
    for a, b in zip(u, v):
        if a != b:
            break
        common += 1
    return len(u) + len(v) - 2 * common


def binary_width(n: int) -> int:
    """Bits needed to write 1..n in binary: floor(log2 n) + 1."""
    if n < 1:
        raise ValueError("alphabet must be nonempty")
    return n.bit_length()


def binary_embed(word: Sequence[int], n: int) -> tuple[int, ...]:
    """Replace each letter 1..n by its zero-padded binary string; the image
    lives in the rooted binary tree and is radially a homothety by the
    bit width."""
    lam = binary_width(n)
    out: list[int] = []
    for letter in word:
        if not 1 <= letter <= n:
            raise ValueError(f"letter {letter} outside 1..{n}")
        out.extend((letter >> (lam - 1 - i)) & 1 for i in range(lam))
    return tuple(out)


def check_binary_sandwich(n: int, max_len: int = 5) -> CheckResult:
    """lam*(D-2)+2 <= D_bin <= lam*D for all word pairs over 1..n of length
    <= max_len.

    Both distances depend only on the common-prefix length, the two suffix
    lengths, and the first differing letters; sweeping those parameters is
    exhaustive over all such pairs.
    """
    res = CheckResult(f"binary-sandwich-n{n}", PASS)
    lam = binary_width(n)

    def verify(u, v):
        D = word_distance(u, v)
        Db = word_distance(binary_embed(u, n), binary_embed(v, n))
        res.checked += 1
        if not (lam * (D - 2) + 2 <= Db <= lam * D):
            res.add_violation({"u": u, "v": v, "D": D, "Dbin": Db, "lam": lam})

    for t in range(0, max_len + 1):
        base = tuple([1] * t)
        for la in range(0, max_len - t + 1):
            for lb in range(0, max_len - t + 1):
                pad_a, pad_b = [1] * max(la - 1, 0), [1] * max(lb - 1, 0)
                if la == 0 or lb == 0:
                    # comparable pair; suffix letters do not matter
                    verify(base + tuple([1] * la), base + tuple([1] * lb))
                    continue
                for x in range(1, n + 1):
                    for y in range(1, n + 1):
                        if x != y:
                            verify(base + (x, *pad_a), base + (y, *pad_b))
    return res


# ---------------------------------------------------------------------------
# Export


def export_tree(ct: ColorTree, path) -> None:
    """`id parentId level colorOrLetter`, one vertex per line."""
    t = ct.tree
    lines = []
    for uid in t.vertices():
        p = t.parent[uid] or "-"
        lines.append(f"{uid} {p} {t.level[uid]} {ct.color}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
