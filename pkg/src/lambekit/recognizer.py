"""Reducibility deciders: polynomial alternatives to proof search.

A sequence of /-only types reduces to a target exactly when its first type
peels as target-over-arguments and the rest of the sequence splits into
consecutive nonempty chunks, each reducing to the matching argument.  That
characterization drives a chart over (span, target) pairs; the degree-one
variants below specialize it further.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .core import (
    Backslash,
    FragmentError,
    LambekType,
    Primitive,
    Proof,
    Rule,
    Sequent,
    Slash,
    TypeRestriction,
    in_fragment,
    reassemble_spine,
    spine_decompositions,
)

_TP_SLASH = TypeRestriction(frozenset({"/"}))
_TP_LINEAR_1 = TypeRestriction(frozenset({"/", "\\"}), max_degree=1)
_TP_SLASH_1 = TypeRestriction(frozenset({"/"}), max_degree=1)


class ReductionTable:
    """Memoized reducibility chart for one type sequence.

    ``entry(i, j, target)`` says whether types[i:j] reduces to target using
    only the left / rule.  A table is confined to a single query sequence;
    ``shared`` optionally points at a cross-query map keyed by
    (span-as-tuple, target) so separate tables can reuse results.  ``ops``
    counts chart expansions, which the tests use to bound the growth rate.
    """

    def __init__(self, types: Sequence[LambekType], shared: Optional[dict] = None):
        self.types = tuple(types)
        self.memo: dict = {}
        self._splits: dict = {}
        self._shared = shared
        self.ops = 0

    def reduce(self, i: int, j: int, target: LambekType) -> bool:
        key = (i, j, target)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if self._shared is not None:
            span_key = (self.types[i:j], target)
            shared_hit = self._shared.get(span_key)
            if shared_hit is not None:
                self.memo[key] = shared_hit
                return shared_hit
        self.ops += 1
        value = False
        for head, args in spine_decompositions(self.types[i]):
            if head == target and self._match(i + 1, j, args):
                value = True
                break
        self.memo[key] = value
        if self._shared is not None:
            self._shared[(self.types[i:j], target)] = value
        return value

    def _match(self, i: int, j: int, args: tuple) -> bool:
        """Can types[i:j] split into len(args) nonempty chunks, the k-th
        reducing to args[k]?  Leftmost-first, memoized on the suffix."""
        if not args:
            return i == j
        key = (i, j, args)
        hit = self._splits.get(key)
        if hit is not None:
            return hit
        self.ops += 1
        value = False
        first, rest = args[0], args[1:]
        for m in range(i + 1, j - len(rest) + 1):
            if self.reduce(i, m, first) and self._match(m, j, rest):
                value = True
                break
        self._splits[key] = value
        return value


def _check_slash_query(seq: tuple, target: LambekType) -> None:
    if not seq:
        raise FragmentError("reducibility query with empty sequence")
    for t in seq:
        if not in_fragment(t, _TP_SLASH):
            raise FragmentError(f"type {t} uses connectives other than /")
    if not in_fragment(target, _TP_SLASH):
        raise FragmentError(f"target {target} uses connectives other than /")


def reduce_slash(
    seq: Sequence[LambekType], target: LambekType, table: Optional[ReductionTable] = None
) -> bool:
    """Decide whether the /-only sequence reduces to the target."""
    seq = tuple(seq)
    _check_slash_query(seq, target)
    tbl = table if table is not None else ReductionTable(seq)
    return tbl.reduce(0, len(seq), target)


def reduce_slash_proof(
    seq: Sequence[LambekType], target: LambekType
) -> Optional[Proof]:
    """Like reduce_slash, but reconstruct a checkable derivation on success."""
    seq = tuple(seq)
    _check_slash_query(seq, target)
    tbl = ReductionTable(seq)
    if not tbl.reduce(0, len(seq), target):
        return None
    return _rebuild(tbl, 0, len(seq), target)


def _rebuild(tbl: ReductionTable, i: int, j: int, target: LambekType) -> Proof:
    for head, args in spine_decompositions(tbl.types[i]):
        if head == target and tbl._match(i + 1, j, args):
            bounds = _witness_split(tbl, i + 1, j, args)
            chunks = [
                (_rebuild(tbl, a, b, beta), tbl.types[a:b])
                for (a, b), beta in zip(bounds, args)
            ]
            return _assemble(target, args, chunks)
    raise AssertionError(f"lost the witness for span ({i}, {j}) -> {target}")


def _witness_split(tbl: ReductionTable, i: int, j: int, args: tuple) -> list:
    if not args:
        return []
    first, rest = args[0], args[1:]
    for m in range(i + 1, j - len(rest) + 1):
        if tbl.reduce(i, m, first) and tbl._match(m, j, rest):
            return [(i, m)] + _witness_split(tbl, m, j, rest)
    raise AssertionError("split witness vanished")


def _assemble(target: LambekType, args: tuple, chunks: list) -> Proof:
    """Nest /L applications: one per argument, outermost argument first."""
    if not args:
        return Proof(Sequent((target,), target), Rule.AXIOM)
    (minor, minor_types), rest = chunks[0], chunks[1:]
    major = _assemble(target, args[1:], rest)
    head = reassemble_spine(target, args)
    conclusion = Sequent(
        (head,) + minor_types + major.conclusion.antecedent[1:], target
    )
    return Proof(conclusion, Rule.SLASH_L, (minor, major), position=0)


# --------------------------------------------------------------------------
# degree-one fragments


def reduce_linear(seq: Sequence[LambekType], target: LambekType) -> bool:
    """Decide reducibility for degree-one {/, \\} types to a primitive target.

    A span works when it is the bare target, when its first type is
    target/A and the rest reduces to A, or when its last type is A\\target
    and the front reduces to A.
    """
    seq = tuple(seq)
    if not seq:
        raise FragmentError("reducibility query with empty sequence")
    if not isinstance(target, Primitive):
        raise FragmentError(f"target must be primitive, got {target}")
    for t in seq:
        if not in_fragment(t, _TP_LINEAR_1):
            raise FragmentError(f"type {t} is not a degree-one {{/, \\}} type")

    memo: dict = {}

    def span(i: int, j: int, goal: Primitive) -> bool:
        key = (i, j, goal)
        hit = memo.get(key)
        if hit is not None:
            return hit
        value = False
        if j - i == 1 and seq[i] == goal:
            value = True
        if not value:
            first = seq[i]
            if type(first) is Slash and first.result == goal and j - i >= 2:
                value = span(i + 1, j, first.arg)
        if not value:
            last = seq[j - 1]
            if type(last) is Backslash and last.result == goal and j - i >= 2:
                value = span(i, j - 1, last.arg)
        memo[key] = value
        return value

    return span(0, len(seq), target)


def reduce_regular(seq: Sequence[LambekType], target: LambekType) -> bool:
    """Decide reducibility for degree-one /-only types to a primitive target.

    One left-to-right pass suffices: track the primitive the remaining
    suffix must produce (a finite-state run over the primitives).
    """
    seq = tuple(seq)
    if not seq:
        raise FragmentError("reducibility query with empty sequence")
    if not isinstance(target, Primitive):
        raise FragmentError(f"target must be primitive, got {target}")
    for t in seq:
        if not in_fragment(t, _TP_SLASH_1):
            raise FragmentError(f"type {t} is not a degree-one /-only type")

    want = target
    for t in seq[:-1]:
        # a mid-sequence primitive ends the spine with input left over
        if type(t) is not Slash or t.result != want:
            return False
        want = t.arg
    return seq[-1] == want
