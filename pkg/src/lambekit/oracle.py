"""Ground-truth membership deciders and the exhaustive cross-check harness.

Two independent routes exist for everything at desk scale: grammars are
decided by bounded leftmost derivation (GNF) or CYK, lexicons by the
fragment recognizers or by raw proof search over every type assignment.
``crosscheck`` walks all strings up to a length bound and reports the first
point where two deciders part ways.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .core import (
    Backslash,
    CalculusConfig,
    Cfg,
    FragmentError,
    GrammarError,
    LambekGrammar,
    LambekitError,
    LambekType,
    Primitive,
    Rule,
    Sequent,
    Slash,
    TypeRestriction,
    classify_cfg,
    in_fragment,
    spine_decompositions,
    FULL_CALCULUS,
    LINEAR_FRAGMENT,
    REGULAR_FRAGMENT,
    SLASH_FRAGMENT,
)
from .prover import ProofEngine
from .recognizer import reduce_linear, reduce_regular, reduce_slash
from .transform import remove_unit_productions

Word = Sequence[str]


class StepLimitExceeded(LambekitError):
    """A decider ran past its per-string work budget.

    Raised instead of returning a verdict, so a budget can never silently
    turn into a wrong answer.
    """


def _as_word(w: Word) -> tuple:
    # a plain string is read as its characters; otherwise a symbol sequence
    return tuple(w)


def enumerate_strings(alphabet: Iterable[str], max_len: int) -> Iterator[tuple]:
    """All nonempty strings up to max_len, shortest first, each length in
    lexicographic order over the sorted alphabet."""
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    symbols = sorted(set(alphabet))
    for k in range(1, max_len + 1):
        yield from itertools.product(symbols, repeat=k)


# --------------------------------------------------------------------------
# CFG membership


class _Budget:
    __slots__ = ("left",)

    def __init__(self, max_steps: Optional[int]):
        self.left = max_steps

    def spend(self, n: int = 1) -> None:
        if self.left is None:
            return
        self.left -= n
        if self.left < 0:
            raise StepLimitExceeded("membership decision exceeded its step budget")


@lru_cache(maxsize=128)
def _gnf_tables(g: Cfg) -> dict:
    tables: dict = {}
    for p in g.productions:
        tables.setdefault((p.lhs, p.rhs[0]), []).append(p.rhs[1:])
    return tables


def _gnf_member(g: Cfg, w: tuple, budget: _Budget) -> bool:
    """Bounded leftmost derivation: each step consumes one terminal, and an
    epsilon-free stack longer than the remaining input is dead."""
    tables = _gnf_tables(g)
    n = len(w)
    dead = set()

    def go(pos: int, stack: tuple) -> bool:
        budget.spend()
        if pos == n:
            return not stack
        if not stack or len(stack) > n - pos:
            return False
        key = (pos, stack)
        if key in dead:
            return False
        head, rest = stack[0], stack[1:]
        for tail in tables.get((head, w[pos]), ()):
            if go(pos + 1, tail + rest):
                return True
        dead.add(key)
        return False

    return go(0, (g.start,))


@lru_cache(maxsize=128)
def _cnf_tables(g: Cfg):
    """Chomsky-ish tables for CYK: unit-free terminal rules and binarized
    long rules.  Fresh symbols are opaque tuples, immune to name clashes."""
    g = remove_unit_productions(g)
    terminal_heads: dict = {}
    pair_heads: dict = {}
    wrapper: dict = {}

    def wrap(sym: str):
        if sym not in wrapper:
            wrapper[sym] = ("wrap", sym)
            terminal_heads.setdefault(sym, set()).add(wrapper[sym])
        return wrapper[sym]

    counter = itertools.count()
    for p in g.productions:
        if len(p.rhs) == 1:
            # unit-free and epsilon-free: a single symbol must be a terminal
            terminal_heads.setdefault(p.rhs[0], set()).add(p.lhs)
            continue
        symbols = [
            sym if sym in g.nonterminal_set else wrap(sym) for sym in p.rhs
        ]
        while len(symbols) > 2:
            fresh = ("bin", next(counter))
            pair_heads.setdefault((symbols[-2], symbols[-1]), set()).add(fresh)
            symbols = symbols[:-2] + [fresh]
        pair_heads.setdefault((symbols[0], symbols[1]), set()).add(p.lhs)
    return terminal_heads, pair_heads


def _cyk_member(g: Cfg, w: tuple, budget: _Budget) -> bool:
    terminal_heads, pair_heads = _cnf_tables(g)
    n = len(w)
    chart: dict = {}
    for i, sym in enumerate(w):
        chart[(i, i + 1)] = set(terminal_heads.get(sym, ()))
    for width in range(2, n + 1):
        for i in range(0, n - width + 1):
            j = i + width
            cell: set = set()
            for k in range(i + 1, j):
                left, right = chart[(i, k)], chart[(k, j)]
                budget.spend(len(left) * len(right) or 1)
                for pair in itertools.product(left, right):
                    cell.update(pair_heads.get(pair, ()))
            chart[(i, j)] = cell
    return g.start in chart[(0, n)]


def cfg_member(
    g: Cfg, w: Word, method: str = "auto", max_steps: Optional[int] = None
) -> bool:
    """Decide whether the grammar derives the string.

    method: "auto" picks the bounded leftmost search for GNF grammars and
    CYK otherwise; "gnf" and "cyk" force a route (the former requires GNF).
    """
    word = _as_word(w)
    if not word:
        raise GrammarError("the empty string is outside every language here")
    for sym in word:
        if sym not in g.terminal_set:
            raise GrammarError(f"unknown symbol {sym!r}")
    budget = _Budget(max_steps)
    if method == "auto":
        method = "gnf" if classify_cfg(g).is_gnf else "cyk"
    if method == "gnf":
        if not classify_cfg(g).is_gnf:
            raise FragmentError("leftmost search requires Greibach normal form")
        return _gnf_member(g, word, budget)
    if method == "cyk":
        return _cyk_member(g, word, budget)
    raise ValueError(f"unknown method {method!r}")


class CfgDecider:
    """cfg_member with the route fixed up front; usable as a crosscheck arm."""

    def __init__(self, g: Cfg, method: str = "auto"):
        self.grammar = g
        if method == "auto":
            method = "gnf" if classify_cfg(g).is_gnf else "cyk"
        self.method = method

    def __call__(self, w: Word, max_steps: Optional[int] = None) -> bool:
        return cfg_member(self.grammar, w, self.method, max_steps)


# --------------------------------------------------------------------------
# lexicon membership


def infer_config(lg: LambekGrammar) -> CalculusConfig:
    """The natural fragment for a lexicon's shape: /-only lexicons get the
    slash fragment (degree-one ones the regular fragment), degree-one
    {/, \\} lexicons the linear fragment, anything else the full calculus."""
    types = lg.all_types()
    if all(in_fragment(t, REGULAR_FRAGMENT.type_restriction) for t in types):
        return REGULAR_FRAGMENT
    if all(in_fragment(t, SLASH_FRAGMENT.type_restriction) for t in types):
        return SLASH_FRAGMENT
    if all(in_fragment(t, LINEAR_FRAGMENT.type_restriction) for t in types):
        return LINEAR_FRAGMENT
    return FULL_CALCULUS


def _check_word(lg: LambekGrammar, w: tuple) -> None:
    if not w:
        raise GrammarError("the empty string is outside every language here")
    for sym in w:
        if sym not in lg.lexicon:
            raise GrammarError(f"unknown symbol {sym!r}")


def _lexicon_in(lg: LambekGrammar, restriction: TypeRestriction) -> bool:
    return all(in_fragment(t, restriction) for t in lg.all_types())


_TP_SLASH = TypeRestriction(frozenset({"/"}))
_TP_LINEAR_1 = TypeRestriction(frozenset({"/", "\\"}), max_degree=1)
_TP_SLASH_1 = TypeRestriction(frozenset({"/"}), max_degree=1)


class LambekDecider:
    """Membership decider for one lexicon under one configuration.

    method "auto" runs a chart over the word with lexicon choices folded in
    (per-span results are shared across type assignments, and across calls);
    "recognizer" and "prove" enumerate type assignments one by one and hand
    each to the fragment recognizer or the prover.  All three agree; the
    slower routes exist to keep each other honest in tests.
    """

    def __init__(
        self,
        lg: LambekGrammar,
        config: Optional[CalculusConfig] = None,
        method: str = "auto",
    ):
        self.grammar = lg
        self.config = config or infer_config(lg)
        if method not in ("auto", "recognizer", "prove"):
            raise ValueError(f"unknown method {method!r}")
        self.method = method
        self._engine = ProofEngine()
        self._span_memo: dict = {}
        restriction = self.config.type_restriction
        for t in lg.all_types():
            if not in_fragment(t, restriction):
                raise FragmentError(
                    f"lexicon type {t} falls outside the configured restriction"
                )
        rules = self.config.enabled_rules
        self._fragment = "general"
        if rules and rules <= {Rule.SLASH_L, Rule.BACK_L}:
            if Rule.SLASH_L in rules and _lexicon_in(lg, _TP_SLASH_1):
                self._fragment = "regular"
            elif Rule.SLASH_L in rules and _lexicon_in(lg, _TP_SLASH):
                # \L cannot fire without a \ type, so /-only lexicons stay exact
                self._fragment = "slash"
            elif rules == {Rule.SLASH_L, Rule.BACK_L} and _lexicon_in(lg, _TP_LINEAR_1):
                self._fragment = "linear"

    def __call__(self, w: Word, max_steps: Optional[int] = None) -> bool:
        word = _as_word(w)
        _check_word(self.grammar, word)
        budget = _Budget(max_steps)
        if self.method == "auto" and self._fragment != "general":
            return self._chart_member(word, budget)
        return self._assignment_member(word, budget, self.method)

    # ---- chart route: lexicon choices resolved per span

    def _chart_member(self, word: tuple, budget: _Budget) -> bool:
        if self._fragment == "regular":
            return self._nfa_member(word, budget)
        if self._fragment == "slash":
            return self._slash_span(word, self.grammar.target, budget)
        return self._linear_span(word, self.grammar.target, budget)

    def _nfa_member(self, word: tuple, budget: _Budget) -> bool:
        lex = self.grammar.lexicon
        want = {self.grammar.distinguished}
        for sym in word[:-1]:
            budget.spend()
            want = {
                t.arg.name
                for t in lex[sym]
                if type(t) is Slash and t.result.name in want
            }
            if not want:
                return False
        return any(
            type(t) is Primitive and t.name in want for t in lex[word[-1]]
        )

    def _slash_span(self, word: tuple, target: LambekType, budget: _Budget) -> bool:
        memo = self._span_memo
        lex = self.grammar.lexicon

        def reduce(i: int, j: int, goal: LambekType) -> bool:
            key = (word[i:j], goal)
            hit = memo.get(key)
            if hit is not None:
                return hit
            budget.spend()
            value = False
            for t in lex[word[i]]:
                for head, args in spine_decompositions(t):
                    if head == goal and match(i + 1, j, args):
                        value = True
                        break
                if value:
                    break
            memo[key] = value
            return value

        def match(i: int, j: int, args: tuple) -> bool:
            if not args:
                return i == j
            key = (word[i:j], args)
            hit = memo.get(key)
            if hit is not None:
                return hit
            budget.spend()
            value = False
            first, rest = args[0], args[1:]
            for m in range(i + 1, j - len(rest) + 1):
                if reduce(i, m, first) and match(m, j, rest):
                    value = True
                    break
            memo[key] = value
            return value

        return reduce(0, len(word), target)

    def _linear_span(self, word: tuple, target: Primitive, budget: _Budget) -> bool:
        memo = self._span_memo
        lex = self.grammar.lexicon

        def span(i: int, j: int, goal: Primitive) -> bool:
            key = (word[i:j], goal)
            hit = memo.get(key)
            if hit is not None:
                return hit
            budget.spend()
            value = False
            if j - i == 1 and any(t == goal for t in lex[word[i]]):
                value = True
            if not value and j - i >= 2:
                for t in lex[word[i]]:
                    if type(t) is Slash and t.result == goal and span(i + 1, j, t.arg):
                        value = True
                        break
                if not value:
                    for t in lex[word[j - 1]]:
                        if (
                            type(t) is Backslash
                            and t.result == goal
                            and span(i, j - 1, t.arg)
                        ):
                            value = True
                            break
            memo[key] = value
            return value

        return span(0, len(word), target)

    # ---- assignment route: every element of the pointwise extension

    def _assignments(self, word: tuple) -> Iterator[tuple]:
        return itertools.product(*(self.grammar.lexicon[sym] for sym in word))

    def _assignment_member(self, word: tuple, budget: _Budget, method: str) -> bool:
        target = self.grammar.target
        config = self.config
        if method == "recognizer":
            recognize = {
                "slash": reduce_slash,
                "linear": reduce_linear,
                "regular": reduce_regular,
            }.get(self._fragment)
            if recognize is None:
                raise FragmentError(
                    "no recognizer covers this lexicon/configuration; use prove"
                )
        else:
            recognize = None
        for assignment in self._assignments(word):
            budget.spend()
            if recognize is not None:
                ok = recognize(assignment, target)
            else:
                ok = self._engine.prove(Sequent(assignment, target), config).provable
            if ok:
                return True
        return False

    def find_proof(self, w: Word):
        """A derivation witnessing membership, or None.  Searches type
        assignments in canonical order and proves the first that works."""
        word = _as_word(w)
        _check_word(self.grammar, word)
        target = self.grammar.target
        for assignment in self._assignments(word):
            result = self._engine.prove(Sequent(assignment, target), self.config)
            if result.provable:
                return result.proof
        return None


def lambek_member(
    lg: LambekGrammar,
    w: Word,
    config: Optional[CalculusConfig] = None,
    method: str = "auto",
    max_steps: Optional[int] = None,
) -> bool:
    """Decide whether some type assignment for the string reduces to the
    distinguished type.  Build a LambekDecider directly to reuse span
    results across many strings."""
    return LambekDecider(lg, config, method)(w, max_steps)


# --------------------------------------------------------------------------
# cross-checking


@dataclass
class CrosscheckReport:
    max_length: int
    strings_tested: int
    agreements: int
    first_disagreement: Optional[tuple]  # (word, verdict_a, verdict_b)
    elapsed_seconds: float

    @property
    def agreed(self) -> bool:
        return self.first_disagreement is None

    def __str__(self) -> str:
        n_dis = self.strings_tested - self.agreements
        msg = f"{self.strings_tested} strings, {n_dis} disagreements"
        if self.first_disagreement is not None:
            word, va, vb = self.first_disagreement
            msg += f"; first at {''.join(word)!r} ({va} vs {vb})"
        return msg


def crosscheck(
    decider_a: Callable,
    decider_b: Callable,
    alphabet: Iterable[str],
    max_len: int,
    exhaustive: bool = False,
    step_budget: Optional[int] = None,
) -> CrosscheckReport:
    """Compare two membership deciders on every string up to max_len.

    Stops at the first disagreement unless exhaustive is set.  When a step
    budget is given it is passed through to the deciders per string; a
    budget overrun propagates as an error, never as a verdict.
    """
    started = time.perf_counter()
    tested = agreements = 0
    first = None
    for word in enumerate_strings(alphabet, max_len):
        if step_budget is None:
            va, vb = decider_a(word), decider_b(word)
        else:
            va = decider_a(word, max_steps=step_budget)
            vb = decider_b(word, max_steps=step_budget)
        tested += 1
        if va == vb:
            agreements += 1
        elif first is None:
            first = (word, va, vb)
            if not exhaustive:
                break
    return CrosscheckReport(
        max_length=max_len,
        strings_tested=tested,
        agreements=agreements,
        first_disagreement=first,
        elapsed_seconds=time.perf_counter() - started,
    )
