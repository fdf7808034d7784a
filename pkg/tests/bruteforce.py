"""A deliberately naive provability oracle.

Independent of the engine under test: no memo, no failure cache, premises
explored right-to-left and longest-split-first so any search-order bug in
the engine cannot be mirrored here.  Termination: every premise drops one
connective.  Only usable on small sequents, which is the point.
"""

from lambekit import Backslash, Primitive, Product, Rule, Sequent, Slash


def provable(seq: Sequent, rules: frozenset) -> bool:
    ant, goal = seq.antecedent, seq.consequent
    if len(ant) == 1 and ant[0] == goal:
        return True
    if Rule.SLASH_R in rules and type(goal) is Slash:
        if provable(Sequent(ant + (goal.arg,), goal.result), rules):
            return True
    if Rule.BACK_R in rules and type(goal) is Backslash:
        if provable(Sequent((goal.arg,) + ant, goal.result), rules):
            return True
    if Rule.PROD_R in rules and type(goal) is Product:
        for k in range(len(ant) - 1, 0, -1):
            if provable(Sequent(ant[:k], goal.left), rules) and provable(
                Sequent(ant[k:], goal.right), rules
            ):
                return True
    for i in range(len(ant) - 1, -1, -1):
        t = ant[i]
        if Rule.PROD_L in rules and type(t) is Product:
            premise = Sequent(ant[:i] + (t.left, t.right) + ant[i + 1 :], goal)
            if provable(premise, rules):
                return True
        if Rule.SLASH_L in rules and type(t) is Slash:
            for j in range(len(ant), i + 1, -1):
                if provable(Sequent(ant[i + 1 : j], t.arg), rules) and provable(
                    Sequent(ant[:i] + (t.result,) + ant[j:], goal), rules
                ):
                    return True
        if Rule.BACK_L in rules and type(t) is Backslash:
            for j in range(0, i):
                if provable(Sequent(ant[j:i], t.arg), rules) and provable(
                    Sequent(ant[:j] + (t.result,) + ant[i + 1 :], goal), rules
                ):
                    return True
    return False
