"""Seeded generators for well-typed expressions and search patterns."""

from __future__ import annotations

import random
from decimal import Decimal

from azed.model import Num, Point, Rule, Side, Var, Wildcard, children_of
from azed.registry import ParamType, Registry


def random_score_expr(rng: random.Random, reg: Registry, depth: int, budget: list[int] | None = None) -> Rule:
    """Random expression of result type score, depth-bounded with a node
    budget so wide rules cannot explode."""
    if budget is None:
        budget = [60]
    budget[0] -= 1
    leaf_rules = [r for r in reg.rules.values() if not r.params and r.variadic is None]
    if depth <= 0 or budget[0] <= 0:
        return Rule(rng.choice(leaf_rules).name)
    rdef = rng.choice(list(reg.rules.values()))
    children = []
    for param in rdef.params:
        children.append(_argument(rng, reg, param.type, depth, budget))
    if rdef.variadic is not None:
        for _ in range(rdef.variadic_min + rng.randrange(0, 2)):
            children.append(_argument(rng, reg, rdef.variadic.type, depth, budget))
    return Rule(rdef.name, tuple(children))


def _argument(rng, reg, ptype, depth, budget):
    if ptype == ParamType.SCORE:
        return random_score_expr(rng, reg, depth - 1, budget)
    budget[0] -= 1
    if ptype == ParamType.POINT:
        return Point(rng.choice(reg.points))
    if ptype == ParamType.NUMBER:
        return Num(Decimal(rng.randrange(-1000, 10000)) / 100)
    return Side(rng.choice(["left", "right"]))


def random_pattern(rng: random.Random, reg: Registry, depth: int = 4):
    """A pattern derived from a random tree: some subtrees abstracted into
    wildcards or variables so matches actually occur."""
    base = random_score_expr(rng, reg, depth)
    variables = ["x", "y", "z"]

    def abstract(node):
        roll = rng.random()
        if roll < 0.15:
            return Wildcard()
        if roll < 0.3:
            return Var(rng.choice(variables))
        if isinstance(node, Rule):
            return Rule(node.name, tuple(abstract(c) for c in node.children))
        return node

    return abstract(base)
