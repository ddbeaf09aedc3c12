"""Built-in registry and sample document shipped with the toolkit."""

from __future__ import annotations

from functools import lru_cache

from .registry import Registry, load_registry

DEFAULT_REGISTRY_TEXT = """\
# Built-in rule set: signing-space points, lexical and structural rules,
# and one compound layout template.  Timing constants are tunable data.

point Lssp
point Rssp
point abdomen-hi
point abdomen-lo

rule dog() = block({rhand,lhand}, "lsf:dog", 1.0) glyph atom "U+1F415"
rule nice-kind() = block({rhand,lhand}, "lsf:nice-kind", 1.0) glyph atom "U+1F493"
rule non-subjectivity(x: score) = sync(x, block({mouth}, "lip-pout", dur(x) + 0.3), -0.15) glyph overmark "U+2713"
rule info-about(a: score, b: score) = sync(seq(a, b), block({eyes}, "el:cl", 0.2), dur(a) - 0.1) glyph infix "U+003D"
rule context(c: score, f: score) = seq(c, f) glyph contextbar
rule each-of(items: score... min 2) = seq(items) glyph bulletlist "U+2022"
rule localised-discourse(p: point, d: score) = sync(d, block({torso}, "orient:{p}", dur(d)), 0.0) glyph nameframe
rule scar-between(p1: point, p2: point) = block({rhand}, "scar:{p1}->{p2}", 1.2) glyph nameframe

template opposition = each-of(localised-discourse(@Lssp, ?a), localised-discourse(@Rssp, ?b)) glyph sidebyside "U+2194"
"""

# Ten-piece sample story, one top-level expression per line; evaluates to
# roughly 77 seconds of signing with the default timing constants.
SAMPLE_STORY_TEXT = """\
context(each-of(localised-discourse(@Lssp, context(dog(), nice-kind())), localised-discourse(@Rssp, info-about(nice-kind(), dog()))), info-about(each-of(dog(), nice-kind()), non-subjectivity(nice-kind())))
context(info-about(dog(), each-of(nice-kind(), dog())), each-of(nice-kind(), scar-between(@abdomen-hi, @abdomen-lo), dog(), non-subjectivity(dog()), nice-kind()))
each-of(localised-discourse(@Lssp, info-about(dog(), each-of(nice-kind(), dog()))), localised-discourse(@Rssp, context(non-subjectivity(dog()), each-of(nice-kind(), dog()))))
info-about(info-about(dog(), each-of(nice-kind(), dog())), context(scar-between(@abdomen-hi, @abdomen-lo), each-of(nice-kind(), non-subjectivity(dog()), nice-kind())))
each-of(info-about(dog(), nice-kind()), scar-between(@abdomen-hi, @abdomen-lo), non-subjectivity(nice-kind()), context(dog(), each-of(dog(), nice-kind())), nice-kind())
context(context(each-of(dog(), nice-kind()), info-about(nice-kind(), dog())), info-about(scar-between(@abdomen-hi, @abdomen-lo), each-of(non-subjectivity(dog()), nice-kind())))
each-of(localised-discourse(@Lssp, each-of(dog(), nice-kind(), scar-between(@abdomen-hi, @abdomen-lo))), localised-discourse(@Rssp, each-of(nice-kind(), non-subjectivity(dog()), dog(), nice-kind())))
info-about(each-of(dog(), scar-between(@abdomen-hi, @abdomen-lo), nice-kind()), context(info-about(nice-kind(), dog()), each-of(non-subjectivity(nice-kind()), dog())))
context(localised-discourse(@Lssp, info-about(dog(), context(dog(), nice-kind()))), each-of(non-subjectivity(nice-kind()), scar-between(@abdomen-hi, @abdomen-lo), info-about(nice-kind(), dog()), dog()))
info-about(context(each-of(dog(), nice-kind(), dog()), each-of(nice-kind(), scar-between(@abdomen-hi, @abdomen-lo), nice-kind())), non-subjectivity(scar-between(@abdomen-hi, @abdomen-lo)))
"""


@lru_cache(maxsize=1)
def default_registry() -> Registry:
    return load_registry(DEFAULT_REGISTRY_TEXT)
