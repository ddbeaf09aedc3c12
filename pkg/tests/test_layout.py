import random
from decimal import Decimal

from azed.layout import (
    AtomBox,
    BulletListBox,
    GlyphRun,
    Line,
    Rect,
    SideBySideBox,
    apply_templates,
    element_bbox,
    hit_test,
    layout,
    scene_to_json,
    to_svg,
)
from azed.model import Num, Point, Rule, Side, Var, Wildcard, iter_paths, node_at, replace_at
from azed.parser import parse

from .treegen import random_score_expr

D = Decimal

OPPOSITION = "each-of(localised-discourse(@Lssp, dog()), localised-discourse(@Rssp, nice-kind()))"


def runs(scene):
    return [el for el in scene.elements if isinstance(el, GlyphRun)]


def test_templates_worked_example(reg):
    box = apply_templates(reg, parse(OPPOSITION))
    assert isinstance(box, SideBySideBox)
    assert box.sep == "↔"
    assert box.left == AtomBox("\U0001F415", (0, 1))
    assert box.right == AtomBox("\U0001F493", (1, 1))


def test_templates_atom(reg):
    assert apply_templates(reg, parse("dog()")) == AtomBox("\U0001F415", ())


def test_templates_no_match_on_same_point(reg):
    both_right = parse(
        "each-of(localised-discourse(@Rssp, dog()), localised-discourse(@Rssp, nice-kind()))"
    )
    assert isinstance(apply_templates(reg, both_right), BulletListBox)


def test_layout_atom_metrics(reg):
    scene = layout(reg, parse("dog()"))
    assert (scene.width, scene.height) == (D(1), D(1))
    assert runs(scene) == [GlyphRun(D(0), D(0), D(1), "\U0001F415", ())]


def test_layout_e1_arrangement(reg, e1):
    scene = layout(reg, e1)
    by_text = {r.text: r for r in runs(scene)}
    dog, eq, tick, heart = (
        by_text["\U0001F415"], by_text["="], by_text["✓"], by_text["\U0001F493"]
    )
    assert dog.x < eq.x < heart.x  # left-to-right
    # the tick sits strictly above the heart and overlaps it horizontally
    tick_bottom = tick.y + tick.size
    assert tick_bottom <= heart.y
    assert tick.x < heart.x + heart.size and heart.x < tick.x + tick.size


def test_layout_context_bar(reg):
    scene = layout(reg, parse("context(dog(), nice-kind())"))
    lines = [el for el in scene.elements if isinstance(el, Line)]
    assert len(lines) == 1
    bar = lines[0]
    assert bar.x1 == D(0) and bar.x2 == scene.width and bar.y1 == bar.y2
    by_text = {r.text: r for r in runs(scene)}
    assert by_text["\U0001F415"].y + 1 <= bar.y1 <= by_text["\U0001F493"].y


def test_svg_atom(reg):
    svg = to_svg(layout(reg, parse("dog()")))
    assert 'viewBox="0 0 16 16"' in svg
    assert svg.count("<text") == 1
    assert "\U0001F415" in svg


def test_svg_empty_scene():
    from azed.layout import SceneGraph

    svg = to_svg(SceneGraph(D(0), D(0), ()))
    assert 'viewBox="0 0 0 0"' in svg
    assert "<text" not in svg and "<rect" not in svg


def test_svg_deterministic(reg, e1):
    assert to_svg(layout(reg, e1)) == to_svg(layout(reg, e1))


def test_svg_carries_source_paths(reg, e1):
    svg = to_svg(layout(reg, e1))
    assert 'data-path=""' in svg
    assert 'data-path="1.0"' in svg


def test_hit_test_single_atom(reg):
    scene = layout(reg, parse("dog()"))
    assert hit_test(scene, D("0.5"), D("0.5")) == ()


def test_hit_test_heart_resolves_to_nested_path(reg, e1):
    scene = layout(reg, e1)
    heart = next(r for r in runs(scene) if r.text == "\U0001F493")
    assert hit_test(scene, heart.x + D("0.5"), heart.y + D("0.5")) == (1, 0)


def test_hit_test_tick_selects_overmark_rule(reg, e1):
    scene = layout(reg, e1)
    tick = next(r for r in runs(scene) if r.text == "✓")
    assert hit_test(scene, tick.x + D("0.25"), tick.y + D("0.25")) == (1,)


def test_hit_test_outside(reg, e1):
    scene = layout(reg, e1)
    assert hit_test(scene, D(-1), D(-1)) is None
    assert hit_test(scene, scene.width + 1, D(0)) is None


def test_scene_json_shape(reg):
    data = scene_to_json(layout(reg, parse("dog()")))
    assert set(data) == {"width", "height", "elements"}
    kinds = {el["kind"] for el in data["elements"]}
    assert kinds == {"rect", "glyphrun"}
    assert all("source" in el for el in data["elements"])


def _source_bboxes(scene):
    boxes = {}
    for el in scene.elements:
        x0, y0, x1, y1 = element_bbox(el)
        if el.source in boxes:
            a, b, c, d = boxes[el.source]
            boxes[el.source] = (min(a, x0), min(b, y0), max(c, x1), max(d, y1))
        else:
            boxes[el.source] = (x0, y0, x1, y1)
    return boxes


def _check_scene(scene, expr):
    # every element inside the canvas
    for el in scene.elements:
        x0, y0, x1, y1 = element_bbox(el)
        assert 0 <= x0 <= x1 <= scene.width
        assert 0 <= y0 <= y1 <= scene.height
    # coverage: every expression node appears as a source, and vice versa
    boxes = _source_bboxes(scene)
    assert set(boxes) == {path for path, _ in iter_paths(expr)}
    # ancestor bounding boxes contain descendants
    for path, bbox in boxes.items():
        for other, obox in boxes.items():
            if len(other) > len(path) and other[: len(path)] == path:
                assert bbox[0] <= obox[0] and bbox[1] <= obox[1]
                assert bbox[2] >= obox[2] and bbox[3] >= obox[3]


def _random_tree_with_oppositions(rng, reg):
    expr = random_score_expr(rng, reg, depth=4)
    if rng.random() < 0.5:
        # graft an opposition so the template path is exercised
        opposition = Rule(
            "each-of",
            (
                Rule("localised-discourse", (Point("Lssp"), random_score_expr(rng, reg, 1))),
                Rule("localised-discourse", (Point("Rssp"), random_score_expr(rng, reg, 1))),
            ),
        )
        rule_paths = [p for p, n in iter_paths(expr) if isinstance(n, Rule)]
        expr = replace_at(expr, rng.choice(rule_paths), opposition)
    return expr


def test_layout_invariants_on_random_trees(reg):
    rng = random.Random(1234)
    for _ in range(150):
        expr = _random_tree_with_oppositions(rng, reg)
        scene = layout(reg, expr)
        assert layout(reg, expr) == scene  # determinism
        _check_scene(scene, expr)


def _reference_match(pattern, expr, bindings):
    if isinstance(pattern, Wildcard):
        return True
    if isinstance(pattern, Var):
        if pattern.name in bindings:
            return bindings[pattern.name] == expr
        bindings[pattern.name] = expr
        return True
    if isinstance(pattern, Rule) and isinstance(expr, Rule):
        return (
            pattern.name == expr.name
            and len(pattern.children) == len(expr.children)
            and all(
                _reference_match(p, e, bindings)
                for p, e in zip(pattern.children, expr.children)
            )
        )
    return pattern == expr


def _compound_sources(box):
    found = set()
    stack = [box]
    while stack:
        node = stack.pop()
        if isinstance(node, SideBySideBox):
            found.add(node.source)
            stack += [node.left, node.right]
        else:
            for name in ("left", "right", "child", "top", "bottom"):
                if hasattr(node, name):
                    stack.append(getattr(node, name))
            if hasattr(node, "items"):
                stack += list(node.items)
            if hasattr(node, "children"):
                stack += list(node.children)
    return found


def test_template_soundness_against_brute_scan(reg):
    rng = random.Random(77)
    for _ in range(150):
        expr = _random_tree_with_oppositions(rng, reg)
        emitted = _compound_sources(apply_templates(reg, expr))
        scanned = {
            path
            for path, node in iter_paths(expr)
            if any(_reference_match(t.pattern, node, {}) for t in reg.templates)
        }
        assert emitted == scanned
